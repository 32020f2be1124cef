//! Monomial bases of section spaces and exterior-power index combinatorics.

mod monomial;
mod surface;
mod wedge;

pub use monomial::{monomial_basis, ruled_section_count, Monomial, MAX_VARS};
pub use surface::{BasePoint, DivisorClass, SurfaceKind, SurfaceModel};
pub(crate) use wedge::rank_unchecked;
pub use wedge::{binomial, subsets, wedge_insert, wedge_rank, wedge_rank_in, wedge_unrank, WedgeIndex};
