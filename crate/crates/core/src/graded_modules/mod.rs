//! Truncated graded modules: ambient section rings, restrictions to curves, and
//! subrings of sections vanishing at points.

mod branch;
mod module;
mod points;
mod poly;
mod series;

pub use branch::{local_branch_expansion, BranchExpansion};
pub use module::{
    build_ambient_module, build_point_truncated_module, build_restriction_module, evaluation_split, random_section,
    section_space, EvaluationSplit, GradedModule, ModuleLabel, Piece, RestrictionData, TruncationPoint,
};
pub use points::{find_colinear_points, find_rational_points, normalize, PointOnCurve};
pub use poly::{multiply_into, MonomialSpace, Poly};
pub use series::{powers, substitute, Series};
