use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A base point of a blowup of `P^1 x P^1`, in the affine chart `u = s = 1` with
/// `v = a` and `t = b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BasePoint {
    pub a: u64,
    pub b: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SurfaceKind {
    ProjectivePlane,
    ProjectiveLine,
    /// Hirzebruch surface with invariant `e`, Cox variables `u, v, s, t`.
    Hirzebruch {
        e: u32,
    },
    /// `P^1 x P^1` blown up at the listed points.
    QuadricBlowup {
        points: Vec<BasePoint>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
    pub coordinates: Vec<String>,
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SurfaceKind::ProjectivePlane => write!(f, "P2"),
            SurfaceKind::ProjectiveLine => write!(f, "P1"),
            SurfaceKind::Hirzebruch { e } => write!(f, "Sigma_{e}"),
            SurfaceKind::QuadricBlowup { points } => write!(f, "Bl_{}(P1xP1)", points.len()),
        }
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

impl SurfaceModel {
    pub fn plane() -> Self {
        SurfaceModel { kind: SurfaceKind::ProjectivePlane, coordinates: names(&["x", "y", "z"]) }
    }

    pub fn line() -> Self {
        SurfaceModel { kind: SurfaceKind::ProjectiveLine, coordinates: names(&["x", "y"]) }
    }

    pub fn hirzebruch(e: u32) -> Self {
        SurfaceModel { kind: SurfaceKind::Hirzebruch { e }, coordinates: names(&["u", "v", "s", "t"]) }
    }

    /// Rejects repeated points and pairs on a common ruling line.
    pub fn quadric_blowup(points: Vec<BasePoint>) -> Result<Self> {
        for (i, x) in points.iter().enumerate() {
            for y in &points[..i] {
                if x.a == y.a || x.b == y.b {
                    return Err(Error::InvalidSurface(format!(
                        "base points {x:?} and {y:?} lie on a common ruling line"
                    )));
                }
            }
        }
        Ok(SurfaceModel { kind: SurfaceKind::QuadricBlowup { points }, coordinates: names(&["u", "v", "s", "t"]) })
    }

    pub fn nvars(&self) -> usize {
        self.coordinates.len()
    }

    /// Hirzebruch invariant when the surface is ruled (`0` for the blowup of `P^1 x P^1`).
    pub fn ruled_invariant(&self) -> Option<u32> {
        match &self.kind {
            SurfaceKind::Hirzebruch { e } => Some(*e),
            SurfaceKind::QuadricBlowup { .. } => Some(0),
            _ => None,
        }
    }

    pub fn base_points(&self) -> &[BasePoint] {
        match &self.kind {
            SurfaceKind::QuadricBlowup { points } => points,
            _ => &[],
        }
    }

    pub fn check_class(&self, class: &DivisorClass) -> Result<()> {
        let ok = match (&self.kind, class) {
            (SurfaceKind::ProjectivePlane | SurfaceKind::ProjectiveLine, DivisorClass::Degree(_)) => true,
            (SurfaceKind::Hirzebruch { .. }, DivisorClass::Ruled { .. }) => true,
            (SurfaceKind::QuadricBlowup { points }, DivisorClass::Blowup { mults, .. }) => mults.len() == points.len(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ClassMismatch { class: class.to_string(), surface: self.to_string() })
        }
    }

    /// Canonical class: `-3H`, `-2H`, `-2C_0 - (2+e)f`, or `σ^*(-2,-2) + ΣE_i`.
    pub fn canonical_class(&self) -> DivisorClass {
        match &self.kind {
            SurfaceKind::ProjectivePlane => DivisorClass::Degree(-3),
            SurfaceKind::ProjectiveLine => DivisorClass::Degree(-2),
            SurfaceKind::Hirzebruch { e } => DivisorClass::Ruled { a: -2, b: -2 - *e as i64 },
            SurfaceKind::QuadricBlowup { points } => {
                DivisorClass::Blowup { a: -2, b: -2, mults: vec![-1; points.len()] }
            }
        }
    }

    /// Intersection number of two classes on the surface (degree product on `P^1`).
    pub fn intersection(&self, x: &DivisorClass, y: &DivisorClass) -> Result<i64> {
        self.check_class(x)?;
        self.check_class(y)?;
        Ok(match (x, y) {
            (DivisorClass::Degree(d1), DivisorClass::Degree(d2)) => match self.kind {
                SurfaceKind::ProjectiveLine => {
                    return Err(Error::Unsupported("intersection product on a curve".into()))
                }
                _ => d1 * d2,
            },
            (DivisorClass::Ruled { a, b }, DivisorClass::Ruled { a: c, b: d }) => {
                let e = self.ruled_invariant().unwrap_or(0) as i64;
                -e * a * c + a * d + b * c
            }
            (DivisorClass::Blowup { a, b, mults: m1 }, DivisorClass::Blowup { a: c, b: d, mults: m2 }) => {
                a * d + b * c - m1.iter().zip(m2).map(|(x, y)| x * y).sum::<i64>()
            }
            _ => unreachable!("checked above"),
        })
    }

    /// Arithmetic genus of a curve in `class` by adjunction: `(X.X + K.X)/2 + 1`.
    pub fn adjunction_genus(&self, class: &DivisorClass) -> Result<i64> {
        let k = self.canonical_class();
        let s = self.intersection(class, class)? + self.intersection(&k, class)?;
        if s % 2 != 0 {
            return Err(Error::Construction(format!("odd adjunction sum for {class}")));
        }
        Ok(s / 2 + 1)
    }
}

/// Divisor class in the basis of the surface: a degree on `P^2`/`P^1`; `aC_0 + bf` on
/// `Σ_e`; `σ^*(a, b) - Σ m_i E_i` on the blown-up quadric, where `(a, b)` means
/// `aC_0 + bf` on `Σ_0 = P^1 x P^1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DivisorClass {
    Degree(i64),
    Ruled { a: i64, b: i64 },
    Blowup { a: i64, b: i64, mults: Vec<i64> },
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorClass::Degree(d) => write!(f, "O({d})"),
            DivisorClass::Ruled { a, b } => write!(f, "{a}C0+{b}f"),
            DivisorClass::Blowup { a, b, mults } => write!(f, "({a},{b};{mults:?})"),
        }
    }
}

impl DivisorClass {
    /// `H_{a,b} = (a-1)C_0 + (b-1)f`.
    pub fn h_ab(a: i64, b: i64) -> Self {
        DivisorClass::Ruled { a: a - 1, b: b - 1 }
    }

    fn zip(&self, other: &DivisorClass, op: impl Fn(i64, i64) -> i64) -> Result<DivisorClass> {
        Ok(match (self, other) {
            (DivisorClass::Degree(x), DivisorClass::Degree(y)) => DivisorClass::Degree(op(*x, *y)),
            (DivisorClass::Ruled { a, b }, DivisorClass::Ruled { a: c, b: d }) => {
                DivisorClass::Ruled { a: op(*a, *c), b: op(*b, *d) }
            }
            (DivisorClass::Blowup { a, b, mults: m }, DivisorClass::Blowup { a: c, b: d, mults: n })
                if m.len() == n.len() =>
            {
                DivisorClass::Blowup {
                    a: op(*a, *c),
                    b: op(*b, *d),
                    mults: m.iter().zip(n).map(|(x, y)| op(*x, *y)).collect(),
                }
            }
            _ => return Err(Error::ClassMismatch { class: other.to_string(), surface: format!("class {self}") }),
        })
    }

    pub fn add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.zip(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.zip(other, |x, y| x - y)
    }

    pub fn scale(&self, q: i64) -> DivisorClass {
        match self {
            DivisorClass::Degree(d) => DivisorClass::Degree(q * d),
            DivisorClass::Ruled { a, b } => DivisorClass::Ruled { a: q * a, b: q * b },
            DivisorClass::Blowup { a, b, mults } => {
                DivisorClass::Blowup { a: q * a, b: q * b, mults: mults.iter().map(|m| q * m).collect() }
            }
        }
    }

    pub fn zero_like(&self) -> DivisorClass {
        self.scale(0)
    }

    /// Vanishing orders imposed at blowup base points, `max(0, m_i)`.
    pub fn point_orders(&self) -> Vec<u32> {
        match self {
            DivisorClass::Blowup { mults, .. } => mults.iter().map(|&m| m.max(0) as u32).collect(),
            _ => vec![],
        }
    }
}
