//! Koszul differentials, cohomology dimensions, Betti tables and property (M_k).

mod cohomology;
mod differential;

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

pub use cohomology::CohomologyBasis;
pub use differential::{assemble_differential, column_index, differential_nnz};

use crate::error::{Error, Result};
use crate::ff_linalg::{rank, Prime, PrimeFieldMatrix};
use crate::graded_modules::{build_ambient_module, GradedModule};
use crate::multilinear::{binomial, DivisorClass, SurfaceModel};

/// Dimensions attached to one Koszul cohomology group `K_{p,q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KoszulCell {
    pub p: usize,
    pub q: usize,
    pub dim_domain: usize,
    pub dim_kernel: usize,
    pub rank_incoming: usize,
    pub dim_k: usize,
}

/// A module together with a cache of differential ranks, so adjacent cells share work.
pub struct KoszulComplex<'a> {
    pub module: &'a GradedModule,
    ranks: Mutex<HashMap<(usize, usize), usize>>,
}

impl<'a> KoszulComplex<'a> {
    pub fn new(module: &'a GradedModule) -> Self {
        KoszulComplex { module, ranks: Mutex::new(HashMap::new()) }
    }

    fn n(&self) -> usize {
        self.module.n_generators()
    }

    /// `dim B_q ⊗ Λ^p V`, zero outside the stored range.
    pub fn term_dim(&self, p: usize, q: usize) -> usize {
        self.module.dim(q) * binomial(self.n(), p)
    }

    /// Rank of `d_{p,q}`, zero when its domain or target is zero.
    pub fn rank(&self, p: usize, q: usize) -> Result<usize> {
        if p == 0 || p > self.n() || self.term_dim(p, q) == 0 || self.module.dim(q + 1) == 0 {
            if q >= self.module.action.len() && self.term_dim(p, q) > 0 && p > 0 {
                return Err(Error::Window { p, q, reason: "outgoing differential not stored".into() });
            }
            return Ok(0);
        }
        if let Some(&r) = self.ranks.lock().expect("rank cache").get(&(p, q)) {
            return Ok(r);
        }
        let r = rank(&assemble_differential(self.module, p, q)?);
        self.ranks.lock().expect("rank cache").insert((p, q), r);
        Ok(r)
    }

    pub fn cell(&self, p: usize, q: usize) -> Result<KoszulCell> {
        let dim_domain = self.term_dim(p, q);
        let dim_kernel = dim_domain - self.rank(p, q)?;
        let rank_incoming = if q == 0 { 0 } else { self.rank(p + 1, q - 1)? };
        Ok(KoszulCell { p, q, dim_domain, dim_kernel, rank_incoming, dim_k: dim_kernel - rank_incoming })
    }
}

pub fn koszul_dimension(module: &GradedModule, p: usize, q: usize) -> Result<KoszulCell> {
    KoszulComplex::new(module).cell(p, q)
}

/// Map `(p, q) → dim K_{p,q}` over a rectangular window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    pub label: String,
    pub prime: Prime,
    #[serde(with = "cell_list")]
    pub entries: BTreeMap<(usize, usize), usize>,
}

mod cell_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        p: usize,
        q: usize,
        dim: usize,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<(usize, usize), usize>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().map(|(&(p, q), &dim)| Entry { p, q, dim }).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, usize), usize>, D::Error> {
        Ok(Vec::<Entry>::deserialize(d)?.into_iter().map(|e| ((e.p, e.q), e.dim)).collect())
    }
}

impl BettiTable {
    pub fn get(&self, p: usize, q: usize) -> Option<usize> {
        self.entries.get(&(p, q)).copied()
    }
}

pub fn betti_table(
    module: &GradedModule,
    p_range: impl IntoIterator<Item = usize> + Clone,
    q_range: impl IntoIterator<Item = usize>,
) -> Result<BettiTable> {
    let cx = KoszulComplex::new(module);
    let mut entries = BTreeMap::new();
    for q in q_range {
        for p in p_range.clone() {
            entries.insert((p, q), cx.cell(p, q)?.dim_k);
        }
    }
    Ok(BettiTable { label: describe(module), prime: module.prime, entries })
}

pub fn describe(module: &GradedModule) -> String {
    let l = &module.label;
    let mut s = format!("{} module on {}, twist {}, polarization {}", l.kind, l.surface, l.twist, l.polarization);
    for d in &l.detail {
        s.push_str("; ");
        s.push_str(d);
    }
    s
}

/// Checks `dim B_0 = 1` and `K_{p,0} = 0` for `1 <= p <= dim V`.
pub fn standing_hypotheses(module: &GradedModule) -> Result<()> {
    if module.dim(0) != 1 {
        return Err(Error::Hypothesis(format!("dim B_0 = {} instead of 1", module.dim(0))));
    }
    let cx = KoszulComplex::new(module);
    for p in 1..=module.n_generators() {
        let c = cx.cell(p, 0)?;
        if c.dim_k != 0 {
            return Err(Error::Hypothesis(format!("K_{{{p},0}} has dimension {}", c.dim_k)));
        }
    }
    Ok(())
}

/// Outcome of checking `K_{p,1} = 0` for `p >= h^0 L - k - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MkVerdict {
    pub k: usize,
    pub h0: usize,
    pub threshold: i64,
    pub verdict: bool,
    /// `(p, dim K_{p,1})` over the checked window.
    pub witnesses: Vec<(usize, usize)>,
}

/// Decides property (M_k) for a restriction module over `p ∈ [max(1, h0 - k - 1), dim V - 1]`.
pub fn check_mk(module: &GradedModule, k: usize) -> Result<MkVerdict> {
    let data = module
        .restriction
        .as_ref()
        .ok_or_else(|| Error::Provenance("module was not built by restriction to a curve".into()))?;
    if !data.a0_is_constants || !data.a1_identified {
        return Err(Error::Provenance(format!(
            "degree 0/1 pieces not identified with the curve's sections (A_0 constants: {}, A_1 identified: {})",
            data.a0_is_constants, data.a1_identified
        )));
    }
    let threshold = data.h0 as i64 - k as i64 - 1;
    let start = threshold.max(1) as usize;
    let n = module.n_generators();
    let cx = KoszulComplex::new(module);
    let mut witnesses = Vec::new();
    for p in start..n {
        witnesses.push((p, cx.cell(p, 1)?.dim_k));
    }
    let verdict = witnesses.iter().all(|&(_, d)| d == 0);
    Ok(MkVerdict { k, h0: data.h0, threshold, verdict, witnesses })
}

/// Result of the alternating-sum check along one weight strand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCheck {
    pub weight: usize,
    pub chain_side: i64,
    pub cohomology_side: i64,
    pub passed: bool,
}

/// Compares `Σ_q (-1)^q dim B_q ⊗ Λ^{l-q} V` with `Σ_q (-1)^q dim H_q` along the strand
/// `B_0 ⊗ Λ^l V → ... → B_l ⊗ Λ^0 V`, where `H_q` is computed as
/// `dim ker d_out - dim (im d_in ∩ ker d_out)`. The intersection term uses
/// `rank(d_out ∘ d_in)`, so a failure of `d ∘ d = 0` shows up as a mismatch.
pub fn euler_check(module: &GradedModule, l: usize) -> Result<EulerCheck> {
    if l > module.qmax() {
        return Err(Error::Window { p: 0, q: l, reason: format!("strand of weight {l} needs B_{l}") });
    }
    let n = module.n_generators();
    let mut chain = 0i64;
    let mut coh = 0i64;
    let mut mats: Vec<Option<PrimeFieldMatrix>> = Vec::new();
    for q in 0..=l {
        let p = l - q;
        mats.push(if p >= 1 && p <= n && q < module.action.len() {
            Some(assemble_differential(module, p, q)?)
        } else {
            None
        });
    }
    for q in 0..=l {
        let p = l - q;
        if p > n {
            continue;
        }
        let dim = (module.dim(q) * binomial(n, p)) as i64;
        let sign = if q % 2 == 0 { 1 } else { -1 };
        chain += sign * dim;
        let d_out = mats[q].as_ref();
        let d_in = if q > 0 { mats[q - 1].as_ref() } else { None };
        let ker = dim - d_out.map_or(0, |m| rank(m) as i64);
        let img = d_in.map_or(0, |m| rank(m) as i64);
        let lost = match (d_out, d_in) {
            (Some(o), Some(i)) => rank(&o.matmul(i)?) as i64,
            _ => 0,
        };
        coh += sign * (ker - (img - lost));
    }
    Ok(EulerCheck { weight: l, chain_side: chain, cohomology_side: coh, passed: chain == coh })
}

/// One row of the duality comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityRow {
    pub p: usize,
    pub k_p1: usize,
    pub dual_index: i64,
    pub k_dual: usize,
}

/// Compares `dim K_{p,1}(P^2, O(k))` with `dim K_{r-p-2,2}(P^2, O(-3), O(k))` for
/// `p = 0..=r`, where `r + 1 = h^0 O(k)`; groups with negative index are zero.
pub fn duality_instance_check(prime: Prime, k: i64) -> Result<(bool, Vec<DualityRow>)> {
    if !(2..=3).contains(&k) {
        return Err(Error::Config(format!("duality instance supports k in {{2, 3}}, got {k}")));
    }
    let s = SurfaceModel::plane();
    let b = build_ambient_module(prime, &s, &DivisorClass::Degree(0), &DivisorClass::Degree(k), 2)?;
    let t = build_ambient_module(prime, &s, &DivisorClass::Degree(-3), &DivisorClass::Degree(k), 3)?;
    let r = b.n_generators() - 1;
    let (cb, ct) = (KoszulComplex::new(&b), KoszulComplex::new(&t));
    let mut rows = Vec::new();
    for p in 0..=r {
        let dual_index = r as i64 - p as i64 - 2;
        let k_dual = if dual_index < 0 { 0 } else { ct.cell(dual_index as usize, 2)?.dim_k };
        rows.push(DualityRow { p, k_p1: cb.cell(p, 1)?.dim_k, dual_index, k_dual });
    }
    Ok((rows.iter().all(|r| r.k_p1 == r.k_dual), rows))
}
