//! Upper bounds for `Σ_g (rk(A1 ∩ A2^g) - 1)` and the family of pairs where the
//! spine-invariant bound beats the classical ones by a quadratic margin.

use serde::{Deserialize, Serialize};

use crate::core::BasedCore;
use crate::covering::{spine_invariants, SpineInvariants};
use crate::error::{Error, Result};
use crate::fold::Folder;
use crate::pullback::{fiber_product, intersection_rank_sum};

fn product_term(inv1: &SpineInvariants, inv2: &SpineInvariants) -> i64 {
    (inv1.rank as i64 - 1) * (inv2.rank as i64 - 1)
}

/// `H1 H2 - (H1 - n1i)(H2 - n2i)`, never negative.
pub fn paper_error_term(inv1: &SpineInvariants, inv2: &SpineInvariants, i: usize) -> i64 {
    let (h1, h2) = (inv1.h as i64, inv2.h as i64);
    h1 * h2 - (h1 - inv1.n(i) as i64) * (h2 - inv2.n(i) as i64)
}

pub fn paper_bound(inv1: &SpineInvariants, inv2: &SpineInvariants, i: usize) -> Result<i64> {
    if inv1.rank == 0 || inv2.rank == 0 {
        return Err(Error::TrivialSubgroup);
    }
    if i != 1 && i != 2 {
        return Err(Error::InvalidArgument(format!("label index {i} is not 1 or 2")));
    }
    Ok(product_term(inv1, inv2) + paper_error_term(inv1, inv2, i))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalBounds {
    pub neumann: i64,
    pub burns: i64,
    pub tardos: i64,
    pub dicks: i64,
}

impl ClassicalBounds {
    pub fn as_array(&self) -> [i64; 4] {
        [self.neumann, self.burns, self.tardos, self.dicks]
    }
}

/// The error terms `ε` of the classical estimates
/// `Σ (rk - 1) ≤ (rk1 - 1)(rk2 - 1) + ε`.
pub fn classical_bounds(rk1: usize, rk2: usize) -> ClassicalBounds {
    let (r1, r2) = (rk1 as i64, rk2 as i64);
    ClassicalBounds {
        neumann: (r1 - 1) * (r2 - 1),
        burns: ((r1 - 2) * (r2 - 1)).max((r1 - 1) * (r2 - 2)),
        tardos: ((r1 - 2) * (r2 - 2) - 1).max(0),
        dicks: ((r1 - 3) * (r2 - 3)).max(0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Satisfied {
    pub paper_i1: bool,
    pub paper_i2: bool,
    pub neumann: bool,
    pub burns: bool,
    pub tardos: bool,
    pub dicks: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inv1: SpineInvariants,
    pub inv2: SpineInvariants,
    pub exact_sum: i64,
    pub paper_bound_i1: i64,
    pub paper_bound_i2: i64,
    pub paper_bound_best: i64,
    pub eps_neumann: i64,
    pub eps_burns: i64,
    pub eps_tardos: i64,
    pub eps_dicks: i64,
    pub satisfied: Satisfied,
}

pub const CSV_HEADER: &str =
    "rk1,rk2,H1,n11,n12,H2,n21,n22,exact,paper_i1,paper_i2,neumann,burns,tardos,dicks";

impl BoundReport {
    pub fn from_parts(inv1: SpineInvariants, inv2: SpineInvariants, exact_sum: i64) -> Result<Self> {
        let b1 = paper_bound(&inv1, &inv2, 1)?;
        let b2 = paper_bound(&inv1, &inv2, 2)?;
        let eps = classical_bounds(inv1.rank, inv2.rank);
        let base = product_term(&inv1, &inv2);
        let satisfied = Satisfied {
            paper_i1: exact_sum <= b1,
            paper_i2: exact_sum <= b2,
            neumann: exact_sum <= base + eps.neumann,
            burns: exact_sum <= base + eps.burns,
            tardos: exact_sum <= base + eps.tardos,
            dicks: exact_sum <= base + eps.dicks,
        };
        Ok(BoundReport {
            inv1,
            inv2,
            exact_sum,
            paper_bound_i1: b1,
            paper_bound_i2: b2,
            paper_bound_best: b1.min(b2),
            eps_neumann: eps.neumann,
            eps_burns: eps.burns,
            eps_tardos: eps.tardos,
            eps_dicks: eps.dicks,
            satisfied,
        })
    }

    pub fn classical(&self) -> ClassicalBounds {
        ClassicalBounds {
            neumann: self.eps_neumann,
            burns: self.eps_burns,
            tardos: self.eps_tardos,
            dicks: self.eps_dicks,
        }
    }

    /// Classical columns hold the totals `(rk1 - 1)(rk2 - 1) + ε`.
    pub fn csv_row(&self) -> String {
        let base = product_term(&self.inv1, &self.inv2);
        let (a, b) = (&self.inv1, &self.inv2);
        let fields = [
            a.rank as i64,
            b.rank as i64,
            a.h as i64,
            a.n1 as i64,
            a.n2 as i64,
            b.h as i64,
            b.n1 as i64,
            b.n2 as i64,
            self.exact_sum,
            self.paper_bound_i1,
            self.paper_bound_i2,
            base + self.eps_neumann,
            base + self.eps_burns,
            base + self.eps_tardos,
            base + self.eps_dicks,
        ];
        fields.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn paper_satisfied(&self) -> bool {
        self.satisfied.paper_i1 && self.satisfied.paper_i2
    }
}

pub fn compare(c1: &BasedCore, c2: &BasedCore) -> Result<BoundReport> {
    let inv1 = spine_invariants(c1)?;
    let inv2 = spine_invariants(c2)?;
    let report = fiber_product(c1, c2)?;
    BoundReport::from_parts(inv1, inv2, intersection_rank_sum(&report) as i64)
}

/// `k` vertices on a `b`-path with an `a`-loop at each, based at an end.
pub fn family_core(k: usize) -> Result<BasedCore> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("family needs k >= 2, got {k}")));
    }
    let mut f = Folder::new(2);
    let vs: Vec<usize> = (0..k).map(|_| f.add_vertex()).collect();
    for &v in &vs {
        f.add_edge(v, 1, v);
    }
    for pair in vs.windows(2) {
        f.add_edge(pair[0], 2, pair[1]);
    }
    let (table, index) = f.table();
    Ok(BasedCore::from_table(2, table, index[0].expect("vertex")))
}

pub fn family_pair(k: usize) -> Result<(BasedCore, BasedCore)> {
    let c = family_core(k)?;
    Ok((c.clone(), c))
}

pub fn rank_identity_check(core: &BasedCore) -> Result<bool> {
    Ok(spine_invariants(core)?.rank_identity_holds())
}
