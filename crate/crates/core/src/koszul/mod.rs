//! Koszul complexes `wedge^p H^0(L) (x) H^0(B + qL)` and their cohomology.
//!
//! `K_{p,q}(C; B, L)` is the middle homology of
//!
//! ```text
//! wedge^{p+1} V (x) W_{q-1}  ->  wedge^p V (x) W_q  ->  wedge^{p-1} V (x) W_{q+1}
//! ```
//!
//! with `V = H^0(L)` and `W_q = H^0(B + qL)`. The differential is
//! `e_I (x) w -> sum_j (-1)^j e_{I \ i_j} (x) x_{i_j} w`, with `j` the
//! 0-indexed position; basis vectors are ordered wedge-rank major, `W`-index
//! minor.

pub mod betti;
pub mod np;
pub mod projection;
pub mod wedge;

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::curve::riemann_roch::rr_space;
use crate::curve::{CurveError, Divisor, PlaneCurve, RRSpace, SectionAlgebra};
use crate::linalg::{HomPair, LinalgError, Matrix};
use wedge::{binomial, wedge_basis};

pub use betti::BettiTable;
pub use np::{property_np, NpVerdict};
pub use projection::{projection_sequence_check, ProjectionReport};

/// Default cap on `rows * cols` of a single differential.
pub const DEFAULT_MAX_ENTRIES: u64 = 20_000_000;
/// Default cap on `C(dim V, p)`.
pub const DEFAULT_MAX_WEDGE_DIM: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KoszulError {
    #[error("size cap exceeded: {what} = {size} > {cap}")]
    SizeCapExceeded { what: &'static str, size: u64, cap: u64 },
    #[error("{0} is a base point of L")]
    BasePoint(String),
    #[error("L = {0} is special")]
    Special(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_entries: u64,
    pub max_wedge_dim: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_entries: DEFAULT_MAX_ENTRIES, max_wedge_dim: DEFAULT_MAX_WEDGE_DIM }
    }
}

/// The Koszul complexes of `(B, L)` on a curve, with lazily built spaces
/// and multiplication tables.
pub struct KoszulComplex<'c> {
    curve: &'c PlaneCurve,
    b: Divisor,
    l: Divisor,
    v: Arc<RRSpace>,
    limits: Limits,
    w: Mutex<BTreeMap<i64, Arc<RRSpace>>>,
    mult: Mutex<BTreeMap<i64, Arc<SectionAlgebra>>>,
}

impl<'c> KoszulComplex<'c> {
    pub fn new(curve: &'c PlaneCurve, b: &Divisor, l: &Divisor, limits: Limits) -> Result<Self, KoszulError> {
        let v = rr_space(curve, l)?;
        Ok(KoszulComplex {
            curve,
            b: b.clone(),
            l: l.clone(),
            v,
            limits,
            w: Mutex::new(BTreeMap::new()),
            mult: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn curve(&self) -> &PlaneCurve {
        self.curve
    }

    pub fn v(&self) -> &Arc<RRSpace> {
        &self.v
    }

    pub fn b(&self) -> &Divisor {
        &self.b
    }

    pub fn l(&self) -> &Divisor {
        &self.l
    }

    pub fn dim_v(&self) -> usize {
        self.v.dim()
    }

    /// `W_q = H^0(B + qL)`.
    pub fn w(&self, q: i64) -> Result<Arc<RRSpace>, KoszulError> {
        if let Some(s) = self.w.lock().expect("poisoned").get(&q) {
            return Ok(s.clone());
        }
        let s = rr_space(self.curve, &self.b.add(&self.l.scale(q)))?;
        self.w.lock().expect("poisoned").insert(q, s.clone());
        Ok(s)
    }

    /// Multiplication `V x W_q -> W_{q+1}`.
    pub fn multiplication(&self, q: i64) -> Result<Arc<SectionAlgebra>, KoszulError> {
        if let Some(m) = self.mult.lock().expect("poisoned").get(&q) {
            return Ok(m.clone());
        }
        let (wq, wq1) = (self.w(q)?, self.w(q + 1)?);
        let m = Arc::new(SectionAlgebra::into_target(self.curve, &self.v, &wq, wq1)?);
        self.mult.lock().expect("poisoned").insert(q, m.clone());
        Ok(m)
    }

    fn wedge_dim(&self, p: usize) -> Result<u64, KoszulError> {
        let n = binomial(self.dim_v() as u64, p as u64);
        if n > self.limits.max_wedge_dim {
            return Err(KoszulError::SizeCapExceeded { what: "wedge dimension", size: n, cap: self.limits.max_wedge_dim });
        }
        Ok(n)
    }

    /// `dim wedge^p V (x) W_q`.
    pub fn piece_dim(&self, p: usize, q: i64) -> Result<usize, KoszulError> {
        Ok(self.wedge_dim(p)? as usize * self.w(q)?.dim())
    }

    /// The differential `d_{p,q}: wedge^p V (x) W_q -> wedge^{p-1} V (x) W_{q+1}`.
    pub fn matrix(&self, p: usize, q: i64) -> Result<Matrix, KoszulError> {
        let f = self.curve.field();
        let wq = self.w(q)?;
        let cols = self.wedge_dim(p)? as usize * wq.dim();
        if p == 0 {
            return Ok(Matrix::zeros(f, 0, cols));
        }
        let wq1 = self.w(q + 1)?;
        let rows = self.wedge_dim(p - 1)? as usize * wq1.dim();
        let size = rows as u64 * cols as u64;
        if size > self.limits.max_entries {
            return Err(KoszulError::SizeCapExceeded { what: "matrix entries", size, cap: self.limits.max_entries });
        }
        if rows == 0 || cols == 0 {
            return Ok(Matrix::zeros(f, rows, cols));
        }
        let mult = self.multiplication(q)?;
        let (nq, nq1) = (wq.dim(), wq1.dim());
        let mut entries = Vec::new();
        for (rank, idx) in wedge_basis(self.dim_v(), p).into_iter().enumerate() {
            for j in 0..p {
                let face = idx.without(j).rank();
                let i = idx.indices()[j];
                for k in 0..nq {
                    let col = rank * nq + k;
                    for (r, &v) in mult.table[i][k].iter().enumerate() {
                        if v != 0 {
                            let v = if j % 2 == 1 { f.neg(v) } else { v };
                            entries.push((face * nq1 + r, col, v));
                        }
                    }
                }
            }
        }
        Ok(Matrix::from_triplets(f, rows, cols, entries)?)
    }

    /// `(d_{p+1,q-1}, d_{p,q})` around `wedge^p V (x) W_q`.
    pub fn pair(&self, p: usize, q: i64) -> Result<HomPair, KoszulError> {
        Ok(HomPair::new(self.matrix(p + 1, q - 1)?, self.matrix(p, q)?)?)
    }

    /// `dim Z_{p,q} = dim ker d_{p,q}`.
    pub fn cycles_dim(&self, p: usize, q: i64) -> Result<usize, KoszulError> {
        let d = self.matrix(p, q)?;
        Ok(d.cols() - d.rank())
    }

    /// `dim K_{p,q}(C; B, L)`.
    pub fn cohomology_dim(&self, p: usize, q: i64) -> Result<usize, KoszulError> {
        Ok(self.pair(p, q)?.homology_dim()?)
    }
}

pub fn koszul_matrix(curve: &PlaneCurve, b: &Divisor, l: &Divisor, p: usize, q: i64) -> Result<Matrix, KoszulError> {
    KoszulComplex::new(curve, b, l, Limits::default())?.matrix(p, q)
}

/// `dim Z_{p,1}(C, B, L)`.
pub fn cycles_dim(curve: &PlaneCurve, b: &Divisor, l: &Divisor, p: usize) -> Result<usize, KoszulError> {
    KoszulComplex::new(curve, b, l, Limits::default())?.cycles_dim(p, 1)
}

/// `dim K_{p,q}(C; B, L)`.
pub fn cohomology_dim(curve: &PlaneCurve, b: &Divisor, l: &Divisor, p: usize, q: i64) -> Result<usize, KoszulError> {
    KoszulComplex::new(curve, b, l, Limits::default())?.cohomology_dim(p, q)
}
