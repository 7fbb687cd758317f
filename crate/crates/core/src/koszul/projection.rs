//! The projection sequence
//! `0 -> Z_{p,1}(B + x, L - x) -> Z_{p,1}(B, L) -> Z_{p-1,1}(B, L - x)`.
//!
//! The left map is `wedge^p` of the inclusion `H^0(L - x) -> H^0(L)`,
//! tensored with the identity on `H^0(B + L)`.

use serde::{Deserialize, Serialize};

use super::wedge::wedge_basis;
use super::{KoszulComplex, KoszulError, Limits};
use crate::curve::very_ample::is_base_point;
use crate::curve::sections::inclusion_matrix;
use crate::curve::{CurvePoint, Divisor, PlaneCurve};
use crate::field::{Elem, Field};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub p: usize,
    /// `dim Z_{p,1}(B, L)`.
    pub middle: usize,
    /// `dim Z_{p,1}(B + x, L - x)`.
    pub left: usize,
    /// `dim Z_{p-1,1}(B, L - x)`.
    pub right: usize,
    pub inequality_holds: bool,
    /// The left map is injective on cycles.
    pub left_injective: bool,
    /// Images of left cycles are cycles.
    pub left_lands_in_cycles: bool,
    /// `middle - left == right`, i.e. the projection map is onto (observed,
    /// not asserted).
    pub projection_surjective: bool,
}

impl ProjectionReport {
    pub fn ok(&self) -> bool {
        self.inequality_holds && self.left_injective && self.left_lands_in_cycles
    }
}

fn det(f: &Field, mut m: Vec<Vec<Elem>>) -> Elem {
    let n = m.len();
    let mut acc = f.one();
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| m[r][c] != 0) else { return 0 };
        if r != c {
            m.swap(r, c);
            acc = f.neg(acc);
        }
        let piv = m[c][c];
        acc = f.mul(acc, piv);
        let inv = f.inv(piv);
        for r in c + 1..n {
            let factor = f.mul(m[r][c], inv);
            if factor != 0 {
                for k in c..n {
                    let v = f.mul(factor, m[c][k]);
                    m[r][k] = f.sub(m[r][k], v);
                }
            }
        }
    }
    acc
}

/// `wedge^p` of a matrix, on colex-ordered bases.
pub fn wedge_power(m: &Matrix, p: usize) -> Matrix {
    let f = m.field();
    let rows = wedge_basis(m.rows(), p);
    let cols = wedge_basis(m.cols(), p);
    let mut entries = Vec::new();
    for (ci, c) in cols.iter().enumerate() {
        for (ri, r) in rows.iter().enumerate() {
            let minor =
                r.indices().iter().map(|&i| c.indices().iter().map(|&j| m.get(i, j)).collect()).collect();
            let v = det(f, minor);
            if v != 0 {
                entries.push((ri, ci, v));
            }
        }
    }
    Matrix::from_triplets(f, rows.len(), cols.len(), entries).expect("entries in range")
}

/// Kronecker product `a (x) I_n`, matching the wedge-major basis order.
fn tensor_identity(a: &Matrix, n: usize) -> Matrix {
    let mut entries = Vec::new();
    a.for_each_nonzero(|r, c, v| {
        for k in 0..n {
            entries.push((r * n + k, c * n + k, v));
        }
    });
    Matrix::from_triplets(a.field(), a.rows() * n, a.cols() * n, entries).expect("entries in range")
}

pub fn projection_sequence_check(
    curve: &PlaneCurve,
    b: &Divisor,
    l: &Divisor,
    x: &CurvePoint,
    p: usize,
) -> Result<ProjectionReport, KoszulError> {
    if is_base_point(curve, l, x)? {
        return Err(KoszulError::BasePoint(x.to_string()));
    }
    let px = Divisor::point(*x, 1);
    let l_x = l.sub(&px);
    let limits = Limits::default();
    let full = KoszulComplex::new(curve, b, l, limits)?;
    let shifted = KoszulComplex::new(curve, &b.add(&px), &l_x, limits)?;
    let projected = KoszulComplex::new(curve, b, &l_x, limits)?;

    let d = full.matrix(p, 1)?;
    let d_left = shifted.matrix(p, 1)?;
    let middle = d.cols() - d.rank();
    let left_cycles = d_left.kernel_basis();
    let left = left_cycles.len();
    let right = if p == 0 { 0 } else { projected.cycles_dim(p - 1, 1)? };

    let inc = inclusion_matrix(curve, shifted.v(), full.v())?;
    let map = tensor_identity(&wedge_power(&inc, p), full.w(1)?.dim());
    let images = Matrix::from_columns(curve.field(), map.rows(), &left_cycles.iter().map(|z| map.mul_vec(z)).collect::<Vec<_>>());
    let left_injective = images.rank() == left;
    let left_lands_in_cycles = left == 0 || d.rows() == 0 || d.mul(&images)?.is_zero();

    Ok(ProjectionReport {
        p,
        middle,
        left,
        right,
        inequality_holds: middle <= left + right,
        left_injective,
        left_lands_in_cycles,
        projection_surjective: middle >= left && middle - left == right,
    })
}
