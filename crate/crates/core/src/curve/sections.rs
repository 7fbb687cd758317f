//! Sections of Riemann-Roch spaces and their products.
//!
//! Products are computed by evaluation: the factors are evaluated at a set
//! of sample points, multiplied pointwise, and the result is interpolated in
//! the basis of the target space. The sample set is larger than the degree
//! of the target divisor, so a section vanishing on all of it is zero and
//! the overdetermined system doubles as a consistency check.

use std::sync::Arc;

use super::riemann_roch::keyed_rng;
use super::{rr_space, CurveError, CurvePoint, Divisor, PlaneCurve, RRSpace};
use crate::field::Elem;
use crate::linalg::Matrix;

/// An element of `L(D)` in the basis of its space.
#[derive(Debug, Clone)]
pub struct Section {
    pub space: Arc<RRSpace>,
    pub coords: Vec<Elem>,
}

impl Section {
    pub fn new(space: Arc<RRSpace>, coords: Vec<Elem>) -> Result<Section, CurveError> {
        if coords.len() != space.dim() {
            return Err(CurveError::Mismatch);
        }
        Ok(Section { space, coords })
    }

    pub fn basis(space: Arc<RRSpace>, i: usize) -> Section {
        let mut coords = vec![0; space.dim()];
        coords[i] = 1;
        Section { space, coords }
    }

    /// The constant function 1 in `L(0)`.
    pub fn one(curve: &PlaneCurve) -> Result<Section, CurveError> {
        let space = rr_space(curve, &Divisor::zero())?;
        // L(0) is spanned by one constant; rescale it to 1.
        let v = space.eval_basis(curve.field(), &curve.points(1)[0])[0];
        Ok(Section { coords: vec![curve.field().inv(v)], space })
    }

    pub fn divisor(&self) -> &Divisor {
        self.space.divisor()
    }

    /// Value at a regular point of the space.
    pub fn eval(&self, curve: &PlaneCurve, p: &CurvePoint) -> Elem {
        let f = curve.field();
        self.space.eval_basis(f, p).iter().zip(&self.coords).fold(0, |acc, (&b, &c)| f.add(acc, f.mul(b, c)))
    }
}

/// Number of sample points used when interpolating into `target` from
/// spaces whose largest numerator degree is `m`.
pub fn sample_size(curve: &PlaneCurve, m: i64, target: &RRSpace) -> usize {
    let d = curve.degree() as i64;
    let deg = target.divisor().degree(curve.degree()).max(0);
    (3 * m.max(0) * d + 10).max(deg + 11) as usize
}

/// Sample points regular for every space in `spaces`: at least
/// `deg(target) + 1` of them, up to `wanted`.
pub fn sample_points(
    curve: &PlaneCurve,
    spaces: &[&RRSpace],
    target: &RRSpace,
    wanted: usize,
) -> Result<Vec<CurvePoint>, CurveError> {
    let f = curve.field();
    let divisors: Vec<&Divisor> = spaces.iter().map(|s| s.divisor()).chain([target.divisor()]).collect();
    let mut rng = keyed_rng(curve, "samples", &divisors);
    let keep = |p: &CurvePoint| spaces.iter().chain([&target]).all(|s| s.is_regular_at(f, p));
    let needed = (target.divisor().degree(curve.degree()).max(0) + 1) as usize;
    match curve.random_points(wanted, &mut rng, keep) {
        Ok(pts) => Ok(pts),
        Err(CurveError::InsufficientPoints { found, .. }) if found >= needed => {
            curve.random_points(found, &mut rng, keep)
        }
        Err(CurveError::InsufficientPoints { found, .. }) => Err(CurveError::SampleDegeneracy(format!(
            "only {found} usable sample points, {needed} needed for {}",
            target.divisor()
        ))),
        Err(e) => Err(e),
    }
}

/// Interpolation into a fixed target space at a fixed sample set.
pub struct Interpolator {
    target: Arc<RRSpace>,
    points: Vec<CurvePoint>,
    eval: Matrix,
}

impl Interpolator {
    pub fn new(curve: &PlaneCurve, target: Arc<RRSpace>, points: Vec<CurvePoint>) -> Result<Self, CurveError> {
        let f = curve.field();
        let rows: Vec<Vec<Elem>> = points.iter().map(|p| target.eval_basis(f, p)).collect();
        let eval = Matrix::from_rows(f, target.dim(), rows)?;
        if eval.rank() != target.dim() {
            return Err(CurveError::SampleDegeneracy(format!(
                "evaluation of L({}) at {} points is not injective",
                target.divisor(),
                points.len()
            )));
        }
        Ok(Interpolator { target, points, eval })
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn target(&self) -> &Arc<RRSpace> {
        &self.target
    }

    /// Coordinates of the functions with the given values at the sample points.
    pub fn solve(&self, values: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>, CurveError> {
        if self.target.dim() == 0 {
            return match values.iter().position(|v| v.iter().any(|&x| x != 0)) {
                None => Ok(vec![Vec::new(); values.len()]),
                Some(i) => Err(CurveError::InconsistentSystem(format!(
                    "value vector {i} is nonzero but L({}) = 0",
                    self.target.divisor()
                ))),
            };
        }
        self.eval.solve_many(values).map_err(|i| {
            CurveError::InconsistentSystem(format!("value vector {i} does not lie in L({})", self.target.divisor()))
        })
    }
}

/// Pairwise products of two bases, interpolated in a target space.
#[derive(Debug, Clone)]
pub struct SectionAlgebra {
    /// `table[i][j]` holds the coordinates of `a_i * b_j` in the target basis.
    pub table: Vec<Vec<Vec<Elem>>>,
    pub target: Arc<RRSpace>,
}

impl SectionAlgebra {
    /// Multiplication table `L(D1) x L(D2) -> L(D1 + D2)`.
    pub fn new(curve: &PlaneCurve, a: &Arc<RRSpace>, b: &Arc<RRSpace>) -> Result<SectionAlgebra, CurveError> {
        let target = rr_space(curve, &a.divisor().add(b.divisor()))?;
        Self::into_target(curve, a, b, target)
    }

    /// Multiplication table into a given target whose divisor dominates
    /// `D1 + D2`.
    pub fn into_target(
        curve: &PlaneCurve,
        a: &Arc<RRSpace>,
        b: &Arc<RRSpace>,
        target: Arc<RRSpace>,
    ) -> Result<SectionAlgebra, CurveError> {
        let f = curve.field();
        if a.dim() == 0 || b.dim() == 0 {
            return Ok(SectionAlgebra { table: vec![vec![Vec::new(); b.dim()]; a.dim()], target });
        }
        let m = a.numerator_degree().max(b.numerator_degree()).max(target.numerator_degree());
        let wanted = sample_size(curve, m, &target);
        let points = sample_points(curve, &[a, b], &target, wanted)?;
        let ea: Vec<Vec<Elem>> = points.iter().map(|p| a.eval_basis(f, p)).collect();
        let eb: Vec<Vec<Elem>> = points.iter().map(|p| b.eval_basis(f, p)).collect();
        let interp = Interpolator::new(curve, target.clone(), points)?;
        let mut values = Vec::with_capacity(a.dim() * b.dim());
        for i in 0..a.dim() {
            for j in 0..b.dim() {
                values.push(ea.iter().zip(&eb).map(|(va, vb)| f.mul(va[i], vb[j])).collect());
            }
        }
        let coords = interp.solve(&values)?;
        let mut it = coords.into_iter();
        let table = (0..a.dim()).map(|_| (0..b.dim()).map(|_| it.next().unwrap()).collect()).collect();
        Ok(SectionAlgebra { table, target })
    }

    /// Coordinates of `s * t` for arbitrary combinations.
    pub fn product(&self, curve: &PlaneCurve, s: &[Elem], t: &[Elem]) -> Vec<Elem> {
        let f = curve.field();
        let mut out = vec![0; self.target.dim()];
        for (i, &si) in s.iter().enumerate() {
            if si == 0 {
                continue;
            }
            for (j, &tj) in t.iter().enumerate() {
                if tj == 0 {
                    continue;
                }
                let c = f.mul(si, tj);
                for (o, &v) in out.iter_mut().zip(&self.table[i][j]) {
                    *o = f.add(*o, f.mul(c, v));
                }
            }
        }
        out
    }
}

/// Coordinates of `s * t` in the basis of `L(D1 + D2)`.
pub fn multiply(curve: &PlaneCurve, s: &Section, t: &Section) -> Result<Vec<Elem>, CurveError> {
    let alg = SectionAlgebra::new(curve, &s.space, &t.space)?;
    Ok(alg.product(curve, &s.coords, &t.coords))
}

/// Matrix of the inclusion `L(small) -> L(big)` (requires `small <= big`),
/// with columns indexed by the basis of `small`.
pub fn inclusion_matrix(curve: &PlaneCurve, small: &Arc<RRSpace>, big: &Arc<RRSpace>) -> Result<Matrix, CurveError> {
    let f = curve.field();
    if small.dim() == 0 {
        return Ok(Matrix::zeros(f, big.dim(), 0));
    }
    let wanted = sample_size(curve, small.numerator_degree().max(big.numerator_degree()), big);
    let points = sample_points(curve, &[small], big, wanted)?;
    let values: Vec<Vec<Elem>> = {
        let e: Vec<Vec<Elem>> = points.iter().map(|p| small.eval_basis(f, p)).collect();
        (0..small.dim()).map(|i| e.iter().map(|row| row[i]).collect()).collect()
    };
    let coords = Interpolator::new(curve, big.clone(), points)?.solve(&values)?;
    Ok(Matrix::from_columns(f, big.dim(), &coords))
}
