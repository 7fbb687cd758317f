//! Random divisors standing in for "general" ones.

use rand::Rng;

use super::{CurveError, CurvePoint, Divisor, PlaneCurve};

/// A random class of degree `deg`: `a H + (deg - a d)` random distinct
/// points, with `a = floor((deg - g) / d)` so at least `g` points are free.
pub fn random_class<R: Rng + ?Sized>(curve: &PlaneCurve, deg: i64, rng: &mut R) -> Result<Divisor, CurveError> {
    random_class_avoiding(curve, deg, rng, &[])
}

pub fn random_class_avoiding<R: Rng + ?Sized>(
    curve: &PlaneCurve,
    deg: i64,
    rng: &mut R,
    avoid: &[CurvePoint],
) -> Result<Divisor, CurveError> {
    let d = curve.degree() as i64;
    let a = (deg - curve.genus() as i64).div_euclid(d);
    let n = (deg - a * d) as usize;
    let pts = curve.random_points(n, rng, |p| !avoid.contains(p))?;
    Ok(Divisor::new(a, pts.into_iter().map(|p| (p, 1)).collect()))
}

/// `n` distinct random points.
pub fn random_effective<R: Rng + ?Sized>(curve: &PlaneCurve, n: usize, rng: &mut R) -> Result<Divisor, CurveError> {
    random_effective_avoiding(curve, n, rng, &[])
}

pub fn random_effective_avoiding<R: Rng + ?Sized>(
    curve: &PlaneCurve,
    n: usize,
    rng: &mut R,
    avoid: &[CurvePoint],
) -> Result<Divisor, CurveError> {
    let pts = curve.random_points(n, rng, |p| !avoid.contains(p))?;
    Ok(Divisor::reduced(&pts))
}

/// Support points of several divisors, for building avoid-lists.
pub fn support_of(divisors: &[&Divisor]) -> Vec<CurvePoint> {
    let mut out: Vec<CurvePoint> = divisors.iter().flat_map(|d| d.support().iter().map(|&(p, _)| p)).collect();
    out.sort();
    out.dedup();
    out
}
