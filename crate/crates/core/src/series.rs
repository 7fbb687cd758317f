//! Truncated power series and local branch expansions of a smooth plane
//! curve.

use crate::field::{Elem, Field};
use crate::form::{Exponents, Form};

/// Power series truncated at `t^prec` (coefficients `0..prec`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Elem>,
}

impl Series {
    pub fn constant(prec: usize, c: Elem) -> Series {
        let mut coeffs = vec![0; prec];
        if prec > 0 {
            coeffs[0] = c;
        }
        Series { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Elem>) -> Series {
        Series { coeffs }
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn add(&self, f: &Field, other: &Series) -> Series {
        Series { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect() }
    }

    pub fn scale(&self, f: &Field, s: Elem) -> Series {
        Series { coeffs: self.coeffs.iter().map(|&a| f.mul(a, s)).collect() }
    }

    pub fn mul(&self, f: &Field, other: &Series) -> Series {
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![0; n];
        for (i, &a) in self.coeffs.iter().enumerate().take(n) {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Series { coeffs: out }
    }

    /// Index of the first nonzero coefficient, or `None` if all visible
    /// coefficients vanish.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    /// All powers `self^0 ..= self^max`.
    pub fn powers(&self, f: &Field, max: u32) -> Vec<Series> {
        let mut out = vec![Series::constant(self.precision(), 1)];
        for i in 1..=max as usize {
            let next = out[i - 1].mul(f, self);
            out.push(next);
        }
        out
    }
}

/// A local parametrization `t -> (x(t), y(t), z(t))` of a smooth curve branch,
/// in the affine chart where the normalized coordinate equals 1.
#[derive(Debug, Clone)]
pub struct Branch {
    coords: [Series; 3],
}

impl Branch {
    /// Expands the branch of `form = 0` through the smooth point `pt` to
    /// precision `prec`. The point must be normalized (first nonzero
    /// coordinate equal to 1), and the gradient must not vanish.
    pub fn expand(f: &Field, form: &Form, pt: &[Elem; 3], prec: usize) -> Branch {
        let chart = pt.iter().position(|&c| c != 0).expect("projective point has a nonzero coordinate");
        debug_assert_eq!(pt[chart], 1);
        let others: Vec<usize> = (0..3).filter(|&i| i != chart).collect();
        let grad = [
            form.derivative(f, 0).eval(f, pt),
            form.derivative(f, 1).eval(f, pt),
            form.derivative(f, 2).eval(f, pt),
        ];
        // The affine partials are the homogeneous partials at a point with
        // chart coordinate 1. Solve for the coordinate with nonzero partial.
        let (param, solved) = if grad[others[1]] != 0 { (others[0], others[1]) } else { (others[1], others[0]) };
        assert!(grad[solved] != 0, "branch expansion at a singular point");
        let mut coords = [Series::constant(prec, 0), Series::constant(prec, 0), Series::constant(prec, 0)];
        coords[chart] = Series::constant(prec, 1);
        let mut p = vec![0; prec];
        if prec > 0 {
            p[0] = pt[param];
        }
        if prec > 1 {
            p[1] = 1;
        }
        coords[param] = Series::from_coeffs(p);
        let mut s = vec![0; prec];
        if prec > 0 {
            s[0] = pt[solved];
        }
        coords[solved] = Series::from_coeffs(s);
        let inv = f.inv(grad[solved]);
        // Solve coefficient by coefficient: with the first i coefficients
        // fixed, F(branch) = c_i t^i + O(t^{i+1}) and c_i is killed by
        // adjusting the i-th coefficient of the solved coordinate.
        for i in 1..prec {
            let value = eval_series(f, form, &coords);
            let c = value.coeffs()[i];
            if c != 0 {
                let mut s = coords[solved].coeffs().to_vec();
                s[i] = f.sub(s[i], f.mul(c, inv));
                coords[solved] = Series::from_coeffs(s);
            }
        }
        debug_assert!(eval_series(f, form, &coords).order().is_none());
        Branch { coords }
    }

    pub fn precision(&self) -> usize {
        self.coords[0].precision()
    }

    pub fn coords(&self) -> &[Series; 3] {
        &self.coords
    }

    /// Power tables for evaluating monomials up to degree `max`.
    pub fn power_tables(&self, f: &Field, max: u32) -> [Vec<Series>; 3] {
        [self.coords[0].powers(f, max), self.coords[1].powers(f, max), self.coords[2].powers(f, max)]
    }
}

pub fn monomial_series(f: &Field, tables: &[Vec<Series>; 3], e: Exponents) -> Series {
    tables[0][e[0] as usize].mul(f, &tables[1][e[1] as usize]).mul(f, &tables[2][e[2] as usize])
}

/// Substitutes series into a form.
pub fn eval_series(f: &Field, form: &Form, coords: &[Series; 3]) -> Series {
    let prec = coords[0].precision();
    let d = form.degree();
    let tables = [coords[0].powers(f, d), coords[1].powers(f, d), coords[2].powers(f, d)];
    let mut acc = Series::constant(prec, 0);
    for (e, c) in form.terms() {
        acc = acc.add(f, &monomial_series(f, &tables, e).scale(f, c));
    }
    acc
}
