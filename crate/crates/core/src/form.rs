//! Homogeneous forms in `x, y, z`, stored densely by monomial index.

use std::collections::BTreeMap;

use crate::field::{Elem, Field};

/// Exponent triple `(a, b, c)` of `x^a y^b z^c`.
pub type Exponents = [u32; 3];

/// Number of monomials of degree `n` in three variables.
pub fn monomial_count(n: u32) -> usize {
    let n = n as usize;
    (n + 1) * (n + 2) / 2
}

/// Index of `x^a y^b z^c` among degree `a + b + c` monomials.
///
/// Monomials are grouped by the `x` exponent; inside a group the `y` exponent increases.
#[inline]
pub fn monomial_index(e: Exponents) -> usize {
    let n = (e[0] + e[1] + e[2]) as usize;
    let a = e[0] as usize;
    a * (2 * n + 3 - a) / 2 + e[1] as usize
}

/// Inverse of [`monomial_index`].
pub fn monomial_exponents(n: u32, idx: usize) -> Exponents {
    let mut offset = 0usize;
    for a in 0..=n {
        let width = (n - a) as usize + 1;
        if idx < offset + width {
            let b = (idx - offset) as u32;
            return [a, b, n - a - b];
        }
        offset += width;
    }
    panic!("monomial index {idx} out of range for degree {n}");
}

pub fn monomials(n: u32) -> impl Iterator<Item = Exponents> {
    (0..=n).flat_map(move |a| (0..=n - a).map(move |b| [a, b, n - a - b]))
}

/// A homogeneous polynomial of fixed degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    degree: u32,
    coeffs: Vec<Elem>,
}

impl Form {
    pub fn zero(degree: u32) -> Form {
        Form { degree, coeffs: vec![0; monomial_count(degree)] }
    }

    pub fn one() -> Form {
        Form { degree: 0, coeffs: vec![1] }
    }

    pub fn from_coeffs(degree: u32, coeffs: Vec<Elem>) -> Form {
        assert_eq!(coeffs.len(), monomial_count(degree));
        Form { degree, coeffs }
    }

    /// `a x + b y + c z`.
    pub fn linear(coeffs: [Elem; 3]) -> Form {
        let mut f = Form::zero(1);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = [0; 3];
            e[i] = 1;
            f.coeffs[monomial_index(e)] = c;
        }
        f
    }

    /// Builds a form from `(exponents, coefficient)` terms. Returns `None`
    /// if the terms have different total degrees (or there are none).
    pub fn from_terms(field: &Field, terms: &[(Exponents, i64)]) -> Option<Form> {
        let degree = terms.first().map(|(e, _)| e.iter().sum::<u32>())?;
        let mut f = Form::zero(degree);
        for &(e, c) in terms {
            if e.iter().sum::<u32>() != degree {
                return None;
            }
            let idx = monomial_index(e);
            f.coeffs[idx] = field.add(f.coeffs[idx], field.from_i64(c));
        }
        Some(f)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, e: Exponents) -> Elem {
        self.coeffs[monomial_index(e)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Nonzero terms, in index order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponents, Elem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(i, &c)| (monomial_exponents(self.degree, i), c))
    }

    /// Nonzero terms keyed by exponents.
    pub fn term_map(&self) -> BTreeMap<Exponents, Elem> {
        self.terms().collect()
    }

    pub fn add(&self, f: &Field, other: &Form) -> Form {
        assert_eq!(self.degree, other.degree);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        Form { degree: self.degree, coeffs }
    }

    pub fn scale(&self, f: &Field, s: Elem) -> Form {
        Form { degree: self.degree, coeffs: self.coeffs.iter().map(|&a| f.mul(a, s)).collect() }
    }

    pub fn mul(&self, f: &Field, other: &Form) -> Form {
        let mut out = Form::zero(self.degree + other.degree);
        let rhs: Vec<_> = other.terms().collect();
        for (e, a) in self.terms() {
            for &(g, b) in &rhs {
                let idx = monomial_index([e[0] + g[0], e[1] + g[1], e[2] + g[2]]);
                out.coeffs[idx] = f.add(out.coeffs[idx], f.mul(a, b));
            }
        }
        out
    }

    pub fn pow(&self, f: &Field, e: u32) -> Form {
        (0..e).fold(Form::one(), |acc, _| acc.mul(f, self))
    }

    /// Multiplies by a single monomial.
    pub fn shift(&self, by: Exponents) -> Form {
        let d = by[0] + by[1] + by[2];
        let mut out = Form::zero(self.degree + d);
        for (e, c) in self.terms() {
            out.coeffs[monomial_index([e[0] + by[0], e[1] + by[1], e[2] + by[2]])] = c;
        }
        out
    }

    /// Partial derivative with respect to variable `var` (0, 1, 2).
    pub fn derivative(&self, f: &Field, var: usize) -> Form {
        if self.degree == 0 {
            return Form::zero(0);
        }
        let mut out = Form::zero(self.degree - 1);
        for (e, c) in self.terms() {
            if e[var] == 0 {
                continue;
            }
            let mut g = e;
            g[var] -= 1;
            let idx = monomial_index(g);
            out.coeffs[idx] = f.add(out.coeffs[idx], f.mul(c, f.from_i64(e[var] as i64)));
        }
        out
    }

    pub fn eval(&self, f: &Field, pt: &[Elem; 3]) -> Elem {
        let pows = PowerTable::new(f, pt, self.degree);
        self.terms().fold(0, |acc, (e, c)| f.add(acc, f.mul(c, pows.monomial(f, e))))
    }

    /// Human-readable form like `x^4 + 3*y^2*z^2`.
    pub fn display(&self) -> String {
        let names = ["x", "y", "z"];
        let mut parts = Vec::new();
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let mut factors = Vec::new();
            if c != 1 || e == [0, 0, 0] {
                factors.push(c.to_string());
            }
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(names[v].to_string()),
                    _ => factors.push(format!("{}^{}", names[v], k)),
                }
            }
            parts.push(factors.join("*"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Powers `x^i, y^i, z^i` of a point's coordinates up to a fixed degree.
pub struct PowerTable {
    pows: [Vec<Elem>; 3],
}

impl PowerTable {
    pub fn new(f: &Field, pt: &[Elem; 3], max_degree: u32) -> PowerTable {
        let make = |v: Elem| {
            let mut out = Vec::with_capacity(max_degree as usize + 1);
            let mut acc = 1;
            for _ in 0..=max_degree {
                out.push(acc);
                acc = f.mul(acc, v);
            }
            out
        };
        PowerTable { pows: [make(pt[0]), make(pt[1]), make(pt[2])] }
    }

    #[inline]
    pub fn monomial(&self, f: &Field, e: Exponents) -> Elem {
        f.mul(f.mul(self.pows[0][e[0] as usize], self.pows[1][e[1] as usize]), self.pows[2][e[2] as usize])
    }
}
