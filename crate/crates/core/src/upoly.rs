//! Dense univariate polynomials over a [`Field`], with root finding.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{Elem, Field};

/// Coefficients stored constant term first; trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<Elem>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> Self {
        UPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, f: &Field, x: Elem) -> Elem {
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn monic(&self, f: &Field) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = f.inv(self.lead());
        UPoly::new(self.coeffs.iter().map(|&c| f.mul(c, inv)).collect())
    }

    pub fn add(&self, f: &Field, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                f.add(a, b)
            })
            .collect();
        UPoly::new(c)
    }

    pub fn sub(&self, f: &Field, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                f.sub(a, b)
            })
            .collect();
        UPoly::new(c)
    }

    pub fn mul(&self, f: &Field, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        UPoly::new(c)
    }

    /// Quotient and remainder. Panics if `divisor` is zero.
    pub fn divrem(&self, f: &Field, divisor: &UPoly) -> (UPoly, UPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let inv = f.inv(divisor.lead());
        let mut quot = vec![0; rem.len() - dd];
        for top in (dd..rem.len()).rev() {
            let c = rem[top];
            if c == 0 {
                continue;
            }
            let factor = f.mul(c, inv);
            quot[top - dd] = factor;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                let idx = top - dd + i;
                rem[idx] = f.sub(rem[idx], f.mul(factor, b));
            }
        }
        rem.truncate(dd);
        (UPoly::new(quot), UPoly::new(rem))
    }

    pub fn rem(&self, f: &Field, divisor: &UPoly) -> UPoly {
        self.divrem(f, divisor).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, f: &Field, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `self^e mod modulus`.
    pub fn powmod(&self, f: &Field, mut e: u64, modulus: &UPoly) -> UPoly {
        let mut base = self.rem(f, modulus);
        let mut acc = UPoly::constant(1).rem(f, modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, modulus);
            }
            base = base.mul(f, &base).rem(f, modulus);
            e >>= 1;
        }
        acc
    }

    /// Distinct roots lying in `f`, sorted by packed value.
    pub fn roots(&self, f: &Field) -> Vec<Elem> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let x = UPoly::new(vec![0, 1]);
        // gcd(self, x^q - x) collects the distinct roots in the field.
        let xq = x.powmod(f, f.order(), self);
        let split = self.gcd(f, &xq.sub(f, &x));
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        split_linear(f, &split, &mut rng, &mut out);
        out.sort_unstable();
        out
    }
}

/// Splits a monic product of distinct linear factors.
fn split_linear(f: &Field, g: &UPoly, rng: &mut ChaCha8Rng, out: &mut Vec<Elem>) {
    match g.degree() {
        None | Some(0) => return,
        Some(1) => {
            let g = g.monic(f);
            out.push(f.neg(g.coeffs[0]));
            return;
        }
        _ => {}
    }
    loop {
        let a = f.random(rng);
        let h = if f.characteristic() == 2 {
            // Absolute trace of a*x modulo g; translations would not split.
            let mut term = UPoly::new(vec![0, a]).rem(f, g);
            let mut tr = term.clone();
            for _ in 1..f.degree() {
                term = term.mul(f, &term).rem(f, g);
                tr = tr.add(f, &term);
            }
            tr
        } else {
            UPoly::new(vec![a, 1]).powmod(f, (f.order() - 1) / 2, g).sub(f, &UPoly::constant(1))
        };
        let d = g.gcd(f, &h);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && Some(dd) < g.degree() {
            let (other, _) = g.divrem(f, &d);
            split_linear(f, &d, rng, out);
            split_linear(f, &other, rng, out);
            return;
        }
    }
}
