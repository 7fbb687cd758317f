//! Finite fields GF(p^k).
//!
//! Elements are packed into a `u64`: for the prime field the element is its
//! residue in `[0, p)`, for an extension the element `c_0 + c_1 t + ... +
//! c_{k-1} t^{k-1}` (with `t` a root of the modulus) is stored as the integer
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`. Zero is `0`, one is `1`, and the prime
//! subfield embeds as the integers below `p`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::upoly::UPoly;

/// A packed field element; only meaningful together with its [`Field`].
pub type Elem = u64;

/// Largest supported characteristic. Products of two residues must fit in a `u64`.
pub const MAX_CHARACTERISTIC: u64 = (1 << 31) - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} exceeds the supported maximum {MAX_CHARACTERISTIC}")]
    CharacteristicTooLarge(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("field of order {p}^{k} does not fit in 64 bits")]
    TooLarge { p: u64, k: u32 },
    #[error("modulus must be monic of degree {expected}")]
    BadModulus { expected: u32 },
    #[error("modulus is reducible over GF({0})")]
    Reducible(u64),
}

/// Serializable description of a finite field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub characteristic: u64,
    pub extension_degree: u32,
    /// Coefficients of the monic modulus, constant term first (length `k + 1`).
    /// Absent for prime fields.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl FieldSpec {
    pub fn prime(p: u64) -> Self {
        FieldSpec { characteristic: p, extension_degree: 1, modulus: None }
    }
}

/// Arithmetic context for GF(p^k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u64,
    k: u32,
    q: u64,
    /// Monic modulus, constant term first; empty for prime fields.
    modulus: Vec<u64>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn order(p: u64, k: u32) -> Option<u64> {
    let mut q = 1u64;
    for _ in 0..k {
        q = q.checked_mul(p)?;
    }
    Some(q)
}

impl Field {
    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Field, FieldError> {
        if p > MAX_CHARACTERISTIC {
            return Err(FieldError::CharacteristicTooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field { p, k: 1, q: p, modulus: Vec::new() })
    }

    /// GF(p^k) with the lexicographically lowest monic irreducible modulus.
    pub fn extension(p: u64, k: u32) -> Result<Field, FieldError> {
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let base = Field::prime(p)?;
        if k == 1 {
            return Ok(base);
        }
        let q = order(p, k).filter(|_| k <= 16).ok_or(FieldError::TooLarge { p, k })?;
        let modulus = lowest_irreducible(&base, k);
        Ok(Field { p, k, q, modulus })
    }

    /// Validates a spec: prime characteristic, irreducible modulus.
    pub fn from_spec(spec: &FieldSpec) -> Result<Field, FieldError> {
        let (p, k) = (spec.characteristic, spec.extension_degree);
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let base = Field::prime(p)?;
        match (&spec.modulus, k) {
            (None, 1) => Ok(base),
            (None, _) => Field::extension(p, k),
            (Some(m), _) => {
                if m.len() != k as usize + 1 || m[k as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(FieldError::BadModulus { expected: k });
                }
                if k == 1 {
                    return Ok(base);
                }
                let q = order(p, k).filter(|_| k <= 16).ok_or(FieldError::TooLarge { p, k })?;
                if !is_irreducible(&base, &UPoly::new(m.clone())) {
                    return Err(FieldError::Reducible(p));
                }
                Ok(Field { p, k, q, modulus: m.clone() })
            }
        }
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            characteristic: self.p,
            extension_degree: self.k,
            modulus: if self.k == 1 { None } else { Some(self.modulus.clone()) },
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        self.q
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    /// The same field viewed as its prime subfield, when it is one.
    pub fn prime_ops(&self) -> Option<PrimeOps> {
        (self.k == 1).then_some(PrimeOps { p: self.p })
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        0
    }

    #[inline]
    pub fn one(&self) -> Elem {
        1
    }

    /// Image of an integer under `Z -> GF(p) -> GF(q)`.
    pub fn from_i64(&self, n: i64) -> Elem {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(0..self.q)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        rng.gen_range(1..self.q)
    }

    /// Iterates over all elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q
    }

    /// Checks that `a` is a valid packed element.
    pub fn contains(&self, a: Elem) -> bool {
        a < self.q
    }

    fn digits(&self, mut a: Elem, out: &mut [u64]) {
        for d in out.iter_mut().take(self.k as usize) {
            *d = a % self.p;
            a /= self.p;
        }
    }

    fn pack(&self, digits: &[u64]) -> Elem {
        digits.iter().take(self.k as usize).rev().fold(0, |acc, &d| acc * self.p + d)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else {
            let (mut x, mut y) = ([0u64; 16], [0u64; 16]);
            self.digits(a, &mut x);
            self.digits(b, &mut y);
            for i in 0..self.k as usize {
                x[i] = (x[i] + y[i]) % self.p;
            }
            self.pack(&x)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.k == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else {
            let mut x = [0u64; 16];
            self.digits(a, &mut x);
            for d in x.iter_mut().take(self.k as usize) {
                *d = (self.p - *d) % self.p;
            }
            self.pack(&x)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if self.k == 1 {
            return a * b % self.p;
        }
        let k = self.k as usize;
        let (mut x, mut y) = ([0u64; 16], [0u64; 16]);
        self.digits(a, &mut x);
        self.digits(b, &mut y);
        let mut prod = [0u64; 32];
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % self.p;
            }
        }
        // Reduce modulo the monic modulus from the top down.
        for top in (k..2 * k - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..k {
                let m = self.modulus[i];
                if m != 0 {
                    let idx = top - k + i;
                    prod[idx] = (prod[idx] + (self.p - c) * m) % self.p;
                }
            }
        }
        self.pack(&prod)
    }

    pub fn pow(&self, mut a: Elem, mut e: u64) -> Elem {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        if self.k == 1 {
            PrimeOps { p: self.p }.inv(a)
        } else {
            self.pow(a, self.q - 2)
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    /// Writes an element in the packed-integer notation used by divisor specs.
    pub fn format(&self, a: Elem) -> String {
        a.to_string()
    }
}

/// Fast arithmetic for a prime field, used in elimination inner loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeOps {
    pub p: u64,
}

impl PrimeOps {
    pub fn inv(&self, a: Elem) -> Elem {
        // Extended Euclid on signed integers.
        let (mut t, mut new_t) = (0i64, 1i64);
        let (mut r, mut new_r) = (self.p as i64, a as i64);
        while new_r != 0 {
            let quot = r / new_r;
            (t, new_t) = (new_t, t - quot * new_t);
            (r, new_r) = (new_r, r - quot * new_r);
        }
        debug_assert_eq!(r, 1);
        t.rem_euclid(self.p as i64) as u64
    }
}

/// Arithmetic interface shared by [`Field`] and [`PrimeOps`], so elimination
/// kernels can be monomorphized for the prime case.
pub trait Arith: Sync {
    fn add(&self, a: Elem, b: Elem) -> Elem;
    fn sub(&self, a: Elem, b: Elem) -> Elem;
    fn mul(&self, a: Elem, b: Elem) -> Elem;
    fn neg(&self, a: Elem) -> Elem;
    fn inv(&self, a: Elem) -> Elem;
    /// `a - f * b`.
    fn sub_mul(&self, a: Elem, f: Elem, b: Elem) -> Elem {
        self.sub(a, self.mul(f, b))
    }
}

impl Arith for Field {
    fn add(&self, a: Elem, b: Elem) -> Elem {
        Field::add(self, a, b)
    }
    fn sub(&self, a: Elem, b: Elem) -> Elem {
        Field::sub(self, a, b)
    }
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        Field::mul(self, a, b)
    }
    fn neg(&self, a: Elem) -> Elem {
        Field::neg(self, a)
    }
    fn inv(&self, a: Elem) -> Elem {
        Field::inv(self, a)
    }
}

impl Arith for PrimeOps {
    #[inline]
    fn add(&self, a: Elem, b: Elem) -> Elem {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: Elem, b: Elem) -> Elem {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        a * b % self.p
    }
    #[inline]
    fn neg(&self, a: Elem) -> Elem {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: Elem) -> Elem {
        PrimeOps::inv(self, a)
    }
    #[inline]
    fn sub_mul(&self, a: Elem, f: Elem, b: Elem) -> Elem {
        (a + (self.p - f) * b) % self.p
    }
}

/// Rabin's test over the prime field `base`.
pub fn is_irreducible(base: &Field, f: &UPoly) -> bool {
    debug_assert!(base.is_prime_field());
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(n) => n,
    };
    if n == 1 {
        return true;
    }
    let f = f.monic(base);
    let x = UPoly::new(vec![0, 1]);
    // x^(p^i) mod f for i = 0..=n
    let mut frob = vec![x.clone()];
    for i in 1..=n {
        let prev = &frob[i - 1];
        frob.push(prev.powmod(base, base.characteristic(), &f));
    }
    if frob[n].sub(base, &x).rem(base, &f).degree().is_some() {
        return false;
    }
    let mut m = n;
    let mut r = 2;
    let mut prime_divisors = Vec::new();
    while m > 1 {
        if m % r == 0 {
            prime_divisors.push(r);
            while m % r == 0 {
                m /= r;
            }
        }
        r += 1;
    }
    prime_divisors.into_iter().all(|r| {
        let h = frob[n / r].sub(base, &x);
        f.gcd(base, &h).degree() == Some(0)
    })
}

/// Lowest monic irreducible of degree `k`, scanning coefficient vectors
/// `(c_{k-1}, ..., c_0)` in lexicographic order.
fn lowest_irreducible(base: &Field, k: u32) -> Vec<u64> {
    let p = base.characteristic();
    let count = order(p, k).expect("order checked by caller");
    for n in 0..count {
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        let mut m = n;
        for _ in 0..k {
            coeffs.push(m % p);
            m /= p;
        }
        coeffs.push(1);
        if is_irreducible(base, &UPoly::new(coeffs.clone())) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
