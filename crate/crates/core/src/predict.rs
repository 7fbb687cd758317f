//! Closed-form predictions: degrees in the secant regime, section counts,
//! symmetric-product cohomology dimensions and the `c = 2` fiber dimension.

use serde::{Deserialize, Serialize};

/// `C(n, k)`, zero for `k < 0` or `k > n >= 0`; `C(-1, 0) = 1`.
pub fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 {
        return 0;
    }
    if n < 0 {
        // Only the multiset edge case C(-1 + k, k) with k = 0 reaches here.
        return u128::from(k == 0);
    }
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Dimension of `Sym^k` of an `n`-dimensional space: `C(n + k - 1, k)`.
pub fn multiset(n: i64, k: i64) -> u128 {
    if k == 0 {
        1
    } else {
        binomial(n + k - 1, k)
    }
}

/// `deg L = 2g + p + 1 - c`.
pub fn secant_degree(g: i64, p: i64, c: i64) -> i64 {
    2 * g + p + 1 - c
}

/// `h^0(L) = g + p + 2 - c` for nonspecial `L` of secant degree.
pub fn expected_h0(g: i64, p: i64, c: i64) -> i64 {
    g + p + 2 - c
}

/// `(dim H^i(C_n, N_L), dim H^i(C_n, S_L))`:
/// `(C(h0, n-i) * dim Sym^i H^1, dim Sym^{n-i} H^0 * C(h1, i))`.
pub fn sym_product_dims(n: i64, i: i64, h0: i64, h1: i64) -> (u128, u128) {
    assert!(0 <= i && i <= n, "need 0 <= i <= n");
    (binomial(h0, n - i) * multiset(h1, i), multiset(h0, n - i) * binomial(h1, i))
}

/// Predicted `dim K_{2,1}(C, K - L, L - D)` in the `c = 2` regime.
pub fn c2_fiber_prediction(g: i64, p: i64) -> usize {
    usize::from(g == p + 4)
}

/// `rho(g, 1, g - c) = g - 2c - 2`.
pub fn brill_noether_reference(g: i64, c: i64) -> i64 {
    g - 2 * c - 2
}

/// Numbers attached to a bundle in the secant regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericContext {
    pub g: i64,
    pub c: i64,
    pub p: i64,
    pub deg_l: i64,
    pub h0: i64,
    pub h1: i64,
}

impl NumericContext {
    /// The context of a nonspecial `L` of secant degree.
    pub fn secant_regime(g: i64, p: i64, c: i64) -> Self {
        NumericContext { g, c, p, deg_l: secant_degree(g, p, c), h0: expected_h0(g, p, c), h1: 0 }
    }

    pub fn satisfies_riemann_roch(&self) -> bool {
        self.h0 - self.h1 == self.deg_l - self.g + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(3, -1), 0);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(multiset(0, 0), 1);
        assert_eq!(multiset(0, 2), 0);
        assert_eq!(multiset(3, 2), 6);
    }

    #[test]
    fn worked_instances() {
        // Degree 8 on a genus-3 curve with p = 1 is 2g + p, one above the regime.
        assert_eq!(secant_degree(3, 1, 1), 7);
        assert_eq!(secant_degree(10, 6, 2), 25);
        assert_eq!(secant_degree(0, 0, 0), 1);
        assert_eq!(expected_h0(3, 1, 1), 5);
        assert_eq!(expected_h0(10, 6, 2), 16);
        assert_eq!(sym_product_dims(2, 0, 4, 0), (6, 10));
        assert_eq!(c2_fiber_prediction(10, 6), 1);
        assert_eq!(c2_fiber_prediction(10, 5), 0);
        assert_eq!(brill_noether_reference(10, 1), 6);
    }

    #[test]
    fn regime_context_is_consistent() {
        for g in 0..12 {
            for p in 0..8 {
                for c in 0..3 {
                    assert!(NumericContext::secant_regime(g, p, c).satisfies_riemann_roch());
                }
            }
        }
    }
}
