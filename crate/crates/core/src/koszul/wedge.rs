//! Exterior-power bases in colexicographic order.
//!
//! A basis vector `e_{i_0} ^ ... ^ e_{i_{p-1}}` (with `i_0 < ... < i_{p-1}`)
//! has colex rank `sum_j C(i_j, j + 1)`; ranks enumerate `[0, C(n, p))`.

/// `C(n, k)` with `C(n, k) = 0` for `k > n`; saturates on overflow.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// A strictly increasing index tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WedgeIndex(Vec<usize>);

impl WedgeIndex {
    /// `None` unless strictly increasing.
    pub fn new(indices: Vec<usize>) -> Option<WedgeIndex> {
        indices.windows(2).all(|w| w[0] < w[1]).then_some(WedgeIndex(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rank(&self) -> usize {
        colex_rank(&self.0)
    }

    /// The index with position `j` removed.
    pub fn without(&self, j: usize) -> WedgeIndex {
        let mut v = self.0.clone();
        v.remove(j);
        WedgeIndex(v)
    }
}

pub fn colex_rank(indices: &[usize]) -> usize {
    indices.iter().enumerate().map(|(j, &i)| binomial(i as u64, j as u64 + 1) as usize).sum()
}

/// Inverse of [`colex_rank`] for tuples of length `p`.
pub fn colex_unrank(mut rank: usize, p: usize) -> WedgeIndex {
    let mut out = vec![0; p];
    for j in (0..p).rev() {
        // Largest c with C(c, j + 1) <= rank.
        let mut c = j;
        while binomial(c as u64 + 1, j as u64 + 1) as usize <= rank {
            c += 1;
        }
        out[j] = c;
        rank -= binomial(c as u64, j as u64 + 1) as usize;
    }
    WedgeIndex(out)
}

/// All `p`-subsets of `0..n`, in colex order.
pub fn wedge_basis(n: usize, p: usize) -> Vec<WedgeIndex> {
    let count = binomial(n as u64, p as u64) as usize;
    let mut out = Vec::with_capacity(count);
    if p > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..p).collect();
    loop {
        out.push(WedgeIndex(cur.clone()));
        // Colex successor: bump the first entry that can move up.
        let mut j = 0;
        while j < p && (if j + 1 < p { cur[j] + 1 == cur[j + 1] } else { cur[j] + 1 == n }) {
            j += 1;
        }
        if j == p {
            break;
        }
        cur[j] += 1;
        for (t, slot) in cur.iter_mut().enumerate().take(j) {
            *slot = t;
        }
    }
    out
}
