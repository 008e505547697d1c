//! Unshuffle permutations and Koszul signs.
//!
//! A `(p,q)`-unshuffle is a permutation of `p+q` letters that is increasing
//! on its first `p` slots and on its last `q` slots.  The Koszul sign of a
//! permutation of graded letters picks up `(-1)^{|u||v|}` for every pair of
//! letters that swaps its relative order; the anti-Koszul sign additionally
//! multiplies by the ordinary sign of the permutation.

use crate::scalar::{self, Scalar};
use crate::{Error, Result};

/// A `(p,q)`-unshuffle stored as the image list `positions[i] = sigma(i)`
/// (0-based): the output word is `(x_{positions[0]}, ..., x_{positions[p+q-1]})`,
/// increasing on the first `p` entries and on the last `q` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unshuffle {
    left: usize,
    right: usize,
    positions: Vec<usize>,
}

impl Unshuffle {
    pub fn new(left: usize, right: usize, positions: Vec<usize>) -> Result<Self> {
        if positions.len() != left + right {
            return Err(Error::Arity {
                expected: left + right,
                got: positions.len(),
            });
        }
        let u = Unshuffle {
            left,
            right,
            positions,
        };
        if !u.is_monotone() {
            return Err(Error::Invalid("not monotone on both blocks".into()));
        }
        let mut seen = vec![false; u.positions.len()];
        for &p in &u.positions {
            if p >= seen.len() || seen[p] {
                return Err(Error::Invalid("not a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(u)
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn size(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn left_block(&self) -> &[usize] {
        &self.positions[..self.left]
    }

    pub fn right_block(&self) -> &[usize] {
        &self.positions[self.left..]
    }

    fn is_monotone(&self) -> bool {
        self.positions[..self.left].windows(2).all(|w| w[0] < w[1])
            && self.positions[self.left..].windows(2).all(|w| w[0] < w[1])
    }

    /// Ordinary permutation sign.
    pub fn sgn(&self) -> i64 {
        if perm_parity_is_odd(&self.positions) {
            -1
        } else {
            1
        }
    }
}

/// All `(p,q)`-unshuffles, ordered lexicographically by the left block.
/// There are `C(p+q, p)` of them, including the degenerate splits.
pub fn unshuffles(p: usize, q: usize) -> Vec<Unshuffle> {
    let n = p + q;
    combinations(n, p)
        .into_iter()
        .map(|left_block| {
            let mut in_left = vec![false; n];
            for &i in &left_block {
                in_left[i] = true;
            }
            let mut positions = left_block;
            positions.extend((0..n).filter(|&i| !in_left[i]));
            Unshuffle {
                left: p,
                right: q,
                positions,
            }
        })
        .collect()
}

/// All size-`k` subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let needed = k - cur.len();
        for i in start..=(n - needed) {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(n, k, 0, &mut cur, &mut out);
    }
    out
}

/// All permutations of `0..n` as image lists, in a deterministic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..=p.len() {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// True if the arrangement (a permutation given as an image list) is odd.
pub fn perm_parity_is_odd(arrangement: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..arrangement.len() {
        for j in (i + 1)..arrangement.len() {
            if arrangement[i] > arrangement[j] {
                odd = !odd;
            }
        }
    }
    odd
}

/// Koszul parity of reordering graded letters into `arrangement` order:
/// true means the sign is `-1`.  `degrees[k]` is the degree of the letter at
/// original position `k`; an inversion of two odd letters flips the sign.
pub fn koszul_parity_is_odd(degrees: &[i64], arrangement: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..arrangement.len() {
        for j in (i + 1)..arrangement.len() {
            if arrangement[i] > arrangement[j]
                && scalar::odd(degrees[arrangement[i]])
                && scalar::odd(degrees[arrangement[j]])
            {
                odd = !odd;
            }
        }
    }
    odd
}

/// The Koszul sign of an unshuffle acting on letters of the given degrees.
pub fn koszul_sign(perm: &Unshuffle, degrees: &[i64]) -> Result<Scalar> {
    if degrees.len() != perm.size() {
        return Err(Error::Arity {
            expected: perm.size(),
            got: degrees.len(),
        });
    }
    Ok(if koszul_parity_is_odd(degrees, perm.positions()) {
        scalar::from_int(-1)
    } else {
        scalar::from_int(1)
    })
}

/// `sgn(perm) * koszul_sign(perm, degrees)`.
pub fn anti_koszul_sign(perm: &Unshuffle, degrees: &[i64]) -> Result<Scalar> {
    Ok(koszul_sign(perm, degrees)? * scalar::from_int(perm.sgn()))
}
