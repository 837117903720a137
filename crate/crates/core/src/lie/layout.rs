//! Index conventions shared by every tensor in the crate.
//!
//! * `Λ²` of an `n`-dimensional space: pairs `(i, j)` with `i < j`, lexicographic.
//! * `Λᵏ h*`: `k`-subsets of `0..dim h`, lexicographic.
//! * Tensor products `V ⊗ W`: index `v * dim W + w`.
//! * Cochains in `Λᵏ h* ⊗ V`: index `subset_index * dim V + v`.

use std::collections::HashMap;

/// All pairs `(i, j)` with `i < j < n`, lexicographic.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Position of `(i, j)`, `i < j`, in [`pairs`].
pub fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// `(index, sign)` of `e_i ∧ e_j` in the pair basis, `None` when `i == j`.
pub fn wedge_slot(i: usize, j: usize, n: usize) -> Option<(usize, i64)> {
    match i.cmp(&j) {
        std::cmp::Ordering::Less => Some((pair_index(i, j, n), 1)),
        std::cmp::Ordering::Greater => Some((pair_index(j, i, n), -1)),
        std::cmp::Ordering::Equal => None,
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All `k`-subsets of `0..n` as increasing vectors, lexicographic.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Sorts a list of distinct indices, returning the sorted list and the sign of
/// the sorting permutation; `None` if an index repeats.
pub fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = indices.to_vec();
    let mut sign = 1;
    // insertion sort so the parity is counted directly
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Coordinate layout of `Λᵏ h* ⊗ V`.
#[derive(Debug, Clone)]
pub struct CochainLayout {
    pub h_dim: usize,
    pub degree: usize,
    pub v_dim: usize,
    subsets: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl CochainLayout {
    pub fn new(h_dim: usize, degree: usize, v_dim: usize) -> Self {
        let subsets = subsets(h_dim, degree);
        let lookup = subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        CochainLayout {
            h_dim,
            degree,
            v_dim,
            subsets,
            lookup,
        }
    }

    pub fn len(&self) -> usize {
        self.subsets.len() * self.v_dim
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn subset_index(&self, s: &[usize]) -> Option<usize> {
        self.lookup.get(s).copied()
    }

    /// Block offset and sign for arguments in arbitrary order.
    pub fn block(&self, args: &[usize]) -> Option<(usize, i64)> {
        let (sorted, sign) = sort_with_sign(args)?;
        let idx = self.subset_index(&sorted)?;
        Some((idx * self.v_dim, sign))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_indexing_matches_enumeration() {
        for n in 0..7 {
            for (idx, (i, j)) in pairs(n).into_iter().enumerate() {
                assert_eq!(pair_index(i, j, n), idx);
            }
            assert_eq!(pairs(n).len(), binomial(n, 2));
        }
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            subsets(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn permutation_sign() {
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_with_sign(&[1, 0]), Some((vec![0, 1], -1)));
        assert_eq!(sort_with_sign(&[1, 1]), None);
    }
}
