//! Eigenvalue multisets: clustering raw solver output into values with
//! multiplicities, and tolerance-aware multiset equality via minimum-cost
//! matching.

use num_complex::Complex64;

/// Default clustering / matching tolerance (componentwise absolute).
pub const CLUSTER_TOL: f64 = 1e-8;

/// Flat-size threshold above which matching falls back from the Hungarian
/// algorithm to sorted pairing with a verification pass.
const HUNGARIAN_LIMIT: usize = 10_000;

fn cdist(a: Complex64, b: Complex64) -> f64 {
    (a.re - b.re).abs().max((a.im - b.im).abs())
}

/// A multiset of complex eigenvalues, stored as (value, multiplicity) pairs
/// sorted by (re, im). Values are pairwise distinct under the clustering
/// tolerance that built the multiset.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenMultiset {
    items: Vec<(Complex64, usize)>,
}

impl EigenMultiset {
    /// Clusters raw eigenvalues at the given tolerance (single linkage on
    /// componentwise distance); each cluster is represented by its mean.
    pub fn from_values(values: &[Complex64], tol: f64) -> Self {
        let reps: Vec<(Complex64, usize)> = values.iter().map(|&z| (z, 1)).collect();
        Self::from_items(reps, tol)
    }

    /// Merges (value, multiplicity) pairs, clustering values at `tol`.
    pub fn from_items(items: Vec<(Complex64, usize)>, tol: f64) -> Self {
        let items: Vec<(Complex64, usize)> = items.into_iter().filter(|&(_, m)| m > 0).collect();
        let n = items.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], i: usize) -> usize {
            let mut root = i;
            while parent[root] != root {
                root = parent[root];
            }
            let mut cur = i;
            while parent[cur] != root {
                let next = parent[cur];
                parent[cur] = root;
                cur = next;
            }
            root
        }
        // sort by re so the pair scan can stop early
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            (items[a].0.re, items[a].0.im)
                .partial_cmp(&(items[b].0.re, items[b].0.im))
                .unwrap()
        });
        for (pos, &i) in order.iter().enumerate() {
            for &j in order[pos + 1..].iter() {
                if items[j].0.re - items[i].0.re > tol {
                    break;
                }
                if cdist(items[i].0, items[j].0) <= tol {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
        let mut acc: std::collections::HashMap<usize, (Complex64, usize)> =
            std::collections::HashMap::new();
        for (i, &(value, mult)) in items.iter().enumerate() {
            let root = find(&mut parent, i);
            let entry = acc.entry(root).or_insert((Complex64::ZERO, 0));
            // weighted running sum; divided out below
            entry.0 += value * mult as f64;
            entry.1 += mult;
        }
        let mut out: Vec<(Complex64, usize)> = acc
            .into_values()
            .map(|(sum, count)| (sum / count as f64, count))
            .collect();
        out.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
        EigenMultiset { items: out }
    }

    pub fn items(&self) -> &[(Complex64, usize)] {
        &self.items
    }

    /// Total count including multiplicities.
    pub fn total(&self) -> usize {
        self.items.iter().map(|&(_, m)| m).sum()
    }

    /// Sum of all values with multiplicity (equals the trace of the matrix
    /// the spectrum came from).
    pub fn sum(&self) -> Complex64 {
        self.items.iter().map(|&(z, m)| z * m as f64).sum()
    }

    /// Values repeated according to multiplicity, in sorted order.
    pub fn expanded(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.total());
        for &(z, m) in &self.items {
            out.extend(std::iter::repeat_n(z, m));
        }
        out
    }

    /// Multiset equality: a perfect matching must exist in which every pair
    /// is within `tol` componentwise.
    pub fn approx_eq(&self, other: &EigenMultiset, tol: f64) -> bool {
        self.diff(other, tol).is_match()
    }

    /// Matches the two multisets and reports leftovers.
    pub fn diff(&self, other: &EigenMultiset, tol: f64) -> MultisetDiff {
        let left = self.expanded();
        let right = other.expanded();
        if left.len() != right.len() {
            return MultisetDiff {
                size_left: left.len(),
                size_right: right.len(),
                unmatched: left.len().max(right.len()),
                worst_distance: f64::INFINITY,
                examples: Vec::new(),
            };
        }
        let n = left.len();
        if n == 0 {
            return MultisetDiff {
                size_left: 0,
                size_right: 0,
                unmatched: 0,
                worst_distance: 0.0,
                examples: Vec::new(),
            };
        }
        let assignment = if n <= HUNGARIAN_LIMIT {
            hungarian(&left, &right)
        } else {
            // both sides sorted identically; positional pairing then verify
            (0..n).collect()
        };
        let mut unmatched = 0usize;
        let mut worst = 0.0f64;
        let mut examples = Vec::new();
        for (i, &j) in assignment.iter().enumerate() {
            let d = cdist(left[i], right[j]);
            worst = worst.max(d);
            if d > tol {
                unmatched += 1;
                if examples.len() < 8 {
                    examples.push((left[i], right[j], d));
                }
            }
        }
        MultisetDiff {
            size_left: n,
            size_right: n,
            unmatched,
            worst_distance: worst,
            examples,
        }
    }
}

/// Outcome of matching two eigenvalue multisets.
#[derive(Debug, Clone)]
pub struct MultisetDiff {
    pub size_left: usize,
    pub size_right: usize,
    /// Number of matched pairs exceeding the tolerance (or the size gap when
    /// cardinalities differ).
    pub unmatched: usize,
    pub worst_distance: f64,
    /// Up to eight offending (left, right, distance) pairs.
    pub examples: Vec<(Complex64, Complex64, f64)>,
}

impl MultisetDiff {
    pub fn is_match(&self) -> bool {
        self.size_left == self.size_right && self.unmatched == 0
    }
}

/// Minimum-cost assignment between equally sized value lists (Jonker-
/// Volgenant style shortest augmenting paths, O(n^3)). Returns, for each
/// left index, the matched right index.
fn hungarian(left: &[Complex64], right: &[Complex64]) -> Vec<usize> {
    let n = left.len();
    // potentials and matching over a (n+1)-padded index space
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut matched_row_of_col = vec![n; n + 1]; // p[j] = row matched to column j
    for i in 0..n {
        let mut j0 = n; // virtual column holding the current row
        matched_row_of_col[j0] = i;
        let mut min_to = vec![f64::INFINITY; n + 1];
        let mut prev = vec![n; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row_of_col[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = n;
            for j in 0..n {
                if used[j] {
                    continue;
                }
                let cur = cdist(left[i0], right[j]) - u[i0] - v[j];
                if cur < min_to[j] {
                    min_to[j] = cur;
                    prev[j] = j0;
                }
                if min_to[j] < delta {
                    delta = min_to[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row_of_col[j0] == n {
                break;
            }
        }
        // augment along the alternating path
        while j0 != n {
            let j1 = prev[j0];
            matched_row_of_col[j0] = matched_row_of_col[j1];
            j0 = j1;
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 0..n {
        if matched_row_of_col[j] != n {
            assignment[matched_row_of_col[j]] = j;
        }
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn permutation_invariance() {
        let x = EigenMultiset::from_values(&[c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)], 1e-12);
        let y = EigenMultiset::from_values(&[c(2.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)], 1e-12);
        assert!(x.approx_eq(&y, 1e-10));
        assert_eq!(x.items().len(), 2);
        assert_eq!(x.total(), 3);
    }

    #[test]
    fn beyond_tolerance_is_unequal() {
        let tol = 1e-6;
        let x = EigenMultiset::from_values(&[c(1.0, 0.0)], 0.0);
        let y = EigenMultiset::from_values(&[c(1.0 + 2.0 * tol, 0.0)], 0.0);
        assert!(!x.approx_eq(&y, tol));
        let d = x.diff(&y, tol);
        assert_eq!(d.unmatched, 1);
        assert!((d.worst_distance - 2.0 * tol).abs() < 1e-12);
    }

    #[test]
    fn cardinality_mismatch_is_unequal() {
        let x = EigenMultiset::from_values(&[c(1.0, 0.0)], 0.0);
        let y = EigenMultiset::from_values(&[c(1.0, 0.0), c(1.0, 0.0)], 0.0);
        assert!(!x.approx_eq(&y, 1.0));
    }

    #[test]
    fn clustering_merges_nearby_values() {
        let vals = [c(1.0, 0.0), c(1.0 + 4e-9, 0.0), c(3.0, -1.0)];
        let ms = EigenMultiset::from_values(&vals, 1e-8);
        assert_eq!(ms.items().len(), 2);
        assert_eq!(ms.items()[0].1, 2);
        assert!((ms.items()[0].0 - c(1.0 + 2e-9, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn matching_pairs_near_degenerate_values_correctly() {
        // sorted pairing by (re, im) would mispair these; min-cost matching must not
        let x = EigenMultiset::from_values(&[c(0.0, 0.0), c(1e-9, 1.0)], 0.0);
        let y = EigenMultiset::from_values(&[c(1e-9, 0.0), c(0.0, 1.0)], 0.0);
        assert!(x.approx_eq(&y, 1e-8));
    }

    #[test]
    fn sum_accounts_for_multiplicity() {
        let ms = EigenMultiset::from_items(vec![(c(2.0, 1.0), 3), (c(-1.0, 0.0), 2)], 1e-12);
        assert_eq!(ms.sum(), c(4.0, 3.0));
        assert_eq!(ms.total(), 5);
    }

    #[test]
    fn large_multisets_take_the_sorted_path() {
        // beyond the Hungarian limit, matching falls back to sorted pairing
        // with a verification pass
        let items: Vec<(Complex64, usize)> =
            (0..30).map(|k| (c(k as f64, -(k as f64)), 1000)).collect();
        let x = EigenMultiset::from_items(items.clone(), 1e-12);
        let y = EigenMultiset::from_items(items.into_iter().rev().collect(), 1e-12);
        assert!(x.total() > HUNGARIAN_LIMIT);
        assert!(x.approx_eq(&y, 1e-12));
        let mut shifted: Vec<(Complex64, usize)> = (0..30)
            .map(|k| (c(k as f64 + 1e-3, -(k as f64)), 1000))
            .collect();
        shifted[0].0 += c(1.0, 0.0);
        let z = EigenMultiset::from_items(shifted, 1e-12);
        assert!(!x.approx_eq(&z, 1e-6));
    }
}
