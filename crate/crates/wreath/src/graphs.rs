//! Wreath products of regular graphs and the lamplighter random walk.
//!
//! The wreath product of graphs puts a lamp (colored by a vertex of the
//! second graph) at every vertex of the first; a walker either moves along
//! an edge of the first graph or switches the lamp at its position to a
//! neighboring color. Its normalized adjacency matrix is exactly the matrix
//! wreath product of the scaled normalized adjacency matrices of the two
//! factors, which is what makes the circulant spectral reduction apply to
//! the walk.
//!
//! The vertex ordering is part of the contract: configurations are ordered
//! lexicographically (the lamp at the first vertex most significant),
//! positions innermost, so that vertex (f, v) gets flat index
//! `rank(f) * n1 + rank(v)`. All matrix-vs-graph comparisons are entrywise
//! under this ordering, never up to permutation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{dense_spectrum, EigenMultiset};
use crate::tensor::{DenseMatrix, SparseMatrix};
use crate::wreath::{checked_pow, wreath_order, wreath_product};

/// A finite undirected graph with ordered, labeled vertices, a validated
/// regularity degree, and no self-loops. Parallel edges are allowed and
/// carry multiplicity through the adjacency matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    degree: usize,
}

impl Graph {
    /// Validates edge indices, rejects self-loops, and computes the common
    /// degree; non-regular inputs are errors.
    pub fn new(labels: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        let mut degrees = vec![0usize; n];
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            degrees[u] += 1;
            degrees[v] += 1;
        }
        let degree = degrees[0];
        if let Some(v) = degrees.iter().position(|&d| d != degree) {
            return Err(Error::InvalidGraph(format!(
                "not regular: vertex 0 has degree {degree}, vertex {v} has degree {}",
                degrees[v]
            )));
        }
        let mut edges = edges;
        for e in &mut edges {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        Ok(Graph {
            labels,
            edges,
            degree,
        })
    }

    fn with_default_labels(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Result<Self> {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::with_default_labels(n, edges)
    }

    /// Cycle C_n for n >= 3.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!(
                "cycle needs at least 3 vertices, got {n}"
            )));
        }
        let edges = (0..n).map(|u| (u, (u + 1) % n)).collect();
        Self::with_default_labels(n, edges)
    }

    /// The segment graph on two vertices (= K_2), the two-color lamp graph.
    pub fn segment() -> Graph {
        Self::complete(2).expect("K_2 is valid")
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Undirected edges with endpoints sorted, list sorted, multiplicity by
    /// repetition.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Adjacency matrix; entry (u, v) counts edges between u and v.
    pub fn adjacency(&self) -> Result<DenseMatrix> {
        let mut m = DenseMatrix::zeros(self.n(), self.n())?;
        for &(u, v) in &self.edges {
            m[(u, v)] += Complex64::ONE;
            m[(v, u)] += Complex64::ONE;
        }
        Ok(m)
    }

    /// Adjacency divided by the degree; row-stochastic. Requires degree > 0.
    pub fn normalized_adjacency(&self) -> Result<DenseMatrix> {
        if self.degree == 0 {
            return Err(Error::InvalidGraph(
                "normalized adjacency needs positive degree".into(),
            ));
        }
        Ok(self
            .adjacency()?
            .scale(Complex64::new(1.0 / self.degree as f64, 0.0)))
    }

    /// DOT rendering with quoted vertex labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph {\n");
        for label in &self.labels {
            out.push_str(&format!("  \"{label}\";\n"));
        }
        for &(u, v) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -- \"{}\";\n",
                self.labels[u], self.labels[v]
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// A vertex of the wreath product: a lamp configuration (one color index
/// per vertex of the walker graph) plus the walker position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LampVertex {
    pub config: Vec<usize>,
    pub position: usize,
}

impl LampVertex {
    /// Flat index under the contract ordering: configurations outer
    /// (lexicographic), position inner.
    pub fn flat_index(&self, n1: usize, n2: usize) -> Result<usize> {
        if self.config.len() != n1 || self.position >= n1 {
            return Err(Error::IndexOutOfRange(format!(
                "lamp vertex over {} lamps, position {}, expected {n1} lamps",
                self.config.len(),
                self.position
            )));
        }
        let mut rank = 0usize;
        for &color in &self.config {
            if color >= n2 {
                return Err(Error::IndexOutOfRange(format!(
                    "color {color} not below {n2}"
                )));
            }
            rank = rank * n2 + color;
        }
        Ok(rank * n1 + self.position)
    }

    pub fn from_flat_index(index: usize, n1: usize, n2: usize) -> Result<Self> {
        let total = checked_pow(n2, n1)?
            .checked_mul(n1)
            .ok_or_else(|| Error::cap("lamp vertex count overflows"))?;
        if index >= total {
            return Err(Error::IndexOutOfRange(format!(
                "vertex index {index} not below {total}"
            )));
        }
        let position = index % n1;
        let mut rank = index / n1;
        let mut config = vec![0usize; n1];
        for slot in config.iter_mut().rev() {
            *slot = rank % n2;
            rank /= n2;
        }
        Ok(LampVertex { config, position })
    }

    /// Label in the style "colors,position", e.g. "010,2".
    pub fn label(&self, g1: &Graph, g2: &Graph) -> String {
        let mut out = String::new();
        for &color in &self.config {
            out.push_str(&g2.labels()[color]);
        }
        out.push(',');
        out.push_str(&g1.labels()[self.position]);
        out
    }
}

/// Wreath product of graphs: vertices are (configuration, position) pairs;
/// switch edges change the lamp at the walker's position to a neighboring
/// color, walk edges move the walker along the first graph.
pub fn graph_wreath(g1: &Graph, g2: &Graph) -> Result<Graph> {
    let n1 = g1.n();
    let n2 = g2.n();
    wreath_order(n1, n2)?; // same cap as the matrix product
    let configs = checked_pow(n2, n1)?;
    let total = configs * n1;

    let mut labels = Vec::with_capacity(total);
    for index in 0..total {
        labels.push(LampVertex::from_flat_index(index, n1, n2)?.label(g1, g2));
    }

    let mut edges = Vec::new();
    // walk edges: same configuration, adjacent positions
    for rank in 0..configs {
        for &(u, v) in g1.edges() {
            edges.push((rank * n1 + u, rank * n1 + v));
        }
    }
    // switch edges: position fixed, the lamp there moves along an edge of g2
    let stride_of = |pos: usize| checked_pow(n2, n1 - 1 - pos);
    for pos in 0..n1 {
        let stride = stride_of(pos)?;
        for rank in 0..configs {
            let color = (rank / stride) % n2;
            for &(c1, c2) in g2.edges() {
                // emit once per unordered pair: from the endpoint we sit on
                if color == c1 {
                    let other = rank + (c2 - c1) * stride;
                    edges.push((rank * n1 + pos, other * n1 + pos));
                }
            }
        }
    }
    let product = Graph::new(labels, edges)?;
    debug_assert_eq!(product.degree(), g1.degree() + g2.degree());
    Ok(product)
}

/// Transition matrix of the "walk or switch" lamplighter random walk: the
/// wreath product of the normalized adjacency matrices weighted by
/// d1/(d1+d2) and d2/(d1+d2). Row-stochastic for regular factors.
pub fn lamplighter_transition(g1: &Graph, g2: &Graph) -> Result<SparseMatrix> {
    let total_degree = g1.degree() + g2.degree();
    if total_degree == 0 {
        return Err(Error::InvalidGraph(
            "lamplighter walk needs positive total degree".into(),
        ));
    }
    let weight = Complex64::new(1.0 / total_degree as f64, 0.0);
    // d/(d1+d2) times adjacency/d, with the degree cancelled exactly
    let a1 = g1.adjacency()?.scale(weight);
    let a2 = g2.adjacency()?.scale(weight);
    wreath_product(&a1, &a2)
}

/// Reduced block of the two-color lamplighter walk on a d-regular graph:
/// for a sign pattern (i_1, ..., i_n) over {0, 1} the block is
/// (Adj + diag((-1)^(i_t))) / (d + 1).
pub fn reduced_lamp_block(g: &Graph, tuple: &[usize]) -> Result<DenseMatrix> {
    let n = g.n();
    if tuple.len() != n {
        return Err(Error::dim(format!(
            "tuple length {} vs {} vertices",
            tuple.len(),
            n
        )));
    }
    if g.degree() == 0 {
        return Err(Error::InvalidGraph(
            "reduced block needs positive degree".into(),
        ));
    }
    let mut block = g.adjacency()?;
    for (t, &bit) in tuple.iter().enumerate() {
        if bit > 1 {
            return Err(Error::IndexOutOfRange(format!(
                "two-color tuple entry {bit} at {t}"
            )));
        }
        let sign = if bit == 0 { 1.0 } else { -1.0 };
        block[(t, t)] += Complex64::new(sign, 0.0);
    }
    Ok(block.scale(Complex64::new(1.0 / (g.degree() + 1) as f64, 0.0)))
}

/// One part of the closed-form complete-graph lamplighter spectrum: the
/// eigenvalues shared by all sign patterns with `lamps_on` ones, and the
/// binomial weight counting those patterns.
#[derive(Clone, Debug)]
pub struct LampSpectrumPart {
    pub lamps_on: usize,
    pub weight: usize,
    pub eigenvalues: EigenMultiset,
}

/// Closed-form spectrum of the two-color lamplighter walk on K_n, grouped
/// by the number k of lamps switched on in the reduced-block sign pattern:
///
/// * k = 0: 0 with multiplicity n-1, and 1;
/// * k = n: -2/n with multiplicity n-1, and (n-2)/n;
/// * 0 < k < n: -2/n with multiplicity k-1, 0 with multiplicity n-k-1, and
///   (n - 2 +- sqrt((n+2)^2 - 8k)) / (2n).
///
/// Each part carries weight C(n, k); the weighted total is n 2^n, and the
/// eigenvalue 1 appears exactly once, in part k = 0.
pub fn complete_lamplighter_spectrum(n: usize) -> Result<Vec<LampSpectrumPart>> {
    if n < 2 {
        return Err(Error::Unsupported(format!(
            "complete-graph closed form needs n >= 2, got {n}"
        )));
    }
    let real = |x: f64| Complex64::new(x, 0.0);
    let mut parts = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut items: Vec<(Complex64, usize)> = Vec::new();
        if k == 0 {
            items.push((real(0.0), n - 1));
            items.push((real(1.0), 1));
        } else if k == n {
            items.push((real(-2.0 / n as f64), n - 1));
            items.push((real((n as f64 - 2.0) / n as f64), 1));
        } else {
            if k > 1 {
                items.push((real(-2.0 / n as f64), k - 1));
            }
            if n - k > 1 {
                items.push((real(0.0), n - k - 1));
            }
            let disc = (n as f64 + 2.0).powi(2) - 8.0 * k as f64;
            assert!(
                disc > 0.0,
                "quadratic part must have real roots for 0 < k < n"
            );
            let root = disc.sqrt();
            items.push((real((n as f64 - 2.0 + root) / (2.0 * n as f64)), 1));
            items.push((real((n as f64 - 2.0 - root) / (2.0 * n as f64)), 1));
        }
        parts.push(LampSpectrumPart {
            lamps_on: k,
            weight: binomial(n, k)?,
            eigenvalues: EigenMultiset::from_items(items, 1e-12),
        });
    }
    Ok(parts)
}

/// Weighted union of the parts into one multiset over all 2^n patterns.
pub fn lamp_parts_to_multiset(parts: &[LampSpectrumPart], tol: f64) -> Result<EigenMultiset> {
    let mut items = Vec::new();
    for part in parts {
        for &(z, mult) in part.eigenvalues.items() {
            let total = mult
                .checked_mul(part.weight)
                .ok_or_else(|| Error::cap("weighted multiplicity overflows"))?;
            items.push((z, total));
        }
    }
    Ok(EigenMultiset::from_items(items, tol))
}

fn binomial(n: usize, k: usize) -> Result<usize> {
    let k = k.min(n - k);
    let mut out: usize = 1;
    for i in 0..k {
        out = out
            .checked_mul(n - i)
            .ok_or_else(|| Error::cap(format!("C({n}, {k}) overflows")))?
            / (i + 1);
    }
    Ok(out)
}

/// Spectrum of the two-color lamplighter walk via per-pattern reduced
/// blocks, the reduction-route counterpart of the closed form.
pub fn lamplighter_spectrum_by_reduction(g: &Graph, tol: f64) -> Result<EigenMultiset> {
    let n = g.n();
    let patterns = checked_pow(2usize, n)?;
    let mut values = Vec::with_capacity(patterns * n);
    let mut tuple = vec![0usize; n];
    for _ in 0..patterns {
        let block = reduced_lamp_block(g, &tuple)?;
        values.extend(crate::linalg::eigenvalues(&block)?);
        for slot in tuple.iter_mut().rev() {
            *slot += 1;
            if *slot < 2 {
                break;
            }
            *slot = 0;
        }
    }
    Ok(EigenMultiset::from_values(&values, tol))
}

/// Dense-oracle spectrum of the full transition matrix.
pub fn lamplighter_spectrum_dense(g1: &Graph, g2: &Graph, tol: f64) -> Result<EigenMultiset> {
    dense_spectrum(&lamplighter_transition(g1, g2)?.to_dense()?, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force wreath product straight from the adjacency clauses: two
    /// vertices are adjacent iff they differ in the walker position along an
    /// edge, or in exactly the lamp under the walker along a color edge.
    fn graph_wreath_oracle(g1: &Graph, g2: &Graph) -> DenseMatrix {
        let n1 = g1.n();
        let n2 = g2.n();
        let a1 = g1.adjacency().unwrap();
        let a2 = g2.adjacency().unwrap();
        let total = n2.pow(n1 as u32) * n1;
        DenseMatrix::from_fn(total, total, |x, y| {
            let vx = LampVertex::from_flat_index(x, n1, n2).unwrap();
            let vy = LampVertex::from_flat_index(y, n1, n2).unwrap();
            if vx.config == vy.config && vx.position != vy.position {
                a1[(vx.position, vy.position)]
            } else if vx.position == vy.position {
                let pos = vx.position;
                let differs_elsewhere = (0..n1).any(|w| w != pos && vx.config[w] != vy.config[w]);
                if differs_elsewhere || vx.config[pos] == vy.config[pos] {
                    Complex64::ZERO
                } else {
                    a2[(vx.config[pos], vy.config[pos])]
                }
            } else {
                Complex64::ZERO
            }
        })
        .unwrap()
    }

    #[test]
    fn builders_are_regular() {
        assert_eq!(Graph::complete(4).unwrap().degree(), 3);
        assert_eq!(Graph::cycle(5).unwrap().degree(), 2);
        assert_eq!(Graph::segment().degree(), 1);
        assert_eq!(Graph::complete(1).unwrap().degree(), 0);
        assert!(Graph::new(vec!["a".into(), "b".into()], vec![(0, 0)]).is_err());
        assert!(Graph::new(vec!["a".into(), "b".into(), "c".into()], vec![(0, 1)]).is_err());
    }

    #[test]
    fn cycle3_times_segment_counts() {
        let product = graph_wreath(&Graph::cycle(3).unwrap(), &Graph::segment()).unwrap();
        assert_eq!(product.n(), 24);
        assert_eq!(product.degree(), 3);
        assert_eq!(product.edge_count(), 36);
        // labels follow the "lamps,position" convention
        assert_eq!(product.labels()[0], "000,0");
        assert_eq!(product.labels()[23], "111,2");
    }

    #[test]
    fn wreath_graph_matches_definition_oracle() {
        for (g1, g2) in [
            (Graph::cycle(3).unwrap(), Graph::segment()),
            (Graph::segment(), Graph::segment()),
            (Graph::segment(), Graph::cycle(4).unwrap()),
        ] {
            let product = graph_wreath(&g1, &g2).unwrap();
            let adj = product.adjacency().unwrap();
            let want = graph_wreath_oracle(&g1, &g2);
            assert_eq!(adj, want, "adjacency mismatch for {} wr {}", g1.n(), g2.n());
        }
    }

    #[test]
    fn one_lamp_degenerates_to_color_graph() {
        let g2 = Graph::cycle(4).unwrap();
        let product = graph_wreath(&Graph::complete(1).unwrap(), &g2).unwrap();
        assert_eq!(product.n(), 4);
        assert_eq!(product.adjacency().unwrap(), g2.adjacency().unwrap());
    }

    #[test]
    fn k2_wreath_k2_is_two_regular_on_eight_vertices() {
        let product = graph_wreath(&Graph::segment(), &Graph::segment()).unwrap();
        assert_eq!(product.n(), 8);
        assert_eq!(product.degree(), 2);
        assert_eq!(product.edge_count(), 8);
    }

    #[test]
    fn transition_matrix_is_stochastic_and_matches_graph() {
        let g1 = Graph::cycle(3).unwrap();
        let g2 = Graph::segment();
        let p = lamplighter_transition(&g1, &g2).unwrap();
        assert_eq!(p.rows(), 24);
        for sum in p.row_sums() {
            assert!((sum - Complex64::ONE).norm() < 1e-12);
        }
        // (d1 + d2) P equals the adjacency of the graph wreath product
        let total_degree = (g1.degree() + g2.degree()) as f64;
        let scaled = p
            .scale(Complex64::new(total_degree, 0.0))
            .to_dense()
            .unwrap();
        let adj = graph_wreath(&g1, &g2).unwrap().adjacency().unwrap();
        assert!(scaled.approx_eq(&adj, 1e-12));
    }

    #[test]
    fn reduced_block_for_complete_graph_all_zeros_tuple() {
        let g = Graph::complete(3).unwrap();
        let block = reduced_lamp_block(&g, &[0, 0, 0]).unwrap();
        // (J - I + I)/3 = J/3 with spectrum {1, 0, 0}
        let want = DenseMatrix::uniform(3)
            .unwrap()
            .scale(Complex64::new(1.0 / 3.0, 0.0));
        assert!(block.approx_eq(&want, 1e-14));
        let ms = dense_spectrum(&block, 1e-10).unwrap();
        assert!(ms.approx_eq(
            &EigenMultiset::from_items(vec![(Complex64::ONE, 1), (Complex64::ZERO, 2)], 1e-12),
            1e-10
        ));
    }

    #[test]
    fn closed_form_n3_golden_parts() {
        let parts = complete_lamplighter_spectrum(3).unwrap();
        assert_eq!(parts.len(), 4);
        let weights: Vec<usize> = parts.iter().map(|p| p.weight).collect();
        assert_eq!(weights, vec![1, 3, 3, 1]);

        let real = |x: f64| Complex64::new(x, 0.0);
        let want0 = EigenMultiset::from_items(vec![(real(0.0), 2), (real(1.0), 1)], 1e-12);
        assert!(parts[0].eigenvalues.approx_eq(&want0, 1e-12));

        let s17 = 17f64.sqrt();
        let want1 = EigenMultiset::from_items(
            vec![
                (real(0.0), 1),
                (real((1.0 + s17) / 6.0), 1),
                (real((1.0 - s17) / 6.0), 1),
            ],
            1e-12,
        );
        assert!(parts[1].eigenvalues.approx_eq(&want1, 1e-12));

        let want2 = EigenMultiset::from_items(
            vec![
                (real(-2.0 / 3.0), 1),
                (real(2.0 / 3.0), 1),
                (real(-1.0 / 3.0), 1),
            ],
            1e-12,
        );
        assert!(parts[2].eigenvalues.approx_eq(&want2, 1e-12));

        let want3 =
            EigenMultiset::from_items(vec![(real(-2.0 / 3.0), 2), (real(1.0 / 3.0), 1)], 1e-12);
        assert!(parts[3].eigenvalues.approx_eq(&want3, 1e-12));

        let union = lamp_parts_to_multiset(&parts, 1e-10).unwrap();
        assert_eq!(union.total(), 24);
    }

    #[test]
    fn closed_form_weighted_total() {
        for n in 2..=6 {
            let parts = complete_lamplighter_spectrum(n).unwrap();
            let union = lamp_parts_to_multiset(&parts, 1e-10).unwrap();
            assert_eq!(union.total(), n * (1 << n));
            // eigenvalue 1 exactly once
            let ones: usize = union
                .items()
                .iter()
                .filter(|(z, _)| (z - Complex64::ONE).norm() < 1e-9)
                .map(|&(_, m)| m)
                .sum();
            assert_eq!(ones, 1, "n = {n}");
        }
    }

    #[test]
    fn three_routes_agree_for_k3() {
        let g = Graph::complete(3).unwrap();
        let closed =
            lamp_parts_to_multiset(&complete_lamplighter_spectrum(3).unwrap(), 1e-10).unwrap();
        let by_blocks = lamplighter_spectrum_by_reduction(&g, 1e-8).unwrap();
        let by_oracle = lamplighter_spectrum_dense(&g, &Graph::segment(), 1e-8).unwrap();
        assert!(closed.approx_eq(&by_blocks, 1e-8));
        assert!(closed.approx_eq(&by_oracle, 1e-8));
    }

    #[test]
    fn dot_output_counts() {
        let product = graph_wreath(&Graph::cycle(3).unwrap(), &Graph::segment()).unwrap();
        let dot = product.to_dot();
        assert_eq!(dot.matches(" -- ").count(), 36);
        assert_eq!(dot.matches(";\n").count(), 24 + 36);
        assert!(dot.contains("\"000,0\""));
    }
}
