//! JSON and CSV interchange formats.
//!
//! Matrices: dense `{"rows", "cols", "data": [[re, im], ...]}` (row-major)
//! and sparse `{"rows", "cols", "triples": [[i, j, re, im], ...],
//! "index_base": 0}`. Graphs: `{"n", "labels", "edges", "degree"}`.
//! Sylvester systems: `{"pairs": [{"A": .., "B": ..}, ..], "C": ..}` with a
//! `{"wreath": {"A": .., "B": ..}, "C": ..}` shorthand. Spectra: CSV with
//! columns `re,im,multiplicity` sorted by (re, im), plus a JSON mirror.
//!
//! All emission is deterministic: fixed field order, fixed eigenvalue sort.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::Graph;
use crate::spectral::EigenMultiset;
use crate::sylvester::{SylvesterSystem, WreathSylvesterSpec};
use crate::tensor::{DenseMatrix, SparseMatrix};

#[derive(Serialize, Deserialize)]
struct DenseJson {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct SparseJson {
    rows: usize,
    cols: usize,
    triples: Vec<(usize, usize, f64, f64)>,
    index_base: usize,
}

fn parse_err(context: &str, err: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{context}: {err}"))
}

pub fn dense_to_json(m: &DenseMatrix) -> String {
    let data = m.entries().iter().map(|z| [z.re, z.im]).collect();
    serde_json::to_string_pretty(&DenseJson {
        rows: m.rows(),
        cols: m.cols(),
        data,
    })
    .expect("serialization cannot fail")
}

pub fn dense_from_json(text: &str) -> Result<DenseMatrix> {
    let raw: DenseJson = serde_json::from_str(text).map_err(|e| parse_err("dense matrix", e))?;
    let entries = raw
        .data
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    DenseMatrix::new(raw.rows, raw.cols, entries)
}

pub fn sparse_to_json(m: &SparseMatrix) -> String {
    let triples = m
        .triples()
        .iter()
        .map(|&(i, j, z)| (i, j, z.re, z.im))
        .collect();
    serde_json::to_string_pretty(&SparseJson {
        rows: m.rows(),
        cols: m.cols(),
        triples,
        index_base: 0,
    })
    .expect("serialization cannot fail")
}

pub fn sparse_from_json(text: &str) -> Result<SparseMatrix> {
    let raw: SparseJson = serde_json::from_str(text).map_err(|e| parse_err("sparse matrix", e))?;
    if raw.index_base != 0 {
        return Err(Error::Parse(format!(
            "sparse matrix: only index_base 0 is supported, got {}",
            raw.index_base
        )));
    }
    let triples = raw
        .triples
        .into_iter()
        .map(|(i, j, re, im)| (i, j, Complex64::new(re, im)))
        .collect();
    SparseMatrix::new(raw.rows, raw.cols, triples)
}

/// Either matrix flavor, recognized by its fields.
pub enum MatrixFile {
    Dense(DenseMatrix),
    Sparse(SparseMatrix),
}

impl MatrixFile {
    pub fn into_dense(self) -> Result<DenseMatrix> {
        match self {
            MatrixFile::Dense(m) => Ok(m),
            MatrixFile::Sparse(m) => m.to_dense(),
        }
    }
}

pub fn matrix_from_json(text: &str) -> Result<MatrixFile> {
    let probe: serde_json::Value =
        serde_json::from_str(text).map_err(|e| parse_err("matrix", e))?;
    match probe.get("data") {
        Some(_) => Ok(MatrixFile::Dense(dense_from_json(text)?)),
        None if probe.get("triples").is_some() => Ok(MatrixFile::Sparse(sparse_from_json(text)?)),
        None => Err(Error::Parse(
            "matrix: expected a \"data\" (dense) or \"triples\" (sparse) field".into(),
        )),
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    degree: usize,
}

pub fn graph_to_json(g: &Graph) -> String {
    serde_json::to_string_pretty(&GraphJson {
        n: g.n(),
        labels: g.labels().to_vec(),
        edges: g.edges().to_vec(),
        degree: g.degree(),
    })
    .expect("serialization cannot fail")
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let raw: GraphJson = serde_json::from_str(text).map_err(|e| parse_err("graph", e))?;
    if raw.labels.len() != raw.n {
        return Err(Error::Parse(format!(
            "graph: {} labels for n = {}",
            raw.labels.len(),
            raw.n
        )));
    }
    let g = Graph::new(raw.labels, raw.edges)?;
    if g.degree() != raw.degree {
        return Err(Error::Parse(format!(
            "graph: declared degree {} but edges give {}",
            raw.degree,
            g.degree()
        )));
    }
    Ok(g)
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    #[serde(rename = "A")]
    a: DenseJson,
    #[serde(rename = "B")]
    b: DenseJson,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pairs: Option<Vec<PairJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wreath: Option<PairJson>,
    #[serde(rename = "C")]
    c: DenseJson,
}

/// A parsed system file: explicit coefficient pairs, or the wreath
/// shorthand carrying its two factors.
pub enum SystemFile {
    Explicit(SylvesterSystem),
    Wreath(WreathSylvesterSpec),
}

fn dense_from_raw(raw: DenseJson) -> Result<DenseMatrix> {
    let entries = raw
        .data
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    DenseMatrix::new(raw.rows, raw.cols, entries)
}

fn dense_to_raw(m: &DenseMatrix) -> DenseJson {
    DenseJson {
        rows: m.rows(),
        cols: m.cols(),
        data: m.entries().iter().map(|z| [z.re, z.im]).collect(),
    }
}

pub fn system_from_json(text: &str) -> Result<SystemFile> {
    let raw: SystemJson = serde_json::from_str(text).map_err(|e| parse_err("system", e))?;
    let c = dense_from_raw(raw.c)?;
    match (raw.pairs, raw.wreath) {
        (Some(pairs), None) => {
            let pairs = pairs
                .into_iter()
                .map(|p| Ok((dense_from_raw(p.a)?, dense_from_raw(p.b)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(SystemFile::Explicit(SylvesterSystem::new(pairs, c)?))
        }
        (None, Some(w)) => Ok(SystemFile::Wreath(WreathSylvesterSpec {
            a: dense_from_raw(w.a)?,
            b: dense_from_raw(w.b)?,
            c,
        })),
        _ => Err(Error::Parse(
            "system: exactly one of \"pairs\" or \"wreath\" must be present".into(),
        )),
    }
}

pub fn system_to_json(sys: &SylvesterSystem) -> String {
    let pairs = sys
        .pairs()
        .iter()
        .map(|(a, b)| PairJson {
            a: dense_to_raw(a),
            b: dense_to_raw(b),
        })
        .collect();
    serde_json::to_string_pretty(&SystemJson {
        pairs: Some(pairs),
        wreath: None,
        c: dense_to_raw(sys.rhs()),
    })
    .expect("serialization cannot fail")
}

/// CSV rendering of a spectrum: header `re,im,multiplicity`, rows sorted by
/// (re, im). The multiset already stores items in that order.
pub fn spectrum_to_csv(ms: &EigenMultiset) -> String {
    let mut out = String::from("re,im,multiplicity\n");
    for &(z, mult) in ms.items() {
        out.push_str(&format!("{},{},{}\n", z.re, z.im, mult));
    }
    out
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    tol: f64,
    total: usize,
    eigenvalues: Vec<EigenvalueJson<'a>>,
}

#[derive(Serialize)]
struct EigenvalueJson<'a> {
    re: f64,
    im: f64,
    multiplicity: usize,
    #[serde(skip)]
    _marker: std::marker::PhantomData<&'a ()>,
}

/// JSON mirror of the CSV spectrum output, tagged with the clustering
/// tolerance that produced it.
pub fn spectrum_to_json(ms: &EigenMultiset, tol: f64) -> String {
    let eigenvalues = ms
        .items()
        .iter()
        .map(|&(z, mult)| EigenvalueJson {
            re: z.re,
            im: z.im,
            multiplicity: mult,
            _marker: std::marker::PhantomData,
        })
        .collect();
    serde_json::to_string_pretty(&SpectrumJson {
        tol,
        total: ms.total(),
        eigenvalues,
    })
    .expect("serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn dense_round_trip() {
        let m = DenseMatrix::new(
            2,
            3,
            (0..6).map(|k| c(k as f64, -(k as f64) / 2.0)).collect(),
        )
        .unwrap();
        let text = dense_to_json(&m);
        assert_eq!(dense_from_json(&text).unwrap(), m);
        match matrix_from_json(&text).unwrap() {
            MatrixFile::Dense(d) => assert_eq!(d, m),
            MatrixFile::Sparse(_) => panic!("detected as sparse"),
        }
    }

    #[test]
    fn sparse_round_trip_and_base_check() {
        let m = SparseMatrix::new(3, 3, vec![(0, 2, c(1.0, -1.0)), (2, 0, c(0.5, 0.0))]).unwrap();
        let text = sparse_to_json(&m);
        assert_eq!(sparse_from_json(&text).unwrap(), m);
        let bad = text.replace("\"index_base\": 0", "\"index_base\": 1");
        assert!(matches!(sparse_from_json(&bad), Err(Error::Parse(_))));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = dense_from_json("{\"rows\": 2, \"cols\": }").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line") && msg.contains("column"), "got: {msg}");
    }

    #[test]
    fn graph_round_trip_and_degree_validation() {
        let g = Graph::cycle(4).unwrap();
        let text = graph_to_json(&g);
        assert_eq!(graph_from_json(&text).unwrap(), g);
        let bad = text.replace("\"degree\": 2", "\"degree\": 3");
        assert!(matches!(graph_from_json(&bad), Err(Error::Parse(_))));
    }

    #[test]
    fn system_shorthand_parses() {
        let a = DenseMatrix::identity(2).unwrap();
        let text = format!(
            "{{\"wreath\": {{\"A\": {}, \"B\": {}}}, \"C\": {}}}",
            dense_to_json(&a),
            dense_to_json(&a),
            dense_to_json(&DenseMatrix::zeros(2, 2).unwrap()),
        );
        match system_from_json(&text).unwrap() {
            SystemFile::Wreath(spec) => assert_eq!(spec.a, a),
            SystemFile::Explicit(_) => panic!("detected as explicit"),
        }
    }

    #[test]
    fn spectrum_csv_is_sorted_and_deterministic() {
        let ms = EigenMultiset::from_values(&[c(2.0, 0.0), c(-1.0, 1.0), c(-1.0, -1.0)], 1e-12);
        let csv = spectrum_to_csv(&ms);
        assert_eq!(csv, "re,im,multiplicity\n-1,-1,1\n-1,1,1\n2,0,1\n");
        let json = spectrum_to_json(&ms, 1e-8);
        assert!(json.contains("\"total\": 3"));
    }
}
