//! Cuntz–Krieger relations: emission as text and numerical checking.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::{Emission, Graph};
use crate::linalg::{self, CMatrix};
use crate::rep::{check_relative_covariance, verify_representation, CovarianceReport, Representation, Tracker};

/// One relation of the presentation of `C*(E)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `{p_v}` are mutually orthogonal projections.
    OrthogonalProjections(Vec<String>),
    /// `{s_e}` are partial isometries with mutually orthogonal ranges.
    OrthogonalRanges(Vec<String>),
    /// `p_v = Σ_{s(e)=v} s_e s_e*` at a regular vertex.
    Summation { vertex: String, edges: Vec<String> },
    /// `s_e s_e* ≤ p_v` for the infinitely many edges leaving `v`.
    InfiniteEmitter { vertex: String },
    /// `s_e* s_e = p_{r(e)}`.
    SourceProjection { edge: String, vertex: String },
    /// `s_e s_e* ≤ p_{s(e)}`.
    RangeBound { edge: String, vertex: String },
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |prefix: &str, names: &[String]| -> String {
            names
                .iter()
                .map(|n| format!("{prefix}{n}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        match self {
            Relation::OrthogonalProjections(vs) => write!(f, "mutually orthogonal projections: {}", join("p_", vs)),
            Relation::OrthogonalRanges(es) => {
                write!(
                    f,
                    "partial isometries with mutually orthogonal ranges: {}",
                    join("s_", es)
                )
            }
            Relation::Summation { vertex, edges } => {
                let terms: Vec<String> = edges.iter().map(|e| format!("s_{e} s_{e}*")).collect();
                write!(f, "p_{vertex} = {}", terms.join(" + "))
            }
            Relation::InfiniteEmitter { vertex } => {
                write!(
                    f,
                    "s_e s_e* <= p_{vertex} for every e in s^-1({vertex}) (infinite emitter)"
                )
            }
            Relation::SourceProjection { edge, vertex } => write!(f, "s_{edge}* s_{edge} = p_{vertex}"),
            Relation::RangeBound { edge, vertex } => write!(f, "s_{edge} s_{edge}* <= p_{vertex}"),
        }
    }
}

/// The presentation of `C*(E)`, vertex relations first: orthogonality of the
/// `p_v`, then summation at regular vertices and the bound at infinite
/// emitters (nothing at sinks). Edge relations follow: orthogonality of the
/// ranges, then two lines per edge.
pub fn ck_relations(graph: &Graph) -> Vec<Relation> {
    let mut out = Vec::new();
    out.push(Relation::OrthogonalProjections(graph.vertices().to_vec()));
    for (v, name) in graph.vertices().iter().enumerate() {
        match graph.emission(v) {
            Emission::Finite(0) => {}
            Emission::Finite(_) => out.push(Relation::Summation {
                vertex: name.clone(),
                edges: graph.out_edges(v).map(|e| graph.edges()[e].name.clone()).collect(),
            }),
            Emission::Infinite => out.push(Relation::InfiniteEmitter { vertex: name.clone() }),
        }
    }
    if !graph.edges().is_empty() {
        out.push(Relation::OrthogonalRanges(
            graph.edges().iter().map(|e| e.name.clone()).collect(),
        ));
    }
    for e in graph.edges() {
        out.push(Relation::SourceProjection {
            edge: e.name.clone(),
            vertex: graph.vertices()[e.range].clone(),
        });
        out.push(Relation::RangeBound {
            edge: e.name.clone(),
            vertex: graph.vertices()[e.source].clone(),
        });
    }
    out
}

/// One relation per line, newline-terminated.
pub fn render_relations(relations: &[Relation]) -> String {
    let mut s = String::new();
    for r in relations {
        s.push_str(&format!("{r}\n"));
    }
    s
}

/// Candidate Cuntz–Krieger family on `ℂ^dim`, keyed by vertex and edge names.
#[derive(Clone, Debug, PartialEq)]
pub struct CkFamily {
    pub dim: usize,
    pub projections: BTreeMap<String, CMatrix>,
    pub isometries: BTreeMap<String, CMatrix>,
}

impl CkFamily {
    fn validate(&self, graph: &Graph) -> Result<()> {
        for v in graph.vertices() {
            if !self.projections.contains_key(v) {
                return Err(Error::UnknownName {
                    kind: "projection for vertex",
                    name: v.clone(),
                });
            }
        }
        for e in graph.edges() {
            if !self.isometries.contains_key(&e.name) {
                return Err(Error::UnknownName {
                    kind: "partial isometry for edge",
                    name: e.name.clone(),
                });
            }
        }
        if let Some(v) = self.projections.keys().find(|v| graph.vertex_index(v).is_none()) {
            return Err(Error::UnknownName {
                kind: "vertex",
                name: v.clone(),
            });
        }
        if let Some(e) = self.isometries.keys().find(|e| graph.edge_index(e).is_none()) {
            return Err(Error::UnknownName {
                kind: "edge",
                name: e.clone(),
            });
        }
        for (name, m) in self.projections.iter().chain(&self.isometries) {
            if m.shape() != (self.dim, self.dim) {
                return Err(Error::Shape {
                    what: format!("matrix for {name}"),
                    expected_rows: self.dim,
                    expected_cols: self.dim,
                    rows: m.nrows(),
                    cols: m.ncols(),
                });
            }
        }
        Ok(())
    }
}

/// Check the Cuntz–Krieger relations of `family` for `graph`.
///
/// When the graph has no infinite emitters the induced pair
/// `π(f) = Σ f(v) p_v`, `t(ξ) = Σ ξ(e) s_e` is also run through
/// [`verify_representation`] (labels prefixed `rep.`) and through
/// [`check_relative_covariance`] with `J_X` (labels prefixed `cov.`).
pub fn check_ck_family(graph: &Graph, family: &CkFamily, tol: f64) -> Result<CovarianceReport> {
    family.validate(graph)?;
    let p: Vec<&CMatrix> = graph.vertices().iter().map(|v| &family.projections[v]).collect();
    let s: Vec<&CMatrix> = graph.edges().iter().map(|e| &family.isometries[&e.name]).collect();
    let ranges: Vec<CMatrix> = s.iter().map(|m| *m * m.adjoint()).collect();
    let norm = linalg::spectral_norm;

    let mut projection = Tracker::new("projection");
    for (v, pv) in p.iter().enumerate() {
        let d = norm(&(*pv * *pv - *pv)).max(norm(&(pv.adjoint() - *pv)));
        projection.record(d, tol * linalg::tol_scale([norm(pv)]), || {
            format!("p_{}", graph.vertices()[v])
        });
    }

    let mut orthogonal = Tracker::new("orthogonal_projections");
    for u in 0..p.len() {
        for v in u + 1..p.len() {
            let d = norm(&(p[u] * p[v]));
            orthogonal.record(d, tol, || {
                format!("p_{} p_{}", graph.vertices()[u], graph.vertices()[v])
            });
        }
    }

    let mut source = Tracker::new("source_projection");
    let mut bound = Tracker::new("range_bound");
    for (i, e) in graph.edges().iter().enumerate() {
        let lhs = s[i].adjoint() * s[i];
        let d = norm(&(&lhs - p[e.range]));
        source.record(d, tol * linalg::tol_scale([norm(&lhs)]), || format!("s_{}", e.name));

        let gap = p[e.source] - &ranges[i];
        let d = (-linalg::min_hermitian_eigenvalue(&gap)).max(0.0);
        bound.record(d, tol, || format!("s_{}", e.name));
    }

    let mut disjoint = Tracker::new("orthogonal_ranges");
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let d = norm(&(&ranges[i] * &ranges[j]));
            let (a, b) = (&graph.edges()[i].name, &graph.edges()[j].name);
            disjoint.record(d, tol, || format!("s_{a} s_{a}* s_{b} s_{b}*"));
        }
    }

    let mut summation = Tracker::new("summation");
    for (v, pv) in p.iter().enumerate() {
        if let Emission::Finite(n) = graph.emission(v) {
            if n == 0 {
                continue;
            }
            let mut total = linalg::zeros(family.dim, family.dim);
            for e in graph.out_edges(v) {
                total += &ranges[e];
            }
            let d = norm(&(*pv - &total));
            summation.record(d, tol * linalg::tol_scale([norm(&total)]), || {
                format!("p_{}", graph.vertices()[v])
            });
        }
    }

    let mut report = CovarianceReport::new(tol);
    report.checks = alloc::vec![
        projection.finish(),
        orthogonal.finish(),
        source.finish(),
        bound.finish(),
        disjoint.finish(),
        summation.finish()
    ];

    if graph.infinite_emitters().is_empty() {
        let gc = graph.correspondence()?;
        let x = gc.correspondence;
        // Blocks are 1×1, so the matrix units are the vertex indicators.
        let pi: Vec<CMatrix> = p.iter().map(|m| (*m).clone()).collect();
        let mut t = Vec::with_capacity(x.module().dimension());
        for u in x.module().basis() {
            t.push(s[gc.fiber_edges[u.block][u.row]].clone());
        }
        let rep = Representation::new(x.clone(), family.dim, pi, t)?;
        report.absorb("rep.", verify_representation(&rep, tol)?);
        report.absorb("cov.", check_relative_covariance(&rep, &x.jx(), tol)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn graph(vertices: &[&str], edges: &[(&str, &str, &str)], infinite: &[&str]) -> Graph {
        Graph::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
                .collect(),
            infinite.iter().map(|s| s.to_string()).collect(),
        )
        .unwrap()
    }

    fn single_edge_family(scale: f64) -> (Graph, CkFamily) {
        let g = graph(&["u", "v"], &[("e", "u", "v")], &[]);
        let family = CkFamily {
            dim: 2,
            projections: [
                ("v".to_string(), linalg::unit(2, 2, 0, 0)),
                ("u".to_string(), linalg::unit(2, 2, 1, 1)),
            ]
            .into(),
            isometries: [("e".to_string(), linalg::unit(2, 2, 1, 0).scale(scale))].into(),
        };
        (g, family)
    }

    #[test]
    fn cuntz_two_relations() {
        let g = graph(&["v"], &[("1", "v", "v"), ("2", "v", "v")], &[]);
        let text = render_relations(&ck_relations(&g));
        assert!(text.contains("p_v = s_1 s_1* + s_2 s_2*\n"));
        assert!(text.contains("s_1* s_1 = p_v\n"));
        assert!(text.contains("s_2* s_2 = p_v\n"));
    }

    #[test]
    fn sinks_and_infinite_emitters() {
        let g = graph(&["u", "v", "w"], &[("e", "u", "v")], &["w"]);
        let rel = ck_relations(&g);
        assert!(!rel
            .iter()
            .any(|r| matches!(r, Relation::Summation { vertex, .. } if vertex == "v")));
        assert!(rel.contains(&Relation::InfiniteEmitter { vertex: "w".into() }));
        assert!(!rel
            .iter()
            .any(|r| matches!(r, Relation::Summation { vertex, .. } if vertex == "w")));
    }

    #[test]
    fn single_edge_family_passes() {
        let (g, family) = single_edge_family(1.0);
        let report = check_ck_family(&g, &family, 1e-9).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.checks.iter().chain(&report.generators).all(|d| d.value == 0.0));
    }

    #[test]
    fn doubled_isometry_fails_by_three() {
        let (g, family) = single_edge_family(2.0);
        let report = check_ck_family(&g, &family, 1e-9).unwrap();
        let d = report.check("source_projection").unwrap();
        assert!(!d.passed);
        assert!((d.value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn overlapping_projections() {
        let (g, mut family) = single_edge_family(1.0);
        let half = CMatrix::from_element(2, 2, linalg::c64(0.5, 0.0));
        family.projections.insert("u".into(), half.clone());
        let report = check_ck_family(&g, &family, 1e-9).unwrap();
        let d = report.check("orthogonal_projections").unwrap();
        let expected = linalg::spectral_norm(&(&half * linalg::unit(2, 2, 0, 0)));
        assert!(!d.passed);
        assert!((d.value - expected).abs() < 1e-12);
    }

    #[test]
    fn missing_and_unknown_names() {
        let (g, mut family) = single_edge_family(1.0);
        family.isometries.clear();
        assert!(matches!(
            check_ck_family(&g, &family, 1e-9),
            Err(Error::UnknownName { .. })
        ));
        let (g, mut family) = single_edge_family(1.0);
        family.projections.insert("w".into(), linalg::zeros(2, 2));
        assert!(check_ck_family(&g, &family, 1e-9).is_err());
        let (g, mut family) = single_edge_family(1.0);
        family.projections.insert("u".into(), linalg::zeros(3, 3));
        assert!(matches!(check_ck_family(&g, &family, 1e-9), Err(Error::Shape { .. })));
    }
}
