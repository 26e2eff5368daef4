//! Directed graphs and their correspondences.
//!
//! For `E = (E⁰, E¹, r, s)` and `A = C(E⁰)` the module `X(E)` has
//! `⟨ξ, η⟩(v) = Σ_{r(e)=v} conj(ξ(e)) η(e)` and the left action multiplies
//! `ξ(e)` by `f(s(e))`. So fiber `v` has one row per edge with range `v`, and
//! `M[v][u]` counts the edges `u → v`.
//!
//! Infinite emitters have no finite matrix model; they take part only in
//! vertex classification and the symbolic output.

mod ck;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

pub use ck::{check_ck_family, ck_relations, render_relations, CkFamily, Relation};

use crate::corr::Correspondence;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub source: usize,
    pub range: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    infinite: BTreeSet<usize>,
}

/// `|s⁻¹(v)|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Emission {
    Finite(usize),
    Infinite,
}

/// Vertex classes. `sinks`/`sources` are independent of each other;
/// `regular` and `infinite` partition the vertices that are not sinks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexClassification {
    pub sinks: BTreeSet<usize>,
    pub sources: BTreeSet<usize>,
    pub regular: BTreeSet<usize>,
    pub infinite: BTreeSet<usize>,
}

/// The ideals of `C_0(E⁰)` attached to `X(E)`, as vertex sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphIdeals {
    /// `J_X`: vertices with `0 < |s⁻¹(v)| < ∞`.
    pub jx: BTreeSet<usize>,
    /// `ker φ_X`: vertices with `|s⁻¹(v)| = 0`.
    pub ker_phi: BTreeSet<usize>,
    /// `φ_X⁻¹(K(X))`: vertices with `|s⁻¹(v)| < ∞`.
    pub compact_preimage: BTreeSet<usize>,
}

/// `X(E)` with the edge carried by each fiber row.
#[derive(Clone, Debug)]
pub struct GraphCorrespondence {
    pub correspondence: Correspondence,
    /// `fiber_edges[v][row]` is the edge spanning that row of fiber `v`.
    pub fiber_edges: Vec<Vec<usize>>,
}

impl Graph {
    /// Validates names: vertices and edges unique, endpoints known.
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(String, String, String)>,
        infinite_emitters: Vec<String>,
    ) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateName {
                    kind: "vertex",
                    name: v.clone(),
                });
            }
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (name, source, range) in edges {
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateName { kind: "edge", name });
            }
            let lookup = |v: &String| {
                index.get(v).copied().ok_or_else(|| Error::UnknownVertex {
                    edge: name.clone(),
                    vertex: v.clone(),
                })
            };
            let (s, r) = (lookup(&source)?, lookup(&range)?);
            out.push(Edge {
                name,
                source: s,
                range: r,
            });
        }
        let mut infinite = BTreeSet::new();
        for v in infinite_emitters {
            let i = *index.get(&v).ok_or(Error::UnknownName {
                kind: "infinite emitter",
                name: v.clone(),
            })?;
            if !infinite.insert(i) {
                return Err(Error::DuplicateName {
                    kind: "infinite emitter",
                    name: v,
                });
            }
        }
        Ok(Self {
            vertices,
            edges: out,
            infinite,
        })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn infinite_emitters(&self) -> &BTreeSet<usize> {
        &self.infinite
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    /// Vertex names of an index set, in index order.
    pub fn names(&self, set: &BTreeSet<usize>) -> Vec<String> {
        set.iter().map(|&v| self.vertices[v].clone()).collect()
    }

    /// Explicit edges leaving `v`.
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.source == v)
            .map(|(i, _)| i)
    }

    /// `|s⁻¹(v)|`; the infinite flag overrides the explicit edge count.
    pub fn emission(&self, v: usize) -> Emission {
        if self.infinite.contains(&v) {
            Emission::Infinite
        } else {
            Emission::Finite(self.out_edges(v).count())
        }
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.range == v).count()
    }

    pub fn classify(&self) -> VertexClassification {
        let mut c = VertexClassification::default();
        for v in 0..self.vertices.len() {
            match self.emission(v) {
                Emission::Finite(0) => {
                    c.sinks.insert(v);
                }
                Emission::Finite(_) => {
                    c.regular.insert(v);
                }
                Emission::Infinite => {
                    c.infinite.insert(v);
                }
            }
            if self.in_degree(v) == 0 {
                c.sources.insert(v);
            }
        }
        c
    }

    /// `J_X`, `ker φ_X` and `φ_X⁻¹(K(X))`, computed from emission counts.
    pub fn ideals(&self) -> GraphIdeals {
        let all = 0..self.vertices.len();
        let pick = |f: &dyn Fn(Emission) -> bool| -> BTreeSet<usize> {
            all.clone().filter(|&v| f(self.emission(v))).collect()
        };
        GraphIdeals {
            jx: pick(&|e| matches!(e, Emission::Finite(n) if n > 0)),
            ker_phi: pick(&|e| e == Emission::Finite(0)),
            compact_preimage: pick(&|e| matches!(e, Emission::Finite(_))),
        }
    }

    /// The finite-dimensional correspondence `X(E)` over `ℂ^{|E⁰|}`.
    ///
    /// Rows of fiber `v` are the edges into `v`, sorted by source vertex and
    /// then by edge order, which is already the canonical multiplicity form.
    pub fn correspondence(&self) -> Result<GraphCorrespondence> {
        if let Some(&v) = self.infinite.iter().next() {
            return Err(Error::InfiniteEmitter(self.vertices[v].clone()));
        }
        let m = self.vertices.len();
        let mut fiber_edges: Vec<Vec<usize>> = alloc::vec![Vec::new(); m];
        let mut multiplicity = alloc::vec![alloc::vec![0usize; m]; m];
        for (i, e) in self.edges.iter().enumerate() {
            fiber_edges[e.range].push(i);
            multiplicity[e.range][e.source] += 1;
        }
        for list in &mut fiber_edges {
            list.sort_by_key(|&i| (self.edges[i].source, i));
        }
        let fibers = fiber_edges.iter().map(Vec::len).collect();
        let correspondence = Correspondence::from_parts(alloc::vec![1; m], fibers, multiplicity, None)?;
        Ok(GraphCorrespondence {
            correspondence,
            fiber_edges,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::detect_bimodule;
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

    #[test]
    fn validation() {
        let err = Graph::new(
            alloc::vec!["u".into()],
            alloc::vec![("e".into(), "u".into(), "w".into())],
            alloc::vec![],
        );
        assert_eq!(
            err,
            Err(Error::UnknownVertex {
                edge: "e".into(),
                vertex: "w".into()
            })
        );
        let dup = Graph::new(
            alloc::vec!["u".into()],
            alloc::vec![
                ("e".into(), "u".into(), "u".into()),
                ("e".into(), "u".into(), "u".into())
            ],
            alloc::vec![],
        );
        assert!(matches!(dup, Err(Error::DuplicateName { kind: "edge", .. })));
        assert!(Graph::new(alloc::vec!["u".into(), "u".into()], alloc::vec![], alloc::vec![]).is_err());
    }

    #[test]
    fn classification() {
        let isolated = graph(&["v"], &[], &[]).classify();
        assert!(isolated.sinks.contains(&0) && isolated.sources.contains(&0));
        let looped = graph(&["v"], &[("e", "v", "v")], &[]).classify();
        assert!(looped.regular.contains(&0) && looped.sinks.is_empty() && looped.sources.is_empty());
        let inf = graph(&["v"], &[], &["v"]).classify();
        assert!(inf.infinite.contains(&0) && !inf.regular.contains(&0) && !inf.sinks.contains(&0));
    }

    #[test]
    fn ideals() {
        let inf = graph(&["v"], &[("e", "v", "v")], &["v"]).ideals();
        assert!(inf.jx.is_empty() && inf.ker_phi.is_empty() && inf.compact_preimage.is_empty());
        let edge = graph(&["u", "v"], &[("e", "u", "v")], &[]).ideals();
        assert_eq!(edge.jx, [0].into());
        assert_eq!(edge.ker_phi, [1].into());
        assert_eq!(edge.compact_preimage, [0, 1].into());
        let empty = graph(&["a", "b"], &[], &[]).ideals();
        assert!(empty.jx.is_empty());
        assert_eq!(empty.ker_phi, [0, 1].into());
    }

    #[test]
    fn correspondences() {
        let o3 = graph(&["v"], &[("a", "v", "v"), ("b", "v", "v"), ("c", "v", "v")], &[])
            .correspondence()
            .unwrap();
        assert_eq!(o3.correspondence.module().fibers(), &[3]);
        assert_eq!(o3.correspondence.multiplicity(), &[alloc::vec![3]]);

        let cycle = graph(&["u", "v"], &[("e", "u", "v"), ("f", "v", "u")], &[])
            .correspondence()
            .unwrap();
        assert_eq!(cycle.correspondence.module().fibers(), &[1, 1]);
        assert_eq!(
            cycle.correspondence.multiplicity(),
            &[alloc::vec![0, 1], alloc::vec![1, 0]]
        );
        assert!(detect_bimodule(&cycle.correspondence).unwrap().is_some());

        let sink = graph(&["u", "v"], &[("e", "u", "v")], &[]).correspondence().unwrap();
        let flags = sink.correspondence.flags();
        assert!(!flags.faithful && !flags.full);

        assert_eq!(
            graph(&["v"], &[], &["v"]).correspondence().unwrap_err(),
            Error::InfiniteEmitter("v".into())
        );
    }

    #[test]
    fn fiber_rows_sorted_by_source() {
        let g = graph(
            &["a", "b", "c"],
            &[("x", "c", "a"), ("y", "b", "a"), ("z", "c", "a"), ("w", "a", "a")],
            &[],
        );
        let gc = g.correspondence().unwrap();
        let names: Vec<&str> = gc.fiber_edges[0].iter().map(|&i| g.edges()[i].name.as_str()).collect();
        assert_eq!(names, ["w", "y", "x", "z"]);
    }
}
