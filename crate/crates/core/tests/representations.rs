mod common;

use std::collections::BTreeMap;

use corrkit_core::fock::{build_fock, FockRepresentation};
use corrkit_core::graph::{check_ck_family, CkFamily, Graph};
use corrkit_core::hmod::theta;
use corrkit_core::linalg::{self, c64, CMatrix};
use corrkit_core::random::Sampler;
use corrkit_core::rep::{check_relative_covariance, verify_representation, PsiMap};
use corrkit_core::{Correspondence, MatrixUnit};
use corrkit_oracles::{op_norm, op_norm_blocks, span_rank};

/// Random correspondences whose Fock space of the given depth stays small.
fn small_fock(s: &mut Sampler, depth: usize, max_total: usize) -> FockRepresentation {
    loop {
        let x = s.correspondence(3, 2, 3);
        let f = build_fock(&x, depth).unwrap();
        if f.space().total_dim() <= max_total {
            return f;
        }
    }
}

fn columns(m: &CMatrix, range: std::ops::Range<usize>) -> CMatrix {
    m.columns(range.start, range.len()).into_owned()
}

/// `ψ_t(T) = Σ_j Σ_{p,q} T_j[p, q] t(E^j_{p0}) t(E^j_{q0})*`.
fn psi_by_definition(x: &Correspondence, t: &[CMatrix], op_blocks: &[CMatrix], dim: usize) -> CMatrix {
    let basis = x.module().basis();
    let index = |u: MatrixUnit| basis.iter().position(|v| *v == u).unwrap();
    let mut out = CMatrix::zeros(dim, dim);
    for (j, b) in op_blocks.iter().enumerate() {
        if x.algebra().block_size(j) == 0 {
            continue;
        }
        for p in 0..b.nrows() {
            for q in 0..b.ncols() {
                let tp = &t[index(MatrixUnit {
                    block: j,
                    row: p,
                    col: 0,
                })];
                let tq = &t[index(MatrixUnit {
                    block: j,
                    row: q,
                    col: 0,
                })];
                out += tp * tq.adjoint() * b[(p, q)];
            }
        }
    }
    out
}

#[test]
fn fock_axioms_against_norm_oracle() {
    let mut s = Sampler::seeded(200);
    for _ in 0..15 {
        let f = small_fock(&mut s, 3, 120);
        let r = f.representation();
        let x = r.correspondence();
        let below_cut = 0..f.space().level_range(3).start;
        for _ in 0..3 {
            let (xi, eta) = (s.module_element(x.module()), s.module_element(x.module()));
            let a = s.element(x.algebra());
            let scale = 1.0f64.max(xi.norm() * eta.norm()) * 1.0f64.max(a.norm());
            let (t_xi, t_eta) = (r.t(&xi).unwrap(), r.t(&eta).unwrap());

            let axiom_i = t_xi.adjoint() * &t_eta - r.pi(&xi.inner(&eta).unwrap()).unwrap();
            assert!(op_norm(&columns(&axiom_i, below_cut.clone())) <= 1e-9 * scale);

            let axiom_ii = r.pi(&a).unwrap() * &t_xi - r.t(&x.left_act(&a).unwrap().apply(&xi).unwrap()).unwrap();
            assert!(op_norm(&axiom_ii) <= 1e-9 * scale);

            let automatic = &t_xi * r.pi(&a).unwrap() - r.t(&xi.right_act(&a).unwrap()).unwrap();
            assert!(op_norm(&automatic) <= 1e-8 * scale);

            let norm_xi = op_norm_blocks(xi.blocks());
            assert!((op_norm(&t_xi) - norm_xi).abs() <= 1e-8 * norm_xi.max(1.0));
        }
    }
}

#[test]
fn psi_matches_definition_and_is_injective() {
    let mut s = Sampler::seeded(201);
    for _ in 0..15 {
        let f = small_fock(&mut s, 2, 80);
        let r = f.representation();
        let x = r.correspondence();
        let map = PsiMap::new(r).unwrap();
        assert!(map.residual() <= 1e-12);

        let (xi, eta) = (s.module_element(x.module()), s.module_element(x.module()));
        let th = theta(&xi, &eta).unwrap();
        let direct = r.t(&xi).unwrap() * r.t(&eta).unwrap().adjoint();
        let scale = 1.0f64.max(xi.norm() * eta.norm());
        assert!(op_norm(&(map.apply(&th).unwrap() - &direct)) <= 1e-10 * scale);
        assert!(op_norm(&(psi_by_definition(x, r.t_basis(), th.blocks(), r.dim()) - &direct)) <= 1e-10 * scale);

        // ψ_t is injective on K(X)
        let module = x.module();
        let rows: Vec<Vec<_>> = module
            .operator_basis()
            .iter()
            .map(|&u| {
                map.apply(&module.operator_unit(u).unwrap())
                    .unwrap()
                    .iter()
                    .copied()
                    .collect()
            })
            .collect();
        let dim: usize = module.fibers().iter().map(|k| k * k).sum();
        assert_eq!(span_rank(&rows), dim);
    }
}

#[test]
fn covariance_profile_against_definition() {
    let mut s = Sampler::seeded(202);
    for _ in 0..15 {
        let f = small_fock(&mut s, 3, 120);
        let r = f.representation();
        let x = r.correspondence();
        let profile = f.defect_profile().unwrap();
        let units = x.algebra().ideal_basis(&x.jx());
        assert_eq!(profile.len(), units.len());
        for (row, u) in profile.iter().zip(units) {
            let a = x.algebra().unit(u).unwrap();
            let phi = x.left_act(&a).unwrap();
            let d = r.pi(&a).unwrap() - psi_by_definition(x, r.t_basis(), phi.blocks(), r.dim());
            for n in 0..=3 {
                let level = f.space().level_range(n);
                assert!((op_norm(&columns(&d, level)) - row.levels[n]).abs() <= 1e-9);
            }
            let vacuum = columns(&r.pi(&a).unwrap(), f.space().level_range(0));
            assert!((op_norm(&vacuum) - row.vacuum_norm).abs() <= 1e-9);
            assert!((row.levels[0] - row.vacuum_norm).abs() <= 1e-9);
            assert!(row.levels[1..].iter().all(|&v| v <= 1e-9));
        }
        let cov = check_relative_covariance(r, &x.algebra().zero_ideal(), 1e-9).unwrap();
        assert!(cov.passed() && cov.generators.is_empty());
    }
}

/// Graphs in which every vertex emits at most one edge, and the family
/// `p_v = E_vv`, `s_e = E_{s(e) r(e)}` on `ℂ^V`.
fn functional_graph(s: &mut Sampler) -> (Graph, CkFamily) {
    let n = 1 + (s.scalar().re.abs() * 1e6) as usize % 6;
    let vertices: Vec<String> = (0..n).map(|v| format!("v{v}")).collect();
    let mut edges = Vec::new();
    let mut isometries = BTreeMap::new();
    for v in 0..n {
        let z = s.scalar();
        if z.re < -0.3 {
            continue;
        }
        let target = (z.im.abs() * 1e6) as usize % n;
        let name = format!("e{v}");
        edges.push((name.clone(), vertices[v].clone(), vertices[target].clone()));
        isometries.insert(name, linalg::unit(n, n, v, target));
    }
    let projections = (0..n)
        .map(|v| (vertices[v].clone(), linalg::unit(n, n, v, v)))
        .collect();
    let graph = Graph::new(vertices, edges, Vec::new()).unwrap();
    (
        graph,
        CkFamily {
            dim: n,
            projections,
            isometries,
        },
    )
}

#[test]
fn ck_families_factor_through_representations() {
    let mut s = Sampler::seeded(203);
    for _ in 0..50 {
        let (g, family) = functional_graph(&mut s);
        let report = check_ck_family(&g, &family, 1e-12).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.check("rep.axiom_i").is_some());
        assert!(report.check("cov.psi_well_defined").is_some());
        let regular = g.ideals().jx.len();
        assert_eq!(report.generators.len(), regular);
    }
}

#[test]
fn broken_families_report_exact_defects() {
    let mut s = Sampler::seeded(204);
    for _ in 0..20 {
        let (g, mut family) = functional_graph(&mut s);
        let Some(name) = family.isometries.keys().next().cloned() else {
            continue;
        };
        let scaled = family.isometries[&name].clone() * c64(2.0, 0.0);
        family.isometries.insert(name, scaled);
        let report = check_ck_family(&g, &family, 1e-9).unwrap();
        // (2E)*(2E) − p = 3p for a rank-one p
        assert!((report.value("source_projection") - 3.0).abs() <= 1e-12);
        assert!(!report.passed());
        let rep = report.check("rep.axiom_i").unwrap();
        assert!((rep.value - 3.0).abs() <= 1e-12);
    }
}

#[test]
fn verify_representation_detects_scaled_fock_creation() {
    let mut s = Sampler::seeded(205);
    for _ in 0..10 {
        let f = small_fock(&mut s, 2, 80);
        let r = f.representation();
        if r.correspondence().module().dimension() == 0 {
            continue;
        }
        let report = verify_representation(&r.with_scaled_t(1.5), 1e-9).unwrap();
        assert!(!report.check("axiom_i").unwrap().passed);
    }
}
