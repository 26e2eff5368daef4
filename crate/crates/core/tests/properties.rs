mod common;

use std::collections::BTreeSet;

use corrkit_core::corr::{detect_bimodule, from_partial_automorphism};
use corrkit_core::hmod::theta;
use corrkit_core::linalg;
use corrkit_core::random::Sampler;
use corrkit_oracles::{self as oracle, is_psd, op_norm, op_norm_blocks, span_rank, subsets, Mat};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn diff_norm(a: &[Mat], b: &[Mat]) -> f64 {
    let d: Vec<Mat> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    op_norm_blocks(&d)
}

proptest! {
    #![proptest_config(config(200))]

    #[test]
    fn theta_calculus(seed in any::<u64>()) {
        let mut s = Sampler::seeded(seed);
        let x = s.correspondence(3, 3, 4);
        let m = x.module();
        let (xi, eta, zeta, omega) = (s.module_element(m), s.module_element(m), s.module_element(m), s.module_element(m));
        let t = s.module_operator(m);
        let scale = 1.0f64.max(xi.norm() * eta.norm() * zeta.norm().max(1.0) * omega.norm().max(1.0) * t.norm().max(1.0));
        let tol = 1e-10 * scale;

        let th = theta(&xi, &eta).unwrap();
        // θ_{ξ,η} ζ = ξ ⟨η, ζ⟩
        let lhs = th.apply(&zeta).unwrap();
        let rhs = xi.right_act(&eta.inner(&zeta).unwrap()).unwrap();
        prop_assert!(diff_norm(lhs.blocks(), rhs.blocks()) <= tol);
        // the same, against the raw definition
        prop_assert!(diff_norm(th.blocks(), &oracle::theta(xi.blocks(), eta.blocks())) <= tol);
        // θ_{ξ,η}* = θ_{η,ξ}
        prop_assert!(diff_norm(th.adjoint().blocks(), theta(&eta, &xi).unwrap().blocks()) <= tol);
        // θ_{ξ,η} θ_{ζ,ω} = θ_{ξ⟨η,ζ⟩,ω}
        let prod = th.compose(&theta(&zeta, &omega).unwrap()).unwrap();
        let moved = xi.right_act(&eta.inner(&zeta).unwrap()).unwrap();
        prop_assert!(diff_norm(prod.blocks(), theta(&moved, &omega).unwrap().blocks()) <= tol);
        // T θ_{ξ,η} = θ_{Tξ,η} and θ_{ξ,η} T = θ_{ξ,T*η}
        let left = t.compose(&th).unwrap();
        prop_assert!(diff_norm(left.blocks(), theta(&t.apply(&xi).unwrap(), &eta).unwrap().blocks()) <= tol);
        let right = th.compose(&t).unwrap();
        prop_assert!(diff_norm(right.blocks(), theta(&xi, &t.adjoint().apply(&eta).unwrap()).unwrap().blocks()) <= tol);
    }

    #[test]
    fn cauchy_schwarz(seed in any::<u64>()) {
        let mut s = Sampler::seeded(seed);
        let x = s.correspondence(3, 3, 4);
        let (xi, eta) = (s.module_element(x.module()), s.module_element(x.module()));
        let ip = oracle::inner(xi.blocks(), eta.blocks());
        let xx = oracle::inner(xi.blocks(), xi.blocks());
        let yy = oracle::inner(eta.blocks(), eta.blocks());
        let c = op_norm_blocks(&xx);
        let tol = 1e-10 * 1.0f64.max(xi.norm().powi(2) * eta.norm().powi(2));
        for j in 0..ip.len() {
            // ⟨ξ,η⟩* ⟨ξ,η⟩ ≤ ‖⟨ξ,ξ⟩‖ ⟨η,η⟩
            let gap = &yy[j] * linalg::c64(c, 0.0) - ip[j].adjoint() * &ip[j];
            prop_assert!(is_psd(&gap, tol));
            // positivity of ⟨ξ,ξ⟩
            prop_assert!(is_psd(&xx[j], tol));
        }
        // ‖ξ‖² = ‖⟨ξ,ξ⟩‖
        prop_assert!((xi.norm().powi(2) - c).abs() <= tol);
        // the library inner product agrees with the definition
        prop_assert!(diff_norm(xi.inner(&eta).unwrap().blocks(), &ip) <= tol);
    }

    #[test]
    fn rank_one_operators_span_all_operators(seed in any::<u64>()) {
        let mut s = Sampler::seeded(seed);
        let x = s.correspondence(3, 3, 4);
        let m = x.module();
        let units: Vec<_> = m.basis().iter().map(|&u| m.unit(u).unwrap()).collect();
        let rows: Vec<_> = units
            .iter()
            .flat_map(|a| units.iter().map(move |b| theta(a, b).unwrap().coordinates()))
            .collect();
        let dim: usize = m.fibers().iter().map(|k| k * k).sum();
        prop_assert_eq!(span_rank(&rows), dim);
    }

    #[test]
    fn left_action_against_definition(seed in any::<u64>()) {
        let mut s = Sampler::seeded(seed);
        let x = s.correspondence(4, 3, 6);
        let a = s.element(x.algebra());
        let d = common::data(&x);
        let got = x.left_act(&a).unwrap();
        prop_assert!(diff_norm(got.blocks(), &d.phi(a.blocks())) <= 1e-10 * a.norm().max(1.0));
        // φ is a *-homomorphism
        let b = s.element(x.algebra());
        let ab = x.left_act(&a.mul(&b).unwrap()).unwrap();
        let prod = got.compose(&x.left_act(&b).unwrap()).unwrap();
        prop_assert!(ab.approx_eq(&prod, 1e-10));
        prop_assert!(x.left_act(&a.adjoint()).unwrap().approx_eq(&got.adjoint(), 1e-10));
    }

    #[test]
    fn jx_is_the_maximal_injective_ideal(seed in any::<u64>()) {
        let mut s = Sampler::seeded(seed);
        let x = s.correspondence(4, 3, 6);
        let d = common::data(&x);
        let m = x.algebra().num_blocks();
        let injective: Vec<BTreeSet<usize>> = subsets(m).into_iter().filter(|i| d.injective_on(i)).collect();
        let maximal: Vec<&BTreeSet<usize>> = injective
            .iter()
            .filter(|i| !injective.iter().any(|j| j != *i && i.is_subset(j)))
            .collect();
        let jx: BTreeSet<usize> = x.jx().members().clone();
        prop_assert_eq!(maximal, vec![&jx]);
        let ker: BTreeSet<usize> = (0..m).filter(|&i| d.image_rank(&[i].into()) == 0).collect();
        prop_assert_eq!(ker, x.ker_phi().members().clone());
        for i in subsets(m) {
            if d.injective_on(&i) && d.image_rank(&i) == d.compact_dimension() {
                prop_assert_eq!(&i, &jx);
            }
        }
    }

    #[test]
    fn bimodule_detection_matches_numeric_criterion(seed in any::<u64>()) {
        let mut s = Sampler::seeded(seed);
        let x = if seed % 2 == 0 { s.correspondence(3, 2, 4) } else { s.bimodule(4, 3) };
        let d = common::data(&x);
        let jx: BTreeSet<usize> = x.jx().members().clone();
        let onto = d.image_rank(&jx) == d.compact_dimension();
        prop_assert_eq!(detect_bimodule(&x).unwrap().is_some(), onto);
    }

    #[test]
    fn left_inner_product_roundtrip(seed in any::<u64>()) {
        let mut s = Sampler::seeded(seed);
        let x = s.bimodule(4, 3);
        let lip = detect_bimodule(&x).unwrap().expect("bimodule");
        let (xi, eta, zeta) = (s.module_element(x.module()), s.module_element(x.module()), s.module_element(x.module()));
        let a = lip.left_inner(&xi, &eta).unwrap();
        let tol = 1e-10 * 1.0f64.max(xi.norm() * eta.norm() * zeta.norm().max(1.0));
        let d = common::data(&x);
        prop_assert!(diff_norm(&d.phi(a.blocks()), &oracle::theta(xi.blocks(), eta.blocks())) <= tol);
        // φ(⟨ξ,η⟩_L) ζ = ξ ⟨η, ζ⟩
        let lhs = x.left_act(&a).unwrap().apply(&zeta).unwrap();
        let rhs = xi.right_act(&eta.inner(&zeta).unwrap()).unwrap();
        prop_assert!(diff_norm(lhs.blocks(), rhs.blocks()) <= tol);
        prop_assert!(a.support().is_subset(&x.jx()).unwrap());
    }

    #[test]
    fn partial_automorphism_jx_is_domain(seed in any::<u64>()) {
        let mut s = Sampler::seeded(seed);
        let alg = s.algebra(4, 2);
        let theta = s.partial_automorphism(&alg);
        let x = from_partial_automorphism(&alg, &theta).unwrap();
        prop_assert_eq!(x.jx(), theta.domain.clone());
        prop_assert!(detect_bimodule(&x).unwrap().is_some());
        let d = common::data(&x);
        prop_assert!(d.injective_on(theta.domain.members()));
    }

    #[test]
    fn graph_flags(seed in any::<u64>()) {
        let mut s = Sampler::seeded(seed);
        let g = s.graph(8, 20);
        let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.source, e.range)).collect();
        let (sinks, sources, regular) = oracle::classify(g.vertices().len(), &edges);
        let x = g.correspondence().unwrap().correspondence;
        prop_assert_eq!(x.jx().members().clone(), regular.clone());
        let flags = x.flags();
        prop_assert_eq!(flags.faithful, sinks.is_empty());
        prop_assert_eq!(flags.full, sources.is_empty());
        prop_assert!(flags.nondegenerate);
        prop_assert_eq!(&g.ideals().jx, &regular);
        prop_assert_eq!(&g.ideals().ker_phi, &sinks);
    }
}

#[test]
fn norm_oracle_agrees_with_library() {
    let mut s = Sampler::seeded(7);
    for _ in 0..200 {
        let r = rand_size(&mut s);
        let c = rand_size(&mut s);
        let m = s.matrix(r, c);
        let (a, b) = (op_norm(&m), linalg::spectral_norm(&m));
        assert!((a - b).abs() <= 1e-10 * b.max(1.0), "{a} vs {b}");
    }
}

fn rand_size(s: &mut Sampler) -> usize {
    use corrkit_core::linalg::C64;
    let z: C64 = s.scalar();
    1 + ((z.re.abs() * 1000.0) as usize % 7)
}
