//! Concrete representations `(π, t)` of a correspondence on `ℂ^N`.
//!
//! A representation is supplied on bases: one `N × N` matrix `π(E_u)` per
//! matrix unit of `A` and one `t(F_v)` per fiber matrix unit of `X`. Both maps
//! are extended linearly; nothing else about them is assumed. The checkers
//! report raw defect norms next to their verdicts.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corr::Correspondence;
use crate::error::{Error, Result};
use crate::fdalg::{AlgElement, Ideal, MatrixUnit};
use crate::hmod::{ModuleElement, ModuleOperator};
use crate::linalg::{self, CMatrix, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    correspondence: Correspondence,
    dim: usize,
    pi: Vec<CMatrix>,
    t: Vec<CMatrix>,
}

impl Representation {
    /// `pi` is indexed like [`crate::fdalg::FdAlgebra::basis`], `t` like
    /// [`crate::hmod::HilbertModule::basis`].
    pub fn new(correspondence: Correspondence, dim: usize, pi: Vec<CMatrix>, t: Vec<CMatrix>) -> Result<Self> {
        let want_pi = correspondence.algebra().dimension();
        let want_t = correspondence.module().dimension();
        if pi.len() != want_pi || t.len() != want_t {
            return Err(Error::InvalidRepresentation(format!(
                "expected {want_pi} pi matrices and {want_t} t matrices, got {} and {}",
                pi.len(),
                t.len()
            )));
        }
        for (what, m) in pi.iter().map(|m| ("pi", m)).chain(t.iter().map(|m| ("t", m))) {
            if m.shape() != (dim, dim) {
                return Err(Error::Shape {
                    what: format!("{what} matrix"),
                    expected_rows: dim,
                    expected_cols: dim,
                    rows: m.nrows(),
                    cols: m.ncols(),
                });
            }
        }
        Ok(Self {
            correspondence,
            dim,
            pi,
            t,
        })
    }

    /// `π = 0`, `t = 0` on `ℂ^dim`.
    pub fn zero(correspondence: Correspondence, dim: usize) -> Self {
        let pi = alloc::vec![linalg::zeros(dim, dim); correspondence.algebra().dimension()];
        let t = alloc::vec![linalg::zeros(dim, dim); correspondence.module().dimension()];
        Self {
            correspondence,
            dim,
            pi,
            t,
        }
    }

    pub fn correspondence(&self) -> &Correspondence {
        &self.correspondence
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pi_basis(&self) -> &[CMatrix] {
        &self.pi
    }

    pub fn t_basis(&self) -> &[CMatrix] {
        &self.t
    }

    /// Same `π`, with `t` replaced by `s·t`.
    pub fn with_scaled_t(&self, s: f64) -> Self {
        Self {
            t: self.t.iter().map(|m| m.scale(s)).collect(),
            ..self.clone()
        }
    }

    pub fn pi(&self, a: &AlgElement) -> Result<CMatrix> {
        self.correspondence.algebra().check_same(a.algebra())?;
        Ok(combine(&self.pi, &a.coordinates(), self.dim))
    }

    pub fn t(&self, xi: &ModuleElement) -> Result<CMatrix> {
        self.correspondence.module().check_same(xi.module())?;
        Ok(combine(&self.t, &xi.coordinates(), self.dim))
    }
}

fn combine(basis: &[CMatrix], coords: &[C64], dim: usize) -> CMatrix {
    let mut out = linalg::zeros(dim, dim);
    for (m, c) in basis.iter().zip(coords) {
        if *c != C64::new(0.0, 0.0) {
            out += m * *c;
        }
    }
    out
}

/// One named numerical check.
#[derive(Clone, Debug, PartialEq)]
pub struct Defect {
    pub label: String,
    /// Worst defect norm observed.
    pub value: f64,
    /// Whether every individual instance was within its tolerance.
    pub passed: bool,
    /// Which basis element or pair attained the worst value.
    pub witness: Option<String>,
}

/// Defects found by a checker, with verdicts at `tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceReport {
    pub tol: f64,
    /// Per-axiom worst-case defects.
    pub checks: Vec<Defect>,
    /// Per-generator covariance defects `‖π(a) − ψ_t(φ_X(a))‖`.
    pub generators: Vec<Defect>,
}

impl CovarianceReport {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            checks: Vec::new(),
            generators: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().chain(&self.generators).all(|d| d.passed)
    }

    pub fn check(&self, label: &str) -> Option<&Defect> {
        self.checks.iter().find(|d| d.label == label)
    }

    /// Value of a named check; panics if the check was not run.
    pub fn value(&self, label: &str) -> f64 {
        self.check(label)
            .unwrap_or_else(|| panic!("no check named {label}"))
            .value
    }

    pub fn worst_generator(&self) -> f64 {
        self.generators.iter().map(|d| d.value).fold(0.0, f64::max)
    }

    /// Append another report's entries, prefixing their labels.
    pub fn absorb(&mut self, prefix: &str, other: CovarianceReport) {
        for mut d in other.checks {
            d.label = format!("{prefix}{}", d.label);
            self.checks.push(d);
        }
        for mut d in other.generators {
            d.label = format!("{prefix}{}", d.label);
            self.generators.push(d);
        }
    }
}

/// Accumulates the worst defect of one check across many instances.
pub(crate) struct Tracker {
    label: String,
    value: f64,
    passed: bool,
    witness: Option<String>,
}

impl Tracker {
    pub(crate) fn new(label: &str) -> Self {
        Self {
            label: label.into(),
            value: 0.0,
            passed: true,
            witness: None,
        }
    }

    /// Record one instance; it passes when `defect ≤ limit`.
    pub(crate) fn record(&mut self, defect: f64, limit: f64, witness: impl FnOnce() -> String) {
        if defect.is_nan() || defect > limit {
            self.passed = false;
        }
        if defect > self.value || (defect.is_nan() && !self.value.is_nan()) {
            self.value = defect;
            self.witness = Some(witness());
        }
    }

    pub(crate) fn finish(self) -> Defect {
        Defect {
            label: self.label,
            value: self.value,
            passed: self.passed,
            witness: self.witness,
        }
    }
}

/// Check the representation axioms on basis elements.
///
/// * `pi_homomorphism`: `π(E_{pq})π(E_{rs}) = δ_{qr} π(E_{ps})` and `π(E_{pq})* = π(E_{qp})`;
/// * `axiom_i`: `t(ξ)* t(η) = π(⟨ξ, η⟩)`;
/// * `axiom_ii`: `π(a) t(ξ) = t(φ_X(a) ξ)`;
/// * `automatic_identity`: `t(ξ) π(a) = t(ξ a)`, which follows from `axiom_i`
///   and is judged at `10·tol`;
/// * `norm_bound`: `‖t(ξ)‖ − ‖ξ‖ ≤ tol`.
pub fn verify_representation(r: &Representation, tol: f64) -> Result<CovarianceReport> {
    let x = r.correspondence();
    let algebra = x.algebra();
    let module = x.module();
    let a_basis = algebra.basis();
    let x_basis = module.basis();
    let a_units: Vec<AlgElement> = a_basis.iter().map(|&u| algebra.unit(u)).collect::<Result<_>>()?;
    let x_units: Vec<ModuleElement> = x_basis.iter().map(|&u| module.unit(u)).collect::<Result<_>>()?;
    let t_adj: Vec<CMatrix> = r.t.iter().map(|m| m.adjoint()).collect();

    let mut hom = Tracker::new("pi_homomorphism");
    for (p, u) in a_basis.iter().enumerate() {
        let star = r.pi[p].adjoint();
        let q = a_basis
            .iter()
            .position(|w| w.block == u.block && w.row == u.col && w.col == u.row)
            .expect("transpose unit");
        let d = linalg::spectral_norm(&(star - &r.pi[q]));
        hom.record(d, tol * linalg::tol_scale([linalg::spectral_norm(&r.pi[p])]), || {
            format!("pi({u})*")
        });
        for (s, w) in a_basis.iter().enumerate() {
            if w.block != u.block {
                let d = linalg::spectral_norm(&linalg::mul(&r.pi[p], &r.pi[s]));
                hom.record(d, tol, || format!("pi({u}) pi({w})"));
                continue;
            }
            let prod = linalg::mul(&r.pi[p], &r.pi[s]);
            let expected = if u.col == w.row {
                let e = a_basis
                    .iter()
                    .position(|z| z.block == u.block && z.row == u.row && z.col == w.col)
                    .expect("product unit");
                r.pi[e].clone()
            } else {
                linalg::zeros(r.dim, r.dim)
            };
            let d = linalg::spectral_norm(&(prod - &expected));
            hom.record(d, tol * linalg::tol_scale([linalg::spectral_norm(&expected)]), || {
                format!("pi({u}) pi({w})")
            });
        }
    }

    let mut axiom_i = Tracker::new("axiom_i");
    for (p, xi) in x_units.iter().enumerate() {
        for (q, eta) in x_units.iter().enumerate() {
            let lhs = linalg::mul(&t_adj[p], &r.t[q]);
            let rhs = r.pi(&xi.inner(eta)?)?;
            let d = linalg::spectral_norm(&(&lhs - &rhs));
            let scale = linalg::tol_scale([linalg::spectral_norm(&lhs), linalg::spectral_norm(&rhs)]);
            axiom_i.record(d, tol * scale, || format!("t({})* t({})", x_basis[p], x_basis[q]));
        }
    }

    let mut axiom_ii = Tracker::new("axiom_ii");
    let mut automatic = Tracker::new("automatic_identity");
    for (p, a) in a_units.iter().enumerate() {
        let phi = x.left_act(a)?;
        for (q, xi) in x_units.iter().enumerate() {
            let lhs = linalg::mul(&r.pi[p], &r.t[q]);
            let rhs = r.t(&phi.apply(xi)?)?;
            let d = linalg::spectral_norm(&(&lhs - &rhs));
            let scale = linalg::tol_scale([linalg::spectral_norm(&lhs), linalg::spectral_norm(&rhs)]);
            axiom_ii.record(d, tol * scale, || format!("pi({}) t({})", a_basis[p], x_basis[q]));

            let lhs = linalg::mul(&r.t[q], &r.pi[p]);
            let rhs = r.t(&xi.right_act(a)?)?;
            let d = linalg::spectral_norm(&(&lhs - &rhs));
            let scale = linalg::tol_scale([linalg::spectral_norm(&lhs), linalg::spectral_norm(&rhs)]);
            automatic.record(d, 10.0 * tol * scale, || {
                format!("t({}) pi({})", x_basis[q], a_basis[p])
            });
        }
    }

    let mut norm_bound = Tracker::new("norm_bound");
    for (q, xi) in x_units.iter().enumerate() {
        let excess = (linalg::spectral_norm(&r.t[q]) - xi.norm()).max(0.0);
        norm_bound.record(excess, tol, || format!("t({})", x_basis[q]));
    }

    let mut report = CovarianceReport::new(tol);
    report.checks = alloc::vec![
        hom.finish(),
        axiom_i.finish(),
        axiom_ii.finish(),
        automatic.finish(),
        norm_bound.finish()
    ];
    Ok(report)
}

/// `ψ_t` on the matrix-unit basis of `K(X) = ⊕_j M_{k_j}`.
///
/// `E^j_{pq} = θ_{F_{p,c}, F_{q,c}}` for every column `c < n_j`, so
/// `ψ_t(E^j_{pq})` is computed from column `0` and, independently, as the
/// average over all columns. For a representation the two agree; their
/// largest difference is kept as [`PsiMap::residual`].
#[derive(Clone, Debug)]
pub struct PsiMap {
    basis: Vec<MatrixUnit>,
    images: Vec<CMatrix>,
    residual: f64,
    dim: usize,
    correspondence: Correspondence,
}

impl PsiMap {
    pub fn new(r: &Representation) -> Result<Self> {
        let x = r.correspondence();
        let module = x.module();
        let basis = module.operator_basis();
        let t_index = |fiber: usize, row: usize, col: usize| -> Result<usize> {
            let u = MatrixUnit { block: fiber, row, col };
            module
                .basis()
                .iter()
                .position(|v| *v == u)
                .ok_or_else(|| Error::Inconsistent(format!("missing module basis unit {u}")))
        };
        let mut images = Vec::with_capacity(basis.len());
        let mut residual: f64 = 0.0;
        for u in &basis {
            let n = x.algebra().block_size(u.block);
            let first = linalg::mul(
                &r.t[t_index(u.block, u.row, 0)?],
                &r.t[t_index(u.block, u.col, 0)?].adjoint(),
            );
            let mut average = linalg::zeros(r.dim, r.dim);
            for c in 0..n {
                average += linalg::mul(
                    &r.t[t_index(u.block, u.row, c)?],
                    &r.t[t_index(u.block, u.col, c)?].adjoint(),
                );
            }
            average /= C64::new(n as f64, 0.0);
            residual = residual.max(linalg::spectral_norm(&(&first - &average)));
            images.push(first);
        }
        Ok(Self {
            basis,
            images,
            residual,
            dim: r.dim,
            correspondence: x.clone(),
        })
    }

    /// Largest disagreement between the two decompositions.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn apply(&self, op: &ModuleOperator) -> Result<CMatrix> {
        self.correspondence.module().check_same(op.module())?;
        debug_assert_eq!(self.basis.len(), op.coordinates().len());
        Ok(combine(&self.images, &op.coordinates(), self.dim))
    }
}

/// `ψ_t(T)`; fails when the two decompositions of `K(X)` disagree by more
/// than `tol`, which means `(π, t)` is not a representation.
pub fn psi_t(r: &Representation, op: &ModuleOperator, tol: f64) -> Result<CMatrix> {
    let map = PsiMap::new(r)?;
    if map.residual() > tol {
        return Err(Error::IllDefinedPsi {
            residual: map.residual(),
        });
    }
    map.apply(op)
}

/// Covariance relative to an ideal `J0`: `π(a) = ψ_t(φ_X(a))` for the matrix
/// units `a` of `J0`. With `J0 = J_X` this is the Cuntz–Pimsner covariance
/// condition; with `J0 = 0` it holds vacuously.
pub fn check_relative_covariance(r: &Representation, j0: &Ideal, tol: f64) -> Result<CovarianceReport> {
    let x = r.correspondence();
    x.algebra().check_same(j0.algebra())?;
    let map = PsiMap::new(r)?;
    let mut report = CovarianceReport::new(tol);
    report.checks.push(Defect {
        label: "psi_well_defined".into(),
        value: map.residual(),
        passed: map.residual() <= tol,
        witness: None,
    });
    for u in x.algebra().ideal_basis(j0) {
        let a = x.algebra().unit(u)?;
        let lhs = r.pi(&a)?;
        let rhs = map.apply(&x.left_act(&a)?)?;
        let d = linalg::spectral_norm(&(&lhs - &rhs));
        let scale = linalg::tol_scale([linalg::spectral_norm(&lhs), linalg::spectral_norm(&rhs)]);
        report.generators.push(Defect {
            label: format!("covariance {u}"),
            value: d,
            passed: d <= tol * scale,
            witness: Some(format!("{u}")),
        });
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct InjectivityReport {
    pub injective: bool,
    /// `max_ξ |‖t(ξ)‖ − ‖ξ‖|` over the fiber matrix units.
    pub isometric_defect: f64,
    /// `‖π(1_j)‖` for each block.
    pub block_norms: Vec<f64>,
}

/// `π` is injective iff it kills no block; injective representations have
/// isometric `t`.
pub fn rep_injectivity(r: &Representation, tol: f64) -> Result<InjectivityReport> {
    let x = r.correspondence();
    let algebra = x.algebra();
    let block_norms: Vec<f64> = (0..algebra.num_blocks())
        .map(|j| Ok(linalg::spectral_norm(&r.pi(&algebra.block_unit(j)?)?)))
        .collect::<Result<_>>()?;
    let mut isometric_defect: f64 = 0.0;
    for u in x.module().basis() {
        let xi = x.module().unit(u)?;
        let d = (linalg::spectral_norm(&r.t(&xi)?) - xi.norm()).abs();
        isometric_defect = isometric_defect.max(d);
    }
    Ok(InjectivityReport {
        injective: block_norms.iter().all(|&n| n > tol),
        isometric_defect,
        block_norms,
    })
}
