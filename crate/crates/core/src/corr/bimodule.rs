//! Hilbert bimodule detection.
//!
//! A correspondence is a Hilbert bimodule exactly when `φ_X` maps `J_X` onto
//! `K(X)`. In multiplicity form that means every nonzero fiber `j` carries a
//! single copy of one block `i` with `n_i = k_j` and no zero corner, and no
//! block feeds two fibers. The left inner product is then
//! `(φ_X|_{J_X})⁻¹(θ_{ξ,η})`, which on block `i` reads `W_j* ξ_j η_j* W_j`.

use alloc::format;
use alloc::vec::Vec;

use crate::corr::Correspondence;
use crate::error::{Error, Result};
use crate::fdalg::{AlgElement, Ideal};
use crate::hmod::{theta, ModuleElement};
use crate::linalg::{self, CMatrix};

/// The left inner product of a correspondence that is a Hilbert bimodule.
#[derive(Clone, Debug)]
pub struct LeftInnerProduct {
    correspondence: Correspondence,
    /// For each fiber, the block `i` with `φ_X` restricted to `M_{n_i}`
    /// identifying it with `K(X_j)`; `None` for zero fibers.
    fiber_source: Vec<Option<usize>>,
    /// `W_j` for each fiber.
    unitaries: Vec<CMatrix>,
    tol: f64,
}

/// Returns the left inner product when `φ_X(J_X) = K(X)`, `None` otherwise.
///
/// The structural verdict is cross-checked against the dimension of
/// `φ_X(J_X)` computed numerically; a disagreement is reported as
/// [`Error::Inconsistent`].
pub fn detect_bimodule(x: &Correspondence) -> Result<Option<LeftInnerProduct>> {
    let algebra = x.algebra();
    let fibers = x.module().fibers();
    let mult = x.multiplicity();
    let m = algebra.num_blocks();

    let mut fiber_source = alloc::vec![None; m];
    let mut structural = true;
    for j in 0..m {
        if fibers[j] == 0 {
            continue;
        }
        let nonzero: Vec<usize> = (0..m).filter(|&i| mult[j][i] != 0).collect();
        match nonzero.as_slice() {
            [i] if mult[j][*i] == 1 && algebra.block_size(*i) == fibers[j] => fiber_source[j] = Some(*i),
            _ => structural = false,
        }
    }
    for i in 0..m {
        if fiber_source.iter().filter(|s| **s == Some(i)).count() > 1 {
            structural = false;
        }
    }

    let image_dim = image_dimension(x, &x.jx())?;
    let compact_dim: usize = fibers.iter().map(|k| k * k).sum();
    let numeric = image_dim == compact_dim;
    if numeric != structural {
        return Err(Error::Inconsistent(format!(
            "bimodule criterion says {structural} but dim φ_X(J_X) = {image_dim} vs dim K(X) = {compact_dim}"
        )));
    }
    if !structural {
        return Ok(None);
    }
    let unitaries = (0..m).map(|j| x.left_action().unitary(j)).collect();
    Ok(Some(LeftInnerProduct {
        correspondence: x.clone(),
        fiber_source,
        unitaries,
        tol: linalg::DEFAULT_TOL,
    }))
}

/// Numerical dimension of `φ_X(I)`.
fn image_dimension(x: &Correspondence, ideal: &Ideal) -> Result<usize> {
    let algebra = x.algebra();
    let mut rows = Vec::new();
    for u in algebra.ideal_basis(ideal) {
        rows.push(x.left_act(&algebra.unit(u)?)?.coordinates());
    }
    if rows.is_empty() || rows[0].is_empty() {
        return Ok(0);
    }
    Ok(linalg::span_rank(&rows, linalg::RANK_TOL))
}

impl LeftInnerProduct {
    pub fn correspondence(&self) -> &Correspondence {
        &self.correspondence
    }

    /// Residual tolerance applied by [`Self::left_inner`].
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// For each fiber, the block it is identified with.
    pub fn fiber_sources(&self) -> &[Option<usize>] {
        &self.fiber_source
    }

    /// `I_X`: the blocks reached by left inner products.
    pub fn ideal(&self) -> Ideal {
        self.correspondence
            .algebra()
            .ideal(self.fiber_source.iter().flatten().copied())
            .expect("block indices")
    }

    /// `_X⟨ξ, η⟩`: the unique `a ∈ J_X` with `φ_X(a) = θ_{ξ,η}`.
    pub fn left_inner(&self, xi: &ModuleElement, eta: &ModuleElement) -> Result<AlgElement> {
        let module = self.correspondence.module();
        module.check_same(xi.module())?;
        let rank_one = theta(xi, eta)?;
        let algebra = self.correspondence.algebra();
        let mut blocks: Vec<CMatrix> = algebra.blocks().iter().map(|&n| linalg::zeros(n, n)).collect();
        for (j, source) in self.fiber_source.iter().enumerate() {
            if let Some(i) = *source {
                let w = &self.unitaries[j];
                blocks[i] = w.adjoint() * rank_one.block(j) * w;
            }
        }
        let a = algebra.element(blocks)?;
        let residual = self.correspondence.left_act(&a)?.sub(&rank_one)?.norm();
        let scale = linalg::tol_scale([xi.norm() * eta.norm()]);
        if residual > self.tol * scale {
            return Err(Error::Numerical(format!(
                "left inner product residual {residual:e} exceeds tolerance"
            )));
        }
        Ok(a)
    }
}
