//! Internal tensor products `X ⊗_A Y`.
//!
//! Write `η ∈ Y_j` as `W_j η̃`. The rows of `η̃` split into chunks, one per
//! copy of a source block `M_{n_i}` in the left action on `Y_j`, plus the
//! zero corner. Then `⟨ξ⊗η, ξ'⊗η'⟩ = Σ_chunks (ξ_i η̃_c)* (ξ'_i η̃'_c)`, so
//!
//! ```text
//! ξ ⊗ η  ↦  stack over chunks c = (i, copy) of  ξ_i · η̃_c  ∈ M_{k'_j × n_j}
//! ```
//!
//! is an isometric identification of `(X ⊗ Y)_j` with `M_{k'_j × n_j}`,
//! `k'_j = Σ_i M_Y[j][i] k^X_i`. The left action of `a` on the stacked rows is
//! `φ_X(a)` on each chunk, which has multiplicity matrix `M_Y · M_X`.

use alloc::vec::Vec;

use crate::corr::{Correspondence, StarHom};
use crate::error::Result;
use crate::hmod::{HilbertModule, ModuleElement};
use crate::linalg::{self, CMatrix, C64};

/// One copy of a source block inside a fiber of the right-hand factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Chunk {
    /// Source block `i`.
    block: usize,
    /// First row of the chunk inside `W_j* η`.
    row: usize,
    /// First row of `ξ_i η̃_c` inside the product fiber.
    out_row: usize,
}

/// `X ⊗_A Y` together with the data identifying elementary tensors.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    left: Correspondence,
    right: Correspondence,
    product: Correspondence,
    chunks: Vec<Vec<Chunk>>,
}

impl TensorProduct {
    pub fn new(left: &Correspondence, right: &Correspondence) -> Result<Self> {
        left.algebra().check_same(right.algebra())?;
        let algebra = left.algebra().clone();
        let m = algebra.num_blocks();
        let y_action = right.left_action();
        let x_action = left.left_action();
        let kx = left.module().fibers();

        let mut chunks = Vec::with_capacity(m);
        let mut fibers = Vec::with_capacity(m);
        for j in 0..m {
            let mut list = Vec::new();
            let (mut row, mut out_row) = (0, 0);
            for (i, &ki) in kx.iter().enumerate() {
                let n = algebra.block_size(i);
                for _ in 0..y_action.multiplicity()[j][i] {
                    list.push(Chunk { block: i, row, out_row });
                    row += n;
                    out_row += ki;
                }
            }
            fibers.push(out_row);
            chunks.push(list);
        }

        // Multiplicity M_Y · M_X.
        let mult: Vec<Vec<usize>> = (0..m)
            .map(|j| {
                (0..m)
                    .map(|l| {
                        (0..m)
                            .map(|i| y_action.multiplicity()[j][i] * x_action.multiplicity()[i][l])
                            .sum()
                    })
                    .collect()
            })
            .collect();

        // Conjugating unitaries: blockdiag over chunks of W^X_i, composed with
        // the permutation that sorts the chunk summands into canonical order.
        let mut unitaries: Vec<Option<CMatrix>> = Vec::with_capacity(m);
        for j in 0..m {
            let k = fibers[j];
            let mut segments: Vec<(usize, usize, usize)> = Vec::new(); // (source block, stacked offset, size)
            let mut pads: Vec<(usize, usize)> = Vec::new();
            for c in &chunks[j] {
                let mut offset = c.out_row;
                for (l, &count) in x_action.multiplicity()[c.block].iter().enumerate() {
                    let n = algebra.block_size(l);
                    for _ in 0..count {
                        segments.push((l, offset, n));
                        offset += n;
                    }
                }
                let pad = x_action.padding(c.block);
                if pad > 0 {
                    pads.push((offset, pad));
                }
            }
            segments.sort_by_key(|&(l, _, _)| l);
            // Canonical column c is stacked column source[c].
            let source: Vec<usize> = segments
                .iter()
                .map(|&(_, off, n)| (off, n))
                .chain(pads.iter().copied())
                .flat_map(|(off, n)| off..off + n)
                .collect();
            debug_assert_eq!(source.len(), k);
            let sorted = source.iter().enumerate().all(|(c, &r)| c == r);
            let u = match x_action.unitaries() {
                None if sorted => None,
                None => {
                    let mut perm = linalg::zeros(k, k);
                    for (c, &r) in source.iter().enumerate() {
                        perm[(r, c)] = C64::new(1.0, 0.0);
                    }
                    Some(perm)
                }
                Some(_) => {
                    let wx: Vec<CMatrix> = chunks[j].iter().map(|c| x_action.unitary(c.block)).collect();
                    let bd = linalg::block_diag(wx.iter());
                    let mut u = linalg::zeros(k, k);
                    for (c, &r) in source.iter().enumerate() {
                        u.set_column(c, &bd.column(r));
                    }
                    (u != linalg::identity(k)).then_some(u)
                }
            };
            unitaries.push(u);
        }
        let unitaries = if unitaries.iter().all(Option::is_none) {
            None
        } else {
            Some(
                unitaries
                    .into_iter()
                    .zip(&fibers)
                    .map(|(u, &k)| u.unwrap_or_else(|| linalg::identity(k)))
                    .collect(),
            )
        };

        let module = HilbertModule::new(algebra.clone(), fibers.clone())?;
        let action = StarHom::new(algebra, fibers, mult, unitaries)?;
        Ok(Self {
            left: left.clone(),
            right: right.clone(),
            product: Correspondence::new(module, action)?,
            chunks,
        })
    }

    pub fn left(&self) -> &Correspondence {
        &self.left
    }

    pub fn right(&self) -> &Correspondence {
        &self.right
    }

    pub fn product(&self) -> &Correspondence {
        &self.product
    }

    pub fn into_product(self) -> Correspondence {
        self.product
    }

    /// The matrices `C_j(ξ): Y_j → (X⊗Y)_j` with `(ξ ⊗ η)_j = C_j(ξ) η_j`.
    ///
    /// Localized at the standard representation these are exactly the
    /// creation operators `η ↦ ξ ⊗ η` on each fiber.
    pub fn left_multiplier(&self, xi: &ModuleElement) -> Result<Vec<CMatrix>> {
        self.left.module().check_same(xi.module())?;
        let ky = self.right.module().fibers();
        let kp = self.product.module().fibers();
        let algebra = self.product.algebra();
        Ok((0..ky.len())
            .map(|j| {
                let w_adj = self.right.left_action().unitary(j).adjoint();
                let mut out = linalg::zeros(kp[j], ky[j]);
                for c in &self.chunks[j] {
                    let n = algebra.block_size(c.block);
                    let x = xi.block(c.block);
                    let rows = x * w_adj.rows(c.row, n);
                    out.view_mut((c.out_row, 0), (x.nrows(), ky[j])).copy_from(&rows);
                }
                out
            })
            .collect())
    }

    /// The elementary tensor `ξ ⊗ η` as an element of the product module.
    pub fn elementary(&self, xi: &ModuleElement, eta: &ModuleElement) -> Result<ModuleElement> {
        self.right.module().check_same(eta.module())?;
        let c = self.left_multiplier(xi)?;
        let blocks = c.iter().zip(eta.blocks()).map(|(c, y)| c * y).collect();
        self.product.module().element(blocks)
    }
}

/// `X ⊗_A Y`.
pub fn tensor(x: &Correspondence, y: &Correspondence) -> Result<Correspondence> {
    Ok(TensorProduct::new(x, y)?.into_product())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdalg::FdAlgebra;
    use crate::random::Sampler;

    #[test]
    fn zero_module_absorbs() {
        let mut s = Sampler::seeded(30);
        let x = s.correspondence(3, 2, 4);
        let zero = Correspondence::zero(x.algebra());
        assert!(tensor(&x, &zero).unwrap().module().fibers().iter().all(|&k| k == 0));
        assert!(tensor(&zero, &x).unwrap().module().fibers().iter().all(|&k| k == 0));
    }

    #[test]
    fn identity_is_a_unit() {
        let mut s = Sampler::seeded(31);
        for _ in 0..20 {
            let x = s.correspondence(3, 2, 5);
            let id = Correspondence::identity(x.algebra());
            let right = tensor(&x, &id).unwrap();
            assert_eq!(right.module(), x.module());
            assert!(right.left_action().same_action(x.left_action(), 1e-12));
            // A ⊗ X is the nondegenerate part φ(A)X.
            let left = tensor(&id, &x).unwrap();
            let phi = x.left_action();
            let used: Vec<usize> = (0..x.module().fibers().len()).map(|j| phi.used_dimension(j)).collect();
            assert_eq!(left.module().fibers(), used.as_slice());
            assert_eq!(left.multiplicity(), x.multiplicity());
            assert!(left.flags().nondegenerate);
        }
    }

    #[test]
    fn cuntz_powers_double() {
        let x = Correspondence::from_parts(alloc::vec![1], alloc::vec![2], alloc::vec![alloc::vec![2]], None).unwrap();
        for n in 0..6 {
            assert_eq!(x.tensor_power(n).unwrap().module().fibers(), &[1 << n]);
        }
    }

    #[test]
    fn balanced_inner_product() {
        let mut s = Sampler::seeded(32);
        for _ in 0..50 {
            let x = s.correspondence(3, 2, 4);
            let y = s.correspondence_over(x.algebra(), 4);
            let p = TensorProduct::new(&x, &y).unwrap();
            let (x1, x2) = (s.module_element(x.module()), s.module_element(x.module()));
            let (y1, y2) = (s.module_element(y.module()), s.module_element(y.module()));
            let lhs = p
                .elementary(&x1, &y1)
                .unwrap()
                .inner(&p.elementary(&x2, &y2).unwrap())
                .unwrap();
            let inner_x = x1.inner(&x2).unwrap();
            let rhs = y1.inner(&y.left_act(&inner_x).unwrap().apply(&y2).unwrap()).unwrap();
            assert!(lhs.sub(&rhs).unwrap().norm() < 1e-10 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn elementary_tensors_are_balanced_and_equivariant() {
        let mut s = Sampler::seeded(33);
        for _ in 0..50 {
            let x = s.correspondence(3, 2, 4);
            let y = s.correspondence_over(x.algebra(), 4);
            let p = TensorProduct::new(&x, &y).unwrap();
            let (xi, eta) = (s.module_element(x.module()), s.module_element(y.module()));
            let a = s.element(x.algebra());
            // ξa ⊗ η = ξ ⊗ φ_Y(a)η
            let lhs = p.elementary(&xi.right_act(&a).unwrap(), &eta).unwrap();
            let rhs = p
                .elementary(&xi, &y.left_act(&a).unwrap().apply(&eta).unwrap())
                .unwrap();
            assert!(lhs.approx_eq(&rhs, 1e-10));
            // φ(a)(ξ ⊗ η) = φ_X(a)ξ ⊗ η
            let lhs = p
                .product()
                .left_act(&a)
                .unwrap()
                .apply(&p.elementary(&xi, &eta).unwrap())
                .unwrap();
            let rhs = p
                .elementary(&x.left_act(&a).unwrap().apply(&xi).unwrap(), &eta)
                .unwrap();
            assert!(lhs.approx_eq(&rhs, 1e-10));
        }
    }

    #[test]
    fn associativity_of_dimensions() {
        let mut s = Sampler::seeded(34);
        for _ in 0..30 {
            let x = s.correspondence(3, 2, 4);
            let y = s.correspondence_over(x.algebra(), 4);
            let z = s.correspondence_over(x.algebra(), 4);
            let left = tensor(&tensor(&x, &y).unwrap(), &z).unwrap();
            let right = tensor(&x, &tensor(&y, &z).unwrap()).unwrap();
            assert_eq!(left.module().fibers(), right.module().fibers());
            assert_eq!(left.multiplicity(), right.multiplicity());
        }
    }

    #[test]
    fn mismatched_algebras() {
        let a = Correspondence::identity(&FdAlgebra::new(alloc::vec![1]).unwrap());
        let b = Correspondence::identity(&FdAlgebra::new(alloc::vec![2]).unwrap());
        assert!(tensor(&a, &b).is_err());
    }
}
