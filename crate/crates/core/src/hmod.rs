//! Right Hilbert modules over an [`FdAlgebra`].
//!
//! Every Hilbert module over `A = ⊕_j M_{n_j}` is `X = ⊕_j M_{k_j × n_j}` with
//! `⟨ξ, η⟩ = ⊕_j ξ_j* η_j` and right action by matrix multiplication. A fiber
//! with `k_j = 0` is a zero summand. Adjointable operators are then
//! `⊕_j M_{k_j}` acting on the left, and every one of them is compact.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fdalg::{AlgElement, FdAlgebra, Ideal, MatrixUnit};
use crate::linalg::{self, CMatrix, C64};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HilbertModule {
    algebra: FdAlgebra,
    fibers: Vec<usize>,
}

impl HilbertModule {
    pub fn new(algebra: FdAlgebra, fibers: Vec<usize>) -> Result<Self> {
        if fibers.len() != algebra.num_blocks() {
            return Err(Error::InvalidAlgebra(format!(
                "module has {} fibers but the algebra has {} blocks",
                fibers.len(),
                algebra.num_blocks()
            )));
        }
        Ok(Self { algebra, fibers })
    }

    /// `A` as a module over itself.
    pub fn standard(algebra: &FdAlgebra) -> Self {
        Self {
            fibers: algebra.blocks().to_vec(),
            algebra: algebra.clone(),
        }
    }

    pub fn zero_module(algebra: &FdAlgebra) -> Self {
        Self {
            fibers: alloc::vec![0; algebra.num_blocks()],
            algebra: algebra.clone(),
        }
    }

    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn fibers(&self) -> &[usize] {
        &self.fibers
    }

    pub fn fiber(&self, j: usize) -> usize {
        self.fibers[j]
    }

    /// Complex dimension `Σ k_j n_j`.
    pub fn dimension(&self) -> usize {
        self.fibers.iter().zip(self.algebra.blocks()).map(|(k, n)| k * n).sum()
    }

    pub(crate) fn check_same(&self, other: &HilbertModule) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ModuleMismatch {
                left: self.fibers.clone(),
                right: other.fibers.clone(),
            })
        }
    }

    pub fn zero(&self) -> ModuleElement {
        ModuleElement {
            module: self.clone(),
            blocks: self
                .fibers
                .iter()
                .zip(self.algebra.blocks())
                .map(|(&k, &n)| linalg::zeros(k, n))
                .collect(),
        }
    }

    pub fn element(&self, blocks: Vec<CMatrix>) -> Result<ModuleElement> {
        check_shapes(
            "module fiber",
            &blocks,
            self.fibers.iter().copied().zip(self.algebra.blocks().iter().copied()),
        )?;
        Ok(ModuleElement {
            module: self.clone(),
            blocks,
        })
    }

    /// Fiber matrix units: fibers ascending, row-major inside a fiber.
    pub fn basis(&self) -> Vec<MatrixUnit> {
        let mut out = Vec::with_capacity(self.dimension());
        for (block, (&k, &n)) in self.fibers.iter().zip(self.algebra.blocks()).enumerate() {
            for row in 0..k {
                for col in 0..n {
                    out.push(MatrixUnit { block, row, col });
                }
            }
        }
        out
    }

    pub fn unit(&self, u: MatrixUnit) -> Result<ModuleElement> {
        if u.block >= self.fibers.len() {
            return Err(Error::BlockOutOfRange {
                index: u.block,
                blocks: self.fibers.len(),
            });
        }
        let (k, n) = (self.fibers[u.block], self.algebra.block_size(u.block));
        if u.row >= k || u.col >= n {
            return Err(Error::Shape {
                what: format!("module matrix unit {u}"),
                expected_rows: k,
                expected_cols: n,
                rows: u.row + 1,
                cols: u.col + 1,
            });
        }
        let mut e = self.zero();
        e.blocks[u.block] = linalg::unit(k, n, u.row, u.col);
        Ok(e)
    }

    pub fn identity_operator(&self) -> ModuleOperator {
        ModuleOperator {
            module: self.clone(),
            blocks: self.fibers.iter().map(|&k| linalg::identity(k)).collect(),
        }
    }

    pub fn zero_operator(&self) -> ModuleOperator {
        ModuleOperator {
            module: self.clone(),
            blocks: self.fibers.iter().map(|&k| linalg::zeros(k, k)).collect(),
        }
    }

    pub fn operator(&self, blocks: Vec<CMatrix>) -> Result<ModuleOperator> {
        check_shapes("operator fiber", &blocks, self.fibers.iter().map(|&k| (k, k)))?;
        Ok(ModuleOperator {
            module: self.clone(),
            blocks,
        })
    }

    /// Matrix units of `⊕_j M_{k_j}`, the basis of `K(X)`.
    pub fn operator_basis(&self) -> Vec<MatrixUnit> {
        let mut out = Vec::new();
        for (block, &k) in self.fibers.iter().enumerate() {
            for row in 0..k {
                for col in 0..k {
                    out.push(MatrixUnit { block, row, col });
                }
            }
        }
        out
    }

    pub fn operator_unit(&self, u: MatrixUnit) -> Result<ModuleOperator> {
        let k = *self.fibers.get(u.block).ok_or(Error::BlockOutOfRange {
            index: u.block,
            blocks: self.fibers.len(),
        })?;
        if u.row >= k || u.col >= k {
            return Err(Error::Shape {
                what: format!("operator matrix unit {u}"),
                expected_rows: k,
                expected_cols: k,
                rows: u.row + 1,
                cols: u.col + 1,
            });
        }
        let mut t = self.zero_operator();
        t.blocks[u.block] = linalg::unit(k, k, u.row, u.col);
        Ok(t)
    }

    /// Fullness: the closed span of inner products is the ideal of blocks
    /// with a nonzero fiber. Returns whether that is all of `A`, and the ideal.
    pub fn is_full(&self) -> (bool, Ideal) {
        let span = self
            .algebra
            .ideal(self.fibers.iter().enumerate().filter(|(_, &k)| k > 0).map(|(j, _)| j))
            .expect("fiber indices are block indices");
        (span.is_whole(), span)
    }
}

fn check_shapes(what: &str, blocks: &[CMatrix], shapes: impl ExactSizeIterator<Item = (usize, usize)>) -> Result<()> {
    if blocks.len() != shapes.len() {
        return Err(Error::InvalidAlgebra(format!(
            "{what}: expected {} blocks, got {}",
            shapes.len(),
            blocks.len()
        )));
    }
    for (j, (m, (r, c))) in blocks.iter().zip(shapes).enumerate() {
        if m.shape() != (r, c) {
            return Err(Error::Shape {
                what: format!("{what} {j}"),
                expected_rows: r,
                expected_cols: c,
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
    }
    Ok(())
}

/// A vector `ξ ∈ X`: one `k_j × n_j` matrix per fiber.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleElement {
    module: HilbertModule,
    blocks: Vec<CMatrix>,
}

impl ModuleElement {
    pub fn module(&self) -> &HilbertModule {
        &self.module
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> &CMatrix {
        &self.blocks[j]
    }

    /// `⟨ξ, η⟩ = ⊕_j ξ_j* η_j`, conjugate-linear in `ξ`.
    pub fn inner(&self, other: &ModuleElement) -> Result<AlgElement> {
        self.module.check_same(&other.module)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(x, y)| x.adjoint() * y)
            .collect();
        self.module.algebra.element(blocks)
    }

    pub fn right_act(&self, a: &AlgElement) -> Result<ModuleElement> {
        self.module.algebra.check_same(a.algebra())?;
        Ok(ModuleElement {
            module: self.module.clone(),
            blocks: self.blocks.iter().zip(a.blocks()).map(|(x, b)| x * b).collect(),
        })
    }

    /// `‖ξ‖ = ‖⟨ξ,ξ⟩‖^{1/2}`, the largest singular value over the fibers.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::spectral_norm).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &ModuleElement) -> Result<ModuleElement> {
        self.module.check_same(&other.module)?;
        Ok(ModuleElement {
            module: self.module.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn sub(&self, other: &ModuleElement) -> Result<ModuleElement> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> ModuleElement {
        ModuleElement {
            module: self.module.clone(),
            blocks: self.blocks.iter().map(|x| x * s).collect(),
        }
    }

    /// Coordinates in the basis of [`HilbertModule::basis`].
    pub fn coordinates(&self) -> Vec<C64> {
        self.blocks.iter().flat_map(linalg::flatten).collect()
    }

    pub fn approx_eq(&self, other: &ModuleElement, tol: f64) -> bool {
        self.module == other.module
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| linalg::approx_eq(a, b, tol))
    }
}

/// The rank-one operator `θ_{ξ,η}: ζ ↦ ξ⟨η, ζ⟩`, fiberwise `ξ_j η_j*`.
pub fn theta(xi: &ModuleElement, eta: &ModuleElement) -> Result<ModuleOperator> {
    xi.module.check_same(&eta.module)?;
    Ok(ModuleOperator {
        module: xi.module.clone(),
        blocks: xi
            .blocks
            .iter()
            .zip(&eta.blocks)
            .map(|(x, y)| x * y.adjoint())
            .collect(),
    })
}

/// An adjointable operator on `X`, one `k_j × k_j` matrix per fiber.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleOperator {
    module: HilbertModule,
    blocks: Vec<CMatrix>,
}

impl ModuleOperator {
    pub fn module(&self) -> &HilbertModule {
        &self.module
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> &CMatrix {
        &self.blocks[j]
    }

    pub fn compose(&self, other: &ModuleOperator) -> Result<ModuleOperator> {
        self.module.check_same(&other.module)?;
        Ok(ModuleOperator {
            module: self.module.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(s, t)| s * t).collect(),
        })
    }

    pub fn adjoint(&self) -> ModuleOperator {
        ModuleOperator {
            module: self.module.clone(),
            blocks: self.blocks.iter().map(|s| s.adjoint()).collect(),
        }
    }

    pub fn apply(&self, xi: &ModuleElement) -> Result<ModuleElement> {
        self.module.check_same(&xi.module)?;
        Ok(ModuleElement {
            module: self.module.clone(),
            blocks: self.blocks.iter().zip(&xi.blocks).map(|(s, x)| s * x).collect(),
        })
    }

    pub fn add(&self, other: &ModuleOperator) -> Result<ModuleOperator> {
        self.module.check_same(&other.module)?;
        Ok(ModuleOperator {
            module: self.module.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(s, t)| s + t).collect(),
        })
    }

    pub fn sub(&self, other: &ModuleOperator) -> Result<ModuleOperator> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> ModuleOperator {
        ModuleOperator {
            module: self.module.clone(),
            blocks: self.blocks.iter().map(|t| t * s).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::spectral_norm).fold(0.0, f64::max)
    }

    /// Coordinates in the basis of [`HilbertModule::operator_basis`].
    pub fn coordinates(&self) -> Vec<C64> {
        self.blocks.iter().flat_map(linalg::flatten).collect()
    }

    pub fn approx_eq(&self, other: &ModuleOperator, tol: f64) -> bool {
        self.module == other.module
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| linalg::approx_eq(a, b, tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use crate::random::Sampler;

    fn module(blocks: &[usize], fibers: &[usize]) -> HilbertModule {
        HilbertModule::new(FdAlgebra::new(blocks.to_vec()).unwrap(), fibers.to_vec()).unwrap()
    }

    #[test]
    fn inner_of_row_vectors() {
        let x = module(&[2], &[1]);
        let xi = x
            .element(alloc::vec![CMatrix::from_row_slice(
                1,
                2,
                &[c64(1.0, 0.0), c64(0.0, 0.0)]
            )])
            .unwrap();
        let eta = x
            .element(alloc::vec![CMatrix::from_row_slice(
                1,
                2,
                &[c64(0.0, 0.0), c64(1.0, 0.0)]
            )])
            .unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        assert_eq!(xi.inner(&eta).unwrap().block(0), &expected);
    }

    #[test]
    fn inner_is_positive_and_a_linear() {
        let x = module(&[2, 1, 3], &[3, 0, 2]);
        let mut s = Sampler::seeded(10);
        for _ in 0..100 {
            let xi = s.module_element(&x);
            let gram = xi.inner(&xi).unwrap();
            for b in gram.blocks() {
                assert!(linalg::min_hermitian_eigenvalue(b) >= -1e-12);
            }
        }
        for _ in 0..20 {
            let (xi, eta) = (s.module_element(&x), s.module_element(&x));
            let a = s.element(x.algebra());
            let lhs = xi.inner(&eta.right_act(&a).unwrap()).unwrap();
            let rhs = xi.inner(&eta).unwrap().mul(&a).unwrap();
            assert!(lhs.sub(&rhs).unwrap().norm() < 1e-11);
        }
    }

    #[test]
    fn right_action() {
        let x = module(&[2, 2], &[1, 3]);
        let mut s = Sampler::seeded(11);
        let xi = s.module_element(&x);
        assert_eq!(xi.right_act(&x.algebra().identity()).unwrap(), xi);
        assert_eq!(xi.right_act(&x.algebra().zero()).unwrap().norm(), 0.0);
        for _ in 0..20 {
            let (a, b) = (s.element(x.algebra()), s.element(x.algebra()));
            let lhs = xi.right_act(&a).unwrap().right_act(&b).unwrap();
            let rhs = xi.right_act(&a.mul(&b).unwrap()).unwrap();
            assert!(lhs.sub(&rhs).unwrap().norm() < 1e-11);
        }
    }

    #[test]
    fn module_norm() {
        let x = module(&[2], &[1]);
        assert_eq!(x.zero().norm(), 0.0);
        let xi = x
            .element(alloc::vec![CMatrix::from_row_slice(
                1,
                2,
                &[c64(3.0, 0.0), c64(4.0, 0.0)]
            )])
            .unwrap();
        assert!((xi.norm() - 5.0).abs() < 1e-12);
        let y = module(&[1, 3], &[2, 2]);
        let mut s = Sampler::seeded(12);
        for _ in 0..50 {
            let xi = s.module_element(&y);
            let n = xi.norm();
            assert!((n * n - xi.inner(&xi).unwrap().norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn theta_projection_and_adjoint() {
        let x = module(&[2], &[3]);
        let mut xi = x.zero();
        xi.blocks[0][(1, 0)] = c64(1.0, 0.0);
        // ⟨ξ,ξ⟩ = E_00 is a projection, so θ_{ξ,ξ} is one too.
        let p = theta(&xi, &xi).unwrap();
        assert!(p.compose(&p).unwrap().approx_eq(&p, 1e-11));
        assert!(p.adjoint().approx_eq(&p, 1e-11));

        let mut s = Sampler::seeded(13);
        let (a, b) = (s.module_element(&x), s.module_element(&x));
        assert_eq!(theta(&a, &b).unwrap().adjoint(), theta(&b, &a).unwrap());
    }

    #[test]
    fn theta_applies_as_rank_one() {
        let x = module(&[1, 2, 2], &[2, 1, 0]);
        let mut s = Sampler::seeded(14);
        for _ in 0..100 {
            let (xi, eta, zeta) = (s.module_element(&x), s.module_element(&x), s.module_element(&x));
            let lhs = theta(&xi, &eta).unwrap().apply(&zeta).unwrap();
            let rhs = xi.right_act(&eta.inner(&zeta).unwrap()).unwrap();
            assert!(lhs.sub(&rhs).unwrap().norm() < 1e-11);
        }
    }

    #[test]
    fn operators_compose_and_adjoint() {
        let x = module(&[2, 1], &[2, 3]);
        let mut s = Sampler::seeded(15);
        for _ in 0..20 {
            let (xi, eta, zeta, omega) = (
                s.module_element(&x),
                s.module_element(&x),
                s.module_element(&x),
                s.module_element(&x),
            );
            let lhs = theta(&xi, &eta)
                .unwrap()
                .compose(&theta(&zeta, &omega).unwrap())
                .unwrap();
            let rhs = theta(&xi.right_act(&eta.inner(&zeta).unwrap()).unwrap(), &omega).unwrap();
            assert!(lhs.sub(&rhs).unwrap().norm() < 1e-10);

            let t = s.module_operator(&x);
            assert_eq!(x.identity_operator().compose(&t).unwrap(), t);
            let lhs = t.apply(&xi).unwrap().inner(&zeta).unwrap();
            let rhs = xi.inner(&t.adjoint().apply(&zeta).unwrap()).unwrap();
            assert!(lhs.sub(&rhs).unwrap().norm() < 1e-11);
        }
    }

    #[test]
    fn fullness_witness() {
        let (full, span) = module(&[1, 2], &[1, 1]).is_full();
        assert!(full);
        assert!(span.is_whole());
        let (full, span) = module(&[1, 1], &[1, 0]).is_full();
        assert!(!full);
        assert_eq!(span.to_vec(), alloc::vec![0]);
    }

    #[test]
    fn zero_fibers_are_absorbing() {
        let x = module(&[2, 2], &[0, 1]);
        let mut s = Sampler::seeded(16);
        let xi = s.module_element(&x);
        assert_eq!(xi.block(0).shape(), (0, 2));
        assert_eq!(xi.inner(&xi).unwrap().block(0).norm(), 0.0);
    }

    #[test]
    fn mismatched_modules() {
        let x = module(&[1], &[1]);
        let y = module(&[1], &[2]);
        assert!(matches!(x.zero().inner(&y.zero()), Err(Error::ModuleMismatch { .. })));
        assert!(theta(&x.zero(), &y.zero()).is_err());
        assert!(x.identity_operator().compose(&y.identity_operator()).is_err());
    }
}
