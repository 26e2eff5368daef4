//! C*-correspondences over finite-dimensional algebras.
//!
//! A left action `φ: A → L(X) = ⊕_j M_{k_j}` is determined up to unitary
//! conjugation by how many times each block `M_{n_i}` sits inside each fiber
//! `M_{k_j}`. [`StarHom`] stores that multiplicity matrix together with
//! optional conjugating unitaries, so kernels and images are found by
//! counting rather than by numerical rank decisions.

mod bimodule;
mod partial;
mod tensor;

use alloc::format;
use alloc::vec::Vec;

pub use bimodule::{detect_bimodule, LeftInnerProduct};
pub use partial::{from_partial_automorphism, BlockPair, PartialAutomorphism};
pub use tensor::{tensor, TensorProduct};

use crate::error::{Error, Result};
use crate::fdalg::{AlgElement, FdAlgebra, Ideal};
use crate::hmod::{HilbertModule, ModuleOperator};
use crate::linalg::{self, CMatrix};

/// Unitaries supplied with a left action must be unitary to this accuracy.
pub const UNITARY_TOL: f64 = 1e-9;

/// A *-homomorphism `A → ⊕_j M_{k_j}` in multiplicity form.
///
/// On fiber `j` the image of `a` is `W_j · diag(a_0 ⊗ 1_{M[j][0]}, a_1 ⊗
/// 1_{M[j][1]}, …, 0) · W_j*`: copies of each block in ascending block order,
/// followed by a zero corner of size `k_j − Σ_i M[j][i] n_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct StarHom {
    source: FdAlgebra,
    fibers: Vec<usize>,
    multiplicity: Vec<Vec<usize>>,
    unitaries: Option<Vec<CMatrix>>,
}

impl StarHom {
    pub fn new(
        source: FdAlgebra,
        fibers: Vec<usize>,
        multiplicity: Vec<Vec<usize>>,
        unitaries: Option<Vec<CMatrix>>,
    ) -> Result<Self> {
        let m = source.num_blocks();
        if multiplicity.len() != fibers.len() {
            return Err(Error::InvalidLeftAction(format!(
                "multiplicity matrix has {} rows for {} fibers",
                multiplicity.len(),
                fibers.len()
            )));
        }
        for (j, row) in multiplicity.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidLeftAction(format!(
                    "multiplicity row {j} has {} entries for {m} source blocks",
                    row.len()
                )));
            }
            let used: usize = row.iter().zip(source.blocks()).map(|(c, n)| c * n).sum();
            if used > fibers[j] {
                return Err(Error::InvalidLeftAction(format!(
                    "fiber {j} needs dimension {used} for its summands but has {}",
                    fibers[j]
                )));
            }
        }
        if let Some(us) = &unitaries {
            if us.len() != fibers.len() {
                return Err(Error::InvalidLeftAction(format!(
                    "{} unitaries for {} fibers",
                    us.len(),
                    fibers.len()
                )));
            }
            for (j, (u, &k)) in us.iter().zip(&fibers).enumerate() {
                if u.shape() != (k, k) {
                    return Err(Error::Shape {
                        what: format!("unitary for fiber {j}"),
                        expected_rows: k,
                        expected_cols: k,
                        rows: u.nrows(),
                        cols: u.ncols(),
                    });
                }
                let defect = linalg::unitarity_defect(u);
                if defect > UNITARY_TOL {
                    return Err(Error::InvalidLeftAction(format!(
                        "matrix for fiber {j} is not unitary (defect {defect:e})"
                    )));
                }
            }
        }
        Ok(Self {
            source,
            fibers,
            multiplicity,
            unitaries,
        })
    }

    pub fn source(&self) -> &FdAlgebra {
        &self.source
    }

    pub fn fibers(&self) -> &[usize] {
        &self.fibers
    }

    pub fn multiplicity(&self) -> &[Vec<usize>] {
        &self.multiplicity
    }

    pub fn unitaries(&self) -> Option<&[CMatrix]> {
        self.unitaries.as_deref()
    }

    /// `W_j`, or the identity when no unitaries were given.
    pub fn unitary(&self, j: usize) -> CMatrix {
        match &self.unitaries {
            Some(us) => us[j].clone(),
            None => linalg::identity(self.fibers[j]),
        }
    }

    /// Dimension of fiber `j` covered by copies of source blocks.
    pub fn used_dimension(&self, j: usize) -> usize {
        self.multiplicity[j]
            .iter()
            .zip(self.source.blocks())
            .map(|(c, n)| c * n)
            .sum()
    }

    /// Size of the zero corner in fiber `j`.
    pub fn padding(&self, j: usize) -> usize {
        self.fibers[j] - self.used_dimension(j)
    }

    /// `diag(a_0 ⊗ 1, a_1 ⊗ 1, …, 0)` on fiber `j`, before conjugation.
    pub(crate) fn canonical_block(&self, j: usize, a: &AlgElement) -> CMatrix {
        let k = self.fibers[j];
        let mut out = linalg::zeros(k, k);
        let mut offset = 0;
        for (i, &count) in self.multiplicity[j].iter().enumerate() {
            let n = self.source.block_size(i);
            for _ in 0..count {
                out.view_mut((offset, offset), (n, n)).copy_from(a.block(i));
                offset += n;
            }
        }
        out
    }

    /// The realized image of `a`, one `k_j × k_j` matrix per fiber.
    pub fn apply(&self, a: &AlgElement) -> Result<Vec<CMatrix>> {
        self.source.check_same(a.algebra())?;
        Ok((0..self.fibers.len())
            .map(|j| {
                let d = self.canonical_block(j, a);
                match &self.unitaries {
                    Some(us) => &us[j] * d * us[j].adjoint(),
                    None => d,
                }
            })
            .collect())
    }

    /// Same multiplicities and the same realized map on every matrix unit.
    pub fn same_action(&self, other: &StarHom, tol: f64) -> bool {
        if self.source != other.source || self.fibers != other.fibers || self.multiplicity != other.multiplicity {
            return false;
        }
        self.source.basis().into_iter().all(|u| {
            let e = self.source.unit(u).expect("basis unit");
            let (x, y) = (
                self.apply(&e).expect("same source"),
                other.apply(&e).expect("same source"),
            );
            x.iter().zip(&y).all(|(p, q)| linalg::approx_eq(p, q, tol))
        })
    }
}

/// A Hilbert module `X` over `A` together with a left action `φ_X`.
#[derive(Clone, Debug, PartialEq)]
pub struct Correspondence {
    module: HilbertModule,
    left_action: StarHom,
}

/// Structural properties of a correspondence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorrespondenceFlags {
    /// `φ_X` is injective.
    pub faithful: bool,
    /// `φ_X(A) X` spans `X`.
    pub nondegenerate: bool,
    /// Inner products span `A`.
    pub full: bool,
}

impl Correspondence {
    pub fn new(module: HilbertModule, left_action: StarHom) -> Result<Self> {
        module.algebra().check_same(left_action.source())?;
        if module.fibers() != left_action.fibers() {
            return Err(Error::InvalidLeftAction(format!(
                "left action targets fibers {:?} but the module has fibers {:?}",
                left_action.fibers(),
                module.fibers()
            )));
        }
        Ok(Self { module, left_action })
    }

    /// Build from dimension data and a multiplicity matrix.
    pub fn from_parts(
        blocks: Vec<usize>,
        fibers: Vec<usize>,
        multiplicity: Vec<Vec<usize>>,
        unitaries: Option<Vec<CMatrix>>,
    ) -> Result<Self> {
        let algebra = FdAlgebra::new(blocks)?;
        let module = HilbertModule::new(algebra.clone(), fibers.clone())?;
        let action = StarHom::new(algebra, fibers, multiplicity, unitaries)?;
        Self::new(module, action)
    }

    /// `A` as a correspondence over itself with left multiplication.
    pub fn identity(algebra: &FdAlgebra) -> Self {
        let m = algebra.num_blocks();
        let multiplicity = (0..m).map(|j| (0..m).map(|i| usize::from(i == j)).collect()).collect();
        Self {
            module: HilbertModule::standard(algebra),
            left_action: StarHom {
                source: algebra.clone(),
                fibers: algebra.blocks().to_vec(),
                multiplicity,
                unitaries: None,
            },
        }
    }

    pub fn zero(algebra: &FdAlgebra) -> Self {
        let m = algebra.num_blocks();
        Self {
            module: HilbertModule::zero_module(algebra),
            left_action: StarHom {
                source: algebra.clone(),
                fibers: alloc::vec![0; m],
                multiplicity: alloc::vec![alloc::vec![0; m]; m],
                unitaries: None,
            },
        }
    }

    pub fn module(&self) -> &HilbertModule {
        &self.module
    }

    pub fn algebra(&self) -> &FdAlgebra {
        self.module.algebra()
    }

    pub fn left_action(&self) -> &StarHom {
        &self.left_action
    }

    pub fn multiplicity(&self) -> &[Vec<usize>] {
        self.left_action.multiplicity()
    }

    /// `φ_X(a)` as an operator on `X`.
    pub fn left_act(&self, a: &AlgElement) -> Result<ModuleOperator> {
        let blocks = self.left_action.apply(a)?;
        self.module.operator(blocks)
    }

    /// `ker φ_X`: the blocks whose column of the multiplicity matrix is zero.
    pub fn ker_phi(&self) -> Ideal {
        let m = self.algebra().num_blocks();
        let zero_columns = (0..m).filter(|&i| self.multiplicity().iter().all(|row| row[i] == 0));
        self.algebra()
            .ideal(zero_columns)
            .expect("column indices are block indices")
    }

    /// `φ_X⁻¹(K(X))`. Every adjointable operator on a finite-dimensional
    /// module is compact, so this is always all of `A`.
    pub fn compact_preimage(&self) -> Ideal {
        self.algebra().whole()
    }

    /// `J_X = φ_X⁻¹(K(X)) ∩ (ker φ_X)^⊥`.
    ///
    /// With `φ_X⁻¹(K(X)) = A` this is `(ker φ_X)^⊥`, the blocks acting
    /// nontrivially. The case where the preimage is a proper ideal only arises
    /// for infinite emitters; see [`crate::graph::Graph::ideals`].
    pub fn jx(&self) -> Ideal {
        self.compact_preimage()
            .meet(&self.ker_phi().perp())
            .expect("same algebra")
    }

    pub fn flags(&self) -> CorrespondenceFlags {
        let fibers = self.module.fibers();
        CorrespondenceFlags {
            faithful: self.ker_phi().is_zero(),
            nondegenerate: (0..fibers.len()).all(|j| self.left_action.padding(j) == 0),
            full: self.module.is_full().0,
        }
    }

    /// `X^{⊗n}`, with `X^{⊗0} = A`.
    pub fn tensor_power(&self, n: usize) -> Result<Correspondence> {
        let mut out = Correspondence::identity(self.algebra());
        for _ in 0..n {
            out = tensor(self, &out)?;
        }
        Ok(out)
    }
}
