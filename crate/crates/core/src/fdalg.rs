//! Finite-dimensional C*-algebras `A = M_{n_0} ⊕ … ⊕ M_{n_{m-1}}`.
//!
//! Elements are stored blockwise. Ideals of such an algebra are exactly the
//! sums of whole blocks, so [`Ideal`] is a set of block indices and every
//! lattice operation on it is exact.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};

/// A direct sum of full matrix algebras, described by its block sizes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FdAlgebra {
    blocks: Vec<usize>,
}

/// Matrix unit `E_{row,col}` sitting in one block of an algebra (or one fiber
/// of a module, where `row < k_j` and `col < n_j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatrixUnit {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

impl fmt::Display for MatrixUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.block, self.row, self.col)
    }
}

impl FdAlgebra {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidAlgebra("an algebra needs at least one block".into()));
        }
        if let Some(j) = blocks.iter().position(|&n| n == 0) {
            return Err(Error::InvalidAlgebra(format!("block {j} has size 0")));
        }
        Ok(Self { blocks })
    }

    /// `ℂ^m`, the algebra of functions on `m` points.
    pub fn commutative(m: usize) -> Result<Self> {
        Self::new(alloc::vec![1; m])
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_size(&self, j: usize) -> usize {
        self.blocks[j]
    }

    /// Complex dimension `Σ n_j²`.
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    pub(crate) fn check_same(&self, other: &FdAlgebra) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                left: self.blocks.clone(),
                right: other.blocks.clone(),
            })
        }
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement {
            algebra: self.clone(),
            blocks: self.blocks.iter().map(|&n| linalg::zeros(n, n)).collect(),
        }
    }

    pub fn identity(&self) -> AlgElement {
        AlgElement {
            algebra: self.clone(),
            blocks: self.blocks.iter().map(|&n| linalg::identity(n)).collect(),
        }
    }

    /// The unit of block `j` (a central projection).
    pub fn block_unit(&self, j: usize) -> Result<AlgElement> {
        self.check_block(j)?;
        let mut e = self.zero();
        e.blocks[j] = linalg::identity(self.blocks[j]);
        Ok(e)
    }

    pub fn unit(&self, u: MatrixUnit) -> Result<AlgElement> {
        self.check_block(u.block)?;
        let n = self.blocks[u.block];
        if u.row >= n || u.col >= n {
            return Err(Error::Shape {
                what: format!("matrix unit {u}"),
                expected_rows: n,
                expected_cols: n,
                rows: u.row + 1,
                cols: u.col + 1,
            });
        }
        let mut e = self.zero();
        e.blocks[u.block] = linalg::unit(n, n, u.row, u.col);
        Ok(e)
    }

    /// Matrix-unit basis: blocks ascending, then row-major inside a block.
    pub fn basis(&self) -> Vec<MatrixUnit> {
        let mut out = Vec::with_capacity(self.dimension());
        for (block, &n) in self.blocks.iter().enumerate() {
            for row in 0..n {
                for col in 0..n {
                    out.push(MatrixUnit { block, row, col });
                }
            }
        }
        out
    }

    /// Matrix units of the blocks belonging to `ideal`.
    pub fn ideal_basis(&self, ideal: &Ideal) -> Vec<MatrixUnit> {
        self.basis().into_iter().filter(|u| ideal.contains(u.block)).collect()
    }

    /// Build an element from one square matrix per block.
    pub fn element(&self, blocks: Vec<CMatrix>) -> Result<AlgElement> {
        if blocks.len() != self.blocks.len() {
            return Err(Error::InvalidAlgebra(format!(
                "expected {} blocks, got {}",
                self.blocks.len(),
                blocks.len()
            )));
        }
        for (j, (m, &n)) in blocks.iter().zip(&self.blocks).enumerate() {
            if m.shape() != (n, n) {
                return Err(Error::Shape {
                    what: format!("block {j}"),
                    expected_rows: n,
                    expected_cols: n,
                    rows: m.nrows(),
                    cols: m.ncols(),
                });
            }
        }
        Ok(AlgElement {
            algebra: self.clone(),
            blocks,
        })
    }

    fn check_block(&self, j: usize) -> Result<()> {
        if j < self.blocks.len() {
            Ok(())
        } else {
            Err(Error::BlockOutOfRange {
                index: j,
                blocks: self.blocks.len(),
            })
        }
    }

    pub fn ideal<I: IntoIterator<Item = usize>>(&self, members: I) -> Result<Ideal> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&j) = members.iter().find(|&&j| j >= self.blocks.len()) {
            return Err(Error::BlockOutOfRange {
                index: j,
                blocks: self.blocks.len(),
            });
        }
        Ok(Ideal {
            algebra: self.clone(),
            members,
        })
    }

    pub fn zero_ideal(&self) -> Ideal {
        Ideal {
            algebra: self.clone(),
            members: BTreeSet::new(),
        }
    }

    pub fn whole(&self) -> Ideal {
        Ideal {
            algebra: self.clone(),
            members: (0..self.blocks.len()).collect(),
        }
    }

    /// All `2^m` ideals, ordered by their bitmask.
    pub fn ideals(&self) -> impl Iterator<Item = Ideal> + '_ {
        let m = self.blocks.len();
        assert!(m < usize::BITS as usize, "too many blocks to enumerate ideals");
        (0usize..(1 << m)).map(move |mask| Ideal {
            algebra: self.clone(),
            members: (0..m).filter(|j| mask & (1 << j) != 0).collect(),
        })
    }
}

/// An element of an [`FdAlgebra`], one square matrix per block.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgElement {
    algebra: FdAlgebra,
    blocks: Vec<CMatrix>,
}

impl AlgElement {
    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> &CMatrix {
        &self.blocks[j]
    }

    pub fn into_blocks(self) -> Vec<CMatrix> {
        self.blocks
    }

    fn zip_with(&self, other: &AlgElement, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Result<AlgElement> {
        self.algebra.check_same(&other.algebra)?;
        Ok(AlgElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &AlgElement) -> Result<AlgElement> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &AlgElement) -> Result<AlgElement> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &AlgElement) -> Result<AlgElement> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn adjoint(&self) -> AlgElement {
        AlgElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|a| a.adjoint()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> AlgElement {
        AlgElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|a| a * s).collect(),
        }
    }

    /// The C*-norm: the largest singular value over all blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::spectral_norm).fold(0.0, f64::max)
    }

    /// Coordinates in the matrix-unit basis of [`FdAlgebra::basis`].
    pub fn coordinates(&self) -> Vec<C64> {
        self.blocks.iter().flat_map(linalg::flatten).collect()
    }

    /// Blocks on which the element is exactly nonzero.
    pub fn support(&self) -> Ideal {
        Ideal {
            algebra: self.algebra.clone(),
            members: self
                .blocks
                .iter()
                .enumerate()
                .filter(|(_, b)| b.iter().any(|z| *z != C64::new(0.0, 0.0)))
                .map(|(j, _)| j)
                .collect(),
        }
    }

    /// Keep only the blocks belonging to `ideal` (multiplication by its unit).
    pub fn restrict(&self, ideal: &Ideal) -> Result<AlgElement> {
        self.algebra.check_same(&ideal.algebra)?;
        let mut out = self.clone();
        for (j, b) in out.blocks.iter_mut().enumerate() {
            if !ideal.contains(j) {
                b.fill(C64::new(0.0, 0.0));
            }
        }
        Ok(out)
    }

    pub fn approx_eq(&self, other: &AlgElement, tol: f64) -> bool {
        self.algebra == other.algebra
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| linalg::approx_eq(a, b, tol))
    }
}

/// A closed two-sided ideal, encoded as the set of blocks it contains.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    algebra: FdAlgebra,
    members: BTreeSet<usize>,
}

impl Ideal {
    pub fn algebra(&self) -> &FdAlgebra {
        &self.algebra
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, block: usize) -> bool {
        self.members.contains(&block)
    }

    pub fn is_zero(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.algebra.num_blocks()
    }

    /// The annihilator `{a : ab = 0 for all b ∈ I}`: the complementary blocks.
    pub fn perp(&self) -> Ideal {
        Ideal {
            algebra: self.algebra.clone(),
            members: (0..self.algebra.num_blocks())
                .filter(|j| !self.members.contains(j))
                .collect(),
        }
    }

    pub fn meet(&self, other: &Ideal) -> Result<Ideal> {
        self.algebra.check_same(&other.algebra)?;
        Ok(Ideal {
            algebra: self.algebra.clone(),
            members: self.members.intersection(&other.members).copied().collect(),
        })
    }

    pub fn join(&self, other: &Ideal) -> Result<Ideal> {
        self.algebra.check_same(&other.algebra)?;
        Ok(Ideal {
            algebra: self.algebra.clone(),
            members: self.members.union(&other.members).copied().collect(),
        })
    }

    pub fn is_subset(&self, other: &Ideal) -> Result<bool> {
        self.algebra.check_same(&other.algebra)?;
        Ok(self.members.is_subset(&other.members))
    }

    /// Essential ideals have zero annihilator; here that means every block.
    pub fn is_essential(&self) -> bool {
        self.perp().is_zero()
    }

    /// The unit of the ideal, a central projection of the algebra.
    pub fn unit(&self) -> AlgElement {
        let mut e = self.algebra.zero();
        for &j in &self.members {
            e.blocks[j] = linalg::identity(self.algebra.blocks[j]);
        }
        e
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members.iter().copied().collect()
    }

    /// Bitmask with bit `j` set for every member block.
    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &j| m | (1u64 << j))
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.members.iter().map(|j| format!("{j}")).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}
