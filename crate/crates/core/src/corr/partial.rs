//! Correspondences from partial automorphisms `(θ, I, J)`.
//!
//! Over a block algebra an isomorphism `θ: I → J` pairs each block of `I`
//! with a block of `J` of the same size and acts by `a ↦ U a U*` on it. The
//! module is the right ideal `J·A` (fiber `n_j` on blocks of `J`, zero
//! elsewhere) and `a` acts on the left through `θ(a|_I)`.

use alloc::format;
use alloc::vec::Vec;

use crate::corr::Correspondence;
use crate::error::{Error, Result};
use crate::fdalg::{FdAlgebra, Ideal};
use crate::linalg::CMatrix;

/// `θ` on one block: `a_from ↦ U a_from U*` in block `to`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockPair {
    pub from: usize,
    pub to: usize,
    /// `None` means `U = 1`.
    pub unitary: Option<CMatrix>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartialAutomorphism {
    pub domain: Ideal,
    pub range: Ideal,
    pub pairs: Vec<BlockPair>,
}

impl PartialAutomorphism {
    /// The identity automorphism of `A`.
    pub fn identity(algebra: &FdAlgebra) -> Self {
        Self {
            domain: algebra.whole(),
            range: algebra.whole(),
            pairs: (0..algebra.num_blocks())
                .map(|j| BlockPair {
                    from: j,
                    to: j,
                    unitary: None,
                })
                .collect(),
        }
    }

    fn validate(&self, algebra: &FdAlgebra) -> Result<()> {
        algebra.check_same(self.domain.algebra())?;
        algebra.check_same(self.range.algebra())?;
        let bad = |msg: alloc::string::String| Err(Error::InvalidPartialAutomorphism(msg));
        let froms: Vec<usize> = self.pairs.iter().map(|p| p.from).collect();
        let tos: Vec<usize> = self.pairs.iter().map(|p| p.to).collect();
        if froms.len() != self.domain.members().len() || !froms.iter().all(|i| self.domain.contains(*i)) {
            return bad(format!("pairs {froms:?} do not enumerate the domain {}", self.domain));
        }
        if tos.len() != self.range.members().len() || !tos.iter().all(|j| self.range.contains(*j)) {
            return bad(format!("pairs {tos:?} do not enumerate the range {}", self.range));
        }
        let mut sorted = froms.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let mut sorted_to = tos.clone();
        sorted_to.sort_unstable();
        sorted_to.dedup();
        if sorted.len() != froms.len() || sorted_to.len() != tos.len() {
            return bad("block map is not a bijection".into());
        }
        for p in &self.pairs {
            let (n_from, n_to) = (algebra.block_size(p.from), algebra.block_size(p.to));
            if n_from != n_to {
                return bad(format!(
                    "block {} (size {n_from}) cannot map onto block {} (size {n_to})",
                    p.from, p.to
                ));
            }
            if let Some(u) = &p.unitary {
                if u.shape() != (n_to, n_to) {
                    return bad(format!("unitary for block {} has shape {:?}", p.from, u.shape()));
                }
            }
        }
        Ok(())
    }
}

/// The correspondence `X(φ)` of a partial automorphism. It satisfies
/// `J_{X(φ)} = I` and is a Hilbert bimodule.
pub fn from_partial_automorphism(algebra: &FdAlgebra, theta: &PartialAutomorphism) -> Result<Correspondence> {
    theta.validate(algebra)?;
    let m = algebra.num_blocks();
    let fibers: Vec<usize> = (0..m)
        .map(|j| {
            if theta.range.contains(j) {
                algebra.block_size(j)
            } else {
                0
            }
        })
        .collect();
    let mut multiplicity = alloc::vec![alloc::vec![0; m]; m];
    let mut unitaries: Vec<CMatrix> = fibers.iter().map(|&k| crate::linalg::identity(k)).collect();
    let mut twisted = false;
    for p in &theta.pairs {
        multiplicity[p.to][p.from] = 1;
        if let Some(u) = &p.unitary {
            unitaries[p.to] = u.clone();
            twisted = true;
        }
    }
    Correspondence::from_parts(
        algebra.blocks().to_vec(),
        fibers,
        multiplicity,
        if twisted { Some(unitaries) } else { None },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corr::detect_bimodule;
    use crate::random::Sampler;

    #[test]
    fn identity_automorphism() {
        let a = FdAlgebra::new(alloc::vec![1, 3]).unwrap();
        let x = from_partial_automorphism(&a, &PartialAutomorphism::identity(&a)).unwrap();
        assert_eq!(x, Correspondence::identity(&a));
        assert!(x.jx().is_whole());
    }

    #[test]
    fn swap_between_blocks() {
        let a = FdAlgebra::new(alloc::vec![2, 2]).unwrap();
        let theta = PartialAutomorphism {
            domain: a.ideal([0]).unwrap(),
            range: a.ideal([1]).unwrap(),
            pairs: alloc::vec![BlockPair {
                from: 0,
                to: 1,
                unitary: None
            }],
        };
        let x = from_partial_automorphism(&a, &theta).unwrap();
        assert_eq!(x.jx().to_vec(), alloc::vec![0]);
        assert!(detect_bimodule(&x).unwrap().is_some());
    }

    #[test]
    fn empty_partial_automorphism() {
        let a = FdAlgebra::new(alloc::vec![1, 2]).unwrap();
        let theta = PartialAutomorphism {
            domain: a.zero_ideal(),
            range: a.zero_ideal(),
            pairs: alloc::vec![],
        };
        let x = from_partial_automorphism(&a, &theta).unwrap();
        assert_eq!(x, Correspondence::zero(&a));
        assert!(x.jx().is_zero());
    }

    #[test]
    fn size_mismatch() {
        let a = FdAlgebra::new(alloc::vec![1, 2]).unwrap();
        let theta = PartialAutomorphism {
            domain: a.ideal([0]).unwrap(),
            range: a.ideal([1]).unwrap(),
            pairs: alloc::vec![BlockPair {
                from: 0,
                to: 1,
                unitary: None
            }],
        };
        assert!(matches!(
            from_partial_automorphism(&a, &theta),
            Err(Error::InvalidPartialAutomorphism(_))
        ));
    }

    #[test]
    fn random_partial_automorphisms() {
        let mut s = Sampler::seeded(50);
        for _ in 0..50 {
            let a = s.algebra(4, 2);
            let theta = s.partial_automorphism(&a);
            let x = from_partial_automorphism(&a, &theta).unwrap();
            assert_eq!(x.jx(), theta.domain);
            assert!(detect_bimodule(&x).unwrap().is_some());
            assert!(x.flags().nondegenerate);
        }
    }
}
