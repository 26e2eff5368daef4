//! Truncated Fock representations.
//!
//! Level `n` is `X^{⊗n} ⊗_A H` with `H = ⊕_j ℂ^{n_j}` the standard
//! representation of `A`. Since `X^{⊗n}_j = M_{k_j × n_j}` acts on `ℂ^{n_j}`,
//! fiber `j` of level `n` is `ℂ^{k^{(n)}_j}` and the level has dimension
//! `Σ_j k^{(n)}_j`; level `0` is `H` itself. `X^{⊗(n+1)}` is built as
//! `X ⊗ X^{⊗n}` and `t(ξ)` is `η ↦ ξ ⊗ η`.
//!
//! The basis is ordered by level, then fiber, then row. Creation operators
//! vanish on the top level `N`, so axiom (i) holds on levels `0..N` only; that
//! truncation defect is reported, not hidden.

use alloc::format;
use alloc::vec::Vec;
use core::ops::Range;

use crate::corr::{Correspondence, TensorProduct};
use crate::error::{Error, Result};
use crate::fdalg::MatrixUnit;
use crate::linalg::{self, CMatrix};
use crate::rep::{PsiMap, Representation};

/// Largest admissible level dimension.
pub const DEFAULT_DIM_CAP: usize = 1_000_000;

/// Level dimensions `d_0..=d_depth`: `k^{(0)} = (n_j)`, `k^{(1)} = (k_j)` and
/// `k^{(n+1)} = M k^{(n)}` for `n ≥ 1`.
pub fn fock_dims(x: &Correspondence, depth: usize, cap: usize) -> Result<Vec<usize>> {
    let mult = x.multiplicity();
    let mut k: Vec<usize> = x.algebra().blocks().to_vec();
    let mut dims = Vec::with_capacity(depth + 1);
    for level in 0..=depth {
        let total = k
            .iter()
            .try_fold(0usize, |acc, &v| acc.checked_add(v))
            .filter(|&d| d <= cap)
            .ok_or(Error::DimensionCap {
                level,
                dim: k.iter().fold(0usize, |acc, &v| acc.saturating_add(v)),
                cap,
            })?;
        dims.push(total);
        if level == depth {
            break;
        }
        if level == 0 {
            k = x.module().fibers().to_vec();
            continue;
        }
        let mut next = alloc::vec![0usize; k.len()];
        for (j, row) in mult.iter().enumerate() {
            for (i, &c) in row.iter().enumerate() {
                next[j] = c
                    .checked_mul(k[i])
                    .and_then(|v| next[j].checked_add(v))
                    .ok_or(Error::DimensionCap {
                        level: level + 1,
                        dim: usize::MAX,
                        cap,
                    })?;
            }
        }
        k = next;
    }
    Ok(dims)
}

/// The graded Hilbert space `⊕_{n ≤ N} X^{⊗n} ⊗_A H`.
#[derive(Clone, Debug)]
pub struct FockSpace {
    correspondence: Correspondence,
    depth: usize,
    levels: Vec<Correspondence>,
    creators: Vec<TensorProduct>,
    dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl FockSpace {
    pub fn new(x: &Correspondence, depth: usize, cap: usize) -> Result<Self> {
        let dims = fock_dims(x, depth, cap)?;
        let mut levels = Vec::with_capacity(depth + 1);
        let mut creators = Vec::with_capacity(depth);
        levels.push(Correspondence::identity(x.algebra()));
        for n in 0..depth {
            let product = TensorProduct::new(x, &levels[n])?;
            levels.push(product.product().clone());
            creators.push(product);
        }
        for (n, level) in levels.iter().enumerate() {
            let d: usize = level.module().fibers().iter().sum();
            if d != dims[n] {
                return Err(Error::Inconsistent(format!(
                    "level {n}: tensor power has dimension {d}, recurrence gives {}",
                    dims[n]
                )));
            }
        }
        let mut offsets = Vec::with_capacity(depth + 2);
        let mut acc = 0;
        for &d in &dims {
            offsets.push(acc);
            acc += d;
        }
        offsets.push(acc);
        Ok(Self {
            correspondence: x.clone(),
            depth,
            levels,
            creators,
            dims,
            offsets,
        })
    }

    pub fn correspondence(&self) -> &Correspondence {
        &self.correspondence
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.offsets[self.depth + 1]
    }

    /// `X^{⊗n}`.
    pub fn level(&self, n: usize) -> &Correspondence {
        &self.levels[n]
    }

    /// Coordinates of level `n`.
    pub fn level_range(&self, n: usize) -> Range<usize> {
        self.offsets[n]..self.offsets[n + 1]
    }

    /// Coordinates of fiber `j` inside level `n`.
    pub fn fiber_range(&self, n: usize, j: usize) -> Range<usize> {
        let fibers = self.levels[n].module().fibers();
        let start = self.offsets[n] + fibers[..j].iter().sum::<usize>();
        start..start + fibers[j]
    }

    /// Level containing coordinate `i`.
    pub fn level_of(&self, i: usize) -> usize {
        (0..=self.depth)
            .find(|&n| self.level_range(n).contains(&i))
            .expect("coordinate inside the Fock space")
    }
}

/// A truncated Fock representation together with its grading.
#[derive(Clone, Debug)]
pub struct FockRepresentation {
    space: FockSpace,
    rep: Representation,
}

/// Worst axiom defects restricted to input vectors in one level.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelDefects {
    pub level: usize,
    pub axiom_i: f64,
    pub axiom_ii: f64,
}

/// Covariance defect of one generator of `J_X`, level by level.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileRow {
    pub generator: MatrixUnit,
    /// `‖π(a)‖` restricted to level `0`.
    pub vacuum_norm: f64,
    /// `‖(π(a) − ψ_t(φ_X(a)))|_{level n}‖` for `n = 0..=N`.
    pub levels: Vec<f64>,
}

/// Verdicts on the truncation contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockContract {
    /// Axioms (i) and (ii) hold on levels below the cut, (ii) on every level.
    pub axioms_below_cut: bool,
    /// The covariance defect vanishes on levels `1..=N` and equals the vacuum
    /// norm at level `0`.
    pub vacuum_localized: bool,
}

impl FockContract {
    pub fn holds(&self) -> bool {
        self.axioms_below_cut && self.vacuum_localized
    }
}

/// Build the Fock representation of depth `N` with the default dimension cap.
pub fn build_fock(x: &Correspondence, depth: usize) -> Result<FockRepresentation> {
    build_fock_with_cap(x, depth, DEFAULT_DIM_CAP)
}

pub fn build_fock_with_cap(x: &Correspondence, depth: usize, cap: usize) -> Result<FockRepresentation> {
    let space = FockSpace::new(x, depth, cap)?;
    let dim = space.total_dim();
    let algebra = x.algebra();

    let mut pi = Vec::with_capacity(algebra.dimension());
    for u in algebra.basis() {
        let a = algebra.unit(u)?;
        let mut m = linalg::zeros(dim, dim);
        for n in 0..=depth {
            let image = space.levels[n].left_action().apply(&a)?;
            for (j, block) in image.iter().enumerate() {
                let r = space.fiber_range(n, j);
                m.view_mut((r.start, r.start), (r.len(), r.len())).copy_from(block);
            }
        }
        pi.push(m);
    }

    let mut t = Vec::with_capacity(x.module().dimension());
    for u in x.module().basis() {
        let xi = x.module().unit(u)?;
        let mut m = linalg::zeros(dim, dim);
        for n in 0..depth {
            let creation = space.creators[n].left_multiplier(&xi)?;
            for (j, block) in creation.iter().enumerate() {
                let (rows, cols) = (space.fiber_range(n + 1, j), space.fiber_range(n, j));
                m.view_mut((rows.start, cols.start), (rows.len(), cols.len()))
                    .copy_from(block);
            }
        }
        t.push(m);
    }

    let rep = Representation::new(x.clone(), dim, pi, t)?;
    Ok(FockRepresentation { space, rep })
}

fn column_norm(m: &CMatrix, cols: &Range<usize>) -> f64 {
    if cols.is_empty() {
        return 0.0;
    }
    linalg::spectral_norm(&m.columns(cols.start, cols.len()).into_owned())
}

impl FockRepresentation {
    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn representation(&self) -> &Representation {
        &self.rep
    }

    pub fn into_representation(self) -> Representation {
        self.rep
    }

    pub fn dims(&self) -> &[usize] {
        self.space.dims()
    }

    /// Axiom defects resolved by the level of the input vector.
    pub fn axiom_defects_by_level(&self) -> Result<Vec<LevelDefects>> {
        let x = self.rep.correspondence();
        let module = x.module();
        let algebra = x.algebra();
        let units: Vec<_> = module.basis().iter().map(|&u| module.unit(u)).collect::<Result<_>>()?;
        let a_units: Vec<_> = algebra
            .basis()
            .iter()
            .map(|&u| algebra.unit(u))
            .collect::<Result<_>>()?;
        let t = self.rep.t_basis();
        let pi = self.rep.pi_basis();
        let ranges: Vec<Range<usize>> = (0..=self.space.depth).map(|n| self.space.level_range(n)).collect();

        let mut out: Vec<LevelDefects> = (0..=self.space.depth)
            .map(|level| LevelDefects {
                level,
                axiom_i: 0.0,
                axiom_ii: 0.0,
            })
            .collect();
        for (p, xi) in units.iter().enumerate() {
            let t_adj = t[p].adjoint();
            for (q, eta) in units.iter().enumerate() {
                let diff = linalg::mul(&t_adj, &t[q]) - self.rep.pi(&xi.inner(eta)?)?;
                for (row, r) in out.iter_mut().zip(&ranges) {
                    row.axiom_i = row.axiom_i.max(column_norm(&diff, r));
                }
            }
        }
        for (p, a) in a_units.iter().enumerate() {
            let phi = x.left_act(a)?;
            for (q, xi) in units.iter().enumerate() {
                let diff = linalg::mul(&pi[p], &t[q]) - self.rep.t(&phi.apply(xi)?)?;
                for (row, r) in out.iter_mut().zip(&ranges) {
                    row.axiom_ii = row.axiom_ii.max(column_norm(&diff, r));
                }
            }
        }
        Ok(out)
    }

    /// Covariance defect of each matrix unit of `J_X`, level by level.
    pub fn defect_profile(&self) -> Result<Vec<ProfileRow>> {
        let x = self.rep.correspondence();
        let algebra = x.algebra();
        let map = PsiMap::new(&self.rep)?;
        let ranges: Vec<Range<usize>> = (0..=self.space.depth).map(|n| self.space.level_range(n)).collect();
        let mut rows = Vec::new();
        for u in algebra.ideal_basis(&x.jx()) {
            let a = algebra.unit(u)?;
            let pi_a = self.rep.pi(&a)?;
            let diff = &pi_a - map.apply(&x.left_act(&a)?)?;
            rows.push(ProfileRow {
                generator: u,
                vacuum_norm: column_norm(&pi_a, &ranges[0]),
                levels: ranges.iter().map(|r| column_norm(&diff, r)).collect(),
            });
        }
        Ok(rows)
    }

    pub fn check_contract(&self, tol: f64) -> Result<FockContract> {
        let depth = self.space.depth;
        let axioms_below_cut = self
            .axiom_defects_by_level()?
            .iter()
            .all(|d| d.axiom_ii <= tol && (d.level >= depth || d.axiom_i <= tol));
        let vacuum_localized = self
            .defect_profile()?
            .iter()
            .all(|row| (row.levels[0] - row.vacuum_norm).abs() <= tol && row.levels[1..].iter().all(|&d| d <= tol));
        Ok(FockContract {
            axioms_below_cut,
            vacuum_localized,
        })
    }
}
