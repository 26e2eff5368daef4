//! Reference computations for the test suites.
//!
//! Everything here works on raw matrices and index data, straight from the
//! definitions, and shares no code with `corrkit-core`.

use std::collections::BTreeSet;

use nalgebra::{Complex, DMatrix};

pub type C = Complex<f64>;
pub type Mat = DMatrix<C>;

/// Singular values below this fraction of the largest are discarded.
pub const RANK_REL: f64 = 1e-9;

/// A correspondence over `⊕ M_{n_i}` given by fibers `k_j`, multiplicities
/// `M[j][i]` and one unitary per fiber.
#[derive(Clone, Debug)]
pub struct CorrData {
    pub blocks: Vec<usize>,
    pub fibers: Vec<usize>,
    pub multiplicity: Vec<Vec<usize>>,
    pub unitaries: Vec<Mat>,
}

impl CorrData {
    pub fn new(
        blocks: Vec<usize>,
        fibers: Vec<usize>,
        multiplicity: Vec<Vec<usize>>,
        unitaries: Option<Vec<Mat>>,
    ) -> Self {
        let unitaries = unitaries.unwrap_or_else(|| fibers.iter().map(|&k| Mat::identity(k, k)).collect());
        Self {
            blocks,
            fibers,
            multiplicity,
            unitaries,
        }
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// `φ(a)` on each fiber: `W_j diag(a_i repeated M[j][i] times, 0) W_j*`.
    pub fn phi(&self, a: &[Mat]) -> Vec<Mat> {
        (0..self.fibers.len())
            .map(|j| {
                let k = self.fibers[j];
                let mut d = Mat::zeros(k, k);
                let mut at = 0;
                for (i, ai) in a.iter().enumerate() {
                    for _ in 0..self.multiplicity[j][i] {
                        d.view_mut((at, at), (ai.nrows(), ai.ncols())).copy_from(ai);
                        at += ai.nrows();
                    }
                }
                let w = &self.unitaries[j];
                w * d * w.adjoint()
            })
            .collect()
    }

    /// The matrix unit `E^i_{pq}` of the algebra.
    pub fn algebra_unit(&self, i: usize, p: usize, q: usize) -> Vec<Mat> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(b, &n)| {
                let mut m = Mat::zeros(n, n);
                if b == i {
                    m[(p, q)] = C::new(1.0, 0.0);
                }
                m
            })
            .collect()
    }

    /// The matrix unit of the module in fiber `j`, row `p`, column `q`.
    pub fn module_unit(&self, j: usize, p: usize, q: usize) -> Vec<Mat> {
        (0..self.fibers.len())
            .map(|b| {
                let mut m = Mat::zeros(self.fibers[b], self.blocks[b]);
                if b == j {
                    m[(p, q)] = C::new(1.0, 0.0);
                }
                m
            })
            .collect()
    }

    /// Every module matrix unit, fiber by fiber.
    pub fn module_units(&self) -> Vec<Vec<Mat>> {
        let mut out = Vec::new();
        for j in 0..self.fibers.len() {
            for p in 0..self.fibers[j] {
                for q in 0..self.blocks[j] {
                    out.push(self.module_unit(j, p, q));
                }
            }
        }
        out
    }

    /// Dimension of `φ(I)` for the ideal spanned by `blocks`.
    pub fn image_rank(&self, ideal: &BTreeSet<usize>) -> usize {
        let mut rows: Vec<Vec<C>> = Vec::new();
        for &i in ideal {
            let n = self.blocks[i];
            for p in 0..n {
                for q in 0..n {
                    rows.push(
                        self.phi(&self.algebra_unit(i, p, q))
                            .iter()
                            .flat_map(|m| m.iter().copied())
                            .collect(),
                    );
                }
            }
        }
        span_rank(&rows)
    }

    pub fn ideal_dimension(&self, ideal: &BTreeSet<usize>) -> usize {
        ideal.iter().map(|&i| self.blocks[i] * self.blocks[i]).sum()
    }

    /// `φ` restricted to the ideal is injective.
    pub fn injective_on(&self, ideal: &BTreeSet<usize>) -> bool {
        self.image_rank(ideal) == self.ideal_dimension(ideal)
    }

    /// `dim K(X) = Σ k_j²`.
    pub fn compact_dimension(&self) -> usize {
        self.fibers.iter().map(|k| k * k).sum()
    }
}

/// `⟨ξ, η⟩ = ⊕ ξ_j* η_j`.
pub fn inner(xi: &[Mat], eta: &[Mat]) -> Vec<Mat> {
    xi.iter().zip(eta).map(|(x, e)| x.adjoint() * e).collect()
}

/// `θ_{ξ,η} = ⊕ ξ_j η_j*`.
pub fn theta(xi: &[Mat], eta: &[Mat]) -> Vec<Mat> {
    xi.iter().zip(eta).map(|(x, e)| x * e.adjoint()).collect()
}

/// All subsets of `0..m`.
pub fn subsets(m: usize) -> Vec<BTreeSet<usize>> {
    (0u32..1 << m)
        .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Operator norm by repeated squaring of `m* m`.
///
/// `B ← B² / tr B²` converges to the normalized projection onto the top
/// eigenspace; `tr(B m*m) / tr B` is then the largest eigenvalue of `m*m`.
pub fn op_norm(m: &Mat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let g = m.adjoint() * m;
    let mut b = g.clone();
    for _ in 0..64 {
        let tr = b.trace().re;
        if tr <= 0.0 || !tr.is_finite() {
            return 0.0;
        }
        b /= C::new(tr, 0.0);
        b = &b * &b;
    }
    let tr = b.trace().re;
    if tr <= 0.0 || !tr.is_finite() {
        return 0.0;
    }
    ((&b * &g).trace().re / tr).max(0.0).sqrt()
}

/// Norm of a block-diagonal operator.
pub fn op_norm_blocks(blocks: &[Mat]) -> f64 {
    blocks.iter().map(op_norm).fold(0.0, f64::max)
}

/// Rank by Gaussian elimination with complete pivoting; pivots at or below
/// [`RANK_REL`] times the largest entry count as zero.
pub fn rank(m: &Mat) -> usize {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let top = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    let mut r = 0;
    while r < rows.min(cols) {
        let mut best = (r, r, 0.0);
        for i in r..rows {
            for j in r..cols {
                let v = a[(i, j)].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if best.2 <= RANK_REL * top {
            break;
        }
        a.swap_rows(r, best.0);
        a.swap_columns(r, best.1);
        let pivot = a[(r, r)];
        for i in r + 1..rows {
            let f = a[(i, r)] / pivot;
            if f != C::new(0.0, 0.0) {
                for j in r..cols {
                    let v = a[(r, j)];
                    a[(i, j)] -= f * v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Rank of a family of coordinate vectors.
pub fn span_rank(rows: &[Vec<C>]) -> usize {
    if rows.is_empty() || rows[0].is_empty() {
        return 0;
    }
    rank(&Mat::from_fn(rows.len(), rows[0].len(), |r, c| rows[r][c]))
}

/// `m ≥ −tol` in the Loewner order, via a real Cholesky factorization of
/// the embedding `[[A, −B], [B, A]]` of `(m + m*)/2 + tol·1 = A + iB`.
pub fn is_psd(m: &Mat, tol: f64) -> bool {
    let n = m.nrows();
    let h = (m + m.adjoint()) * C::new(0.5, 0.0) + Mat::identity(n, n) * C::new(tol, 0.0);
    let real = DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, c| {
        let z = h[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    real.cholesky().is_some()
}

/// Fiber dimensions and multiplicities of `X ⊗_A Y` from the Gram matrix of
/// the balanced inner product on the algebraic tensor product.
///
/// The fiber over block `j` is read off the scalar Gram matrix
/// `⟨ξ_a ⊗ η_a, ξ_b ⊗ η_b⟩_j[0, 0]` with `ξ` running over the matrix units
/// of `X` and `η` over the units of `Y` supported in column `0` of fiber
/// `j`. Inserting `φ_X(E^l_{00})` gives the multiplicity of block `l`.
pub fn gram_tensor(x: &CorrData, y: &CorrData) -> (Vec<usize>, Vec<Vec<usize>>) {
    let m = x.num_blocks();
    let xs = x.module_units();
    let projections: Vec<Vec<Mat>> = (0..m)
        .map(|l| {
            if x.blocks[l] > 0 {
                x.phi(&x.algebra_unit(l, 0, 0))
            } else {
                Vec::new()
            }
        })
        .collect();
    let mut fibers = vec![0; m];
    let mut mult = vec![vec![0; m]; m];
    for j in 0..m {
        if y.blocks[j] == 0 || y.fibers[j] == 0 {
            continue;
        }
        let ys: Vec<Vec<Mat>> = (0..y.fibers[j]).map(|r| y.module_unit(j, r, 0)).collect();
        let ky = ys.len();
        let gram = |insert: Option<usize>| -> Mat {
            let mut g = Mat::zeros(xs.len() * ky, xs.len() * ky);
            for (b, xb) in xs.iter().enumerate() {
                let xb: Vec<Mat> = match insert {
                    None => xb.clone(),
                    Some(l) => projections[l].iter().zip(xb).map(|(p, v)| p * v).collect(),
                };
                for (a, xa) in xs.iter().enumerate() {
                    let acted = y.phi(&inner(xa, &xb));
                    for (q, yq) in ys.iter().enumerate() {
                        let moved: Vec<Mat> = acted.iter().zip(yq).map(|(p, v)| p * v).collect();
                        for (r, yr) in ys.iter().enumerate() {
                            g[(a * ky + r, b * ky + q)] = inner(yr, &moved)[j][(0, 0)];
                        }
                    }
                }
            }
            g
        };
        fibers[j] = rank(&gram(None));
        for (l, &n) in x.blocks.iter().enumerate() {
            if n > 0 {
                mult[j][l] = rank(&gram(Some(l)));
            }
        }
    }
    (fibers, mult)
}

/// Number of paths of each length `0..=depth`, by depth-first enumeration.
/// Length-`0` paths are the vertices.
pub fn dfs_path_counts(vertices: usize, edges: &[(usize, usize)], depth: usize) -> Vec<usize> {
    fn walk(at: usize, len: usize, depth: usize, edges: &[(usize, usize)], counts: &mut [usize]) {
        counts[len] += 1;
        if len == depth {
            return;
        }
        for &(s, r) in edges {
            if s == at {
                walk(r, len + 1, depth, edges, counts);
            }
        }
    }
    let mut counts = vec![0; depth + 1];
    for v in 0..vertices {
        walk(v, 0, depth, edges, &mut counts);
    }
    counts
}

/// Vertex classification of a finite graph as `(sinks, sources, regular)`.
pub fn classify(vertices: usize, edges: &[(usize, usize)]) -> (BTreeSet<usize>, BTreeSet<usize>, BTreeSet<usize>) {
    let out = |v: usize| edges.iter().filter(|e| e.0 == v).count();
    let into = |v: usize| edges.iter().filter(|e| e.1 == v).count();
    let sinks = (0..vertices).filter(|&v| out(v) == 0).collect();
    let sources = (0..vertices).filter(|&v| into(v) == 0).collect();
    let regular = (0..vertices).filter(|&v| out(v) > 0).collect();
    (sinks, sources, regular)
}
