//! Dense complex matrix helpers shared by every module.
//!
//! Everything here works on [`CMatrix`], a heap-allocated `nalgebra` matrix of
//! double-precision complex numbers. Norms are computed through a Hermitian
//! eigen-decomposition of `a* a`.

use alloc::vec::Vec;

use nalgebra::{ComplexField, DMatrix, SymmetricEigen, SVD};

pub use nalgebra::Complex;

/// Complex scalar.
pub type C64 = Complex<f64>;

/// Dense complex matrix.
pub type CMatrix = DMatrix<C64>;

/// Default absolute tolerance for numeric verdicts.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative cut-off used when counting numerically nonzero singular values.
pub const RANK_TOL: f64 = 1e-9;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// The matrix unit `E_{row,col}` of the given shape.
pub fn unit(rows: usize, cols: usize, row: usize, col: usize) -> CMatrix {
    let mut m = zeros(rows, cols);
    m[(row, col)] = c64(1.0, 0.0);
    m
}

/// Eigenvalues of the Hermitian part `(m + m*)/2`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    debug_assert!(m.is_square());
    if m.nrows() == 0 {
        return Vec::new();
    }
    let h = (m + m.adjoint()).scale(0.5);
    let mut values: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Smallest eigenvalue of the Hermitian part of `m`; `+inf` for an empty matrix.
pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).first().copied().unwrap_or(f64::INFINITY)
}

/// `a b`, skipping zero entries when both factors are sparse enough for that
/// to pay off.
pub fn mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions");
    let (n, inner, p) = (a.nrows(), a.ncols(), b.ncols());
    let is_zero = |z: &C64| z.re == 0.0 && z.im == 0.0;
    let a_cols: Vec<Vec<(usize, C64)>> = (0..inner)
        .map(|k| {
            a.column(k)
                .iter()
                .enumerate()
                .filter(|(_, z)| !is_zero(z))
                .map(|(i, z)| (i, *z))
                .collect()
        })
        .collect();
    let b_rows: Vec<usize> = (0..inner)
        .map(|k| b.row(k).iter().filter(|z| !is_zero(z)).count())
        .collect();
    let cost: usize = a_cols.iter().zip(&b_rows).map(|(c, r)| c.len() * r).sum();
    if cost.saturating_mul(4) >= n * inner * p {
        return a * b;
    }
    let mut out = zeros(n, p);
    for j in 0..p {
        for k in 0..inner {
            let bkj = b[(k, j)];
            if is_zero(&bkj) {
                continue;
            }
            for &(i, aik) in &a_cols[k] {
                out[(i, j)] += aik * bkj;
            }
        }
    }
    out
}

/// Connected components of the bipartite row/column graph of the nonzero
/// entries, as `(rows, columns)` pairs.
fn components(m: &CMatrix) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (nr, nc) = m.shape();
    let mut parent: Vec<usize> = (0..nr + nc).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for j in 0..nc {
        for i in 0..nr {
            let z = m[(i, j)];
            if z.re != 0.0 || z.im != 0.0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, nr + j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut index = alloc::vec![usize::MAX; nr + nc];
    let mut out: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for v in 0..nr + nc {
        let root = find(&mut parent, v);
        if index[root] == usize::MAX {
            index[root] = out.len();
            out.push((Vec::new(), Vec::new()));
        }
        let slot = &mut out[index[root]];
        if v < nr {
            slot.0.push(v);
        } else {
            slot.1.push(v - nr);
        }
    }
    out
}

/// Largest singular value, computed from the top eigenvalue of `m* m`.
///
/// Zero rows and columns are dropped and independent blocks of the sparsity
/// pattern are handled separately.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    let is_zero = |z: &C64| z.re == 0.0 && z.im == 0.0;
    let rows: Vec<usize> = (0..m.nrows()).filter(|&i| !m.row(i).iter().all(is_zero)).collect();
    if rows.is_empty() {
        return 0.0;
    }
    let cols: Vec<usize> = (0..m.ncols()).filter(|&j| !m.column(j).iter().all(is_zero)).collect();
    if rows.len() < m.nrows() || cols.len() < m.ncols() {
        let compact = CMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])]);
        return spectral_norm(&compact);
    }
    let components = components(m);
    if components.len() > 1 {
        return components
            .iter()
            .map(|(r, c)| spectral_norm(&CMatrix::from_fn(r.len(), c.len(), |i, j| m[(r[i], c[j])])))
            .fold(0.0, f64::max);
    }
    // Work with the smaller Gram matrix.
    let gram = if m.nrows() < m.ncols() {
        m * m.adjoint()
    } else {
        m.adjoint() * m
    };
    let top = hermitian_eigenvalues(&gram).last().copied().unwrap_or(0.0);
    top.max(0.0).sqrt()
}

const SVD_MAX_ITER: usize = 10_000;

/// Singular values of `m` in descending order.
///
/// Tall or wide inputs are first reduced to the square `R` factor of a QR
/// decomposition. If the iteration does not converge, the square roots of
/// the Gram eigenvalues are returned instead.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let square = if m.nrows() > m.ncols() {
        m.clone().qr().r()
    } else if m.nrows() < m.ncols() {
        m.adjoint().qr().r()
    } else {
        m.clone()
    };
    let mut values: Vec<f64> = match SVD::try_new(square.clone(), false, false, f64::EPSILON, SVD_MAX_ITER) {
        Some(svd) => svd.singular_values.iter().copied().collect(),
        None => hermitian_eigenvalues(&(square.adjoint() * &square))
            .iter()
            .map(|v| v.max(0.0).sqrt())
            .collect(),
    };
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Number of singular values above `rel_tol` times the largest one.
pub fn numeric_rank(m: &CMatrix, rel_tol: f64) -> usize {
    let values = singular_values(m);
    let Some(&top) = values.first() else {
        return 0;
    };
    if top <= f64::MIN_POSITIVE {
        return 0;
    }
    values.iter().filter(|&&s| s > rel_tol * top).count()
}

/// Rank of the span of a family of vectors, each given as one row.
pub fn span_rank(rows: &[Vec<C64>], rel_tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let width = rows[0].len();
    let stacked = CMatrix::from_fn(rows.len(), width, |i, j| rows[i][j]);
    numeric_rank(&stacked, rel_tol)
}

/// Row-major flattening of a matrix.
pub fn flatten(m: &CMatrix) -> Vec<C64> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Block-diagonal matrix built from (possibly rectangular or empty) blocks.
pub fn block_diag<'a, I>(blocks: I) -> CMatrix
where
    I: IntoIterator<Item = &'a CMatrix>,
    I::IntoIter: Clone,
{
    let iter = blocks.into_iter();
    let rows: usize = iter.clone().map(|b| b.nrows()).sum();
    let cols: usize = iter.clone().map(|b| b.ncols()).sum();
    let mut out = zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in iter {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Largest absolute entry of `a - b`. Shapes must agree.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).modulus())
        .fold(0.0, f64::max)
}

/// `‖u* u − 1‖` and `‖u u* − 1‖`, whichever is larger.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    let id = identity(n);
    spectral_norm(&(u.adjoint() * u - &id)).max(spectral_norm(&(u * u.adjoint() - id)))
}

/// Entrywise equality within `tol * max(1, ‖a‖, ‖b‖)`.
pub fn approx_eq(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let scale = 1f64.max(spectral_norm(a)).max(spectral_norm(b));
    max_abs_diff(a, b) <= tol * scale
}

/// Scale factor `max(1, x_1, x_2, ...)` used to turn an absolute tolerance
/// into one relative to the operands.
pub fn tol_scale<I: IntoIterator<Item = f64>>(norms: I) -> f64 {
    norms.into_iter().fold(1.0, f64::max)
}
