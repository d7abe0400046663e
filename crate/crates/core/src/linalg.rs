//! Small dense linear-algebra helpers shared across the crate.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

/// Binomial coefficient C(n, k) as usize; saturates are not needed at desk scale.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1usize;
    for i in 0..k {
        num = num * (n - i) / (i + 1);
    }
    num
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues sorted ascending.
/// Returns (values, vectors) with vectors as columns matching the order.
pub fn sym_eigen_sorted(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut vals = DVector::zeros(n);
    let mut vecs = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vals[dst] = eig.eigenvalues[src];
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Symmetric positive-definite square root via eigen-decomposition.
pub fn spd_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let (vals, vecs) = sym_eigen_sorted(m);
    let d = DMatrix::from_diagonal(&vals.map(|v| v.max(0.0).sqrt()));
    &vecs * d * vecs.transpose()
}

/// Inverse SPD square root; eigenvalues below `floor` relative to the largest
/// are clamped to avoid blow-up on nearly singular inputs.
pub fn spd_inv_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let (vals, vecs) = sym_eigen_sorted(m);
    let vmax = vals[vals.len() - 1].abs().max(f64::MIN_POSITIVE);
    let floor = vmax * 1e-300;
    let d = DMatrix::from_diagonal(&vals.map(|v| 1.0 / v.max(floor).sqrt()));
    &vecs * d * vecs.transpose()
}

/// Thin QR with the sign convention that the diagonal of R is nonnegative.
/// Returns (Q, R) with Q having `ncols` orthonormal columns.
pub fn qr_positive(m: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let qr = m.clone().qr();
    let mut q = qr.q();
    let mut r = qr.r();
    for j in 0..r.nrows().min(r.ncols()) {
        if r[(j, j)] < 0.0 {
            for c in 0..r.ncols() {
                r[(j, c)] = -r[(j, c)];
            }
            for i in 0..q.nrows() {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    (q, r)
}

/// Orthonormalize the columns of `m` (thin QR, positive diagonal).
pub fn orthonormalize(m: &DMatrix<f64>) -> DMatrix<f64> {
    qr_positive(m).0
}

/// Cosines of the principal angles between the column spans of two
/// orthonormal frames, sorted descending (largest cosine first).
pub fn principal_cosines(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Vec<f64> {
    let prod = a.transpose() * b;
    let svd = prod.svd(false, false);
    let mut cos: Vec<f64> = svd.singular_values.iter().map(|&s| s.clamp(0.0, 1.0)).collect();
    cos.sort_by(|x, y| y.total_cmp(x));
    cos
}

/// Largest principal angle between two equal-dimension subspaces (radians).
/// This is the natural "distance" for convergence checks.
pub fn max_principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let cos = principal_cosines(a, b);
    cos.last().copied().map(|c| c.acos()).unwrap_or(0.0)
}

/// Smallest principal angle between two subspaces (radians); a zero value
/// means the subspaces intersect and the splitting is degenerate.
pub fn min_principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let cos = principal_cosines(a, b);
    cos.first().copied().map(|c| c.acos()).unwrap_or(std::f64::consts::FRAC_PI_2)
}

/// Intersection of two subspaces given by orthonormal frames, computed from
/// the principal vectors with cosine above `cos_tol`. Returns an orthonormal
/// frame of the intersection with the requested dimension, or None if the
/// principal cosines do not support it.
pub fn subspace_intersection(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    dim: usize,
    cos_tol: f64,
) -> Option<DMatrix<f64>> {
    let prod = a.transpose() * b;
    let svd = prod.clone().svd(true, false);
    let u = svd.u.as_ref()?;
    let mut pairs: Vec<(f64, usize)> =
        svd.singular_values.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    if pairs.len() < dim || pairs[dim - 1].0 < cos_tol {
        return None;
    }
    let mut cols = DMatrix::zeros(a.nrows(), dim);
    for (dst, &(_, idx)) in pairs.iter().take(dim).enumerate() {
        let v = a * u.column(idx);
        cols.set_column(dst, &v);
    }
    Some(orthonormalize(&cols))
}

/// Singular values of a matrix, sorted descending.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Operator 2-norm.
pub fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Smallest singular value.
pub fn smallest_singular_value(m: &DMatrix<f64>) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Draw an n x k matrix with iid standard normal entries.
pub fn random_gaussian<R: Rng>(rng: &mut R, nrows: usize, ncols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(nrows, ncols, |_, _| rng.sample(StandardNormal))
}

/// Random orthonormal k-frame in R^n (QR of a Gaussian matrix).
pub fn random_frame<R: Rng>(rng: &mut R, n: usize, k: usize) -> DMatrix<f64> {
    orthonormalize(&random_gaussian(rng, n, k))
}

/// Least-squares coordinates of the columns of `v` in the (full-column-rank)
/// frame `basis`; also returns the worst residual column norm, which measures
/// how far `v` is from the span.
pub fn coords_in_frame(basis: &DMatrix<f64>, v: &DMatrix<f64>) -> (DMatrix<f64>, f64) {
    let gram = basis.transpose() * basis;
    let rhs = basis.transpose() * v;
    let chol = gram
        .cholesky()
        .unwrap_or_else(|| (gram + DMatrix::identity(basis.ncols(), basis.ncols()) * 1e-14).cholesky().expect("frame gram not SPD"));
    let coords = chol.solve(&rhs);
    let recon = basis * &coords;
    let mut worst: f64 = 0.0;
    for c in 0..v.ncols() {
        let diff = v.column(c) - recon.column(c);
        let denom = v.column(c).norm().max(1e-300);
        worst = worst.max(diff.norm() / denom);
    }
    (coords, worst)
}
