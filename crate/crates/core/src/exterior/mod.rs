//! Exact finite-dimensional multilinear algebra: wedge products, induced
//! inner products, compound operators, singular bases with respect to a pair
//! of inner products, and recovery of a base inner product from an inner
//! product on the top-minus-one wedge power.
//!
//! All wedge spaces use the lexicographic basis of strictly increasing index
//! tuples. The identification of the (n-1)-th wedge power of R^n with R^n
//! uses the signed complement map, whose sign table is computed once per
//! dimension.

use crate::linalg::{binomial, spd_sqrt, sym_eigen_sorted};
use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExteriorError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degree {k} out of range for ambient dimension {n}")]
    DegreeOutOfRange { k: usize, n: usize },
    #[error("matrix is not symmetric within relative tolerance {tol}")]
    NotSymmetric { tol: f64 },
    #[error("matrix is not positive definite (pivot {pivot})")]
    NotPositiveDefinite { pivot: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

pub type Result<T> = std::result::Result<T, ExteriorError>;

/// Strictly increasing tuple of `k` indices in `0..n`, identifying one
/// lexicographic wedge-basis element of the k-th exterior power.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    n: usize,
    indices: Vec<usize>,
}

impl MultiIndex {
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        if indices.len() > n {
            return Err(ExteriorError::DegreeOutOfRange { k: indices.len(), n });
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(ExteriorError::DegenerateInput(
                    "indices must be strictly increasing".into(),
                ));
            }
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(ExteriorError::DegreeOutOfRange { k: last + 1, n });
            }
        }
        Ok(Self { n, indices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Lexicographic rank among all C(n,k) index tuples of the same degree.
    pub fn rank(&self) -> usize {
        let k = self.degree();
        let mut rank = 0usize;
        let mut next = 0usize;
        for (i, &c) in self.indices.iter().enumerate() {
            for v in next..c {
                rank += binomial(self.n - v - 1, k - i - 1);
            }
            next = c + 1;
        }
        rank
    }

    /// Inverse of `rank` for the given (n, k).
    pub fn from_rank(n: usize, k: usize, mut rank: usize) -> Result<Self> {
        if k > n || rank >= binomial(n, k) {
            return Err(ExteriorError::DegreeOutOfRange { k, n });
        }
        let mut indices = Vec::with_capacity(k);
        let mut v = 0usize;
        for i in 0..k {
            loop {
                let block = binomial(n - v - 1, k - i - 1);
                if rank < block {
                    indices.push(v);
                    v += 1;
                    break;
                }
                rank -= block;
                v += 1;
            }
        }
        Ok(Self { n, indices })
    }

    /// All multi-indices of degree k in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<MultiIndex> {
        let count = binomial(n, k);
        (0..count).map(|r| MultiIndex::from_rank(n, k, r).expect("rank in range")).collect()
    }

    /// Complementary index set in 0..n.
    pub fn complement(&self) -> MultiIndex {
        let mut inside = vec![false; self.n];
        for &i in &self.indices {
            inside[i] = true;
        }
        let comp: Vec<usize> = (0..self.n).filter(|&i| !inside[i]).collect();
        MultiIndex { n: self.n, indices: comp }
    }
}

/// Coefficient vector of a k-vector over the lexicographic wedge basis.
#[derive(Debug, Clone, PartialEq)]
pub struct KVector {
    n: usize,
    k: usize,
    coeffs: DVector<f64>,
}

impl KVector {
    pub fn new(n: usize, k: usize, coeffs: DVector<f64>) -> Result<Self> {
        let expected = binomial(n, k);
        if coeffs.len() != expected {
            return Err(ExteriorError::DimensionMismatch { expected, got: coeffs.len() });
        }
        Ok(Self { n, k, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &DVector<f64> {
        &self.coeffs
    }

    /// Euclidean norm in the lexicographic basis (the norm induced by the
    /// standard inner product of the ambient space).
    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// Norm with respect to an inner product on the wedge space.
    pub fn norm_with(&self, g: &GramForm) -> Result<f64> {
        if g.dim() != self.coeffs.len() {
            return Err(ExteriorError::DimensionMismatch {
                expected: self.coeffs.len(),
                got: g.dim(),
            });
        }
        Ok((self.coeffs.dot(&(g.matrix() * &self.coeffs))).max(0.0).sqrt())
    }
}

/// Symmetric positive-definite matrix of inner products.
#[derive(Debug, Clone, PartialEq)]
pub struct GramForm {
    matrix: DMatrix<f64>,
}

impl GramForm {
    /// Validates symmetry (1e-12 relative) and positive definiteness.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() {
            return Err(ExteriorError::DimensionMismatch { expected: n, got: matrix.ncols() });
        }
        let scale = matrix.norm().max(f64::MIN_POSITIVE);
        let asym = (&matrix - matrix.transpose()).norm();
        if asym > 1e-12 * scale {
            return Err(ExteriorError::NotSymmetric { tol: 1e-12 });
        }
        let sym = (&matrix + matrix.transpose()) * 0.5;
        if sym.clone().cholesky().is_none() {
            let (vals, _) = sym_eigen_sorted(&sym);
            return Err(ExteriorError::NotPositiveDefinite { pivot: vals[0] });
        }
        Ok(Self { matrix: sym })
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim) }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn inner(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        u.dot(&(&self.matrix * v))
    }

    pub fn norm_of(&self, u: &DVector<f64>) -> f64 {
        self.inner(u, u).max(0.0).sqrt()
    }

    /// Lower Cholesky factor L with matrix = L L^T.
    pub fn cholesky_l(&self) -> DMatrix<f64> {
        self.matrix.clone().cholesky().expect("validated SPD").l()
    }

    /// Inner product induced on the k-th wedge power: entry (I, J) is the
    /// determinant of the k x k submatrix of the Gram matrix on rows I and
    /// columns J (the k-th compound of the Gram matrix).
    pub fn induced(&self, k: usize) -> Result<GramForm> {
        let n = self.dim();
        if k == 0 || k > n {
            return Err(ExteriorError::DegreeOutOfRange { k, n });
        }
        let compound = compound_operator(&self.matrix, k)?;
        // The compound of an SPD matrix is SPD; symmetrize away roundoff.
        GramForm::new((&compound + compound.transpose()) * 0.5)
    }
}

fn minor(a: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> f64 {
    let k = rows.len();
    match k {
        1 => a[(rows[0], cols[0])],
        2 => {
            a[(rows[0], cols[0])] * a[(rows[1], cols[1])]
                - a[(rows[0], cols[1])] * a[(rows[1], cols[0])]
        }
        3 => {
            let m = |i: usize, j: usize| a[(rows[i], cols[j])];
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
        _ => {
            let sub = DMatrix::from_fn(k, k, |i, j| a[(rows[i], cols[j])]);
            sub.lu().determinant()
        }
    }
}

/// k-th compound matrix: entry (I, J) is the k x k minor of `a` on rows I
/// and columns J, both in lexicographic order. Functorial in the sense that
/// the compound of a product is the product of the compounds.
pub fn compound_operator(a: &DMatrix<f64>, k: usize) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(ExteriorError::DimensionMismatch { expected: n, got: a.ncols() });
    }
    if k == 0 || k > n {
        return Err(ExteriorError::DegreeOutOfRange { k, n });
    }
    let idx = MultiIndex::all(n, k);
    let m = idx.len();
    let mut out = DMatrix::zeros(m, m);
    for (i, row_idx) in idx.iter().enumerate() {
        for (j, col_idx) in idx.iter().enumerate() {
            out[(i, j)] = minor(a, row_idx.indices(), col_idx.indices());
        }
    }
    Ok(out)
}

/// Wedge product of k vectors in R^n: the coefficient at multi-index I is
/// the k x k minor of the column matrix of the inputs taken on rows I.
pub fn wedge(vectors: &[DVector<f64>]) -> Result<KVector> {
    let k = vectors.len();
    if k == 0 {
        return Err(ExteriorError::DegenerateInput("empty wedge".into()));
    }
    let n = vectors[0].len();
    for v in vectors {
        if v.len() != n {
            return Err(ExteriorError::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    if k > n {
        return Err(ExteriorError::DegreeOutOfRange { k, n });
    }
    let cols = DMatrix::from_columns(vectors);
    let idx = MultiIndex::all(n, k);
    let all_cols: Vec<usize> = (0..k).collect();
    let coeffs = DVector::from_iterator(
        idx.len(),
        idx.iter().map(|mi| minor(&cols, mi.indices(), &all_cols)),
    );
    KVector::new(n, k, coeffs)
}

/// Wedge product of the columns of a matrix.
pub fn wedge_columns(m: &DMatrix<f64>) -> Result<KVector> {
    let cols: Vec<DVector<f64>> = (0..m.ncols()).map(|c| m.column(c).into_owned()).collect();
    wedge(&cols)
}

/// Volume of the parallelepiped spanned by the vectors with respect to the
/// inner product `g`: the square root of the Gram determinant. Returns zero
/// for linearly dependent input.
pub fn volume(vectors: &[DVector<f64>], g: &GramForm) -> Result<f64> {
    let r = vectors.len();
    if r == 0 {
        return Ok(1.0);
    }
    for v in vectors {
        if v.len() != g.dim() {
            return Err(ExteriorError::DimensionMismatch { expected: g.dim(), got: v.len() });
        }
    }
    let mut gram = DMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            gram[(i, j)] = g.inner(&vectors[i], &vectors[j]);
        }
    }
    Ok(gram.lu().determinant().max(0.0).sqrt())
}

/// Gram-Schmidt orthogonalization without normalization: the i-th output
/// lies in the span of the first i inputs and the wedge of the outputs
/// equals the wedge of the inputs exactly (unit triangular change of basis).
pub fn orthogonalize_factors(vectors: &[DVector<f64>]) -> Result<Vec<DVector<f64>>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(vectors.len());
    for (i, v) in vectors.iter().enumerate() {
        let mut u = v.clone();
        for prev in &out {
            let denom = prev.dot(prev);
            u -= prev * (v.dot(prev) / denom);
        }
        if u.norm() <= 1e-12 * v.norm().max(1e-300) {
            return Err(ExteriorError::DegenerateInput(format!(
                "vector {i} is linearly dependent on its predecessors"
            )));
        }
        out.push(u);
    }
    Ok(out)
}

/// Singular value decomposition of `a` relative to a pair of inner products:
/// ascending singular values with domain/codomain bases orthonormal for the
/// respective Gram forms and a * u_i = value_i * v_i.
#[derive(Debug, Clone)]
pub struct SingularDecomposition {
    pub singular_values: Vec<f64>,
    pub domain_basis: DMatrix<f64>,
    pub codomain_basis: DMatrix<f64>,
}

impl SingularDecomposition {
    pub fn largest(&self) -> f64 {
        *self.singular_values.last().expect("nonempty")
    }

    pub fn smallest(&self) -> f64 {
        self.singular_values[0]
    }

    /// Product of the p largest singular values.
    pub fn product_of_largest(&self, p: usize) -> f64 {
        let d = self.singular_values.len();
        self.singular_values[d - p..].iter().product()
    }
}

/// Singular basis of an invertible operator between two inner-product
/// spaces, computed by whitening both sides and taking a standard SVD.
pub fn singular_basis(
    a: &DMatrix<f64>,
    g_dom: &GramForm,
    g_cod: &GramForm,
) -> Result<SingularDecomposition> {
    let d = a.nrows();
    if a.ncols() != d || g_dom.dim() != d || g_cod.dim() != d {
        return Err(ExteriorError::DimensionMismatch { expected: d, got: a.ncols() });
    }
    let l_dom = g_dom.cholesky_l();
    let l_cod = g_cod.cholesky_l();
    // Whitened operator: y-coordinates carry the Euclidean norm when
    // x-coordinates carry the Gram norm, via y = L^T x.
    let l_dom_t_inv = l_dom
        .transpose()
        .try_inverse()
        .ok_or_else(|| ExteriorError::DegenerateInput("domain Gram factor".into()))?;
    let b = l_cod.transpose() * a * &l_dom_t_inv;
    let svd = b.svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y]));
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let smin = svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(smin > 1e-12 * smax) {
        return Err(ExteriorError::DegenerateInput(format!(
            "operator numerically singular (smallest/largest = {:.3e})",
            smin / smax.max(f64::MIN_POSITIVE)
        )));
    }
    let l_cod_t_inv = l_cod
        .transpose()
        .try_inverse()
        .ok_or_else(|| ExteriorError::DegenerateInput("codomain Gram factor".into()))?;
    let mut values = Vec::with_capacity(d);
    let mut dom = DMatrix::zeros(d, d);
    let mut cod = DMatrix::zeros(d, d);
    for (dst, &src) in order.iter().enumerate() {
        values.push(svd.singular_values[src]);
        let u_i = &l_dom_t_inv * vt.row(src).transpose();
        let v_i = &l_cod_t_inv * u.column(src);
        dom.set_column(dst, &u_i);
        cod.set_column(dst, &v_i);
    }
    Ok(SingularDecomposition { singular_values: values, domain_basis: dom, codomain_basis: cod })
}

/// Operator norm of the p-th compound of `a` with respect to the induced
/// inner products: the product of the p largest singular values of `a`.
pub fn compound_norm(a: &DMatrix<f64>, g_dom: &GramForm, g_cod: &GramForm, p: usize) -> Result<f64> {
    let d = a.nrows();
    if p == 0 || p > d {
        return Err(ExteriorError::DegreeOutOfRange { k: p, n: d });
    }
    let dec = singular_basis(a, g_dom, g_cod)?;
    Ok(dec.product_of_largest(p))
}

/// Signs of the complement identification of the (n-1)-th wedge power with
/// the base space: basis vector e_i maps to sign(i) * e_{complement(i)}.
/// With these signs the compound of degree n-1 becomes the cofactor matrix.
pub fn hodge_signs(n: usize) -> Vec<f64> {
    (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect()
}

/// Matrix of the signed complement map from R^n to the (n-1)-th wedge power
/// in lexicographic coordinates: column i is sign(i) * e_{rank(comp(i))}.
pub fn hodge_dual_matrix(n: usize) -> DMatrix<f64> {
    let signs = hodge_signs(n);
    let mut h = DMatrix::zeros(n, n);
    for (i, &s) in signs.iter().enumerate().take(n) {
        let single = MultiIndex::new(n, vec![i]).expect("valid");
        let comp = single.complement();
        h[(comp.rank(), i)] = s;
    }
    h
}

/// Recover the base inner product whose induced inner product on the
/// (n-1)-th wedge power equals `q`.
///
/// Takes the SPD square root J of q, conjugates it into the signed-
/// complement basis where degree-(n-1) compounds act as cofactor matrices,
/// and inverts the cofactor identity in closed form; the recovered form is
/// the Gram matrix of the resulting linear map.
pub fn recover_base_inner_product(q: &GramForm) -> Result<GramForm> {
    let n = q.dim();
    if n < 2 {
        return Err(ExteriorError::DegreeOutOfRange { k: n, n });
    }
    let j = spd_sqrt(q.matrix());
    let h = hodge_dual_matrix(n);
    // Signed permutation: inverse is the transpose.
    let j_dual = h.transpose() * &j * &h;
    let det = j_dual.clone().lu().determinant();
    if det <= 0.0 {
        return Err(ExteriorError::NotPositiveDefinite { pivot: det });
    }
    let scale = det.powf(1.0 / (n as f64 - 1.0));
    let j_dual_inv_t = j_dual
        .transpose()
        .try_inverse()
        .ok_or_else(|| ExteriorError::DegenerateInput("dual factor not invertible".into()))?;
    let a = j_dual_inv_t * scale;
    GramForm::new(a.transpose() * a)
}
