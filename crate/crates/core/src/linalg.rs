//! Small dense linear-algebra helpers shared by the moment and state code.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
#[cfg(test)]
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Largest entrywise modulus of `A - A†`.
pub fn hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `(A + A†) / 2`
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Real symmetric embedding `[[Re, -Im], [Im, Re]]` of a hermitian matrix.
/// Every eigenvalue of the input appears twice in the embedding.
pub fn real_embedding(m: &CMatrix) -> DMatrix<f64> {
    let n = m.nrows();
    let mut out = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for j in 0..n {
        for i in 0..n {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i + n, j + n)] = z.re;
            out[(i, j + n)] = -z.im;
            out[(i + n, j)] = z.im;
        }
    }
    out
}

/// Eigenvalues of a hermitian matrix in ascending order, via the real embedding.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let emb = real_embedding(&hermitian_part(m));
    let mut vals: Vec<f64> = SymmetricEigen::new(emb).eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    // each eigenvalue is doubled; keep every other one
    vals.into_iter().step_by(2).collect()
}

/// Eigenvalues of a (possibly large) hermitian matrix, solved directly in complex arithmetic.
pub fn hermitian_eigenvalues_direct(m: &CMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = hermitian_part(m).symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Moore-Penrose inverse of a hermitian matrix. Eigenvalues with modulus at or
/// below `rcond * max|λ|` are treated as zero.
pub fn hermitian_pseudo_inverse(m: &CMatrix, rcond: f64) -> CMatrix {
    let n = m.nrows();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let sigma_max = eig.eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let cut = rcond * sigma_max;
    let mut out = CMatrix::zeros(n, n);
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda.abs() <= cut || lambda == 0.0 {
            continue;
        }
        let v = eig.eigenvectors.column(k);
        out += (v * v.adjoint()).scale(1.0 / lambda);
    }
    out
}

pub fn determinant(m: &CMatrix) -> C64 {
    if m.nrows() == 0 {
        return ONE;
    }
    m.clone().determinant()
}

/// Rows and columns `idx` of `m`.
pub fn principal_submatrix(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    // Tr(AB) = Σ_ij A_ij B_ji
    let n = a.nrows();
    let mut acc = ZERO;
    for j in 0..n {
        for i in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// A real orthogonal matrix that is block diagonal after a permutation of the
/// basis. Each block acts on the listed basis indices.
#[derive(Clone, Debug)]
pub(crate) struct BlockOrthogonal {
    pub dim: usize,
    pub blocks: Vec<(Vec<usize>, DMatrix<f64>)>,
}

impl BlockOrthogonal {
    /// `U · M`
    pub fn apply_left(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = m.clone();
        for (idx, u) in &self.blocks {
            if idx.len() == 1 && u[(0, 0)] == 1.0 {
                continue;
            }
            let rows = m.select_rows(idx.iter());
            let mixed = u * rows;
            for (r, &target) in idx.iter().enumerate() {
                out.row_mut(target).copy_from(&mixed.row(r));
            }
        }
        out
    }

    /// `U · M · Uᵀ` for a complex matrix.
    pub fn conjugate(&self, m: &CMatrix) -> CMatrix {
        let re = m.map(|z| z.re);
        let im = m.map(|z| z.im);
        let re = self.apply_left(&self.apply_left(&re).transpose()).transpose();
        let im = self.apply_left(&self.apply_left(&im).transpose()).transpose();
        CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| C64::new(re[(i, j)], im[(i, j)]))
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut out = DMatrix::<f64>::identity(self.dim, self.dim);
        for (idx, u) in &self.blocks {
            for (r, &i) in idx.iter().enumerate() {
                for (c, &j) in idx.iter().enumerate() {
                    out[(i, j)] = u[(r, c)];
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_recovers_spectrum() {
        let m = CMatrix::from_row_slice(2, 2, &[ONE, I, -I, ONE]);
        let vals = hermitian_eigenvalues(&m);
        assert!((vals[0] - 0.0).abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pseudo_inverse_of_singular_projector() {
        let m = CMatrix::from_row_slice(2, 2, &[ONE, I, -I, ONE]).scale(0.5);
        let pinv = hermitian_pseudo_inverse(&m, 1e-10);
        // a projector is its own pseudo-inverse
        assert!(max_abs(&(&pinv - &m)) < 1e-12);
    }
}
