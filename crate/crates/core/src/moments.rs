//! Moment matrices `M = V + (i/2)Ω` of centered observables and their
//! positivity tests.
//!
//! Expectations of monomial products are taken with factors built on a padded
//! Fock space, so every number here is the exact moment of the input operator
//! (no truncation-corner artifacts) as long as the operator itself is supported
//! on its cutoff.

use std::collections::HashMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::{mean_photon_number, wigner_function, FockOperator};
use crate::linalg::{self, CMatrix, C64, ZERO};
use crate::tolerances::{IMAG_RESIDUE, PINV_RCOND, PSD_TOL, TRACE_TOL};
use crate::weyl::{padding, weyl_matrix, MonomialIndex, TwoModeIndex};

/// A hermitian moment matrix with its row labels and its split
/// `m = v + (i/2)·omega`.
#[derive(Clone, Debug)]
pub struct MomentMatrix {
    m: CMatrix,
    labels: Vec<String>,
    v: DMatrix<f64>,
    omega: DMatrix<f64>,
}

impl MomentMatrix {
    /// Wraps a hermitian matrix (relative deviation at most `1e−10`).
    pub fn new(m: CMatrix, labels: Vec<String>) -> Result<Self> {
        if m.nrows() != m.ncols() || labels.len() != m.nrows() {
            return Err(Error::InvalidDimension(format!(
                "{}x{} moment matrix with {} labels",
                m.nrows(),
                m.ncols(),
                labels.len()
            )));
        }
        let dev = linalg::hermitian_deviation(&m);
        if dev > 1e-10 * linalg::max_abs(&m).max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let m = linalg::hermitian_part(&m);
        let v = m.map(|z| z.re);
        let omega = m.map(|z| 2.0 * z.im);
        Ok(Self { m, labels, v, omega })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Real symmetric part.
    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    /// Real antisymmetric part, scaled so that `m = v + (i/2)·omega`.
    pub fn omega(&self) -> &DMatrix<f64> {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.m)
    }

    /// Largest eigenvalue modulus.
    pub fn sigma_max(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn determinant(&self) -> f64 {
        linalg::determinant(&self.m).re
    }

    /// Principal submatrix on `rows`, keeping their labels.
    pub fn submatrix(&self, rows: &[usize]) -> Result<Self> {
        check_rows(rows, self.dim())?;
        let labels = rows.iter().map(|&r| self.labels[r].clone()).collect();
        Self::new(linalg::principal_submatrix(&self.m, rows), labels)
    }

    /// The leading `n × n` block.
    pub fn leading(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.dim() {
            return Err(Error::InvalidIndex(format!("leading block of size {n}")));
        }
        self.submatrix(&(0..n).collect::<Vec<_>>())
    }
}

fn check_rows(rows: &[usize], dim: usize) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidIndex("empty row subset".into()));
    }
    for (i, &r) in rows.iter().enumerate() {
        if r >= dim {
            return Err(Error::InvalidIndex(format!("row {r} out of range for dimension {dim}")));
        }
        if rows[..i].contains(&r) {
            return Err(Error::InvalidIndex(format!("row {r} repeated")));
        }
    }
    Ok(())
}

fn check_state(state: &FockOperator) -> Result<()> {
    state.ensure_hermitian()?;
    let tr = state.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
        return Err(Error::NotNormalized(tr.re));
    }
    Ok(())
}

fn pad(op: &CMatrix, dim: usize) -> CMatrix {
    let mut out = CMatrix::zeros(dim, dim);
    out.view_mut((0, 0), (op.nrows(), op.ncols())).copy_from(op);
    out
}

/// `M_ab = ⟨T_a T_b⟩ − ⟨T_a⟩⟨T_b⟩` of a single-mode operator with unit trace.
/// Positivity of the operator is not required.
pub fn covariance_matrix(state: &FockOperator, basis: &[MonomialIndex]) -> Result<MomentMatrix> {
    if state.num_modes() != 1 {
        return Err(Error::InvalidDimension("expected a single-mode operator".into()));
    }
    check_state(state)?;
    let max_two_j = basis.iter().map(|b| b.two_j()).max().unwrap_or(0);
    let dim = state.dim() + padding(2 * max_two_j);
    let rho = pad(state.data(), dim);
    let mats: Vec<CMatrix> = basis.iter().map(|&b| weyl_matrix(b, dim)).collect::<Result<_>>()?;
    let means: Vec<C64> = mats.iter().map(|t| linalg::trace_product(&rho, t)).collect();
    let n = basis.len();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        let ra = &rho * &mats[i];
        for k in i..n {
            let v = linalg::trace_product(&ra, &mats[k]) - means[i] * means[k];
            m[(i, k)] = v;
            m[(k, i)] = v.conj();
        }
    }
    MomentMatrix::new(m, basis.iter().map(|b| b.to_string()).collect())
}

/// Two-mode expectations `Tr[ρ (X ⊗ Y)]` for products of monomials.
struct TwoModeMoments<'a> {
    rho: &'a CMatrix,
    dims: [usize; 2],
    padded: [usize; 2],
    mats: [HashMap<MonomialIndex, CMatrix>; 2],
    // σ_Y[i, j] = Σ_{k,l} ρ[(i,k),(j,l)] Y[l,k] for Y = T_b T_b'
    partial: HashMap<(MonomialIndex, MonomialIndex), CMatrix>,
}

impl<'a> TwoModeMoments<'a> {
    fn new(state: &'a FockOperator, max_two_j: u32) -> Self {
        let dims = [state.mode_dims()[0], state.mode_dims()[1]];
        let extra = padding(2 * max_two_j);
        Self {
            rho: state.data(),
            dims,
            padded: [dims[0] + extra, dims[1] + extra],
            mats: [HashMap::new(), HashMap::new()],
            partial: HashMap::new(),
        }
    }

    fn matrix(&mut self, mode: usize, idx: MonomialIndex) -> Result<CMatrix> {
        if !self.mats[mode].contains_key(&idx) {
            let m = weyl_matrix(idx, self.padded[mode])?;
            self.mats[mode].insert(idx, m);
        }
        Ok(self.mats[mode][&idx].clone())
    }

    /// Exact `T_x T_y` restricted to the cutoff of `mode`.
    fn product(&mut self, mode: usize, x: MonomialIndex, y: MonomialIndex) -> Result<CMatrix> {
        let d = self.dims[mode];
        if x.is_identity() && y.is_identity() {
            return Ok(CMatrix::identity(d, d));
        }
        let p = self.matrix(mode, x)? * self.matrix(mode, y)?;
        Ok(p.view((0, 0), (d, d)).into_owned())
    }

    fn partial(&mut self, y: (MonomialIndex, MonomialIndex)) -> Result<&CMatrix> {
        if !self.partial.contains_key(&y) {
            let ym = self.product(1, y.0, y.1)?;
            let [da, db] = self.dims;
            let mut sigma = CMatrix::zeros(da, da);
            for i in 0..da {
                for j in 0..da {
                    let mut acc = ZERO;
                    for k in 0..db {
                        for l in 0..db {
                            acc += self.rho[(i * db + k, j * db + l)] * ym[(l, k)];
                        }
                    }
                    sigma[(i, j)] = acc;
                }
            }
            self.partial.insert(y, sigma);
        }
        Ok(&self.partial[&y])
    }

    /// `⟨(T^A_{x0} T^A_{x1}) ⊗ (T^B_{y0} T^B_{y1})⟩`
    fn expect(&mut self, x: (MonomialIndex, MonomialIndex), y: (MonomialIndex, MonomialIndex)) -> Result<C64> {
        let xm = self.product(0, x.0, x.1)?;
        let sigma = self.partial(y)?;
        Ok(linalg::trace_product(sigma, &xm))
    }
}

/// Moment matrix over products `T^A_a T^B_b` of a two-mode unit-trace operator.
pub fn two_mode_covariance_matrix(state: &FockOperator, basis: &[TwoModeIndex]) -> Result<MomentMatrix> {
    if !state.is_two_mode() {
        return Err(Error::InvalidDimension("expected a two-mode operator".into()));
    }
    check_state(state)?;
    let max_two_j = basis
        .iter()
        .map(|t| t.a.two_j().max(t.b.two_j()))
        .max()
        .unwrap_or(0);
    let id = MonomialIndex::IDENTITY;
    let mut eng = TwoModeMoments::new(state, max_two_j);
    let means: Vec<C64> = basis
        .iter()
        .map(|t| eng.expect((t.a, id), (t.b, id)))
        .collect::<Result<_>>()?;
    let n = basis.len();
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        for k in i..n {
            let (s, t) = (basis[i], basis[k]);
            // modes commute: (A_s B_s)(A_t B_t) = (A_s A_t) ⊗ (B_s B_t)
            let v = eng.expect((s.a, t.a), (s.b, t.b))? - means[i] * means[k];
            m[(i, k)] = v;
            m[(k, i)] = v.conj();
        }
    }
    MomentMatrix::new(m, basis.iter().map(|b| b.to_string()).collect())
}

/// `M₂₂ − M₂₁ M₁₁⁺ M₁₂` for the split after the first `split` rows, with the
/// Moore-Penrose inverse cut at `1e−10·σ_max`.
pub fn schur_complement(mm: &MomentMatrix, split: usize) -> Result<CMatrix> {
    let n = mm.dim();
    if split == 0 || split >= n {
        return Err(Error::InvalidIndex(format!("split {split} for dimension {n}")));
    }
    let m = mm.matrix();
    let m11 = m.view((0, 0), (split, split)).into_owned();
    let m21 = m.view((split, 0), (n - split, split)).into_owned();
    let m22 = m.view((split, split), (n - split, n - split)).into_owned();
    let pinv = linalg::hermitian_pseudo_inverse(&m11, PINV_RCOND);
    let out = m22 - &m21 * pinv * m21.adjoint();
    Ok(linalg::hermitian_part(&out))
}

/// Smallest eigenvalue.
pub fn min_eigenvalue(mm: &MomentMatrix) -> f64 {
    mm.eigenvalues().first().copied().unwrap_or(0.0)
}

/// `λ_min ≥ −tol·(1 + σ_max)`
pub fn is_psd(mm: &MomentMatrix, tol: f64) -> bool {
    let eig = mm.eigenvalues();
    let sigma = eig.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    eig.first().is_none_or(|&l| l >= -tol * (1.0 + sigma))
}

/// [`is_psd`] with the default tolerance.
pub fn is_psd_default(mm: &MomentMatrix) -> bool {
    is_psd(mm, PSD_TOL)
}

/// Determinant of the principal submatrix on `rows`.
pub fn principal_minor(mm: &MomentMatrix, rows: &[usize]) -> Result<f64> {
    check_rows(rows, mm.dim())?;
    let det = linalg::determinant(&linalg::principal_submatrix(mm.matrix(), rows));
    let scale = det.re.abs().max(1.0);
    if det.im.abs() > IMAG_RESIDUE * scale * 1e3 {
        return Err(Error::NotHermitian { deviation: det.im.abs() });
    }
    Ok(det.re)
}

/// First principal minor, by size and then lexicographically, that is
/// negative beyond `PSD_TOL·(1 + σ_max)^k` for a `k × k` subset.
pub fn sylvester_scan(mm: &MomentMatrix, max_size: usize) -> Result<Option<(Vec<usize>, f64)>> {
    let n = mm.dim();
    let scale = 1.0 + mm.sigma_max();
    for size in 1..=max_size.min(n) {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let minor = principal_minor(mm, &subset)?;
            if minor < -PSD_TOL * scale.powi(size as i32) {
                return Ok(Some((subset, minor)));
            }
            // next combination in lexicographic order
            let mut i = size;
            while i > 0 && subset[i - 1] == n - size + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            subset[i - 1] += 1;
            for k in i..size {
                subset[k] = subset[k - 1] + 1;
            }
        }
    }
    Ok(None)
}

/// `∬ W(x,p) x^{j+m} p^{j−m} dx dp` by the trapezoid rule on `grid × grid`.
pub fn moment_via_wigner(state: &FockOperator, idx: MonomialIndex, grid: &[f64]) -> Result<f64> {
    if state.num_modes() != 1 {
        return Err(Error::InvalidDimension("expected a single-mode operator".into()));
    }
    if grid.len() < 2 {
        return Err(Error::Grid("grid needs at least two points".into()));
    }
    let step = grid.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::max);
    if step > 0.1 * (1.0 + 1e-9) {
        return Err(Error::Grid(format!("grid step {step} exceeds 0.1")));
    }
    let nbar = mean_photon_number(state)?.max(0.0);
    let reach = (2.0 * nbar).sqrt() + 6.0;
    if grid[0] > -reach || grid[grid.len() - 1] < reach {
        return Err(Error::Grid(format!("grid must cover ±{reach:.3}")));
    }
    let w = wigner_function(state, grid, grid)?;
    let weights: Vec<f64> = (0..grid.len())
        .map(|i| {
            let left = if i > 0 { grid[i] - grid[i - 1] } else { 0.0 };
            let right = if i + 1 < grid.len() { grid[i + 1] - grid[i] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect();
    let (r, s) = (idx.x_power() as i32, idx.p_power() as i32);
    let mut acc = 0.0;
    for (i, &x) in grid.iter().enumerate() {
        for (k, &p) in grid.iter().enumerate() {
            acc += weights[i] * weights[k] * w[(i, k)] * x.powi(r) * p.powi(s);
        }
    }
    Ok(acc)
}

/// Symmetric grid `±half_width` with spacing at most `step`.
pub fn symmetric_grid(half_width: f64, step: f64) -> Vec<f64> {
    let n = (2.0 * half_width / step).ceil() as usize;
    (0..=n).map(|i| -half_width + 2.0 * half_width * i as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{annihilation_op, quadrature_ops, FockOperator};
    use crate::linalg::{CVector, I, ONE};
    use crate::states::coherent_state;
    use crate::weyl::{monomial, single_mode_basis, two_mode_basis};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn number_state(n: usize, d: usize) -> FockOperator {
        let mut m = CMatrix::zeros(d, d);
        m[(n, n)] = ONE;
        FockOperator::single_mode(m).unwrap()
    }

    fn random_state(d: usize, rng: &mut ChaCha8Rng) -> FockOperator {
        let g = CMatrix::from_fn(d, d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let rho = &g * g.adjoint();
        let tr = rho.trace();
        FockOperator::single_mode(rho.map(|z| z / tr)).unwrap()
    }

    #[test]
    fn vacuum_saturates_uncertainty() {
        let mm = covariance_matrix(&number_state(0, 6), &single_mode_basis(0.5).unwrap()).unwrap();
        let want = CMatrix::from_row_slice(2, 2, &[ONE * 0.5, I * 0.5, -I * 0.5, ONE * 0.5]);
        assert!(linalg::max_abs(&(mm.matrix() - want)) < 1e-14);
        let eig = mm.eigenvalues();
        assert!(eig[0].abs() < 1e-14 && (eig[1] - 1.0).abs() < 1e-14);
        assert!(is_psd_default(&mm));
        assert!((mm.omega()[(0, 1)] - 1.0).abs() < 1e-14);
        assert!((mm.v()[(0, 0)] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn number_state_second_moments() {
        for n in 0..5 {
            let mm = covariance_matrix(&number_state(n, 8), &single_mode_basis(0.5).unwrap()).unwrap();
            let e = n as f64 + 0.5;
            assert!((mm.matrix()[(0, 0)].re - e).abs() < 1e-12);
            assert!((mm.matrix()[(1, 1)].re - e).abs() < 1e-12);
            assert!((mm.matrix()[(0, 1)] - I * 0.5).norm() < 1e-12);
        }
    }

    #[test]
    fn identity_matrix_helpers() {
        let mm = MomentMatrix::new(CMatrix::identity(3, 3), vec!["a".into(), "b".into(), "c".into()]).unwrap();
        assert!((min_eigenvalue(&mm) - 1.0).abs() < 1e-15);
        let diag = MomentMatrix::new(
            CMatrix::from_diagonal(&CVector::from_vec(vec![ONE, -ONE])),
            vec!["x".into(), "y".into()],
        )
        .unwrap();
        assert_eq!(sylvester_scan(&diag, 4).unwrap().map(|s| s.0), Some(vec![1]));
        assert!(!is_psd_default(&diag));
        assert!(principal_minor(&diag, &[0, 0]).is_err());
        assert!(principal_minor(&diag, &[2]).is_err());
        assert!(MomentMatrix::new(CMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]), vec!["a".into(), "b".into()]).is_err());
    }

    #[test]
    fn schur_of_block_diagonal() {
        let m = CMatrix::from_fn(4, 4, |i, j| {
            if i / 2 == j / 2 {
                C64::new(if i == j { 2.0 } else { 0.5 }, 0.0)
            } else {
                ZERO
            }
        });
        let mm = MomentMatrix::new(m.clone(), (0..4).map(|i| i.to_string()).collect()).unwrap();
        let s = schur_complement(&mm, 2).unwrap();
        assert!(linalg::max_abs(&(s - m.view((2, 2), (2, 2)))) < 1e-15);
        assert!(schur_complement(&mm, 0).is_err());
        assert!(schur_complement(&mm, 4).is_err());
    }

    #[test]
    fn hierarchy_prefix_consistency() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let rho = random_state(6, &mut rng);
        let big = covariance_matrix(&rho, &single_mode_basis(1.5).unwrap()).unwrap();
        for (level, n) in [(0.5, 2), (1.0, 5)] {
            let small = covariance_matrix(&rho, &single_mode_basis(level).unwrap()).unwrap();
            let lead = big.leading(n).unwrap();
            assert_eq!(lead.matrix(), small.matrix());
        }
    }

    #[test]
    fn exact_against_dense_operators() {
        // Oracle: ⟨T_a T_b⟩ from monomial matrices at a much larger cutoff.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let small = random_state(5, &mut rng);
        let big_d = 40;
        let big = crate::fock::embed(&small, big_d).unwrap();
        let basis = single_mode_basis(1.0).unwrap();
        let mm = covariance_matrix(&small, &basis).unwrap();
        let mats: Vec<CMatrix> = basis.iter().map(|&b| monomial(b, big_d).unwrap().into_data()).collect();
        for i in 0..5 {
            for k in 0..5 {
                let prod = &mats[i] * &mats[k];
                let want = linalg::trace_product(big.data(), &prod)
                    - linalg::trace_product(big.data(), &mats[i]) * linalg::trace_product(big.data(), &mats[k]);
                assert!((mm.matrix()[(i, k)] - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn two_mode_matches_kronecker_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let d = 3;
        let g = CMatrix::from_fn(d * d, d * d, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let rho = &g * g.adjoint();
        let tr = rho.trace();
        let rho = FockOperator::new(rho.map(|z| z / tr), vec![d, d]).unwrap();
        let basis = two_mode_basis(1.0).unwrap();
        let mm = two_mode_covariance_matrix(&rho, &basis).unwrap();
        // dense oracle at a larger cutoff where every product is exact
        let big = 12;
        let mut emb = CMatrix::zeros(big * big, big * big);
        for r in 0..d * d {
            for c in 0..d * d {
                emb[((r / d) * big + r % d, (c / d) * big + c % d)] = rho.data()[(r, c)];
            }
        }
        let ops: Vec<CMatrix> = basis
            .iter()
            .map(|t| monomial(t.a, big).unwrap().data().kronecker(monomial(t.b, big).unwrap().data()))
            .collect();
        for i in 0..basis.len() {
            for k in 0..basis.len() {
                let want = linalg::trace_product(&emb, &(&ops[i] * &ops[k]))
                    - linalg::trace_product(&emb, &ops[i]) * linalg::trace_product(&emb, &ops[k]);
                assert!((mm.matrix()[(i, k)] - want).norm() < 1e-10, "{i} {k}");
            }
        }
        assert!(is_psd_default(&mm));
    }

    #[test]
    fn displacement_leaves_second_order_block() {
        let d = 30;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let small = random_state(4, &mut rng);
        let rho = crate::fock::embed(&small, d).unwrap();
        // D(β) = exp(β a† − β* a) on a large space, then restricted
        let big = 80;
        let a = annihilation_op(big).unwrap().into_data();
        let beta = C64::new(0.6, -0.4);
        let gen = (a.adjoint() * beta - &a * beta.conj()).map(|z| z);
        let disp = gen.exp();
        let rho_big = crate::fock::embed(&rho, big).unwrap();
        let moved = &disp * rho_big.data() * disp.adjoint();
        let moved = FockOperator::single_mode(linalg::hermitian_part(&moved)).unwrap();
        let basis = single_mode_basis(0.5).unwrap();
        let before = covariance_matrix(&rho, &basis).unwrap();
        let after = covariance_matrix(&moved, &basis).unwrap();
        assert!(linalg::max_abs(&(before.matrix() - after.matrix())) < 1e-9);
        let (x, _) = quadrature_ops(big).unwrap();
        let shift = linalg::trace_product(moved.data(), x.data()) - linalg::trace_product(rho_big.data(), x.data());
        assert!((shift.re - 2f64.sqrt() * beta.re).abs() < 1e-9);
    }

    #[test]
    fn wigner_moments_of_simple_states() {
        let grid = symmetric_grid(8.0, 0.1);
        let vac = number_state(0, 6);
        let t11 = MonomialIndex::new(1.0, 1.0).unwrap();
        let t10 = MonomialIndex::new(1.0, 0.0).unwrap();
        assert!((moment_via_wigner(&vac, t11, &grid).unwrap() - 0.5).abs() < 1e-8);
        assert!(moment_via_wigner(&vac, t10, &grid).unwrap().abs() < 1e-10);
        assert!((moment_via_wigner(&number_state(1, 6), t11, &grid).unwrap() - 1.5).abs() < 1e-8);
        assert!(matches!(moment_via_wigner(&vac, t11, &symmetric_grid(8.0, 0.2)), Err(Error::Grid(_))));
        assert!(matches!(moment_via_wigner(&vac, t11, &symmetric_grid(3.0, 0.05)), Err(Error::Grid(_))));
        // coherent state, every monomial up to j = 2
        let d = 25;
        let v = coherent_state(C64::new(1.0, 0.0), d).unwrap();
        let coh = FockOperator::projector(&v.unscale(v.norm()), &[d]).unwrap();
        let grid = symmetric_grid(9.0, 0.1);
        for two_j in 1..=4 {
            for two_m in (-two_j..=two_j).step_by(2) {
                let idx = MonomialIndex::from_twice(two_j, two_m).unwrap();
                let want = linalg::trace_product(coh.data(), monomial(idx, d).unwrap().data()).re;
                assert!((moment_via_wigner(&coh, idx, &grid).unwrap() - want).abs() < 1e-4);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn true_states_satisfy_srur(seed in any::<u64>(), d in 2usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rho = random_state(d, &mut rng);
            for level in [0.5, 1.0, 1.5] {
                let mm = covariance_matrix(&rho, &single_mode_basis(level).unwrap()).unwrap();
                prop_assert!(is_psd_default(&mm), "level {} min eig {}", level, min_eigenvalue(&mm));
            }
        }

        #[test]
        fn schur_complement_equivalence(seed in any::<u64>(), n in 2usize..15, shift in -0.5..0.5f64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = CMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let mut m = &g * g.adjoint() / C64::new(n as f64, 0.0);
            for i in 0..n {
                m[(i, i)] += C64::new(shift, 0.0);
            }
            let mm = MomentMatrix::new(m, (0..n).map(|i| i.to_string()).collect()).unwrap();
            let split = 1 + (seed as usize) % (n - 1);
            let lead = mm.leading(split).unwrap();
            prop_assume!(min_eigenvalue(&lead) > 1e-6);
            let s = schur_complement(&mm, split).unwrap();
            let s = MomentMatrix::new(s, (split..n).map(|i| i.to_string()).collect()).unwrap();
            let smin = min_eigenvalue(&s);
            prop_assume!(smin.abs() > 1e-8 && min_eigenvalue(&mm).abs() > 1e-8);
            prop_assert_eq!(is_psd_default(&mm), is_psd_default(&lead) && is_psd_default(&s));
        }
    }
}
