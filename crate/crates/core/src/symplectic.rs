//! `Sp(2,R)` elements and their action on quadrature monomials.
//!
//! A symplectic `S = [[a, b], [c, d]]` stands for the canonical map
//! `x ↦ a x + b p`, `p ↦ c x + d p`, realized in the Heisenberg picture by a
//! unitary `U(S)`. Moment matrices then transform as `M_J ↦ K_J(S) M_J K_J(S)ᵀ`.

use nalgebra::{DMatrix, Matrix2};

use crate::error::{Error, Result};
use crate::fock::{rotate_mode, squeeze_mode, FockOperator, TwoModeOperand};
use crate::weyl::{level_twice, two_mode_basis};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymplecticElement {
    s: Matrix2<f64>,
}

impl SymplecticElement {
    /// Accepts `s` when `det s = 1` within `1e−12`.
    pub fn new(s: Matrix2<f64>) -> Result<Self> {
        let det = s.determinant();
        if (det - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "matrix with determinant {det} is not symplectic"
            )));
        }
        Ok(Self { s })
    }

    pub fn identity() -> Self {
        Self { s: Matrix2::identity() }
    }

    /// `[[cos θ, sin θ], [−sin θ, cos θ]]`
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            s: Matrix2::new(c, s, -s, c),
        }
    }

    /// `diag(eʳ, e⁻ʳ)`
    pub fn squeeze(r: f64) -> Self {
        Self {
            s: Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp()),
        }
    }

    /// `[[1, t], [0, 1]]`
    pub fn shear(t: f64) -> Self {
        Self {
            s: Matrix2::new(1.0, t, 0.0, 1.0),
        }
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.s
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { s: self.s * other.s }
    }

    pub fn inverse(&self) -> Self {
        let s = &self.s;
        Self {
            s: Matrix2::new(s[(1, 1)], -s[(0, 1)], -s[(1, 0)], s[(0, 0)]),
        }
    }

    /// `(φ, r, ψ)` with `S = R(φ)·diag(eʳ, e⁻ʳ)·R(ψ)` and `r ≥ 0`.
    pub fn euler(&self) -> (f64, f64, f64) {
        let svd = self.s.svd(true, true);
        let mut u = svd.u.expect("svd with u");
        let mut vt = svd.v_t.expect("svd with v");
        let sigma = svd.singular_values;
        if u.determinant() < 0.0 {
            // S = U D Σ D Vᵀ with D = diag(1, −1) commuting with Σ
            u.set_column(1, &(-u.column(1)));
            vt.set_row(1, &(-vt.row(1)));
        }
        if sigma[0] < sigma[1] {
            // diag(σ₀, σ₁) = P diag(σ₁, σ₀) Pᵀ with P a quarter rotation
            let p = Self::rotation(std::f64::consts::FRAC_PI_2).s;
            u *= p;
            vt = p.transpose() * vt;
        }
        let r = sigma[0].max(sigma[1]).ln();
        let phi = u[(0, 1)].atan2(u[(0, 0)]);
        let psi = vt[(0, 1)].atan2(vt[(0, 0)]);
        (phi, r, psi)
    }
}

/// Coefficients of `(u₀x + u₁p)^n` on `x^{n−k}p^k`, `k = 0..=n`.
fn linear_power(u0: f64, u1: f64, n: usize) -> Vec<f64> {
    let mut poly = vec![1.0];
    for _ in 0..n {
        let mut next = vec![0.0; poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k] += c * u0;
            next[k + 1] += c * u1;
        }
        poly = next;
    }
    poly
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn rep_twice(two_j: u32, s: &SymplecticElement) -> DMatrix<f64> {
    let n = two_j as usize;
    let m = s.matrix();
    DMatrix::from_fn(n + 1, n + 1, |row, col| {
        // row k carries x^{2j−k} p^k, i.e. m = j − k
        let poly = poly_mul(
            &linear_power(m[(0, 0)], m[(0, 1)], n - row),
            &linear_power(m[(1, 0)], m[(1, 1)], row),
        );
        poly[col]
    })
}

/// `K^(j)(S)`: rows and columns follow `m = j, j−1, …, −j`.
pub fn rep_k(j: f64, s: &SymplecticElement) -> Result<DMatrix<f64>> {
    let two_j = level_twice(j)?;
    Ok(rep_twice(two_j, s))
}

/// `K_J(S) = K^(½)(S) ⊕ K^(1)(S) ⊕ … ⊕ K^(J)(S)`
pub fn block_rep(level: f64, s: &SymplecticElement) -> Result<DMatrix<f64>> {
    let two_level = level_twice(level)?;
    let size: usize = (1..=two_level as usize).map(|t| t + 1).sum();
    let mut out = DMatrix::zeros(size, size);
    let mut at = 0;
    for two_j in 1..=two_level {
        let k = rep_twice(two_j, s);
        let n = k.nrows();
        out.view_mut((at, at), (n, n)).copy_from(&k);
        at += n;
    }
    Ok(out)
}

/// Representation of `S_A ⊗ S_B` on the two-mode basis of level `J`: every
/// group with fixed `(j_A, j_B)` carries `K^(j_A)(S_A) ⊗ K^(j_B)(S_B)`.
pub fn two_mode_local_rep(level: f64, sa: &SymplecticElement, sb: &SymplecticElement) -> Result<DMatrix<f64>> {
    let basis = two_mode_basis(level)?;
    let two_level = level_twice(level)?;
    let ka: Vec<DMatrix<f64>> = (0..=two_level).map(|t| rep_twice(t, sa)).collect();
    let kb: Vec<DMatrix<f64>> = (0..=two_level).map(|t| rep_twice(t, sb)).collect();
    let row = |two_j: u32, two_m: i32| ((two_j as i32 - two_m) / 2) as usize;
    let n = basis.len();
    Ok(DMatrix::from_fn(n, n, |i, k| {
        let (x, y) = (&basis[i], &basis[k]);
        if x.a.two_j() != y.a.two_j() || x.b.two_j() != y.b.two_j() {
            return 0.0;
        }
        let a = &ka[x.a.two_j() as usize];
        let b = &kb[x.b.two_j() as usize];
        a[(row(x.a.two_j(), x.a.two_m()), row(y.a.two_j(), y.a.two_m()))]
            * b[(row(x.b.two_j(), x.b.two_m()), row(y.b.two_j(), y.b.two_m()))]
    }))
}

fn apply_to_mode(op: &FockOperator, mode: usize, s: &SymplecticElement) -> Result<FockOperator> {
    let (phi, r, psi) = s.euler();
    let op = rotate_mode(op, mode, psi)?;
    let op = squeeze_mode(&op, mode, r)?;
    rotate_mode(&op, mode, phi)
}

/// `U(S) ρ U(S)†` for a single-mode operator, with `U(S)†(x, p)U(S) = S(x, p)`.
pub fn apply_single_mode(op: &FockOperator, s: &SymplecticElement) -> Result<FockOperator> {
    if op.num_modes() != 1 {
        return Err(Error::InvalidDimension("expected a single-mode operator".into()));
    }
    apply_to_mode(op, 0, s)
}

/// `(U(S_A) ⊗ U(S_B)) ρ (U(S_A) ⊗ U(S_B))†`
pub fn apply_local<T: TwoModeOperand>(state: &T, sa: &SymplecticElement, sb: &SymplecticElement) -> Result<T> {
    let op = state.operator();
    if !op.is_two_mode() {
        return Err(Error::InvalidDimension("expected a two-mode operator".into()));
    }
    let out = apply_to_mode(&apply_to_mode(op, 0, sa)?, 1, sb)?;
    state.rebuild(out, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
        (a - b).amax() <= tol
    }

    fn element(theta: f64, r: f64, t: f64) -> SymplecticElement {
        SymplecticElement::rotation(theta)
            .compose(&SymplecticElement::squeeze(r))
            .compose(&SymplecticElement::shear(t))
    }

    #[test]
    fn generators() {
        assert_eq!(SymplecticElement::rotation(0.0), SymplecticElement::identity());
        let sq = SymplecticElement::squeeze(0.7).compose(&SymplecticElement::squeeze(-0.7));
        assert!((sq.matrix() - Matrix2::identity()).amax() < 1e-15);
        assert!((SymplecticElement::shear(3.7).matrix().determinant() - 1.0).abs() < 1e-15);
        assert!(SymplecticElement::new(Matrix2::new(2.0, 0.0, 0.0, 1.0)).is_err());
        // SΩSᵀ = Ω
        let s = element(0.3, 0.4, -1.2);
        let omega = Matrix2::new(0.0, 1.0, -1.0, 0.0);
        assert!((s.matrix() * omega * s.matrix().transpose() - omega).amax() < 1e-12);
    }

    #[test]
    fn low_order_representations() {
        let s = element(0.3, -0.2, 0.5);
        let m = s.matrix();
        let k = rep_k(0.5, &s).unwrap();
        assert!(close(&k, &DMatrix::from_column_slice(2, 2, m.as_slice()), 1e-15));
        let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let want = DMatrix::from_row_slice(
            3,
            3,
            &[a * a, 2.0 * a * b, b * b, a * c, a * d + b * c, b * d, c * c, 2.0 * c * d, d * d],
        );
        assert!(close(&rep_k(1.0, &s).unwrap(), &want, 1e-14));
        assert!(rep_k(0.0, &s).is_err());
    }

    #[test]
    fn block_representations() {
        let id = SymplecticElement::identity();
        assert!(close(&block_rep(1.5, &id).unwrap(), &DMatrix::identity(9, 9), 0.0));
        let s = element(1.0, 0.2, 0.1);
        let k = block_rep(1.0, &s).unwrap();
        assert_eq!(k.nrows(), 5);
        assert_eq!(k[(0, 2)], 0.0);
        assert!(close(&k.view((2, 2), (3, 3)).into_owned(), &rep_k(1.0, &s).unwrap(), 0.0));
        let half = block_rep(0.5, &s).unwrap();
        assert!(close(&half, &rep_k(0.5, &s).unwrap(), 0.0));
    }

    #[test]
    fn two_mode_representations() {
        let id = SymplecticElement::identity();
        assert!(close(&two_mode_local_rep(1.0, &id, &id).unwrap(), &DMatrix::identity(14, 14), 0.0));
        let sa = element(0.4, 0.1, 0.0);
        let sb = element(-1.0, 0.3, 0.2);
        let k = two_mode_local_rep(0.5, &sa, &sb).unwrap();
        let mut want = DMatrix::zeros(4, 4);
        want.view_mut((0, 0), (2, 2)).copy_from(&rep_k(0.5, &sa).unwrap());
        want.view_mut((2, 2), (2, 2)).copy_from(&rep_k(0.5, &sb).unwrap());
        assert!(close(&k, &want, 0.0));
        // the cross block at J = 1 is the Kronecker product of the spin-½ blocks
        let k1 = two_mode_local_rep(1.0, &sa, &sb).unwrap();
        let cross = rep_k(0.5, &sa).unwrap().kronecker(&rep_k(0.5, &sb).unwrap());
        assert!(close(&k1.view((7, 7), (4, 4)).into_owned(), &cross, 1e-15));
    }

    #[test]
    fn euler_decomposition_reproduces_element() {
        for s in [element(0.3, 0.4, -1.2), element(2.5, -0.3, 0.8), SymplecticElement::identity(), SymplecticElement::rotation(-2.0)] {
            let (phi, r, psi) = s.euler();
            let back = SymplecticElement::rotation(phi)
                .compose(&SymplecticElement::squeeze(r))
                .compose(&SymplecticElement::rotation(psi));
            assert!((back.matrix() - s.matrix()).amax() < 1e-12, "{s:?}");
            assert!(r >= 0.0);
        }
    }

    proptest! {
        #[test]
        fn representation_is_homomorphism(
            t1 in -3.0..3.0f64, r1 in -1.0..1.0f64, h1 in -1.0..1.0f64,
            t2 in -3.0..3.0f64, r2 in -1.0..1.0f64, h2 in -1.0..1.0f64,
            two_j in 1u32..=4,
        ) {
            let s1 = element(t1, r1, h1);
            let s2 = element(t2, r2, h2);
            let j = f64::from(two_j) / 2.0;
            let lhs = rep_k(j, &s1.compose(&s2)).unwrap();
            let rhs = rep_k(j, &s1).unwrap() * rep_k(j, &s2).unwrap();
            prop_assert!((&lhs - &rhs).amax() <= 1e-9 * (1.0 + lhs.amax()));
            let inv = rep_k(j, &s1.inverse()).unwrap();
            let prod = inv * rep_k(j, &s1).unwrap();
            prop_assert!((prod - DMatrix::<f64>::identity(two_j as usize + 1, two_j as usize + 1)).amax() <= 1e-9);
        }
    }
}
