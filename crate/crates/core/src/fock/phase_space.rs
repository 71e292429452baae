//! Position-space densities and Wigner functions of single-mode operators.

use nalgebra::DMatrix;

use super::FockOperator;
use crate::error::{Error, Result};
use crate::linalg::C64;

/// Oscillator eigenfunctions `ψ_0(q) … ψ_{n−1}(q)` for `[x, p] = i`.
pub fn hermite_functions(n: usize, q: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(std::f64::consts::PI.powf(-0.25) * (-0.5 * q * q).exp());
    if n > 1 {
        out.push(std::f64::consts::SQRT_2 * q * out[0]);
    }
    for k in 1..n.saturating_sub(1) {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * q * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Grid("empty grid".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Grid("grid must be strictly increasing".into()));
    }
    Ok(())
}

fn single_mode(s: &FockOperator) -> Result<usize> {
    match s.mode_dims() {
        [d] => Ok(*d),
        _ => Err(Error::InvalidDimension("expected a single-mode operator".into())),
    }
}

/// `P(q) = ⟨q|s|q⟩` on the grid.
pub fn position_distribution(s: &FockOperator, grid: &[f64]) -> Result<Vec<f64>> {
    let d = single_mode(s)?;
    s.ensure_hermitian()?;
    check_grid(grid)?;
    let data = s.data();
    Ok(grid
        .iter()
        .map(|&q| {
            let psi = hermite_functions(d, q);
            let mut acc = 0.0;
            for n in 0..d {
                acc += data[(n, n)].re * psi[n] * psi[n];
                for m in 0..n {
                    // the imaginary parts cancel pairwise
                    acc += 2.0 * data[(n, m)].re * psi[n] * psi[m];
                }
            }
            acc
        })
        .collect())
}

/// Generalized Laguerre values `L_0^{(k)}(x) … L_{n−1}^{(k)}(x)`.
fn laguerre(n: usize, k: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let kf = k as f64;
    if n == 0 {
        return out;
    }
    out.push(1.0);
    if n > 1 {
        out.push(1.0 + kf - x);
    }
    for i in 1..n.saturating_sub(1) {
        let fi = i as f64;
        let next = ((2.0 * fi + 1.0 + kf - x) * out[i] - (fi + kf) * out[i - 1]) / (fi + 1.0);
        out.push(next);
    }
    out
}

/// `W(x, p)` with `∬ W dx dp = Tr s`. Rows follow `x_grid`, columns `p_grid`.
pub fn wigner_function(s: &FockOperator, x_grid: &[f64], p_grid: &[f64]) -> Result<DMatrix<f64>> {
    let d = single_mode(s)?;
    s.ensure_hermitian()?;
    check_grid(x_grid)?;
    check_grid(p_grid)?;
    let rho = s.data();
    // sqrt(n!/m!) for m = n + k, tabulated per (n, k)
    let mut ratio = vec![vec![1.0f64; d]; d];
    for n in 0..d {
        for k in 1..d - n {
            ratio[n][k] = ratio[n][k - 1] / ((n + k) as f64).sqrt();
        }
    }
    let mut w = DMatrix::<f64>::zeros(x_grid.len(), p_grid.len());
    for (ix, &x) in x_grid.iter().enumerate() {
        for (ip, &p) in p_grid.iter().enumerate() {
            let alpha = C64::new(x, p) * std::f64::consts::FRAC_1_SQRT_2;
            let r2 = alpha.norm_sqr();
            let gauss = (-2.0 * r2).exp() / std::f64::consts::PI;
            let two_conj = alpha.conj() * 2.0;
            let mut acc = 0.0;
            let mut power = C64::new(1.0, 0.0);
            for k in 0..d {
                let lag = laguerre(d - k, k, 4.0 * r2);
                for n in 0..d - k {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    let base = sign * ratio[n][k] * lag[n];
                    if k == 0 {
                        acc += rho[(n, n)].re * base;
                    } else {
                        acc += 2.0 * (rho[(n + k, n)] * power).re * base;
                    }
                }
                power *= two_conj;
            }
            w[(ix, ip)] = gauss * acc;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{expectation, quadrature_ops};
    use crate::linalg::{CMatrix, CVector, ONE};

    fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    fn number_state(n: usize, d: usize) -> FockOperator {
        let mut m = CMatrix::zeros(d, d);
        m[(n, n)] = ONE;
        FockOperator::single_mode(m).unwrap()
    }

    #[test]
    fn hermite_functions_low_orders() {
        let q = 0.7f64;
        let psi = hermite_functions(3, q);
        let g = std::f64::consts::PI.powf(-0.25) * (-q * q / 2.0).exp();
        assert!((psi[0] - g).abs() < 1e-15);
        assert!((psi[1] - std::f64::consts::SQRT_2 * q * g).abs() < 1e-15);
        assert!((psi[2] - (2.0 * q * q - 1.0) / std::f64::consts::SQRT_2 * g).abs() < 1e-14);
    }

    #[test]
    fn position_densities_of_number_states() {
        let grid = linspace(-3.0, 3.0, 13);
        let p0 = position_distribution(&number_state(0, 5), &grid).unwrap();
        let p1 = position_distribution(&number_state(1, 5), &grid).unwrap();
        let rpi = std::f64::consts::PI.sqrt();
        for (i, &q) in grid.iter().enumerate() {
            assert!((p0[i] - (-q * q).exp() / rpi).abs() < 1e-14);
            assert!((p1[i] - 2.0 * q * q * (-q * q).exp() / rpi).abs() < 1e-14);
        }
        let fine = linspace(-10.0, 10.0, 2001);
        let p = position_distribution(&number_state(4, 8), &fine).unwrap();
        let h = fine[1] - fine[0];
        let total: f64 = p.iter().sum::<f64>() * h;
        assert!((total - 1.0).abs() < 1e-6);
    }

    #[test]
    fn position_distribution_rejects_bad_grid() {
        let s = number_state(0, 3);
        assert!(matches!(position_distribution(&s, &[0.0, 0.0]), Err(Error::Grid(_))));
        assert!(position_distribution(&s, &[]).is_err());
    }

    #[test]
    fn vacuum_and_single_photon_wigner() {
        let xs = linspace(-2.0, 2.0, 9);
        let w0 = wigner_function(&number_state(0, 4), &xs, &xs).unwrap();
        for (i, &x) in xs.iter().enumerate() {
            for (j, &p) in xs.iter().enumerate() {
                let want = (-x * x - p * p).exp() / std::f64::consts::PI;
                assert!((w0[(i, j)] - want).abs() < 1e-14);
            }
        }
        let w1 = wigner_function(&number_state(1, 4), &[0.0], &[0.0]).unwrap();
        assert!((w1[(0, 0)] + 1.0 / std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn wigner_first_moments_match_operators() {
        // (|0⟩ + i|1⟩)/√2 has ⟨x⟩ = 0 and ⟨p⟩ = 1/√2
        let d = 6;
        let mut psi = CVector::zeros(d);
        psi[0] = C64::new(1.0, 0.0);
        psi[1] = C64::new(0.0, 1.0);
        let psi = psi.unscale(std::f64::consts::SQRT_2);
        let s = FockOperator::projector(&psi, &[d]).unwrap();
        let (x, p) = quadrature_ops(d).unwrap();
        let grid = linspace(-7.0, 7.0, 141);
        let w = wigner_function(&s, &grid, &grid).unwrap();
        let h = grid[1] - grid[0];
        let (mut norm, mut mx, mut mp) = (0.0, 0.0, 0.0);
        for (i, &xv) in grid.iter().enumerate() {
            for (j, &pv) in grid.iter().enumerate() {
                norm += w[(i, j)];
                mx += w[(i, j)] * xv;
                mp += w[(i, j)] * pv;
            }
        }
        let (norm, mx, mp) = (norm * h * h, mx * h * h, mp * h * h);
        assert!((norm - 1.0).abs() < 1e-8);
        assert!((mx - expectation(&s, &x).unwrap().re).abs() < 1e-8);
        assert!((mp - expectation(&s, &p).unwrap().re).abs() < 1e-8);
        assert!((mp - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
    }
}
