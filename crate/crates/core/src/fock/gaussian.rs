//! Gaussian unitaries on truncated two-mode spaces.
//!
//! Every unitary here is exactly unitary on the truncated space: generators
//! are truncated first and exponentiated afterwards. The beam splitter
//! conserves total photon number and is exact on every block `N < cutoff`.

use nalgebra::DMatrix;

use super::{FockOperator, TwoModeOperand};
use crate::error::{Error, Result};
use crate::linalg::{BlockOrthogonal, CMatrix, C64};
use crate::tolerances::MAX_SQUEEZE;

fn beam_splitter_blocks(cutoff: usize, angle: f64) -> BlockOrthogonal {
    let d = cutoff;
    let mut blocks = Vec::with_capacity(2 * d);
    for total in 0..=(2 * (d - 1)) {
        let lo = total.saturating_sub(d - 1);
        let hi = total.min(d - 1);
        let idx: Vec<usize> = (lo..=hi).map(|i| i * d + (total - i)).collect();
        let n = idx.len();
        if n == 1 {
            continue;
        }
        let mut gen = DMatrix::<f64>::zeros(n, n);
        for (col, i) in (lo..=hi).enumerate() {
            let k = total - i;
            // a†b |i,k⟩ = √((i+1)k) |i+1,k−1⟩
            if i < hi {
                gen[(col + 1, col)] += angle * (((i + 1) * k) as f64).sqrt();
            }
            // −ab† |i,k⟩ = −√(i(k+1)) |i−1,k+1⟩
            if i > lo {
                gen[(col - 1, col)] -= angle * ((i * (k + 1)) as f64).sqrt();
            }
        }
        blocks.push((idx, gen.exp()));
    }
    BlockOrthogonal { dim: d * d, blocks }
}

fn equal_cutoffs(op: &FockOperator) -> Result<usize> {
    match op.mode_dims() {
        [da, db] if da == db => Ok(*da),
        [da, db] => Err(Error::InvalidDimension(format!(
            "beam splitter needs equal cutoffs, got {da} and {db}"
        ))),
        _ => Err(Error::InvalidDimension(
            "beam splitter needs a two-mode operator".into(),
        )),
    }
}

/// Dense `B = exp[π/4 (a†b − ab†)]` on `cutoff²` levels.
pub fn beam_splitter_unitary(cutoff: usize) -> Result<FockOperator> {
    if cutoff == 0 {
        return Err(Error::InvalidDimension("zero cutoff".into()));
    }
    let u = beam_splitter_blocks(cutoff, std::f64::consts::FRAC_PI_4).to_dense();
    FockOperator::new(u.map(|v| C64::new(v, 0.0)), vec![cutoff, cutoff])
}

/// `B ρ B†` with `B = exp[π/4 (a†b − ab†)]`.
///
/// In the Heisenberg picture `B†aB = (a + b)/√2` and `B†bB = (b − a)/√2`, so
/// mode A leaves carrying `(x₊, p₊)` and mode B carries `(−x₋, −p₋)`.
pub fn beam_splitter_50<T: TwoModeOperand>(s: &T) -> Result<T> {
    let op = s.operator();
    let d = equal_cutoffs(op)?;
    let u = beam_splitter_blocks(d, std::f64::consts::FRAC_PI_4);
    let out = op.with_data(u.conjugate(op.data())).hermitized();
    s.rebuild(out, true)
}

/// Applies `exp(−iθ n̂)` to one mode: `x ↦ cosθ x + sinθ p`, `p ↦ cosθ p − sinθ x`
/// in the Heisenberg picture.
pub fn rotate_mode(op: &FockOperator, mode: usize, theta: f64) -> Result<FockOperator> {
    let dims = op.mode_dims();
    if mode >= dims.len() {
        return Err(Error::InvalidDimension(format!("no mode {mode}")));
    }
    if theta == 0.0 {
        return Ok(op.clone());
    }
    let stride: usize = dims[mode + 1..].iter().product();
    let d = dims[mode];
    let level = |r: usize| ((r / stride) % d) as f64;
    let src = op.data();
    let out = CMatrix::from_fn(src.nrows(), src.ncols(), |r, c| {
        src[(r, c)] * C64::from_polar(1.0, -theta * (level(r) - level(c)))
    });
    Ok(op.with_data(out))
}

/// Local phase-space rotations on both modes.
pub fn local_rotation<T: TwoModeOperand>(s: &T, theta1: f64, theta2: f64) -> Result<T> {
    let op = s.operator();
    if !op.is_two_mode() {
        return Err(Error::InvalidDimension(
            "local rotation needs a two-mode operator".into(),
        ));
    }
    let out = rotate_mode(&rotate_mode(op, 0, theta1)?, 1, theta2)?;
    s.rebuild(out, true)
}

/// Real orthogonal `exp[(r/2)(a†² − a²)]`, so that `x ↦ eʳ x`, `p ↦ e⁻ʳ p`
/// in the Heisenberg picture.
pub fn squeeze_unitary(r: f64, cutoff: usize) -> DMatrix<f64> {
    let mut gen = DMatrix::<f64>::zeros(cutoff, cutoff);
    for n in 0..cutoff.saturating_sub(2) {
        let w = 0.5 * r * (((n + 1) * (n + 2)) as f64).sqrt();
        gen[(n + 2, n)] = w;
        gen[(n, n + 2)] = -w;
    }
    gen.exp()
}

fn mode_blocks(dims: &[usize], mode: usize, u: &DMatrix<f64>) -> BlockOrthogonal {
    let dim: usize = dims.iter().product();
    let blocks = match (dims.len(), mode) {
        (1, _) => vec![((0..dim).collect(), u.clone())],
        (_, 0) => (0..dims[1])
            .map(|k| ((0..dims[0]).map(|i| i * dims[1] + k).collect(), u.clone()))
            .collect(),
        _ => (0..dims[0])
            .map(|i| ((0..dims[1]).map(|k| i * dims[1] + k).collect(), u.clone()))
            .collect(),
    };
    BlockOrthogonal { dim, blocks }
}

/// Squeezes one mode by `r` with the default `|r| ≤ 2` guard.
pub fn squeeze_mode(op: &FockOperator, mode: usize, r: f64) -> Result<FockOperator> {
    squeeze_mode_with_limit(op, mode, r, MAX_SQUEEZE)
}

pub fn squeeze_mode_with_limit(
    op: &FockOperator,
    mode: usize,
    r: f64,
    max_abs_r: f64,
) -> Result<FockOperator> {
    let dims = op.mode_dims();
    if mode >= dims.len() {
        return Err(Error::InvalidDimension(format!("no mode {mode}")));
    }
    if !r.is_finite() || r.abs() > max_abs_r {
        return Err(Error::Truncation(format!(
            "squeezing r = {r} exceeds the limit {max_abs_r}"
        )));
    }
    if r == 0.0 {
        return Ok(op.clone());
    }
    let u = squeeze_unitary(r, dims[mode]);
    let blocks = mode_blocks(dims, mode, &u);
    Ok(op.with_data(blocks.conjugate(op.data())).hermitized())
}

/// Local single-mode squeezers on both modes.
pub fn local_squeeze<T: TwoModeOperand>(s: &T, r1: f64, r2: f64) -> Result<T> {
    local_squeeze_with_limit(s, r1, r2, MAX_SQUEEZE)
}

pub fn local_squeeze_with_limit<T: TwoModeOperand>(
    s: &T,
    r1: f64,
    r2: f64,
    max_abs_r: f64,
) -> Result<T> {
    let op = s.operator();
    if !op.is_two_mode() {
        return Err(Error::InvalidDimension(
            "local squeeze needs a two-mode operator".into(),
        ));
    }
    let out = squeeze_mode_with_limit(op, 0, r1, max_abs_r)?;
    let out = squeeze_mode_with_limit(&out, 1, r2, max_abs_r)?;
    s.rebuild(out, true)
}
