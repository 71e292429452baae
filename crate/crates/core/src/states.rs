//! Builders for the benchmark two-mode states.

use crate::error::{Error, Result};
use crate::fock::{beam_splitter_50, FockOperator, Positivity, TwoModeState};
use crate::linalg::{CVector, C64};
use crate::tolerances::{AUTO_CUTOFF_TAIL, TRUNCATION_TOL};

/// Dephased cat parameters: real amplitude `alpha`, coherence `p ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatParams {
    pub alpha: f64,
    pub p: f64,
}

impl CatParams {
    pub fn new(alpha: f64, p: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha = {alpha}")));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
        }
        Ok(Self { alpha, p })
    }

    /// `𝒩 = 1 / [2 − 2p·exp(−4α²)]`
    pub fn normalization(&self) -> f64 {
        1.0 / (2.0 - 2.0 * self.p * (-4.0 * self.alpha * self.alpha).exp())
    }

    /// `2𝒩 − 1`, evaluated without cancellation.
    pub fn two_n_minus_one(&self) -> f64 {
        let q = self.p * (-4.0 * self.alpha * self.alpha).exp();
        q / (1.0 - q)
    }
}

/// Coefficients of `c0|0,0⟩ + c1|1,1⟩ + c2|2,2⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PnesParams {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl PnesParams {
    pub fn new(c0: f64, c1: f64, c2: f64) -> Result<Self> {
        let norm = c0 * c0 + c1 * c1 + c2 * c2;
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "PNES coefficients have squared norm {norm}"
            )));
        }
        Ok(Self { c0, c1, c2 })
    }

    /// Completes `(c0, c1)` with `c2 = √(1 − c0² − c1²)`.
    pub fn from_c0_c1(c0: f64, c1: f64) -> Result<Self> {
        let rest = 1.0 - c0 * c0 - c1 * c1;
        if rest < -1e-12 {
            return Err(Error::InvalidParameter(format!(
                "c0² + c1² = {} exceeds one",
                1.0 - rest
            )));
        }
        Self::new(c0, c1, rest.max(0.0).sqrt())
    }
}

/// Smallest cutoff with the Poisson(`mean`) tail `P(N ≥ d)` below `tail`.
fn poisson_cutoff(mean: f64, tail: f64) -> usize {
    if mean <= 0.0 {
        return 1;
    }
    let mut term = (-mean).exp();
    let mut cdf = term;
    let mut d = 1;
    while 1.0 - cdf >= tail && d < 10_000 {
        term *= mean / d as f64;
        cdf += term;
        d += 1;
        // once the remaining terms are negligible the cdf stops moving
        if term < tail * 1e-3 && (d as f64) > mean {
            break;
        }
    }
    d
}

/// Cutoff for a state with mean photon number `mean_photons` probed up to
/// hierarchy level `j_max`: the larger of `⌈n̄ + 6√(n̄+1)⌉` and the Poisson
/// tail rule, plus `2J` levels of headroom.
pub fn auto_cutoff(mean_photons: f64, j_max: f64) -> usize {
    let n = mean_photons.max(0.0);
    let rule = (n + 6.0 * (n + 1.0).sqrt()).ceil() as usize;
    let tail = poisson_cutoff(n, AUTO_CUTOFF_TAIL);
    rule.max(tail) + (2.0 * j_max).ceil() as usize
}

/// Cutoff for the dephased cat. The beam splitter mixes both modes, so the
/// relevant photon number is the total `2α²`.
pub fn cat_auto_cutoff(alpha: f64, j_max: f64) -> usize {
    auto_cutoff(2.0 * alpha * alpha, j_max)
}

/// Truncated coherent amplitudes `e^{−|α|²/2} αⁿ/√n!`, `n < cutoff`, unnormalized.
/// Fails when the discarded probability exceeds the truncation tolerance.
pub fn coherent_state(alpha: C64, cutoff: usize) -> Result<CVector> {
    if cutoff == 0 {
        return Err(Error::InvalidDimension("zero cutoff".into()));
    }
    let mut v = CVector::zeros(cutoff);
    v[0] = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for n in 1..cutoff {
        v[n] = v[n - 1] * alpha / (n as f64).sqrt();
    }
    let deficit = 1.0 - v.norm_squared();
    if deficit > TRUNCATION_TOL {
        return Err(Error::Truncation(format!(
            "coherent amplitude {alpha} loses {deficit:.3e} beyond cutoff {cutoff}"
        )));
    }
    Ok(v)
}

fn product(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

fn unit_trace(op: FockOperator) -> Result<TwoModeState> {
    let tr = op.trace().re;
    TwoModeState::new(op.scale(C64::new(1.0 / tr, 0.0)).hermitized(), Positivity::Yes)
}

/// Unnormalized pieces of the dephased cat at amplitude `alpha`:
/// `D = |α,α⟩⟨α,α| + |−α,−α⟩⟨−α,−α|` and `C = |α,α⟩⟨−α,−α| + h.c.`,
/// so that `ρ_cat ∝ D − pC`.
pub fn dephased_cat_parts(alpha: f64, cutoff: usize) -> Result<(FockOperator, FockOperator)> {
    let plus = coherent_state(C64::new(alpha, 0.0), cutoff)?;
    let minus = coherent_state(C64::new(-alpha, 0.0), cutoff)?;
    let pp = product(&plus, &plus);
    let mm = product(&minus, &minus);
    let dims = [cutoff, cutoff];
    let d = FockOperator::new(&pp * pp.adjoint() + &mm * mm.adjoint(), dims.to_vec())?;
    let cross = &pp * mm.adjoint();
    let c = FockOperator::new(&cross + cross.adjoint(), dims.to_vec())?;
    Ok((d, c))
}

/// `ρ_cat = 𝒩[|α,α⟩⟨α,α| + |−α,−α⟩⟨−α,−α| − p(|α,α⟩⟨−α,−α| + h.c.)]`
/// on the truncated space, renormalized to unit trace.
pub fn dephased_cat(params: CatParams, cutoff: usize) -> Result<TwoModeState> {
    let params = CatParams::new(params.alpha, params.p)?;
    let (d, c) = dephased_cat_parts(params.alpha, cutoff)?;
    let rho = d.add(&c.scale(C64::new(-params.p, 0.0)))?;
    unit_trace(rho)
}

/// `B|n, m⟩` with the 50/50 beam splitter of [`beam_splitter_50`].
pub fn beam_split_number(n: usize, m: usize, cutoff: usize) -> Result<TwoModeState> {
    if cutoff <= n + m + 1 {
        return Err(Error::Truncation(format!(
            "cutoff {cutoff} must exceed n + m + 1 = {}",
            n + m + 1
        )));
    }
    let mut psi = CVector::zeros(cutoff * cutoff);
    psi[n * cutoff + m] = C64::new(1.0, 0.0);
    let fock = TwoModeState::pure(&psi, [cutoff, cutoff])?;
    beam_splitter_50(&fock)
}

/// `c0|0,0⟩ + c1|1,1⟩ + c2|2,2⟩`
pub fn pnes(params: PnesParams, cutoff: usize) -> Result<TwoModeState> {
    let params = PnesParams::new(params.c0, params.c1, params.c2)?;
    if cutoff < 4 {
        return Err(Error::InvalidDimension(format!("PNES needs cutoff >= 4, got {cutoff}")));
    }
    let mut psi = CVector::zeros(cutoff * cutoff);
    for (k, c) in [params.c0, params.c1, params.c2].into_iter().enumerate() {
        psi[k * cutoff + k] = C64::new(c, 0.0);
    }
    TwoModeState::pure(&psi, [cutoff, cutoff])
}

/// `Σ tanhⁿr/cosh r |n, n⟩`, with `⟨x₁x₂⟩ = sinh(2r)/2`.
pub fn two_mode_squeezed(r: f64, cutoff: usize) -> Result<TwoModeState> {
    if !r.is_finite() {
        return Err(Error::InvalidParameter(format!("r = {r}")));
    }
    let t = r.tanh();
    let deficit = t.abs().powi(2 * cutoff as i32);
    if deficit > TRUNCATION_TOL {
        return Err(Error::Truncation(format!(
            "squeezing r = {r} loses {deficit:.3e} beyond cutoff {cutoff}"
        )));
    }
    let mut psi = CVector::zeros(cutoff * cutoff);
    let mut amp = 1.0 / r.cosh();
    for n in 0..cutoff {
        psi[n * cutoff + n] = C64::new(amp, 0.0);
        amp *= t;
    }
    TwoModeState::pure(&psi, [cutoff, cutoff])
}

/// `|α₁⟩ ⊗ |α₂⟩`
pub fn coherent_product(alpha1: C64, alpha2: C64, cutoff: usize) -> Result<TwoModeState> {
    let a = coherent_state(alpha1, cutoff)?;
    let b = coherent_state(alpha2, cutoff)?;
    TwoModeState::pure(&product(&a, &b), [cutoff, cutoff])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{
        expectation, mean_photon_number, partial_trace, partial_transpose, quadrature_ops, tensor, Mode,
    };
    use crate::linalg;

    #[test]
    fn cat_normalization_closed_form() {
        let c = CatParams::new(1.0, 1.0).unwrap();
        assert!((c.normalization() - 0.509_328_680).abs() < 1e-9);
        assert!((2.0 * c.normalization() - 1.0 - c.two_n_minus_one()).abs() < 1e-15);
        assert!(CatParams::new(1.0, 1.5).is_err());
        assert!(CatParams::new(1.0, -0.1).is_err());
    }

    #[test]
    fn cat_trace_and_purity() {
        let params = CatParams::new(1.0, 1.0).unwrap();
        let rho = dephased_cat(params, cat_auto_cutoff(1.0, 1.0)).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-9);
        assert!(rho.op().is_hermitian());
        // Oracle: coherent overlaps, o = ⟨α,α|−α,−α⟩ = e^{−4α²}.
        let o = (-4.0f64).exp();
        let n = params.normalization();
        let p = params.p;
        // ρ = 𝒩[A + B − p(X + X†)] with A = |u⟩⟨u|, B = |v⟩⟨v|, X = |u⟩⟨v|, ⟨u|v⟩ = o
        let tr = 2.0 + 2.0 * o * o - 4.0 * p * (o + o) + p * p * (2.0 + 2.0 * o * o);
        let purity = n * n * tr;
        assert!((rho.purity() - purity).abs() < 1e-8, "{} vs {purity}", rho.purity());
        assert!((purity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cat_without_coherence_is_mixture() {
        let rho = dephased_cat(CatParams::new(0.8, 0.0).unwrap(), 20).unwrap();
        assert!(rho.purity() < 0.6);
        let pt = partial_transpose(&rho).unwrap();
        assert!(linalg::hermitian_eigenvalues_direct(pt.op().data())[0] > -1e-12);
    }

    #[test]
    fn small_cat_approaches_vacuum() {
        let rho = dephased_cat(CatParams::new(1e-4, 0.5).unwrap(), 6).unwrap();
        assert!((rho.op().data()[(0, 0)].re - 1.0).abs() < 1e-7);
    }

    #[test]
    fn beam_split_number_states() {
        let v = beam_split_number(0, 0, 3).unwrap();
        assert!((v.op().data()[(0, 0)].re - 1.0).abs() < 1e-14);
        let one = beam_split_number(1, 0, 4).unwrap();
        // |1,0⟩ and |0,1⟩ each with weight 1/2, coherence magnitude 1/2
        let d = one.op().data();
        assert!((d[(4, 4)].re - 0.5).abs() < 1e-14);
        assert!((d[(1, 1)].re - 0.5).abs() < 1e-14);
        assert!((d[(4, 1)].norm() - 0.5).abs() < 1e-14);
        let hom = beam_split_number(1, 1, 5).unwrap();
        let d = hom.op().data();
        assert!((d[(2 * 5, 2 * 5)].re - 0.5).abs() < 1e-13);
        assert!((d[(2, 2)].re - 0.5).abs() < 1e-13);
        assert!(d[(6, 6)].norm() < 1e-13);
        assert!(beam_split_number(2, 1, 4).is_err());
    }

    #[test]
    fn pnes_states() {
        let vac = pnes(PnesParams::new(1.0, 0.0, 0.0).unwrap(), 4).unwrap();
        assert!((vac.op().data()[(0, 0)].re - 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = pnes(PnesParams::new(s, s, 0.0).unwrap(), 4).unwrap();
        let pt = partial_transpose(&bell).unwrap();
        // Oracle: the PT of c0|00⟩ + c1|11⟩ has eigenvalue −|c0 c1| = −1/2.
        let eig = linalg::hermitian_eigenvalues_direct(pt.op().data());
        assert!((eig[0] + 0.5).abs() < 1e-12);
        assert!(PnesParams::new(0.5, 0.5, 0.5).is_err());
        assert!(pnes(PnesParams::new(1.0, 0.0, 0.0).unwrap(), 3).is_err());
        assert!(PnesParams::from_c0_c1(0.9, 0.9).is_err());
    }

    #[test]
    fn squeezed_vacuum_photon_number() {
        let s = two_mode_squeezed(0.5, 40).unwrap();
        let a = partial_trace(s.op(), Mode::A).unwrap();
        // Oracle: Σ n tanh^{2n} r / cosh² r = sinh² r
        let series: f64 = (0..200)
            .map(|n| n as f64 * 0.5f64.tanh().powi(2 * n) / 0.5f64.cosh().powi(2))
            .sum();
        assert!((mean_photon_number(&a).unwrap() - series).abs() < 1e-10);
        assert!((series - 0.271_540_317_4).abs() < 1e-9);
        let vac = two_mode_squeezed(0.0, 3).unwrap();
        assert!((vac.op().data()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(two_mode_squeezed(2.0, 10).is_err());
    }

    #[test]
    fn coherent_product_means() {
        let d = 20;
        let s = coherent_product(C64::new(1.0, 0.0), C64::new(0.0, 0.5), d).unwrap();
        let (x, p) = quadrature_ops(d).unwrap();
        let id = FockOperator::identity(&[d]).unwrap();
        let x1 = tensor(&x, &id).unwrap();
        let p2 = tensor(&id, &p).unwrap();
        assert!((expectation(s.op(), &x1).unwrap().re - 2f64.sqrt()).abs() < 1e-9);
        assert!((expectation(s.op(), &p2).unwrap().re - 0.5 * 2f64.sqrt()).abs() < 1e-9);
        assert!((s.purity() - 1.0).abs() < 1e-8);
        assert!(matches!(coherent_state(C64::new(3.0, 0.0), 10), Err(Error::Truncation(_))));
    }

    #[test]
    fn auto_cutoff_rules() {
        assert_eq!(auto_cutoff(0.0, 0.5), 7);
        // the n̄ + 6√(n̄+1) rule dominates for small n̄, tail rule for large
        assert!(auto_cutoff(1.0, 1.0) >= 11);
        let d = cat_auto_cutoff(2.0, 1.0);
        assert!((30..=45).contains(&d), "{d}");
        // the chosen cutoff keeps the truncated cat normalized
        let alpha = C64::new(2.0, 0.0);
        let v = coherent_state(alpha, d).unwrap();
        assert!(1.0 - v.norm_squared() < 1e-12);
    }
}
