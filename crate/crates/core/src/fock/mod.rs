//! Truncated Fock-space operators for one or two bosonic modes.
//!
//! Quadratures follow `x = (a + a†)/√2`, `p = (a − a†)/(i√2)`, so that
//! `[x, p] = i` and the vacuum has `⟨x²⟩ = 1/2`. Two-mode operators use
//! mode A as the slow index: basis state `|i, k⟩` sits at `i * d_B + k`.

mod gaussian;
mod io;
mod phase_space;

pub use gaussian::{
    beam_splitter_50, beam_splitter_unitary, local_rotation, local_squeeze,
    local_squeeze_with_limit, rotate_mode, squeeze_mode, squeeze_mode_with_limit,
    squeeze_unitary,
};
pub use io::{read_state_file, state_from_json, state_to_json, StateFile};
pub use phase_space::{hermite_functions, position_distribution, wigner_function};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64, ONE, ZERO};
use crate::tolerances::{HERMITIAN_REL, TRACE_TOL};

/// Which mode of a two-mode operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    B,
}

impl Mode {
    pub fn index(self) -> usize {
        match self {
            Mode::A => 0,
            Mode::B => 1,
        }
    }
}

/// A dense complex matrix on a truncated number basis of one or two modes.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    data: CMatrix,
    mode_dims: Vec<usize>,
}

impl FockOperator {
    pub fn new(data: CMatrix, mode_dims: Vec<usize>) -> Result<Self> {
        if mode_dims.is_empty() || mode_dims.len() > 2 {
            return Err(Error::InvalidDimension(format!(
                "expected one or two modes, got {}",
                mode_dims.len()
            )));
        }
        if mode_dims.contains(&0) {
            return Err(Error::InvalidDimension("zero cutoff".into()));
        }
        let dim: usize = mode_dims.iter().product();
        if data.nrows() != dim || data.ncols() != dim {
            return Err(Error::InvalidDimension(format!(
                "matrix is {}x{}, mode dims {:?} need {dim}x{dim}",
                data.nrows(),
                data.ncols(),
                mode_dims
            )));
        }
        Ok(Self { data, mode_dims })
    }

    pub fn single_mode(data: CMatrix) -> Result<Self> {
        let d = data.nrows();
        Self::new(data, vec![d])
    }

    pub fn identity(mode_dims: &[usize]) -> Result<Self> {
        let dim = mode_dims.iter().product();
        Self::new(CMatrix::identity(dim, dim), mode_dims.to_vec())
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(psi: &CVector, mode_dims: &[usize]) -> Result<Self> {
        Self::new(psi * psi.adjoint(), mode_dims.to_vec())
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_data(self) -> CMatrix {
        self.data
    }

    pub fn mode_dims(&self) -> &[usize] {
        &self.mode_dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn num_modes(&self) -> usize {
        self.mode_dims.len()
    }

    pub fn is_two_mode(&self) -> bool {
        self.mode_dims.len() == 2
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
            mode_dims: self.mode_dims.clone(),
        }
    }

    pub fn hermitian_deviation(&self) -> f64 {
        linalg::hermitian_deviation(&self.data)
    }

    /// `max|A − A†| ≤ 1e−12 · max|A|`
    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= HERMITIAN_REL * linalg::max_abs(&self.data)
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                deviation: self.hermitian_deviation(),
            })
        }
    }

    pub fn same_dims(&self, other: &Self) -> Result<()> {
        if self.mode_dims != other.mode_dims {
            return Err(Error::DimensionMismatch {
                expected: self.mode_dims.clone(),
                found: other.mode_dims.clone(),
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_dims(other)?;
        Ok(Self {
            data: &self.data * &other.data,
            mode_dims: self.mode_dims.clone(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dims(other)?;
        Ok(Self {
            data: &self.data + &other.data,
            mode_dims: self.mode_dims.clone(),
        })
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            data: self.data.map(|z| z * factor),
            mode_dims: self.mode_dims.clone(),
        }
    }

    /// `[A, B]`
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.same_dims(other)?;
        Ok(Self {
            data: &self.data * &other.data - &other.data * &self.data,
            mode_dims: self.mode_dims.clone(),
        })
    }

    /// Replaces the matrix by its hermitian part. Used after conjugations that
    /// are hermiticity-preserving in exact arithmetic.
    pub(crate) fn hermitized(mut self) -> Self {
        self.data = linalg::hermitian_part(&self.data);
        self
    }

    pub(crate) fn with_data(&self, data: CMatrix) -> Self {
        debug_assert_eq!(data.nrows(), self.data.nrows());
        Self {
            data,
            mode_dims: self.mode_dims.clone(),
        }
    }

    fn require_two_mode(&self) -> Result<(usize, usize)> {
        match self.mode_dims[..] {
            [da, db] => Ok((da, db)),
            _ => Err(Error::InvalidDimension(
                "operation needs a two-mode operator".into(),
            )),
        }
    }

    fn require_single_mode(&self) -> Result<usize> {
        match self.mode_dims[..] {
            [d] => Ok(d),
            _ => Err(Error::InvalidDimension(
                "operation needs a single-mode operator".into(),
            )),
        }
    }
}

/// Tri-state positivity flag of a [`TwoModeState`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    Yes,
    No,
    Unknown,
}

/// A hermitian, unit-trace two-mode operator. Partial-transpose images are
/// carried in the same type with `positive` set to [`Positivity::Unknown`].
#[derive(Clone, Debug)]
pub struct TwoModeState {
    op: FockOperator,
    trace: C64,
    positive: Positivity,
}

impl TwoModeState {
    pub fn new(op: FockOperator, positive: Positivity) -> Result<Self> {
        op.require_two_mode()?;
        op.ensure_hermitian()?;
        let trace = op.trace();
        if (trace - ONE).norm() > TRACE_TOL {
            return Err(Error::NotNormalized(trace.re));
        }
        Ok(Self {
            op,
            trace,
            positive,
        })
    }

    /// Normalized pure state `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &CVector, mode_dims: [usize; 2]) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let psi = psi.unscale(norm);
        let op = FockOperator::projector(&psi, &mode_dims)?.hermitized();
        Self::new(op, Positivity::Yes)
    }

    pub fn op(&self) -> &FockOperator {
        &self.op
    }

    pub fn into_op(self) -> FockOperator {
        self.op
    }

    pub fn trace(&self) -> C64 {
        self.trace
    }

    pub fn positive(&self) -> Positivity {
        self.positive
    }

    pub fn mode_dims(&self) -> [usize; 2] {
        [self.op.mode_dims[0], self.op.mode_dims[1]]
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        linalg::trace_product(self.op.data(), self.op.data()).re
    }
}

/// Things a two-mode transformation can act on and hand back unchanged in type.
pub trait TwoModeOperand: Sized {
    fn operator(&self) -> &FockOperator;

    /// Rebuilds `Self` around a transformed operator. `keeps_positivity` is
    /// true for unitary conjugations.
    fn rebuild(&self, op: FockOperator, keeps_positivity: bool) -> Result<Self>;
}

impl TwoModeOperand for FockOperator {
    fn operator(&self) -> &FockOperator {
        self
    }

    fn rebuild(&self, op: FockOperator, _keeps_positivity: bool) -> Result<Self> {
        Ok(op)
    }
}

impl TwoModeOperand for TwoModeState {
    fn operator(&self) -> &FockOperator {
        &self.op
    }

    fn rebuild(&self, op: FockOperator, keeps_positivity: bool) -> Result<Self> {
        let positive = if keeps_positivity {
            self.positive
        } else {
            Positivity::Unknown
        };
        let trace = op.trace();
        Ok(Self {
            op,
            trace,
            positive,
        })
    }
}

/// Ladder operator with `A[n−1, n] = √n`.
pub fn annihilation_op(cutoff: usize) -> Result<FockOperator> {
    if cutoff < 2 {
        return Err(Error::InvalidDimension(format!(
            "cutoff {cutoff} < 2 for a ladder operator"
        )));
    }
    let mut a = CMatrix::zeros(cutoff, cutoff);
    for n in 1..cutoff {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    FockOperator::single_mode(a)
}

pub fn creation_op(cutoff: usize) -> Result<FockOperator> {
    Ok(annihilation_op(cutoff)?.adjoint())
}

pub fn number_op(cutoff: usize) -> Result<FockOperator> {
    if cutoff == 0 {
        return Err(Error::InvalidDimension("zero cutoff".into()));
    }
    let n = CMatrix::from_diagonal(&CVector::from_fn(cutoff, |i, _| C64::new(i as f64, 0.0)));
    FockOperator::single_mode(n)
}

/// `(x, p)` on `cutoff` levels. `[x, p] = i` except in the last basis state.
pub fn quadrature_ops(cutoff: usize) -> Result<(FockOperator, FockOperator)> {
    let a = annihilation_op(cutoff)?;
    let ad = a.adjoint();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = (a.data() + ad.data()).map(|z| z * s);
    let p = (a.data() - ad.data()).map(|z| z * C64::new(0.0, -s));
    Ok((FockOperator::single_mode(x)?, FockOperator::single_mode(p)?))
}

/// Kronecker product with `a` on mode A (slow index).
pub fn tensor(a: &FockOperator, b: &FockOperator) -> Result<FockOperator> {
    let da = a.require_single_mode()?;
    let db = b.require_single_mode()?;
    FockOperator::new(a.data().kronecker(b.data()), vec![da, db])
}

/// Transpose on mode-B indices: `out[(i,k),(j,l)] = in[(i,l),(j,k)]`.
pub fn partial_transpose<T: TwoModeOperand>(s: &T) -> Result<T> {
    let op = s.operator();
    let (da, db) = op.require_two_mode()?;
    let src = op.data();
    let dim = da * db;
    let out = CMatrix::from_fn(dim, dim, |r, c| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (c / db, c % db);
        src[(i * db + l, j * db + k)]
    });
    s.rebuild(op.with_data(out), false)
}

/// `Tr(s · obs)`. Defined for any operator, including non-positive PT images.
pub fn expectation(s: &FockOperator, obs: &FockOperator) -> Result<C64> {
    s.same_dims(obs)?;
    Ok(linalg::trace_product(s.data(), obs.data()))
}

/// Reduced operator of the mode `keep`.
pub fn partial_trace(s: &FockOperator, keep: Mode) -> Result<FockOperator> {
    let (da, db) = s.require_two_mode()?;
    let src = s.data();
    let out = match keep {
        Mode::A => CMatrix::from_fn(da, da, |i, j| {
            (0..db).fold(ZERO, |acc, k| acc + src[(i * db + k, j * db + k)])
        }),
        Mode::B => CMatrix::from_fn(db, db, |k, l| {
            (0..da).fold(ZERO, |acc, i| acc + src[(i * db + k, i * db + l)])
        }),
    };
    FockOperator::single_mode(out)
}

/// Embeds a single-mode operator into a larger cutoff, padding with zeros.
pub fn embed(op: &FockOperator, cutoff: usize) -> Result<FockOperator> {
    let d = op.require_single_mode()?;
    if cutoff < d {
        return Err(Error::InvalidDimension(format!(
            "cannot embed {d} levels into {cutoff}"
        )));
    }
    let mut out = CMatrix::zeros(cutoff, cutoff);
    out.view_mut((0, 0), (d, d)).copy_from(op.data());
    FockOperator::single_mode(out)
}

/// Mean photon number `Tr(ρ n̂)` of a single-mode operator.
pub fn mean_photon_number(op: &FockOperator) -> Result<f64> {
    let d = op.require_single_mode()?;
    Ok((0..d).map(|n| n as f64 * op.data()[(n, n)].re).sum())
}
