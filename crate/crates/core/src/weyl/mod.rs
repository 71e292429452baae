//! Weyl-ordered quadrature monomials `T_jm`, their product law, and the
//! ordered observable bases of the moment-matrix hierarchy.
//!
//! `T_jm` is the symmetrized product of `x^{j+m} p^{j−m}`. Half-integers are
//! stored as twice their value.

mod cg;

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{quadrature_ops, FockOperator};
use crate::linalg::{CMatrix, C64, ONE, ZERO};

use cg::{clebsch_gordan_exact, signed_sqrt};
use num::{BigInt, BigRational, One};

/// Label `(j, m)` of `T_jm`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIndex {
    two_j: u32,
    two_m: i32,
}

fn is_half_integer(v: f64) -> Option<i64> {
    let twice = 2.0 * v;
    (twice.is_finite() && twice.fract() == 0.0).then_some(twice as i64)
}

fn fmt_half(two: i64) -> String {
    if two % 2 == 0 {
        format!("{}", two / 2)
    } else {
        format!("{two}/2")
    }
}

impl MonomialIndex {
    /// `T_00`, the identity.
    pub const IDENTITY: Self = Self { two_j: 0, two_m: 0 };

    pub fn new(j: f64, m: f64) -> Result<Self> {
        match (is_half_integer(j), is_half_integer(m)) {
            (Some(tj), Some(tm)) => Self::from_twice(tj, tm),
            _ => Err(Error::InvalidIndex(format!("(j, m) = ({j}, {m})"))),
        }
    }

    /// Builds from `(2j, 2m)`.
    pub fn from_twice(two_j: i64, two_m: i64) -> Result<Self> {
        if two_j < 0 || two_m.abs() > two_j || (two_j - two_m) % 2 != 0 {
            return Err(Error::InvalidIndex(format!(
                "(j, m) = ({}, {})",
                fmt_half(two_j),
                fmt_half(two_m)
            )));
        }
        Ok(Self {
            two_j: two_j as u32,
            two_m: two_m as i32,
        })
    }

    pub fn j(&self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    pub fn m(&self) -> f64 {
        f64::from(self.two_m) / 2.0
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn two_m(&self) -> i32 {
        self.two_m
    }

    pub fn is_identity(&self) -> bool {
        self.two_j == 0
    }

    /// Power of `x`, `j + m`.
    pub fn x_power(&self) -> usize {
        ((self.two_j as i32 + self.two_m) / 2) as usize
    }

    /// Power of `p`, `j − m`.
    pub fn p_power(&self) -> usize {
        ((self.two_j as i32 - self.two_m) / 2) as usize
    }
}

impl fmt::Display for MonomialIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "T({},{})",
            fmt_half(i64::from(self.two_j)),
            fmt_half(i64::from(self.two_m))
        )
    }
}

/// A product `T^A_a T^B_b` of monomials on the two modes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TwoModeIndex {
    pub a: MonomialIndex,
    pub b: MonomialIndex,
}

impl TwoModeIndex {
    pub fn new(a: MonomialIndex, b: MonomialIndex) -> Self {
        Self { a, b }
    }

    pub fn mode_a(a: MonomialIndex) -> Self {
        Self::new(a, MonomialIndex::IDENTITY)
    }

    pub fn mode_b(b: MonomialIndex) -> Self {
        Self::new(MonomialIndex::IDENTITY, b)
    }

    /// `2(j_A + j_B)`
    pub fn two_total(&self) -> u32 {
        self.a.two_j + self.b.two_j
    }
}

impl fmt::Display for TwoModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_identity(), self.b.is_identity()) {
            (false, true) => write!(f, "A:{}", self.a),
            (true, false) => write!(f, "B:{}", self.b),
            (true, true) => write!(f, "1"),
            (false, false) => write!(f, "A:{}*B:{}", self.a, self.b),
        }
    }
}

/// Order of the two-mode basis: `a` precedes `b` iff the first non-zero of
/// `(total_b − total_a, j_A(a) − j_A(b), m_A(a) − m_A(b), m_B(a) − m_B(b))`
/// is positive.
pub fn two_mode_order(a: &TwoModeIndex, b: &TwoModeIndex) -> Ordering {
    a.two_total()
        .cmp(&b.two_total())
        .then(b.a.two_j.cmp(&a.a.two_j))
        .then(b.a.two_m.cmp(&a.a.two_m))
        .then(b.b.two_m.cmp(&a.b.two_m))
}

/// Validates a hierarchy level `J ∈ {1/2, 1, 3/2, …}` and returns `2J`.
pub fn level_twice(level: f64) -> Result<u32> {
    match is_half_integer(level) {
        Some(t) if t >= 1 => Ok(t as u32),
        _ => Err(Error::InvalidIndex(format!("hierarchy level J = {level}"))),
    }
}

fn monomials_up_to(two_level: u32) -> Vec<MonomialIndex> {
    let mut out = Vec::new();
    for two_j in 1..=two_level {
        let mut two_m = two_j as i32;
        while two_m >= -(two_j as i32) {
            out.push(MonomialIndex { two_j, two_m });
            two_m -= 2;
        }
    }
    out
}

/// `(T_{½,½}, T_{½,−½}, T_{1,1}, T_{1,0}, T_{1,−1}, …, T_{J,−J})`, of length `J(2J+3)`.
pub fn single_mode_basis(level: f64) -> Result<Vec<MonomialIndex>> {
    Ok(monomials_up_to(level_twice(level)?))
}

/// All `T^A_a T^B_b` with `0 < j_A + j_B ≤ J`, sorted by [`two_mode_order`].
pub fn two_mode_basis(level: f64) -> Result<Vec<TwoModeIndex>> {
    let two_level = level_twice(level)?;
    let mut singles = vec![MonomialIndex::IDENTITY];
    singles.extend(monomials_up_to(two_level));
    let mut out = Vec::new();
    for a in &singles {
        for b in &singles {
            let total = a.two_j + b.two_j;
            if total > 0 && total <= two_level {
                out.push(TwoModeIndex::new(*a, *b));
            }
        }
    }
    out.sort_by(two_mode_order);
    Ok(out)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn power(m: &CMatrix, k: usize) -> CMatrix {
    let mut out = CMatrix::identity(m.nrows(), m.ncols());
    for _ in 0..k {
        out = &out * m;
    }
    out
}

/// `T_jm` on `dim` levels, built by McCoy's rule
/// `Weyl(x^r p^s) = 2^{−s} Σ_k C(s,k) p^k x^r p^{s−k}` with truncated factors.
/// Entries near the truncation corner are not those of the infinite operator.
pub(crate) fn weyl_matrix(idx: MonomialIndex, dim: usize) -> Result<CMatrix> {
    if idx.is_identity() {
        return Ok(CMatrix::identity(dim, dim));
    }
    let (x, p) = quadrature_ops(dim)?;
    let (r, s) = (idx.x_power(), idx.p_power());
    let xr = power(x.data(), r);
    let p_pows: Vec<CMatrix> = (0..=s).map(|k| power(p.data(), k)).collect();
    let mut out = CMatrix::zeros(dim, dim);
    for k in 0..=s {
        let term = &p_pows[k] * &xr * &p_pows[s - k];
        out += term.scale(binomial(s, k));
    }
    let out = out.scale(0.5f64.powi(s as i32));
    Ok((&out + out.adjoint()).scale(0.5))
}

/// Extra levels that keep the low-lying entries of a product of monomials with
/// `Σ 2j = two_total` exact.
pub(crate) fn padding(two_total: u32) -> usize {
    2 * two_total as usize + 2
}

fn restrict(m: &CMatrix, cutoff: usize) -> CMatrix {
    m.view((0, 0), (cutoff, cutoff)).into_owned()
}

/// Hermitian `T_jm` on `cutoff` levels. Entries are the exact matrix elements
/// `⟨a|T_jm|b⟩`, `a, b < cutoff`, of the untruncated operator.
pub fn monomial(idx: MonomialIndex, cutoff: usize) -> Result<FockOperator> {
    if cutoff == 0 {
        return Err(Error::InvalidDimension("zero cutoff".into()));
    }
    let big = weyl_matrix(idx, cutoff + padding(idx.two_j))?;
    FockOperator::single_mode(restrict(&big, cutoff))
}

/// `⟨a|T_x T_y|b⟩` for `a, b < cutoff`, exact (no truncation corner).
pub fn monomial_product_matrix(x: MonomialIndex, y: MonomialIndex, cutoff: usize) -> Result<FockOperator> {
    if cutoff == 0 {
        return Err(Error::InvalidDimension("zero cutoff".into()));
    }
    let dim = cutoff + padding(x.two_j + y.two_j);
    let prod = weyl_matrix(x, dim)? * weyl_matrix(y, dim)?;
    FockOperator::single_mode(restrict(&prod, cutoff))
}

/// `⟨j m, j′ m′ | j″ m″⟩` in the Condon-Shortley convention; zero outside the
/// selection rules. Arguments are half-integers.
pub fn clebsch_gordan(j1: f64, m1: f64, j2: f64, m2: f64, j: f64, m: f64) -> f64 {
    let twice: Option<Vec<i64>> = [j1, m1, j2, m2, j, m].iter().map(|&v| is_half_integer(v)).collect();
    match twice.as_deref() {
        Some(&[a, b, c, d, e, f]) => {
            let (sign, sq) = clebsch_gordan_exact(a, b, c, d, e, f);
            signed_sqrt(sign, &sq)
        }
        _ => 0.0,
    }
}

fn fact(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Expansion `T_a T_b = Σ c_k T_k`, the Moyal product of the Weyl symbols
/// rewritten with Clebsch-Gordan coefficients.
pub fn monomial_product(a: MonomialIndex, b: MonomialIndex) -> Vec<(MonomialIndex, C64)> {
    let (tj1, tm1) = (i64::from(a.two_j), i64::from(a.two_m));
    let (tj2, tm2) = (i64::from(b.two_j), i64::from(b.two_m));
    let tm = tm1 + tm2;
    let mut out = Vec::new();
    let mut tj = (tj1 - tj2).abs();
    while tj <= tj1 + tj2 {
        if tm.abs() <= tj {
            let (sign, cg_sq) = clebsch_gordan_exact(tj1, tm1, tj2, tm2, tj, tm);
            if sign != 0 {
                // every argument below is an integer by the triangle rule
                let num = fact((tj1 + tj2 + tj) / 2 + 1)
                    * fact((tj1 + tm1) / 2)
                    * fact((tj1 - tm1) / 2)
                    * fact((tj2 + tm2) / 2)
                    * fact((tj2 - tm2) / 2);
                let den = BigInt::from(tj + 1)
                    * fact((tj1 + tj2 - tj) / 2)
                    * fact((tj2 + tj - tj1) / 2)
                    * fact((tj + tj1 - tj2) / 2)
                    * fact((tj + tm) / 2)
                    * fact((tj - tm) / 2);
                let magnitude = signed_sqrt(sign, &(cg_sq * BigRational::new(num, den)));
                let n = ((tj1 + tj2 - tj) / 2) as i32;
                let phase = match n.rem_euclid(4) {
                    0 => ONE,
                    1 => C64::new(0.0, 1.0),
                    2 => -ONE,
                    _ => C64::new(0.0, -1.0),
                };
                let coeff = phase * magnitude * 0.5f64.powi(n);
                let idx = MonomialIndex {
                    two_j: tj as u32,
                    two_m: tm as i32,
                };
                out.push((idx, coeff));
            }
        }
        tj += 2;
    }
    out.sort_by_key(|t| std::cmp::Reverse(t.0.two_j));
    out
}

/// `Σ c_k T_k` as a matrix on `cutoff` levels.
pub fn expansion_matrix(terms: &[(MonomialIndex, C64)], cutoff: usize) -> Result<FockOperator> {
    let mut out = CMatrix::from_element(cutoff, cutoff, ZERO);
    for (idx, c) in terms {
        out += monomial(*idx, cutoff)?.data().map(|z| z * c);
    }
    FockOperator::single_mode(out)
}
