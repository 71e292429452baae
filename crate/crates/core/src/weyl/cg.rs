//! Exact Clebsch-Gordan coefficients (Condon-Shortley phase) from the Racah formula.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

fn factorial(n: i64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn half(two: i64) -> Option<i64> {
    (two % 2 == 0).then_some(two / 2)
}

/// `⟨j1 m1, j2 m2 | j m⟩` with every argument given as twice its value,
/// returned as `(sign, square)` in exact arithmetic. Zero when any selection
/// rule fails.
pub(crate) fn clebsch_gordan_exact(
    two_j1: i64,
    two_m1: i64,
    two_j2: i64,
    two_m2: i64,
    two_j: i64,
    two_m: i64,
) -> (i32, BigRational) {
    let zero = (0, BigRational::zero());
    if two_j1 < 0 || two_j2 < 0 || two_j < 0 || two_m1 + two_m2 != two_m {
        return zero;
    }
    if two_m1.abs() > two_j1 || two_m2.abs() > two_j2 || two_m.abs() > two_j {
        return zero;
    }
    let parts = (
        half(two_j1 + two_j2 - two_j),
        half(two_j1 - two_j2 + two_j),
        half(-two_j1 + two_j2 + two_j),
        half(two_j1 + two_j2 + two_j),
        half(two_j1 + two_m1),
        half(two_j2 + two_m2),
        half(two_j + two_m),
    );
    let (Some(a), Some(b), Some(c), Some(total), Some(_), Some(_), Some(_)) = parts else {
        return zero;
    };
    if a < 0 || b < 0 || c < 0 {
        return zero;
    }
    let j1m = (two_j1 - two_m1) / 2;
    let j1p = (two_j1 + two_m1) / 2;
    let j2m = (two_j2 - two_m2) / 2;
    let j2p = (two_j2 + two_m2) / 2;
    let jm = (two_j - two_m) / 2;
    let jp = (two_j + two_m) / 2;

    let num = BigInt::from(two_j + 1)
        * factorial(a)
        * factorial(b)
        * factorial(c)
        * factorial(jp)
        * factorial(jm)
        * factorial(j1m)
        * factorial(j1p)
        * factorial(j2m)
        * factorial(j2p);
    let prefactor = BigRational::new(num, factorial(total + 1));

    // j − j2 + m1 = (two_j − two_j2 + two_m1)/2, j − j1 − m2 likewise
    let s1 = (two_j - two_j2 + two_m1) / 2;
    let s2 = (two_j - two_j1 - two_m2) / 2;
    let mut sum = BigRational::zero();
    for k in 0..=a {
        let dens = [k, a - k, j1m - k, j2p - k, s1 + k, s2 + k];
        if dens.iter().any(|&v| v < 0) {
            continue;
        }
        let den = dens.iter().fold(BigInt::one(), |acc, &v| acc * factorial(v));
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return zero;
    }
    let sign = if sum.is_negative() { -1 } else { 1 };
    (sign, prefactor * &sum * &sum)
}

pub(crate) fn signed_sqrt(sign: i32, square: &BigRational) -> f64 {
    f64::from(sign) * square.to_f64().unwrap_or(f64::NAN).sqrt()
}
