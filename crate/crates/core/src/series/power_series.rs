use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{IntSequence, SeriesError};

/// A formal power series truncated after `X^N`, with exact rational
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

fn rat(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl PowerSeries {
    pub fn zero(degree: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); degree + 1],
        }
    }

    pub fn one(degree: usize) -> Self {
        Self::monomial(degree, 0, 1)
    }

    /// `c·X^k` truncated at `degree`.
    pub fn monomial(degree: usize, k: usize, c: i128) -> Self {
        let mut s = Self::zero(degree);
        if k <= degree {
            s.coeffs[k] = rat(c);
        }
        s
    }

    /// A polynomial given by integer coefficients from the constant term up,
    /// truncated or padded to `degree`.
    pub fn from_ints(coeffs: &[i128], degree: usize) -> Self {
        let mut s = Self::zero(degree);
        for (slot, &c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = rat(c);
        }
        s
    }

    pub fn from_rationals(mut coeffs: Vec<BigRational>, degree: usize) -> Self {
        coeffs.resize(degree + 1, BigRational::zero());
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficients as an integer sequence from index 0.
    pub fn to_int_sequence(&self) -> Result<IntSequence, SeriesError> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if !c.is_integer() {
                    return Err(SeriesError::NotInteger(n));
                }
                c.to_integer().to_i128().ok_or(SeriesError::Overflow)
            })
            .collect::<Result<Vec<_>, _>>()
            .map(|v| IntSequence::new(0, v))
    }

    fn check_degree(&self, other: &Self) {
        assert_eq!(self.degree(), other.degree(), "truncation degrees differ");
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let n = self.degree();
        let inv0 = c0.recip();
        let mut out = vec![BigRational::zero(); n + 1];
        out[0] = inv0.clone();
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &out[k - j];
                }
            }
            out[k] = -(acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self * &other.inverse()?)
    }

    /// `(1 − X)·self`, the passage from cumulative to word growth series.
    pub fn times_one_minus_x(&self) -> Self {
        let mut out = self.coeffs.clone();
        for k in (1..out.len()).rev() {
            out[k] = &self.coeffs[k] - &self.coeffs[k - 1];
        }
        Self { coeffs: out }
    }

    /// CSV `n,coefficient`; non-integer coefficients print as `p/q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,coefficient\n");
        for (n, c) in self.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{n},{c}");
        }
        out
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        self.check_degree(rhs);
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        self.check_degree(rhs);
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        self.check_degree(rhs);
        let n = self.degree();
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        PowerSeries { coeffs: out }
    }
}

/// Expansion of `numer / denom` to degree `n`. Polynomials are given by
/// integer coefficients from the constant term up.
pub fn expand_rational(
    numer: &[i128],
    denom: &[i128],
    n: usize,
) -> Result<PowerSeries, SeriesError> {
    if denom.first().is_none_or(|c| *c == 0) {
        return Err(SeriesError::ZeroConstantTerm);
    }
    PowerSeries::from_ints(numer, n).div(&PowerSeries::from_ints(denom, n))
}

/// The nested series
/// `1/(1−X)² · (1 + X/(1−X)·(1 + X²/(1−X²)·(1 + X⁴/(1−X⁴)·(…))))`
/// to degree `n`. Levels with `2^j > n` contribute nothing below `X^{n+1}`,
/// so the nest starts from the innermost such level.
pub fn expand_a5_gamma(n: usize) -> PowerSeries {
    let mut depth = 0;
    while (1usize << depth) <= n {
        depth += 1;
    }
    let mut inner = PowerSeries::one(n);
    for j in (0..depth).rev() {
        let step = 1usize << j;
        let geometric = (&PowerSeries::one(n) - &PowerSeries::monomial(n, step, 1))
            .inverse()
            .expect("constant term is 1");
        let factor = &PowerSeries::monomial(n, step, 1) * &geometric;
        inner = &PowerSeries::one(n) + &(&factor * &inner);
    }
    let denom = PowerSeries::from_ints(&[1, -2, 1], n);
    inner.div(&denom).expect("constant term is 1")
}

/// `R(X) = (1 + X + X³)/(1 − X² − X⁴)`, shared by both growth series of A₆.
fn a6_core(n: usize) -> PowerSeries {
    expand_rational(&[1, 1, 0, 1], &[1, 0, -1, 0, -1], n).expect("constant term is 1")
}

/// Growth series of the automaton A₆: `(2X − 1 + R(X))/(1 − X)²`.
pub fn expand_a6_gamma(n: usize) -> PowerSeries {
    let num = &PowerSeries::from_ints(&[-1, 2], n) + &a6_core(n);
    num.div(&PowerSeries::from_ints(&[1, -2, 1], n))
        .expect("constant term is 1")
}

/// Cumulative growth series of the semigroup of A₆ with the identity at
/// length 0: `(X + R(X))/(1 − X)²`.
pub fn expand_a6_semigroup_gamma(n: usize) -> PowerSeries {
    let num = &PowerSeries::from_ints(&[0, 1], n) + &a6_core(n);
    num.div(&PowerSeries::from_ints(&[1, -2, 1], n))
        .expect("constant term is 1")
}

/// Whether `(1 − X)·gamma` has coefficient `delta(n)` at every index of
/// `delta`, and vanishes below `delta`'s first index.
pub fn check_delta_gamma(gamma: &PowerSeries, delta: &IntSequence) -> bool {
    let word = gamma.times_one_minus_x();
    let Some(end) = delta.end() else { return false };
    if end > gamma.degree() {
        return false;
    }
    delta.indexed().all(|(n, d)| word.coefficient(n) == &rat(d))
        && (0..delta.start()).all(|n| word.coefficient(n).is_zero())
}

/// `1 / (1 − X)^k` to degree `n`.
pub fn inverse_power_of_one_minus_x(k: usize, n: usize) -> PowerSeries {
    let base = PowerSeries::from_ints(&[1, -1], n)
        .inverse()
        .expect("constant term is 1");
    (0..k).fold(PowerSeries::one(n), |acc, _| &acc * &base)
}

impl PowerSeries {
    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &PowerSeries) -> Vec<i128> {
        s.to_int_sequence().unwrap().values().to_vec()
    }

    #[test]
    fn rational_expansion() {
        assert_eq!(
            ints(&expand_rational(&[1, 1], &[1, -1], 5).unwrap()),
            vec![1, 2, 2, 2, 2, 2]
        );
        assert_eq!(
            expand_rational(&[1], &[0, 1], 3),
            Err(SeriesError::ZeroConstantTerm)
        );
        // 1/(1 − X − X²) gives the Fibonacci numbers.
        assert_eq!(
            ints(&expand_rational(&[1], &[1, -1, -1], 6).unwrap()),
            vec![1, 1, 2, 3, 5, 8, 13]
        );
        let half = expand_rational(&[1], &[2], 2).unwrap();
        assert!(half.to_int_sequence().is_err());
        assert_eq!(half.to_csv(), "n,coefficient\n0,1/2\n1,0\n2,0\n");
    }

    #[test]
    fn inverse_round_trip() {
        let p = PowerSeries::from_ints(&[3, -1, 4, 1, -5], 8);
        assert!((&p * &p.inverse().unwrap()).is_one());
        assert_eq!(
            ints(&inverse_power_of_one_minus_x(2, 4)),
            vec![1, 2, 3, 4, 5]
        );
    }

    #[test]
    fn a5_series_head() {
        assert_eq!(ints(&expand_a5_gamma(4)), vec![1, 3, 6, 11, 18]);
        assert_eq!(ints(&expand_a5_gamma(0)), vec![1]);
        // Deeper truncation agrees on the shared prefix.
        let long = ints(&expand_a5_gamma(40));
        assert_eq!(
            &long[..13],
            &[1, 3, 6, 11, 18, 28, 41, 59, 82, 112, 149, 196, 253]
        );
    }

    #[test]
    fn a6_series() {
        let a = ints(&expand_a6_gamma(13));
        assert_eq!(
            a,
            vec![0, 3, 7, 13, 21, 32, 46, 65, 89, 121, 161, 214, 280, 367]
        );
        let s = ints(&expand_a6_semigroup_gamma(13));
        for n in 0..=13 {
            assert_eq!(s[n], a[n] + 1);
        }
    }

    #[test]
    fn delta_gamma_identity() {
        let gamma = PowerSeries::from_ints(&[0, 3, 8, 14], 3);
        assert!(check_delta_gamma(
            &gamma,
            &IntSequence::new(1, vec![3, 5, 6])
        ));
        assert!(check_delta_gamma(
            &gamma,
            &IntSequence::new(0, vec![0, 3, 5, 6])
        ));
        assert!(!check_delta_gamma(
            &gamma,
            &IntSequence::new(1, vec![3, 4, 6])
        ));
        assert!(!check_delta_gamma(
            &gamma,
            &IntSequence::new(1, vec![3, 5, 6, 0])
        ));
    }
}
