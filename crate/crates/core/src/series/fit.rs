use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{ClosedFormSpec, FormKind, IntSequence, PartSpec};

fn rat(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// A polynomial matching a sequence from `threshold` on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyFit {
    pub degree: usize,
    /// Coefficients in the sequence index, constant term first.
    #[serde(serialize_with = "ser_rationals")]
    pub coeffs: Vec<BigRational>,
    pub threshold: usize,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

fn ser_rational<S: serde::Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl PolyFit {
    pub fn eval(&self, x: usize) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(x));
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }
}

/// `s(n) = lead·ratio^n + offset` from `threshold` on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpFit {
    #[serde(serialize_with = "ser_rational")]
    pub ratio: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub lead: BigRational,
    pub offset: i128,
    pub threshold: usize,
}

impl ExpFit {
    pub fn eval(&self, n: usize) -> BigRational {
        &self.lead * num_traits::pow(self.ratio.clone(), n) + rat(self.offset)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PartForm {
    Polynomial(PolyFit),
    Exponential(ExpFit),
}

impl PartForm {
    pub fn threshold(&self) -> usize {
        match self {
            PartForm::Polynomial(p) => p.threshold,
            PartForm::Exponential(e) => e.threshold,
        }
    }

    /// Same expression, ignoring where it starts to hold.
    pub fn same_expression(&self, other: &Self) -> bool {
        match (self, other) {
            (PartForm::Polynomial(a), PartForm::Polynomial(b)) => a.coeffs == b.coeffs,
            (PartForm::Exponential(a), PartForm::Exponential(b)) => {
                a.ratio == b.ratio && a.lead == b.lead && a.offset == b.offset
            }
            _ => false,
        }
    }
}

/// Least `n` such that `fits(m)` for every stored `m ≥ n`.
fn holds_from(s: &IntSequence, fits: impl Fn(usize, i128) -> bool) -> usize {
    let mut threshold = s.end().map_or(s.start(), |e| e + 1);
    for (n, v) in s.indexed().collect::<Vec<_>>().into_iter().rev() {
        if !fits(n, v) {
            break;
        }
        threshold = n;
    }
    threshold
}

/// Interpolating polynomial through `(x0 + j, ys[j])`, in monomial form.
fn interpolate(x0: usize, ys: &[i128]) -> Vec<BigRational> {
    // Newton form over consecutive nodes: p(x) = Σ Δ^j y_0 · C(x − x0, j).
    let mut diffs: Vec<i128> = ys.to_vec();
    let mut coeffs = vec![BigRational::zero(); ys.len()];
    let mut basis = vec![BigRational::one()];
    let mut fact = BigRational::one();
    for j in 0..ys.len() {
        let d = rat(diffs[0]);
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += &d * b / &fact;
        }
        // basis *= (x − x0 − j)
        let shift = rat(-(x0 as i128) - j as i128);
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i] += b * &shift;
            next[i + 1] += b;
        }
        basis = next;
        fact *= rat(j as i128 + 1);
        diffs = diffs.windows(2).map(|w| w[1] - w[0]).collect();
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    coeffs
}

/// Least degree `d ≤ degmax` whose `(d+1)`-th difference vanishes on a
/// trailing run of at least two values. The polynomial is recovered from the
/// last `d + 1` values and the threshold is where agreement begins.
pub fn fit_eventually_polynomial(s: &IntSequence, degmax: usize) -> Option<PolyFit> {
    for d in 0..=degmax {
        let Ok(diff) = s.finite_difference(d + 1) else {
            break;
        };
        let zeros = diff.values().iter().rev().take_while(|&&v| v == 0).count();
        if zeros < 2 {
            continue;
        }
        let last = s.len() - d - 1;
        let coeffs = interpolate(s.start() + last, &s.values()[last..]);
        let fit = PolyFit {
            degree: coeffs.len() - 1,
            coeffs,
            threshold: 0,
        };
        let threshold = holds_from(s, |n, v| fit.eval(n) == rat(v));
        return Some(PolyFit { threshold, ..fit });
    }
    None
}

/// Offsets tried, in order, when fitting `s(n) − c` to a geometric sequence.
const EXP_OFFSETS: [i128; 5] = [0, -1, 1, -2, 2];

/// Eventual form `lead·r^n + c` with `c ∈ {0, ±1, ±2}` and `r ∉ {0, 1}`,
/// needing at least three equal consecutive ratios. A bounded heuristic.
pub fn fit_eventually_exponential(s: &IntSequence) -> Option<ExpFit> {
    for &c in &EXP_OFFSETS {
        let u: Vec<i128> = s.values().iter().map(|v| v - c).collect();
        if u.len() < 4 || u[u.len() - 1] == 0 {
            continue;
        }
        let ratio =
            |i: usize| (u[i - 1] != 0).then(|| BigRational::new(u[i].into(), u[i - 1].into()));
        let Some(r) = ratio(u.len() - 1) else {
            continue;
        };
        if r.is_one() || r.is_zero() {
            continue;
        }
        let equal = (1..u.len())
            .rev()
            .take_while(|&i| ratio(i).as_ref() == Some(&r))
            .count();
        if equal < 3 {
            continue;
        }
        let end = s.end().expect("non-empty");
        let lead = rat(u[u.len() - 1]) / num_traits::pow(r.clone(), end);
        let fit = ExpFit {
            ratio: r,
            lead,
            offset: c,
            threshold: 0,
        };
        let threshold = holds_from(s, |n, v| fit.eval(n) == rat(v));
        return Some(ExpFit { threshold, ..fit });
    }
    None
}

fn fit_any(s: &IntSequence, degmax: usize) -> Option<PartForm> {
    fit_eventually_polynomial(s, degmax)
        .map(PartForm::Polynomial)
        .or_else(|| fit_eventually_exponential(s).map(PartForm::Exponential))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CompositeVerdict {
    Composite {
        k: usize,
        /// Fitted form of each part `t ↦ s(k·t + i)`, in the part index.
        parts: Vec<PartForm>,
        /// Two residues whose forms differ.
        witness: (usize, usize),
    },
    /// A single form fits the whole sequence.
    Single {
        form: PartForm,
    },
    NotComposite {
        kmax: usize,
    },
}

impl CompositeVerdict {
    pub fn modulus(&self) -> Option<usize> {
        match self {
            CompositeVerdict::Composite { k, .. } => Some(*k),
            _ => None,
        }
    }

    /// The fitted parts as a closed form valid from each part's threshold.
    pub fn to_spec(&self) -> Option<ClosedFormSpec> {
        let CompositeVerdict::Composite { k, parts, .. } = self else {
            return None;
        };
        let parts = parts
            .iter()
            .enumerate()
            .map(|(i, form)| {
                let n0 = k * form.threshold() + i;
                let kind = match form {
                    PartForm::Polynomial(p) => FormKind::Polynomial {
                        coeffs: p.coeffs.clone(),
                    },
                    PartForm::Exponential(e) => {
                        // lead·r^t + c with t = (n − i)/k; only integral ratios are representable.
                        if !e.ratio.is_integer() {
                            return None;
                        }
                        let base = e.ratio.to_integer().try_into().ok()?;
                        FormKind::ScaledExponential {
                            a: e.lead.clone(),
                            base,
                            b: i as i64,
                            c: e.offset,
                        }
                    }
                };
                Some(PartSpec {
                    residue: i,
                    form: kind,
                    n0: n0.max(1),
                    exceptions: BTreeMap::new(),
                })
            })
            .collect::<Option<Vec<_>>>()?;
        Some(ClosedFormSpec { k: *k, parts })
    }
}

/// Smallest `k ∈ [2, kmax]` whose residue parts each fit an eventual
/// polynomial (degree ≤ `degmax`) or exponential form, with at least two
/// different forms. Sequences with a single global form are not composite.
pub fn detect_composite(s: &IntSequence, kmax: usize, degmax: usize) -> CompositeVerdict {
    if let Some(form) = fit_any(s, degmax) {
        return CompositeVerdict::Single { form };
    }
    for k in 2..=kmax {
        let Ok(split) = s.split_residues(k) else {
            continue;
        };
        let Some(parts) = split
            .iter()
            .map(|p| fit_any(p, degmax))
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let witness = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .find(|&(i, j)| !parts[i].same_expression(&parts[j]));
        if let Some(witness) = witness {
            return CompositeVerdict::Composite { k, parts, witness };
        }
    }
    CompositeVerdict::NotComposite { kmax }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn polynomial_fits() {
        let lin = IntSequence::tabulate(1, 10, |n| 4 * n as i128);
        let f = fit_eventually_polynomial(&lin, 3).unwrap();
        assert_eq!(f.degree, 1);
        assert_eq!(f.coeffs, vec![r(0, 1), r(4, 1)]);
        assert_eq!(f.threshold, 1);

        let pow2 = IntSequence::tabulate(0, 15, |n| 1 << n);
        for d in 0..6 {
            assert_eq!(fit_eventually_polynomial(&pow2, d), None);
        }

        let quad = IntSequence::tabulate(0, 12, |t| (7 * t * t + 3 * t + 4) as i128 / 2);
        let f = fit_eventually_polynomial(&quad, 3).unwrap();
        assert_eq!(f.coeffs, vec![r(2, 1), r(3, 2), r(7, 2)]);

        let eventually = IntSequence::new(1, vec![2, 4, 7, 8, 8, 8, 8]);
        let f = fit_eventually_polynomial(&eventually, 2).unwrap();
        assert_eq!((f.degree, f.threshold), (0, 4));
    }

    #[test]
    fn exponential_fits() {
        let s = IntSequence::tabulate(2, 10, |t| 23 * (1 << (t - 2)) - 1);
        let f = fit_eventually_exponential(&s).unwrap();
        assert_eq!(
            (f.ratio.clone(), f.lead.clone(), f.offset),
            (r(2, 1), r(23, 4), -1)
        );
        assert_eq!(f.threshold, 2);
        assert_eq!(
            fit_eventually_exponential(&IntSequence::new(0, vec![5; 8])),
            None
        );
        assert_eq!(
            fit_eventually_exponential(&IntSequence::tabulate(0, 8, |n| n as i128)),
            None
        );
    }

    #[test]
    fn composite_detection() {
        let a2 = IntSequence::new(1, vec![2, 4, 7, 8, 9, 8, 9, 8, 9, 8, 9, 8, 9]);
        let v = detect_composite(&a2, 4, 3);
        let CompositeVerdict::Composite { k, parts, .. } = &v else {
            panic!("{v:?}")
        };
        assert_eq!(*k, 2);
        let consts: Vec<_> = parts
            .iter()
            .map(|p| match p {
                PartForm::Polynomial(f) => f.coeffs.clone(),
                _ => panic!(),
            })
            .collect();
        assert_eq!(consts, vec![vec![r(8, 1)], vec![r(9, 1)]]);
        let spec = v.to_spec().unwrap();
        for n in 4..=13 {
            assert_eq!(spec.eval(n).unwrap(), a2.at(n));
        }

        let square = IntSequence::tabulate(1, 20, |n| (n * n + 1) as i128);
        assert!(matches!(
            detect_composite(&square, 4, 3),
            CompositeVerdict::Single { .. }
        ));

        let noise = IntSequence::new(1, vec![3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8]);
        assert_eq!(
            detect_composite(&noise, 3, 2),
            CompositeVerdict::NotComposite { kmax: 3 }
        );
    }
}
