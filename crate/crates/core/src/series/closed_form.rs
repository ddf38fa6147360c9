use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::SeriesError;

/// `Φ_0 = Φ_1 = 1`, `Φ_n = Φ_{n−1} + Φ_{n−2}`.
pub fn fibonacci(n: usize) -> i128 {
    let (mut a, mut b) = (1i128, 1i128);
    for _ in 0..n {
        (a, b) = (
            b,
            a.checked_add(b).expect("Fibonacci number overflows i128"),
        );
    }
    a
}

/// `C(n, k)`, zero when `k > n` or `n < 0`.
pub fn binomial(n: i64, k: i64) -> i128 {
    if n < 0 || k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1i128;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc
}

/// One expression of a part function, in the part index `t = (n − r)/k`
/// unless stated otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormKind {
    /// `Σ c_j·t^j`, coefficients from the constant term up.
    Polynomial { coeffs: Vec<BigRational> },
    /// `a·base^{(n − b)/k} + c`, in the original index `n`.
    ScaledExponential {
        a: BigRational,
        base: i64,
        b: i64,
        c: i128,
    },
    /// `Σ_{i=0}^{m−2} C(n, i) + Σ_{i≥0} C(n − 2i − 1, m − 2)`, in `n`.
    BinomialSum { m: usize },
    /// `Σ coef·Φ_{t+shift} + linear·n + constant`.
    Fibonacci {
        terms: Vec<(i128, usize)>,
        linear: i128,
        constant: i128,
    },
}

fn to_int(v: BigRational) -> Result<i128, SeriesError> {
    if !v.is_integer() {
        return Err(SeriesError::Malformed(format!("non-integer value {v}")));
    }
    v.to_integer().to_i128().ok_or(SeriesError::Overflow)
}

impl FormKind {
    fn eval(&self, n: usize, t: usize, k: usize) -> Result<i128, SeriesError> {
        match self {
            FormKind::Polynomial { coeffs } => {
                let t = BigRational::from_integer(BigInt::from(t));
                let mut acc = BigRational::zero();
                for c in coeffs.iter().rev() {
                    acc = acc * &t + c;
                }
                to_int(acc)
            }
            FormKind::ScaledExponential { a, base, b, c } => {
                let shifted = n as i64 - b;
                if shifted.rem_euclid(k as i64) != 0 {
                    return Err(SeriesError::Malformed(format!(
                        "exponent ({n} - {b})/{k} is not an integer"
                    )));
                }
                let e = shifted.div_euclid(k as i64);
                let base = BigRational::from_integer(BigInt::from(*base));
                let p = if e >= 0 {
                    num_traits::pow(base, e as usize)
                } else {
                    num_traits::pow(base.recip(), (-e) as usize)
                };
                Ok(to_int(a * p)? + c)
            }
            FormKind::BinomialSum { m } => {
                let (n, m) = (n as i64, *m as i64);
                let head: i128 = (0..=m - 2).map(|i| binomial(n, i)).sum();
                let tail: i128 = (0..)
                    .map(|i| n - 2 * i - 1)
                    .take_while(|&top| top >= m - 2)
                    .map(|top| binomial(top, m - 2))
                    .sum();
                Ok(head + tail)
            }
            FormKind::Fibonacci {
                terms,
                linear,
                constant,
            } => {
                let fib: i128 = terms
                    .iter()
                    .map(|&(coef, shift)| coef * fibonacci(t + shift))
                    .sum();
                Ok(fib + linear * n as i128 + constant)
            }
        }
    }

    fn kind_name(&self) -> &'static str {
        match self {
            FormKind::Polynomial { .. } => "polynomial",
            FormKind::ScaledExponential { .. } => "scaled-exponential",
            FormKind::BinomialSum { .. } => "binomial-sum",
            FormKind::Fibonacci { .. } => "fibonacci",
        }
    }

    fn params(&self) -> Value {
        match self {
            FormKind::Polynomial { coeffs } => {
                json!({ "coeffs": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>() })
            }
            FormKind::ScaledExponential { a, base, b, c } => {
                json!({ "a": a.to_string(), "base": base, "b": b, "c": c.to_string() })
            }
            FormKind::BinomialSum { m } => json!({ "m": m }),
            FormKind::Fibonacci {
                terms,
                linear,
                constant,
            } => json!({
                "terms": terms.iter().map(|(c, s)| json!({ "coef": c.to_string(), "shift": s })).collect::<Vec<_>>(),
                "linear": linear.to_string(),
                "constant": constant.to_string(),
            }),
        }
    }

    fn from_parts(kind: &str, params: &Value) -> Result<Self, SeriesError> {
        let field = |name: &str| {
            params
                .get(name)
                .ok_or_else(|| SeriesError::Malformed(format!("missing `{name}`")))
        };
        Ok(match kind {
            "polynomial" => FormKind::Polynomial {
                coeffs: field("coeffs")?
                    .as_array()
                    .ok_or_else(|| SeriesError::Malformed("`coeffs` must be an array".into()))?
                    .iter()
                    .map(parse_rational)
                    .collect::<Result<_, _>>()?,
            },
            "scaled-exponential" => FormKind::ScaledExponential {
                a: parse_rational(field("a")?)?,
                base: params.get("base").map_or(Ok(2), parse_i128)? as i64,
                b: parse_i128(field("b")?)? as i64,
                c: parse_i128(field("c")?)?,
            },
            "binomial-sum" => FormKind::BinomialSum {
                m: parse_i128(field("m")?)? as usize,
            },
            "fibonacci" => FormKind::Fibonacci {
                terms: field("terms")?
                    .as_array()
                    .ok_or_else(|| SeriesError::Malformed("`terms` must be an array".into()))?
                    .iter()
                    .map(|t| {
                        let coef = parse_i128(
                            t.get("coef")
                                .ok_or_else(|| SeriesError::Malformed("missing `coef`".into()))?,
                        )?;
                        let shift =
                            parse_i128(t.get("shift").ok_or_else(|| {
                                SeriesError::Malformed("missing `shift`".into())
                            })?)?;
                        Ok((coef, shift as usize))
                    })
                    .collect::<Result<_, SeriesError>>()?,
                linear: parse_i128(field("linear")?)?,
                constant: parse_i128(field("constant")?)?,
            },
            other => return Err(SeriesError::UnknownForm(other.to_owned())),
        })
    }
}

fn parse_rational(v: &Value) -> Result<BigRational, SeriesError> {
    let bad = || SeriesError::Malformed(format!("not a rational: {v}"));
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| BigRational::from_integer(i.into()))
            .ok_or_else(bad),
        Value::String(s) => {
            let (num, den) = s.split_once('/').unwrap_or((s.as_str(), "1"));
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(num, den))
        }
        _ => Err(bad()),
    }
}

fn parse_i128(v: &Value) -> Result<i128, SeriesError> {
    let r = parse_rational(v)?;
    to_int(r)
}

/// One residue class of a [`ClosedFormSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PartRepr", into = "PartRepr")]
pub struct PartSpec {
    pub residue: usize,
    pub form: FormKind,
    /// Least `n` in this residue class from which `form` applies.
    pub n0: usize,
    /// Values for `n < n0` (or overriding the form).
    pub exceptions: BTreeMap<usize, i128>,
}

#[derive(Serialize, Deserialize)]
struct PartRepr {
    residue: usize,
    kind: String,
    params: Value,
    n0: usize,
    #[serde(default)]
    exceptions: BTreeMap<String, Value>,
}

impl TryFrom<PartRepr> for PartSpec {
    type Error = SeriesError;
    fn try_from(r: PartRepr) -> Result<Self, Self::Error> {
        let exceptions = r
            .exceptions
            .iter()
            .map(|(k, v)| {
                let n = k
                    .parse()
                    .map_err(|_| SeriesError::Malformed(format!("bad exception index `{k}`")))?;
                Ok((n, parse_i128(v)?))
            })
            .collect::<Result<_, SeriesError>>()?;
        Ok(PartSpec {
            residue: r.residue,
            form: FormKind::from_parts(&r.kind, &r.params)?,
            n0: r.n0,
            exceptions,
        })
    }
}

impl From<PartSpec> for PartRepr {
    fn from(p: PartSpec) -> Self {
        PartRepr {
            residue: p.residue,
            kind: p.form.kind_name().to_owned(),
            params: p.form.params(),
            n0: p.n0,
            exceptions: p
                .exceptions
                .iter()
                .map(|(n, v)| (n.to_string(), Value::String(v.to_string())))
                .collect(),
        }
    }
}

/// A function of `n ≥ 1` given by one expression per residue class mod `k`,
/// with explicit values below each expression's threshold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormSpec {
    pub k: usize,
    pub parts: Vec<PartSpec>,
}

fn poly(coeffs: &[(i64, i64)]) -> FormKind {
    FormKind::Polynomial {
        coeffs: coeffs
            .iter()
            .map(|&(p, q)| BigRational::new(p.into(), q.into()))
            .collect(),
    }
}

fn ints(pairs: &[(usize, i128)]) -> BTreeMap<usize, i128> {
    pairs.iter().copied().collect()
}

impl ClosedFormSpec {
    pub fn eval(&self, n: usize) -> Result<i128, SeriesError> {
        if n == 0 {
            return Err(SeriesError::BelowRange { n, min: 1 });
        }
        let r = n % self.k;
        let part = self
            .parts
            .iter()
            .find(|p| p.residue == r)
            .ok_or_else(|| SeriesError::Malformed(format!("no part for residue {r}")))?;
        if let Some(&v) = part.exceptions.get(&n) {
            return Ok(v);
        }
        if n < part.n0 {
            return Err(SeriesError::BelowRange { n, min: part.n0 });
        }
        part.form.eval(n, (n - r) / self.k, self.k)
    }

    /// Values on `from..=to`.
    pub fn tabulate(&self, from: usize, to: usize) -> Result<super::IntSequence, SeriesError> {
        (from..=to)
            .map(|n| self.eval(n))
            .collect::<Result<Vec<_>, _>>()
            .map(|v| super::IntSequence::new(from, v))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("closed forms serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, SeriesError> {
        let spec: Self =
            serde_json::from_str(text).map_err(|e| SeriesError::Malformed(e.to_string()))?;
        if spec.k == 0 || (0..spec.k).any(|r| !spec.parts.iter().any(|p| p.residue == r)) {
            return Err(SeriesError::Malformed("every residue needs a part".into()));
        }
        Ok(spec)
    }

    /// A constant function.
    pub fn constant(value: i128) -> Self {
        Self {
            k: 1,
            parts: vec![PartSpec {
                residue: 0,
                form: poly(&[(value as i64, 1)]),
                n0: 1,
                exceptions: BTreeMap::new(),
            }],
        }
    }

    /// `23·2^{(n−4)/2} − 1` for even `n ≥ 4`, `32·2^{(n−5)/2} − 1` for odd
    /// `n ≥ 5`, starting values 3, 8, 14.
    pub fn a1() -> Self {
        let exp = |a: i64, b: i64| FormKind::ScaledExponential {
            a: BigRational::from_integer(a.into()),
            base: 2,
            b,
            c: -1,
        };
        Self {
            k: 2,
            parts: vec![
                PartSpec {
                    residue: 0,
                    form: exp(23, 4),
                    n0: 4,
                    exceptions: ints(&[(2, 8)]),
                },
                PartSpec {
                    residue: 1,
                    form: exp(32, 5),
                    n0: 5,
                    exceptions: ints(&[(1, 3), (3, 14)]),
                },
            ],
        }
    }

    /// 2, 4, 7, then 8 at even and 9 at odd `n`.
    pub fn a2() -> Self {
        Self {
            k: 2,
            parts: vec![
                PartSpec {
                    residue: 0,
                    form: poly(&[(8, 1)]),
                    n0: 4,
                    exceptions: ints(&[(2, 4)]),
                },
                PartSpec {
                    residue: 1,
                    form: poly(&[(9, 1)]),
                    n0: 5,
                    exceptions: ints(&[(1, 2), (3, 7)]),
                },
            ],
        }
    }

    /// `4t` at `n = 2t`, `5t + 1` at `n = 2t + 1`, `γ(1) = 2`.
    pub fn a3() -> Self {
        Self {
            k: 2,
            parts: vec![
                PartSpec {
                    residue: 0,
                    form: poly(&[(0, 1), (4, 1)]),
                    n0: 2,
                    exceptions: BTreeMap::new(),
                },
                PartSpec {
                    residue: 1,
                    form: poly(&[(1, 1), (5, 1)]),
                    n0: 3,
                    exceptions: ints(&[(1, 2)]),
                },
            ],
        }
    }

    /// `4t² − 5t + 6` at `n = 2t ≥ 4`, `(7/2)t² + (3/2)t + 2` at `n = 2t + 1`,
    /// `γ(2) = 4`.
    pub fn a4() -> Self {
        Self {
            k: 2,
            parts: vec![
                PartSpec {
                    residue: 0,
                    form: poly(&[(6, 1), (-5, 1), (4, 1)]),
                    n0: 4,
                    exceptions: ints(&[(2, 4)]),
                },
                PartSpec {
                    residue: 1,
                    form: poly(&[(2, 1), (3, 2), (7, 2)]),
                    n0: 1,
                    exceptions: BTreeMap::new(),
                },
            ],
        }
    }

    /// The binomial-sum growth of `B_m`.
    pub fn bm(m: usize) -> Self {
        Self {
            k: 1,
            parts: vec![PartSpec {
                residue: 0,
                form: FormKind::BinomialSum { m },
                n0: 1,
                exceptions: BTreeMap::new(),
            }],
        }
    }

    /// `B_3` in the polynomial form `¼n² + n + 1` (even `n`), `¼n² + n + ¾`
    /// (odd `n`), written in the part index.
    pub fn b3_polynomial() -> Self {
        Self {
            k: 2,
            parts: vec![
                PartSpec {
                    residue: 0,
                    form: poly(&[(1, 1), (2, 1), (1, 1)]),
                    n0: 2,
                    exceptions: BTreeMap::new(),
                },
                PartSpec {
                    residue: 1,
                    form: poly(&[(2, 1), (3, 1), (1, 1)]),
                    n0: 1,
                    exceptions: BTreeMap::new(),
                },
            ],
        }
    }

    /// `Φ_{t+6} + Φ_{t+4} − 2n − 18` at even `n`, `Φ_{t+6} + 2Φ_{t+4} − 2n − 18`
    /// at odd `n`, with `t = ⌊n/2⌋`.
    pub fn a6() -> Self {
        let fib = |c: i128| FormKind::Fibonacci {
            terms: vec![(1, 6), (c, 4)],
            linear: -2,
            constant: -18,
        };
        Self {
            k: 2,
            parts: vec![
                PartSpec {
                    residue: 0,
                    form: fib(1),
                    n0: 2,
                    exceptions: BTreeMap::new(),
                },
                PartSpec {
                    residue: 1,
                    form: fib(2),
                    n0: 1,
                    exceptions: BTreeMap::new(),
                },
            ],
        }
    }

    /// Built-in forms by name: `a1`..`a4`, `a6`, `b<m>` and `b3-polynomial`.
    pub fn builtin(name: &str) -> Result<Self, SeriesError> {
        match name {
            "a1" => Ok(Self::a1()),
            "a2" => Ok(Self::a2()),
            "a3" => Ok(Self::a3()),
            "a4" => Ok(Self::a4()),
            "a6" => Ok(Self::a6()),
            "b3-polynomial" => Ok(Self::b3_polynomial()),
            _ => match name.strip_prefix('b').and_then(|m| m.parse::<usize>().ok()) {
                Some(m) if m >= 3 => Ok(Self::bm(m)),
                _ => Err(SeriesError::UnknownForm(name.to_owned())),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_and_binomial() {
        assert_eq!(fibonacci(0), 1);
        assert_eq!(fibonacci(1), 1);
        assert_eq!(fibonacci(5), 8);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(-1, 0), 0);
        assert_eq!(binomial(4, 4), 1);
    }

    #[test]
    fn builtin_values() {
        assert_eq!(ClosedFormSpec::a1().eval(5).unwrap(), 31);
        assert_eq!(ClosedFormSpec::a1().eval(3).unwrap(), 14);
        assert_eq!(
            ClosedFormSpec::a1().tabulate(1, 8).unwrap().values(),
            &[3, 8, 14, 22, 31, 45, 63, 91]
        );
        assert_eq!(ClosedFormSpec::a6().eval(1).unwrap(), 3);
        assert_eq!(ClosedFormSpec::a6().eval(2).unwrap(), 7);
        assert_eq!(ClosedFormSpec::bm(3).eval(4).unwrap(), 9);
        assert_eq!(ClosedFormSpec::bm(3).eval(3).unwrap(), 6);
        assert_eq!(
            ClosedFormSpec::a2().tabulate(1, 8).unwrap().values(),
            &[2, 4, 7, 8, 9, 8, 9, 8]
        );
        assert_eq!(ClosedFormSpec::a4().eval(26).unwrap(), 617);
        assert_eq!(ClosedFormSpec::a4().eval(27).unwrap(), 613);
        assert_eq!(ClosedFormSpec::a3().eval(9).unwrap(), 21);
        assert_eq!(ClosedFormSpec::a3().eval(10).unwrap(), 20);
        assert!(matches!(
            ClosedFormSpec::a1().eval(0),
            Err(SeriesError::BelowRange { .. })
        ));
        assert!(ClosedFormSpec::builtin("b2").is_err());
        assert_eq!(
            ClosedFormSpec::builtin("b5").unwrap(),
            ClosedFormSpec::bm(5)
        );
    }

    #[test]
    fn b3_forms_agree() {
        let a = ClosedFormSpec::bm(3).tabulate(1, 40).unwrap();
        let b = ClosedFormSpec::b3_polynomial().tabulate(1, 40).unwrap();
        assert_eq!(a, b);
        // ¼n² + n + 1 at even n, computed directly.
        for n in (2..=40usize).step_by(2) {
            assert_eq!(a.at(n), (n * n / 4 + n + 1) as i128);
        }
    }

    /// The binomial sum with the alternative convention `C(n, k) = 0` for
    /// `k ≥ n` disagrees with the polynomial form at `n = 2`.
    #[test]
    fn stated_zero_convention_conflicts() {
        let alt = |n: i64, k: i64| if k >= n { 0 } else { binomial(n, k) };
        let n = 2i64;
        let v: i128 = (0..=1).map(|i| alt(n, i)).sum::<i128>()
            + (0..)
                .map(|i| n - 2 * i - 1)
                .take_while(|&t| t >= 0)
                .map(|t| alt(t, 1))
                .sum::<i128>();
        assert_eq!(v, 3);
        assert_eq!(ClosedFormSpec::b3_polynomial().eval(2).unwrap(), 4);
    }

    #[test]
    fn json_round_trip() {
        for spec in [
            ClosedFormSpec::a1(),
            ClosedFormSpec::a4(),
            ClosedFormSpec::bm(4),
            ClosedFormSpec::a6(),
        ] {
            let text = spec.to_json();
            assert_eq!(ClosedFormSpec::from_json(&text).unwrap(), spec);
        }
        let text = r#"{"k":1,"parts":[{"residue":0,"kind":"polynomial","params":{"coeffs":[1,"1/2"]},"n0":1,"exceptions":{"1":5}}]}"#;
        let spec = ClosedFormSpec::from_json(text).unwrap();
        assert_eq!(spec.eval(1).unwrap(), 5);
        assert_eq!(spec.eval(4).unwrap(), 3);
        assert!(spec.eval(3).is_err());
        assert!(ClosedFormSpec::from_json(r#"{"k":2,"parts":[]}"#).is_err());
    }
}
