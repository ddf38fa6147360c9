//! Normal-form grammars: parameterized word templates whose side conditions
//! and excluded combinations are plain data.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::series::IntSequence;

/// How a power's exponent depends on its parameter `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exponent {
    /// `scale·p + offset`.
    Linear { scale: usize, offset: usize },
    /// `2^j·p + 2^j − 1`, where `j` counts down to 1 over the iterations of
    /// the innermost enclosing repeat.
    Dyadic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Part {
    Lit(Vec<u32>),
    /// One of several words; `var` records the chosen index.
    Choice {
        #[serde(default)]
        var: Option<String>,
        options: Vec<Vec<u32>>,
    },
    /// `base` raised to the exponent of `p`, for `p ≥ min` (and `≤ max`).
    Pow {
        #[serde(default)]
        var: Option<String>,
        base: Vec<u32>,
        min: usize,
        #[serde(default)]
        max: Option<usize>,
        exponent: Exponent,
    },
    /// `body` repeated `c` times with fresh parameters each time.
    Repeat {
        #[serde(default)]
        var: Option<String>,
        min: usize,
        #[serde(default)]
        max: Option<usize>,
        body: Vec<Part>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alternative {
    pub label: String,
    pub parts: Vec<Part>,
    /// Parameter combinations that are not normal forms.
    #[serde(default)]
    pub exclusions: Vec<BTreeMap<String, usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalFormGrammar {
    pub name: String,
    /// Whether the empty word counts (length 0).
    pub include_empty: bool,
    pub alternatives: Vec<Alternative>,
}

fn pow(var: &str, base: &[u32], min: usize) -> Part {
    Part::Pow {
        var: Some(var.into()),
        base: base.to_vec(),
        min,
        max: None,
        exponent: Exponent::Linear {
            scale: 1,
            offset: 0,
        },
    }
}

fn anon_pow(base: &[u32], min: usize) -> Part {
    Part::Pow {
        var: None,
        base: base.to_vec(),
        min,
        max: None,
        exponent: Exponent::Linear {
            scale: 1,
            offset: 0,
        },
    }
}

fn choice(var: &str, options: &[&[u32]]) -> Part {
    Part::Choice {
        var: Some(var.into()),
        options: options.iter().map(|o| o.to_vec()).collect(),
    }
}

impl NormalFormGrammar {
    /// Minimal-length representatives for `A4`, with generators `f0 = 0`,
    /// `f1 = 1`.
    pub fn a4() -> Self {
        let tails: &[&[u32]] = &[&[], &[1], &[0], &[0, 0]];
        Self {
            name: "a4".into(),
            include_empty: false,
            alternatives: vec![
                Alternative {
                    label: "f0 f1^(2p1) (f0 f1)^p2 s".into(),
                    parts: vec![
                        Part::Lit(vec![0]),
                        Part::Pow {
                            var: Some("p1".into()),
                            base: vec![1],
                            min: 1,
                            max: None,
                            exponent: Exponent::Linear {
                                scale: 2,
                                offset: 0,
                            },
                        },
                        pow("p2", &[0, 1], 0),
                        choice("s", tails),
                    ],
                    exclusions: vec![BTreeMap::from([
                        ("p1".into(), 1),
                        ("p2".into(), 0),
                        ("s".into(), 0),
                    ])],
                },
                Alternative {
                    label: "f1^p1 (f0 f1)^p2 s, p2 >= 1".into(),
                    parts: vec![
                        pow("p1", &[1], 0),
                        pow("p2", &[0, 1], 1),
                        choice("s", tails),
                    ],
                    exclusions: vec![],
                },
                Alternative {
                    label: "f1^p1 s, s nonempty".into(),
                    parts: vec![pow("p1", &[1], 0), choice("s", &tails[1..])],
                    exclusions: vec![],
                },
            ],
        }
    }

    /// The alternating `(f0 f2)`/`(f1 f0)` block form for `A1`.
    pub fn a1() -> Self {
        let heads: &[&[u32]] = &[&[], &[0], &[2]];
        let tails: &[&[u32]] = &[
            &[],
            &[0],
            &[1],
            &[1, 1],
            &[1, 0, 0, 0],
            &[0, 2, 2],
            &[0, 2, 1, 0, 2],
        ];
        Self {
            name: "a1".into(),
            include_empty: false,
            alternatives: vec![
                Alternative {
                    label: "one block pair".into(),
                    parts: vec![
                        choice("head", heads),
                        pow("p1", &[0, 2], 0),
                        pow("p2", &[1, 0], 0),
                        choice("tail", tails),
                    ],
                    exclusions: vec![],
                },
                Alternative {
                    label: "several block pairs".into(),
                    parts: vec![
                        choice("head", heads),
                        pow("p1", &[0, 2], 0),
                        anon_pow(&[1, 0], 1),
                        Part::Repeat {
                            var: None,
                            min: 0,
                            max: None,
                            body: vec![anon_pow(&[0, 2], 1), anon_pow(&[1, 0], 1)],
                        },
                        anon_pow(&[0, 2], 1),
                        pow("last", &[1, 0], 0),
                        choice("tail", tails),
                    ],
                    exclusions: vec![],
                },
            ],
        }
    }

    /// Normal forms for `B_m`, `m ≥ 3`.
    pub fn bm(m: usize) -> Self {
        assert!(m >= 3, "B_m needs m >= 3");
        let block = || vec![Part::Lit(vec![1]), anon_pow(&[0], 0)];
        Self {
            name: format!("b{m}"),
            include_empty: false,
            alternatives: vec![
                Alternative {
                    label: "at most m-2 letters f1".into(),
                    parts: vec![
                        anon_pow(&[0], 0),
                        Part::Repeat {
                            var: Some("k".into()),
                            min: 0,
                            max: Some(m - 2),
                            body: block(),
                        },
                    ],
                    exclusions: vec![],
                },
                Alternative {
                    label: "m-1 letters f1 with an even gap".into(),
                    parts: vec![
                        anon_pow(&[0], 0),
                        Part::Repeat {
                            var: None,
                            min: m - 3,
                            max: Some(m - 3),
                            body: block(),
                        },
                        Part::Lit(vec![1]),
                        Part::Pow {
                            var: None,
                            base: vec![0],
                            min: 0,
                            max: None,
                            exponent: Exponent::Linear {
                                scale: 2,
                                offset: 0,
                            },
                        },
                        Part::Lit(vec![1]),
                        anon_pow(&[0], 0),
                    ],
                    exclusions: vec![],
                },
            ],
        }
    }

    /// Monoid normal forms for the `A5` candidate, over the two
    /// non-identity generators `f0 = 0`, `f1 = 1`.
    pub fn a5() -> Self {
        Self {
            name: "a5".into(),
            include_empty: true,
            alternatives: vec![
                Alternative {
                    label: "k = 0".into(),
                    parts: vec![anon_pow(&[1], 0)],
                    exclusions: vec![],
                },
                Alternative {
                    label: "k >= 1".into(),
                    parts: vec![
                        anon_pow(&[1], 0),
                        Part::Repeat {
                            var: None,
                            min: 0,
                            max: None,
                            body: vec![
                                Part::Lit(vec![0]),
                                Part::Pow {
                                    var: None,
                                    base: vec![1],
                                    min: 0,
                                    max: None,
                                    exponent: Exponent::Dyadic,
                                },
                            ],
                        },
                        Part::Lit(vec![0]),
                        anon_pow(&[1], 0),
                    ],
                    exclusions: vec![],
                },
            ],
        }
    }

    /// Built-in grammars: `a1`, `a4`, `a5`, `b<m>`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "a1" => Some(Self::a1()),
            "a4" => Some(Self::a4()),
            "a5" => Some(Self::a5()),
            _ => match name.strip_prefix('b').and_then(|m| m.parse::<usize>().ok()) {
                Some(m) if m >= 3 => Some(Self::bm(m)),
                _ => None,
            },
        }
    }
}

type Env = BTreeMap<String, usize>;
type Cont<'k> = &'k mut dyn FnMut(&mut Collector, &mut Vec<u32>, &mut Env);

struct Collector {
    nmax: usize,
    words: Vec<HashSet<Vec<u32>>>,
}

fn exponent_value(e: &Exponent, p: usize, j: usize) -> usize {
    match *e {
        Exponent::Linear { scale, offset } => scale * p + offset,
        Exponent::Dyadic => {
            let t = 1usize << j.min(usize::BITS as usize - 2);
            t * p + t - 1
        }
    }
}

/// Smallest length any expansion of `parts` can have.
fn min_len(parts: &[Part]) -> usize {
    parts
        .iter()
        .map(|p| match p {
            Part::Lit(w) => w.len(),
            Part::Choice { options, .. } => options.iter().map(Vec::len).min().unwrap_or(0),
            Part::Pow {
                base,
                min,
                exponent,
                ..
            } => base.len() * exponent_value(exponent, *min, 0),
            Part::Repeat { min, body, .. } => min * min_len(body),
        })
        .sum()
}

fn bind(env: &mut Env, var: &Option<String>, v: usize) -> Option<Option<usize>> {
    var.as_ref().map(|name| env.insert(name.clone(), v))
}

fn unbind(env: &mut Env, var: &Option<String>, old: Option<Option<usize>>) {
    if let (Some(name), Some(old)) = (var, old) {
        match old {
            Some(v) => env.insert(name.clone(), v),
            None => env.remove(name),
        };
    }
}

impl Collector {
    fn seq(&mut self, parts: &[Part], j: usize, word: &mut Vec<u32>, env: &mut Env, k: Cont<'_>) {
        let Some((first, rest)) = parts.split_first() else {
            k(self, word, env);
            return;
        };
        let budget = self.nmax.saturating_sub(min_len(rest));
        match first {
            Part::Lit(w) => {
                if word.len() + w.len() <= budget {
                    word.extend_from_slice(w);
                    self.seq(rest, j, word, env, k);
                    word.truncate(word.len() - w.len());
                }
            }
            Part::Choice { var, options } => {
                for (i, o) in options.iter().enumerate() {
                    if word.len() + o.len() > budget {
                        continue;
                    }
                    let old = bind(env, var, i);
                    word.extend_from_slice(o);
                    self.seq(rest, j, word, env, k);
                    word.truncate(word.len() - o.len());
                    unbind(env, var, old);
                }
            }
            Part::Pow {
                var,
                base,
                min,
                max,
                exponent,
            } => {
                let mut p = *min;
                loop {
                    if max.is_some_and(|mx| p > mx) {
                        break;
                    }
                    let add = base.len() * exponent_value(exponent, p, j);
                    if word.len() + add > budget {
                        break;
                    }
                    let old = bind(env, var, p);
                    let before = word.len();
                    for _ in 0..exponent_value(exponent, p, j) {
                        word.extend_from_slice(base);
                    }
                    self.seq(rest, j, word, env, k);
                    word.truncate(before);
                    unbind(env, var, old);
                    if add == base.len() * exponent_value(exponent, p + 1, j) {
                        break;
                    }
                    p += 1;
                }
            }
            Part::Repeat {
                var,
                min,
                max,
                body,
            } => {
                let step = min_len(body);
                let mut c = *min;
                loop {
                    if max.is_some_and(|mx| c > mx) || word.len() + c * step > budget {
                        break;
                    }
                    let old = bind(env, var, c);
                    self.repeat(body, c, 0, rest, j, word, env, k);
                    unbind(env, var, old);
                    if step == 0 && max.is_none() {
                        break;
                    }
                    c += 1;
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn repeat(
        &mut self,
        body: &[Part],
        count: usize,
        i: usize,
        rest: &[Part],
        j: usize,
        word: &mut Vec<u32>,
        env: &mut Env,
        k: Cont<'_>,
    ) {
        if i == count {
            self.seq(rest, j, word, env, k);
            return;
        }
        self.seq(body, count - i, word, env, &mut |g, w, e| {
            g.repeat(body, count, i + 1, rest, j, w, e, &mut *k)
        });
    }
}

/// Distinct words of each length `0..=nmax` generated by the grammar.
pub fn normal_form_words(grammar: &NormalFormGrammar, nmax: usize) -> Vec<HashSet<Vec<u32>>> {
    let mut col = Collector {
        nmax,
        words: vec![HashSet::new(); nmax + 1],
    };
    for alt in &grammar.alternatives {
        let mut word = Vec::new();
        let mut env = Env::new();
        let exclusions = &alt.exclusions;
        col.seq(&alt.parts, 0, &mut word, &mut env, &mut |g, w, e| {
            let excluded = exclusions
                .iter()
                .any(|ex| ex.iter().all(|(name, v)| e.get(name) == Some(v)));
            if !excluded && w.len() <= g.nmax {
                g.words[w.len()].insert(w.clone());
            }
        });
    }
    if !grammar.include_empty {
        col.words[0].clear();
    }
    col.words
}

/// Number of distinct words per length, from 1 (or from 0 when the grammar
/// includes the empty word) to `nmax`.
pub fn enumerate_normal_forms(grammar: &NormalFormGrammar, nmax: usize) -> IntSequence {
    let words = normal_form_words(grammar, nmax);
    let start = usize::from(!grammar.include_empty);
    IntSequence::new(
        start,
        words[start..].iter().map(|s| s.len() as i128).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(g: &NormalFormGrammar, nmax: usize) -> Vec<i128> {
        enumerate_normal_forms(g, nmax).values().to_vec()
    }

    #[test]
    fn a4_small_lengths() {
        let w = normal_form_words(&NormalFormGrammar::a4(), 3);
        assert_eq!(w[1], HashSet::from([vec![0], vec![1]]));
        assert!(w[3].contains(&vec![1, 0, 1]));
    }

    #[test]
    fn exclusions_drop_matching_parameters() {
        let mut g = NormalFormGrammar::a4();
        g.alternatives.truncate(1);
        // f0 f1 f1 is the excluded combination (p1 = 1, p2 = 0, s = 1).
        assert!(!normal_form_words(&g, 3)[3].contains(&vec![0, 1, 1]));
        g.alternatives[0].exclusions.clear();
        assert!(normal_form_words(&g, 3)[3].contains(&vec![0, 1, 1]));
    }

    #[test]
    fn bm_counts_by_hand() {
        assert_eq!(counts(&NormalFormGrammar::bm(3), 2), vec![2, 4]);
        let w = normal_form_words(&NormalFormGrammar::bm(3), 3);
        assert!(!w[3].contains(&vec![1, 1, 1]));
        assert!(w[3].contains(&vec![1, 1, 0]));
    }

    #[test]
    fn dyadic_exponents() {
        let w = normal_form_words(&NormalFormGrammar::a5(), 7);
        assert!(w[0].contains(&Vec::new()));
        assert!(w[3].contains(&vec![0, 1, 0]));
        assert!(!w[2].contains(&vec![0, 0]));
        // Three letters f0 need the inner block f1^(4p+3).
        assert!(w[7].contains(&vec![0, 1, 1, 1, 0, 1, 0]));
        assert!(!w[6].contains(&vec![0, 1, 1, 0, 1, 0]));
        assert_eq!(counts(&NormalFormGrammar::a5(), 4), vec![1, 2, 3, 5, 7]);
    }

    #[test]
    fn grammars_round_trip_through_json() {
        for g in [
            NormalFormGrammar::a1(),
            NormalFormGrammar::a4(),
            NormalFormGrammar::a5(),
            NormalFormGrammar::bm(5),
        ] {
            let text = serde_json::to_string(&g).unwrap();
            assert_eq!(serde_json::from_str::<NormalFormGrammar>(&text).unwrap(), g);
        }
    }
}
