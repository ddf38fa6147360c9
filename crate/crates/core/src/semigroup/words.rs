use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ElementId, ElementRegistry};
use crate::automaton::{
    disjoint_union, minimize, reachable_product, refine_partition, AutomatonError, MealyAutomaton,
    DEFAULT_STATE_CAP,
};

/// A word over the automaton's states, read as the product
/// `f_{w[0]} ∘ f_{w[1]} ∘ …`: the rightmost generator acts first. The empty
/// word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorWord(pub Vec<u32>);

impl GeneratorWord {
    pub fn new(gens: impl Into<Vec<u32>>) -> Self {
        Self(gens.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|g| format!("f{g}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for GeneratorWord {
    type Err = WordError;

    /// Accepts whitespace-separated `q<i>`, `f<i>` or bare indices; `1` or an
    /// empty string is the empty word.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Self(Vec::new()));
        }
        s.split_whitespace()
            .map(|tok| {
                let digits = tok.trim_start_matches(['q', 'f']);
                digits
                    .parse::<u32>()
                    .map_err(|_| WordError::Syntax(tok.to_owned()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("word of length {len} exceeds the enumerated horizon {horizon}")]
    BeyondHorizon { len: usize, horizon: usize },
    #[error("generator {gen} out of range for {states} states")]
    GeneratorOutOfRange { gen: u32, states: usize },
    #[error("the identity is not an element of this semigroup")]
    NoIdentity,
    #[error("cannot parse generator token `{0}`")]
    Syntax(String),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}

fn check_generators(w: &GeneratorWord, states: usize) -> Result<(), WordError> {
    match w.0.iter().find(|&&g| g as usize >= states) {
        Some(&gen) => Err(WordError::GeneratorOutOfRange { gen, states }),
        None => Ok(()),
    }
}

/// The registry id of the element a generator word evaluates to.
pub fn resolve_word(reg: &ElementRegistry, w: &GeneratorWord) -> Result<ElementId, WordError> {
    check_generators(w, reg.state_count())?;
    if w.len() > reg.horizon() {
        return Err(WordError::BeyondHorizon {
            len: w.len(),
            horizon: reg.horizon(),
        });
    }
    let Some((&last, rest)) = w.0.split_last() else {
        return reg.identity().ok_or(WordError::NoIdentity);
    };
    let mut acc = reg.generators()[last as usize];
    for &g in rest.iter().rev() {
        acc = reg
            .product(g as usize, acc)
            .expect("products of enumerated elements are recorded below the horizon");
    }
    Ok(acc)
}

/// A minimal automaton with a distinguished state realizing the word's
/// transformation, built one factor at a time from the right.
pub fn word_automaton(
    a: &MealyAutomaton,
    w: &GeneratorWord,
) -> Result<(MealyAutomaton, usize), WordError> {
    check_generators(w, a.state_count())?;
    let mut acc = MealyAutomaton::identity(a.alphabet_size());
    let mut root = 0usize;
    for &g in w.0.iter().rev() {
        let prod = reachable_product(a, g as usize, &acc, root, DEFAULT_STATE_CAP)?;
        let (q, part) = minimize(&prod);
        root = part.class_of[0] as usize;
        acc = q;
    }
    Ok((acc, root))
}

/// Whether two generator words define the same transformation of infinite
/// words. Decided by behavioral equivalence of the two word automata, so no
/// enumeration horizon is involved.
pub fn words_equal(
    a: &MealyAutomaton,
    w1: &GeneratorWord,
    w2: &GeneratorWord,
) -> Result<bool, WordError> {
    let (left, r1) = word_automaton(a, w1)?;
    let (right, r2) = word_automaton(a, w2)?;
    let u = disjoint_union(&left, &right)?;
    Ok(refine_partition(&u).same_class(r1, left.state_count() + r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{enumerate_growth, EnumerationOptions};

    fn a2() -> MealyAutomaton {
        MealyAutomaton::from_rows(
            None,
            &[
                vec![(0, 1), (0, 1), (0, 0), (0, 0)],
                vec![(0, 0), (1, 2), (1, 0), (1, 1)],
            ],
        )
        .unwrap()
    }

    fn a3() -> MealyAutomaton {
        MealyAutomaton::from_rows(
            None,
            &[
                vec![(0, 1), (0, 2), (0, 2), (0, 2)],
                vec![(0, 3), (1, 0), (1, 2), (1, 2)],
            ],
        )
        .unwrap()
    }

    fn a4() -> MealyAutomaton {
        MealyAutomaton::from_rows(
            None,
            &[
                vec![(0, 0), (0, 0), (0, 1), (0, 1)],
                vec![(0, 2), (1, 3), (1, 0), (1, 1)],
            ],
        )
        .unwrap()
    }

    fn a6() -> MealyAutomaton {
        MealyAutomaton::from_rows(
            None,
            &[
                vec![(0, 1), (0, 0)],
                vec![(1, 0), (2, 1)],
                vec![(1, 0), (2, 0)],
            ],
        )
        .unwrap()
    }

    fn w(s: &str) -> GeneratorWord {
        s.parse().unwrap()
    }

    #[test]
    fn resolve_known_products() {
        let e = enumerate_growth(&a2(), 4, EnumerationOptions::default());
        assert_eq!(
            resolve_word(&e.registry, &w("q0 q0 q0")).unwrap(),
            resolve_word(&e.registry, &w("q0 q0")).unwrap()
        );
        assert_eq!(
            resolve_word(&e.registry, &w("q0")).unwrap(),
            e.registry.generators()[0]
        );
        assert_eq!(
            resolve_word(&e.registry, &w("")),
            Err(WordError::NoIdentity)
        );
        assert!(matches!(
            resolve_word(&e.registry, &w("q0 q1 q0 q1 q0")),
            Err(WordError::BeyondHorizon { len: 5, horizon: 4 })
        ));

        let e6 = enumerate_growth(&a6(), 3, EnumerationOptions::default());
        let id = resolve_word(&e6.registry, &w("q0 q0")).unwrap();
        assert_eq!(Some(id), e6.registry.identity());
        assert_eq!(resolve_word(&e6.registry, &w("1")).unwrap(), id);
    }

    #[test]
    fn words_equal_known_relations() {
        assert!(words_equal(&a3(), &w("q0 q1 q0"), &w("q0")).unwrap());
        assert!(words_equal(&a4(), &w("q0 q1 q1 q1 q0"), &w("q0 q1 q0")).unwrap());
        assert!(!words_equal(&a2(), &w("q0"), &w("q1")).unwrap());
        assert!(words_equal(&a6(), &w("f0 f0"), &w("")).unwrap());
        assert!(matches!(
            words_equal(&a6(), &w("f3"), &w("f0")),
            Err(WordError::GeneratorOutOfRange { gen: 3, states: 3 })
        ));
    }

    #[test]
    fn words_equal_agrees_with_registry() {
        let a = a6();
        let e = enumerate_growth(&a, 4, EnumerationOptions::default());
        let words: Vec<GeneratorWord> = (0..27u32)
            .map(|c| GeneratorWord(vec![c % 3, (c / 3) % 3, c / 9]))
            .chain((0..9u32).map(|c| GeneratorWord(vec![c % 3, c / 3])))
            .collect();
        for u in &words {
            for v in &words {
                let by_registry =
                    resolve_word(&e.registry, u).unwrap() == resolve_word(&e.registry, v).unwrap();
                assert_eq!(words_equal(&a, u, v).unwrap(), by_registry, "{u} vs {v}");
            }
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("f0 f1 2").0, vec![0, 1, 2]);
        assert_eq!(w("q3").to_string(), "f3");
        assert_eq!(GeneratorWord::default_empty().to_string(), "1");
        assert!(matches!(
            "fx".parse::<GeneratorWord>(),
            Err(WordError::Syntax(_))
        ));
    }

    impl GeneratorWord {
        fn default_empty() -> Self {
            Self(Vec::new())
        }
    }
}
