//! Non-initial Mealy automata over a common input/output alphabet.
//!
//! An automaton with `n` states over `m` letters is stored as two flat
//! row-major tables, `pi[q * m + x]` (next state) and `lambda[q * m + x]`
//! (output letter). Every state `q` induces a length-preserving
//! transformation `f_q` of finite and infinite words; the row
//! `lambda[q][..]` is the letter permutation-or-map `σ_q` and the row
//! `pi[q][..]` lists the sections of `f_q`.

mod minimize;
mod product;

pub use minimize::{growth_by_minimization, minimize, refine_partition, StatePartition};
pub use product::{
    disjoint_union, power, power_with_cap, product, product_with_cap, reachable_product,
};

pub(crate) use minimize::moore_refine;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default bound on the number of states a product or power may create.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// A letter of the alphabet `{x_0, …, x_{m-1}}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(pub u32);

/// A state index in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StateId(pub u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Letter {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Table {
    Transition,
    Output,
}

/// An out-of-range table entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub table: Table,
    pub state: usize,
    pub letter: usize,
    pub value: usize,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.table {
            Table::Transition => "transition",
            Table::Output => "output",
        };
        write!(
            f,
            "{what} entry {} at (q{},x{}) out of range",
            self.value, self.state, self.letter
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("alphabet size and state count must be at least 1 (got m={m}, n={n})")]
    Empty { m: usize, n: usize },
    #[error("table shape mismatch: expected {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("invalid automaton: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("letter {letter} out of range for alphabet of size {m}")]
    LetterOutOfRange { letter: usize, m: usize },
    #[error("state {state} out of range for {n} states")]
    StateOutOfRange { state: usize, n: usize },
    #[error("alphabet mismatch: {left} vs {right} letters")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("state cap exceeded: {requested} states requested, cap is {cap}")]
    CapExceeded { requested: u128, cap: usize },
}

/// Returns every out-of-range entry of the given row-major tables.
pub fn validate_tables(m: usize, n: usize, pi: &[usize], lambda: &[usize]) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, &v) in pi.iter().enumerate() {
        if v >= n {
            out.push(Violation {
                table: Table::Transition,
                state: i / m.max(1),
                letter: i % m.max(1),
                value: v,
            });
        }
    }
    for (i, &v) in lambda.iter().enumerate() {
        if v >= m {
            out.push(Violation {
                table: Table::Output,
                state: i / m.max(1),
                letter: i % m.max(1),
                value: v,
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MealyAutomaton {
    name: Option<String>,
    m: usize,
    n: usize,
    pi: Vec<u32>,
    lambda: Vec<u32>,
}

impl MealyAutomaton {
    /// Builds an automaton from flat row-major tables, rejecting any
    /// out-of-range entry.
    pub fn from_flat(
        name: Option<String>,
        m: usize,
        n: usize,
        pi: Vec<usize>,
        lambda: Vec<usize>,
    ) -> Result<Self, AutomatonError> {
        if m == 0 || n == 0 {
            return Err(AutomatonError::Empty { m, n });
        }
        for len in [pi.len(), lambda.len()] {
            if len != n * m {
                return Err(AutomatonError::Shape {
                    expected: n * m,
                    found: len,
                });
            }
        }
        let violations = validate_tables(m, n, &pi, &lambda);
        if !violations.is_empty() {
            return Err(AutomatonError::Invalid(violations));
        }
        Ok(Self {
            name,
            m,
            n,
            pi: pi.into_iter().map(|v| v as u32).collect(),
            lambda: lambda.into_iter().map(|v| v as u32).collect(),
        })
    }

    /// Builds an automaton from per-state rows of `(next state, output letter)` pairs.
    pub fn from_rows(
        name: Option<&str>,
        rows: &[Vec<(usize, usize)>],
    ) -> Result<Self, AutomatonError> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut pi = Vec::with_capacity(n * m);
        let mut lambda = Vec::with_capacity(n * m);
        for row in rows {
            if row.len() != m {
                return Err(AutomatonError::Shape {
                    expected: n * m,
                    found: rows.iter().map(Vec::len).sum(),
                });
            }
            for &(p, l) in row {
                pi.push(p);
                lambda.push(l);
            }
        }
        Self::from_flat(name.map(str::to_owned), m, n, pi, lambda)
    }

    /// The 1-state automaton over `m` letters whose state is the identity.
    pub fn identity(m: usize) -> Self {
        Self {
            name: Some("identity".into()),
            m,
            n: 1,
            pi: vec![0; m],
            lambda: (0..m as u32).collect(),
        }
    }

    pub(crate) fn from_raw(
        name: Option<String>,
        m: usize,
        n: usize,
        pi: Vec<u32>,
        lambda: Vec<u32>,
    ) -> Self {
        debug_assert_eq!(pi.len(), n * m);
        debug_assert_eq!(lambda.len(), n * m);
        Self {
            name,
            m,
            n,
            pi,
            lambda,
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Alphabet size `m`.
    pub fn alphabet_size(&self) -> usize {
        self.m
    }

    /// State count `n`.
    pub fn state_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn next(&self, q: usize, x: usize) -> usize {
        self.pi[q * self.m + x] as usize
    }

    #[inline]
    pub fn output(&self, q: usize, x: usize) -> usize {
        self.lambda[q * self.m + x] as usize
    }

    pub fn transition_row(&self, q: usize) -> &[u32] {
        &self.pi[q * self.m..(q + 1) * self.m]
    }

    pub fn output_row(&self, q: usize) -> &[u32] {
        &self.lambda[q * self.m..(q + 1) * self.m]
    }

    pub(crate) fn pi_flat(&self) -> &[u32] {
        &self.pi
    }

    pub(crate) fn lambda_flat(&self) -> &[u32] {
        &self.lambda
    }

    /// Per-state rows of transitions, as `pi[q][x]`.
    pub fn pi_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|q| self.transition_row(q).iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// Per-state rows of outputs, as `lambda[q][x]`.
    pub fn lambda_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|q| self.output_row(q).iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// Every out-of-range table entry; empty for any automaton built through
    /// the checked constructors.
    pub fn validate(&self) -> Vec<Violation> {
        let pi: Vec<usize> = self.pi.iter().map(|&v| v as usize).collect();
        let lambda: Vec<usize> = self.lambda.iter().map(|&v| v as usize).collect();
        validate_tables(self.m, self.n, &pi, &lambda)
    }

    /// Whether state `q` acts as the identity on its first letter and all of
    /// its sections are itself (the cheap syntactic identity test).
    pub fn is_syntactic_identity(&self, q: usize) -> bool {
        (0..self.m).all(|x| self.output(q, x) == x && self.next(q, x) == q)
    }

    /// Runs the automaton from `q` on `word`, returning the output word.
    pub fn apply(&self, q: StateId, word: &[Letter]) -> Result<Vec<Letter>, AutomatonError> {
        if q.index() >= self.n {
            return Err(AutomatonError::StateOutOfRange {
                state: q.index(),
                n: self.n,
            });
        }
        let mut state = q.index();
        let mut out = Vec::with_capacity(word.len());
        for &x in word {
            if x.index() >= self.m {
                return Err(AutomatonError::LetterOutOfRange {
                    letter: x.index(),
                    m: self.m,
                });
            }
            out.push(Letter(self.output(state, x.index()) as u32));
            state = self.next(state, x.index());
        }
        Ok(out)
    }

    /// Returns the automaton with its states renumbered so that old state
    /// `q` becomes `perm[q]`.
    pub fn relabel_states(&self, perm: &[usize]) -> Self {
        assert_eq!(
            perm.len(),
            self.n,
            "permutation length must equal the state count"
        );
        let mut pi = vec![0u32; self.n * self.m];
        let mut lambda = vec![0u32; self.n * self.m];
        for q in 0..self.n {
            for x in 0..self.m {
                pi[perm[q] * self.m + x] = perm[self.next(q, x)] as u32;
                lambda[perm[q] * self.m + x] = self.output(q, x) as u32;
            }
        }
        Self::from_raw(self.name.clone(), self.m, self.n, pi, lambda)
    }

    /// Interleaved `(pi, lambda)` table, state-major: the key used for
    /// lexicographic ordering of automata.
    pub fn table_key(&self) -> Vec<u32> {
        let mut key = Vec::with_capacity(2 * self.n * self.m);
        for i in 0..self.n * self.m {
            key.push(self.pi[i]);
            key.push(self.lambda[i]);
        }
        key
    }
}

impl fmt::Display for MealyAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "f{q} = (")?;
            for x in 0..self.m {
                if x > 0 {
                    write!(f, ",")?;
                }
                write!(f, "f{}", self.next(q, x))?;
            }
            write!(f, ")(")?;
            for x in 0..self.m {
                if x > 0 {
                    write!(f, ",")?;
                }
                write!(f, "x{}", self.output(q, x))?;
            }
            writeln!(f, ")")?;
        }
        Ok(())
    }
}

/// Shorthand for building a word of letters from indices.
pub fn word(letters: &[u32]) -> Vec<Letter> {
    letters.iter().map(|&x| Letter(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> MealyAutomaton {
        MealyAutomaton::from_rows(
            Some("a2"),
            &[
                vec![(0, 1), (0, 1), (0, 0), (0, 0)],
                vec![(0, 0), (1, 2), (1, 0), (1, 1)],
            ],
        )
        .unwrap()
    }

    fn a6() -> MealyAutomaton {
        MealyAutomaton::from_rows(
            Some("a6"),
            &[
                vec![(0, 1), (0, 0)],
                vec![(1, 0), (2, 1)],
                vec![(1, 0), (2, 0)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn validate_accepts_a2_and_identity() {
        assert!(a2().validate().is_empty());
        assert!(MealyAutomaton::identity(3).validate().is_empty());
    }

    #[test]
    fn validate_reports_out_of_range_transition() {
        let v = validate_tables(2, 2, &[5, 0, 1, 1], &[0, 1, 1, 0]);
        assert_eq!(
            v,
            vec![Violation {
                table: Table::Transition,
                state: 0,
                letter: 0,
                value: 5
            }]
        );
        let err =
            MealyAutomaton::from_flat(None, 2, 2, vec![5, 0, 1, 1], vec![0, 1, 1, 0]).unwrap_err();
        assert!(matches!(err, AutomatonError::Invalid(ref v) if v.len() == 1));
    }

    #[test]
    fn validate_reports_output_violations_and_shape() {
        let v = validate_tables(2, 1, &[0, 0], &[0, 2]);
        assert_eq!(v[0].table, Table::Output);
        assert_eq!((v[0].state, v[0].letter), (0, 1));
        assert!(matches!(
            MealyAutomaton::from_flat(None, 2, 2, vec![0; 3], vec![0; 4]),
            Err(AutomatonError::Shape { .. })
        ));
        assert!(matches!(
            MealyAutomaton::from_flat(None, 0, 1, vec![], vec![]),
            Err(AutomatonError::Empty { .. })
        ));
    }

    #[test]
    fn apply_hand_simulated_values() {
        // f0 of A2 sends x0 to x1 and stays in f0.
        assert_eq!(
            a2().apply(StateId(0), &word(&[0, 0])).unwrap(),
            word(&[1, 1])
        );
        // f0 of A6 flips every letter.
        assert_eq!(
            a6().apply(StateId(0), &word(&[0, 1])).unwrap(),
            word(&[1, 0])
        );
        assert_eq!(
            a6().apply(StateId(1), &word(&[1, 0, 1])).unwrap(),
            word(&[1, 0, 1])
        );
        assert!(a6().apply(StateId(2), &[]).unwrap().is_empty());
    }

    #[test]
    fn apply_rejects_bad_letters_and_states() {
        assert!(matches!(
            a6().apply(StateId(0), &word(&[0, 2])),
            Err(AutomatonError::LetterOutOfRange { letter: 2, m: 2 })
        ));
        assert!(matches!(
            a6().apply(StateId(3), &[]),
            Err(AutomatonError::StateOutOfRange { .. })
        ));
    }

    #[test]
    fn relabel_preserves_action() {
        let a = a6();
        let b = a.relabel_states(&[2, 0, 1]);
        let w = word(&[1, 0, 1, 1, 0]);
        for q in 0..3 {
            let perm = [2, 0, 1];
            assert_eq!(
                a.apply(StateId(q), &w).unwrap(),
                b.apply(StateId(perm[q as usize]), &w).unwrap()
            );
        }
    }
}
