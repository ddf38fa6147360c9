//! The built-in automata with their expected growth, relation fixtures and
//! normal-form grammars, plus file formats and automaton search.

mod format;
mod normal_forms;
mod search;

use std::collections::BTreeMap;

use thiserror::Error;

pub use format::{
    parse_any, parse_automaton, parse_automaton_json, serialize_automaton,
    serialize_automaton_json, ParseError,
};
pub use normal_forms::{
    enumerate_normal_forms, normal_form_words, Alternative, Exponent, NormalFormGrammar, Part,
};
pub use search::{
    canonical_form, is_identity_state, search_automata, SearchError, SearchQuery, SearchResult,
};

use crate::automaton::MealyAutomaton;
use crate::semigroup::{GeneratorMap, Relation, RelationSet};
use crate::series::{expand_a5_gamma, ClosedFormSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("unknown corpus entry `{0}` (expected a1, a2, a3, a4, a6 or b<m> with m >= 3)")]
    Unknown(String),
    #[error("B_m needs m >= 3, got {0}")]
    AlphabetTooSmall(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub automaton: MealyAutomaton,
    pub expected: ClosedFormSpec,
    /// Word lengths on which the expected growth is checked.
    pub verified_nmax: usize,
    pub relations: Vec<RelationSet>,
    /// Name of the normal-form grammar, if any.
    pub normal_form: Option<String>,
}

fn rel(lhs: &str, rhs: &str) -> Relation {
    Relation::new(lhs, rhs)
}

fn set(anchor: &str, relations: Vec<Relation>) -> RelationSet {
    RelationSet {
        anchor: anchor.into(),
        generators: None,
        relations,
    }
}

fn automaton(name: &str, rows: &[&[(usize, usize)]]) -> MealyAutomaton {
    let rows: Vec<Vec<_>> = rows.iter().map(|r| r.to_vec()).collect();
    MealyAutomaton::from_rows(Some(name), &rows).expect("built-in tables are valid")
}

fn a1() -> CorpusEntry {
    let printed = set(
        "a1.presentation",
        vec![
            rel("f1 f2", "f0 f2"),
            rel("f1^2 f0", "f1 f0 f2"),
            rel("f1^2 f1", "f1 f0 f2"),
            rel("f0^2 f1", "f0^2").note("false as printed; f0^2 f1 = f0^3 holds"),
            rel("f2 f0 f1", "f2 f0^2"),
            rel("f2^2 f0", "f2 f0^2"),
            rel("f2^2 f1", "f2 f0^2"),
            rel("f2^2 f2", "f2 f0^2"),
            rel("f0^4", "f0^3"),
            rel("f0^3 f2", "f0^3"),
            rel("f0 f2 f0^2", "f0 f1 f0 f2"),
            rel("f1 f0 f2 f0", "f1 f0 f2"),
            rel("f2 f0^3", "f2 f0^2"),
        ],
    );
    let corrected = set("a1.presentation.corrected", vec![rel("f0^2 f1", "f0^3")]);
    CorpusEntry {
        name: "a1".into(),
        automaton: automaton(
            "a1",
            &[&[(0, 1), (1, 1)], &[(0, 1), (2, 1)], &[(1, 0), (1, 0)]],
        ),
        expected: ClosedFormSpec::a1(),
        verified_nmax: 20,
        relations: vec![printed, corrected],
        normal_form: Some("a1".into()),
    }
}

fn a2() -> CorpusEntry {
    CorpusEntry {
        name: "a2".into(),
        automaton: automaton(
            "a2",
            &[
                &[(0, 1), (0, 1), (0, 0), (0, 0)],
                &[(0, 0), (1, 2), (1, 0), (1, 1)],
            ],
        ),
        expected: ClosedFormSpec::a2(),
        verified_nmax: 30,
        relations: vec![set(
            "a2.presentation",
            vec![
                rel("f0^2 f0", "f0^2"),
                rel("f0^2 f1", "f0^2"),
                rel("f0 f1^2 f0", "f0^2"),
                rel("f0 f1^2 f1", "f0^2"),
                rel("f1^2 f0^2", "f0 f1 f0^2"),
                rel("f1 f0 f1 f0^2", "f1^4"),
                rel("f1^4", "f1^3 f0"),
                rel("(f1 f0)^4", "(f1 f0)^2"),
            ],
        )],
        normal_form: None,
    }
}

fn a3() -> CorpusEntry {
    CorpusEntry {
        name: "a3".into(),
        automaton: automaton(
            "a3",
            &[
                &[(0, 1), (0, 2), (0, 2), (0, 2)],
                &[(0, 3), (1, 0), (1, 2), (1, 2)],
            ],
        ),
        expected: ClosedFormSpec::a3(),
        verified_nmax: 40,
        relations: vec![set(
            "a3.presentation",
            vec![
                rel("f0^2 f0", "f0^2"),
                rel("f0^2 f1", "f0^2"),
                rel("f1 f0^2", "f0^2"),
                rel("f0 f1 f0", "f0"),
                rel("f0 f1^2 f0", "f0^2"),
                rel("f1^3 f0 f1", "f1 f0 f1^3"),
            ],
        )],
        normal_form: None,
    }
}

fn a4() -> CorpusEntry {
    CorpusEntry {
        name: "a4".into(),
        automaton: automaton(
            "a4",
            &[
                &[(0, 0), (0, 0), (0, 1), (0, 1)],
                &[(0, 2), (1, 3), (1, 0), (1, 1)],
            ],
        ),
        expected: ClosedFormSpec::a4(),
        verified_nmax: 30,
        relations: vec![
            set(
                "a4.presentation",
                vec![
                    rel("f0^2 f0", "f0^2"),
                    rel("f0^2 f1", "f0^2"),
                    rel("f1 f0 f1^2 f0", "f1 f0 f0"),
                    rel("f1 f0 f1^2 f1", "f1 f0 f1"),
                ],
            ),
            set(
                "a4.presentation.odd-power-family",
                vec![rel("f0 f1^{2p+1} f0", "f0 f1 f0").param("p", 1, Some(8))],
            ),
        ],
        normal_form: Some("a4".into()),
    }
}

fn a6() -> CorpusEntry {
    CorpusEntry {
        name: "a6".into(),
        automaton: automaton(
            "a6",
            &[&[(0, 1), (0, 0)], &[(1, 0), (2, 1)], &[(1, 0), (2, 0)]],
        ),
        expected: ClosedFormSpec::a6(),
        verified_nmax: 24,
        relations: vec![set(
            "a6.presentation",
            vec![
                rel("f0^2", "1"),
                rel("f2 f1", "f2"),
                rel("f1 f2", "f2"),
                rel("f2^2", "f2"),
                rel("f1^2", "f1"),
                rel("f2 f0 f1 f0 f2", "f1 f0 f1 f0 f2"),
            ],
        )],
        normal_form: None,
    }
}

/// Relation families of `B_m` with every free exponent in `[0, 8]`.
pub fn bm_relations(m: usize) -> RelationSet {
    let prefix = |count: usize| -> String { (1..=count).map(|i| format!("f1 f0^p{i} ")).collect() };
    let with_params = |mut r: Relation, count: usize| {
        for i in 1..=count {
            r = r.param(&format!("p{i}"), 0, Some(8));
        }
        r
    };
    let mut relations = Vec::new();
    if m == 3 {
        relations.push(rel("f1^3", "f0 f1^2"));
    } else {
        let p = prefix(m - 4);
        relations.push(with_params(
            rel(&format!("{p}f1^4"), &format!("{p}f1 f0 f1^2")),
            m - 4,
        ));
    }
    let p = prefix(m - 3);
    relations.push(with_params(
        rel(&format!("{p}f1 f0 f1"), &format!("{p}f0^2 f1")),
        m - 3,
    ));
    set(&format!("b{m}.presentation"), relations)
}

/// `B_m`: `f0` swaps `x0` and `x1` and moves to `f1` on `x2`; `f1` shifts
/// every letter up by one, fixing the last.
pub fn build_bm(m: usize) -> Result<CorpusEntry, CorpusError> {
    if m < 3 {
        return Err(CorpusError::AlphabetTooSmall(m));
    }
    let f0: Vec<(usize, usize)> = (0..m)
        .map(|x| {
            let out = match x {
                0 => 1,
                1 => 0,
                _ => x,
            };
            (usize::from(x == 2), out)
        })
        .collect();
    let f1: Vec<(usize, usize)> = (0..m)
        .map(|x| (usize::from(x != 0), (x + 1).min(m - 1)))
        .collect();
    let name = format!("b{m}");
    Ok(CorpusEntry {
        automaton: MealyAutomaton::from_rows(Some(&name), &[f0, f1]).expect("B_m tables are valid"),
        expected: ClosedFormSpec::bm(m),
        verified_nmax: if m == 3 { 25 } else { 20 },
        relations: vec![bm_relations(m)],
        normal_form: Some(name.clone()),
        name,
    })
}

/// The built-in entries `a1`, `a2`, `a3`, `a4` and `a6`.
pub fn get_builtin(name: &str) -> Result<CorpusEntry, CorpusError> {
    match name {
        "a1" => Ok(a1()),
        "a2" => Ok(a2()),
        "a3" => Ok(a3()),
        "a4" => Ok(a4()),
        "a6" => Ok(a6()),
        _ => Err(CorpusError::Unknown(name.to_owned())),
    }
}

/// Built-ins plus `b<m>`.
pub fn lookup(name: &str) -> Result<CorpusEntry, CorpusError> {
    if let Some(m) = name.strip_prefix('b').and_then(|m| m.parse::<usize>().ok()) {
        return build_bm(m);
    }
    get_builtin(name)
}

/// Names of the shipped corpus, in a fixed order.
pub const CORPUS_NAMES: [&str; 8] = ["a1", "a2", "a3", "a4", "a6", "b3", "b4", "b5"];

pub fn all_entries() -> Vec<CorpusEntry> {
    CORPUS_NAMES
        .iter()
        .map(|n| lookup(n).expect("corpus names resolve"))
        .collect()
}

/// Spherical growth of the `A5` candidate for `n = 1..=nmax`, read off the
/// nested series (the identity generator makes spherical and cumulative
/// monoid growth coincide).
pub fn a5_prefix(nmax: usize) -> Vec<u64> {
    let series = expand_a5_gamma(nmax);
    (1..=nmax)
        .map(|n| {
            u64::try_from(series.coefficient(n).to_integer()).expect("A5 coefficients are small")
        })
        .collect()
}

/// The search for the `A5` candidate among 3-state automata over 2 letters.
pub fn a5_query(require_identity: bool) -> SearchQuery {
    SearchQuery {
        require_identity,
        ..SearchQuery::new(3, 2, a5_prefix(10))
    }
}

/// The `A5` monoid relation family, with `e` the identity generator.
pub fn a5_relations() -> RelationSet {
    set(
        "a5.presentation.dyadic-family",
        vec![rel(
            "f0 f1^{2^k-1} f1^{p*2^(k+1)} f0 rprod[i=1..k](f1^{2^i-1} f0)",
            "f1^{p*2^(k+1)} f0 rprod[i=1..k](f1^{2^i-1} f0)",
        )
        .param("k", 0, Some(4))
        .param("p", 0, Some(1))],
    )
}

/// Generator namings of a 3-state candidate with `e` an identity state and
/// `f0`, `f1` the two others in either order.
pub fn a5_labelings(a: &MealyAutomaton) -> Vec<GeneratorMap> {
    let n = a.state_count();
    let mut out = Vec::new();
    for e in (0..n).filter(|&q| is_identity_state(a, q)) {
        let others: Vec<u32> = (0..n as u32).filter(|&q| q as usize != e).collect();
        if others.len() != 2 {
            continue;
        }
        for (f0, f1) in [(others[0], others[1]), (others[1], others[0])] {
            out.push(GeneratorMap(BTreeMap::from([
                ("e".into(), e as u32),
                ("f0".into(), f0),
                ("f1".into(), f1),
            ])));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{check_relations, enumerate_growth, EnumerationOptions};

    #[test]
    fn builtins_match_their_tables() {
        let a2 = get_builtin("a2").unwrap().automaton;
        assert_eq!((a2.state_count(), a2.alphabet_size()), (2, 4));
        assert_eq!(a2.pi_rows()[1], vec![0, 1, 1, 1]);
        assert_eq!(a2.lambda_rows()[1], vec![0, 2, 0, 1]);
        let a6 = get_builtin("a6").unwrap().automaton;
        assert_eq!(
            (a6.pi_rows()[2].clone(), a6.lambda_rows()[2].clone()),
            (vec![1, 2], vec![0, 0])
        );
        let a1 = get_builtin("a1").unwrap().automaton;
        assert_eq!(a1.pi_rows()[2], vec![1, 1]);
        assert!(matches!(get_builtin("a5"), Err(CorpusError::Unknown(_))));
        assert!(matches!(
            lookup("b2"),
            Err(CorpusError::AlphabetTooSmall(2))
        ));
    }

    #[test]
    fn b3_table() {
        let b3 = build_bm(3).unwrap().automaton;
        assert_eq!(b3.pi_rows(), vec![vec![0, 0, 1], vec![0, 1, 1]]);
        assert_eq!(b3.lambda_rows(), vec![vec![1, 0, 2], vec![1, 2, 2]]);
        let e = enumerate_growth(&b3, 3, EnumerationOptions::default());
        assert_eq!(e.tables.spherical[2], 6);
    }

    #[test]
    fn bm_families_expand() {
        let s = bm_relations(5);
        assert_eq!(s.relations[0].lhs, "f1 f0^p1 f1^4");
        assert_eq!(s.relations[1].rhs, "f1 f0^p1 f1 f0^p2 f0^2 f1");
        assert_eq!(s.relations[1].assignments(8).unwrap().len(), 81);
    }

    #[test]
    fn small_relation_sets_hold() {
        for name in ["a2", "a3", "a6"] {
            let e = get_builtin(name).unwrap();
            for set in &e.relations {
                let gens = set.generator_map(e.automaton.state_count());
                let r = check_relations(&e.automaton, set, &gens, 8).unwrap();
                assert!(
                    r.all_hold(),
                    "{name}: {:?}",
                    r.failures().collect::<Vec<_>>()
                );
            }
        }
    }

    #[test]
    fn a5_prefix_values() {
        assert_eq!(a5_prefix(5), vec![3, 6, 11, 18, 28]);
    }
}
