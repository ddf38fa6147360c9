use mealy_growth::automaton::{growth_by_minimization, MealyAutomaton, DEFAULT_STATE_CAP};
use mealy_growth::corpus::{
    canonical_form, parse_any, parse_automaton, serialize_automaton, serialize_automaton_json,
};
use mealy_growth::semigroup::{enumerate_growth, words_equal, EnumerationOptions, GeneratorWord};
use proptest::prelude::*;

fn automaton(max_states: usize, max_letters: usize) -> impl Strategy<Value = MealyAutomaton> {
    (1..=max_states, 1..=max_letters).prop_flat_map(|(n, m)| {
        (
            prop::collection::vec(0..n, n * m),
            prop::collection::vec(0..m, n * m),
        )
            .prop_map(move |(pi, lambda)| {
                MealyAutomaton::from_flat(Some("t".into()), m, n, pi, lambda).unwrap()
            })
    })
}

fn growth(a: &MealyAutomaton, nmax: usize) -> Vec<u64> {
    enumerate_growth(a, nmax, EnumerationOptions::default())
        .tables
        .spherical
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn text_round_trip(a in automaton(4, 4)) {
        let b = parse_automaton(&serialize_automaton(&a)).unwrap();
        prop_assert_eq!(b.table_key(), a.table_key());
    }

    #[test]
    fn json_round_trip(a in automaton(4, 4)) {
        let b = parse_any(&serialize_automaton_json(&a)).unwrap();
        prop_assert_eq!(b.table_key(), a.table_key());
    }

    #[test]
    fn enumeration_agrees_with_minimized_powers(a in automaton(3, 3)) {
        let direct = growth_by_minimization(&a, 5, DEFAULT_STATE_CAP).unwrap();
        prop_assert_eq!(growth(&a, 5), direct);
    }

    #[test]
    fn relabeling_keeps_growth(a in automaton(3, 2), seed in 0usize..6) {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let n = a.state_count();
        let perm: Vec<usize> = perms[seed].iter().copied().filter(|&q| q < n).collect();
        prop_assert_eq!(growth(&a.relabel_states(&perm), 6), growth(&a, 6));
        let c = canonical_form(&a);
        prop_assert!(c.table_key() <= a.table_key());
        prop_assert_eq!(canonical_form(&c).table_key(), c.table_key());
    }

    #[test]
    fn word_equality_is_an_equivalence(
        a in automaton(3, 2),
        u in prop::collection::vec(0u32..3, 1..5),
        v in prop::collection::vec(0u32..3, 1..5),
    ) {
        let n = a.state_count() as u32;
        let u = GeneratorWord(u.into_iter().map(|g| g % n).collect());
        let v = GeneratorWord(v.into_iter().map(|g| g % n).collect());
        prop_assert!(words_equal(&a, &u, &u).unwrap());
        prop_assert_eq!(words_equal(&a, &u, &v).unwrap(), words_equal(&a, &v, &u).unwrap());
    }
}
