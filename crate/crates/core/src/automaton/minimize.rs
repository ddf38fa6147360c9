use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{power_with_cap, AutomatonError, MealyAutomaton};

/// A partition of the states of an automaton into behavioral classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatePartition {
    /// Class index of each state, dense in `[0, class_count)` and numbered by
    /// first appearance.
    pub class_of: Vec<u32>,
    pub class_count: usize,
}

impl StatePartition {
    pub fn same_class(&self, p: usize, q: usize) -> bool {
        self.class_of[p] == self.class_of[q]
    }

    /// First state of every class, in class order.
    pub fn representatives(&self) -> Vec<usize> {
        let mut reps = vec![usize::MAX; self.class_count];
        for (q, &c) in self.class_of.iter().enumerate() {
            let slot = &mut reps[c as usize];
            if *slot == usize::MAX {
                *slot = q;
            }
        }
        reps
    }
}

/// Moore-style signature refinement.
///
/// `initial` holds a dense starting label per node, `succ` the `m`
/// successors of each node in row-major order. Two nodes end in the same
/// class iff they carry equal labels along every path. Classes are
/// renumbered by first appearance each round, so the result is
/// deterministic.
pub(crate) fn moore_refine(initial: &[u32], succ: &[u32], m: usize) -> (Vec<u32>, usize) {
    let n = initial.len();
    debug_assert_eq!(succ.len(), n * m);
    let (mut class, mut count) = renumber(initial);
    let mut sig = vec![0u32; m + 1];
    loop {
        let mut table: HashMap<Vec<u32>, u32> = HashMap::with_capacity(count * 2);
        let mut next = Vec::with_capacity(n);
        for q in 0..n {
            sig[0] = class[q];
            for x in 0..m {
                sig[x + 1] = class[succ[q * m + x] as usize];
            }
            let fresh = table.len() as u32;
            let c = match table.get(sig.as_slice()) {
                Some(&c) => c,
                None => {
                    table.insert(sig.clone(), fresh);
                    fresh
                }
            };
            next.push(c);
        }
        let next_count = table.len();
        class = next;
        if next_count == count {
            return (class, count);
        }
        count = next_count;
    }
}

fn renumber(labels: &[u32]) -> (Vec<u32>, usize) {
    let mut map: HashMap<u32, u32> = HashMap::new();
    let out = labels
        .iter()
        .map(|l| {
            let fresh = map.len() as u32;
            *map.entry(*l).or_insert(fresh)
        })
        .collect();
    (out, map.len())
}

/// Output rows mapped to dense labels, in order of first appearance.
pub(crate) fn output_row_labels(aut: &MealyAutomaton) -> Vec<u32> {
    let mut rows: HashMap<&[u32], u32> = HashMap::new();
    (0..aut.state_count())
        .map(|q| {
            let fresh = rows.len() as u32;
            *rows.entry(aut.output_row(q)).or_insert(fresh)
        })
        .collect()
}

/// Coarsest partition whose classes are sets of states defining equal
/// transformations of all finite words.
pub fn refine_partition(aut: &MealyAutomaton) -> StatePartition {
    let labels = output_row_labels(aut);
    let (class_of, class_count) = moore_refine(&labels, aut.pi_flat(), aut.alphabet_size());
    StatePartition {
        class_of,
        class_count,
    }
}

/// Quotient of `aut` by its behavioral partition. Every state is kept (the
/// model is non-initial), so the quotient has exactly one state per class.
pub fn minimize(aut: &MealyAutomaton) -> (MealyAutomaton, StatePartition) {
    let part = refine_partition(aut);
    let m = aut.alphabet_size();
    let reps = part.representatives();
    let mut pi = Vec::with_capacity(reps.len() * m);
    let mut lambda = Vec::with_capacity(reps.len() * m);
    for &r in &reps {
        for x in 0..m {
            pi.push(part.class_of[aut.next(r, x)]);
            lambda.push(aut.output(r, x) as u32);
        }
    }
    for q in 0..aut.state_count() {
        let c = part.class_of[q] as usize;
        for x in 0..m {
            assert_eq!(
                aut.output(q, x),
                lambda[c * m + x] as usize,
                "quotient output not well defined"
            );
            assert_eq!(
                part.class_of[aut.next(q, x)],
                pi[c * m + x],
                "quotient transition not well defined"
            );
        }
    }
    let quotient =
        MealyAutomaton::from_raw(aut.name().map(str::to_owned), m, reps.len(), pi, lambda);
    (quotient, part)
}

/// `γ_A(k)` for `k = 1..=nmax`: the state count of the minimal automaton
/// equivalent to the `k`-th power. Builds every power explicitly, so it is
/// only meant for small `nmax`.
pub fn growth_by_minimization(
    a: &MealyAutomaton,
    nmax: usize,
    cap: usize,
) -> Result<Vec<u64>, AutomatonError> {
    (1..=nmax)
        .map(|k| power_with_cap(a, k, cap).map(|p| refine_partition(&p).class_count as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{power, word, StateId, DEFAULT_STATE_CAP};
    use proptest::prelude::*;

    fn a1() -> MealyAutomaton {
        MealyAutomaton::from_rows(
            None,
            &[
                vec![(0, 1), (1, 1)],
                vec![(0, 1), (2, 1)],
                vec![(1, 0), (1, 0)],
            ],
        )
        .unwrap()
    }

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

    /// Words of length <= `max_len` that tell states apart, by brute force.
    fn separated_by_words(aut: &MealyAutomaton, p: usize, q: usize, max_len: usize) -> bool {
        let m = aut.alphabet_size() as u32;
        for len in 1..=max_len {
            let total = (m as usize).pow(len as u32);
            for mut code in 0..total {
                let w: Vec<u32> = (0..len)
                    .map(|_| {
                        let x = code as u32 % m;
                        code /= m as usize;
                        x
                    })
                    .collect();
                let w = word(&w);
                if aut.apply(StateId(p as u32), &w).unwrap()
                    != aut.apply(StateId(q as u32), &w).unwrap()
                {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn a6_generators_are_pairwise_distinct() {
        let a = a6();
        let part = refine_partition(&a);
        assert_eq!(part.class_count, 3);
        for p in 0..3 {
            for q in p + 1..3 {
                assert!(separated_by_words(&a, p, q, 4));
            }
        }
    }

    #[test]
    fn duplicate_states_merge() {
        let a =
            MealyAutomaton::from_rows(None, &[vec![(1, 1), (0, 0)], vec![(0, 1), (1, 0)]]).unwrap();
        assert_eq!(refine_partition(&a).class_count, 1);
    }

    #[test]
    fn minimize_known_sizes() {
        assert_eq!(refine_partition(&power(&a2(), 2).unwrap()).class_count, 4);
        let id = MealyAutomaton::identity(3);
        assert_eq!(minimize(&id).0, id);
        assert_eq!(minimize(&power(&a3(), 4).unwrap()).0.state_count(), 8);
        assert_eq!(refine_partition(&power(&a1(), 2).unwrap()).class_count, 8);
    }

    #[test]
    fn growth_by_minimization_seed_values() {
        assert_eq!(
            growth_by_minimization(&a2(), 3, DEFAULT_STATE_CAP).unwrap(),
            vec![2, 4, 7]
        );
        assert_eq!(
            growth_by_minimization(&a1(), 3, DEFAULT_STATE_CAP).unwrap(),
            vec![3, 8, 14]
        );
        assert_eq!(
            growth_by_minimization(&MealyAutomaton::identity(2), 4, DEFAULT_STATE_CAP).unwrap(),
            vec![1, 1, 1, 1]
        );
        assert!(growth_by_minimization(&a1(), 8, 1000).is_err());
    }

    #[test]
    fn product_is_associative_up_to_behavior() {
        use crate::automaton::{disjoint_union, product};
        let (a, b, c) = (a6(), a1(), a6());
        let left = product(&product(&a, &b).unwrap(), &c).unwrap();
        let right = product(&a, &product(&b, &c).unwrap()).unwrap();
        // Row-major numbering coincides for both bracketings.
        let u = disjoint_union(&left, &right).unwrap();
        let part = refine_partition(&u);
        for q in 0..left.state_count() {
            assert!(part.same_class(q, left.state_count() + q));
        }
    }

    fn small_automaton() -> impl Strategy<Value = MealyAutomaton> {
        (1usize..=3, 1usize..=3).prop_flat_map(|(n, m)| {
            (
                proptest::collection::vec(0..n, n * m),
                proptest::collection::vec(0..m, n * m),
            )
                .prop_map(move |(pi, lambda)| {
                    MealyAutomaton::from_flat(None, m, n, pi, lambda).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn refinement_of_quotient_is_discrete(a in small_automaton()) {
            let (q, part) = minimize(&a);
            prop_assert_eq!(q.state_count(), part.class_count);
            let again = refine_partition(&q);
            prop_assert_eq!(again.class_count, q.state_count());
        }

        #[test]
        fn same_class_states_agree_on_short_words(a in small_automaton()) {
            let part = refine_partition(&a);
            for p in 0..a.state_count() {
                for q in p + 1..a.state_count() {
                    let separated = separated_by_words(&a, p, q, 6);
                    prop_assert_eq!(part.same_class(p, q), !separated);
                }
            }
        }

        #[test]
        fn apply_preserves_length_and_prefixes(a in small_automaton(), raw in proptest::collection::vec(0u32..3, 0..12), cut in 0usize..12) {
            let m = a.alphabet_size() as u32;
            let w: Vec<_> = raw.iter().map(|x| crate::automaton::Letter(x % m)).collect();
            let out = a.apply(StateId(0), &w).unwrap();
            prop_assert_eq!(out.len(), w.len());
            let cut = cut.min(w.len());
            let prefix = a.apply(StateId(0), &w[..cut]).unwrap();
            prop_assert_eq!(&out[..cut], prefix.as_slice());
        }
    }
}
