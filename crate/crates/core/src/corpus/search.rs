//! Exhaustive search of small automata by growth prefix.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::MealyAutomaton;
use crate::semigroup::{EnumerationOptions, GrowthEnumerator};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchQuery {
    pub n_states: usize,
    pub m_letters: usize,
    /// Required spherical growth from `n = 1`.
    pub prefix: Vec<u64>,
    /// Keep only the lexicographically least table of each state-relabeling
    /// class.
    pub canonical: bool,
    /// Keep only automata with a state acting as the identity.
    pub require_identity: bool,
    /// Most tables to scan; the scan stops early past it.
    pub max_tables: Option<u64>,
    /// Element cap for each enumeration.
    pub element_cap: usize,
}

impl SearchQuery {
    pub fn new(n_states: usize, m_letters: usize, prefix: Vec<u64>) -> Self {
        Self {
            n_states,
            m_letters,
            prefix,
            canonical: false,
            require_identity: false,
            max_tables: None,
            element_cap: 1 << 20,
        }
    }

    /// Size of the table space, `(n·m)^(n·m)`, if it fits.
    pub fn table_count(&self) -> Option<u64> {
        let cells = u32::try_from(self.n_states * self.m_letters).ok()?;
        ((self.n_states * self.m_letters) as u64).checked_pow(cells)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("state and letter counts must be positive")]
    Empty,
    #[error("the table space does not fit in 64 bits")]
    TooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    /// Matching automata in order of [`MealyAutomaton::table_key`].
    pub hits: Vec<MealyAutomaton>,
    pub scanned: u64,
    /// Whether `max_tables` stopped the scan before the end of the space.
    pub truncated: bool,
    /// Tables whose enumeration hit the element cap before deciding.
    pub capped: u64,
}

/// Whether state `q` induces the identity transformation: every state it
/// reaches copies its input letter.
pub fn is_identity_state(a: &MealyAutomaton, q: usize) -> bool {
    let mut seen = vec![false; a.state_count()];
    let mut queue = VecDeque::from([q]);
    seen[q] = true;
    while let Some(s) = queue.pop_front() {
        for x in 0..a.alphabet_size() {
            if a.output(s, x) != x {
                return false;
            }
            let t = a.next(s, x);
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    true
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Least relabeling of `a` by [`MealyAutomaton::table_key`].
pub fn canonical_form(a: &MealyAutomaton) -> MealyAutomaton {
    permutations(a.state_count())
        .into_iter()
        .map(|p| a.relabel_states(&p))
        .min_by_key(MealyAutomaton::table_key)
        .expect("at least one permutation")
}

fn decode(index: u64, n: usize, m: usize) -> MealyAutomaton {
    let cells = n * m;
    let base = cells as u64;
    let mut digits = vec![0usize; cells];
    let mut rest = index;
    // The last cell varies fastest, so index order is table-key order.
    for d in digits.iter_mut().rev() {
        *d = (rest % base) as usize;
        rest /= base;
    }
    let pi = digits.iter().map(|d| d / m).collect();
    let lambda = digits.iter().map(|d| d % m).collect();
    MealyAutomaton::from_flat(None, m, n, pi, lambda).expect("decoded digits are in range")
}

enum Outcome {
    Match,
    Miss,
    Capped,
}

fn check(a: &MealyAutomaton, q: &SearchQuery, perms: &[Vec<usize>]) -> Outcome {
    if q.canonical {
        let key = a.table_key();
        if perms.iter().any(|p| a.relabel_states(p).table_key() < key) {
            return Outcome::Miss;
        }
    }
    if q.require_identity && !(0..a.state_count()).any(|s| is_identity_state(a, s)) {
        return Outcome::Miss;
    }
    let mut e = GrowthEnumerator::new(
        a,
        EnumerationOptions {
            element_cap: q.element_cap,
        },
    );
    for &want in &q.prefix {
        match e.step() {
            Ok(stats) if stats.spherical == want => {}
            Ok(_) => return Outcome::Miss,
            Err(_) => return Outcome::Capped,
        }
    }
    Outcome::Match
}

/// Scans the table space in index order, split across threads, and returns
/// the hits sorted by table key.
pub fn search_automata(q: &SearchQuery) -> Result<SearchResult, SearchError> {
    if q.n_states == 0 || q.m_letters == 0 {
        return Err(SearchError::Empty);
    }
    let total = q.table_count().ok_or(SearchError::TooLarge)?;
    let limit = q.max_tables.map_or(total, |b| b.min(total));
    let perms = permutations(q.n_states);
    let threads = std::thread::available_parallelism()
        .map_or(1, |t| t.get())
        .min(16) as u64;
    let chunk = limit.div_ceil(threads.max(1)).max(1);

    let parts: Vec<(Vec<MealyAutomaton>, u64)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                let perms = &perms;
                s.spawn(move || {
                    let (lo, hi) = (t * chunk, ((t + 1) * chunk).min(limit));
                    let mut hits = Vec::new();
                    let mut capped = 0;
                    for i in lo..hi {
                        let a = decode(i, q.n_states, q.m_letters);
                        match check(&a, q, perms) {
                            Outcome::Match => hits.push(a),
                            Outcome::Miss => {}
                            Outcome::Capped => capped += 1,
                        }
                    }
                    (hits, capped)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });

    let mut hits: Vec<MealyAutomaton> = Vec::new();
    let mut capped = 0;
    for (h, c) in parts {
        hits.extend(h);
        capped += c;
    }
    hits.sort_by_key(MealyAutomaton::table_key);
    let hits = hits
        .into_iter()
        .enumerate()
        .map(|(i, a)| a.with_name(format!("hit{i}")))
        .collect();
    Ok(SearchResult {
        hits,
        scanned: limit,
        truncated: limit < total,
        capped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_orders_by_key() {
        let a = decode(0, 2, 2);
        let b = decode(1, 2, 2);
        assert!(a.table_key() < b.table_key());
        assert_eq!(decode(3, 1, 2).table_key(), vec![0, 1, 0, 1]);
    }

    #[test]
    fn one_state_all_ones() {
        let q = SearchQuery::new(1, 2, vec![1, 1, 1]);
        let r = search_automata(&q).unwrap();
        assert_eq!(r.scanned, 4);
        assert_eq!(r.hits.len(), 4);
        assert!(!r.truncated);
    }

    #[test]
    fn canonical_keeps_one_per_class() {
        let mut q = SearchQuery::new(2, 2, vec![]);
        let all = search_automata(&q).unwrap().hits;
        q.canonical = true;
        let canon = search_automata(&q).unwrap().hits;
        assert_eq!(all.len(), 256);
        let mut classes: Vec<_> = all.iter().map(|a| canonical_form(a).table_key()).collect();
        classes.sort();
        classes.dedup();
        assert_eq!(canon.len(), classes.len());
        assert!(canon
            .iter()
            .all(|a| canonical_form(a).table_key() == a.table_key()));
    }

    #[test]
    fn budget_truncates() {
        let q = SearchQuery {
            max_tables: Some(10),
            ..SearchQuery::new(2, 2, vec![])
        };
        let r = search_automata(&q).unwrap();
        assert_eq!((r.scanned, r.hits.len(), r.truncated), (10, 10, true));
    }

    #[test]
    fn identity_states() {
        let id = MealyAutomaton::identity(3);
        assert!(is_identity_state(&id, 0));
        let a =
            MealyAutomaton::from_rows(None, &[vec![(1, 0), (1, 1)], vec![(1, 1), (1, 0)]]).unwrap();
        assert!(!is_identity_state(&a, 0));
    }
}
