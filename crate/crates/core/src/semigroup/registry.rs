use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::automaton::{moore_refine, MealyAutomaton};
use crate::series::IntSequence;

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ElementId(pub u32);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Upper bound on registered elements plus pending candidates.
    pub element_cap: usize,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            element_cap: DEFAULT_ELEMENT_CAP,
        }
    }
}

/// One registered element, as exported in registry dumps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub id: u32,
    pub min_length: u32,
    pub sigma: Vec<u32>,
    pub sections: Vec<u32>,
}

/// Canonical store of the distinct transformations found so far.
///
/// Invariants: ids are dense and assigned in breadth-first order, so
/// `min_length` is non-decreasing in id; every section of a registered
/// element is registered; no two elements are behaviorally equal.
#[derive(Debug, Clone)]
pub struct ElementRegistry {
    m: usize,
    states: usize,
    sigma: Vec<u32>,
    sections: Vec<u32>,
    min_length: Vec<u32>,
    generators: Vec<ElementId>,
    /// `levels[k - 1]` is the sorted id set `S_k`.
    levels: Vec<Vec<ElementId>>,
    /// `(state, h) -> f_state · h` for every `h` in an enumerated level below
    /// the horizon.
    products: HashMap<(u32, u32), ElementId>,
    identity: Option<ElementId>,
}

impl ElementRegistry {
    fn new(m: usize, states: usize) -> Self {
        Self {
            m,
            states,
            sigma: Vec::new(),
            sections: Vec::new(),
            min_length: Vec::new(),
            generators: Vec::new(),
            levels: Vec::new(),
            products: HashMap::new(),
            identity: None,
        }
    }

    pub fn len(&self) -> usize {
        self.min_length.len()
    }

    pub fn is_empty(&self) -> bool {
        self.min_length.is_empty()
    }

    pub fn alphabet_size(&self) -> usize {
        self.m
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    /// Number of word lengths enumerated so far.
    pub fn horizon(&self) -> usize {
        self.levels.len()
    }

    pub fn sigma(&self, id: ElementId) -> &[u32] {
        &self.sigma[id.index() * self.m..(id.index() + 1) * self.m]
    }

    pub fn sections(&self, id: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        self.sections[id.index() * self.m..(id.index() + 1) * self.m]
            .iter()
            .map(|&s| ElementId(s))
    }

    pub fn section(&self, id: ElementId, x: usize) -> ElementId {
        ElementId(self.sections[id.index() * self.m + x])
    }

    pub fn min_length(&self, id: ElementId) -> usize {
        self.min_length[id.index()] as usize
    }

    /// Generator id of each automaton state; equal states share an id.
    pub fn generators(&self) -> &[ElementId] {
        &self.generators
    }

    /// The identity transformation, if some nonempty word realizes it.
    pub fn identity(&self) -> Option<ElementId> {
        self.identity
    }

    /// The sorted id set of elements representable by words of length `k`.
    pub fn level(&self, k: usize) -> Option<&[ElementId]> {
        k.checked_sub(1)
            .and_then(|i| self.levels.get(i))
            .map(Vec::as_slice)
    }

    /// `f_state · h`, for `h` in any enumerated level below the horizon.
    pub fn product(&self, state: usize, h: ElementId) -> Option<ElementId> {
        self.products.get(&(state as u32, h.0)).copied()
    }

    pub fn records(&self) -> Vec<ElementRecord> {
        (0..self.len())
            .map(|i| {
                let id = ElementId(i as u32);
                ElementRecord {
                    id: id.0,
                    min_length: self.min_length[i],
                    sigma: self.sigma(id).to_vec(),
                    sections: self.sections(id).map(|s| s.0).collect(),
                }
            })
            .collect()
    }

    /// Registry dump: a JSON array of `{id, min_length, sigma, sections}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records()).expect("registry records serialize")
    }
}

/// Counts for one word length `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub n: usize,
    pub delta: u64,
    pub spherical: u64,
    pub cumulative: u64,
}

/// Word growth `δ`, spherical growth `γ̂` and cumulative growth `Γ` for
/// `n = 1..=nmax`. Length 0 is not reported.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthTables {
    pub delta: Vec<u64>,
    pub spherical: Vec<u64>,
    pub cumulative: Vec<u64>,
    /// Length at which the identity was first realized, if it was.
    pub identity_length: Option<usize>,
}

impl GrowthTables {
    pub fn nmax(&self) -> usize {
        self.spherical.len()
    }

    pub fn delta_at(&self, n: usize) -> u64 {
        self.delta[n - 1]
    }

    pub fn spherical_at(&self, n: usize) -> u64 {
        self.spherical[n - 1]
    }

    pub fn cumulative_at(&self, n: usize) -> u64 {
        self.cumulative[n - 1]
    }

    fn push(&mut self, s: LevelStats) {
        self.delta.push(s.delta);
        self.spherical.push(s.spherical);
        self.cumulative.push(s.cumulative);
    }

    pub fn spherical_sequence(&self) -> IntSequence {
        IntSequence::from_u64(1, &self.spherical)
    }

    pub fn delta_sequence(&self) -> IntSequence {
        IntSequence::from_u64(1, &self.delta)
    }

    pub fn cumulative_sequence(&self) -> IntSequence {
        IntSequence::from_u64(1, &self.cumulative)
    }

    /// Word growth from length 0 with the identity counted at length 0, the
    /// usual convention for monoids. Without a realized identity this is
    /// `δ` with a leading 0.
    pub fn monoid_word_growth(&self) -> IntSequence {
        let mut values: Vec<i128> = Vec::with_capacity(self.nmax() + 1);
        values.push(i128::from(self.identity_length.is_some()));
        values.extend(self.delta.iter().map(|&d| d as i128));
        if let Some(k) = self.identity_length {
            values[k] -= 1;
        }
        IntSequence::new(0, values)
    }

    /// Cumulative growth from length 0 under the same monoid convention.
    pub fn monoid_cumulative(&self) -> IntSequence {
        self.monoid_word_growth().partial_sums()
    }

    /// CSV with header `n,delta,spherical,cumulative`, one row per `n >= 1`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,delta,spherical,cumulative\n");
        for n in 1..=self.nmax() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                n,
                self.delta_at(n),
                self.spherical_at(n),
                self.cumulative_at(n)
            );
        }
        out
    }
}

/// Enumeration stopped because the element cap would have been exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    /// The level that could not be completed.
    pub level: usize,
    pub element_cap: usize,
    pub required: usize,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    pub tables: GrowthTables,
    pub registry: ElementRegistry,
    pub truncated: Option<Truncation>,
}

/// Step-by-step enumerator: each call to [`GrowthEnumerator::step`]
/// registers the elements of the next word length.
pub struct GrowthEnumerator<'a> {
    aut: &'a MealyAutomaton,
    opts: EnumerationOptions,
    registry: ElementRegistry,
    tables: GrowthTables,
}

impl<'a> GrowthEnumerator<'a> {
    pub fn new(aut: &'a MealyAutomaton, opts: EnumerationOptions) -> Self {
        Self {
            aut,
            opts,
            registry: ElementRegistry::new(aut.alphabet_size(), aut.state_count()),
            tables: GrowthTables::default(),
        }
    }

    pub fn registry(&self) -> &ElementRegistry {
        &self.registry
    }

    pub fn tables(&self) -> &GrowthTables {
        &self.tables
    }

    pub fn into_parts(self) -> (GrowthTables, ElementRegistry) {
        (self.tables, self.registry)
    }

    /// Enumerates level `n = horizon + 1`.
    ///
    /// The candidates are the products `g · h` with `g` a generator and `h`
    /// in `S_{n-1}` (for `n = 1`, the generators themselves). A candidate's
    /// section at `x` is `g|σ_h(x) · h|x`, again a candidate of the same
    /// level, so the candidates form a closed automaton. Joint refinement
    /// with the registry decides which candidates are new.
    pub fn step(&mut self) -> Result<LevelStats, Truncation> {
        let aut = self.aut;
        let reg = &mut self.registry;
        let m = reg.m;
        let states = reg.states;
        let n = reg.levels.len() + 1;
        let prev: Vec<ElementId> = if n == 1 {
            Vec::new()
        } else {
            reg.levels[n - 2].clone()
        };
        let width = prev.len().max(1);
        let cand_count = states * width;
        let required = reg.len() + cand_count;
        if required > self.opts.element_cap {
            return Err(Truncation {
                level: n,
                element_cap: self.opts.element_cap,
                required,
            });
        }

        let pos: HashMap<u32, usize> = prev.iter().enumerate().map(|(i, h)| (h.0, i)).collect();
        let r = reg.len();
        let mut cand_sigma = Vec::with_capacity(cand_count * m);
        let mut cand_succ = Vec::with_capacity(cand_count * m);
        for g in 0..states {
            if n == 1 {
                for x in 0..m {
                    cand_sigma.push(aut.output(g, x) as u32);
                    cand_succ.push((r + aut.next(g, x)) as u32);
                }
            } else {
                for &h in &prev {
                    for x in 0..m {
                        let y = reg.sigma(h)[x] as usize;
                        let section = reg.section(h, x);
                        let p = *pos
                            .get(&section.0)
                            .expect("sections of S_(n-1) lie in S_(n-1)");
                        cand_sigma.push(aut.output(g, y) as u32);
                        cand_succ.push((r + aut.next(g, y) * width + p) as u32);
                    }
                }
            }
        }

        // Joint automaton: registry nodes first, then candidates.
        let total = r + cand_count;
        let mut labels = Vec::with_capacity(total);
        {
            let mut rows: HashMap<&[u32], u32> = HashMap::new();
            let all_rows = reg.sigma.chunks(m).chain(cand_sigma.chunks(m));
            for row in all_rows {
                let fresh = rows.len() as u32;
                labels.push(*rows.entry(row).or_insert(fresh));
            }
        }
        let mut succ = Vec::with_capacity(total * m);
        succ.extend_from_slice(&reg.sections);
        succ.extend_from_slice(&cand_succ);
        let (class, count) = moore_refine(&labels, &succ, m);

        let mut class_id: Vec<Option<u32>> = vec![None; count];
        for (i, &c) in class.iter().enumerate().take(r) {
            assert!(
                class_id[c as usize].is_none(),
                "registry elements must be pairwise distinct"
            );
            class_id[c as usize] = Some(i as u32);
        }
        let mut fresh: Vec<usize> = Vec::new();
        for c in 0..cand_count {
            let cl = class[r + c] as usize;
            if class_id[cl].is_none() {
                let id = reg.len() as u32;
                class_id[cl] = Some(id);
                reg.sigma.extend_from_slice(&cand_sigma[c * m..(c + 1) * m]);
                reg.sections.extend(std::iter::repeat_n(0, m));
                reg.min_length.push(n as u32);
                fresh.push(c);
            }
        }
        for &c in &fresh {
            let id = class_id[class[r + c] as usize].unwrap() as usize;
            for x in 0..m {
                let target = cand_succ[c * m + x] as usize;
                reg.sections[id * m + x] = class_id[class[target] as usize].unwrap();
            }
        }

        let mut level: Vec<ElementId> = Vec::with_capacity(cand_count);
        for g in 0..states {
            for j in 0..width {
                let c = g * width + j;
                let id = ElementId(class_id[class[r + c] as usize].unwrap());
                if n == 1 {
                    reg.generators.push(id);
                } else {
                    reg.products.insert((g as u32, prev[j].0), id);
                }
                level.push(id);
            }
        }
        level.sort_unstable();
        level.dedup();

        let delta = fresh.len() as u64;
        if reg.identity.is_none() {
            let identity_row: Vec<u32> = (0..m as u32).collect();
            let found = fresh
                .iter()
                .map(|&c| ElementId(class_id[class[r + c] as usize].unwrap()))
                .find(|&id| {
                    reg.sigma(id) == identity_row.as_slice() && reg.sections(id).all(|s| s == id)
                });
            if let Some(id) = found {
                reg.identity = Some(id);
                self.tables.identity_length = Some(n);
            }
        }
        let spherical = level.len() as u64;
        reg.levels.push(level);
        let cumulative = reg.len() as u64;
        let stats = LevelStats {
            n,
            delta,
            spherical,
            cumulative,
        };
        self.tables.push(stats);
        Ok(stats)
    }
}

/// Enumerates `S_1, …, S_nmax` and reports growth tables. On hitting the
/// element cap the tables cover the completed levels and `truncated` says
/// where enumeration stopped.
pub fn enumerate_growth(
    aut: &MealyAutomaton,
    nmax: usize,
    opts: EnumerationOptions,
) -> Enumeration {
    let mut e = GrowthEnumerator::new(aut, opts);
    let mut truncated = None;
    for _ in 0..nmax {
        if let Err(t) = e.step() {
            truncated = Some(t);
            break;
        }
    }
    let (tables, registry) = e.into_parts();
    Enumeration {
        tables,
        registry,
        truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{growth_by_minimization, DEFAULT_STATE_CAP};

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

    #[test]
    fn a2_spherical_growth() {
        let e = enumerate_growth(&a2(), 7, EnumerationOptions::default());
        assert_eq!(e.tables.spherical, vec![2, 4, 7, 8, 9, 8, 9]);
        assert!(e.truncated.is_none());
    }

    #[test]
    fn a3_first_descent_values() {
        let e = enumerate_growth(&a3(), 10, EnumerationOptions::default());
        assert_eq!(e.tables.spherical_at(9), 21);
        assert_eq!(e.tables.spherical_at(10), 20);
    }

    /// Distinct transformations among all words of length <= 2, by acting on
    /// every word of length 6 (enough to separate these small products).
    fn brute_force_spherical(aut: &MealyAutomaton, len: usize) -> usize {
        use crate::automaton::{Letter, StateId};
        let m = aut.alphabet_size();
        let probe_len = 6;
        let probes: Vec<Vec<Letter>> = (0..m.pow(probe_len as u32))
            .map(|mut code| {
                (0..probe_len)
                    .map(|_| {
                        let x = code % m;
                        code /= m;
                        Letter(x as u32)
                    })
                    .collect()
            })
            .collect();
        let n = aut.state_count();
        let mut seen = std::collections::HashSet::new();
        for mut code in 0..n.pow(len as u32) {
            let word: Vec<usize> = (0..len)
                .map(|_| {
                    let g = code % n;
                    code /= n;
                    g
                })
                .collect();
            let image: Vec<Vec<Letter>> = probes
                .iter()
                .map(|p| {
                    word.iter()
                        .rev()
                        .fold(p.clone(), |w, &g| aut.apply(StateId(g as u32), &w).unwrap())
                })
                .collect();
            seen.insert(image);
        }
        seen.len()
    }

    #[test]
    fn a6_first_levels_match_brute_force() {
        let e = enumerate_growth(&a6(), 2, EnumerationOptions::default());
        assert_eq!(e.tables.spherical, vec![3, 7]);
        assert_eq!(brute_force_spherical(&a6(), 1), 3);
        assert_eq!(brute_force_spherical(&a6(), 2), 7);
        // f0 f0 is the identity, realized at length 2.
        assert_eq!(e.tables.identity_length, Some(2));
        assert!(e.registry.identity().is_some());
    }

    #[test]
    fn registry_is_closed_and_ordered() {
        let e = enumerate_growth(&a6(), 8, EnumerationOptions::default());
        let reg = &e.registry;
        for i in 0..reg.len() {
            let id = ElementId(i as u32);
            for s in reg.sections(id) {
                assert!(reg.min_length(s) <= reg.min_length(id));
            }
            if i > 0 {
                assert!(reg.min_length(ElementId(i as u32 - 1)) <= reg.min_length(id));
            }
        }
        for k in 1..=8 {
            for &h in reg.level(k).unwrap() {
                for s in reg.sections(h) {
                    assert!(
                        reg.level(k).unwrap().binary_search(&s).is_ok(),
                        "section of S_k outside S_k"
                    );
                }
            }
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = enumerate_growth(&a6(), 9, EnumerationOptions::default());
        let b = enumerate_growth(&a6(), 9, EnumerationOptions::default());
        assert_eq!(a.tables, b.tables);
        assert_eq!(a.registry.records(), b.registry.records());
    }

    #[test]
    fn truncation_is_explicit() {
        let e = enumerate_growth(&a6(), 10, EnumerationOptions { element_cap: 40 });
        let t = e.truncated.expect("cap of 40 elements must truncate");
        assert_eq!(e.tables.nmax() + 1, t.level);
        assert!(t.required > 40);
    }

    #[test]
    fn matches_minimization_oracle() {
        for a in [a2(), a3(), a6()] {
            let e = enumerate_growth(&a, 5, EnumerationOptions::default());
            assert_eq!(
                e.tables.spherical,
                growth_by_minimization(&a, 5, DEFAULT_STATE_CAP).unwrap()
            );
        }
    }

    #[test]
    fn csv_and_monoid_convention() {
        let e = enumerate_growth(&a6(), 3, EnumerationOptions::default());
        let csv = e.tables.to_csv();
        assert!(csv.starts_with("n,delta,spherical,cumulative\n1,3,3,3\n"));
        // Identity moves from length 2 to length 0.
        let d = e.tables.monoid_word_growth();
        assert_eq!(d.values(), &[1, 3, 4, 6]);
        assert_eq!(e.tables.monoid_cumulative().values(), &[1, 4, 8, 14]);
    }

    #[test]
    fn registry_dump_is_json_array() {
        let e = enumerate_growth(&a2(), 2, EnumerationOptions::default());
        let v: serde_json::Value = serde_json::from_str(&e.registry.to_json()).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 6);
        assert_eq!(v[0]["min_length"], 1);
    }
}
