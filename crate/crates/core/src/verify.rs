//! Machine-readable verification of the corpus: per-entry suites and the
//! twelve-criterion suite behind `verify all`.

use std::fmt::Write as _;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::automaton::{growth_by_minimization, MealyAutomaton, DEFAULT_STATE_CAP};
use crate::corpus::{
    a5_labelings, a5_query, a5_relations, all_entries, build_bm, enumerate_normal_forms,
    get_builtin, lookup, search_automata, CorpusEntry, CorpusError, NormalFormGrammar,
};
use crate::semigroup::{
    check_relations, enumerate_growth, EnumerationOptions, GrowthTables, RelationSet,
};
use crate::series::{
    detect_composite, expand_a5_gamma, expand_a6_gamma, expand_a6_semigroup_gamma, fibonacci,
    partitions_pow2_table, CompositeVerdict, IntSequence, PartForm, PowerSeries,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported for information; never fails the suite.
    Diagnostic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub range: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(subject: &str) -> Self {
        Self {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Tab-separated lines: status, id, anchor, range, expected, got.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("status\tid\tanchor\trange\texpected\tgot\n");
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Diagnostic => "diagnostic",
            };
            let _ = writeln!(
                out,
                "{status}\t{}\t{}\t{}\t{}\t{}",
                c.id, c.anchor, c.range, c.expected, c.got
            );
        }
        out
    }
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn check(id: &str, anchor: &str, range: &str, pass: bool, expected: String, got: String) -> Check {
    Check {
        id: id.into(),
        anchor: anchor.into(),
        status: if pass { Status::Pass } else { Status::Fail },
        range: range.into(),
        expected,
        got,
    }
}

fn check_values(id: &str, anchor: &str, range: &str, expected: &[i128], got: &[i128]) -> Check {
    check(
        id,
        anchor,
        range,
        expected == got,
        join(expected),
        join(got),
    )
}

fn diagnostic(id: &str, anchor: &str, range: &str, expected: String, got: String) -> Check {
    Check {
        id: id.into(),
        anchor: anchor.into(),
        status: Status::Diagnostic,
        range: range.into(),
        expected,
        got,
    }
}

fn spherical(a: &MealyAutomaton, nmax: usize) -> Vec<i128> {
    enumerate_growth(a, nmax, EnumerationOptions::default())
        .tables
        .spherical
        .iter()
        .map(|&v| v as i128)
        .collect()
}

fn series_ints(s: &PowerSeries) -> Vec<i128> {
    s.to_int_sequence()
        .expect("growth series have integer coefficients")
        .values()
        .to_vec()
}

/// Problems with `δ(n) ≤ γ̂(n) ≤ Γ(n) = Σδ` and monotone `Γ`, if any.
pub fn inequality_chain(t: &GrowthTables) -> Result<(), String> {
    let mut sum = 0u64;
    for i in 0..t.delta.len() {
        let (d, s, c) = (t.delta[i], t.spherical[i], t.cumulative[i]);
        sum += d;
        let n = i + 1;
        if d > s || s > c {
            return Err(format!("n = {n}: delta {d}, spherical {s}, cumulative {c}"));
        }
        if c != sum {
            return Err(format!("n = {n}: cumulative {c} but delta sums to {sum}"));
        }
        if i > 0 && c < t.cumulative[i - 1] {
            return Err(format!("n = {n}: cumulative decreases"));
        }
    }
    Ok(())
}

fn relation_check(id: &str, entry: &CorpusEntry, set: &RelationSet, pbound: i64) -> Check {
    let gens = set.generator_map(entry.automaton.state_count());
    match check_relations(&entry.automaton, set, &gens, pbound) {
        Ok(r) => {
            let failing: Vec<String> = r
                .failures()
                .map(|f| format!("{} = {}", f.lhs, f.rhs))
                .collect();
            let got = if failing.is_empty() {
                format!("{} instances hold", r.instances.len())
            } else {
                format!(
                    "{} of {} fail: {}",
                    failing.len(),
                    r.instances.len(),
                    failing.join("; ")
                )
            };
            check(
                id,
                &set.anchor,
                &format!("exponents <= {pbound}"),
                failing.is_empty(),
                "all hold".into(),
                got,
            )
        }
        Err(e) => check(
            id,
            &set.anchor,
            &format!("exponents <= {pbound}"),
            false,
            "all hold".into(),
            e.to_string(),
        ),
    }
}

/// Normal-form counts against word growth on `1..=nmax`.
fn normal_form_check(id: &str, entry: &CorpusEntry, nmax: usize, hard: bool) -> Option<Check> {
    let grammar = NormalFormGrammar::builtin(entry.normal_form.as_deref()?)?;
    let counts = enumerate_normal_forms(&grammar, nmax);
    let delta = enumerate_growth(&entry.automaton, nmax, EnumerationOptions::default())
        .tables
        .delta_sequence();
    let anchor = format!("{}.normal-form", entry.name);
    let range = format!("1..={nmax}");
    Some(if hard {
        check_values(id, &anchor, &range, delta.values(), counts.values())
    } else {
        let mismatches: Vec<usize> = delta
            .indexed()
            .filter(|&(n, d)| counts.at(n) != d)
            .map(|(n, _)| n)
            .collect();
        let note = if mismatches.is_empty() {
            String::new()
        } else {
            format!(" (differs at n = {})", join(mismatches))
        };
        diagnostic(
            id,
            &anchor,
            &range,
            join(delta.values()),
            format!("{}{note}", join(counts.values())),
        )
    })
}

/// The checks for one corpus entry: growth against its closed form,
/// minimization oracle, relations, normal forms and the inequality chain.
pub fn verify_entry(entry: &CorpusEntry, pbound: i64) -> VerificationReport {
    let name = &entry.name;
    let mut report = VerificationReport::new(name);
    let nmax = entry.verified_nmax;
    let run = enumerate_growth(&entry.automaton, nmax, EnumerationOptions::default());
    let got: Vec<i128> = run.tables.spherical.iter().map(|&v| v as i128).collect();
    let expected = entry
        .expected
        .tabulate(1, nmax)
        .map(|s| s.values().to_vec())
        .unwrap_or_default();
    report.checks.push(check_values(
        &format!("{name}.growth"),
        &format!("{name}.growth"),
        &format!("1..={nmax}"),
        &expected,
        &got,
    ));
    let descent = IntSequence::new(1, got.clone()).first_descent();
    report.checks.push(diagnostic(
        &format!("{name}.first-descent"),
        &format!("{name}.growth"),
        &format!("1..={nmax}"),
        "-".into(),
        descent.map_or("none".into(), |n| n.to_string()),
    ));
    let oracle = growth_by_minimization(&entry.automaton, 6.min(nmax), DEFAULT_STATE_CAP)
        .map(|v| v.into_iter().map(i128::from).collect::<Vec<_>>());
    report.checks.push(match oracle {
        Ok(v) => check_values(
            &format!("{name}.oracle"),
            "minimization-oracle",
            "1..=6",
            &got[..v.len()],
            &v,
        ),
        Err(e) => check(
            &format!("{name}.oracle"),
            "minimization-oracle",
            "1..=6",
            false,
            join(&got[..6]),
            e.to_string(),
        ),
    });
    for (i, set) in entry.relations.iter().enumerate() {
        report.checks.push(relation_check(
            &format!("{name}.relations.{i}"),
            entry,
            set,
            pbound,
        ));
    }
    if let Some(c) = normal_form_check(
        &format!("{name}.normal-form"),
        entry,
        12.min(nmax),
        name == "a4",
    ) {
        report.checks.push(c);
    }
    let chain = inequality_chain(&run.tables);
    report.checks.push(check(
        &format!("{name}.inequality-chain"),
        "growth.inequality-chain",
        &format!("1..={nmax}"),
        chain.is_ok(),
        "holds".into(),
        chain.err().unwrap_or_else(|| "holds".into()),
    ));
    report
}

fn builtin(name: &str) -> CorpusEntry {
    get_builtin(name).expect("built-in entry")
}

/// A2 growth and first descent.
pub fn criterion_1() -> Vec<Check> {
    let e = builtin("a2");
    let got = spherical(&e.automaton, 30);
    let expected: Vec<i128> = (1..=30)
        .map(|n| e.expected.eval(n).expect("defined"))
        .collect();
    vec![
        check_values("c1.a2.growth", "a2.growth", "1..=30", &expected, &got),
        check_descent("c1.a2.first-descent", "a2.growth", &got, 6),
    ]
}

fn check_descent(id: &str, anchor: &str, values: &[i128], want: usize) -> Check {
    let got = IntSequence::new(1, values.to_vec()).first_descent();
    check(
        id,
        anchor,
        &format!("1..={}", values.len()),
        got == Some(want),
        want.to_string(),
        format!("{got:?}"),
    )
}

/// A3 growth and first descent.
pub fn criterion_2() -> Vec<Check> {
    let e = builtin("a3");
    let got = spherical(&e.automaton, 40);
    let expected: Vec<i128> = (1..=40)
        .map(|n| e.expected.eval(n).expect("defined"))
        .collect();
    vec![
        check_values("c2.a3.growth", "a3.growth", "1..=40", &expected, &got),
        check_descent("c2.a3.first-descent", "a3.growth", &got, 10),
    ]
}

/// A4 growth, the values around the first descent, and the descent itself.
pub fn criterion_3() -> Vec<Check> {
    let e = builtin("a4");
    let got = spherical(&e.automaton, 30);
    let expected: Vec<i128> = (1..=30)
        .map(|n| e.expected.eval(n).expect("defined"))
        .collect();
    vec![
        check_values("c3.a4.growth", "a4.growth", "1..=30", &expected, &got),
        check_values(
            "c3.a4.values-26-27",
            "a4.growth",
            "26..=27",
            &[617, 613],
            &got[25..27],
        ),
        check_descent("c3.a4.first-descent", "a4.growth", &got, 27),
    ]
}

/// A1 growth and its composite structure.
pub fn criterion_4() -> Vec<Check> {
    let e = builtin("a1");
    let got = spherical(&e.automaton, 20);
    let expected: Vec<i128> = (1..=20)
        .map(|n| e.expected.eval(n).expect("defined"))
        .collect();
    let verdict = detect_composite(&IntSequence::new(1, got.clone()), 4, 3);
    let ok = matches!(&verdict, CompositeVerdict::Composite { k: 2, parts, .. }
        if parts.iter().all(|p| matches!(p, PartForm::Exponential(_))));
    let got_verdict = match &verdict {
        CompositeVerdict::Composite { k, parts, .. } => format!(
            "k={k} parts={}",
            join(
                parts
                    .iter()
                    .map(|p| if matches!(p, PartForm::Exponential(_)) {
                        "exponential"
                    } else {
                        "polynomial"
                    })
            )
        ),
        other => format!("{other:?}"),
    };
    vec![
        check_values("c4.a1.growth", "a1.growth", "1..=20", &expected, &got),
        check(
            "c4.a1.composite",
            "a1.growth.composite",
            "1..=20",
            ok,
            "k=2 parts=exponential,exponential".into(),
            got_verdict,
        ),
    ]
}

/// B3..B5 growth, the (m−2)-th difference, and the first-difference identity.
pub fn criterion_5() -> Vec<Check> {
    let mut checks = Vec::new();
    let mut previous: Option<Vec<i128>> = None;
    for m in 3..=5 {
        let e = build_bm(m).expect("m >= 3");
        let nmax = e.verified_nmax;
        let got = spherical(&e.automaton, nmax);
        let expected: Vec<i128> = (1..=nmax)
            .map(|n| e.expected.eval(n).expect("defined"))
            .collect();
        checks.push(check_values(
            &format!("c5.b{m}.growth"),
            &format!("b{m}.growth"),
            &format!("1..={nmax}"),
            &expected,
            &got,
        ));

        let seq = IntSequence::new(1, got[..20].to_vec());
        let diff = seq.finite_difference(m - 2).expect("enough values");
        let want: Vec<i128> = (m - 1..=20)
            .map(|n| ((n - (m - 1)) / 2) as i128 + 2)
            .collect();
        let have: Vec<i128> = (m - 1..=20).map(|n| diff.at(n)).collect();
        let range = format!("{}..=20", m - 1);
        checks.push(check_values(
            &format!("c5.b{m}.difference"),
            &format!("b{m}.growth.difference"),
            &range,
            &want,
            &have,
        ));
        let doubled = (m - 1..20).step_by(2).all(|n| diff.at(n) == diff.at(n + 1));
        checks.push(check(
            &format!("c5.b{m}.difference-doubled"),
            &format!("b{m}.growth.difference"),
            &range,
            doubled,
            "pairs equal".into(),
            if doubled {
                "pairs equal".into()
            } else {
                join(&have)
            },
        ));
        if let Some(prev) = &previous {
            let first = IntSequence::new(1, got[..20].to_vec())
                .finite_difference(1)
                .expect("enough values");
            let have: Vec<i128> = (2..=20).map(|n| first.at(n)).collect();
            let want: Vec<i128> = (2..=20).map(|n| prev[n - 2]).collect();
            checks.push(check_values(
                &format!("c5.b{m}.first-difference"),
                &format!("b{m}.growth.first-difference"),
                "2..=20",
                &want,
                &have,
            ));
        }
        previous = Some(got);
    }
    checks
}

/// A6 closed form, both rational series, and the Fibonacci second differences.
pub fn criterion_6() -> Vec<Check> {
    let e = builtin("a6");
    let got = spherical(&e.automaton, 24);
    let expected: Vec<i128> = (1..=24)
        .map(|n| e.expected.eval(n).expect("defined"))
        .collect();
    let aut_series = series_ints(&expand_a6_gamma(24));
    let semi_series = series_ints(&expand_a6_semigroup_gamma(24));
    let mut with_zero = vec![0];
    with_zero.extend_from_slice(&got);
    let monoid = enumerate_growth(&e.automaton, 24, EnumerationOptions::default())
        .tables
        .monoid_cumulative();
    let shifted: Vec<i128> = aut_series.iter().map(|v| v + 1).collect();

    let second = IntSequence::new(0, with_zero.clone())
        .finite_difference(2)
        .expect("enough values");
    let mut have = Vec::new();
    let mut want = Vec::new();
    for k in 0..=10 {
        if k >= 1 {
            have.push(second.at(2 * k + 1));
            want.push(fibonacci(k + 1));
        }
        have.push(second.at(2 * k + 2));
        want.push(fibonacci(k + 1));
    }
    vec![
        check_values("c6.a6.growth", "a6.growth", "1..=24", &expected, &got),
        check_values(
            "c6.a6.series",
            "a6.series",
            "0..=24",
            &with_zero,
            &aut_series,
        ),
        check_values(
            "c6.a6.semigroup-series-shift",
            "a6.semigroup-series",
            "0..=24",
            &shifted,
            &semi_series,
        ),
        check_values(
            "c6.a6.semigroup-series",
            "a6.semigroup-series",
            "0..=24",
            monoid.values(),
            &semi_series,
        ),
        check_values(
            "c6.a6.second-difference",
            "a6.growth.second-difference",
            "3..=22",
            &want,
            &have,
        ),
    ]
}

/// A5 series: second difference, its recurrence and doubled values.
pub fn criterion_7() -> Vec<Check> {
    let c = series_ints(&expand_a5_gamma(200));
    let at = |n: i64| if n < 0 { 0 } else { c[n as usize] };
    let d: Vec<i128> = (0..=200i64)
        .map(|n| at(n) - 2 * at(n - 1) + at(n - 2))
        .collect();
    let parts: Vec<i128> = partitions_pow2_table(60)
        .into_iter()
        .map(|v| v as i128)
        .collect();
    let rec_ok: Vec<usize> = (3..=200)
        .filter(|&n| d[n] != d[..=(n - 1) / 2].iter().sum::<i128>())
        .collect();
    let doubled: Vec<usize> = (2..=60).step_by(2).filter(|&n| d[n] != d[n - 1]).collect();
    vec![
        check_values(
            "c7.a5.partitions",
            "a5.series.second-difference",
            "0..=60",
            &parts,
            &d[..=60],
        ),
        check_values(
            "c7.a5.seed",
            "a5.series.second-difference",
            "0..=2",
            &[1, 1, 1],
            &d[..3],
        ),
        check(
            "c7.a5.recurrence",
            "a5.series.second-difference.recurrence",
            "3..=200",
            rec_ok.is_empty(),
            "holds".into(),
            if rec_ok.is_empty() {
                "holds".into()
            } else {
                format!("fails at {}", join(rec_ok))
            },
        ),
        check(
            "c7.a5.doubled",
            "a5.series.second-difference",
            "2..=60 even",
            doubled.is_empty(),
            "holds".into(),
            if doubled.is_empty() {
                "holds".into()
            } else {
                format!("fails at {}", join(doubled))
            },
        ),
    ]
}

/// A5 search in both variants, with the dyadic relation family on each hit.
pub fn criterion_8(pbound: i64) -> Vec<Check> {
    let mut checks = Vec::new();
    let relations = a5_relations();
    for require_identity in [true, false] {
        let variant = if require_identity { "identity" } else { "any" };
        let q = a5_query(require_identity);
        let result = search_automata(&q).expect("3x2 space is searchable");
        let id = format!("c8.a5.search.{variant}");
        let range = format!("n=1..={}", q.prefix.len());
        let found = format!("{} hits in {} tables", result.hits.len(), result.scanned);
        if require_identity {
            checks.push(check(
                &id,
                "a5.search",
                &range,
                !result.hits.is_empty(),
                ">= 1 hit".into(),
                found,
            ));
        } else {
            checks.push(diagnostic(
                &id,
                "a5.search",
                &range,
                ">= 1 hit".into(),
                found,
            ));
        }
        let mut failing = Vec::new();
        for h in &result.hits {
            let ok = a5_labelings(h)
                .iter()
                .any(|g| check_relations(h, &relations, g, pbound).is_ok_and(|r| r.all_hold()));
            if !ok {
                failing.push(join(h.table_key()));
            }
        }
        checks.push(check(
            &format!("c8.a5.relations.{variant}"),
            &relations.anchor,
            "k<=4, p<=1",
            failing.is_empty(),
            "every hit satisfies the family".into(),
            if failing.is_empty() {
                format!("{} hits satisfy it", result.hits.len())
            } else {
                format!("failing tables: {}", failing.join(" | "))
            },
        ));
    }
    checks
}

/// Minimization oracle against enumeration for every corpus automaton.
pub fn criterion_9() -> Vec<Check> {
    all_entries()
        .iter()
        .map(|e| {
            let bfs = spherical(&e.automaton, 6);
            let id = format!("c9.{}.oracle", e.name);
            match growth_by_minimization(&e.automaton, 6, DEFAULT_STATE_CAP) {
                Ok(v) => check_values(
                    &id,
                    "minimization-oracle",
                    "1..=6",
                    &bfs,
                    &v.into_iter().map(i128::from).collect::<Vec<_>>(),
                ),
                Err(err) => check(
                    &id,
                    "minimization-oracle",
                    "1..=6",
                    false,
                    join(&bfs),
                    err.to_string(),
                ),
            }
        })
        .collect()
}

/// Every relation fixture of the corpus.
pub fn criterion_10(pbound: i64) -> Vec<Check> {
    all_entries()
        .iter()
        .flat_map(|e| {
            e.relations.iter().enumerate().map(move |(i, s)| {
                relation_check(&format!("c10.{}.relations.{i}", e.name), e, s, pbound)
            })
        })
        .collect()
}

/// Normal-form counts: A4 exactly, the others as diagnostics.
pub fn criterion_11() -> Vec<Check> {
    let mut checks = Vec::new();
    for name in ["a4", "a1", "b3", "b4", "b5"] {
        let e = lookup(name).expect("corpus entry");
        if let Some(c) = normal_form_check(&format!("c11.{name}.normal-form"), &e, 12, name == "a4")
        {
            checks.push(c);
        }
    }
    let c = series_ints(&expand_a5_gamma(12));
    let delta: Vec<i128> = (0..=12)
        .map(|n| c[n] - if n > 0 { c[n - 1] } else { 0 })
        .collect();
    let counts = enumerate_normal_forms(&NormalFormGrammar::a5(), 12);
    let mismatches: Vec<usize> = (0..=12).filter(|&n| counts.at(n) != delta[n]).collect();
    let note = if mismatches.is_empty() {
        String::new()
    } else {
        format!(" (differs at n = {})", join(mismatches))
    };
    checks.push(diagnostic(
        "c11.a5.normal-form",
        "a5.normal-form",
        "0..=12",
        join(&delta),
        format!("{}{note}", join(counts.values())),
    ));
    checks
}

/// A random automaton with 1 to 3 states over 2 or 3 letters.
pub fn random_automaton(rng: &mut impl Rng) -> MealyAutomaton {
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(2..=3);
    let pi = (0..n * m).map(|_| rng.gen_range(0..n)).collect();
    let lambda = (0..n * m).map(|_| rng.gen_range(0..m)).collect();
    MealyAutomaton::from_flat(None, m, n, pi, lambda).expect("entries in range")
}

/// The inequality chain on every corpus run and on 100 seeded random automata.
pub fn criterion_12() -> Vec<Check> {
    let mut failures = Vec::new();
    let mut runs = 0;
    for e in all_entries() {
        let t = enumerate_growth(
            &e.automaton,
            e.verified_nmax.min(12),
            EnumerationOptions::default(),
        )
        .tables;
        runs += 1;
        if let Err(msg) = inequality_chain(&t) {
            failures.push(format!("{}: {msg}", e.name));
        }
    }
    let mut rng = StdRng::seed_from_u64(12);
    for i in 0..100 {
        let a = random_automaton(&mut rng);
        let t = enumerate_growth(&a, 6, EnumerationOptions::default()).tables;
        runs += 1;
        if let Err(msg) = inequality_chain(&t) {
            failures.push(format!("random {i}: {msg}"));
        }
    }
    vec![check(
        "c12.inequality-chain",
        "growth.inequality-chain",
        "corpus + 100 random automata",
        failures.is_empty(),
        format!("holds on {runs} runs"),
        if failures.is_empty() {
            format!("holds on {runs} runs")
        } else {
            failures.join("; ")
        },
    )]
}

/// Criteria 1 to 12 in order.
pub fn verify_all(pbound: i64) -> VerificationReport {
    let mut r = VerificationReport::new("all");
    r.extend(criterion_1());
    r.extend(criterion_2());
    r.extend(criterion_3());
    r.extend(criterion_4());
    r.extend(criterion_5());
    r.extend(criterion_6());
    r.extend(criterion_7());
    r.extend(criterion_8(pbound));
    r.extend(criterion_9());
    r.extend(criterion_10(pbound));
    r.extend(criterion_11());
    r.extend(criterion_12());
    r
}

/// `all`, `a5` (series and search), or any corpus entry name.
pub fn verify_named(name: &str, pbound: i64) -> Result<VerificationReport, CorpusError> {
    match name {
        "all" => Ok(verify_all(pbound)),
        "a5" => {
            let mut r = VerificationReport::new("a5");
            r.extend(criterion_7());
            r.extend(criterion_8(pbound));
            Ok(r)
        }
        _ => Ok(verify_entry(&lookup(name)?, pbound)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_suite_passes_for_a2() {
        let r = verify_entry(&builtin("a2"), 8);
        assert!(r.passed(), "{}", r.to_tsv());
        assert!(r
            .checks
            .iter()
            .any(|c| c.id == "a2.growth" && c.got.starts_with("2,4,7,8,9,8")));
    }

    #[test]
    fn chain_rejects_bad_tables() {
        let t = GrowthTables {
            delta: vec![2, 3],
            spherical: vec![2, 2],
            cumulative: vec![2, 5],
            identity_length: None,
        };
        assert!(inequality_chain(&t).is_err());
    }

    #[test]
    fn report_formats_are_stable() {
        let a = verify_entry(&builtin("a3"), 4);
        let b = verify_entry(&builtin("a3"), 4);
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.to_tsv().starts_with("status\tid\tanchor"));
    }
}
