use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mealy_growth::automaton::{growth_by_minimization, MealyAutomaton, DEFAULT_STATE_CAP};
use mealy_growth::corpus::{
    a5_labelings, a5_prefix, a5_query, a5_relations, enumerate_normal_forms, lookup, parse_any,
    search_automata, serialize_automaton, serialize_automaton_json, NormalFormGrammar, SearchQuery,
    CORPUS_NAMES,
};
use mealy_growth::semigroup::{
    check_relations, enumerate_growth, EnumerationOptions, RelationSet, DEFAULT_ELEMENT_CAP,
};
use mealy_growth::series::{
    detect_composite, expand_a5_gamma, expand_a6_gamma, expand_a6_semigroup_gamma, expand_rational,
    ClosedFormSpec, IntSequence, PowerSeries,
};
use mealy_growth::verify::verify_named;

/// Failure classes, mapped to exit codes 1, 2 and 3.
enum Failure {
    Verification,
    Usage(String),
    Cap(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Parser)]
#[command(
    name = "mealy-growth",
    version,
    about = "Growth functions of Mealy automata and their semigroups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Growth tables of a corpus automaton or automaton file.
    Growth {
        automaton: String,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        nmax: u64,
        /// Cross-check spherical growth against minimized powers for n <= 6.
        #[arg(long)]
        direct_oracle: bool,
        #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
        element_cap: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Verification report for a corpus entry, `a5`, or `all`.
    Verify {
        name: String,
        #[arg(long, default_value_t = 8)]
        pbound: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Coefficients of a growth series: a5, a6, a6-semigroup, or rational FILE.
    Series {
        kind: String,
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        nmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Finite differences of a sequence file.
    Diff {
        csv: PathBuf,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Monotonicity and composite structure of a sequence file.
    Analyze {
        csv: PathBuf,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        #[arg(long, default_value_t = 3)]
        degmax: usize,
    },
    /// Automata whose spherical growth starts with a given prefix.
    Search {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        letters: usize,
        /// A sequence file, or a built-in series: a5, a6, or a closed-form name.
        #[arg(long)]
        prefix_from: String,
        /// Length of the prefix taken from a built-in series.
        #[arg(long, default_value_t = 10)]
        nmax: usize,
        #[arg(long)]
        canonical: bool,
        #[arg(long)]
        require_identity: bool,
        #[arg(long)]
        max_tables: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Checks a relation file against an automaton.
    Relations {
        automaton: String,
        relations: PathBuf,
        #[arg(long, default_value_t = 8)]
        pbound: i64,
    },
    /// Normal-form counts against word growth.
    NormalForms {
        name: String,
        #[arg(long, default_value_t = 12)]
        nmax: usize,
    },
    /// Writes the corpus files into a directory.
    ExportCorpus { dir: PathBuf },
}

fn load_automaton(spec: &str) -> Result<MealyAutomaton, Failure> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| usage(format!("{spec}: {e}")))?;
        return parse_any(&text).map_err(|e| usage(format!("{spec}: {e}")));
    }
    lookup(spec).map(|e| e.automaton).map_err(usage)
}

/// Reads `n,value` rows (header first) into a sequence.
fn read_sequence(path: &Path) -> Result<IntSequence, Failure> {
    let mut reader =
        csv::Reader::from_path(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| usage(format!("{}: {e}", path.display())))?;
        let field = |j: usize| -> Result<&str, Failure> {
            record.get(j).map(str::trim).ok_or_else(|| {
                usage(format!(
                    "{}: row {} needs two columns",
                    path.display(),
                    i + 2
                ))
            })
        };
        let n: usize = field(0)?
            .parse()
            .map_err(|_| usage(format!("{}: row {}: bad index", path.display(), i + 2)))?;
        let v: i128 = field(1)?
            .parse()
            .map_err(|_| usage(format!("{}: row {}: bad value", path.display(), i + 2)))?;
        rows.push((n, v));
    }
    if rows.is_empty() {
        return Err(usage(format!("{}: no rows", path.display())));
    }
    let start = rows[0].0;
    if rows.iter().enumerate().any(|(j, &(n, _))| n != start + j) {
        return Err(usage(format!(
            "{}: indices must be consecutive",
            path.display()
        )));
    }
    Ok(IntSequence::new(
        start,
        rows.into_iter().map(|(_, v)| v).collect(),
    ))
}

fn emit_sequence(
    out: &mut impl Write,
    s: &IntSequence,
    column: &str,
    format: Format,
) -> io::Result<()> {
    match format {
        Format::Csv => out.write_all(s.to_csv(column).as_bytes()),
        Format::Tsv => out.write_all(s.to_tsv().as_bytes()),
        Format::Json => {
            let rows: Vec<serde_json::Value> = s
                .indexed()
                .map(|(n, v)| serde_json::json!({ "n": n, column: v.to_string() }))
                .collect();
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&rows).expect("json")
            )
        }
    }
}

fn io_err(e: io::Error) -> Failure {
    usage(e)
}

fn cmd_growth(
    out: &mut impl Write,
    automaton: &str,
    nmax: usize,
    oracle: bool,
    cap: usize,
    format: Format,
) -> Outcome {
    let a = load_automaton(automaton)?;
    let run = enumerate_growth(&a, nmax, EnumerationOptions { element_cap: cap });
    match format {
        Format::Csv => out
            .write_all(run.tables.to_csv().as_bytes())
            .map_err(io_err)?,
        Format::Tsv => out
            .write_all(run.tables.spherical_sequence().to_tsv().as_bytes())
            .map_err(io_err)?,
        Format::Json => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&run.tables).expect("json")
        )
        .map_err(io_err)?,
    }
    let mut verdict = Ok(());
    if oracle {
        let k = 6.min(run.tables.nmax());
        match growth_by_minimization(&a, k, DEFAULT_STATE_CAP) {
            Ok(direct) if direct[..] == run.tables.spherical[..k] => {
                eprintln!("oracle: minimized powers agree for n = 1..={k}");
            }
            Ok(direct) => {
                eprintln!("oracle: mismatch, minimized powers give {direct:?}");
                verdict = Err(Failure::Verification);
            }
            Err(e) => return Err(Failure::Cap(format!("oracle: {e}"))),
        }
    }
    if let Some(t) = run.truncated {
        return Err(Failure::Cap(format!(
            "element cap {} reached at n = {} (needed {}); tables cover n < {}",
            t.element_cap, t.level, t.required, t.level
        )));
    }
    verdict
}

fn cmd_verify(out: &mut impl Write, name: &str, pbound: i64, format: Format) -> Outcome {
    let report = verify_named(name, pbound).map_err(usage)?;
    match format {
        Format::Json => writeln!(out, "{}", report.to_json()),
        Format::Tsv | Format::Csv => out.write_all(report.to_tsv().as_bytes()),
    }
    .map_err(io_err)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn rational_series(file: &Path, nmax: usize) -> Result<PowerSeries, Failure> {
    let text = fs::read_to_string(file).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let v: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let coeffs = |key: &str| -> Result<Vec<i128>, Failure> {
        v.get(key)
            .and_then(|c| c.as_array())
            .ok_or_else(|| usage(format!("{}: missing `{key}` array", file.display())))?
            .iter()
            .map(|c| {
                c.as_i64().map(i128::from).ok_or_else(|| {
                    usage(format!(
                        "{}: `{key}` entries must be integers",
                        file.display()
                    ))
                })
            })
            .collect()
    };
    expand_rational(&coeffs("numerator")?, &coeffs("denominator")?, nmax).map_err(usage)
}

fn cmd_series(
    out: &mut impl Write,
    kind: &str,
    file: Option<&Path>,
    nmax: usize,
    format: Format,
) -> Outcome {
    let series = match (kind, file) {
        ("a5", None) => expand_a5_gamma(nmax),
        ("a6", None) => expand_a6_gamma(nmax),
        ("a6-semigroup", None) => expand_a6_semigroup_gamma(nmax),
        ("rational", Some(f)) => rational_series(f, nmax)?,
        ("rational", None) => {
            return Err(usage(
                "series rational needs a FILE with `numerator` and `denominator`",
            ))
        }
        _ => {
            return Err(usage(format!(
                "unknown series `{kind}` (a5, a6, a6-semigroup, rational FILE)"
            )))
        }
    };
    match series.to_int_sequence() {
        Ok(s) => emit_sequence(out, &s, "coefficient", format),
        Err(_) => out.write_all(series.to_csv().as_bytes()),
    }
    .map_err(io_err)
}

fn cmd_diff(out: &mut impl Write, path: &Path, order: usize, format: Format) -> Outcome {
    let s = read_sequence(path)?;
    let d = s.finite_difference(order).map_err(usage)?;
    emit_sequence(out, &d, &format!("difference{order}"), format).map_err(io_err)
}

fn cmd_analyze(out: &mut impl Write, path: &Path, kmax: usize, degmax: usize) -> Outcome {
    let s = read_sequence(path)?;
    let descent = s.first_descent();
    let verdict = detect_composite(&s, kmax, degmax);
    let report = serde_json::json!({
        "range": format!("{}..={}", s.start(), s.end().unwrap_or(s.start())),
        "monotone": descent.is_none(),
        "first_descent": descent,
        "composite": verdict,
        "closed_form": verdict.to_spec().map(|c| serde_json::from_str::<serde_json::Value>(&c.to_json()).expect("json")),
    });
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&report).expect("json")
    )
    .map_err(io_err)
}

fn prefix_from(source: &str, nmax: usize) -> Result<Vec<u64>, Failure> {
    let path = Path::new(source);
    let values: Vec<i128> = if path.is_file() {
        read_sequence(path)?.values().to_vec()
    } else if source == "a5" {
        return Ok(a5_prefix(nmax));
    } else if source == "a6" {
        let s = expand_a6_gamma(nmax).to_int_sequence().map_err(usage)?;
        s.values()[1..].to_vec()
    } else {
        let spec = ClosedFormSpec::builtin(source).map_err(usage)?;
        spec.tabulate(1, nmax).map_err(usage)?.values().to_vec()
    };
    values
        .into_iter()
        .map(|v| u64::try_from(v).map_err(|_| usage(format!("prefix value {v} is negative"))))
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    out: &mut impl Write,
    states: usize,
    letters: usize,
    source: &str,
    nmax: usize,
    canonical: bool,
    require_identity: bool,
    max_tables: Option<u64>,
    format: Format,
) -> Outcome {
    let prefix = prefix_from(source, nmax)?;
    let q = SearchQuery {
        canonical,
        require_identity,
        max_tables,
        ..SearchQuery::new(states, letters, prefix)
    };
    let result = search_automata(&q).map_err(usage)?;
    for a in &result.hits {
        match format {
            Format::Json => writeln!(out, "{}", serialize_automaton_json(a)),
            Format::Csv | Format::Tsv => writeln!(out, "{}", serialize_automaton(a)),
        }
        .map_err(io_err)?;
    }
    eprintln!(
        "{} hits, {} tables scanned",
        result.hits.len(),
        result.scanned
    );
    if result.truncated || result.capped > 0 {
        return Err(Failure::Cap(format!(
            "search incomplete: truncated = {}, {} tables hit the element cap",
            result.truncated, result.capped
        )));
    }
    Ok(())
}

fn cmd_relations(out: &mut impl Write, automaton: &str, path: &Path, pbound: i64) -> Outcome {
    let a = load_automaton(automaton)?;
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let sets: Vec<RelationSet> = if text.trim_start().starts_with('[') {
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
    } else {
        vec![RelationSet::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?]
    };
    let mut reports = Vec::new();
    for set in &sets {
        let gens = set.generator_map(a.state_count());
        reports.push(check_relations(&a, set, &gens, pbound).map_err(usage)?);
    }
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&reports).expect("json")
    )
    .map_err(io_err)?;
    if reports.iter().all(|r| r.all_hold()) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_normal_forms(out: &mut impl Write, name: &str, nmax: usize) -> Outcome {
    let grammar = NormalFormGrammar::builtin(name)
        .ok_or_else(|| usage(format!("no normal-form grammar `{name}`")))?;
    let counts = enumerate_normal_forms(&grammar, nmax);
    let delta: IntSequence = if name == "a5" {
        let c = expand_a5_gamma(nmax).to_int_sequence().map_err(usage)?;
        IntSequence::tabulate(0, nmax, |n| c.at(n) - if n > 0 { c.at(n - 1) } else { 0 })
    } else {
        let entry = lookup(name).map_err(usage)?;
        enumerate_growth(&entry.automaton, nmax, EnumerationOptions::default())
            .tables
            .delta_sequence()
    };
    let mut text = String::from("n,normal_forms,delta,match\n");
    for (n, d) in delta.indexed() {
        let c = counts.at(n);
        text.push_str(&format!("{n},{c},{d},{}\n", c == d));
    }
    out.write_all(text.as_bytes()).map_err(io_err)
}

fn cmd_export(dir: &Path) -> Outcome {
    fs::create_dir_all(dir).map_err(io_err)?;
    for name in CORPUS_NAMES {
        let e = lookup(name).map_err(usage)?;
        let write = |suffix: &str, body: String| {
            fs::write(dir.join(format!("{name}{suffix}")), body).map_err(io_err)
        };
        write(".mealy", serialize_automaton(&e.automaton))?;
        write(
            ".expected.csv",
            e.expected
                .tabulate(1, e.verified_nmax)
                .map_err(usage)?
                .to_csv("growth"),
        )?;
        write(
            ".relations.json",
            format!(
                "{}\n",
                serde_json::to_string_pretty(&e.relations).expect("json")
            ),
        )?;
    }
    // A5 has no fixed table: persist the query and its canonical hits, each
    // with a generator labeling under which the relation family holds.
    let query = SearchQuery {
        canonical: true,
        ..a5_query(true)
    };
    fs::write(
        dir.join("a5.query.json"),
        format!("{}\n", serde_json::to_string_pretty(&query).expect("json")),
    )
    .map_err(io_err)?;
    let result = search_automata(&query).map_err(usage)?;
    let relations = a5_relations();
    for (i, hit) in result.hits.iter().enumerate() {
        let name = format!("a5-hit{i}");
        let hit = hit.clone().with_name(name.clone());
        let labeling = a5_labelings(&hit)
            .into_iter()
            .find(|g| check_relations(&hit, &relations, g, 8).is_ok_and(|r| r.all_hold()));
        fs::write(dir.join(format!("{name}.mealy")), serialize_automaton(&hit)).map_err(io_err)?;
        fs::write(
            dir.join(format!("{name}.expected.csv")),
            IntSequence::from_u64(1, &query.prefix).to_csv("growth"),
        )
        .map_err(io_err)?;
        let set = RelationSet {
            generators: labeling,
            ..relations.clone()
        };
        fs::write(
            dir.join(format!("{name}.relations.json")),
            format!("{}\n", set.to_json()),
        )
        .map_err(io_err)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = match cli.command {
        Command::Growth {
            automaton,
            nmax,
            direct_oracle,
            element_cap,
            format,
        } => cmd_growth(
            &mut out,
            &automaton,
            nmax as usize,
            direct_oracle,
            element_cap,
            format,
        ),
        Command::Verify {
            name,
            pbound,
            format,
        } => cmd_verify(&mut out, &name, pbound, format),
        Command::Series {
            kind,
            file,
            nmax,
            format,
        } => cmd_series(&mut out, &kind, file.as_deref(), nmax, format),
        Command::Diff { csv, order, format } => cmd_diff(&mut out, &csv, order, format),
        Command::Analyze { csv, kmax, degmax } => cmd_analyze(&mut out, &csv, kmax, degmax),
        Command::Search {
            states,
            letters,
            prefix_from,
            nmax,
            canonical,
            require_identity,
            max_tables,
            format,
        } => cmd_search(
            &mut out,
            states,
            letters,
            &prefix_from,
            nmax,
            canonical,
            require_identity,
            max_tables,
            format,
        ),
        Command::Relations {
            automaton,
            relations,
            pbound,
        } => cmd_relations(&mut out, &automaton, &relations, pbound),
        Command::NormalForms { name, nmax } => cmd_normal_forms(&mut out, &name, nmax),
        Command::ExportCorpus { dir } => cmd_export(&dir),
    };
    out.flush().map_err(io_err)?;
    result
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
