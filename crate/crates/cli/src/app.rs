//! Argument parsing and command dispatch.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use shiftlab_core::automata::{fisher_cover, LabeledGraph};
use shiftlab_core::coded::construct_generators;
use shiftlab_core::dynamics::{
    default_window, equivalence_report, frobenius, periodic_decomposition, property_p_witness, sofic_hierarchy,
    GraphLanguage, Indicator,
};
use shiftlab_core::spacing::{glue, is_allowed, mixing_obstruction, rule_by_name};
use shiftlab_core::words::{Alphabet, Block, Exactness};
use thiserror::Error;

use crate::report::{changed_records, diff_reports, digest_text, Outcome, Record, Report, RunManifest, VERSION};
use crate::scenarios::{run_criterion, scenario, SCENARIOS};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Core(#[from] shiftlab_core::Error),
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "shiftlab", version, about = "Symbolic-dynamics workbench")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run manifest path [default: <out>.manifest.json when --out is given].
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the even-length coded-system generators and write them to --out.
    Construct {
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 10_000)]
        max_word_len: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Spacing-shift membership, gluing and the mixing obstruction.
    #[command(group = clap::ArgGroup::new("action").required(true))]
    Spacing {
        #[arg(long, default_value = "pow2")]
        rule: String,
        #[arg(long, group = "action", value_name = "BLOCK")]
        check: Option<String>,
        /// K followed by the parts, each of length 2^K.
        #[arg(long, group = "action", num_args = 2.., value_names = ["K", "PARTS"])]
        glue: Option<Vec<String>>,
        #[arg(long, group = "action", value_name = "MAXEXP")]
        obstruction: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Windowed dynamical checks on an irreducible sofic presentation.
    Check {
        kind: CheckKind,
        #[arg(long)]
        graph: PathBuf,
        /// Gap window [default: 2·(Fisher states)² + 8].
        #[arg(long)]
        window: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Frobenius number, conductor and gaps of a numerical semigroup.
    Frobenius {
        #[arg(required = true)]
        generators: Vec<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Strong property P witness on a sofic presentation.
    PropP {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short = 'p')]
        p: usize,
        #[arg(short = 'N')]
        n_max: usize,
        /// Largest glue length tried.
        #[arg(long, default_value_t = 8)]
        glue_budget: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run a reproduction scenario; exits 1 if any assertion fails.
    Scenario {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SCENARIOS.map(|(n, _)| n)))]
        name: String,
        #[command(flatten)]
        output: Output,
    },
    /// Field-level diff of two JSON reports; exits 0 iff they are identical.
    ReportDiff {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Mixing,
    Wm,
    Tt,
    Equiv,
    Decomp,
}

impl Command {
    fn output(&self) -> &Output {
        match self {
            Command::Construct { output, .. }
            | Command::Spacing { output, .. }
            | Command::Check { output, .. }
            | Command::Frobenius { output, .. }
            | Command::PropP { output, .. }
            | Command::Scenario { output, .. }
            | Command::ReportDiff { output, .. } => output,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Construct { .. } => "construct",
            Command::Spacing { .. } => "spacing",
            Command::Check { .. } => "check",
            Command::Frobenius { .. } => "frobenius",
            Command::PropP { .. } => "prop-p",
            Command::Scenario { .. } => "scenario",
            Command::ReportDiff { .. } => "report-diff",
        }
    }
}

/// Records, timings and inputs collected while a command runs.
#[derive(Default)]
pub struct Session {
    records: Vec<Record>,
    outcomes: Vec<Outcome>,
    inputs: BTreeMap<String, String>,
    params: BTreeMap<String, Value>,
    failures: Vec<String>,
}

impl Session {
    fn param(&mut self, key: &str, value: impl Serialize) {
        self.params.insert(key.into(), json!(value));
    }

    fn read_input(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })?;
        self.inputs.insert(path.display().to_string(), digest_text(&text));
        Ok(text)
    }

    /// Runs one check and records its result and wall time.
    fn check(&mut self, f: impl FnOnce() -> Result<Record>) -> Result<()> {
        let start = Instant::now();
        let record = f()?;
        self.outcomes.push(Outcome {
            check_id: record.check_id.clone(),
            verdict: record.verdict.clone(),
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
        self.records.push(record);
        Ok(())
    }

    fn fail(&mut self, why: String) {
        self.failures.push(why);
    }
}

fn exactness(e: Exactness) -> String {
    match e {
        Exactness::Exact => "EXACT",
        Exactness::UnderApprox => "UNDER_APPROX",
    }
    .into()
}

fn to_json(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("core reports serialize")
}

fn indicator(i: Indicator, yes: &str, no: &str) -> String {
    match i {
        Indicator::Positive => yes.into(),
        Indicator::Negative => no.into(),
        Indicator::Inconclusive => "INCONCLUSIVE".into(),
    }
}

fn parse_block(text: &str) -> Result<Block> {
    Ok(Alphabet::binary().parse(text)?)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn construct(s: &mut Session, steps: usize, max_word_len: usize, out: Option<&Path>) -> Result<()> {
    let out = out.ok_or_else(|| CliError::Usage("construct needs --out FILE".into()))?;
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    s.param("steps", steps);
    s.param("max_word_len", max_word_len);
    s.check(|| {
        let sys = construct_generators(steps, max_word_len)?;
        let text = sys.to_text();
        write_file(out, &text)?;
        let gens = sys.generators();
        Ok(Record {
            check_id: "construct".into(),
            instance_digest: digest_text(&text),
            verdict: if sys.is_complete() { "COMPLETE" } else { "PARTIAL" }.into(),
            exactness: exactness(if sys.is_complete() {
                Exactness::Exact
            } else {
                Exactness::UnderApprox
            }),
            witnesses: json!({
                "step": sys.step(),
                "s_table": sys.s_table(),
                "generators": gens.len(),
                "lengths": gens.iter().map(|g| g.len).collect::<Vec<_>>(),
                "stubbed": (0..gens.len()).filter(|&j| gens[j].block.is_none()).collect::<Vec<_>>(),
                "file": out.display().to_string(),
            }),
        })
    })
}

fn spacing(
    s: &mut Session,
    rule: &str,
    check: Option<&str>,
    glue_args: Option<&[String]>,
    obstruction: Option<u32>,
) -> Result<()> {
    let r = rule_by_name(rule)?;
    s.param("rule", rule);
    let digest = |what: &str| digest_text(&format!("rule={rule};{what}"));
    if let Some(text) = check {
        let u = parse_block(text)?;
        s.param("check", text);
        s.check(|| {
            let v = is_allowed(&r, &u)?;
            Ok(Record {
                check_id: "spacing.check".into(),
                instance_digest: digest(&format!("check={u}")),
                verdict: if v.allowed { "ALLOWED" } else { "FORBIDDEN" }.into(),
                exactness: exactness(Exactness::Exact),
                witnesses: json!({ "block": u, "violations": v.violations }),
            })
        })?;
    }
    if let Some(args) = glue_args {
        let k: u32 = args[0]
            .parse()
            .map_err(|_| CliError::Usage(format!("--glue: K must be a number, got {:?}", args[0])))?;
        let parts = args[1..].iter().map(|p| parse_block(p)).collect::<Result<Vec<_>>>()?;
        s.param("glue", args);
        s.check(|| {
            let g = glue(&r, k, &parts)?;
            Ok(Record {
                check_id: "spacing.glue".into(),
                instance_digest: digest(&format!("glue={k}:{}", args[1..].join(","))),
                verdict: if g.verdict.allowed { "ALLOWED" } else { "FORBIDDEN" }.into(),
                exactness: exactness(Exactness::Exact),
                witnesses: json!({ "block": g.block, "violations": g.verdict.violations }),
            })
        })?;
        if s.records.last().is_some_and(|r| r.verdict != "ALLOWED") {
            s.fail("glued block is not allowed".into());
        }
    }
    if let Some(max_exp) = obstruction {
        s.param("obstruction", max_exp);
        s.check(|| {
            let excluded = mixing_obstruction(&r, max_exp)?;
            let shown: Vec<String> = excluded.iter().map(usize::to_string).collect();
            Ok(Record {
                check_id: "spacing.obstruction".into(),
                instance_digest: digest(&format!("obstruction={max_exp}")),
                verdict: format!("EXCLUDED({})", shown.join(",")),
                exactness: exactness(Exactness::Exact),
                witnesses: json!({ "u": "1", "v": "1", "excluded_lengths": excluded }),
            })
        })?;
    }
    Ok(())
}

fn check_graph(s: &mut Session, kind: CheckKind, path: &Path, window: Option<usize>) -> Result<()> {
    let graph = LabeledGraph::parse(&s.read_input(path)?)?;
    let states = fisher_cover(&graph)?.vertex_count();
    let window = window.unwrap_or_else(|| default_window(states));
    s.param("kind", format!("{kind:?}").to_lowercase());
    s.param("window", window);
    let digest = graph.digest();
    let record = |check_id: &str, verdict: String, witnesses: Value| Record {
        check_id: check_id.into(),
        instance_digest: digest.clone(),
        verdict,
        exactness: exactness(Exactness::Exact),
        witnesses,
    };
    match kind {
        CheckKind::Mixing | CheckKind::Wm | CheckKind::Tt => s.check(|| {
            let h = sofic_hierarchy(&graph, window)?;
            let pairs = |extra: &dyn Fn(usize) -> Value| -> Vec<Value> {
                h.pairs
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let mut v = json!({ "u": p.gap.u, "v": p.gap.v });
                        v.as_object_mut()
                            .unwrap()
                            .extend(extra(i).as_object().cloned().unwrap_or_default());
                        v
                    })
                    .collect()
            };
            Ok(match kind {
                CheckKind::Mixing => record(
                    "mixing",
                    indicator(h.mixing, "MIXING", "NOT_MIXING"),
                    json!({ "window": window, "pairs": pairs(&|i| {
                        let g = &h.pairs[i].gap;
                        json!({ "verdict": g.verdict, "witnessed": g.witnessed })
                    }) }),
                ),
                CheckKind::Tt => record(
                    "tt",
                    indicator(h.total_transitivity, "TOTALLY_TRANSITIVE", "NOT_TOTALLY_TRANSITIVE"),
                    json!({ "window": window, "max_modulus": h.max_modulus, "pairs": pairs(&|i| {
                        json!({ "moduli": h.pairs[i].total_transitivity })
                    }) }),
                ),
                _ => record(
                    "wm",
                    format!("LONGEST_RUN({})", h.weak_mixing_run),
                    json!({ "window": window, "pairs": pairs(&|i| {
                        json!({ "longest_run": h.pairs[i].longest_run })
                    }) }),
                ),
            })
        })?,
        CheckKind::Equiv => {
            s.check(|| {
                let r = equivalence_report(&graph, window)?;
                let verdict = if !r.is_consistent() {
                    "INCONSISTENT"
                } else if r.is_mixing() {
                    "MIXING"
                } else {
                    "NOT_MIXING"
                };
                Ok(record("equiv", verdict.into(), to_json(&r)))
            })?;
            if s.records.last().is_some_and(|r| r.verdict == "INCONSISTENT") {
                s.fail("mixing indicators disagree".into());
            }
        }
        CheckKind::Decomp => s.check(|| {
            let fisher = fisher_cover(&graph)?;
            let d = periodic_decomposition(&fisher)?;
            Ok(record(
                "decomp",
                format!("PERIOD({})", d.period),
                json!({ "presentation": "fisher_cover", "classes": d.members() }),
            ))
        })?,
    }
    Ok(())
}

fn frobenius_cmd(s: &mut Session, xs: &[u64]) -> Result<()> {
    s.param("generators", xs);
    s.check(|| {
        let r = frobenius(xs)?;
        let shown: Vec<String> = xs.iter().map(u64::to_string).collect();
        Ok(Record {
            check_id: "frobenius".into(),
            instance_digest: digest_text(&shown.join(",")),
            verdict: match r.frobenius {
                Some(f) => format!("FROBENIUS({f})"),
                None => "ALL_REPRESENTABLE".into(),
            },
            exactness: exactness(Exactness::Exact),
            witnesses: to_json(&r),
        })
    })
}

fn prop_p(s: &mut Session, path: &Path, p: usize, n_max: usize, glue_budget: usize) -> Result<()> {
    let graph = LabeledGraph::parse(&s.read_input(path)?)?;
    s.param("p", p);
    s.param("n_max", n_max);
    s.param("glue_budget", glue_budget);
    let lang = GraphLanguage::new(&graph);
    s.check(|| {
        let (verdict, exact, witnesses) = match property_p_witness(&lang, p, n_max, glue_budget) {
            Ok(w) => (format!("GLUE_LENGTH({})", w.n), w.exactness, to_json(&w)),
            Err(shiftlab_core::Error::NotFoundInBudget(b)) => (
                "NOT_FOUND".into(),
                Exactness::Exact,
                json!({ "glue_budget": b, "n_max": n_max }),
            ),
            Err(e) => return Err(e.into()),
        };
        Ok(Record {
            check_id: "prop-p".into(),
            instance_digest: graph.digest(),
            verdict,
            exactness: exactness(exact),
            witnesses,
        })
    })
}

fn scenario_cmd(s: &mut Session, name: &str) -> Result<()> {
    let criteria = scenario(name).ok_or_else(|| CliError::Usage(format!("unknown scenario {name}")))?;
    s.param("scenario", name);
    for c in criteria {
        let r = run_criterion(c);
        let (verdict, detail) = match &r.outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(why) => ("FAIL", why.clone()),
        };
        if !r.passed() {
            s.fail(format!("criterion {} ({}): {detail}", c.id, c.title));
        }
        s.outcomes.push(Outcome {
            check_id: format!("criterion.{}", c.id),
            verdict: verdict.into(),
            wall_ms: r.elapsed.as_secs_f64() * 1e3,
        });
        s.records.push(Record {
            check_id: format!("criterion.{}", c.id),
            instance_digest: digest_text(&format!("{name}/{}", c.id)),
            verdict: verdict.into(),
            exactness: exactness(c.exactness),
            witnesses: json!({ "title": c.title, "detail": detail }),
        });
    }
    Ok(())
}

fn read_report(s: &mut Session, path: &Path) -> Result<Report> {
    let text = s.read_input(path)?;
    Report::from_json(&text).map_err(|source| CliError::Json {
        path: path.into(),
        source,
    })
}

/// Diff output and whether the reports differ.
fn report_diff(s: &mut Session, a: &Path, b: &Path, format: Format) -> Result<(String, bool)> {
    let left = read_report(s, a)?;
    let right = read_report(s, b)?;
    let changes = diff_reports(&left, &right);
    let text = match format {
        Format::Json => {
            let doc = json!({ "identical": changes.is_empty(), "records": changed_records(&changes), "changes": changes });
            let mut t = serde_json::to_string_pretty(&doc).expect("diffs serialize");
            t.push('\n');
            t
        }
        Format::Text => {
            let mut t = String::new();
            for c in &changes {
                t.push_str(&format!("{}: {} -> {}\n", c.field, c.left, c.right));
            }
            t
        }
    };
    Ok((text, !changes.is_empty()))
}

/// Runs a parsed command and returns the process exit code.
pub fn execute(cli: &Cli, command_line: &[String]) -> i32 {
    match try_execute(cli, command_line) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("shiftlab: {e}");
            EXIT_USAGE
        }
    }
}

fn try_execute(cli: &Cli, command_line: &[String]) -> Result<i32> {
    let start = Instant::now();
    let cmd = &cli.command;
    let output = cmd.output();
    let mut s = Session::default();
    let mut primary: Option<String> = None;
    let mut differs = false;
    match cmd {
        Command::Construct { steps, max_word_len, .. } => {
            construct(&mut s, *steps, *max_word_len, output.out.as_deref())?
        }
        Command::Spacing {
            rule,
            check,
            glue,
            obstruction,
            ..
        } => spacing(&mut s, rule, check.as_deref(), glue.as_deref(), *obstruction)?,
        Command::Check { kind, graph, window, .. } => check_graph(&mut s, *kind, graph, *window)?,
        Command::Frobenius { generators, .. } => frobenius_cmd(&mut s, generators)?,
        Command::PropP {
            graph,
            p,
            n_max,
            glue_budget,
            ..
        } => prop_p(&mut s, graph, *p, *n_max, *glue_budget)?,
        Command::Scenario { name, .. } => scenario_cmd(&mut s, name)?,
        Command::ReportDiff { a, b, .. } => {
            let (text, d) = report_diff(&mut s, a, b, output.format)?;
            primary = Some(text);
            differs = d;
        }
    }
    let primary = primary.unwrap_or_else(|| {
        let report = Report::new(cmd.name(), std::mem::take(&mut s.records));
        match output.format {
            Format::Json => report.to_json(),
            Format::Text => report.to_text(),
        }
    });
    // For construct, --out is the generators file and the report goes to stdout.
    let report_path = match cmd {
        Command::Construct { .. } => None,
        _ => output.out.as_deref(),
    };
    match report_path {
        Some(p) => write_file(p, &primary)?,
        None => print!("{primary}"),
    }
    let manifest_path = output
        .manifest
        .clone()
        .or_else(|| output.out.as_ref().map(|p| PathBuf::from(format!("{}.manifest.json", p.display()))));
    if let Some(p) = manifest_path {
        let manifest = RunManifest {
            command_line: command_line.to_vec(),
            input_digests: std::mem::take(&mut s.inputs),
            params: std::mem::take(&mut s.params),
            version: VERSION.into(),
            outcomes: std::mem::take(&mut s.outcomes),
            total_runtime_ms: start.elapsed().as_secs_f64() * 1e3,
            output_digest: digest_text(&primary),
        };
        write_file(&p, &manifest.to_json())?;
    }
    for why in &s.failures {
        eprintln!("shiftlab: FAIL {why}");
    }
    Ok(if s.failures.is_empty() && !differs {
        EXIT_PASS
    } else {
        EXIT_ASSERTION
    })
}
