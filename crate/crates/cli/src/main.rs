use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use annkh::check::{run_checks, CheckOptions};
use annkh::complex::{annular_part, build_complex, homology_dims, total_dim, Grading};
use annkh::diagram::{count_crossings, Closure, TangleDiagram};
use annkh::dsl::{parse_diagram, serialize, to_json};
use annkh::floer::check_theorem;
use annkh::invariants::{jones, sj_statesum, to_skein_form, to_zform};
use annkh::laurent::Laurent;
use annkh::rt::{quantum_trace, rt_matrix_with_counts, trace_sj, BlockMatrixQ};
use annkh::spectral::spectral_pages;

const GUARDRAIL: usize = 24;

#[derive(Parser)]
#[command(
    name = "annkh",
    version,
    about = "Annular Khovanov homology and related invariants over F2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Diagram file (slice DSL or JSON)
    file: PathBuf,
    /// Machine-readable output
    #[arg(long)]
    json: bool,
    /// Worker threads (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Allow more than 24 crossings
    #[arg(long)]
    force: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Khovanov homology dimensions by (i, j)
    Homology {
        #[command(flatten)]
        common: Common,
        /// Reduced homology (needs a marked arc)
        #[arg(long)]
        reduced: bool,
        /// Print the chain complex instead (generators, then `i j k row col`)
        #[arg(long)]
        dump: bool,
    },
    /// Annular homology dimensions by (i, j, k)
    Annular {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        reduced: bool,
    },
    /// SJ polynomial, its z-form and skein form
    Sj {
        #[command(flatten)]
        common: Common,
    },
    /// Jones polynomial
    Jones {
        #[command(flatten)]
        common: Common,
    },
    /// Pages of the k-filtration spectral sequence
    Ss {
        #[command(flatten)]
        common: Common,
        /// Stop after this page
        #[arg(long)]
        max_page: Option<usize>,
    },
    /// Weight blocks of the Reshetikhin-Turaev matrix and its traces
    Rt {
        #[command(flatten)]
        common: Common,
    },
    /// Run every verification check
    Check {
        #[command(flatten)]
        common: Common,
        /// Corrupt one off-block matrix entry (negative control)
        #[arg(long)]
        inject_fault: bool,
        /// Also print k and 2A_S for every enhanced state
        #[arg(long)]
        table: bool,
    },
    /// Validate and print the canonical form
    Parse {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Homology { common, .. }
            | Command::Annular { common, .. }
            | Command::Sj { common }
            | Command::Jones { common }
            | Command::Ss { common, .. }
            | Command::Rt { common }
            | Command::Check { common, .. }
            | Command::Parse { common } => common,
        }
    }
}

/// Verification failures are reported through the output, not as errors.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(common: &Common, guard: bool) -> anyhow::Result<TangleDiagram> {
    let text =
        std::fs::read_to_string(&common.file).with_context(|| format!("cannot read {}", common.file.display()))?;
    let d = parse_diagram(&text).with_context(|| format!("{}", common.file.display()))?;
    let n = d.crossing_total();
    if guard && n > GUARDRAIL && !common.force {
        bail!("{n} crossings exceed the limit of {GUARDRAIL} (2^{n} resolutions); pass --force to run anyway");
    }
    Ok(d)
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let common = cli.command.common();
    if let Some(t) = common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("cannot start thread pool")?;
    }
    let d = load(common, !matches!(cli.command, Command::Parse { .. }))?;
    let json = common.json;
    match &cli.command {
        Command::Homology { reduced, dump, .. } => cmd_homology(&d, *reduced, *dump, json),
        Command::Annular { reduced, .. } => cmd_annular(&d, *reduced, json),
        Command::Sj { .. } => cmd_sj(&d, json),
        Command::Jones { .. } => cmd_jones(&d, json),
        Command::Ss { max_page, .. } => cmd_ss(&d, *max_page, json),
        Command::Rt { .. } => cmd_rt(&d, json),
        Command::Check {
            inject_fault, table, ..
        } => cmd_check(&d, *inject_fault, *table, json),
        Command::Parse { .. } => Ok(Outcome::ok(if json { to_json(&d) + "\n" } else { serialize(&d) })),
    }
}

fn to_line(v: &Value) -> String {
    serde_json::to_string(v).expect("serializable") + "\n"
}

fn q_terms(p: &Laurent) -> Value {
    Value::Array(p.terms().rev().map(|(e, c)| json!({"q": e, "c": c})).collect())
}

fn cmd_homology(d: &TangleDiagram, reduced: bool, dump: bool, json: bool) -> anyhow::Result<Outcome> {
    let c = build_complex(d, reduced)?;
    if dump {
        return Ok(Outcome::ok(c.dump()));
    }
    let dims = homology_dims(&c, Grading::Bigraded)?;
    if json {
        let rows: Vec<Value> = dims
            .iter()
            .map(|(&(i, j, _), &n)| json!({"i": i, "j": j, "dim": n}))
            .collect();
        return Ok(Outcome::ok(to_line(
            &json!({"reduced": reduced, "dims": rows, "total": total_dim(&dims)}),
        )));
    }
    let mut out = String::from("i\tj\tdim\n");
    for (&(i, j, _), n) in &dims {
        writeln!(out, "{i}\t{j}\t{n}")?;
    }
    writeln!(out, "total\t{}", total_dim(&dims))?;
    Ok(Outcome::ok(out))
}

fn cmd_annular(d: &TangleDiagram, reduced: bool, json: bool) -> anyhow::Result<Outcome> {
    let c = annular_part(&build_complex(d, reduced)?)?;
    let dims = homology_dims(&c, Grading::Trigraded)?;
    if json {
        let rows: Vec<Value> = dims
            .iter()
            .map(|(&(i, j, k), &n)| json!({"i": i, "j": j, "k": k, "dim": n}))
            .collect();
        return Ok(Outcome::ok(to_line(
            &json!({"reduced": reduced, "dims": rows, "total": total_dim(&dims)}),
        )));
    }
    let mut out = String::from("i\tj\tk\tdim\n");
    for (&(i, j, k), n) in &dims {
        writeln!(out, "{i}\t{j}\t{k}\t{n}")?;
    }
    writeln!(out, "total\t{}", total_dim(&dims))?;
    Ok(Outcome::ok(out))
}

fn cmd_sj(d: &TangleDiagram, json: bool) -> anyhow::Result<Outcome> {
    let sj = sj_statesum(d)?;
    let z = to_zform(&sj)?;
    let skein = to_skein_form(&z);
    let jones_poly = sj.at_t_one();
    if json {
        let zc: BTreeMap<String, Value> = z.coeffs.iter().map(|(n, c)| (n.to_string(), q_terms(c))).collect();
        let sc: BTreeMap<String, Value> = skein
            .coeffs
            .iter()
            .map(|(n, c)| {
                let terms: Vec<Value> = c.terms().map(|(e, k)| json!({"a": e, "c": k})).collect();
                (n.to_string(), Value::Array(terms))
            })
            .collect();
        return Ok(Outcome::ok(to_line(&json!({
            "sj": sj.to_json(),
            "zform": zc,
            "skein": sc,
            "jones": q_terms(&jones_poly),
            "text": format!("{sj} | {z} | {skein}"),
        }))));
    }
    Ok(Outcome::ok(format!("{sj} | {z} | {skein}\nt=1: {jones_poly}\n")))
}

fn cmd_jones(d: &TangleDiagram, json: bool) -> anyhow::Result<Outcome> {
    let j = jones(d)?;
    if json {
        return Ok(Outcome::ok(to_line(&q_terms(&j))));
    }
    Ok(Outcome::ok(format!("{j}\n")))
}

fn cmd_ss(d: &TangleDiagram, max_page: Option<usize>, json: bool) -> anyhow::Result<Outcome> {
    let c = build_complex(d, false)?;
    let pages = spectral_pages(&c, max_page)?;
    if json {
        let v: Vec<Value> = pages
            .iter()
            .map(|p| {
                let dims: Vec<Value> = p
                    .dims
                    .iter()
                    .map(|(&(k, i, j), &n)| json!({"k": k, "i": i, "j": j, "dim": n}))
                    .collect();
                json!({"r": p.r, "final": p.is_final, "dims": dims, "total": p.total()})
            })
            .collect();
        return Ok(Outcome::ok(to_line(&Value::Array(v))));
    }
    let mut out = String::new();
    for p in &pages {
        let tag = if p.is_final { " = E_inf" } else { "" };
        writeln!(out, "E{}{tag}", p.r)?;
        writeln!(out, "k\ti\tj\tdim")?;
        for (&(k, i, j), n) in &p.dims {
            writeln!(out, "{k}\t{i}\t{j}\t{n}")?;
        }
        writeln!(out, "total\t{}", p.total())?;
    }
    Ok(Outcome::ok(out))
}

/// The tangle whose matrix is reported, with the crossing counts that fix
/// the assembly shifts.
fn rt_input(d: &TangleDiagram) -> anyhow::Result<(TangleDiagram, annkh::diagram::CrossingCount)> {
    match d.closure() {
        Closure::Annular => Ok((d.open_tangle(), count_crossings(d))),
        Closure::None => Ok((d.clone(), count_crossings(&d.annular_closure()?))),
    }
}

fn block_rows(m: &BlockMatrixQ, lambda: i32) -> Vec<Vec<String>> {
    m.block(lambda)
        .iter()
        .map(|row| row.iter().map(|v| v.to_string()).collect())
        .collect()
}

fn cmd_rt(d: &TangleDiagram, json: bool) -> anyhow::Result<Outcome> {
    let (t, counts) = rt_input(d)?;
    let m = rt_matrix_with_counts(&t, counts)?;
    let trq = quantum_trace(&m);
    let sj = trace_sj(&m);
    if json {
        let blocks: Vec<Value> = m
            .blocks()
            .map(|(l, _)| {
                let basis: Vec<String> = m.basis(l).iter().map(|a| a.to_string()).collect();
                json!({"weight": l, "basis": basis, "rows": block_rows(&m, l)})
            })
            .collect();
        return Ok(Outcome::ok(to_line(&json!({
            "m": m.m(),
            "blocks": blocks,
            "quantum_trace": q_terms(&trq),
            "sj_via_trace": sj.to_json(),
        }))));
    }
    let mut out = String::new();
    for (l, _) in m.blocks() {
        let basis: Vec<String> = m.basis(l).iter().map(|a| a.to_string()).collect();
        writeln!(out, "weight {l}")?;
        writeln!(out, "\t{}", basis.join("\t"))?;
        for (label, row) in basis.iter().zip(block_rows(&m, l)) {
            writeln!(out, "{label}\t{}", row.join("\t"))?;
        }
    }
    writeln!(out, "tr_q: {trq}")?;
    writeln!(out, "SJ via trace: {sj}")?;
    Ok(Outcome::ok(out))
}

fn cmd_check(d: &TangleDiagram, inject_fault: bool, table: bool, json: bool) -> anyhow::Result<Outcome> {
    let report = run_checks(d, CheckOptions { inject_fault })?;
    let ok = report.passed();
    let text = if json {
        let theorem = check_theorem(d)?;
        to_line(&json!({
            "passed": ok,
            "checks": report.checks,
            "theorem": {
                "m": theorem.m,
                "states_checked": theorem.states_checked,
                "violations": theorem.violations,
                "rows": theorem.rows,
            },
        }))
    } else if table {
        check_theorem(d)?.to_text() + &report.to_text()
    } else {
        report.to_text()
    };
    Ok(Outcome { text, ok })
}
