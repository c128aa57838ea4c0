//! Batch interface to the lumpchain library. Every subcommand is
//! deterministic given its full flag set; verification subcommands exit 0
//! on pass, 1 on fail, and 2 on any error, so CI pipelines can consume the
//! results directly.

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lumpchain::chains::{
    composition_identity_check, doob_for_algebra, eta_vector, expected_spectrum,
    multistep_shuffle_compare, spectrum_certificate, stationary_distribution, verify_stationary,
    ChainId,
};
use lumpchain::combinat::{rsk_insertion_tableau, Partition, Perm};
use lumpchain::exactalg::{fmt_rat, Label, TransitionMatrix};
use lumpchain::hopf::{descent_operator_matrix, Algebra, DescentOpSpec};
use lumpchain::lumping::{dynkin_strong_check, weak_lumping_check, FiberMap};
use lumpchain::sample::{
    complementary_walk_add_law, hook_walk_remove_law, sample_path, simulate, walk_counts,
};
use num::traits::ToPrimitive;
use serde_json::{json, Map, Value};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "lumpchain",
    version,
    about = "Exact descent-operator chains on permutations, tableaux and partitions"
)]
struct Cli {
    /// Worker threads for matrix building and simulation (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a transition matrix (or the raw operator matrix) and emit it
    Matrix(MatrixArgs),
    /// Run an exact verification and emit a certificate
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Sample endpoints of repeated trajectories of a named chain
    Simulate(SimulateArgs),
    /// Insertion tableau of a permutation
    Rsk {
        /// Permutation in one-line notation, e.g. "3 1 2"
        word: String,
    },
    /// Endpoint frequencies of the hook walk or the complementary walk
    Walk(WalkArgs),
}

#[derive(Args)]
struct MatrixArgs {
    /// Named chain, e.g. partition-downup, b2r-std, bottom-r-std:2, q-mix:1/3
    #[arg(long, conflicts_with = "spec")]
    chain: Option<String>,
    /// JSON operator spec file (requires --algebra)
    #[arg(long, requires = "algebra")]
    spec: Option<PathBuf>,
    /// Algebra for --spec: fqsym, fsym, or lambda
    #[arg(long)]
    algebra: Option<String>,
    /// Degree of the state space
    #[arg(long)]
    n: usize,
    /// Emit the operator matrix without the stochastic rescaling
    #[arg(long)]
    pre_doob: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file (stdout if omitted; relative paths resolve under
    /// LUMPCHAIN_OUT_DIR when that is set)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the per-algebra size caps
    #[arg(long)]
    force_large: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// pi K = pi for the chain's exact stationary law
    Stationary {
        #[arg(long)]
        chain: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force_large: bool,
    },
    /// Characteristic polynomial against the graded-dimension prediction
    Spectrum {
        #[arg(long)]
        chain: String,
        #[arg(long)]
        n: usize,
        /// Also compute the minimal polynomial; the chain is diagonalisable
        /// exactly when it is squarefree
        #[arg(long)]
        min_poly: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force_large: bool,
    },
    /// Strong lumping: fiber-summed rows constant on fibers
    Dynkin {
        /// Chain on the big state space
        #[arg(long)]
        big: String,
        /// Fiber map: sh, rsk-p, sh-rsk, des, identity
        #[arg(long)]
        theta: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force_large: bool,
    },
    /// Weak lumping from proportional fiber laws
    WeakLumping {
        #[arg(long)]
        big: String,
        /// Small chain; defaults to the same operator on the quotient space
        #[arg(long)]
        small: Option<String>,
        #[arg(long, default_value = "rsk-p")]
        theta: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force_large: bool,
    },
    /// Bottom-r-then-cut operator identity on the word basis
    Lemma53 {
        #[arg(long)]
        n: usize,
        /// Single r (all of 1..n when omitted)
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force_large: bool,
    },
    /// t-step laws from the identity: standardised vs classical shuffle
    Multistep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        /// Single r (all of 1..n when omitted)
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force_large: bool,
    },
    /// Canonical ordered basis of an algebra in one degree
    StateSpaceBasis {
        /// fqsym, fsym, or lambda
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force_large: bool,
    },
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    chain: String,
    #[arg(long)]
    n: usize,
    /// Starting state in text encoding (e.g. "1 2 3 4 5", "2,1", "1 2 / 3")
    #[arg(long)]
    start: String,
    /// Steps per trajectory
    #[arg(long)]
    t: usize,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write one full trajectory, one state per line
    #[arg(long)]
    log: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WalkArgs {
    /// Partition, e.g. "2,1"
    #[arg(long)]
    shape: String,
    #[arg(long, value_enum)]
    dir: WalkDir,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum WalkDir {
    Remove,
    Add,
}

fn main() {
    let code = match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run() -> anyhow::Result<i32> {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("setting the worker pool")?;
    }
    match cli.command {
        Command::Matrix(args) => cmd_matrix(args),
        Command::Verify(cmd) => cmd_verify(cmd),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Rsk { word } => {
            let perm: Perm = word.parse()?;
            println!("{}", rsk_insertion_tableau(&perm));
            Ok(0)
        }
        Command::Walk(args) => cmd_walk(args),
    }
}

/// Factorial-sized state spaces must fail predictably, not by exhausting
/// memory: FQSym n <= 8, FSym n <= 9, Lambda n <= 30 unless overridden.
fn cap_check(alg: Algebra, n: usize, force: bool) -> anyhow::Result<()> {
    if force {
        return Ok(());
    }
    let cap = match alg {
        Algebra::FQSym => 8,
        Algebra::FSym => 9,
        Algebra::Lambda => 30,
    };
    if n > cap {
        bail!(
            "degree {n} exceeds the {} matrix cap of {cap}; pass --force-large to proceed anyway",
            alg.name()
        );
    }
    Ok(())
}

/// Write to the output path (resolving relative paths under
/// LUMPCHAIN_OUT_DIR when set), or to stdout.
fn emit(out: Option<&Path>, content: &str) -> anyhow::Result<()> {
    match out {
        None => {
            println!("{content}");
            Ok(())
        }
        Some(path) => {
            let resolved = match std::env::var_os("LUMPCHAIN_OUT_DIR") {
                Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
                _ => path.to_path_buf(),
            };
            if let Some(parent) = resolved.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)
                        .with_context(|| format!("creating {}", parent.display()))?;
                }
            }
            let mut data = content.to_string();
            if !data.ends_with('\n') {
                data.push('\n');
            }
            fs::write(&resolved, data)
                .with_context(|| format!("writing {}", resolved.display()))?;
            eprintln!("wrote {}", resolved.display());
            Ok(())
        }
    }
}

fn named_chain_matrix(name: &str, n: usize, force: bool) -> anyhow::Result<(ChainId, TransitionMatrix)> {
    let id = ChainId::parse(name, n)?;
    cap_check(id.algebra(), n, force)?;
    let mat = id.transition_matrix()?;
    Ok((id, mat))
}

fn cmd_matrix(args: MatrixArgs) -> anyhow::Result<i32> {
    let mat = match (&args.chain, &args.spec) {
        (Some(name), None) => {
            let id = ChainId::parse(name, args.n)?;
            cap_check(id.algebra(), args.n, args.force_large)?;
            if args.pre_doob {
                id.operator_matrix()?
            } else {
                id.transition_matrix()?
            }
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let spec = DescentOpSpec::from_json(&text)?;
            if spec.n != args.n {
                bail!("spec has degree {}, but --n is {}", spec.n, args.n);
            }
            let alg = Algebra::parse(args.algebra.as_deref().unwrap_or_default())?;
            cap_check(alg, args.n, args.force_large)?;
            let op = descent_operator_matrix(alg, &spec)?;
            if args.pre_doob {
                op
            } else {
                doob_for_algebra(&op, alg)?
            }
        }
        _ => bail!("exactly one of --chain or --spec is required"),
    };
    let content = match args.format {
        Format::Json => serde_json::to_string_pretty(&mat.to_document())?,
        Format::Csv => mat.to_csv(),
        Format::Text => mat.to_text(),
    };
    emit(args.out.as_deref(), &content)?;
    Ok(0)
}

fn finish_certificate(out: Option<&Path>, doc: &Value, pass: bool) -> anyhow::Result<i32> {
    emit(out, &serde_json::to_string_pretty(doc)?)?;
    Ok(if pass { 0 } else { 1 })
}

fn cmd_verify(cmd: VerifyCmd) -> anyhow::Result<i32> {
    match cmd {
        VerifyCmd::Stationary { chain, n, out, force_large } => {
            let (id, mat) = named_chain_matrix(&chain, n, force_large)?;
            let (_, pi) = stationary_distribution(id.algebra(), n)?;
            let report = verify_stationary(&mat, &pi)?;
            let doc = json!({
                "check": "stationary",
                "chain": id.name(),
                "n": n,
                "pass": report.pass,
                "witness": report.witness.map(|(l, got, want)| json!({
                    "state": l.to_string(),
                    "pi_K": fmt_rat(&got),
                    "pi": fmt_rat(&want),
                })),
            });
            finish_certificate(out.as_deref(), &doc, report.pass)
        }
        VerifyCmd::Spectrum { chain, n, min_poly, out, force_large } => {
            let (id, mat) = named_chain_matrix(&chain, n, force_large)?;
            let cert = spectrum_certificate(&mat, id.algebra(), n);
            let mut eigen = Map::new();
            for (value, mult) in expected_spectrum(id.algebra(), n) {
                eigen.insert(fmt_rat(&value), json!(mult));
            }
            let mut doc = json!({
                "check": "spectrum",
                "chain": id.name(),
                "n": n,
                "pass": cert.pass,
                "eigenvalues": eigen,
                "expected_char_poly": cert.expected.to_string(),
                "actual_char_poly": cert.actual.to_string(),
            });
            if min_poly {
                let m = lumpchain::exactalg::min_poly(&mat);
                doc["diagonalisable"] = json!(m.is_squarefree());
                doc["min_poly"] = json!(m.to_string());
            }
            finish_certificate(out.as_deref(), &doc, cert.pass)
        }
        VerifyCmd::Dynkin { big, theta, n, out, force_large } => {
            let (_, mat) = named_chain_matrix(&big, n, force_large)?;
            let map = FiberMap::named(&theta, mat.basis())?;
            let cert = dynkin_strong_check(&mat, &map)?;
            let pass = cert.pass;
            let doc: Value = serde_json::from_str(&cert.to_json())?;
            finish_certificate(out.as_deref(), &doc, pass)
        }
        VerifyCmd::WeakLumping { big, small, theta, n, out, force_large } => {
            let (big_id, big_mat) = named_chain_matrix(&big, n, force_large)?;
            let map = FiberMap::named(&theta, big_mat.basis())?;
            let small_mat = match small {
                Some(name) => named_chain_matrix(&name, n, force_large)?.1,
                None => {
                    let spec = big_id.spec()?.ok_or_else(|| {
                        anyhow!("{} has no operator spec; pass --small explicitly", big_id.name())
                    })?;
                    let small_alg = match theta.as_str() {
                        "rsk-p" => Algebra::FSym,
                        "sh" | "sh-rsk" => Algebra::Lambda,
                        other => bail!("no default small chain for theta {other:?}; pass --small"),
                    };
                    cap_check(small_alg, n, force_large)?;
                    doob_for_algebra(&descent_operator_matrix(small_alg, &spec)?, small_alg)?
                }
            };
            let eta = eta_vector(big_id.algebra(), big_mat.basis())?;
            let cert = weak_lumping_check(&big_mat, &small_mat, &map, &eta)?;
            let pass = cert.pass;
            let doc: Value = serde_json::from_str(&cert.to_json())?;
            finish_certificate(out.as_deref(), &doc, pass)
        }
        VerifyCmd::Lemma53 { n, r, out, force_large } => {
            cap_check(Algebra::FQSym, n, force_large)?;
            let rs: Vec<usize> = match r {
                Some(r) => vec![r],
                None => (1..n).collect(),
            };
            let mut runs = Vec::new();
            let mut pass = true;
            for r in rs {
                let report = composition_identity_check(n, r)?;
                pass &= report.pass;
                runs.push(json!({
                    "r": r,
                    "pass": report.pass,
                    "witness": report.witness.map(|(row, col, lhs, rhs)| json!({
                        "row": row.to_string(),
                        "col": col.to_string(),
                        "lhs": fmt_rat(&lhs),
                        "rhs": fmt_rat(&rhs),
                    })),
                }));
            }
            let doc = json!({ "check": "lemma53", "n": n, "runs": runs, "pass": pass });
            finish_certificate(out.as_deref(), &doc, pass)
        }
        VerifyCmd::Multistep { n, t, r, out, force_large } => {
            cap_check(Algebra::FQSym, n, force_large)?;
            let rs: Vec<usize> = match r {
                Some(r) => vec![r],
                None => (1..n).collect(),
            };
            let mut runs = Vec::new();
            let mut pass = true;
            for r in rs {
                let report = multistep_shuffle_compare(n, r, t)?;
                pass &= report.pass;
                runs.push(json!({
                    "r": r,
                    "pass": report.pass,
                    "checked_up_to_t": report.steps,
                    "witness": report.witness.map(|(l, a, b)| json!({
                        "state": l.to_string(),
                        "std": fmt_rat(&a),
                        "shuffle": fmt_rat(&b),
                    })),
                }));
            }
            let mut doc = json!({ "check": "multistep", "n": n, "t": t, "runs": runs, "pass": pass });
            if n == 4 && t == 2 {
                // the worked two-step coincidence: equal mass by different routes
                let std_chain = ChainId::parse("bottom-r-std:1", 4)?.transition_matrix()?;
                let shuffle = ChainId::parse("bottom-r-shuffle:1", 4)?.transition_matrix()?;
                let from = Label::Perm("1 2 3 4".parse()?);
                let to = Label::Perm("3 1 4 2".parse()?);
                let i = std_chain.basis().require(&from)?;
                let j = std_chain.basis().require(&to)?;
                doc["witness_entry"] = json!({
                    "from": from.to_string(),
                    "to": to.to_string(),
                    "t": 2,
                    "std": fmt_rat(&std_chain.pow(2)?.entry(i, j)),
                    "shuffle": fmt_rat(&shuffle.pow(2)?.entry(i, j)),
                });
            }
            finish_certificate(out.as_deref(), &doc, pass)
        }
        VerifyCmd::StateSpaceBasis { algebra, n, out, force_large } => {
            let alg = Algebra::parse(&algebra)?;
            cap_check(alg, n, force_large)?;
            let basis = alg.basis(n)?;
            let sorted = basis
                .labels()
                .windows(2)
                .all(|w| w[0] < w[1]);
            let expected = alg.graded_dim(n);
            let count_ok = expected == num::BigUint::from(basis.len());
            let pass = sorted && count_ok;
            let doc = json!({
                "check": "state-space-basis",
                "algebra": alg.name(),
                "n": n,
                "size": basis.len(),
                "expected_size": expected.to_string(),
                "canonically_ordered": sorted,
                "pass": pass,
                "basis": basis.labels().iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            });
            finish_certificate(out.as_deref(), &doc, pass)
        }
    }
}

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<i32> {
    let id = ChainId::parse(&args.chain, args.n)?;
    let start = Label::parse_as(id.algebra().label_kind(), &args.start)?;
    let degree = match &start {
        Label::Perm(p) => p.n(),
        Label::Tableau(t) => t.n(),
        Label::Partition(p) => p.size(),
        Label::Composition(c) => c.degree(),
    };
    if degree != args.n {
        bail!("start state has degree {degree}, but --n is {}", args.n);
    }
    let dist = simulate(&id, &start, args.t, args.trials, args.seed)?;
    if let Some(log) = &args.log {
        let path = sample_path(&id, &start, args.t, args.seed)?;
        let lines: Vec<String> = path.iter().map(|l| l.to_string()).collect();
        emit(Some(log), &lines.join("\n"))?;
    }
    let mut counts = Map::new();
    for (label, count) in dist.counts() {
        counts.insert(label.to_string(), json!(count));
    }
    let doc = json!({
        "chain": id.name(),
        "n": args.n,
        "start": start.to_string(),
        "steps": args.t,
        "trials": args.trials,
        "seed": args.seed,
        "distinct_endpoints": dist.support_size(),
        "counts": counts,
    });
    emit(args.out.as_deref(), &serde_json::to_string_pretty(&doc)?)?;
    Ok(0)
}

fn cmd_walk(args: WalkArgs) -> anyhow::Result<i32> {
    let shape: Partition = args.shape.parse()?;
    let remove = matches!(args.dir, WalkDir::Remove);
    let counts = walk_counts(&shape, remove, args.trials, args.seed)?;
    let law = if remove {
        hook_walk_remove_law(&shape)?
    } else {
        complementary_walk_add_law(&shape)?
    };
    let mut count_map = Map::new();
    let mut freq_map = Map::new();
    let mut exact_map = Map::new();
    for (cell, p) in &law {
        let key = format!("{},{}", cell.0, cell.1);
        let c = counts.get(cell).copied().unwrap_or(0);
        count_map.insert(key.clone(), json!(c));
        freq_map.insert(key.clone(), json!(c as f64 / args.trials as f64));
        exact_map.insert(key, json!(fmt_rat(p)));
    }
    let tv: f64 = law
        .iter()
        .map(|(cell, p)| {
            let c = counts.get(cell).copied().unwrap_or(0);
            (c as f64 / args.trials as f64 - p.to_f64().unwrap()).abs()
        })
        .sum::<f64>()
        / 2.0;
    let doc = json!({
        "shape": shape.to_string(),
        "dir": if remove { "remove" } else { "add" },
        "seed": args.seed,
        "trials": args.trials,
        "counts": count_map,
        "frequencies": freq_map,
        "exact": exact_map,
        "tv_to_exact": tv,
    });
    emit(args.out.as_deref(), &serde_json::to_string_pretty(&doc)?)?;
    Ok(0)
}
