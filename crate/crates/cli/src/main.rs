//! `ribbonlab`: command-line front end.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 a check or suite
//! failed.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use ribbonlab_core::enumeration::{count_ribbons, gamma_distribution, realizable_pairs, ribbons, Filter};
use ribbonlab_core::game::{GameSolver, GameState};
use ribbonlab_core::oracle::{self, PackingSearch};
use ribbonlab_core::solver::is_gamma_zero;
use ribbonlab_core::verify::{default_n_max, run_suite, SUITES};
use ribbonlab_core::{InvariantKind, Ribbon, Solver};
use ribbonlab_service::{AppState, DEFAULT_PORT};

#[derive(Parser)]
#[command(name = "ribbonlab", version, about = "Ribbon invariants, packings and the marking game")]
struct Cli {
    /// Worker threads for enumeration and verification.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Memo cache file, loaded at start and written back at exit.
    #[arg(long, global = true, env = "RIBBONLAB_CACHE")]
    cache: Option<PathBuf>,
    /// Recompute every cache entry on load and fail on a mismatch.
    #[arg(long, global = true)]
    recheck: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants of one ribbon as key=value pairs.
    Compute {
        ribbon: String,
        #[arg(long, value_enum, default_value_t = Kind::All)]
        kind: Kind,
        /// Print the splitting tree behind the value.
        #[arg(long)]
        trace: bool,
    },
    /// Packing enumeration for one ribbon.
    Oracle {
        ribbon: String,
        /// Only the number of packings.
        #[arg(long)]
        count: bool,
        /// Packings grouped by number of critical points.
        #[arg(long)]
        by_size: bool,
        /// Every packing as one JSON line.
        #[arg(long)]
        emit_packings: bool,
    },
    /// Decide gamma = 0 and print the cancellation chain.
    Iszero { ribbon: String },
    /// Stream canonical ribbons with n nodes.
    Enumerate {
        #[arg(short)]
        n: usize,
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long)]
        with_gamma: bool,
    },
    /// Closed-form counts for n nodes.
    Count {
        #[arg(short)]
        n: usize,
        /// Stream the enumeration and compare with the closed forms.
        #[arg(long)]
        check: bool,
    },
    /// Run a named verification suite, or `all`.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(short)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gamma histogram and realizable (sigma, gamma) pairs.
    Stats {
        #[arg(short)]
        n: usize,
    },
    /// Start the HTTP API.
    Serve {
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Drop games idle for this many minutes.
        #[arg(long, default_value_t = 60)]
        idle_minutes: u64,
        /// Game snapshot restored at start and written at shutdown.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
    /// Optimal-play winner of a random board.
    GameSolve {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct FilterArgs {
    #[arg(long)]
    positive: bool,
    #[arg(long)]
    negative: bool,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<i64>,
}

impl FilterArgs {
    fn filter(&self) -> Filter {
        match (self.positive, self.negative, self.sigma) {
            (true, _, _) => Filter::Positive,
            (_, true, _) => Filter::Negative,
            (_, _, Some(s)) => Filter::Sigma(s),
            _ => Filter::All,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    All,
    Gamma,
    Gamma0,
    Ext,
    Sad,
}

impl Kind {
    fn invariant(self) -> Option<InvariantKind> {
        match self {
            Kind::All => None,
            Kind::Gamma => Some(InvariantKind::Gamma),
            Kind::Gamma0 => Some(InvariantKind::Gamma0),
            Kind::Ext => Some(InvariantKind::GammaExt),
            Kind::Sad => Some(InvariantKind::GammaSad),
        }
    }
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    CheckFailed,
}

fn parse(text: &str) -> Result<Ribbon> {
    text.parse().with_context(|| format!("invalid ribbon `{text}`"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<Status> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().context("configuring the worker pool")?;
    }
    let solver = Arc::new(Solver::new());
    if let Some(path) = cli.cache.as_deref().filter(|p| p.exists()) {
        let file = File::open(path).with_context(|| format!("opening cache {}", path.display()))?;
        let n = solver.load(BufReader::new(file), cli.recheck).map_err(|e| anyhow::anyhow!("cache {}: {e}", path.display()))?;
        eprintln!("loaded {n} cache entries from {}", path.display());
    }
    let status = dispatch(cli.command, &solver)?;
    if let Some(path) = cli.cache.as_deref() {
        save_cache(&solver, path)?;
    }
    Ok(status)
}

fn save_cache(solver: &Solver, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path).with_context(|| format!("writing cache {}", path.display()))?);
    solver.save(&mut w)?;
    w.flush()?;
    Ok(())
}

fn dispatch(command: Command, solver: &Arc<Solver>) -> Result<Status> {
    let out = std::io::stdout();
    let mut out = BufWriter::new(out.lock());
    let status = match command {
        Command::Compute { ribbon, kind, trace } => {
            let a = parse(&ribbon)?;
            let v = solver.invariants(&a)?;
            match kind.invariant() {
                None => writeln!(out, "{v}")?,
                Some(k) => writeln!(out, "{}={}", key(k), v.get(k))?,
            }
            if trace {
                write!(out, "{}", solver.trace(&a, kind.invariant().unwrap_or(InvariantKind::Gamma))?.render())?;
            }
            Status::Ok
        }
        Command::Oracle { ribbon, count, by_size, emit_packings } => {
            let a = parse(&ribbon)?;
            if emit_packings {
                for q in PackingSearch::new(&a)?.collect() {
                    writeln!(out, "{}", oracle::packing_json(&q))?;
                }
            } else if count {
                writeln!(out, "packings={}", oracle::count_packings(&a)?)?;
            } else {
                let s = oracle::summarize(&a)?;
                if by_size {
                    for (size, c) in &s.by_size {
                        writeln!(out, "size={size} count={c}")?;
                    }
                } else {
                    writeln!(
                        out,
                        "packings={} {} compression={} max_nondeg_saddles={} min_nondeg_saddles={} min_levels={}",
                        s.packings, s.minimum, s.compression, s.max_nondeg_saddles, s.min_nondeg_saddles, s.min_levels
                    )?;
                }
            }
            Status::Ok
        }
        Command::Iszero { ribbon } => {
            let a = parse(&ribbon)?;
            let v = is_gamma_zero(&a);
            match v.refutation {
                Some(why) if !v.zero => writeln!(out, "zero=false reason=\"{why}\"")?,
                _ => writeln!(out, "zero={}", v.zero)?,
            }
            for step in &v.witness {
                writeln!(out, "cancel {} nodes {} {}", step.ribbon, step.p, step.q)?;
            }
            Status::Ok
        }
        Command::Enumerate { n, filter, with_gamma } => {
            let mut stream = ribbons(n, filter.filter())?.peekable();
            while stream.peek().is_some() {
                let chunk: Vec<Ribbon> = stream.by_ref().take(1 << 16).collect();
                if with_gamma {
                    let gammas: Vec<u32> = chunk.par_iter().map(|a| solver.gamma(a)).collect::<Result<_, _>>()?;
                    for (a, g) in chunk.iter().zip(gammas) {
                        writeln!(out, "{a} gamma={g}")?;
                    }
                } else {
                    for a in &chunk {
                        writeln!(out, "{a}")?;
                    }
                }
            }
            Status::Ok
        }
        Command::Count { n, check } => {
            let row = count_ribbons(n)?;
            writeln!(out, "n={} ribbons={} zigzag={} positive={}", row.n, row.ribbons, row.zigzag, row.positive)?;
            for (s, c) in &row.per_sigma {
                writeln!(out, "sigma={s} count={c}")?;
            }
            if check {
                let streamed = ribbons(n, Filter::All)?.count();
                let ok = row.ribbons == streamed.into();
                writeln!(out, "streamed={streamed} check {}", if ok { "OK" } else { "FAILED" })?;
                if !ok {
                    return finish(out, Status::CheckFailed);
                }
            }
            Status::Ok
        }
        Command::Verify { suite, n, seed, out: report_path } => {
            ensure_known_suite(&suite)?;
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut reports = Vec::new();
            for name in names {
                let n_max = n.unwrap_or_else(|| default_n_max(name));
                let rep = run_suite(solver, name, n_max, seed)?;
                writeln!(out, "{}", rep.summary())?;
                for f in rep.failures.iter().take(20) {
                    writeln!(out, "  fail {} {}", f.ribbon.as_deref().unwrap_or("-"), f.clause)?;
                }
                for note in &rep.notes {
                    writeln!(out, "  note {note}")?;
                }
                reports.push(rep);
            }
            if let Some(path) = report_path {
                let file = File::create(&path).with_context(|| format!("writing {}", path.display()))?;
                serde_json::to_writer_pretty(file, &reports)?;
            }
            if reports.iter().all(|r| r.passed()) {
                Status::Ok
            } else {
                Status::CheckFailed
            }
        }
        Command::Stats { n } => {
            for (g, c) in gamma_distribution(solver, n)? {
                writeln!(out, "gamma={g} count={c}")?;
            }
            let pairs: Vec<String> = realizable_pairs(solver, n)?.into_iter().map(|(s, g)| format!("({s},{g})")).collect();
            writeln!(out, "realizable {}", pairs.join(" "))?;
            Status::Ok
        }
        Command::Serve { port, idle_minutes, snapshot } => {
            drop(out);
            serve(solver.clone(), port, Duration::from_secs(idle_minutes * 60), snapshot)?;
            return Ok(Status::Ok);
        }
        Command::GameSolve { n, seed } => {
            let state = GameState::random(n, seed)?;
            let mut gs = GameSolver::new(&state.permutation)?;
            let winner = gs.winner(&state);
            let perm: Vec<String> = state.permutation.iter().map(u32::to_string).collect();
            writeln!(out, "n={n} seed={seed} permutation=({}) winner={winner:?} states={}", perm.join(","), gs.states_seen())?;
            Status::Ok
        }
    };
    finish(out, status)
}

fn finish(mut out: impl Write, status: Status) -> Result<Status> {
    out.flush()?;
    Ok(status)
}

fn key(k: InvariantKind) -> &'static str {
    match k {
        InvariantKind::Gamma => "gamma",
        InvariantKind::Gamma0 => "gamma0",
        InvariantKind::GammaExt => "ext",
        InvariantKind::GammaSad => "sad",
    }
}

fn serve(solver: Arc<Solver>, port: u16, idle: Duration, snapshot: Option<PathBuf>) -> Result<()> {
    let app = Arc::new(AppState::new(solver, idle));
    if let Some(path) = snapshot.as_deref().filter(|p| p.exists()) {
        let n = app.load_games(path).with_context(|| format!("reading snapshot {}", path.display()))?;
        eprintln!("restored {n} games from {}", path.display());
    }
    eprintln!("listening on port {port}");
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(ribbonlab_service::serve(app.clone(), port))?;
    if let Some(path) = snapshot {
        app.save_games(&path).with_context(|| format!("writing snapshot {}", path.display()))?;
    }
    if app.game_count() > 0 {
        eprintln!("stopped with {} live games", app.game_count());
    }
    Ok(())
}

fn ensure_known_suite(name: &str) -> Result<()> {
    if name != "all" && !SUITES.contains(&name) {
        bail!("unknown suite `{name}`");
    }
    Ok(())
}
