//! Command-line front end: graph export, parameter classification, exact
//! cop numbers with table caching, lemma verification sweeps, interactive
//! play, and a solve benchmark matrix.
//!
//! Exit codes: 0 success or verified, 1 verification violation, 2 parameter
//! error, 3 resource/budget error.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use gp_pursuit::game::{is_capture, is_trapped, GameState, GameStateJson, Side};
use gp_pursuit::graph::{
    export_graph, family_membership, girth7_conditions, neighbourhood_tree, ExportFormat, GPGraph,
    Ring, Vertex,
};
use gp_pursuit::solver::policy::optimal_robber_move;
use gp_pursuit::solver::rank::for_each_multiset;
use gp_pursuit::solver::{solve, winning_placement, SolveOptions, Symmetry, WinTable};
use gp_pursuit::strategy::{
    initial_placement, initial_trapped_set, safe_move, verify_lemma1, verify_lemma2, Scope,
};
use gp_pursuit::Error;

#[derive(Parser)]
#[command(
    name = "gp-pursuit",
    version,
    about = "Cops-and-robbers engine for generalised Petersen graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print the run report as JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Solver worker threads; 0 means available parallelism.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
}

#[derive(Args)]
struct Params {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Dot,
    Json,
    AdjList,
}

#[derive(Clone, Copy, ValueEnum)]
enum SymmetryArg {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum LemmaArg {
    Lemma1,
    Lemma2,
    Counts,
    Figures,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Exhaustive,
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum RobberArg {
    Paper,
    Optimal,
}

#[derive(Subcommand)]
enum Command {
    /// Construct GP(n,k) and print it.
    Graph {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum, default_value_t = FormatArg::AdjList)]
        format: FormatArg,
    },
    /// Computed girth, matched girth-7 condition tags, family membership.
    Classify {
        #[command(flatten)]
        params: Params,
    },
    /// Exact cop number by retrograde analysis.
    Copnumber {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 4)]
        max_cops: u32,
        #[arg(long, value_enum, default_value_t = SymmetryArg::On)]
        symmetry: SymmetryArg,
        /// Accept the known GP upper bound of 4 instead of solving c=4.
        #[arg(long)]
        assume_upper_4: bool,
        /// Table cache directory (default ./gpwt-cache, or $GP_PURSUIT_CACHE).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Memory budget for a single solve, in GiB.
        #[arg(long, default_value_t = 8)]
        budget_gib: u64,
    },
    /// Run a verification sweep; exits 1 if it finds violations.
    Verify {
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum)]
        lemma: LemmaArg,
        #[arg(long, value_enum, default_value_t = ScopeArg::Exhaustive)]
        scope: ScopeArg,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1905)]
        seed: u64,
    },
    /// Drive the cops against the engine's robber.
    Play {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 3)]
        cops: u32,
        #[arg(long, value_enum, default_value_t = RobberArg::Paper)]
        robber: RobberArg,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Time solves over a fixed (n,k,c,symmetry,threads) matrix; emits CSV.
    Bench {
        #[arg(long, default_value = "small")]
        suite: String,
    },
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    parameters: serde_json::Value,
    results: serde_json::Value,
    wall_time_ms: u64,
    worker_count: usize,
    table_cache_hit: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err.downcast_ref::<Error>() {
                Some(Error::Param(_) | Error::Family { .. } | Error::Turn { .. }) => 2,
                Some(Error::Budget { .. } | Error::Io(_)) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn effective_workers(threads: usize) -> usize {
    if threads != 0 {
        threads
    } else {
        std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1)
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let started = Instant::now();
    let workers = effective_workers(cli.threads);
    let (command, parameters, results, cache_hit, exit) = match cli.command {
        Command::Graph { params, format } => cmd_graph(&params, format, cli.json)?,
        Command::Classify { params } => cmd_classify(&params, cli.json)?,
        Command::Copnumber {
            params,
            max_cops,
            symmetry,
            assume_upper_4,
            cache_dir,
            budget_gib,
        } => cmd_copnumber(
            &params,
            max_cops,
            symmetry,
            assume_upper_4,
            cache_dir,
            budget_gib,
            cli.threads,
            cli.json,
        )?,
        Command::Verify {
            params,
            lemma,
            scope,
            samples,
            seed,
        } => cmd_verify(&params, lemma, scope, samples, seed, cli.json)?,
        Command::Play {
            params,
            cops,
            robber,
            cache_dir,
        } => cmd_play(&params, cops, robber, cache_dir, cli.threads)?,
        Command::Bench { suite } => cmd_bench(&suite, cli.threads, cli.json)?,
    };

    if cli.json {
        let report = RunReport {
            command,
            parameters,
            results,
            wall_time_ms: started.elapsed().as_millis() as u64,
            worker_count: workers,
            table_cache_hit: cache_hit,
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    }
    Ok(exit)
}

type CmdOutput = (String, serde_json::Value, serde_json::Value, bool, ExitCode);

fn build_graph(params: &Params) -> Result<GPGraph, Error> {
    GPGraph::new(params.n, params.k)
}

fn cmd_graph(params: &Params, format: FormatArg, json_mode: bool) -> anyhow::Result<CmdOutput> {
    let g = build_graph(params)?;
    let (fmt, name) = match format {
        FormatArg::Dot => (ExportFormat::Dot, "dot"),
        FormatArg::Json => (ExportFormat::Json, "json"),
        FormatArg::AdjList => (ExportFormat::AdjList, "adj-list"),
    };
    let text = export_graph(&g, fmt);
    if !json_mode {
        print!("{text}");
        if !text.ends_with('\n') {
            println!();
        }
    }
    Ok((
        "graph".into(),
        json!({"n": params.n, "k": params.k, "format": name}),
        json!({"serialized": text}),
        false,
        ExitCode::SUCCESS,
    ))
}

fn cmd_classify(params: &Params, json_mode: bool) -> anyhow::Result<CmdOutput> {
    let g = build_graph(params)?;
    let girth = g.girth();
    let tags: Vec<String> = girth7_conditions(params.n, params.k)
        .iter()
        .map(|t| format!("{t:?}"))
        .collect();
    let family = family_membership(params.n, params.k);
    if !json_mode {
        println!("GP({},{}): girth {girth}", params.n, params.k);
        println!("girth-7 condition tags: [{}]", tags.join(", "));
        match family {
            Some(f) => println!(
                "family n=7k/i: yes (i={}{})",
                f.divisor,
                if f.exception { ", small exception" } else { "" }
            ),
            None => println!("family n=7k/i: no"),
        }
    }
    Ok((
        "classify".into(),
        json!({"n": params.n, "k": params.k}),
        json!({"girth": girth, "tags": tags, "family": family}),
        false,
        ExitCode::SUCCESS,
    ))
}

fn cache_dir_or_default(cache_dir: Option<PathBuf>) -> PathBuf {
    cache_dir
        .or_else(|| std::env::var_os("GP_PURSUIT_CACHE").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("./gpwt-cache"))
}

fn cache_path(dir: &Path, n: u32, k: u32, c: u32, symmetry: Symmetry, distances: bool) -> PathBuf {
    let sym = match symmetry {
        Symmetry::Dihedral => "dih",
        Symmetry::None => "raw",
    };
    let d = if distances { "_d" } else { "" };
    dir.join(format!("gpwt_n{n}_k{k}_c{c}_{sym}{d}.bin"))
}

/// Loads a matching cached table or solves and saves one. Returns the table
/// and whether the cache supplied it.
fn load_or_solve(
    g: &GPGraph,
    c: u32,
    opts: &SolveOptions,
    dir: &Path,
) -> Result<(WinTable, bool), Error> {
    let path = cache_path(dir, g.n(), g.k(), c, opts.symmetry, opts.distances);
    if path.is_file() {
        if let Ok(t) = WinTable::load(&path) {
            if t.n == g.n()
                && t.k == g.k()
                && t.c == c
                && t.symmetry == opts.symmetry
                && t.has_distances() == opts.distances
            {
                return Ok((t, true));
            }
        }
    }
    let t = solve(g, c, opts)?;
    t.save(&path)?;
    Ok((t, false))
}

#[allow(clippy::too_many_arguments)]
fn cmd_copnumber(
    params: &Params,
    max_cops: u32,
    symmetry: SymmetryArg,
    assume_upper_4: bool,
    cache_dir: Option<PathBuf>,
    budget_gib: u64,
    threads: usize,
    json_mode: bool,
) -> anyhow::Result<CmdOutput> {
    let g = build_graph(params)?;
    let dir = cache_dir_or_default(cache_dir);
    let opts = SolveOptions {
        symmetry: match symmetry {
            SymmetryArg::On => Symmetry::Dihedral,
            SymmetryArg::Off => Symmetry::None,
        },
        threads,
        distances: false,
        budget_bytes: budget_gib << 30,
    };

    let mut levels = Vec::new();
    let mut all_cached = true;
    let mut value = None;
    let mut assumed = false;
    for c in 1..=max_cops {
        if c == 4 && assume_upper_4 {
            value = Some(4);
            assumed = true;
            break;
        }
        let (t, hit) = load_or_solve(&g, c, &opts, &dir)?;
        all_cached &= hit;
        let t0 = Instant::now();
        let win = winning_placement(&g, &t).is_some();
        let placement_ms = t0.elapsed().as_millis() as u64;
        if !json_mode {
            println!(
                "c={c}: cops {}  (states {}, copwin {}, iterations {}, solve {} ms, placement {} ms{})",
                if win { "win " } else { "lose" },
                t.stats.states,
                t.stats.copwin_states,
                t.stats.levels,
                t.stats.solve_ms,
                placement_ms,
                if hit { ", cached" } else { "" }
            );
        }
        levels.push(json!({
            "c": c,
            "cops_win": win,
            "states": t.stats.states,
            "copwin_states": t.stats.copwin_states,
            "iterations": t.stats.levels,
            "solve_ms": t.stats.solve_ms,
            "cache_hit": hit,
        }));
        if win {
            value = Some(c);
            break;
        }
    }

    let Some(value) = value else {
        return Err(Error::ExceedsMax { max: max_cops }.into());
    };
    if !json_mode {
        if assumed {
            println!("cop number: {value} (upper bound assumed)");
        } else {
            println!("cop number: {value}");
        }
    }
    Ok((
        "copnumber".into(),
        json!({
            "n": params.n, "k": params.k, "max_cops": max_cops,
            "symmetry": matches!(opts.symmetry, Symmetry::Dihedral),
            "assume_upper_4": assume_upper_4,
        }),
        json!({"cop_number": value, "assumed_upper_bound": assumed, "levels": levels}),
        all_cached,
        ExitCode::SUCCESS,
    ))
}

fn cmd_verify(
    params: &Params,
    lemma: LemmaArg,
    scope: ScopeArg,
    samples: u64,
    seed: u64,
    json_mode: bool,
) -> anyhow::Result<CmdOutput> {
    let g = build_graph(params)?;
    let scope = match scope {
        ScopeArg::Exhaustive => Scope::Exhaustive,
        ScopeArg::Sample => Scope::Sample {
            count: samples,
            seed,
        },
    };
    let (name, results, violations) = match lemma {
        LemmaArg::Lemma1 => {
            let r = verify_lemma1(&g, scope)?;
            if !json_mode {
                println!(
                    "lemma1: {} states, cases c1/c2/c3/trapped = {}/{}/{}/{}, subcases A/B/C = {}/{}/{}, violations {}",
                    r.states_checked,
                    r.case_counts.case1,
                    r.case_counts.case2,
                    r.case_counts.case3,
                    r.case_counts.trapped,
                    r.subcase_counts.a,
                    r.subcase_counts.b,
                    r.subcase_counts.c,
                    r.violation_count
                );
            }
            let v = r.violation_count;
            ("lemma1", serde_json::to_value(&r)?, v)
        }
        LemmaArg::Lemma2 => {
            let r = verify_lemma2(&g, scope)?;
            if !json_mode {
                println!(
                    "lemma2: {} states, unclassified {}, capturable {}, trapped-after-reply {}, violations {}",
                    r.states_checked,
                    r.unclassified,
                    r.capturable,
                    r.trapped_after_reply,
                    r.violation_count
                );
            }
            let v = r.violation_count;
            ("lemma2", serde_json::to_value(&r)?, v)
        }
        LemmaArg::Counts => {
            let (results, violations) = verify_counts(&g, json_mode)?;
            ("counts", results, violations)
        }
        LemmaArg::Figures => {
            let (results, violations) = verify_figures(&g, json_mode)?;
            ("figures", results, violations)
        }
    };
    let exit = if violations == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    };
    if !json_mode {
        println!(
            "{}",
            if violations == 0 {
                "verified"
            } else {
                "VIOLATIONS FOUND"
            }
        );
    }
    Ok((
        format!("verify-{name}"),
        json!({"n": params.n, "k": params.k}),
        results,
        false,
        exit,
    ))
}

/// Trapped-set sizes for the two opening configurations around every
/// vertex, plus the safety of the opening placement rule.
fn verify_counts(g: &GPGraph, json_mode: bool) -> anyhow::Result<(serde_json::Value, u64)> {
    g.require_family()?;
    let n = g.n();
    let mut violations = 0u64;
    let mut adjacent_sizes = std::collections::BTreeSet::new();
    let mut ideal_sizes = std::collections::BTreeSet::new();
    for w in 0..g.order() {
        let nbrs = *g.neighbours_of_id(w);
        let adjacent: Vec<Vertex> = nbrs.iter().map(|&v| Vertex::from_id(v, n)).collect();
        let size = initial_trapped_set(g, &adjacent)?.len();
        adjacent_sizes.insert(size);
        if size != 10 {
            violations += 1;
        }
        let gates: Vec<[u32; 2]> = nbrs
            .iter()
            .map(|&v| {
                let mut it = g.neighbours_of_id(v).iter().copied().filter(|&x| x != w);
                [it.next().unwrap(), it.next().unwrap()]
            })
            .collect();
        for pick in 0..8u32 {
            let cops: Vec<Vertex> = (0..3)
                .map(|i| Vertex::from_id(gates[i][(pick >> i & 1) as usize], n))
                .collect();
            let size = initial_trapped_set(g, &cops)?.len();
            ideal_sizes.insert(size);
            if size != 13 {
                violations += 1;
            }
        }
    }
    let mut placements_checked = 0u64;
    for_each_multiset(g.order(), 3, |cops| {
        let cop_vs: Vec<Vertex> = cops.iter().map(|&c| Vertex::from_id(c, n)).collect();
        match initial_placement(g, &cop_vs) {
            Ok(r) => {
                let s = GameState::new(n, cop_vs, r, Side::Cops).unwrap();
                if is_capture(&s) || is_trapped(g, &s) {
                    violations += 1;
                }
            }
            Err(_) => violations += 1,
        }
        placements_checked += 1;
    });
    if !json_mode {
        println!(
            "counts: adjacent-cop trapped sizes {:?} (want {{10}}), ideal trapped sizes {:?} (want {{13}}), {} placements safe",
            adjacent_sizes, ideal_sizes, placements_checked
        );
    }
    Ok((
        json!({
            "adjacent_sizes": adjacent_sizes,
            "ideal_sizes": ideal_sizes,
            "placements_checked": placements_checked,
            "violations": violations,
        }),
        violations,
    ))
}

/// Depth-4 structure audit: coincident pair counts and the inner cross edge.
fn verify_figures(g: &GPGraph, json_mode: bool) -> anyhow::Result<(serde_json::Value, u64)> {
    g.require_family()?;
    let n = g.n();
    let k = g.k() as i64;
    let mut violations = 0u64;
    for id in 0..g.order() {
        let root = Vertex::from_id(id, n);
        let tree = neighbourhood_tree(g, root)?;
        if !tree.shallow_coincidences().is_empty() || tree.coincidences.len() != 4 {
            violations += 1;
            continue;
        }
        let mut got: Vec<Vertex> = tree.coincidences.iter().map(|&(v, _, _)| v).collect();
        got.sort();
        let i = root.index as i64;
        let mut expect: Vec<Vertex> = [i - k - 1, i + k - 1, i - k + 1, i + k + 1]
            .iter()
            .map(|&j| match root.ring {
                Ring::Outer => Vertex::outer(j, n),
                Ring::Inner => Vertex::inner(j, n),
            })
            .collect();
        expect.sort();
        if got != expect {
            violations += 1;
        }
        if root.ring == Ring::Inner && tree.dotted_edge.is_none() {
            violations += 1;
        }
    }
    for j in 0..n as i64 {
        if !g.adjacent(Vertex::inner(j + 3 * k, n), Vertex::inner(j - 3 * k, n)) {
            violations += 1;
        }
    }
    if !json_mode {
        println!(
            "figures: {} roots audited, 4 coincident depth-4 pairs each, dotted edge present; violations {}",
            g.order(),
            violations
        );
    }
    Ok((
        json!({"roots_checked": g.order(), "violations": violations}),
        violations,
    ))
}

#[derive(Serialize)]
struct TranscriptEntry {
    ply: u32,
    actor: String,
    action: String,
    state: GameStateJson,
}

fn parse_cop_positions(line: &str, n: u32, count: usize) -> Result<Vec<Vertex>, String> {
    let mut out = Vec::new();
    for token in line.split_whitespace() {
        let v: Vertex = token.parse().map_err(|_| format!("bad vertex {token:?}"))?;
        if v.index >= n {
            return Err(format!("index out of range in {token:?} (n = {n})"));
        }
        out.push(v);
    }
    if out.len() != count {
        return Err(format!("need exactly {count} vertices, got {}", out.len()));
    }
    Ok(out)
}

/// Legal iff some assignment of new positions to current cops moves each
/// cop at most one step.
fn cop_move_legal(g: &GPGraph, from: &[Vertex], to: &[Vertex]) -> bool {
    fn matching(
        g: &GPGraph,
        from: &[Vertex],
        used: &mut Vec<bool>,
        to: &[Vertex],
        i: usize,
    ) -> bool {
        if i == from.len() {
            return true;
        }
        for (j, &t) in to.iter().enumerate() {
            if !used[j] && (from[i] == t || g.adjacent(from[i], t)) {
                used[j] = true;
                if matching(g, from, used, to, i + 1) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    from.len() == to.len() && matching(g, from, &mut vec![false; to.len()], to, 0)
}

fn cmd_play(
    params: &Params,
    cops: u32,
    robber: RobberArg,
    cache_dir: Option<PathBuf>,
    threads: usize,
) -> anyhow::Result<CmdOutput> {
    let g = build_graph(params)?;
    if !(1..=4).contains(&cops) {
        return Err(Error::Param(format!("cop count must be 1..=4, got {cops}")).into());
    }
    let n = g.n();
    let table = match robber {
        RobberArg::Paper => {
            g.require_family()?;
            None
        }
        RobberArg::Optimal => {
            let dir = cache_dir_or_default(cache_dir);
            let opts = SolveOptions {
                distances: true,
                threads,
                ..Default::default()
            };
            let (t, _) = load_or_solve(&g, cops, &opts, &dir)?;
            Some(t)
        }
    };

    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    let mut transcript: Vec<TranscriptEntry> = Vec::new();
    let prompt = |msg: &str| {
        print!("{msg}");
        std::io::stdout().flush().ok();
    };

    println!(
        "playing {cops} cops on GP({},{}) against the {} robber",
        params.n,
        params.k,
        match robber {
            RobberArg::Paper => "constructive-strategy",
            RobberArg::Optimal => "solver-optimal",
        }
    );
    println!("enter vertices like `a0 a5 b3`; `quit` ends the session");

    // Placement phase: cops choose, then the robber replies.
    let cop_positions = loop {
        prompt(&format!("place {cops} cops> "));
        let Some(Ok(line)) = lines.next() else {
            return finish_play(params, cops, transcript, "input closed");
        };
        let line = line.trim().to_string();
        if line == "quit" {
            return finish_play(params, cops, transcript, "quit");
        }
        match parse_cop_positions(&line, n, cops as usize) {
            Ok(v) => break v,
            Err(e) => println!("  {e}; try again"),
        }
    };
    let robber_start = match (&table, robber) {
        (_, RobberArg::Paper) => initial_placement(&g, &cop_positions)?,
        (Some(t), RobberArg::Optimal) => {
            // Lowest-id placement outside the cop-win region, else the one
            // with the longest capture distance.
            let cop_ids: Vec<u32> = cop_positions.iter().map(|v| v.id(n)).collect();
            let mut best: Option<(u16, u32)> = None;
            let mut pick = None;
            for r in 0..g.order() {
                if cop_ids.contains(&r) {
                    continue;
                }
                if !t.copwin_ids(&cop_ids, r, Side::Cops) {
                    pick = Some(r);
                    break;
                }
                let d = t.distance_ids(&cop_ids, r, Side::Cops).unwrap();
                if best.is_none_or(|(bd, _)| d > bd) {
                    best = Some((d, r));
                }
            }
            Vertex::from_id(pick.unwrap_or_else(|| best.unwrap().1), n)
        }
        _ => unreachable!(),
    };
    let mut state = GameState::new(n, cop_positions, robber_start, Side::Cops)?;
    println!("robber places on {robber_start}");
    println!("{state}");
    transcript.push(TranscriptEntry {
        ply: 0,
        actor: "placement".into(),
        action: format!("robber -> {robber_start}"),
        state: (&state).into(),
    });

    let mut ply = 0u32;
    loop {
        ply += 1;
        // Cops' turn.
        let new_cops = loop {
            prompt(&format!(
                "cops move ({} each stays or steps)> ",
                state.cops().len()
            ));
            let Some(Ok(line)) = lines.next() else {
                return finish_play(params, cops, transcript, "input closed");
            };
            let line = line.trim().to_string();
            if line == "quit" {
                return finish_play(params, cops, transcript, "quit");
            }
            if line == "pass" {
                break state.cops().to_vec();
            }
            match parse_cop_positions(&line, n, cops as usize) {
                Ok(v) if cop_move_legal(&g, state.cops(), &v) => break v,
                Ok(_) => println!("  illegal: every cop may stay or move one step; try again"),
                Err(e) => println!("  {e}; try again"),
            }
        };
        state = GameState::new(n, new_cops, state.robber, Side::Robber)?;
        transcript.push(TranscriptEntry {
            ply,
            actor: "cops".into(),
            action: state.display(),
            state: (&state).into(),
        });
        if is_capture(&state) {
            println!("capture! cops win after {ply} plies");
            return finish_play(params, cops, transcript, "capture");
        }

        // Robber's turn.
        ply += 1;
        let mv = match (&table, robber) {
            (_, RobberArg::Paper) => match safe_move(&g, &state) {
                Ok(m) => m,
                Err(Error::Trapped) => {
                    println!("robber is trapped and passes");
                    state.robber
                }
                Err(e) => return Err(e.into()),
            },
            (Some(t), RobberArg::Optimal) => optimal_robber_move(&g, t, &state)?,
            _ => unreachable!(),
        };
        state = GameState::new(n, state.cops().to_vec(), mv, Side::Cops)?;
        println!("robber moves to {mv}");
        println!("{state}");
        transcript.push(TranscriptEntry {
            ply,
            actor: "robber".into(),
            action: format!("-> {mv}"),
            state: (&state).into(),
        });
        if is_capture(&state) {
            println!("the robber walked into a cop; cops win");
            return finish_play(params, cops, transcript, "capture");
        }
    }
}

fn finish_play(
    params: &Params,
    cops: u32,
    transcript: Vec<TranscriptEntry>,
    outcome: &str,
) -> anyhow::Result<CmdOutput> {
    println!("session over: {outcome}");
    Ok((
        "play".into(),
        json!({"n": params.n, "k": params.k, "cops": cops}),
        json!({"outcome": outcome, "transcript": transcript}),
        false,
        ExitCode::SUCCESS,
    ))
}

fn cmd_bench(suite: &str, threads: usize, json_mode: bool) -> anyhow::Result<CmdOutput> {
    let matrix: Vec<(u32, u32, u32)> = match suite {
        "small" => vec![(5, 2, 1), (5, 2, 2), (5, 2, 3), (14, 4, 2), (14, 4, 3)],
        "family" => vec![(28, 8, 3), (35, 10, 3), (28, 8, 4)],
        other => {
            return Err(Error::Param(format!("unknown suite {other:?} (small, family)")).into())
        }
    };
    let max_threads = effective_workers(0);
    let mut rows = Vec::new();
    let mut csv = String::from(
        "n,k,c,symmetry,threads,states,copwin_states,iterations,solve_ms,cops_win,checksum\n",
    );
    for (n, k, c) in matrix {
        let g = GPGraph::new(n, k)?;
        for symmetry in [Symmetry::Dihedral, Symmetry::None] {
            if symmetry == Symmetry::None && c == 4 {
                continue; // raw 4-cop tables answer nothing the reduced ones do not
            }
            for t in [1usize, max_threads] {
                let opts = SolveOptions {
                    symmetry,
                    threads: if threads != 0 { threads.min(t) } else { t },
                    distances: false,
                    ..Default::default()
                };
                let table = solve(&g, c, &opts)?;
                let win = winning_placement(&g, &table).is_some();
                let sym = match symmetry {
                    Symmetry::Dihedral => "on",
                    Symmetry::None => "off",
                };
                csv.push_str(&format!(
                    "{n},{k},{c},{sym},{t},{},{},{},{},{},{:016x}\n",
                    table.stats.states,
                    table.stats.copwin_states,
                    table.stats.levels,
                    table.stats.solve_ms,
                    win,
                    table.checksum()
                ));
                rows.push(json!({
                    "n": n, "k": k, "c": c, "symmetry": sym, "threads": t,
                    "states": table.stats.states,
                    "copwin_states": table.stats.copwin_states,
                    "iterations": table.stats.levels,
                    "solve_ms": table.stats.solve_ms,
                    "cops_win": win,
                    "checksum": format!("{:016x}", table.checksum()),
                }));
            }
        }
    }
    if !json_mode {
        print!("{csv}");
    }
    Ok((
        "bench".into(),
        json!({"suite": suite}),
        json!({"rows": rows, "csv": csv}),
        false,
        ExitCode::SUCCESS,
    ))
}
