use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, Context};
use levelrank::engine::{compute_pagerank, Mode};
use levelrank::generate::{generate_ba, replicate, GeneratorConfig};
use levelrank::graph::{parse_edge_list, write_edge_list, Graph, LoopPolicy};
use levelrank::partition::{find_components, reference_partition, validate_partition, PartitionCensus};
use levelrank::schedule::{build_schedule, export_reordered, write_coordinates, SolveUnit, UnitKind};
use levelrank::solvers::{oracle_r1_to_r3, solve_baseline, solve_small_scc, SolverParams};
use serde_json::json;

use crate::args::*;
use crate::output::{parse_weights, sig, write_ranks};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_IO: u8 = 2;
pub const EXIT_VALIDATION: u8 = 3;

/// Largest graph `validate` accepts; the oracles are dense.
const VALIDATE_MAX_VERTICES: usize = 2000;
/// The eigenvector route is quadratic per step, so it runs on smaller graphs only.
const ORACLE_MAX_VERTICES: usize = 500;
/// Floating-point slack added to every analytic bound in `validate`.
const ROUNDING_FLOOR: f64 = 1e-9;

const DEFAULT_C: f64 = 0.85;
const DEFAULT_TOL: f64 = 1e-9;
const DEFAULT_SWEEP_TOL: f64 = 1e-10;

pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

type CmdResult<T = ()> = Result<T, Failure>;

trait ExitCodeExt<T> {
    fn or_exit(self, code: u8) -> CmdResult<T>;
}

impl<T, E: Into<anyhow::Error>> ExitCodeExt<T> for Result<T, E> {
    fn or_exit(self, code: u8) -> CmdResult<T> {
        self.map_err(|e| Failure {
            code,
            error: e.into(),
        })
    }
}

fn fail<T>(code: u8, error: anyhow::Error) -> CmdResult<T> {
    Err(Failure { code, error })
}

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Generate(Generate::Ba(a)) => generate_ba_cmd(a),
        Command::Generate(Generate::Replicate(a)) => replicate_cmd(a),
        Command::Partition(a) => partition_cmd(a),
        Command::Rank(a) => rank_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Spy(a) => spy_cmd(a),
        Command::Validate(a) => validate_cmd(a),
    }
}

/// Fails early when an output file could not be created.
fn check_output(path: Option<&Path>) -> CmdResult {
    if let Some(p) = path {
        let parent = p.parent().filter(|d| !d.as_os_str().is_empty());
        if let Some(d) = parent {
            if !d.is_dir() {
                return fail(EXIT_IO, anyhow!("output directory {} does not exist", d.display()));
            }
        }
    }
    Ok(())
}

fn create(path: &Path) -> CmdResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .with_context(|| format!("cannot create {}", path.display()))
        .or_exit(EXIT_IO)
}

fn sink(path: Option<&Path>) -> CmdResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn open(path: &Path) -> CmdResult<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .with_context(|| format!("cannot open {}", path.display()))
        .or_exit(EXIT_IO)
}

fn read_graph(path: &Path) -> CmdResult<Graph> {
    parse_edge_list(open(path)?, true)
        .with_context(|| format!("cannot parse {}", path.display()))
        .or_exit(EXIT_IO)
}

fn load_graph(a: &GraphArgs) -> CmdResult<Graph> {
    let policy = if a.keep_loops { LoopPolicy::Keep } else { LoopPolicy::Ignore };
    Ok(read_graph(&a.input)?.with_loop_policy(policy))
}

fn load_weights(path: Option<&Path>, n: usize) -> CmdResult<Vec<f64>> {
    match path {
        Some(p) => parse_weights(open(p)?, n)
            .with_context(|| format!("cannot parse {}", p.display()))
            .or_exit(EXIT_IO),
        None => Ok(vec![1.0; n]),
    }
}

fn params(c: f64, tol: f64) -> CmdResult<SolverParams<f64>> {
    SolverParams::new(c, tol).or_exit(EXIT_USAGE)
}

fn mode(s: &SolveArgs) -> Mode {
    match (s.parallel, s.threads) {
        (_, Some(threads)) => Mode::Parallel { threads },
        (true, None) => Mode::Parallel { threads: 0 },
        (false, None) => Mode::Sequential,
    }
}

fn write_io(result: io::Result<()>, what: &str) -> CmdResult {
    result.with_context(|| format!("cannot write {what}")).or_exit(EXIT_IO)
}

fn generate_ba_cmd(a: BaArgs) -> CmdResult {
    check_output(Some(&a.out))?;
    let mut config = GeneratorConfig::new(a.n, a.m, a.seed);
    config.keep_rule = a.keep_rule;
    let g = generate_ba(&config).or_exit(EXIT_USAGE)?;
    write_io(write_edge_list(&g, create(&a.out)?), "edge list")
}

fn replicate_cmd(a: ReplicateArgs) -> CmdResult {
    check_output(Some(&a.out))?;
    let g = read_graph(&a.input)?;
    let r = replicate(&g, a.copies, a.bridges, a.seed).or_exit(EXIT_USAGE)?;
    write_io(write_edge_list(&r, create(&a.out)?), "edge list")
}

fn partition_cmd(a: PartitionArgs) -> CmdResult {
    check_output(a.out.as_deref())?;
    let g = load_graph(&a.graph)?;
    let census = PartitionCensus::new(&g, &find_components(&g));
    let mut out = sink(a.out.as_deref())?;
    write_io(write!(out, "{census}").and_then(|_| out.flush()), "census")
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn rank_cmd(a: RankArgs) -> CmdResult {
    check_output(a.out.as_deref())?;
    check_output(a.report.as_deref())?;
    let p = params(a.solve.c.unwrap_or(DEFAULT_C), a.solve.tol.unwrap_or(DEFAULT_TOL))?;
    let g = load_graph(&a.graph)?;
    let w = load_weights(a.weights.as_deref(), g.vertex_count())?;

    let (ranks, report_json, report_text) = match a.method {
        Method::Partitioned => {
            let (ranks, report) = compute_pagerank(&g, &w, &p, mode(&a.solve), a.solve.small_threshold)
                .or_exit(EXIT_VALIDATION)?;
            for warning in &report.warnings {
                eprintln!("warning: {warning}");
            }
            let json = serde_json::to_string_pretty(&report).or_exit(EXIT_IO)?;
            (ranks, json, report.to_string())
        }
        Method::Baseline => {
            let start = Instant::now();
            let sol = solve_baseline(&g, &w, &p).or_exit(EXIT_VALIDATION)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let fields = json!({
                "method": "baseline",
                "c": p.c,
                "tol": p.tol,
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "iterations": sol.iterations,
                "edge_visits": sol.edge_visits,
                "wall_ms": wall_ms,
            });
            let text = format!(
                "method: baseline\nc: {}\ntol: {}\nvertices: {}\nedges: {}\niterations: {}\nedge_visits: {}\nwall_ms: {:.3}\n",
                p.c,
                sig(p.tol, 6),
                g.vertex_count(),
                g.edge_count(),
                sol.iterations,
                sol.edge_visits,
                wall_ms
            );
            let json = serde_json::to_string_pretty(&fields).or_exit(EXIT_IO)?;
            (sol.ranks, json, text)
        }
    };

    write_io(write_ranks(&ranks, sink(a.out.as_deref())?), "ranks")?;
    if let Some(path) = &a.report {
        let body = if is_json(path) { report_json + "\n" } else { report_text };
        let mut f = create(path)?;
        write_io(f.write_all(body.as_bytes()).and_then(|_| f.flush()), "report")?;
    }
    Ok(())
}

fn bench_cmd(a: BenchArgs) -> CmdResult {
    check_output(a.out.as_deref())?;
    let mut values = a.values.clone().unwrap_or_else(|| match a.sweep {
        Sweep::Tol => (1..=20).map(|k| 10f64.powi(-k)).collect(),
        Sweep::C => vec![0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 0.99],
    });
    values.sort_by(f64::total_cmp);
    let points: Vec<(f64, f64)> = match a.sweep {
        Sweep::Tol => {
            let c = a.solve.c.unwrap_or(DEFAULT_C);
            values.iter().map(|&tol| (c, tol)).collect()
        }
        Sweep::C => {
            let tol = a.solve.tol.unwrap_or(DEFAULT_SWEEP_TOL);
            values.iter().map(|&c| (c, tol)).collect()
        }
    };
    let all_params = points
        .iter()
        .map(|&(c, tol)| params(c, tol))
        .collect::<CmdResult<Vec<_>>>()?;
    let methods = match a.method {
        Some(m) => vec![m],
        None => vec![Method::Baseline, Method::Partitioned],
    };

    let g = load_graph(&a.graph)?;
    let w = load_weights(a.weights.as_deref(), g.vertex_count())?;
    let mut out = sink(a.out.as_deref())?;
    write_io(writeln!(out, "method,c,tol,total_iterations,iter_edge_work,wall_ms"), "csv")?;
    for p in &all_params {
        for &method in &methods {
            let start = Instant::now();
            let (name, iterations, work) = match method {
                Method::Baseline => {
                    let sol = solve_baseline(&g, &w, p).or_exit(EXIT_VALIDATION)?;
                    ("baseline", sol.iterations, sol.edge_visits)
                }
                Method::Partitioned => {
                    let (_, report) = compute_pagerank(&g, &w, p, mode(&a.solve), a.solve.small_threshold)
                        .or_exit(EXIT_VALIDATION)?;
                    ("partitioned", report.totals.total_iterations, report.totals.iter_edge_work)
                }
            };
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            write_io(
                writeln!(
                    out,
                    "{name},{},{},{iterations},{work},{wall_ms:.3}",
                    sig(p.c, 12),
                    sig(p.tol, 12)
                ),
                "csv",
            )?;
        }
    }
    write_io(out.flush(), "csv")
}

fn spy_cmd(a: SpyArgs) -> CmdResult {
    check_output(a.out.as_deref())?;
    let g = load_graph(&a.graph)?;
    let schedule = build_schedule(&g, &find_components(&g), a.small_threshold).or_exit(EXIT_USAGE)?;
    let coords = export_reordered(&g, &schedule);
    write_io(write_coordinates(&coords, sink(a.out.as_deref())?), "coordinates")
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn validate_cmd(a: ValidateArgs) -> CmdResult {
    let p = params(a.c, a.tol)?;
    let g = load_graph(&a.graph)?;
    let n = g.vertex_count();
    if n > VALIDATE_MAX_VERTICES {
        return fail(
            EXIT_USAGE,
            anyhow!("validate needs a dense solve; {n} vertices exceed the limit of {VALIDATE_MAX_VERTICES}"),
        );
    }
    let w = vec![1.0; n];
    let mut checks: Vec<(&str, Result<(), String>)> = Vec::new();

    let partition = find_components(&g);
    let same = partition.canonical() == reference_partition(&g).canonical();
    checks.push((
        "partition matches reference",
        if same { Ok(()) } else { Err("component sets differ".into()) },
    ));
    let violations = validate_partition(&g, &partition);
    checks.push((
        "partition invariants",
        match violations.first() {
            None => Ok(()),
            Some(v) => Err(format!("{} violations, first: {v}", violations.len())),
        },
    ));

    let direct = solve_small_scc(&SolveUnit::from_graph(&g, UnitKind::SccSmall), &w, &p)
        .map(|s| s.ranks)
        .or_exit(EXIT_VALIDATION)?;

    let partitioned = compute_pagerank(&g, &w, &p, Mode::Sequential, a.small_threshold);
    checks.push((
        "partitioned ranks vs direct solve",
        match &partitioned {
            Err(e) => Err(e.to_string()),
            Ok((ranks, report)) => {
                let bound = report.eps_tot + ROUNDING_FLOOR;
                let diff = max_abs_diff(ranks, &direct);
                if diff <= bound {
                    Ok(())
                } else {
                    Err(format!("max diff {} > {}", sig(diff, 4), sig(bound, 4)))
                }
            }
        },
    ));
    if let Ok((ranks, _)) = &partitioned {
        let parallel = compute_pagerank(&g, &w, &p, Mode::Parallel { threads: 0 }, a.small_threshold);
        checks.push((
            "parallel matches sequential",
            match parallel {
                Err(e) => Err(e.to_string()),
                Ok((par, _)) => {
                    let diff = max_abs_diff(&par, ranks);
                    if diff == 0.0 {
                        Ok(())
                    } else {
                        Err(format!("max diff {}", sig(diff, 4)))
                    }
                }
            },
        ));
    }

    let baseline_bound = n as f64 * p.tol * p.c / (1.0 - p.c) + ROUNDING_FLOOR;
    checks.push((
        "baseline vs direct solve",
        match solve_baseline(&g, &w, &p) {
            Err(e) => Err(e.to_string()),
            Ok(sol) => {
                let diff = max_abs_diff(&sol.ranks, &direct);
                if diff <= baseline_bound {
                    Ok(())
                } else {
                    Err(format!("max diff {} > {}", sig(diff, 4), sig(baseline_bound, 4)))
                }
            }
        },
    ));

    if n > 0 && n <= ORACLE_MAX_VERTICES {
        checks.push((
            "eigenvector route vs direct solve",
            match oracle_r1_to_r3(&g, &w, &p) {
                Err(e) => Err(e.to_string()),
                Ok(o) => {
                    let scale = direct.iter().fold(1.0f64, |m, x| m.max(x.abs()));
                    let rel = max_abs_diff(&o.r3, &direct) / scale;
                    if rel <= 1e-8 {
                        Ok(())
                    } else {
                        Err(format!("relative diff {}", sig(rel, 4)))
                    }
                }
            },
        ));
    }

    let mut failed = 0;
    for (name, result) in &checks {
        match result {
            Ok(()) => println!("{name}: pass"),
            Err(detail) => {
                failed += 1;
                println!("{name}: FAIL ({detail})");
            }
        }
    }
    if failed == 0 {
        println!("all checks passed");
        Ok(())
    } else {
        fail(EXIT_VALIDATION, anyhow!("{failed} of {} checks failed", checks.len()))
    }
}
