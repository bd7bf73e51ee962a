//! Command implementations.

use std::fs;
use std::path::Path;

use ama_core::ama::{run_ama, AmaTrace};
use ama_core::ansatz::{
    build_pnu, build_pu, build_qaoa_plus, circuit_depth, cnot_count, evaluate_with,
};
use ama_core::bench::{
    cost_rows_to_csv, cost_rows_to_json, oar_cost_protocol, plot_cost_csv, plot_metric_csv,
    rows_to_csv, rows_to_json, run_campaign, Algorithm, GraphFamily, MetricsRow,
    COST_RESOURCE_NAMES, METRIC_NAMES,
};
use ama_core::graphs::{brute_force_mis, graph_id, penalty_energy, Assignment, Graph};
use ama_core::optimizer::{minimize, seeded_init};
use ama_core::{approximation_ratio, seeds};
use serde::Serialize;

use crate::config::FileConfig;
use crate::{
    BenchArgs, CliError, CliResult, GenArgs, OarCostArgs, OracleArgs, ReportArgs, SolveArgs,
};

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn make_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", path.display())))
}

pub fn cmd_gen(args: &GenArgs) -> CliResult<()> {
    let family = GraphFamily::parse(&args.family).map_err(|e| CliError::Usage(e.to_string()))?;
    make_dir(&args.out_dir)?;
    for k in 0..args.count {
        let seed = args.seed.wrapping_add(k as u64);
        let graph = family.generate(args.n, args.er_edge_prob, seed)?;
        let name = format!("{}.graph", graph_id(family.tag(), args.n, seed));
        let path = args.out_dir.join(name);
        graph.save(&path)?;
        println!("{}", path.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct TopState {
    state: String,
    probability: f64,
}

#[derive(Serialize)]
struct SolveReport {
    graph: String,
    n: usize,
    edges: usize,
    algorithm: Algorithm,
    p: Option<usize>,
    seed: u64,
    alpha: u32,
    final_expectation: f64,
    approximation_ratio: f64,
    iterations: u64,
    depth: u64,
    cnots: u64,
    top_states: Vec<TopState>,
    trace: Option<AmaTrace>,
}

pub fn cmd_solve(args: &SolveArgs) -> CliResult<()> {
    let algo = Algorithm::parse(&args.algo).map_err(|e| CliError::Usage(e.to_string()))?;
    match (algo, args.p) {
        (Algorithm::Ama, Some(_)) => {
            return Err(CliError::Usage("p not applicable to ama".into()))
        }
        (other, None) if other.is_baseline() => {
            return Err(CliError::Usage(format!("p is required for {other}")))
        }
        _ => {}
    }
    let mut fc = FileConfig::load(args.config.as_deref())?;
    fc.normalize();
    let cfg = fc.resolve();
    cfg.optimizer.validate()?;
    if args.print_config {
        print!("{}", fc.to_toml()?);
    }

    let graph = Graph::load(&args.graph)?;
    let oracle = brute_force_mis(&graph)?;
    let f_min = -(oracle.alpha as f64);

    // Resources are accounted on the full circuit; the displayed state is
    // the one the reported parameters prepare (for the adaptive runs that is
    // the best grown circuit, not necessarily the last).
    let (run, circuit, state, trace) = match algo {
        Algorithm::Ama => {
            let out = run_ama(&graph, &cfg.ama, args.seed)?;
            let (state, _) =
                evaluate_with(&out.best_circuit, &out.result.best_params, &graph, cfg.eval)?;
            (out.result, out.final_circuit, state, Some(out.trace))
        }
        baseline => {
            let p = args.p.expect("validated above");
            let n_pm = cfg.mixers_per_layer_for(graph.n());
            let subset_seed = seeds::derive(args.seed, "subset", &[]);
            let circuit = match baseline {
                Algorithm::QaoaPlus => build_qaoa_plus(&graph, p)?,
                Algorithm::Pu => build_pu(&graph, p, n_pm, subset_seed)?,
                Algorithm::Pnu => build_pnu(&graph, p, n_pm, subset_seed)?,
                Algorithm::Ama => unreachable!(),
            };
            let init = seeded_init(
                circuit.param_count(),
                seeds::derive(args.seed, "init", &[]),
                &cfg.optimizer,
            );
            let run = minimize(&circuit, &graph, init, &cfg.optimizer, cfg.eval)?;
            let (state, _) = evaluate_with(&circuit, &run.best_params, &graph, cfg.eval)?;
            (run, circuit, state, None)
        }
    };
    let ratio = approximation_ratio(run.final_expectation, f_min)?;
    let top_states: Vec<TopState> = state
        .basis_probabilities()
        .into_iter()
        .take(5)
        .map(|(a, p)| TopState {
            state: a.to_string(),
            probability: p,
        })
        .collect();
    let depth = circuit_depth(&circuit, &cfg.resource);
    let cnots = cnot_count(&circuit, &graph, &cfg.resource);

    println!("graph: {} (n={}, m={})", args.graph.display(), graph.n(), graph.edge_count());
    match args.p {
        Some(p) => println!("algorithm: {algo} (p={p})"),
        None => println!("algorithm: {algo}"),
    }
    println!("seed: {}", args.seed);
    println!("alpha: {}", oracle.alpha);
    println!("final expectation: {:.6}", run.final_expectation);
    println!("approximation ratio: {ratio:.4}");
    println!("iterations: {}", run.iterations);
    println!("depth: {depth}");
    println!("cnots: {cnots}");
    println!("top-5 basis states:");
    for t in &top_states {
        println!("  {}  p={:.4}", t.state, t.probability);
    }
    if let Some(trace) = &trace {
        print_trace(trace);
    }

    if let Some(json_path) = &args.json_out {
        let report = SolveReport {
            graph: args.graph.display().to_string(),
            n: graph.n(),
            edges: graph.edge_count(),
            algorithm: algo,
            p: args.p,
            seed: args.seed,
            alpha: oracle.alpha,
            final_expectation: run.final_expectation,
            approximation_ratio: ratio,
            iterations: run.iterations,
            depth,
            cnots,
            top_states,
            trace,
        };
        let json = serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::Runtime(format!("cannot render report: {e}")))?;
        write_file(json_path, &json)?;
    }
    Ok(())
}

fn print_trace(trace: &AmaTrace) {
    println!("adaptive trace:");
    println!(
        "  pretraining: F = {:.6} ({} iterations)",
        trace.pretrain_expectation, trace.pretrain_iterations
    );
    for step in &trace.steps {
        let picks: Vec<String> = step
            .selections
            .iter()
            .map(|s| {
                format!(
                    "+v{} (f_fun={:.4}, f_gra={:.4}, score={:.4})",
                    s.vertex, s.f_fun, s.f_gra, s.score
                )
            })
            .collect();
        println!(
            "  layer {}: {} -> F = {:.6} ({} iterations)",
            step.layer_index,
            picks.join(" "),
            step.post_expectation,
            step.iterations
        );
    }
}

fn write_plot_data(rows: &[MetricsRow], dir: &Path) -> CliResult<()> {
    make_dir(dir)?;
    for metric in METRIC_NAMES {
        let csv = plot_metric_csv(rows, metric)?;
        write_file(&dir.join(format!("{metric}.csv")), &csv)?;
    }
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs) -> CliResult<()> {
    let (_, cfg) = crate::load_campaign_config(&args.common)?;
    let rows = run_campaign(&cfg)?;
    make_dir(&args.common.out_dir)?;
    let csv_path = args.common.out_dir.join("results.csv");
    write_file(&csv_path, &rows_to_csv(&rows))?;
    write_file(&args.common.out_dir.join("results.json"), &rows_to_json(&rows)?)?;
    write_plot_data(&rows, &args.common.out_dir.join("plotdata"))?;
    println!(
        "wrote {} rows to {}",
        rows.len(),
        args.common.out_dir.display()
    );
    Ok(())
}

pub fn cmd_oar_cost(args: &OarCostArgs) -> CliResult<()> {
    let (_, cfg) = crate::load_campaign_config(&args.common)?;
    let mut rows = Vec::new();
    for &target in &args.targets {
        rows.extend(oar_cost_protocol(&cfg, target)?);
    }
    make_dir(&args.common.out_dir)?;
    write_file(&args.common.out_dir.join("oar_cost.csv"), &cost_rows_to_csv(&rows))?;
    write_file(
        &args.common.out_dir.join("oar_cost.json"),
        &cost_rows_to_json(&rows)?,
    )?;
    let plot_dir = args.common.out_dir.join("plotdata");
    make_dir(&plot_dir)?;
    for resource in COST_RESOURCE_NAMES {
        let csv = plot_cost_csv(&rows, resource)?;
        write_file(&plot_dir.join(format!("cost_{resource}.csv")), &csv)?;
    }
    println!(
        "wrote {} rows to {}",
        rows.len(),
        args.common.out_dir.display()
    );
    Ok(())
}

pub fn cmd_oracle(args: &OracleArgs) -> CliResult<()> {
    let graph = Graph::load(&args.graph)?;
    let oracle = brute_force_mis(&graph)?;
    println!("graph: {} (n={}, m={})", args.graph.display(), graph.n(), graph.edge_count());
    println!("alpha={}", oracle.alpha);
    println!("optima ({}):", oracle.optima.len());
    for a in &oracle.optima {
        println!("{a}");
    }

    // Cross-check against the penalty formulation: with lambda = 2 the
    // penalized objective must peak exactly on the independent-set optima
    // at value alpha.
    let n = graph.n();
    let mut best = f64::NEG_INFINITY;
    let mut argmax: Vec<u64> = Vec::new();
    for bits in 0..(1u64 << n) {
        let value = penalty_energy(&graph, &Assignment::new(n, bits), 2.0)?;
        if value > best {
            best = value;
            argmax.clear();
            argmax.push(bits);
        } else if value == best {
            argmax.push(bits);
        }
    }
    let oracle_bits: Vec<u64> = oracle.optima.iter().map(|a| a.bits()).collect();
    if best == oracle.alpha as f64 && argmax == oracle_bits {
        println!("penalty-check: ok");
        Ok(())
    } else {
        Err(CliError::Runtime(format!(
            "penalty-check failed: max {best} over {} states vs alpha {}",
            argmax.len(),
            oracle.alpha
        )))
    }
}

pub fn cmd_report(args: &ReportArgs) -> CliResult<()> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", args.input.display())))?;
    let rows: Vec<MetricsRow> = serde_json::from_str(&text)
        .map_err(|e| CliError::Runtime(format!("invalid results file {}: {e}", args.input.display())))?;

    println!(
        "{:<10} {:>3} {:>3} {:>8} {:>8} {:>12} {:>12} {:>12} {:>13}",
        "algo", "p", "n", "oar", "aar", "total_itrs", "total_cds", "total_cnots", "total_runtime"
    );
    for r in &rows {
        let p = r.p.map(|p| p.to_string()).unwrap_or_else(|| "-".into());
        println!(
            "{:<10} {:>3} {:>3} {:>8.4} {:>8.4} {:>12.4} {:>12.4} {:>12.4} {:>13.4}",
            r.algo.tag(),
            p,
            r.n,
            r.oar,
            r.aar,
            r.total_itrs,
            r.total_cds,
            r.total_cnots,
            r.total_runtime
        );
    }
    if let Some(dir) = &args.out_dir {
        write_plot_data(&rows, dir)?;
        println!("wrote plot data to {}", dir.display());
    }
    Ok(())
}
