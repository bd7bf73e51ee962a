//! Experiment harness: seeded multi-graph campaigns for all four algorithm
//! families, metric aggregation (OAR, AAR, total iterations / depth / CNOTs /
//! runtime), the resource-to-reach-OAR protocol, and result serialization.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ama::{run_ama, AmaConfig};
use crate::ansatz::{
    build_pnu, build_pu, build_qaoa_plus, circuit_depth, cnot_count, EvalOptions, ResourceModel,
};
use crate::error::{Error, Result};
use crate::graphs::{
    brute_force_mis, generate_er, generate_regular, graph_id, Graph, ORACLE_MAX_VERTICES,
};
use crate::optimizer::{minimize, seeded_init, OptimizerConfig};
use crate::seeds;
use crate::statevector::MAX_QUBITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Ama,
    QaoaPlus,
    Pu,
    Pnu,
}

impl Algorithm {
    pub fn tag(&self) -> &'static str {
        match self {
            Algorithm::Ama => "ama",
            Algorithm::QaoaPlus => "qaoa_plus",
            Algorithm::Pu => "pu",
            Algorithm::Pnu => "pnu",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ama" => Ok(Algorithm::Ama),
            "qaoa_plus" => Ok(Algorithm::QaoaPlus),
            "pu" => Ok(Algorithm::Pu),
            "pnu" => Ok(Algorithm::Pnu),
            other => Err(Error::invalid_config(
                "algorithm",
                format!("unknown algorithm '{other}' (expected ama, qaoa_plus, pu, pnu)"),
            )),
        }
    }

    pub fn is_baseline(&self) -> bool {
        !matches!(self, Algorithm::Ama)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GraphFamily {
    #[serde(rename = "er")]
    Er,
    #[serde(rename = "regular-3")]
    Regular3,
}

impl GraphFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            GraphFamily::Er => "er",
            GraphFamily::Regular3 => "regular-3",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "er" => Ok(GraphFamily::Er),
            "regular-3" => Ok(GraphFamily::Regular3),
            other => Err(Error::invalid_config(
                "graph_family",
                format!("unknown family '{other}' (expected er, regular-3)"),
            )),
        }
    }

    pub fn generate(&self, n: usize, er_edge_prob: f64, seed: u64) -> Result<Graph> {
        match self {
            GraphFamily::Er => generate_er(n, er_edge_prob, seed),
            GraphFamily::Regular3 => generate_regular(n, 3, seed),
        }
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph_family: GraphFamily,
    pub sizes: Vec<usize>,
    pub graphs_per_size: usize,
    pub algorithms: Vec<Algorithm>,
    /// Layer depths p swept for the baselines; ignored by the adaptive runs.
    pub depths: Vec<usize>,
    pub runs_per_setting: usize,
    pub master_seed: u64,
    pub er_edge_prob: f64,
    /// Mixers per partial layer for PU/PNU; defaults to floor(n/2)+1.
    pub mixers_per_layer: Option<usize>,
    /// Time units per optimizer iteration.
    pub runtime_constant: f64,
    /// Runs per depth p in the resource-cost sweep = factor * p.
    pub cost_runs_factor: usize,
    /// Adaptive runs in the resource-cost protocol = factor * n.
    pub cost_runs_ama_factor: usize,
    pub ama: AmaConfig,
    pub optimizer: OptimizerConfig,
    pub resource: ResourceModel,
    pub eval: EvalOptions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            graph_family: GraphFamily::Er,
            sizes: vec![8, 10, 12],
            graphs_per_size: 20,
            algorithms: vec![
                Algorithm::Ama,
                Algorithm::QaoaPlus,
                Algorithm::Pu,
                Algorithm::Pnu,
            ],
            depths: vec![4, 5, 6],
            runs_per_setting: 100,
            master_seed: 2024,
            er_edge_prob: 0.5,
            mixers_per_layer: None,
            runtime_constant: 0.1,
            cost_runs_factor: 200,
            cost_runs_ama_factor: 50,
            ama: AmaConfig::default(),
            optimizer: OptimizerConfig::default(),
            resource: ResourceModel::default(),
            eval: EvalOptions::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn mixers_per_layer_for(&self, n: usize) -> usize {
        self.mixers_per_layer.unwrap_or(n / 2 + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::invalid_config("sizes", "must be non-empty"));
        }
        let max_n = MAX_QUBITS.min(ORACLE_MAX_VERTICES);
        for &n in &self.sizes {
            if !(1..=max_n).contains(&n) {
                return Err(Error::invalid_config(
                    "sizes",
                    format!("n = {n} outside 1..={max_n}"),
                ));
            }
            let m = self.mixers_per_layer_for(n);
            if m < 1 || m > n {
                return Err(Error::invalid_config(
                    "mixers_per_layer",
                    format!("{m} not in 1..={n}"),
                ));
            }
            if self.algorithms.contains(&Algorithm::Ama) {
                self.ama.validate(n)?;
            }
        }
        if self.graphs_per_size < 1 {
            return Err(Error::invalid_config("graphs_per_size", "must be >= 1"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid_config("algorithms", "must be non-empty"));
        }
        if self.runs_per_setting < 1 {
            return Err(Error::invalid_config("runs_per_setting", "must be >= 1"));
        }
        if self.algorithms.iter().any(Algorithm::is_baseline) {
            if self.depths.is_empty() {
                return Err(Error::invalid_config(
                    "depths",
                    "baselines require at least one layer depth",
                ));
            }
            if let Some(&p) = self.depths.iter().find(|&&p| p < 1) {
                return Err(Error::invalid_config("depths", format!("p = {p} < 1")));
            }
        }
        if matches!(self.graph_family, GraphFamily::Er)
            && !(0.0..=1.0).contains(&self.er_edge_prob)
        {
            return Err(Error::invalid_config(
                "er_edge_prob",
                "must lie in [0, 1]",
            ));
        }
        if !self.runtime_constant.is_finite() || self.runtime_constant <= 0.0 {
            return Err(Error::invalid_config(
                "runtime_constant",
                "must be positive",
            ));
        }
        if self.cost_runs_factor < 1 || self.cost_runs_ama_factor < 1 {
            return Err(Error::invalid_config(
                "cost_runs_factor",
                "cost run factors must be >= 1",
            ));
        }
        self.optimizer.validate()
    }
}

/// One aggregated result row: per-graph metrics averaged over the graphs of
/// one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub algo: Algorithm,
    pub p: Option<usize>,
    pub n: usize,
    pub oar: f64,
    pub aar: f64,
    pub total_itrs: f64,
    pub total_cds: f64,
    pub total_cnots: f64,
    pub total_runtime: f64,
}

/// One row of the resource-to-reach-OAR protocol, averaged over graphs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OarCostRow {
    pub algo: Algorithm,
    pub n: usize,
    pub target_oar: f64,
    /// Mean minimal depth reaching the target; absent for the adaptive runs.
    pub min_depth: Option<f64>,
    /// Mean expected number of runs T_avg = c/s.
    pub t_avg: f64,
    pub expected_itrs: f64,
    pub expected_runtime: f64,
    pub expected_depth: f64,
    pub expected_cnots: f64,
    /// Set when at least one graph instance never reached the target.
    pub unreached: bool,
    /// Graph instances over which the averages were taken.
    pub reached_graphs: usize,
}

/// AR = f / f_min, clamped to the reporting range [0, 1]. `f_min` is the
/// ground energy -alpha and must be negative.
pub fn approximation_ratio(f: f64, f_min: f64) -> Result<f64> {
    if !f_min.is_finite() || f_min >= 0.0 {
        return Err(Error::DegenerateInstance(format!(
            "ground energy must be negative, got {f_min}"
        )));
    }
    Ok((f / f_min).clamp(0.0, 1.0))
}

/// Calibrated linear runtime model.
pub fn runtime_estimate(iterations: u64, runtime_constant: f64) -> f64 {
    runtime_constant * iterations as f64
}

#[derive(Debug, Clone, Copy)]
struct RunRecord {
    ar: f64,
    iterations: u64,
    depth: u64,
    cnots: u64,
}

struct GraphCell {
    id: String,
    graph: Graph,
    f_min: f64,
}

fn build_graph_cells(cfg: &ExperimentConfig) -> Result<BTreeMap<(usize, usize), GraphCell>> {
    let mut cells = BTreeMap::new();
    for &n in &cfg.sizes {
        for idx in 0..cfg.graphs_per_size {
            let gseed = seeds::derive(cfg.master_seed, cfg.graph_family.tag(), &[
                n as u64,
                idx as u64,
            ]);
            let graph = cfg.graph_family.generate(n, cfg.er_edge_prob, gseed)?;
            let oracle = brute_force_mis(&graph)?;
            if oracle.alpha == 0 {
                return Err(Error::DegenerateInstance(format!(
                    "graph {} has empty maximum independent set",
                    graph_id(cfg.graph_family.tag(), n, gseed)
                )));
            }
            cells.insert(
                (n, idx),
                GraphCell {
                    id: graph_id(cfg.graph_family.tag(), n, gseed),
                    graph,
                    f_min: -(oracle.alpha as f64),
                },
            );
        }
    }
    Ok(cells)
}

/// Per-run seed: stable hash of (master_seed, graph_id, algorithm tag,
/// p-or-0, run index), with a protocol tag separating campaign runs from the
/// cost sweep.
fn run_seed(
    master_seed: u64,
    protocol: &str,
    algo: Algorithm,
    graph_id: &str,
    p: Option<usize>,
    run_idx: usize,
) -> u64 {
    seeds::derive(
        master_seed,
        protocol,
        &[
            seeds::hash_str(algo.tag()),
            seeds::hash_str(graph_id),
            p.unwrap_or(0) as u64,
            run_idx as u64,
        ],
    )
}

fn execute_run(
    cfg: &ExperimentConfig,
    algo: Algorithm,
    p: Option<usize>,
    cell: &GraphCell,
    seed: u64,
) -> Result<RunRecord> {
    let g = &cell.graph;
    match algo {
        Algorithm::Ama => {
            // The harness-level optimizer and evaluation options govern
            // every algorithm, including the adaptive one.
            let mut ama_cfg = cfg.ama.clone();
            ama_cfg.optimizer = cfg.optimizer.clone();
            ama_cfg.eval = cfg.eval;
            let out = run_ama(g, &ama_cfg, seed)?;
            Ok(RunRecord {
                ar: approximation_ratio(out.result.final_expectation, cell.f_min)?,
                iterations: out.result.iterations,
                depth: circuit_depth(&out.final_circuit, &cfg.resource),
                cnots: cnot_count(&out.final_circuit, g, &cfg.resource),
            })
        }
        baseline => {
            let p = p.ok_or_else(|| {
                Error::invalid_config("p", format!("{baseline} requires a layer depth"))
            })?;
            let n_pm = cfg.mixers_per_layer_for(g.n());
            let circuit = match baseline {
                Algorithm::QaoaPlus => build_qaoa_plus(g, p)?,
                Algorithm::Pu => build_pu(g, p, n_pm, seeds::derive(seed, "subset", &[]))?,
                Algorithm::Pnu => build_pnu(g, p, n_pm, seeds::derive(seed, "subset", &[]))?,
                Algorithm::Ama => unreachable!(),
            };
            let init = seeded_init(
                circuit.param_count(),
                seeds::derive(seed, "init", &[]),
                &cfg.optimizer,
            );
            let run = minimize(&circuit, g, init, &cfg.optimizer, cfg.eval)?;
            Ok(RunRecord {
                ar: approximation_ratio(run.final_expectation, cell.f_min)?,
                iterations: run.iterations,
                depth: circuit_depth(&circuit, &cfg.resource),
                cnots: cnot_count(&circuit, g, &cfg.resource),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct GraphStats {
    max_ar: f64,
    sum_ar: f64,
    sum_itrs: u64,
    sum_depth: u64,
    sum_cnots: u64,
}

fn fold_records(records: &[RunRecord]) -> GraphStats {
    let mut stats = GraphStats::default();
    for r in records {
        stats.max_ar = stats.max_ar.max(r.ar);
        stats.sum_ar += r.ar;
        stats.sum_itrs += r.iterations;
        stats.sum_depth += r.depth;
        stats.sum_cnots += r.cnots;
    }
    stats
}

fn sorted_unique_sizes(cfg: &ExperimentConfig) -> Vec<usize> {
    let mut sizes = cfg.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    sizes
}

fn campaign_settings(cfg: &ExperimentConfig) -> Vec<(Algorithm, Option<usize>)> {
    let mut algos = cfg.algorithms.clone();
    algos.sort_unstable();
    algos.dedup();
    let mut depths = cfg.depths.clone();
    depths.sort_unstable();
    depths.dedup();
    let mut settings = Vec::new();
    for algo in algos {
        if algo.is_baseline() {
            for &p in &depths {
                settings.push((algo, Some(p)));
            }
        } else {
            settings.push((algo, None));
        }
    }
    settings
}

/// Runs the full campaign: every (algorithm, depth, size, graph, run) cell is
/// an independent seeded work item; aggregation follows a fixed order so the
/// output is identical for any thread count.
pub fn run_campaign(cfg: &ExperimentConfig) -> Result<Vec<MetricsRow>> {
    cfg.validate()?;
    let cells = build_graph_cells(cfg)?;
    let sizes = sorted_unique_sizes(cfg);
    let settings = campaign_settings(cfg);

    struct Item<'a> {
        algo: Algorithm,
        p: Option<usize>,
        cell: &'a GraphCell,
        seed: u64,
    }
    let mut items = Vec::new();
    for &(algo, p) in &settings {
        for &n in &sizes {
            for idx in 0..cfg.graphs_per_size {
                let cell = &cells[&(n, idx)];
                for run_idx in 0..cfg.runs_per_setting {
                    items.push(Item {
                        algo,
                        p,
                        cell,
                        seed: run_seed(cfg.master_seed, "campaign", algo, &cell.id, p, run_idx),
                    });
                }
            }
        }
    }

    let records: Vec<RunRecord> = items
        .par_iter()
        .map(|item| execute_run(cfg, item.algo, item.p, item.cell, item.seed))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    let runs = cfg.runs_per_setting;
    let graphs = cfg.graphs_per_size;
    let mut offset = 0;
    for &(algo, p) in &settings {
        for &n in &sizes {
            let mut sum_oar = 0.0;
            let mut sum_aar = 0.0;
            let mut sum_itrs = 0.0;
            let mut sum_depth = 0.0;
            let mut sum_cnots = 0.0;
            for _ in 0..graphs {
                let stats = fold_records(&records[offset..offset + runs]);
                offset += runs;
                sum_oar += stats.max_ar;
                sum_aar += stats.sum_ar / runs as f64;
                sum_itrs += stats.sum_itrs as f64;
                sum_depth += stats.sum_depth as f64;
                sum_cnots += stats.sum_cnots as f64;
            }
            let gf = graphs as f64;
            let total_itrs = sum_itrs / gf;
            rows.push(MetricsRow {
                algo,
                p,
                n,
                oar: sum_oar / gf,
                aar: sum_aar / gf,
                total_itrs,
                total_cds: sum_depth / gf,
                total_cnots: sum_cnots / gf,
                total_runtime: cfg.runtime_constant * total_itrs,
            });
        }
    }
    Ok(rows)
}

struct GraphCost {
    min_depth: Option<usize>,
    t_avg: f64,
    expected_itrs: f64,
    expected_depth: f64,
    expected_cnots: f64,
    reached: bool,
}

fn cost_for_records(records: &[RunRecord], target: f64) -> Option<(f64, f64, f64, f64)> {
    let c = records.len();
    let s = records.iter().filter(|r| r.ar >= target).count();
    if s == 0 {
        return None;
    }
    let t_avg = c as f64 / s as f64;
    let mean =
        |f: &dyn Fn(&RunRecord) -> f64| records.iter().map(f).sum::<f64>() / c as f64;
    Some((
        t_avg,
        t_avg * mean(&|r| r.iterations as f64),
        t_avg * mean(&|r| r.depth as f64),
        t_avg * mean(&|r| r.cnots as f64),
    ))
}

fn cost_records(
    cfg: &ExperimentConfig,
    algo: Algorithm,
    p: Option<usize>,
    cell: &GraphCell,
    runs: usize,
) -> Result<Vec<RunRecord>> {
    (0..runs)
        .into_par_iter()
        .map(|run_idx| {
            let seed = run_seed(cfg.master_seed, "cost", algo, &cell.id, p, run_idx);
            execute_run(cfg, algo, p, cell, seed)
        })
        .collect()
}

/// Resource-to-reach-OAR protocol. Baselines sweep p = 1..n with
/// `cost_runs_factor * p` runs per depth and report the first depth whose
/// best run reaches the target; the adaptive algorithm performs
/// `cost_runs_ama_factor * n` runs. Expected totals are T_avg times the
/// per-run means, averaged over the graphs that reached the target.
pub fn oar_cost_protocol(cfg: &ExperimentConfig, target_oar: f64) -> Result<Vec<OarCostRow>> {
    cfg.validate()?;
    if !(target_oar > 0.0 && target_oar <= 1.0) {
        return Err(Error::invalid_config(
            "target_oar",
            format!("{target_oar} not in (0, 1]"),
        ));
    }
    let cells = build_graph_cells(cfg)?;
    let sizes = sorted_unique_sizes(cfg);
    let mut algos = cfg.algorithms.clone();
    algos.sort_unstable();
    algos.dedup();

    let mut rows = Vec::new();
    for &algo in &algos {
        for &n in &sizes {
            let mut per_graph = Vec::new();
            for idx in 0..cfg.graphs_per_size {
                let cell = &cells[&(n, idx)];
                let cost = if algo.is_baseline() {
                    let mut found = None;
                    for p in 1..=n {
                        let records =
                            cost_records(cfg, algo, Some(p), cell, cfg.cost_runs_factor * p)?;
                        if let Some((t_avg, itrs, depth, cnots)) =
                            cost_for_records(&records, target_oar)
                        {
                            found = Some(GraphCost {
                                min_depth: Some(p),
                                t_avg,
                                expected_itrs: itrs,
                                expected_depth: depth,
                                expected_cnots: cnots,
                                reached: true,
                            });
                            break;
                        }
                    }
                    found.unwrap_or(GraphCost {
                        min_depth: None,
                        t_avg: 0.0,
                        expected_itrs: 0.0,
                        expected_depth: 0.0,
                        expected_cnots: 0.0,
                        reached: false,
                    })
                } else {
                    let records =
                        cost_records(cfg, algo, None, cell, cfg.cost_runs_ama_factor * n)?;
                    match cost_for_records(&records, target_oar) {
                        Some((t_avg, itrs, depth, cnots)) => GraphCost {
                            min_depth: None,
                            t_avg,
                            expected_itrs: itrs,
                            expected_depth: depth,
                            expected_cnots: cnots,
                            reached: true,
                        },
                        None => GraphCost {
                            min_depth: None,
                            t_avg: 0.0,
                            expected_itrs: 0.0,
                            expected_depth: 0.0,
                            expected_cnots: 0.0,
                            reached: false,
                        },
                    }
                };
                per_graph.push(cost);
            }

            let reached: Vec<&GraphCost> = per_graph.iter().filter(|c| c.reached).collect();
            let k = reached.len();
            let mean = |f: &dyn Fn(&GraphCost) -> f64| {
                if k == 0 {
                    f64::NAN
                } else {
                    reached.iter().map(|c| f(c)).sum::<f64>() / k as f64
                }
            };
            let expected_itrs = mean(&|c| c.expected_itrs);
            let min_depth = if algo.is_baseline() && k > 0 {
                Some(mean(&|c| c.min_depth.unwrap_or(0) as f64))
            } else {
                None
            };
            rows.push(OarCostRow {
                algo,
                n,
                target_oar,
                min_depth,
                t_avg: mean(&|c| c.t_avg),
                expected_itrs,
                expected_runtime: cfg.runtime_constant * expected_itrs,
                expected_depth: mean(&|c| c.expected_depth),
                expected_cnots: mean(&|c| c.expected_cnots),
                unreached: k < per_graph.len(),
                reached_graphs: k,
            });
        }
    }
    Ok(rows)
}

pub const METRICS_CSV_HEADER: &str =
    "algo,p,n,oar,aar,total_itrs,total_cds,total_cnots,total_runtime";

pub const COST_CSV_HEADER: &str = "algo,n,target_oar,min_depth,t_avg,expected_itrs,\
expected_runtime,expected_depth,expected_cnots,unreached,reached_graphs";

/// Metric rows as CSV, one row per (algorithm, p, n); floats at 4 decimals,
/// depth column empty for the adaptive algorithm.
pub fn rows_to_csv(rows: &[MetricsRow]) -> String {
    let mut out = String::from(METRICS_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let p = r.p.map(|p| p.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{:.4},{:.4},{:.4},{:.4},{:.4},{:.4}\n",
            r.algo, p, r.n, r.oar, r.aar, r.total_itrs, r.total_cds, r.total_cnots, r.total_runtime
        ));
    }
    out
}

pub fn rows_to_json(rows: &[MetricsRow]) -> Result<String> {
    serde_json::to_string_pretty(rows)
        .map_err(|e| Error::invalid_config("json", e.to_string()))
}

pub fn cost_rows_to_csv(rows: &[OarCostRow]) -> String {
    let mut out = String::from(COST_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let depth = r.min_depth.map(|d| format!("{d:.4}")).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{:.4},{},{:.4},{:.4},{:.4},{:.4},{:.4},{},{}\n",
            r.algo,
            r.n,
            r.target_oar,
            depth,
            r.t_avg,
            r.expected_itrs,
            r.expected_runtime,
            r.expected_depth,
            r.expected_cnots,
            r.unreached,
            r.reached_graphs
        ));
    }
    out
}

pub fn cost_rows_to_json(rows: &[OarCostRow]) -> Result<String> {
    serde_json::to_string_pretty(rows)
        .map_err(|e| Error::invalid_config("json", e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Writes campaign rows to disk in the requested format.
pub fn serialize_results(rows: &[MetricsRow], format: OutputFormat, path: &Path) -> Result<()> {
    let contents = match format {
        OutputFormat::Csv => rows_to_csv(rows),
        OutputFormat::Json => rows_to_json(rows)?,
    };
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub const METRIC_NAMES: [&str; 6] = [
    "oar",
    "aar",
    "total_itrs",
    "total_cds",
    "total_cnots",
    "total_runtime",
];

fn metric_value(row: &MetricsRow, metric: &str) -> Result<f64> {
    Ok(match metric {
        "oar" => row.oar,
        "aar" => row.aar,
        "total_itrs" => row.total_itrs,
        "total_cds" => row.total_cds,
        "total_cnots" => row.total_cnots,
        "total_runtime" => row.total_runtime,
        other => {
            return Err(Error::invalid_config(
                "metric",
                format!("unknown metric '{other}'"),
            ))
        }
    })
}

/// Long-format plot data for one metric: series is the algorithm (with its
/// depth for baselines), x is the graph size.
pub fn plot_metric_csv(rows: &[MetricsRow], metric: &str) -> Result<String> {
    let mut out = String::from("series,x,y\n");
    for r in rows {
        let series = match r.p {
            Some(p) => format!("{}-p{}", r.algo, p),
            None => r.algo.to_string(),
        };
        out.push_str(&format!("{series},{},{:.4}\n", r.n, metric_value(r, metric)?));
    }
    Ok(out)
}

pub const COST_RESOURCE_NAMES: [&str; 4] = ["itrs", "runtime", "depth", "cnots"];

/// Long-format plot data for the cost protocol: series is algorithm-n, x is
/// the target OAR, y the expected resource.
pub fn plot_cost_csv(rows: &[OarCostRow], resource: &str) -> Result<String> {
    let mut out = String::from("series,x,y\n");
    for r in rows {
        let y = match resource {
            "itrs" => r.expected_itrs,
            "runtime" => r.expected_runtime,
            "depth" => r.expected_depth,
            "cnots" => r.expected_cnots,
            other => {
                return Err(Error::invalid_config(
                    "resource",
                    format!("unknown resource '{other}'"),
                ))
            }
        };
        out.push_str(&format!(
            "{}-n{},{:.4},{:.4}\n",
            r.algo, r.n, r.target_oar, y
        ));
    }
    Ok(out)
}
