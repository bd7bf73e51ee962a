//! Acceptance gate: one test per numbered criterion. Each prints a
//! [PASS]/[FAIL] line with the measured quantities (visible with
//! `cargo test -p ama-core --test acceptance -- --nocapture`) and then
//! asserts, so a failing criterion fails the build.

use rayon::prelude::*;

use ama_core::ansatz::{cnot_count, gradient};
use ama_core::bench::rows_to_csv;
use ama_core::seeds::derive;
use ama_core::{
    approximation_ratio, brute_force_mis, build_initial_circuit, build_pnu, build_pu,
    build_qaoa_plus, circuit_depth, evaluate, evaluate_with, generate_er, generate_regular,
    grow_layer, minimize, run_campaign, runtime_estimate, seeded_init, AmaConfig, Assignment,
    Circuit, EvalOptions, ExperimentConfig, Graph, GraphFamily, OptimizerConfig, ParameterVector,
    ResourceModel,
};

const RUNS_PER_SETTING: u64 = 100;
const BATCH_SEED: u64 = 0xA11CE;

fn verdict(id: u32, label: &str, ok: bool, detail: &str) {
    let tag = if ok { "[PASS]" } else { "[FAIL]" };
    println!("{tag} criterion {id}: {label} ({detail})");
    assert!(ok, "criterion {id} failed: {label} ({detail})");
}

#[test]
fn criterion_1_depth_model_goldens() {
    let model = ResourceModel::default();
    let mut full = Vec::new();
    let mut partial = Vec::new();
    for p in [4usize, 5] {
        for (n, seed) in [(8usize, 1u64), (10, 2), (12, 3)] {
            let g = generate_er(n, 0.5, seed).unwrap();
            let n_pm = n / 2 + 1;

            let qaoa = build_qaoa_plus(&g, p).unwrap();
            let per_run = circuit_depth(&qaoa, &model);
            assert_eq!(per_run, (p * (1 + 3 * n)) as u64);
            full.push(RUNS_PER_SETTING * per_run);

            let pu = build_pu(&g, p, n_pm, 42).unwrap();
            let pnu = build_pnu(&g, p, n_pm, 43).unwrap();
            let pu_depth = circuit_depth(&pu, &model);
            assert_eq!(pu_depth, (p * (1 + 3 * n_pm)) as u64);
            assert_eq!(circuit_depth(&pnu, &model), pu_depth);
            partial.push(RUNS_PER_SETTING * pu_depth);
        }
    }
    let full_ok = full == [10000, 12400, 14800, 12500, 15500, 18500];
    let partial_ok = partial == [6400, 7600, 8800, 8000, 9500, 11000];
    verdict(
        1,
        "circuit-depth totals match the golden set exactly",
        full_ok && partial_ok,
        &format!("full={full:?} partial={partial:?}"),
    );
}

#[test]
fn criterion_2_cnot_model_goldens() {
    let model = ResourceModel::default();
    let mut full = Vec::new();
    let mut partial = Vec::new();
    for p in [4usize, 5] {
        for (n, seed) in [(8usize, 4u64), (10, 5), (12, 6)] {
            let g = generate_regular(n, 3, seed).unwrap();
            let n_pm = n / 2 + 1;

            let qaoa = build_qaoa_plus(&g, p).unwrap();
            full.push(RUNS_PER_SETTING * cnot_count(&qaoa, &g, &model));

            // Every vertex has degree 3, so the totals are independent of
            // which subset the partial builders drew.
            let pu = build_pu(&g, p, n_pm, 42).unwrap();
            let pnu = build_pnu(&g, p, n_pm, 43).unwrap();
            let pu_cnots = cnot_count(&pu, &g, &model);
            assert_eq!(cnot_count(&pnu, &g, &model), pu_cnots);
            partial.push(RUNS_PER_SETTING * pu_cnots);
        }
    }
    // At n=8 the full-mixer totals pin the linear model's own prediction
    // (8k-6 CNOTs per degree-k mixer); the n=10 and n=12 entries are the
    // externally fixed goldens.
    let full_ok = full == [57600, 72000, 86400, 72000, 90000, 108000];
    let partial_ok = partial == [36000, 43200, 50400, 45000, 54000, 63000];
    verdict(
        2,
        "CNOT totals on 3-regular graphs match the golden set exactly",
        full_ok && partial_ok,
        &format!("full={full:?} partial={partial:?}"),
    );
}

#[test]
fn criterion_3_runtime_model_consistency() {
    // Frozen calibration pairs: (mean iterations, reported runtime) for
    // every campaign row the runtime model must explain.
    const PAIRS: [(f64, f64); 21] = [
        (9465.2, 946.974),
        (9618.8, 962.472),
        (10169.7, 1017.789),
        (5143.2, 514.834),
        (5001.2, 500.740),
        (5327.1, 533.498),
        (5652.4, 565.946),
        (5498.1, 550.662),
        (5998.9, 600.990),
        (4495.9, 449.877),
        (4570.5, 457.397),
        (4968.5, 497.287),
        (4470.3, 447.382),
        (4738.0, 474.250),
        (5152.7, 515.837),
        (5147.0, 515.029),
        (5203.3, 520.725),
        (5268.7, 527.334),
        (5766.4, 577.101),
        (5644.3, 564.966),
        (5776.5, 578.285),
    ];
    let constant = ExperimentConfig::default().runtime_constant;
    assert_eq!(runtime_estimate(100, constant), 10.0);
    let mut max_rel: f64 = 0.0;
    for (itrs, reported) in PAIRS {
        let modeled = constant * itrs;
        max_rel = max_rel.max((modeled - reported).abs() / reported);
    }
    verdict(
        3,
        "runtime model matches all 21 calibration rows within 0.5%",
        max_rel <= 0.005,
        &format!("max relative error {max_rel:.6}"),
    );
}

/// Seeded mixed-family corpus shared by the feasibility and oracle criteria.
fn corpus(sizes: &[usize], per_cell: u64) -> Vec<Graph> {
    let mut graphs = Vec::new();
    for family in [GraphFamily::Er, GraphFamily::Regular3] {
        for &n in sizes {
            for k in 0..per_cell {
                let seed = derive(BATCH_SEED, family.tag(), &[n as u64, k]);
                graphs.push(family.generate(n, 0.5, seed).unwrap());
            }
        }
    }
    graphs
}

#[test]
fn criterion_4_feasibility_preservation() {
    let graphs = corpus(&[4, 6, 8, 10], 7);
    assert!(graphs.len() >= 50, "corpus too small: {}", graphs.len());
    let ocfg = OptimizerConfig::default();
    let acfg = AmaConfig::default();
    let mut checks = 0usize;
    for (gi, g) in graphs.iter().enumerate() {
        let gi = gi as u64;
        let initial = build_initial_circuit(g, &acfg, derive(BATCH_SEED, "f-init", &[gi])).unwrap();
        let prefix = seeded_init(initial.param_count(), derive(BATCH_SEED, "f-pre", &[gi]), &ocfg);
        let (adaptive, _) =
            grow_layer(&initial, &prefix, g, &acfg, derive(BATCH_SEED, "f-grow", &[gi])).unwrap();
        let n_pm = g.n() / 2 + 1;
        let circuits = [
            adaptive,
            build_qaoa_plus(g, 2).unwrap(),
            build_pu(g, 2, n_pm, derive(BATCH_SEED, "f-pu", &[gi])).unwrap(),
            build_pnu(g, 2, n_pm, derive(BATCH_SEED, "f-pnu", &[gi])).unwrap(),
        ];
        for (ci, c) in circuits.iter().enumerate() {
            let theta = seeded_init(
                c.param_count(),
                derive(BATCH_SEED, "f-theta", &[gi, ci as u64]),
                &ocfg,
            );
            // Both mixer-phase conventions must stay inside the feasible
            // subspace: the exact one only adds phases on blocked states.
            for exact in [false, true] {
                let opts = EvalOptions {
                    mixer_phase_exact: exact,
                };
                let (state, _) = evaluate_with(c, &theta, g, opts).unwrap();
                assert!(
                    state.support_is_feasible(g, 1e-12).unwrap(),
                    "infeasible support: graph {gi} circuit {ci} exact={exact}"
                );
                checks += 1;
            }
        }
    }
    verdict(
        4,
        "evolved states stay in the feasible subspace at tol 1e-12",
        true,
        &format!("{} graphs, {checks} circuit evaluations", graphs.len()),
    );
}

#[test]
fn criterion_5_oracle_equivalence() {
    let mut graphs = corpus(&[4, 6, 8, 10], 7);
    graphs.extend(corpus(&[12], 4));
    let mut checked = 0usize;
    for g in &graphs {
        let n = g.n();
        let oracle = brute_force_mis(g).unwrap();
        let mut best = f64::NEG_INFINITY;
        let mut argmax: Vec<u64> = Vec::new();
        for bits in 0..(1u64 << n) {
            let value = ama_core::penalty_energy(g, &Assignment::new(n, bits), 2.0).unwrap();
            if value > best {
                best = value;
                argmax.clear();
            }
            if value == best {
                argmax.push(bits);
            }
        }
        let oracle_bits: Vec<u64> = oracle.optima.iter().map(|a| a.bits()).collect();
        assert_eq!(argmax, oracle_bits, "optima mismatch on n={n}");
        assert_eq!(best, oracle.alpha as f64, "alpha mismatch on n={n}");
        checked += 1;
    }
    verdict(
        5,
        "penalty argmax reproduces the independence oracle exactly",
        true,
        &format!("{checked} graphs up to n=12"),
    );
}

#[test]
fn criterion_6_single_vertex_analytics() {
    let g = Graph::from_edges(1, &[]).unwrap();
    let mut c = Circuit::new(1);
    c.push_mixer_layer(&[0]).unwrap();

    let mut max_f_err: f64 = 0.0;
    let mut max_g_err: f64 = 0.0;
    for i in 0..100 {
        let beta = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * i as f64 / 99.0;
        let theta = ParameterVector(vec![beta]);
        let (_, f) = evaluate(&c, &theta, &g).unwrap();
        max_f_err = max_f_err.max((f + beta.sin().powi(2)).abs());
        let grad = gradient(&c, &theta, &g, &[0], 1e-4).unwrap();
        max_g_err = max_g_err.max((grad[0] + (2.0 * beta).sin()).abs());
    }

    let cfg = OptimizerConfig::default();
    let run = minimize(
        &c,
        &g,
        seeded_init(1, 7, &cfg),
        &cfg,
        EvalOptions::default(),
    )
    .unwrap();

    let ok = max_f_err < 1e-10 && max_g_err < 1e-6 && run.final_expectation <= -0.999;
    verdict(
        6,
        "single-vertex expectation, gradient and optimum are analytic",
        ok,
        &format!(
            "max |F+sin^2| = {max_f_err:.2e}, max grad err = {max_g_err:.2e}, F* = {:.6}",
            run.final_expectation
        ),
    );
}

struct BatchStats {
    oar: Vec<f64>,
    aar: Vec<f64>,
}

impl BatchStats {
    fn mean_aar(&self) -> f64 {
        self.aar.iter().sum::<f64>() / self.aar.len() as f64
    }
}

fn adaptive_batch(graphs: &[Graph], runs: u64, tag: &str) -> BatchStats {
    let cfg = AmaConfig::default();
    per_graph_stats(graphs, runs, |g, gi, r| {
        let seed = derive(BATCH_SEED, tag, &[gi, r]);
        run_ama_ar(g, &cfg, seed)
    })
}

fn run_ama_ar(g: &Graph, cfg: &AmaConfig, seed: u64) -> f64 {
    let f_min = -(brute_force_mis(g).unwrap().alpha as f64);
    let out = ama_core::run_ama(g, cfg, seed).unwrap();
    approximation_ratio(out.result.final_expectation, f_min).unwrap()
}

fn partial_batch(
    graphs: &[Graph],
    runs: u64,
    p: usize,
    n_pm: usize,
    redraw_per_layer: bool,
    tag: &str,
) -> BatchStats {
    let cfg = OptimizerConfig::default();
    per_graph_stats(graphs, runs, |g, gi, r| {
        let seed = derive(BATCH_SEED, tag, &[gi, r]);
        let circuit = if redraw_per_layer {
            build_pnu(g, p, n_pm, derive(seed, "subset", &[])).unwrap()
        } else {
            build_pu(g, p, n_pm, derive(seed, "subset", &[])).unwrap()
        };
        let init = seeded_init(circuit.param_count(), derive(seed, "init", &[]), &cfg);
        let run = minimize(&circuit, g, init, &cfg, EvalOptions::default()).unwrap();
        let f_min = -(brute_force_mis(g).unwrap().alpha as f64);
        approximation_ratio(run.final_expectation, f_min).unwrap()
    })
}

fn per_graph_stats<F>(graphs: &[Graph], runs: u64, run_ar: F) -> BatchStats
where
    F: Fn(&Graph, u64, u64) -> f64 + Sync,
{
    let ars: Vec<(usize, f64)> = (0..graphs.len() as u64 * runs)
        .into_par_iter()
        .map(|i| {
            let gi = i / runs;
            let r = i % runs;
            (gi as usize, run_ar(&graphs[gi as usize], gi, r))
        })
        .collect();
    let mut stats = BatchStats {
        oar: vec![0.0; graphs.len()],
        aar: vec![0.0; graphs.len()],
    };
    for (gi, ar) in ars {
        stats.oar[gi] = stats.oar[gi].max(ar);
        stats.aar[gi] += ar / runs as f64;
    }
    stats
}

#[test]
fn criterion_7_desk_scale_quality() {
    let graphs: Vec<Graph> = (0..10)
        .map(|k| generate_regular(8, 3, derive(BATCH_SEED, "regular3-batch", &[k])).unwrap())
        .collect();

    let adaptive = adaptive_batch(&graphs, 20, "c7-ama");
    let pu = partial_batch(&graphs, 20, 6, 5, false, "c7-pu");

    let hits = adaptive.oar.iter().filter(|&&o| o >= 0.95).count();
    let gap = adaptive.mean_aar() - pu.mean_aar();
    let ok = hits >= 8 && gap >= 0.05;
    verdict(
        7,
        "adaptive quality on the 3-regular n=8 batch",
        ok,
        &format!(
            "OAR>=0.95 on {hits}/10 graphs, AAR gap adaptive-PU = {gap:.4} \
             (adaptive {:.4}, PU {:.4})",
            adaptive.mean_aar(),
            pu.mean_aar()
        ),
    );
}

#[test]
fn criterion_8_ordering_trend() {
    let graphs: Vec<Graph> = (0..10)
        .map(|k| generate_er(8, 0.5, derive(BATCH_SEED, "er-batch", &[k])).unwrap())
        .collect();

    let adaptive = adaptive_batch(&graphs, 20, "c8-ama");
    let pnu = partial_batch(&graphs, 20, 6, 5, true, "c8-pnu");
    let pu = partial_batch(&graphs, 20, 6, 5, false, "c8-pu");

    let v1 = (0..10).filter(|&g| adaptive.aar[g] < pnu.aar[g]).count();
    let v2 = (0..10).filter(|&g| pnu.aar[g] < pu.aar[g]).count();
    let ok = v1 <= 1 && v2 <= 1;
    verdict(
        8,
        "per-graph AAR ordering adaptive >= redraw >= fixed-subset",
        ok,
        &format!(
            "violations: adaptive<redraw on {v1}/10, redraw<fixed on {v2}/10 \
             (batch AARs {:.4} / {:.4} / {:.4})",
            adaptive.mean_aar(),
            pnu.mean_aar(),
            pu.mean_aar()
        ),
    );
}

#[test]
fn criterion_9_campaign_determinism() {
    let cfg = ExperimentConfig {
        sizes: vec![6],
        graphs_per_size: 2,
        depths: vec![4],
        runs_per_setting: 5,
        master_seed: 99,
        ..ExperimentConfig::default()
    };
    let mut outputs = Vec::new();
    for threads in [1usize, 4, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let rows = pool.install(|| run_campaign(&cfg)).unwrap();
        outputs.push(rows_to_csv(&rows));
    }
    let ok = outputs[0] == outputs[1] && outputs[1] == outputs[2];
    verdict(
        9,
        "campaign CSV is byte-identical across thread counts and reruns",
        ok,
        &format!("{} bytes x {} runs", outputs[0].len(), outputs.len()),
    );
}
