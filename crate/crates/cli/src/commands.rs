//! Command implementations behind the `er` binary.
//!
//! Each command returns a [`RunReport`] plus a pass flag. Input and model
//! violations surface as [`CliError`] (exit code 2); a report whose checks
//! failed keeps exit code 1; everything else exits 0.

use std::path::Path;

use er_core::estimator::{estimate_resistance, EstimateError, EstimatorConfig};
use er_core::generators::{
    dumbbell, dumbbell_modified, large_degree_pair, parallel_paths, path, pendant_expander,
    random_regular_expander, ring, GenError, PathSpec,
};
use er_core::graph::{EdgeId, GraphError, GraphModel, QueryOracle};
use er_core::oracles::{commute_time_mc, edge_inclusion_frequency, OracleError};
use er_core::perturb::{
    eigen_bound_report, orthonormal_columns, sequential_removal_bound, PerturbError,
    PerturbationReport,
};
use er_core::spectral::{
    degree_bound_check, edge_resistance_sum, effective_resistance, effective_resistance_harmonic,
    total_effective_resistance, Resistance, SpectralBundle, SpectralError, TotalMethod,
};
use thiserror::Error;

use crate::format::{FormatError, GraphFile};
use crate::matrix::parse_matrix;
use crate::report::RunReport;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error(transparent)]
    Perturb(#[from] PerturbError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type CmdResult = Result<(RunReport, bool), CliError>;

fn load(path: &Path, report: &mut RunReport) -> Result<(GraphFile, GraphModel), CliError> {
    let bytes = std::fs::read(path)?;
    report.set_input(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
    let file = GraphFile::parse(&text)?;
    let graph = file.to_graph()?;
    Ok((file, graph))
}

pub struct ExactArgs<'a> {
    pub file: &'a Path,
    pub s: Option<usize>,
    pub t: Option<usize>,
    pub total: bool,
    pub edge_sum: bool,
    pub bounds: bool,
}

pub fn cmd_exact(args: ExactArgs<'_>) -> CmdResult {
    let mut report = RunReport::new(format!("exact {}", args.file.display()));
    let (_, g) = load(args.file, &mut report)?;
    let mut pass = true;
    let mut did_something = false;

    if let (Some(s), Some(t)) = (args.s, args.t) {
        did_something = true;
        let r = effective_resistance(&g, s, t)?;
        report.push(format!("R({s},{t}) = {r}"));
        if let Resistance::Finite(value) = r {
            let (harmonic, _) = effective_resistance_harmonic(&g, s, t)?;
            let h = harmonic.expect_finite();
            if (value - h).abs() > 1e-8 {
                pass = false;
                report.push(format!("harmonic cross-check = {h}: fail"));
            }
        }
    }
    if args.total {
        did_something = true;
        if g.is_connected() {
            let pairwise = total_effective_resistance(&g, TotalMethod::Pairwise)?.expect_finite();
            let spectral = total_effective_resistance(&g, TotalMethod::Spectral)?.expect_finite();
            report.push(format!(
                "R_tot = {pairwise} (pairwise) = {spectral} (spectral)"
            ));
            if (pairwise - spectral).abs() > 1e-6 * pairwise.abs().max(1.0) {
                pass = false;
                report.push("total-resistance route agreement: fail".to_string());
            }
        } else {
            report.push(
                "R_tot = INFINITE (pairwise); spectral route needs a connected graph".to_string(),
            );
        }
    }
    if args.edge_sum {
        did_something = true;
        let sum = edge_resistance_sum(&g)?;
        let expected = g.vertex_count() as f64 - 1.0;
        let ok = (sum - expected).abs() <= 1e-6;
        report.push(format!(
            "edge-sum = {sum} (n-1 = {expected}): {}",
            if ok { "pass" } else { "fail" }
        ));
        pass &= ok;
    }
    if args.bounds {
        did_something = true;
        let bounds = degree_bound_check(&g)?;
        let ok = bounds.min_lower_slack >= -1e-9 && bounds.min_upper_slack >= -1e-9;
        report.push(format!(
            "degree-bounds lambda2-normalized = {}",
            bounds.lambda2_normalized
        ));
        report.push(format!(
            "degree-bounds min-lower-slack = {} min-upper-slack = {}: {}",
            bounds.min_lower_slack,
            bounds.min_upper_slack,
            if ok { "pass" } else { "fail" }
        ));
        pass &= ok;
    }
    if !did_something {
        return Err(CliError::Input(
            "nothing to compute: give s and t, or one of --total, --edge-sum, --bounds".into(),
        ));
    }
    Ok((report, pass))
}

pub struct EstimateArgs<'a> {
    pub file: &'a Path,
    pub s: usize,
    pub t: usize,
    pub epsilon: f64,
    pub delta: Option<f64>,
    pub seed: u64,
    pub runs: u64,
    pub a_override: Option<u64>,
    pub trace_json: bool,
}

pub fn cmd_estimate(args: EstimateArgs<'_>) -> CmdResult {
    let mut report = RunReport::new(format!(
        "estimate {} s={} t={} epsilon={}",
        args.file.display(),
        args.s,
        args.t,
        args.epsilon
    ));
    report.set_seed(args.seed);
    let (_, g) = load(args.file, &mut report)?;

    let mut cfg = EstimatorConfig::new(args.epsilon, args.seed)?;
    if let Some(delta) = args.delta {
        cfg = cfg.with_delta(delta)?;
    }
    if let Some(a) = args.a_override {
        cfg = cfg.with_a_override(a);
    }

    let mut sum_conductance = 0.0;
    let mut sum_queries = 0.0;
    let mut warned = false;
    for run in 0..args.runs.max(1) {
        let run_cfg = EstimatorConfig {
            seed: args.seed.wrapping_add(run),
            ..cfg.clone()
        };
        let mut oracle = QueryOracle::new(&g, 0);
        let est = estimate_resistance(&mut oracle, args.s, args.t, &run_cfg)?;
        if est.non_adjacent && !warned {
            warned = true;
            report.push(
                "warning: pair is not adjacent; only the additive conductance guarantee applies"
                    .to_string(),
            );
        }
        report.push(format!(
            "run {run}: conductance = {} resistance = {} queries = {}",
            est.conductance, est.resistance, est.query_count
        ));
        if args.trace_json {
            report.push(trace_json(run, &run_cfg, &est));
        }
        sum_conductance += est.conductance;
        sum_queries += est.query_count as f64;
        if run == 0 {
            // with this budget every path is resolved in round 0
            if 2 * est.schedule_a >= (g.vertex_count() as u64).saturating_sub(1) {
                report.push("exact-regime: round-0 budget covers every possible path".to_string());
            }
            report.push(format!(
                "schedule: a = {} delta = {}",
                est.schedule_a, est.delta_used
            ));
            let d_min = g.degree(args.s)?.min(g.degree(args.t)?);
            report.push(format!(
                "analytic-query-budget = {}",
                er_core::estimator::expected_query_budget(g.vertex_count(), d_min, &cfg)
            ));
        }
    }
    let runs = args.runs.max(1) as f64;
    report.push(format!(
        "aggregate: mean-conductance = {} mean-queries = {}",
        sum_conductance / runs,
        sum_queries / runs
    ));
    Ok((report, true))
}

fn trace_json(run: u64, cfg: &EstimatorConfig, est: &er_core::estimator::EstimateResult) -> String {
    let resistance = match est.resistance {
        Resistance::Finite(r) => format!("{r}"),
        Resistance::Infinite => "null".to_string(),
    };
    let rounds: Vec<String> = est
        .rounds
        .iter()
        .map(|r| {
            format!(
                "{{\"round\":{},\"p\":{},\"probes\":{},\"accepted\":{},\"steps\":{}}}",
                r.round, r.p, r.probes, r.accepted, r.steps
            )
        })
        .collect();
    format!(
        "{{\"run\":{},\"seed\":{},\"conductance\":{},\"resistance\":{},\"queries\":{},\"rounds\":[{}]}}",
        run,
        cfg.seed,
        est.conductance,
        resistance,
        est.query_count,
        rounds.join(",")
    )
}

pub struct GenArgs<'a> {
    pub family: &'a str,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub l: Option<usize>,
    pub lengths: Option<&'a str>,
    pub dangling: Option<&'a str>,
    pub t_stubs: Option<&'a str>,
    pub lambda2_target: Option<f64>,
    pub variant_base: bool,
    pub seed: u64,
    pub out: &'a Path,
}

fn need_n(n: Option<usize>) -> Result<usize, CliError> {
    n.ok_or_else(|| CliError::Input("this family needs --n".into()))
}

fn parse_u64_list(text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|e| CliError::Input(format!("bad length '{s}': {e}")))
        })
        .collect()
}

pub fn cmd_gen(args: GenArgs<'_>) -> CmdResult {
    let mut report = RunReport::new(format!("gen {} -> {}", args.family, args.out.display()));
    report.set_seed(args.seed);
    let mut metadata: Vec<(String, String)> = vec![
        ("family".into(), args.family.to_string()),
        ("seed".into(), args.seed.to_string()),
    ];
    let graph: GraphModel = match args.family {
        "ring" => {
            let n = need_n(args.n)?;
            let g = ring(n)?;
            let nf = n as f64;
            metadata.push((
                "predicted_total_resistance".into(),
                format!("{}", (nf * nf * nf - nf) / 12.0),
            ));
            g
        }
        "path" => {
            let n = need_n(args.n)?;
            let g = path(n)?;
            let nf = n as f64;
            metadata.push((
                "predicted_total_resistance".into(),
                format!("{}", (nf * nf * nf - nf) / 6.0),
            ));
            g
        }
        "dumbbell" => {
            let n = need_n(args.n)?;
            let inst = dumbbell(n, args.seed)?;
            metadata.push(("s".into(), inst.s.to_string()));
            metadata.push(("t".into(), inst.t.to_string()));
            metadata.push(("predicted_r_st".into(), "1".into()));
            inst.base
        }
        "dumbbell-mod" => {
            let n = need_n(args.n)?;
            let inst = dumbbell_modified(&dumbbell(n, args.seed)?, args.seed)?;
            metadata.push(("s".into(), inst.s.to_string()));
            metadata.push(("t".into(), inst.t.to_string()));
            metadata.push(("predicted_r_st_bound".into(), "0.99".into()));
            metadata.push((
                "measured_r_st".into(),
                format!("{}", inst.measured_modified_resistance.unwrap()),
            ));
            metadata.push(("removed".into(), join_edges(&inst.removed_edges)));
            metadata.push(("added".into(), join_edges(&inst.added_edges)));
            inst.modified.expect("modified graph was just built")
        }
        "large-degree" => {
            let n = need_n(args.n)?;
            let d = args
                .d
                .ok_or_else(|| CliError::Input("large-degree needs --d".into()))?;
            let l = args
                .l
                .ok_or_else(|| CliError::Input("large-degree needs --l".into()))?;
            let inst = large_degree_pair(n, d, l, args.seed)?;
            metadata.push(("s".into(), inst.s.to_string()));
            metadata.push(("t".into(), inst.t.to_string()));
            metadata.push(("d".into(), d.to_string()));
            metadata.push(("l".into(), l.to_string()));
            metadata.push(("base_r_st".into(), "1".into()));
            metadata.push((
                "predicted_r_st_bound".into(),
                format!("{}", inst.predicted_modified_bound),
            ));
            metadata.push((
                "measured_r_st".into(),
                format!("{}", inst.measured_modified_resistance.unwrap()),
            ));
            if args.variant_base {
                metadata.push(("variant".into(), "base".into()));
                inst.base
            } else {
                metadata.push(("variant".into(), "modified".into()));
                inst.modified.expect("modified graph was just built")
            }
        }
        "pendant-expander" => {
            let n = need_n(args.n)?;
            let (g, pendant) = pendant_expander(n, args.seed)?;
            metadata.push(("pendant_edge".into(), pendant.to_string()));
            metadata.push(("predicted_pendant_r".into(), "1".into()));
            metadata.push((
                "lambda2".into(),
                format!(
                    "{}",
                    SpectralBundle::of_graph_laplacian(&g).eigenvalues()[1]
                ),
            ));
            g
        }
        "parallel-paths" => {
            let lengths = parse_u64_list(args.lengths.unwrap_or(""))?;
            let dangling = parse_u64_list(args.dangling.unwrap_or(""))?;
            let t_stubs = parse_u64_list(args.t_stubs.unwrap_or(""))?;
            let mut specs: Vec<PathSpec> =
                lengths.iter().map(|&l| PathSpec::Connected(l)).collect();
            specs.extend(dangling.iter().map(|&l| PathSpec::Dangling(l)));
            let pp = parallel_paths(&specs, &t_stubs)?;
            metadata.push(("s".into(), pp.s.to_string()));
            metadata.push(("t".into(), pp.t.to_string()));
            metadata.push(("predicted_r_st".into(), format!("{}", pp.resistance)));
            metadata.push((
                "predicted_conductance".into(),
                format!("{}", pp.conductance),
            ));
            pp.graph
        }
        "regular-expander" => {
            let n = need_n(args.n)?;
            let d = args
                .d
                .ok_or_else(|| CliError::Input("regular-expander needs --d".into()))?;
            let target = args
                .lambda2_target
                .unwrap_or_else(|| d as f64 - 2.01 * ((d - 1) as f64).sqrt());
            let cert = random_regular_expander(n, d, target, args.seed, 100)?;
            metadata.push(("d".into(), d.to_string()));
            metadata.push(("lambda2".into(), format!("{}", cert.lambda2)));
            metadata.push(("lambda2_target".into(), format!("{}", cert.target)));
            metadata.push(("attempts".into(), cert.attempts.to_string()));
            cert.graph
        }
        other => {
            return Err(CliError::Input(format!(
                "unknown family '{other}' (expected dumbbell, dumbbell-mod, large-degree, ring, \
                 path, pendant-expander, parallel-paths, regular-expander)"
            )))
        }
    };
    let file = GraphFile::from_graph(&graph, metadata);
    file.write(args.out)?;
    report.push(format!(
        "wrote {} (n = {}, m = {})",
        args.out.display(),
        file.n,
        file.m
    ));
    for (k, v) in &file.metadata {
        report.push(format!("meta {k}: {v}"));
    }
    Ok((report, true))
}

fn join_edges(edges: &[EdgeId]) -> String {
    edges
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_edge_list(text: &str) -> Result<Vec<EdgeId>, CliError> {
    text.split(',')
        .filter(|s| !s.is_empty())
        .map(|token| {
            let (a, b) = token
                .trim()
                .split_once('-')
                .ok_or_else(|| CliError::Input(format!("bad edge '{token}', expected u-v")))?;
            let u: usize = a
                .parse()
                .map_err(|e| CliError::Input(format!("bad edge '{token}': {e}")))?;
            let v: usize = b
                .parse()
                .map_err(|e| CliError::Input(format!("bad edge '{token}': {e}")))?;
            Ok(EdgeId::new(u, v)?)
        })
        .collect()
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|e| CliError::Input(format!("bad index '{s}': {e}")))
        })
        .collect()
}

pub struct PerturbArgs<'a> {
    pub file: Option<&'a Path>,
    pub edges: Option<&'a str>,
    pub matrix: Option<&'a Path>,
    pub rows: Option<&'a str>,
    pub sequential: bool,
}

pub fn cmd_perturb(args: PerturbArgs<'_>) -> CmdResult {
    let report_table = |report: &mut RunReport, pr: &PerturbationReport| {
        report.push(format!(
            "tau = [{}]",
            pr.tau
                .iter()
                .map(|t| format!("{t:.9}"))
                .collect::<Vec<_>>()
                .join(", ")
        ));
        report.push(format!("tau-sum = {:.9}", pr.tau_sum));
        if pr.vacuous {
            report.push(format!("bound vacuous: tau-sum = {:.9} >= 1", pr.tau_sum));
        }
        for step in &pr.steps {
            report.push(format!(
                "step {}: tau-original = {:.9} tau-recomputed = {:.9} cap = {}",
                step.edge,
                step.tau_original,
                step.tau_recomputed,
                step.recomputed_cap
                    .map_or("vacuous".to_string(), |c| format!("{c:.9}")),
            ));
        }
        report.push("i lambda lambda' lower-bound upper-slack lower-slack".to_string());
        for b in &pr.per_index {
            report.push(format!(
                "{} {:.9e} {:.9e} {:.9e} {:.9e} {:.9e}",
                b.index, b.original, b.perturbed, b.lower_bound, b.upper_slack, b.lower_slack
            ));
        }
        report.push(format!(
            "min-lower-slack = {:.3e} min-upper-slack = {:.3e} tolerance = {:.3e}",
            pr.min_lower_slack(),
            pr.min_upper_slack(),
            pr.tolerance
        ));
    };

    match (args.file, args.matrix) {
        (Some(path), None) => {
            let mut report = RunReport::new(format!("perturb {}", path.display()));
            let (_, g) = load(path, &mut report)?;
            let edges = parse_edge_list(args.edges.unwrap_or(""))?;
            let pr = if args.sequential {
                sequential_removal_bound(&g, &edges)?
            } else {
                // one-shot removal against the incidence matrix
                let all = g.edges();
                let rows: Result<Vec<usize>, CliError> = edges
                    .iter()
                    .map(|e| {
                        all.binary_search(e)
                            .map_err(|_| PerturbError::NotAnEdge(e.u(), e.v()).into())
                    })
                    .collect();
                let mut pr = eigen_bound_report(&g.incidence_matrix(), &rows?)?;
                pr.edges_removed = edges;
                pr
            };
            let pass = pr.bounds_hold();
            report_table(&mut report, &pr);
            report.push(format!("bounds: {}", if pass { "pass" } else { "fail" }));
            Ok((report, pass))
        }
        (None, Some(path)) => {
            let mut report = RunReport::new(format!("perturb --matrix {}", path.display()));
            let bytes = std::fs::read(path)?;
            report.set_input(&bytes);
            let text = String::from_utf8(bytes)
                .map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
            let a = parse_matrix(&text)?;
            let rows = parse_usize_list(args.rows.unwrap_or(""))?;
            let pr = eigen_bound_report(&a, &rows)?;
            let pass = pr.bounds_hold();
            report_table(&mut report, &pr);
            report.push(format!("bounds: {}", if pass { "pass" } else { "fail" }));
            Ok((report, pass))
        }
        _ => Err(CliError::Input(
            "give either a graph file (with --edges) or --matrix (with --rows)".into(),
        )),
    }
}

pub struct VerifyArgs<'a> {
    pub file: Option<&'a Path>,
    pub suite: Option<&'a str>,
    pub seed: u64,
}

pub fn cmd_verify(args: VerifyArgs<'_>) -> CmdResult {
    match (args.file, args.suite) {
        (Some(path), None) => verify_file(path, args.seed),
        (None, Some("small")) => verify_suite_small(args.seed),
        (None, Some(other)) => Err(CliError::Input(format!(
            "unknown suite '{other}' (expected: small)"
        ))),
        _ => Err(CliError::Input("give a graph file or --suite small".into())),
    }
}

fn check(report: &mut RunReport, pass: &mut bool, name: &str, ok: bool) {
    report.push(format!("{name}: {}", if ok { "pass" } else { "fail" }));
    *pass &= ok;
}

fn verify_file(path: &Path, seed: u64) -> CmdResult {
    let mut report = RunReport::new(format!("verify {}", path.display()));
    report.set_seed(seed);
    let (file, g) = load(path, &mut report)?;
    let mut pass = true;

    let round_trip = GraphFile::parse(&file.render())
        .map(|f| f.to_graph().map(|g2| g2 == g).unwrap_or(false))
        .unwrap_or(false);
    check(&mut report, &mut pass, "file round-trip", round_trip);

    if g.is_connected() {
        let sum = edge_resistance_sum(&g)?;
        let n1 = g.vertex_count() as f64 - 1.0;
        check(
            &mut report,
            &mut pass,
            &format!("edge-sum = n-1 ({sum})"),
            (sum - n1).abs() <= 1e-6,
        );

        let bounds = degree_bound_check(&g)?;
        check(
            &mut report,
            &mut pass,
            "degree-bounds",
            bounds.min_lower_slack >= -1e-9 && bounds.min_upper_slack >= -1e-9,
        );

        let pairwise = total_effective_resistance(&g, TotalMethod::Pairwise)?.expect_finite();
        let spectral = total_effective_resistance(&g, TotalMethod::Spectral)?.expect_finite();
        check(
            &mut report,
            &mut pass,
            "total-resistance routes",
            (pairwise - spectral).abs() <= 1e-6 * pairwise.abs().max(1.0),
        );

        let n = g.vertex_count();
        let mut harmonic_ok = true;
        for (s, t) in [(0, n - 1), (0, n / 2), (n / 3, n - 1)] {
            if s == t {
                continue;
            }
            let exact = effective_resistance(&g, s, t)?.expect_finite();
            let (h, _) = effective_resistance_harmonic(&g, s, t)?;
            harmonic_ok &= (exact - h.expect_finite()).abs() <= 1e-8;
        }
        check(&mut report, &mut pass, "harmonic route", harmonic_ok);

        if let Some(expected) = file.metadata_value("predicted_r_st") {
            let s: usize = file
                .metadata_value("s")
                .and_then(|v| v.parse().ok())
                .unwrap_or(0);
            let t: usize = file
                .metadata_value("t")
                .and_then(|v| v.parse().ok())
                .unwrap_or(n - 1);
            let got = effective_resistance(&g, s, t)?;
            let ok = match (expected.parse::<f64>(), got) {
                (Ok(want), Resistance::Finite(r)) => (r - want).abs() <= 1e-9 * want.max(1.0),
                (Err(_), Resistance::Infinite) => expected == "INFINITE",
                _ => false,
            };
            check(&mut report, &mut pass, "embedded prediction R(s,t)", ok);
        }
        if let Some(bound) = file.metadata_value("predicted_r_st_bound") {
            let s: usize = file
                .metadata_value("s")
                .and_then(|v| v.parse().ok())
                .unwrap_or(0);
            let t: usize = file
                .metadata_value("t")
                .and_then(|v| v.parse().ok())
                .unwrap_or(n - 1);
            let got = effective_resistance(&g, s, t)?.expect_finite();
            let ok = bound.parse::<f64>().map(|b| got <= b).unwrap_or(false);
            check(&mut report, &mut pass, "embedded prediction bound", ok);
        }

        // randomized identity checks stay affordable on small graphs
        if n <= 16 {
            let (u, v) = (0, n - 1);
            let r = effective_resistance(&g, u, v)?.expect_finite();
            let stats = commute_time_mc(&g, u, v, 2_000, seed)?;
            let target = 2.0 * g.edge_count() as f64 * r;
            check(
                &mut report,
                &mut pass,
                "property-2 commute-time MC",
                (stats.mean_commute - target).abs() <= 4.0 * stats.std_error.max(1e-12),
            );
            let e = g.edges()[0];
            let r_e = effective_resistance(&g, e.u(), e.v())?.expect_finite();
            let tree_stats = edge_inclusion_frequency(&g, e, 2_000, seed)?;
            check(
                &mut report,
                &mut pass,
                "property-5 spanning-tree MC",
                (tree_stats.frequency() - r_e).abs() <= (4.0 * tree_stats.std_error()).max(1e-9),
            );
        }
    } else {
        report.push("graph is disconnected; connected-graph identities skipped".to_string());
    }
    Ok((report, pass))
}

fn verify_suite_small(seed: u64) -> CmdResult {
    let mut report = RunReport::new("verify --suite small".to_string());
    report.set_seed(seed);
    let mut pass = true;

    // ring/path closed forms
    let mut ok = true;
    for n in [3usize, 5, 10] {
        let nf = n as f64;
        let p = total_effective_resistance(&path(n)?, TotalMethod::Spectral)?.expect_finite();
        let r = total_effective_resistance(&ring(n)?, TotalMethod::Spectral)?.expect_finite();
        ok &= (p - (nf * nf * nf - nf) / 6.0).abs() <= 1e-6 * p;
        ok &= (r - (nf * nf * nf - nf) / 12.0).abs() <= 1e-6 * r;
        ok &= (p / r - 2.0).abs() <= 1e-9;
    }
    check(
        &mut report,
        &mut pass,
        "closed-forms (path/ring totals)",
        ok,
    );

    // electrical identities on small graphs
    let mut ok = true;
    for g in [
        GraphModel::build(3, &[(0, 1), (1, 2), (0, 2)])?,
        ring(5)?,
        path(5)?,
    ] {
        let sum = edge_resistance_sum(&g)?;
        ok &= (sum - (g.vertex_count() as f64 - 1.0)).abs() <= 1e-6;
        let bounds = degree_bound_check(&g)?;
        ok &= bounds.min_lower_slack >= -1e-9 && bounds.min_upper_slack >= -1e-9;
        let exact = effective_resistance(&g, 0, g.vertex_count() - 1)?.expect_finite();
        let (h, _) = effective_resistance_harmonic(&g, 0, g.vertex_count() - 1)?;
        ok &= (exact - h.expect_finite()).abs() <= 1e-8;
    }
    check(&mut report, &mut pass, "electrical identities", ok);

    // perturbation bounds: ring edge removal and the tight family
    let g = ring(8)?;
    let pr = er_core::perturb::graph_edge_removal_bound(&g, EdgeId::new(0, 1)?)?;
    let mut ok = pr.bounds_hold() && !pr.vacuous;
    let a = orthonormal_columns(8, 3, seed);
    let pr = eigen_bound_report(&a, &[0])?;
    ok &= pr.per_index[0].lower_slack.abs() < 1e-12;
    check(&mut report, &mut pass, "perturbation bounds", ok);

    // dumbbell predictions at n = 32
    let inst = dumbbell(32, seed)?;
    let r = effective_resistance(&inst.base, inst.s, inst.t)?.expect_finite();
    let mut ok = (r - 1.0).abs() <= 1e-9;
    ok &= inst.candidate_edges(true).len() >= 32 / 12;
    let modified = dumbbell_modified(&inst, seed)?;
    ok &= modified.measured_modified_resistance.unwrap() <= 0.99;
    check(&mut report, &mut pass, "dumbbell predictions", ok);

    // pendant expander at n = 17
    let (g, pendant) = pendant_expander(17, seed)?;
    let r = effective_resistance(&g, pendant.u(), pendant.v())?.expect_finite();
    let mut ok = (r - 1.0).abs() <= 1e-9;
    let pairs: Vec<_> = g
        .edges()
        .into_iter()
        .filter(|e| *e != pendant)
        .map(|e| e.endpoints())
        .collect();
    let cut = GraphModel::build(g.vertex_count(), &pairs)?;
    ok &= SpectralBundle::of_graph_laplacian(&cut).eigenvalues()[1].abs() <= 1e-9;
    check(&mut report, &mut pass, "pendant-expander", ok);

    // Monte-Carlo identities on the triangle
    let tri = GraphModel::build(3, &[(0, 1), (1, 2), (0, 2)])?;
    let stats = commute_time_mc(&tri, 0, 1, 2_000, seed)?;
    let mut ok = (stats.mean_commute - 4.0).abs() <= 4.0 * stats.std_error.max(1e-12);
    let tree_stats = edge_inclusion_frequency(&tri, EdgeId::new(0, 1)?, 2_000, seed)?;
    ok &= (tree_stats.frequency() - 2.0 / 3.0).abs() <= 4.0 * tree_stats.std_error();
    check(
        &mut report,
        &mut pass,
        "monte-carlo oracles (Property 2/5)",
        ok,
    );

    // estimator exact regime
    let pp = parallel_paths(
        &[
            PathSpec::Connected(1),
            PathSpec::Connected(2),
            PathSpec::Connected(4),
        ],
        &[],
    )?;
    let mut oracle = QueryOracle::new(&pp.graph, 0);
    let cfg = EstimatorConfig::new(0.05, seed)?;
    let est = estimate_resistance(&mut oracle, pp.s, pp.t, &cfg)?;
    let ok = est.resistance.expect_finite().to_bits() == pp.resistance.expect_finite().to_bits();
    check(&mut report, &mut pass, "estimator exact regime", ok);

    Ok((report, pass))
}

pub struct OracleArgs<'a> {
    pub file: &'a Path,
    pub u: usize,
    pub v: usize,
    pub trials: u64,
    pub seed: u64,
}

pub fn cmd_oracle_commute(args: OracleArgs<'_>) -> CmdResult {
    let mut report = RunReport::new(format!(
        "oracle commute {} {} {}",
        args.file.display(),
        args.u,
        args.v
    ));
    report.set_seed(args.seed);
    let (_, g) = load(args.file, &mut report)?;
    let stats = commute_time_mc(&g, args.u, args.v, args.trials, args.seed)?;
    let r = effective_resistance(&g, args.u, args.v)?.expect_finite();
    let target = 2.0 * g.edge_count() as f64 * r;
    let pass = (stats.mean_commute - target).abs() <= 4.0 * stats.std_error.max(1e-12);
    report.push(format!("trials = {}", stats.trials));
    report.push(format!("mean-commute = {}", stats.mean_commute));
    report.push(format!("std-error = {}", stats.std_error));
    report.push(format!("target-2mR = {target}"));
    report.push(format!(
        "within-4-sigma: {}",
        if pass { "pass" } else { "fail" }
    ));
    Ok((report, pass))
}

pub fn cmd_oracle_tree(args: OracleArgs<'_>) -> CmdResult {
    let mut report = RunReport::new(format!(
        "oracle tree {} {} {}",
        args.file.display(),
        args.u,
        args.v
    ));
    report.set_seed(args.seed);
    let (_, g) = load(args.file, &mut report)?;
    let e = EdgeId::new(args.u, args.v)?;
    let stats = edge_inclusion_frequency(&g, e, args.trials, args.seed)?;
    let r = effective_resistance(&g, e.u(), e.v())?.expect_finite();
    let pass = (stats.frequency() - r).abs() <= (4.0 * stats.std_error()).max(1e-9);
    report.push(format!("trials = {}", stats.trials));
    report.push(format!("inclusions = {}", stats.inclusion_count));
    report.push(format!("frequency = {}", stats.frequency()));
    report.push(format!("resistance = {r}"));
    report.push(format!(
        "within-4-sigma: {}",
        if pass { "pass" } else { "fail" }
    ));
    Ok((report, pass))
}
