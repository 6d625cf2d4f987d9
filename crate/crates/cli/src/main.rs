//! Single entry point for the numerical laboratory: `meanfield`,
//! `duality`, `mc`, `code` and `anneal` subcommands with reproducible
//! seeding and stamped file outputs.
//!
//! Exit codes: 0 success, 1 identity-check failure (or runtime fault),
//! 2 unknown flag / malformed invocation, 3 out-of-range parameter,
//! 4 missing required flag.

// parameter guards use `!(x > 0.0)` so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::json;

use glassbridge_core::lattice::TorusLattice;
use glassbridge_core::quantum::{
    build_hq, classical_jarzynski, gauge_identity_suite, jarzynski_check, min_gap, qja_run,
    torus_2x2_spec, AnnealSpec, IdentityCheck, MasterSystem, Schedule, UpdateRule,
};
use glassbridge_core::rng::task_rng;
use glassbridge_core::spinglass::{nl_internal_energy, sample_disorder};
use glassbridge_core::surface::{failure_rate_sweep, FailureRateRow};
use glassbridge_core::{duality, meanfield, nishimori_density};
use output::{sig17, OutputSink};

#[derive(Parser)]
#[command(
    name = "glassbridge",
    version,
    about = "spin-glass duality, toric-code decoding and exact annealing identities",
    disable_help_subcommand = true
)]
struct Cli {
    /// Master seed; the GLASSBRIDGE_SEED environment variable overrides it
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Worker pool size (0 uses every core); results never depend on it
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Output file path (stdout when omitted)
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean-field magnetization sweep (CSV: beta, m_star)
    Meanfield {
        /// Coordination number
        #[arg(long, default_value_t = 6)]
        z: u32,
        /// Coupling J
        #[arg(long, default_value_t = 1.0)]
        j: f64,
        /// Inverse-temperature grid start:stop:step
        #[arg(long, default_value = "0.0:0.5:0.005")]
        beta_grid: String,
    },
    /// Duality engine: multicritical point and phase boundary
    Duality {
        /// Renormalization cluster size s
        #[arg(long, default_value_t = 0)]
        cluster: u8,
        /// Emit the off-Nishimori phase boundary as CSV rows p, K_c
        #[arg(long)]
        boundary_scan: bool,
        /// Machine-readable summary {s, p_c, residual_calls}
        #[arg(long)]
        json: bool,
    },
    /// ±J Monte Carlo on the torus along the Nishimori line
    Mc {
        /// Linear lattice size
        #[arg(long = "L")]
        l: usize,
        /// Thermal coupling K = βJ
        #[arg(long = "K")]
        k: f64,
        /// Derive the disorder density from K (required: the exact
        /// reference -tanh K holds on the Nishimori line)
        #[arg(long)]
        nishimori: bool,
        /// Number of disorder samples
        #[arg(long, default_value_t = 64)]
        disorder: usize,
        /// Monte Carlo sweeps per sample (first half discarded)
        #[arg(long, default_value_t = 20000)]
        sweeps: usize,
    },
    /// Toric-code logical failure rates with optimal decoding
    Code {
        /// Linear lattice sizes (L <= 4), comma separated
        #[arg(long = "L", value_delimiter = ',', required = true)]
        l: Vec<usize>,
        /// Error-rate grid start:stop:step
        #[arg(long, default_value = "0.02:0.16:0.02")]
        p_grid: String,
        /// Monte Carlo trials per (L, p) cell
        #[arg(long, default_value_t = 10000)]
        trials: u64,
        /// Matched (optimal) decoding, K from p
        #[arg(long, conflicts_with = "k")]
        matched: bool,
        /// Fixed decoder coupling for mismatched decoding
        #[arg(long = "K")]
        k: Option<f64>,
        /// Emit a JSON summary with pairwise crossing brackets
        #[arg(long)]
        json: bool,
        /// Dump the lattice geometry as JSON and exit (debugging aid)
        #[arg(long)]
        dump_lattice: bool,
    },
    /// Exact annealing identity suites (JSON report per check)
    Anneal {
        /// Which suite to run
        #[arg(long)]
        suite: SuiteKind,
        /// Spin count for random instances
        #[arg(long = "N")]
        n: Option<usize>,
        /// Use the 2x2-torus instance instead of a random one
        #[arg(long)]
        lattice: Option<String>,
        /// Transverse-field strength Γ₀
        #[arg(long, default_value_t = 1.0)]
        gamma0: f64,
        /// Inverse temperature of the initial ensemble
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        /// Annealing horizon T
        #[arg(long = "T", default_value_t = 1.0)]
        t: f64,
        /// Integrator step count
        #[arg(long, default_value_t = 64)]
        steps: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteKind {
    /// Quantum Jarzynski equality on random instances
    Je,
    /// Exhaustive gauge identities on the 2x2 torus
    Gauge,
    /// Classical-quantum mapping H_q spectral checks
    Hq,
    /// Classical Jarzynski via exact master-equation propagation
    Cje,
    /// Quantum Jarzynski annealing Gibbs proportionality
    Qja,
    /// Minimum-gap tracking (informational)
    Gap,
}

/// A semantic (out-of-range) usage error: exit code 3.
struct UsageError(String);

type RunResult = Result<bool, UsageError>;

fn main() -> ExitCode {
    let mut cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    return ExitCode::SUCCESS;
                }
                ErrorKind::MissingRequiredArgument => 4,
                ErrorKind::InvalidValue
                | ErrorKind::ValueValidation
                | ErrorKind::TooFewValues
                | ErrorKind::TooManyValues => 3,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(env_seed) = std::env::var("GLASSBRIDGE_SEED") {
        match env_seed.parse::<u64>() {
            Ok(s) => cli.seed = s,
            Err(_) => {
                eprintln!("error: GLASSBRIDGE_SEED must be a 64-bit unsigned integer");
                return ExitCode::from(3);
            }
        }
    }
    if cli.jobs > 0 {
        // a failure here only means a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> RunResult {
    let sink = OutputSink::new(cli.output.clone());
    let seed = cli.seed;
    match &cli.command {
        Command::Meanfield { z, j, beta_grid } => run_meanfield(&sink, seed, *z, *j, beta_grid),
        Command::Duality {
            cluster,
            boundary_scan,
            json,
        } => run_duality(&sink, seed, *cluster, *boundary_scan, *json),
        Command::Mc {
            l,
            k,
            nishimori,
            disorder,
            sweeps,
        } => run_mc(&sink, seed, *l, *k, *nishimori, *disorder, *sweeps),
        Command::Code {
            l,
            p_grid,
            trials,
            matched,
            k,
            json,
            dump_lattice,
        } => {
            if *dump_lattice {
                return dump_lattices(&sink, seed, l);
            }
            run_code(&sink, seed, l, p_grid, *trials, *matched, *k, *json)
        }
        Command::Anneal {
            suite,
            n,
            lattice,
            gamma0,
            beta,
            t,
            steps,
        } => run_anneal(
            &sink,
            seed,
            *suite,
            *n,
            lattice.as_deref(),
            *gamma0,
            *beta,
            *t,
            *steps,
        ),
    }
}

fn parse_grid(grid: &str) -> Result<Vec<f64>, UsageError> {
    let parts: Vec<&str> = grid.split(':').collect();
    if parts.len() != 3 {
        return Err(UsageError(format!("grid '{grid}' is not start:stop:step")));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| UsageError(format!("bad grid number '{s}'")))
        })
        .collect::<Result<_, _>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if !(step > 0.0) || stop < start {
        return Err(UsageError(format!(
            "grid '{grid}' must increase with positive step"
        )));
    }
    let mut points = Vec::new();
    let mut i = 0usize;
    loop {
        let x = start + step * i as f64;
        if x > stop + 1e-12 {
            break;
        }
        points.push(x);
        i += 1;
    }
    Ok(points)
}

fn run_meanfield(sink: &OutputSink, seed: u64, z: u32, j: f64, beta_grid: &str) -> RunResult {
    let grid = parse_grid(beta_grid)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &beta in &grid {
        let problem =
            meanfield::MeanFieldProblem::new(beta, j, z).map_err(|e| UsageError(e.to_string()))?;
        let m = meanfield::mf_magnetization(&problem);
        rows.push(format!("{beta},{m}"));
    }
    let config = format!("meanfield --z {z} --j {j} --beta-grid {beta_grid}");
    sink.csv(&config, seed, "beta,m_star", &rows)
        .expect("write output");
    Ok(true)
}

fn run_duality(
    sink: &OutputSink,
    seed: u64,
    cluster: u8,
    boundary_scan: bool,
    json: bool,
) -> RunResult {
    if cluster > 2 {
        return Err(UsageError(format!(
            "cluster size {cluster} not in {{0, 1, 2}}"
        )));
    }
    let config = format!(
        "duality --cluster {cluster}{}{}",
        if boundary_scan {
            " --boundary-scan"
        } else {
            ""
        },
        if json { " --json" } else { "" }
    );
    if boundary_scan {
        let (p_c, _) = duality::multicritical_point_with_stats(cluster)
            .map_err(|e| UsageError(e.to_string()))?;
        let mut rows = Vec::new();
        let mut p = 0.0;
        while p < p_c - 5e-3 {
            let k_c = duality::phase_boundary(cluster, p).map_err(|e| UsageError(e.to_string()))?;
            rows.push(format!("{p},{k_c}"));
            p += 0.01;
        }
        sink.csv(&config, seed, "p,K_c", &rows)
            .expect("write output");
        return Ok(true);
    }
    let (p_c, residual_calls) =
        duality::multicritical_point_with_stats(cluster).map_err(|e| UsageError(e.to_string()))?;
    if json {
        sink.json(
            &config,
            seed,
            &json!({ "s": cluster, "p_c": p_c, "residual_calls": residual_calls }),
        )
        .expect("write output");
    } else {
        let rows = vec![format!("{cluster},{}", sig17(p_c))];
        sink.csv(&config, seed, "s,p_c", &rows)
            .expect("write output");
    }
    Ok(true)
}

fn run_mc(
    sink: &OutputSink,
    seed: u64,
    l: usize,
    k: f64,
    nishimori: bool,
    disorder: usize,
    sweeps: usize,
) -> RunResult {
    if !nishimori {
        return Err(UsageError(
            "only Nishimori-line runs carry an exact reference; pass --nishimori".into(),
        ));
    }
    if !(k > 0.0) {
        return Err(UsageError(format!("coupling K = {k} must be positive")));
    }
    let est =
        nl_internal_energy(l, k, disorder, sweeps, seed).map_err(|e| UsageError(e.to_string()))?;
    let n_bonds = 2.0 * (l * l) as f64;
    let config = format!("mc --L {l} --K {k} --nishimori --disorder {disorder} --sweeps {sweeps}");
    // per-bond energy against the exact Nishimori identity
    let rows = vec![format!(
        "{k},{},{},{}",
        sig17(est.mean / n_bonds),
        sig17(est.std_error / n_bonds),
        sig17(-k.tanh())
    )];
    sink.csv(&config, seed, "K,estimate,std_error,exact_reference", &rows)
        .expect("write output");
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn run_code(
    sink: &OutputSink,
    seed: u64,
    l_list: &[usize],
    p_grid: &str,
    trials: u64,
    matched: bool,
    k: Option<f64>,
    json: bool,
) -> RunResult {
    for &l in l_list {
        if !(2..=4).contains(&l) {
            return Err(UsageError(format!(
                "L = {l} outside 2..=4 (optimal decoding enumerates 2^(L*L) states)"
            )));
        }
    }
    if !matched && k.is_none() {
        return Err(UsageError(
            "pass --matched or an explicit decoder coupling --K".into(),
        ));
    }
    let grid = parse_grid(p_grid)?;
    for &p in &grid {
        if !(0.0..0.5).contains(&p) {
            return Err(UsageError(format!("error rate p = {p} outside [0, 1/2)")));
        }
    }
    let rows = failure_rate_sweep(l_list, &grid, trials, matched, k, seed)
        .map_err(|e| UsageError(e.to_string()))?;
    let config = format!(
        "code --L {} --p-grid {p_grid} --trials {trials} {}",
        l_list
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(","),
        if matched {
            "--matched".to_string()
        } else {
            format!("--K {}", k.unwrap())
        }
    );
    if json {
        let brackets = crossing_brackets(&rows, l_list, &grid);
        let payload = json!({
            "rows": rows.iter().map(|r| json!({
                "L": r.l, "p": r.p, "failures": r.failures, "trials": r.trials,
                "rate": r.rate, "stderr": r.std_error,
            })).collect::<Vec<_>>(),
            "crossing_brackets": brackets,
        });
        sink.json(&config, seed, &payload).expect("write output");
    } else {
        let body: Vec<String> = rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{}",
                    r.l, r.p, r.failures, r.trials, r.rate, r.std_error
                )
            })
            .collect();
        sink.csv(&config, seed, "L,p,failures,trials,rate,stderr", &body)
            .expect("write output");
    }
    Ok(true)
}

fn dump_lattices(sink: &OutputSink, seed: u64, l_list: &[usize]) -> RunResult {
    let mut lattices = Vec::new();
    for &l in l_list {
        let lattice = TorusLattice::new(l).map_err(|e| UsageError(e.to_string()))?;
        lattices.push(lattice.to_json());
    }
    let config = format!(
        "code --L {} --dump-lattice",
        l_list
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );
    sink.json(&config, seed, &lattices).expect("write output");
    Ok(true)
}

/// Pairwise sign changes of the failure-rate difference along the grid.
fn crossing_brackets(
    rows: &[FailureRateRow],
    l_list: &[usize],
    grid: &[f64],
) -> Vec<serde_json::Value> {
    let rate = |l: usize, pi: usize| -> f64 {
        rows.iter()
            .find(|r| r.l == l && (r.p - grid[pi]).abs() < 1e-12)
            .map_or(f64::NAN, |r| r.rate)
    };
    let mut out = Vec::new();
    for i in 0..l_list.len() {
        for j in (i + 1)..l_list.len() {
            let (la, lb) = (l_list[i], l_list[j]);
            let mut bracket = None;
            for pi in 0..grid.len().saturating_sub(1) {
                let d0 = rate(la, pi) - rate(lb, pi);
                let d1 = rate(la, pi + 1) - rate(lb, pi + 1);
                if d0 * d1 < 0.0 {
                    bracket = Some((grid[pi], grid[pi + 1]));
                    break;
                }
            }
            out.push(json!({
                "pair": [la, lb],
                "bracket": bracket.map(|(a, b)| vec![a, b]),
            }));
        }
    }
    out
}

/// Seeded random instance shared by the je/gap suites.
fn random_instance(
    n: usize,
    gamma0: f64,
    t: f64,
    steps: usize,
    seed: u64,
    index: u64,
) -> AnnealSpec {
    let mut rng = task_rng(seed, "anneal-instance", index);
    let mut couplings = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(0.7) {
                couplings.push((i, j, rng.gen_range(-1.0..1.0)));
            }
        }
        if rng.gen_bool(0.3) {
            couplings.push((i, i, rng.gen_range(-0.5..0.5)));
        }
    }
    AnnealSpec::new(
        n,
        couplings,
        gamma0,
        Schedule::new(t, steps).expect("schedule"),
    )
    .expect("valid instance")
}

fn random_master(n: usize, beta: f64, legs: usize, seed: u64) -> MasterSystem {
    let mut rng = task_rng(seed, "master-instance", 0);
    let h0 = (0..1usize << n).map(|_| rng.gen_range(-1.5..1.5)).collect();
    let ramp = (0..=legs).map(|k| beta * k as f64 / legs as f64).collect();
    MasterSystem::new(n, h0, UpdateRule::HeatBath, ramp).expect("valid master system")
}

/// ±J bond signs of a seeded 2×2-torus disorder sample.
fn torus_signs(seed: u64, index: u64) -> Vec<i8> {
    let torus = TorusLattice::new(2).expect("2x2 torus");
    let mut rng = task_rng(seed, "torus-signs", index);
    (0..torus.n_edges())
        .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
        .collect()
}

/// Classical energies of a seeded ±J sample on the 2×2 torus.
fn torus_h0(seed: u64) -> Vec<f64> {
    let torus = TorusLattice::new(2).expect("2x2 torus");
    let signs = torus_signs(seed, 0);
    (0..16usize)
        .map(|b| {
            let mut e = 0.0;
            for (edge, &tau) in signs.iter().enumerate() {
                let (u, v) = torus.edge_endpoints(edge);
                let zu = if b >> u & 1 == 0 { 1.0 } else { -1.0 };
                let zv = if b >> v & 1 == 0 { 1.0 } else { -1.0 };
                e -= f64::from(tau) * zu * zv;
            }
            e
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn run_anneal(
    sink: &OutputSink,
    seed: u64,
    suite: SuiteKind,
    n: Option<usize>,
    lattice: Option<&str>,
    gamma0: f64,
    beta: f64,
    t: f64,
    steps: usize,
) -> RunResult {
    if let Some(spec) = lattice {
        if spec != "2x2" {
            return Err(UsageError(format!(
                "only --lattice 2x2 is supported, got '{spec}'"
            )));
        }
    }
    let config = format!(
        "anneal --suite {} --N {} --gamma0 {gamma0} --beta {beta} --T {t} --steps {steps}",
        format!("{suite:?}").to_lowercase(),
        n.map_or("-".into(), |v| v.to_string()),
    );
    let checks: Vec<IdentityCheck> = match suite {
        SuiteKind::Je => {
            let n = n.unwrap_or(3);
            if n > 4 {
                return Err(UsageError("je suite runs N <= 4".into()));
            }
            let mut out = Vec::new();
            for i in 0..20 {
                let horizon = if i % 5 == 0 {
                    0.0
                } else {
                    t * (1.0 + i as f64 / 10.0)
                };
                let spec = if lattice.is_some() {
                    torus_2x2_spec(
                        &torus_signs(seed, i),
                        gamma0,
                        Schedule::new(horizon, steps).expect("schedule"),
                    )
                    .expect("torus instance")
                } else {
                    random_instance(n, gamma0, horizon, steps, seed, i)
                };
                let (lhs, rhs) =
                    jarzynski_check(&spec, beta).map_err(|e| UsageError(e.to_string()))?;
                out.push(IdentityCheck::new(
                    &format!("jarzynski[{i}]"),
                    lhs,
                    rhs,
                    1e-10,
                ));
            }
            out
        }
        SuiteKind::Gauge => {
            let report = gauge_identity_suite(beta, gamma0, t, steps)
                .map_err(|e| UsageError(e.to_string()))?;
            sink.json(&config, seed, &report).expect("write output");
            let ok = report.checks.iter().all(|c| c.pass);
            return Ok(ok);
        }
        SuiteKind::Hq => {
            let n = n.unwrap_or(4);
            let master = if lattice.is_some() {
                let torus = TorusLattice::new(2).map_err(|e| UsageError(e.to_string()))?;
                let sample = sample_disorder(&torus, nishimori_density(beta), seed);
                let h0 = (0..16)
                    .map(|b: usize| {
                        let mut e = 0.0;
                        for (edge, &tau) in sample.tau.iter().enumerate() {
                            let (u, v) = torus.edge_endpoints(edge);
                            let zu = if b >> u & 1 == 0 { 1.0 } else { -1.0 };
                            let zv = if b >> v & 1 == 0 { 1.0 } else { -1.0 };
                            e -= f64::from(tau) * zu * zv;
                        }
                        e
                    })
                    .collect();
                MasterSystem::new(4, h0, UpdateRule::HeatBath, vec![0.0, beta])
                    .map_err(|e| UsageError(e.to_string()))?
            } else {
                random_master(n, beta, 4, seed)
            };
            let hq = build_hq(&master, beta).map_err(|e| UsageError(e.to_string()))?;
            let eig = hq.clone().symmetric_eigen();
            let mut e_min = f64::INFINITY;
            for &v in eig.eigenvalues.iter() {
                e_min = e_min.min(v);
            }
            // thermal pair correlations from the ground state vs direct sums
            let idx_min = (0..eig.eigenvalues.len())
                .min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]))
                .unwrap();
            let ground = eig.eigenvectors.column(idx_min);
            let dim = master.dim();
            let z: f64 = master.h0_diag.iter().map(|&e| (-beta * e).exp()).sum();
            let mut max_corr_err = 0.0f64;
            for i in 0..master.n {
                for j in (i + 1)..master.n {
                    let (mut quantum, mut thermal) = (0.0, 0.0);
                    for b in 0..dim {
                        let zi = if b >> i & 1 == 0 { 1.0 } else { -1.0 };
                        let zj = if b >> j & 1 == 0 { 1.0 } else { -1.0 };
                        quantum += ground[b] * ground[b] * zi * zj;
                        thermal += zi * zj * (-beta * master.h0_diag[b]).exp() / z;
                    }
                    max_corr_err = max_corr_err.max((quantum - thermal).abs());
                }
            }
            vec![
                IdentityCheck::new("hq ground energy", e_min.abs(), 0.0, 1e-10),
                IdentityCheck::new("hq correlation agreement", max_corr_err, 0.0, 1e-10),
            ]
        }
        SuiteKind::Cje => {
            let n = n.unwrap_or(4);
            if n > 8 {
                return Err(UsageError("cje suite runs N <= 8".into()));
            }
            let master = if lattice.is_some() {
                let legs = steps.clamp(2, 64);
                let ramp = (0..=legs).map(|k| beta * k as f64 / legs as f64).collect();
                MasterSystem::new(4, torus_h0(seed), UpdateRule::HeatBath, ramp)
                    .map_err(|e| UsageError(e.to_string()))?
            } else {
                random_master(n, beta, steps.clamp(2, 64), seed)
            };
            let (lhs, rhs) =
                classical_jarzynski(&master, 0.4).map_err(|e| UsageError(e.to_string()))?;
            vec![IdentityCheck::new("classical jarzynski", lhs, rhs, 1e-10)]
        }
        SuiteKind::Qja => {
            let n = n.unwrap_or(2);
            if n > 3 {
                return Err(UsageError("qja suite runs N <= 3".into()));
            }
            if lattice.is_some() {
                return Err(UsageError(
                    "the 2x2 torus has 4 spins; the qja suite is capped at N <= 3".into(),
                ));
            }
            let master = random_master(n, beta, 2, seed);
            let ancillas = 8;
            let report = qja_run(&master, ancillas, beta.max(0.1) / ancillas as f64, 0.6)
                .map_err(|e| UsageError(e.to_string()))?;
            let shifted: Vec<f64> = master.h0_diag.iter().map(|&e| e + report.shift).collect();
            let scale = report.p0[0] / (-report.beta_final * shifted[0]).exp();
            let mut max_rel = 0.0f64;
            for (s, &p0) in report.p0.iter().enumerate() {
                let expect = scale * (-report.beta_final * shifted[s]).exp();
                max_rel = max_rel.max((p0 - expect).abs() / expect);
            }
            vec![IdentityCheck::new(
                "qja gibbs proportionality",
                max_rel,
                0.0,
                1e-8,
            )]
        }
        SuiteKind::Gap => {
            let spec = random_instance(n.unwrap_or(3), gamma0, t, steps, seed, 0);
            let report = min_gap(&spec, 64, 0.1).map_err(|e| UsageError(e.to_string()))?;
            sink.json(
                &config,
                seed,
                &json!({
                    "delta_min": report.delta_min,
                    "t_at_min": report.t_at_min,
                    "t_adiabatic": report.t_adiabatic,
                    "degenerate": report.degenerate,
                }),
            )
            .expect("write output");
            return Ok(true);
        }
    };
    let all_pass = checks.iter().all(|c| c.pass);
    sink.json(&config, seed, &checks).expect("write output");
    Ok(all_pass)
}
