use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use triwork::optimize::coarse_grid;
use triwork::{
    classify_state, find_threshold, format_sig9, optimize_sphere, simulate_bipartite,
    simulate_tripartite, table1, work_W, xi_capital, xi_capital_sphere, Criterion, Direction,
    EntropyEstimator, Mode, OptimizerConfig, QuadratureConfig, QuadratureEstimate,
    SimulationConfig, Site, SphereOptimum, TableConfig, ThresholdConfig, TripartiteWork,
    WernerFamily,
};

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::input::{load_state, parse_direction, parse_grid};

/// Largest |computed − published| tolerated by `table1`.
pub const TABLE_TOLERANCE: f64 = 5e-3;

/// What a command produced: a JSON payload, its text rendering, and an
/// optional failure to report after printing.
pub struct Outcome {
    pub results: Value,
    pub text: String,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok<T: Serialize>(results: &T, text: String) -> CliResult<Self> {
        Ok(Self {
            results: to_value(results)?,
            text,
            failure: None,
        })
    }
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::Io(format!("serializing output: {e}")))
}

pub fn run(command: &Command, degrees: bool) -> CliResult<Outcome> {
    match command {
        Command::BipartiteBound(a) => bipartite_bound(a),
        Command::Work(a) => work(a, degrees),
        Command::Scan(a) => scan(a),
        Command::Threshold(a) => threshold(a),
        Command::Table1(a) => table(a),
        Command::Simulate(a) => simulate(a, degrees),
        Command::Classify(a) => classify(a),
    }
}

#[derive(Serialize)]
struct BoundReport {
    quantity: &'static str,
    value: f64,
    coarse: f64,
    abs_diff: f64,
    tol: f64,
    converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    normal: Option<Direction>,
    quadrature: QuadratureConfig,
}

fn bipartite_bound(a: &BipartiteBoundArgs) -> CliResult<Outcome> {
    let rho = load_state(&a.state, 2)?;
    let mut quad = QuadratureConfig::default();
    if let Some(n) = a.resolution {
        if a.sphere {
            quad.sphere_theta = n;
            quad.sphere_phi = 2 * n;
        } else {
            quad.circle_nodes = n;
        }
    }
    let quantity = if a.sphere { "Xi_BS" } else { "Xi" };
    let computed = if a.sphere {
        xi_capital_sphere(&rho, &quad).map(|e| (e, None))
    } else {
        xi_capital(&rho, &quad).map(|g| (g.estimate, Some(g.normal)))
    };
    let (estimate, normal, failure) = match computed {
        Ok((e, n)) => (e, n, None),
        Err(triwork::Error::Accuracy { coarse, fine, tol }) => (
            QuadratureEstimate::new(coarse, fine, tol),
            None,
            Some(CliError::Accuracy(format!(
                "{quantity} not converged at this resolution: |{fine} - {coarse}| > {tol:e}"
            ))),
        ),
        Err(e) => return Err(e.into()),
    };
    let report = BoundReport {
        quantity,
        value: estimate.value,
        coarse: estimate.coarse,
        abs_diff: estimate.abs_diff,
        tol: estimate.tol,
        converged: estimate.converged(),
        normal,
        quadrature: quad,
    };
    let mut text = format!(
        "{quantity} = {:.6}\n  base resolution {:.6}, |diff| = {:.2e} (tol {:.0e}) {}\n",
        report.value,
        report.coarse,
        report.abs_diff,
        report.tol,
        if report.converged { "converged" } else { "NOT CONVERGED" }
    );
    if let Some(n) = normal {
        text.push_str(&format!("  circle normal theta = {:.4}, phi = {:.4}\n", n.theta(), n.phi()));
    }
    Ok(Outcome {
        results: to_value(&report)?,
        text,
        failure,
    })
}

fn work(a: &WorkArgs, degrees: bool) -> CliResult<Outcome> {
    let rho = load_state(&a.state, 3)?;
    let z = parse_direction(&a.z, degrees)?;
    let r = work_W(&rho, &z, &OptimizerConfig::default())?;
    let text = format!(
        "z = ({:.4}, {:.4})\n  w_x = {:.6}  w_y = {:.6}  w_z = {:.6}\n  W_phi = {:.6} at phi = {:.4}\n  W = {:.6}\n",
        r.z_direction.theta(),
        r.z_direction.phi(),
        r.per_axis_work.x,
        r.per_axis_work.y,
        r.per_axis_work.z,
        r.w_phi,
        r.argmax_phi,
        r.w_max
    );
    Outcome::ok(&r, text)
}

#[derive(Serialize)]
struct ScanReport {
    objective: ObjectiveArg,
    #[serde(flatten)]
    optimum: SphereOptimum,
    #[serde(skip_serializing_if = "Option::is_none")]
    csv: Option<String>,
}

fn scan(a: &ScanArgs) -> CliResult<Outcome> {
    let rho = load_state(&a.state, 3)?;
    let (coarse_theta, coarse_phi) = parse_grid(&a.grid)?;
    let cfg = OptimizerConfig {
        coarse_theta,
        coarse_phi,
        ..OptimizerConfig::default()
    };
    cfg.validate().map_err(|e| CliError::Input(e.to_string()))?;
    let ev = TripartiteWork::new(&rho)?;
    let objective = |d: &Direction| match a.objective {
        ObjectiveArg::Coupled => ev.coupled(d),
        ObjectiveArg::FrameMax => ev.work_w(d, &cfg).w_max,
    };
    let mode = match a.mode {
        ModeArg::Max => Mode::Max,
        ModeArg::Min => Mode::Min,
    };
    // fail on an unwritable path before the search
    let csv_file = a.out.as_deref().map(create).transpose()?;
    let optimum = optimize_sphere(objective, mode, &cfg)?;
    if let (Some(file), Some(path)) = (csv_file, &a.out) {
        let rows: Vec<(f64, f64, f64)> = coarse_grid(&cfg)
            .par_iter()
            .map(|&(t, p)| (t, p, objective(&Direction::new(t, p))))
            .collect();
        write_grid(file, &rows).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let report = ScanReport {
        objective: a.objective,
        optimum,
        csv: a.out.as_ref().map(|p| p.display().to_string()),
    };
    let text = format!(
        "{} W = {:.6} at theta = {:.4}, phi = {:.4} ({} evaluations{})\n",
        match mode {
            Mode::Max => "max",
            Mode::Min => "min",
        },
        optimum.value,
        optimum.theta,
        optimum.phi,
        optimum.n_evaluations,
        if optimum.converged { "" } else { ", not converged" }
    );
    Outcome::ok(&report, text)
}

fn create(path: &Path) -> CliResult<File> {
    File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_grid(file: File, rows: &[(f64, f64, f64)]) -> std::io::Result<()> {
    let mut out = BufWriter::new(file);
    writeln!(out, "theta,phi,W")?;
    for &(t, p, w) in rows {
        writeln!(out, "{},{},{}", format_sig9(t), format_sig9(p), format_sig9(w))?;
    }
    out.flush()
}

fn family(f: FamilyArg) -> WernerFamily {
    match f {
        FamilyArg::GhzWerner => WernerFamily::Ghz,
        FamilyArg::WWerner => WernerFamily::W,
    }
}

fn criterion(c: CriterionArg) -> Criterion {
    match c {
        CriterionArg::Thermo3 => Criterion::Thermo3,
        CriterionArg::ThermoSphere => Criterion::ThermoSphere,
        CriterionArg::Mermin => Criterion::Mermin,
    }
}

fn threshold_config(tol: f64) -> CliResult<ThresholdConfig> {
    let cfg = ThresholdConfig {
        tol,
        ..ThresholdConfig::default()
    };
    cfg.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(cfg)
}

fn threshold(a: &ThresholdArgs) -> CliResult<Outcome> {
    let cfg = threshold_config(a.tol)?;
    let r = find_threshold(family(a.family), criterion(a.criterion), &cfg)?;
    let mut text = format!(
        "{} / {}: p* = {:.5} in [{:.5}, {:.5}]\n",
        r.family.label(),
        r.criterion.label(),
        r.p_star,
        r.bracket.0,
        r.bracket.1
    );
    if let Some(v) = r.paper_value {
        text.push_str(&format!("  published {v:.4}, |diff| = {:.5}\n", (r.p_star - v).abs()));
    }
    Outcome::ok(&r, text)
}

fn table(a: &Table1Args) -> CliResult<Outcome> {
    let cfg = TableConfig {
        threshold: threshold_config(a.tol)?,
        include_sphere: !a.no_sphere,
    };
    let t = table1(&cfg)?;
    let worst = t.max_abs_error();
    let text = if a.csv {
        t.to_csv()
    } else {
        let mut s = format!(
            "{:<8} {:<14} {:>9} {:>9} {:>9}\n",
            "family", "criterion", "p*", "published", "|diff|"
        );
        let cell = |v: Option<f64>, d: usize| v.map(|x| format!("{x:.d$}")).unwrap_or_else(|| "-".into());
        for r in &t.rows {
            s.push_str(&format!(
                "{:<8} {:<14} {:>9} {:>9} {:>9}\n",
                r.family,
                r.criterion,
                cell(r.p_star, 5),
                cell(r.paper_value, 4),
                cell(r.abs_error, 5)
            ));
        }
        s
    };
    let failure = (worst > TABLE_TOLERANCE).then(|| {
        CliError::Accuracy(format!(
            "largest deviation from the published table is {worst:.5} (> {TABLE_TOLERANCE})"
        ))
    });
    #[derive(Serialize)]
    struct TableOut<'a> {
        rows: &'a [triwork::TableRow],
        max_abs_error: f64,
    }
    Ok(Outcome {
        results: to_value(&TableOut {
            rows: &t.rows,
            max_abs_error: worst,
        })?,
        text,
        failure,
    })
}

fn site(s: SiteArg) -> Site {
    match s {
        SiteArg::A => Site::A,
        SiteArg::B => Site::B,
        SiteArg::C => Site::C,
    }
}

fn simulate(a: &SimulateArgs, degrees: bool) -> CliResult<Outcome> {
    let z = parse_direction(&a.z, degrees)?;
    let u = parse_direction(&a.u, degrees)?;
    let cfg = SimulationConfig {
        shots: a.shots,
        seed: a.seed,
        estimator: match a.estimator {
            EstimatorArg::PlugIn => EntropyEstimator::PlugIn,
            EstimatorArg::MillerMadow => EntropyEstimator::MillerMadow,
        },
        sequential_collapse: a.sequential,
        extractor: site(a.extractor),
        z_site: site(a.z_site),
    };
    let sim = match a.protocol {
        ProtocolArg::Tripartite => simulate_tripartite(&load_state(&a.state, 3)?, &z, &u, &cfg)?,
        ProtocolArg::Bipartite => simulate_bipartite(&load_state(&a.state, 2)?, &z, &u, &cfg)?,
    };
    if let Some(path) = &a.transcript {
        let mut out = BufWriter::new(create(path)?);
        sim.write_transcript(&mut out)
            .and_then(|_| out.flush().map_err(Into::into))
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let e = &sim.estimate;
    let mut text = format!(
        "{} shots: empirical {:.6}, analytic {:.6}, |diff| = {:.2e}\n",
        e.shots, e.empirical_work, e.analytic_work, e.abs_error
    );
    for (k, n) in &e.branch_counts {
        text.push_str(&format!("  {k}: {n}\n"));
    }
    Outcome::ok(e, text)
}

fn classify(a: &ClassifyArgs) -> CliResult<Outcome> {
    let rho = load_state(&a.state, 3)?;
    let c = classify_state(&rho, &OptimizerConfig::default())?;
    let text = format!(
        "{}\n  max W = {:.6}, min W = {:.6}\n",
        c.class, c.max.value, c.min.value
    );
    Outcome::ok(&c, text)
}
