//! Werner-type families p|ψ⟩⟨ψ| + (1 − p) I/8 and the mixing thresholds
//! above which each entanglement criterion is violated.

use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::Direction;
use crate::error::{Error, Result};
use crate::mermin::{max_mermin_from, MerminSettings, MERMIN_LOCAL_BOUND};
use crate::optimize::{optimize_sphere, optimize_sphere_from, Mode, OptimizerConfig, SEPARABLE_BOUND};
use crate::quadrature::QuadratureConfig;
use crate::state::{dm_from_pure, ghz_state, mix, product_state, w_state, DensityMatrix};
use crate::work::TripartiteWork;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WernerFamily {
    #[serde(rename = "GHZ")]
    Ghz,
    #[serde(rename = "W")]
    W,
}

impl WernerFamily {
    pub const ALL: [WernerFamily; 2] = [WernerFamily::Ghz, WernerFamily::W];

    pub fn base_state(self) -> DensityMatrix {
        match self {
            WernerFamily::Ghz => dm_from_pure(&ghz_state()),
            WernerFamily::W => dm_from_pure(&w_state()),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            WernerFamily::Ghz => "GHZ",
            WernerFamily::W => "W",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            WernerFamily::Ghz => "p|GHZ><GHZ| + (1-p) I/8",
            WernerFamily::W => "p|W><W| + (1-p) I/8",
        }
    }
}

impl fmt::Display for WernerFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Criterion {
    Thermo3,
    ThermoSphere,
    Mermin,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [Criterion::Thermo3, Criterion::ThermoSphere, Criterion::Mermin];

    pub fn label(self) -> &'static str {
        match self {
            Criterion::Thermo3 => "THERMO3",
            Criterion::ThermoSphere => "THERMO_SPHERE",
            Criterion::Mermin => "MERMIN",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Published threshold for a cell, if any.
pub fn paper_value(family: WernerFamily, criterion: Criterion) -> f64 {
    use Criterion::*;
    use WernerFamily::*;
    match (family, criterion) {
        (Ghz, Thermo3) => 0.6521,
        (W, Thermo3) => 0.6981,
        (Ghz, Mermin) => 0.5,
        (W, Mermin) => 0.6566,
        (Ghz, ThermoSphere) => 0.8392,
        (W, ThermoSphere) => 0.9057,
    }
}

/// Mixing probability above which the GHZ-Werner state is known to be
/// distillable.
pub const GHZ_DISTILLABLE_P: f64 = 0.3226;

pub fn werner_state(family: WernerFamily, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain {
            value: p,
            domain: "mixing probability in [0, 1]",
        });
    }
    let noise = DensityMatrix::maximally_mixed(3)?;
    mix(&[(p, &family.base_state()), (1.0 - p, &noise)])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConfig {
    /// Final bracket width in p.
    pub tol: f64,
    /// ẑ search for the three-axis criterion.
    pub optimizer: OptimizerConfig,
    /// ẑ search for the sphere-averaged criterion.
    pub sphere_optimizer: OptimizerConfig,
    pub mermin: OptimizerConfig,
    pub quadrature: QuadratureConfig,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        Self {
            tol: 5e-4,
            optimizer: OptimizerConfig::default(),
            sphere_optimizer: OptimizerConfig {
                coarse_theta: 12,
                coarse_phi: 24,
                n_starts: 3,
                simplex_tol: 1e-10,
                max_iters: 300,
                ..OptimizerConfig::default()
            },
            mermin: OptimizerConfig::mermin(),
            quadrature: QuadratureConfig::default(),
        }
    }
}

impl ThresholdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 0.5) {
            return Err(Error::Argument(format!("threshold tolerance {} not in (0, 0.5)", self.tol)));
        }
        self.optimizer.validate()?;
        self.sphere_optimizer.validate()?;
        self.quadrature.validate()
    }
}

/// Largest sphere-averaged work reachable by a product state, with the
/// rule used to obtain it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereBound {
    pub value: f64,
    pub coarse: f64,
    pub derivation: &'static str,
}

const SPHERE_BOUND_DERIVATION: &str =
    "max over the extractor's pure product factor of the sphere-averaged work, others along z";

fn compute_sphere_bound(quad: &QuadratureConfig) -> Result<SphereBound> {
    quad.validate()?;
    let z = Direction::z_axis();
    let search = OptimizerConfig {
        coarse_theta: 8,
        coarse_phi: 8,
        n_starts: 1,
        max_iters: 60,
        simplex_tol: 1e-10,
        ..OptimizerConfig::default()
    };
    let avg = |c: &Direction, q: &QuadratureConfig| -> f64 {
        let rho = dm_from_pure(&product_state(&[z, z, *c]).expect("three directions"));
        TripartiteWork::new(&rho)
            .expect("three qubits")
            .sphere_average(&z, q.sphere_theta, q.sphere_phi)
    };
    let opt = optimize_sphere(|c| avg(c, quad), Mode::Max, &search)?;
    let est = crate::quadrature::QuadratureEstimate::new(
        opt.value,
        avg(&opt.direction(), &quad.doubled()),
        quad.tol,
    )
    .into_result()?;
    Ok(SphereBound {
        value: est.value,
        coarse: est.coarse,
        derivation: SPHERE_BOUND_DERIVATION,
    })
}

/// Separable bound for the sphere-averaged criterion. The default
/// quadrature result is computed once per process.
pub fn thermo_sphere_bound(quad: &QuadratureConfig) -> Result<SphereBound> {
    static CACHE: OnceLock<SphereBound> = OnceLock::new();
    if *quad != QuadratureConfig::default() {
        return compute_sphere_bound(quad);
    }
    if let Some(b) = CACHE.get() {
        return Ok(*b);
    }
    let b = compute_sphere_bound(quad)?;
    Ok(*CACHE.get_or_init(|| b))
}

/// Optimizer state carried between neighbouring values of p.
#[derive(Debug, Clone, Copy)]
enum Hint {
    Axis(Direction),
    Mermin(MerminSettings),
}

struct Margin {
    value: f64,
    hint: Hint,
}

fn margin(
    family: WernerFamily,
    p: f64,
    criterion: Criterion,
    cfg: &ThresholdConfig,
    hint: Option<Hint>,
) -> Result<Margin> {
    let rho = werner_state(family, p)?;
    match criterion {
        Criterion::Thermo3 => {
            let ev = TripartiteWork::new(&rho)?;
            let hints: Vec<Direction> = match hint {
                Some(Hint::Axis(d)) => vec![d],
                _ => vec![],
            };
            let opt = optimize_sphere_from(
                |z| ev.work_w(z, &cfg.optimizer).w_max,
                Mode::Max,
                &cfg.optimizer,
                &hints,
            )?;
            Ok(Margin {
                value: opt.value - SEPARABLE_BOUND,
                hint: Hint::Axis(opt.direction()),
            })
        }
        Criterion::ThermoSphere => {
            let bound = thermo_sphere_bound(&cfg.quadrature)?;
            let ev = TripartiteWork::new(&rho)?;
            let hints: Vec<Direction> = match hint {
                Some(Hint::Axis(d)) => vec![d],
                _ => vec![],
            };
            let q = &cfg.quadrature;
            let opt = optimize_sphere_from(
                |z| ev.sphere_average(z, q.sphere_theta, q.sphere_phi),
                Mode::Max,
                &cfg.sphere_optimizer,
                &hints,
            )?;
            let est = ev.checked_sphere_average(&opt.direction(), q).into_result()?;
            Ok(Margin {
                value: est.value - bound.value,
                hint: Hint::Axis(opt.direction()),
            })
        }
        Criterion::Mermin => {
            let hints: Vec<MerminSettings> = match hint {
                Some(Hint::Mermin(s)) => vec![s],
                _ => vec![],
            };
            let opt = max_mermin_from(&rho, &cfg.mermin, &hints)?;
            Ok(Margin {
                value: opt.value - MERMIN_LOCAL_BOUND,
                hint: Hint::Mermin(opt.settings),
            })
        }
    }
}

/// Signed distance of the criterion from its separable bound at mixing
/// probability `p`; positive means the criterion is violated.
pub fn violation_objective(
    family: WernerFamily,
    p: f64,
    criterion: Criterion,
    cfg: &ThresholdConfig,
) -> Result<f64> {
    cfg.validate()?;
    Ok(margin(family, p, criterion, cfg, None)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Computed,
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub family: WernerFamily,
    pub criterion: Criterion,
    pub p_star: f64,
    pub bracket: (f64, f64),
    pub tol: f64,
    pub objective_at_star: f64,
    pub paper_value: Option<f64>,
    pub source: Source,
    pub n_objective_calls: usize,
}

const MONOTONE_NOISE: f64 = 1e-6;

/// Bisects on p for the point where `criterion` starts to be violated.
pub fn find_threshold(
    family: WernerFamily,
    criterion: Criterion,
    cfg: &ThresholdConfig,
) -> Result<ThresholdResult> {
    cfg.validate()?;
    let mut calls = 0usize;
    let mut eval = |p: f64, hint: Option<Hint>| -> Result<Margin> {
        calls += 1;
        margin(family, p, criterion, cfg, hint)
    };

    let m0 = eval(0.0, None)?;
    let m1 = eval(1.0, None)?;
    if !(m0.value < 0.0 && m1.value > 0.0) {
        return Err(Error::NoThreshold(format!(
            "{family}/{criterion}: margin {} at p = 0 and {} at p = 1",
            m0.value, m1.value
        )));
    }

    // spot check of monotonicity, reused to narrow the starting bracket
    let mut samples = vec![(0.0, m0.value)];
    let mut hint = Some(m1.hint);
    for k in 1..=5 {
        let p = k as f64 / 6.0;
        let m = eval(p, hint)?;
        hint = Some(m.hint);
        samples.push((p, m.value));
    }
    samples.push((1.0, m1.value));
    for w in samples.windows(2) {
        if w[1].1 < w[0].1 - MONOTONE_NOISE {
            return Err(Error::NonMonotone(format!(
                "{family}/{criterion}: margin {} at p = {} but {} at p = {}",
                w[0].1, w[0].0, w[1].1, w[1].0
            )));
        }
    }
    let start = samples
        .windows(2)
        .find(|w| w[0].1 <= 0.0 && w[1].1 > 0.0)
        .map(|w| (w[0], w[1]))
        .expect("sign change between the endpoints");

    let mut bisect = |(mut lo, mut hi): ((f64, f64), (f64, f64)), warm: bool| -> Result<((f64, f64), (f64, f64))> {
        let mut hint = None;
        while hi.0 - lo.0 > cfg.tol {
            let mid = 0.5 * (lo.0 + hi.0);
            let m = eval(mid, if warm { hint } else { None })?;
            hint = Some(m.hint);
            if m.value > 0.0 {
                hi = (mid, m.value);
            } else {
                lo = (mid, m.value);
            }
        }
        Ok((lo, hi))
    };

    let (mut lo, mut hi) = bisect(start, true)?;
    // cold re-check of the warm-started bracket
    let cold_lo = margin(family, lo.0, criterion, cfg, None)?.value;
    let cold_hi = margin(family, hi.0, criterion, cfg, None)?.value;
    if cold_lo > 0.0 || cold_hi <= 0.0 {
        (lo, hi) = bisect(start, false)?;
    } else {
        lo.1 = cold_lo;
        hi.1 = cold_hi;
    }

    let span = hi.1 - lo.1;
    let mut p_star = if span > 0.0 {
        lo.0 + (hi.0 - lo.0) * (-lo.1 / span)
    } else {
        hi.0
    };
    if !(p_star > lo.0 && p_star <= hi.0) {
        p_star = hi.0;
    }
    let at_star = margin(family, p_star, criterion, cfg, None)?.value;
    Ok(ThresholdResult {
        family,
        criterion,
        p_star,
        bracket: (lo.0, hi.0),
        tol: cfg.tol,
        objective_at_star: at_star,
        paper_value: Some(paper_value(family, criterion)),
        source: Source::Computed,
        n_objective_calls: calls + 3,
    })
}

/// One row of the threshold comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub family: String,
    pub criterion: String,
    pub p_star: Option<f64>,
    pub bracket_lo: Option<f64>,
    pub bracket_hi: Option<f64>,
    pub paper_value: Option<f64>,
    pub abs_error: Option<f64>,
    pub source: Source,
}

impl From<&ThresholdResult> for TableRow {
    fn from(r: &ThresholdResult) -> Self {
        TableRow {
            family: r.family.label().to_string(),
            criterion: r.criterion.label().to_string(),
            p_star: Some(r.p_star),
            bracket_lo: Some(r.bracket.0),
            bracket_hi: Some(r.bracket.1),
            paper_value: r.paper_value,
            abs_error: r.paper_value.map(|v| (r.p_star - v).abs()),
            source: r.source,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableConfig {
    pub threshold: ThresholdConfig,
    /// Also run the two sphere-averaged cells (slow).
    pub include_sphere: bool,
}

impl Default for TableConfig {
    fn default() -> Self {
        Self {
            threshold: ThresholdConfig::default(),
            include_sphere: true,
        }
    }
}

/// Cells of the comparison table in output order.
pub fn table_cells(include_sphere: bool) -> Vec<(WernerFamily, Criterion)> {
    let mut cells = Vec::new();
    for c in [Criterion::Thermo3, Criterion::Mermin] {
        for f in WernerFamily::ALL {
            cells.push((f, c));
        }
    }
    if include_sphere {
        for f in WernerFamily::ALL {
            cells.push((f, Criterion::ThermoSphere));
        }
    }
    cells
}

pub fn external_row() -> TableRow {
    TableRow {
        family: WernerFamily::Ghz.label().to_string(),
        criterion: "DISTILLABLE".to_string(),
        p_star: None,
        bracket_lo: None,
        bracket_hi: None,
        paper_value: Some(GHZ_DISTILLABLE_P),
        abs_error: None,
        source: Source::External,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub rows: Vec<TableRow>,
    pub results: Vec<ThresholdResult>,
}

impl Table {
    /// Largest |computed − published| over the computed rows.
    pub fn max_abs_error(&self) -> f64 {
        self.rows.iter().filter_map(|r| r.abs_error).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,criterion,p_star,bracket_lo,bracket_hi,paper_value,abs_error,source\n");
        let opt = |v: Option<f64>| v.map(format_sig9).unwrap_or_default();
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.family,
                r.criterion,
                opt(r.p_star),
                opt(r.bracket_lo),
                opt(r.bracket_hi),
                opt(r.paper_value),
                opt(r.abs_error),
                match r.source {
                    Source::Computed => "computed",
                    Source::External => "external",
                }
            ));
        }
        out
    }
}

/// Thresholds for every table cell (in parallel) plus the external
/// reference row.
pub fn table1(cfg: &TableConfig) -> Result<Table> {
    cfg.threshold.validate()?;
    let results = table_cells(cfg.include_sphere)
        .par_iter()
        .map(|&(f, c)| find_threshold(f, c, &cfg.threshold))
        .collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<TableRow> = results.iter().map(TableRow::from).collect();
    rows.push(external_row());
    Ok(Table { rows, results })
}

/// Nine significant digits with a '.' decimal point.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..9).contains(&exp) {
        format!("{:.*}", (8 - exp).max(0) as usize, x)
    } else {
        format!("{:.8e}", x)
    }
}
