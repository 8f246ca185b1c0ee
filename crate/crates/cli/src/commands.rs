use std::collections::BTreeMap;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use mixcens::estimators::{estimate, Endpoint};
use mixcens::nuisance::Bandwidth;
use mixcens::oracle::{self, OracleReport, Rule};
use mixcens::sensitivity::{delta_region, tipping_from_summaries, RegionPoint};
use mixcens::simulation::{generate_population, run_study, TABLE1_C1, TABLE1_C2};
use mixcens::stats::median;
use mixcens::{
    aggregate_seeds, cross_fit_nuisances, influence_matrix, load_dataset, split_folds, Col, Dataset, DgpParams,
    DiscretePopulation, Family, InfluenceMatrix, LearnerKind, LearnerSpec, PerNuisance, QuadratureSpec, SensitivityParams,
    SmoothingSpec, StudyConfig, StudyMode,
};

use crate::output::{csv_bytes, csv_preamble, emit, envelope, fmt, json_bytes};
use crate::CliError;

fn cfg_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn est_err(e: impl std::fmt::Display) -> CliError {
    CliError::Estimation(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Args, Serialize, Debug)]
pub struct OutputArgs {
    /// Output path, or `-` for standard output.
    #[arg(long, default_value = "-")]
    #[serde(skip)]
    pub out: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// File of `key = value` lines, one long flag per key; flags win.
    #[arg(long)]
    pub config: Option<String>,
}

impl OutputArgs {
    fn reject_table(&self) -> Result<(), CliError> {
        if self.format == Format::Table {
            return Err(CliError::Config("--format table is only available for oracle".into()));
        }
        Ok(())
    }
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct SensArgs {
    /// Risk ratio for both arms.
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub tau0: Option<f64>,
    #[arg(long)]
    pub tau1: Option<f64>,
    /// Informative share for both arms (point families).
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub delta0: Option<f64>,
    #[arg(long)]
    pub delta1: Option<f64>,
    /// Upper bound on the informative share, both arms.
    #[arg(long)]
    pub delta_u: Option<f64>,
    #[arg(long)]
    pub delta_u0: Option<f64>,
    #[arg(long)]
    pub delta_u1: Option<f64>,
    /// Lower bound on the informative share, both arms.
    #[arg(long)]
    pub delta_l: Option<f64>,
    #[arg(long)]
    pub delta_l0: Option<f64>,
    #[arg(long)]
    pub delta_l1: Option<f64>,
    /// Smoothing scale for the separable-effect bounds.
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
}

impl SensArgs {
    fn tau_given(&self) -> bool {
        self.tau.is_some() || (self.tau0.is_some() && self.tau1.is_some())
    }

    fn delta_given(&self) -> bool {
        self.delta.is_some() || (self.delta0.is_some() && self.delta1.is_some())
    }

    /// Resolve per-arm values and check that each family has what it needs.
    pub fn resolve(&self, families: &[Family]) -> Result<SensitivityParams, CliError> {
        for f in families {
            let needs_tau = matches!(f, Family::BoundedRisk | Family::PointAte);
            let needs_delta = matches!(f, Family::PointAte | Family::PointPsi1 | Family::PointPsi2);
            if needs_tau && !self.tau_given() {
                return Err(CliError::Config(format!("missing --tau for --set {}", f.name())));
            }
            if needs_delta && !self.delta_given() {
                return Err(CliError::Config(format!("missing --delta0/--delta1 (or --delta) for --set {}", f.name())));
            }
        }
        let d = SensitivityParams::default();
        let pick = |arm: Option<f64>, both: Option<f64>, dflt: f64| arm.or(both).unwrap_or(dflt);
        let p = SensitivityParams {
            tau0: pick(self.tau0, self.tau, d.tau0),
            tau1: pick(self.tau1, self.tau, d.tau1),
            delta0: pick(self.delta0, self.delta, d.delta0),
            delta1: pick(self.delta1, self.delta, d.delta1),
            delta_l0: pick(self.delta_l0, self.delta_l, d.delta_l0),
            delta_u0: pick(self.delta_u0, self.delta_u, d.delta_u0),
            delta_l1: pick(self.delta_l1, self.delta_l, d.delta_l1),
            delta_u1: pick(self.delta_u1, self.delta_u, d.delta_u1),
            epsilon: self.epsilon,
        };
        SmoothingSpec::new(p.epsilon).map_err(cfg_err)?;
        for f in families {
            f.validate(&p).map_err(|e| CliError::Config(format!("--set {}: {e}", f.name())))?;
        }
        Ok(p)
    }
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct LearnerArgs {
    #[arg(long, default_value = "logistic")]
    pub learner: LearnerKind,
    /// Fixed kernel bandwidth; Silverman's rule when absent.
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = mixcens::nuisance::EPS_CLIP)]
    pub eps_clip: f64,
}

impl LearnerArgs {
    fn spec(&self) -> Result<LearnerSpec, CliError> {
        let bandwidth = match self.bandwidth {
            Some(h) => Bandwidth::Fixed(h),
            None => Bandwidth::Silverman,
        };
        let spec = LearnerSpec { kind: self.learner, max_iter: self.max_iter, tol: self.tol, bandwidth, eps_clip: self.eps_clip };
        spec.validate().map_err(cfg_err)?;
        Ok(spec)
    }
}

#[derive(Args, Serialize, Debug, Clone)]
pub struct SeedArgs {
    /// Number of sample-splitting repetitions.
    #[arg(long, default_value_t = 11)]
    pub seeds: usize,
    /// First seed; repetitions use consecutive seeds from here.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub folds: usize,
}

impl SeedArgs {
    fn list(&self) -> Result<Vec<u64>, CliError> {
        if self.seeds == 0 {
            return Err(CliError::Config("--seeds must be at least 1".into()));
        }
        if self.folds < 2 {
            return Err(CliError::Config("--folds must be at least 2".into()));
        }
        Ok((0..self.seeds as u64).map(|i| self.seed + i).collect())
    }
}

fn parse_families(s: &str) -> Result<Vec<Family>, CliError> {
    let mut out = Vec::new();
    for name in s.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let f: Family = name.parse().map_err(cfg_err)?;
        if !out.contains(&f) {
            out.push(f);
        }
    }
    if out.is_empty() {
        return Err(CliError::Config("--set is empty".into()));
    }
    Ok(out)
}

fn parse_list(flag: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| CliError::Config(format!("--{flag}: cannot parse {t:?}"))))
        .collect()
}

fn load(path: &str) -> Result<Dataset, CliError> {
    let d = load_dataset(path).map_err(|e| CliError::Config(format!("{path}: {e}")))?;
    d.check_estimable().map_err(|e| CliError::Config(format!("{path}: {e}")))?;
    Ok(d)
}

fn fit_rows(d: &Dataset, seed: u64, folds: usize, spec: &LearnerSpec, smooth: SmoothingSpec) -> Result<InfluenceMatrix, CliError> {
    let f = split_folds(d.len(), folds, seed).map_err(cfg_err)?;
    let eta = cross_fit_nuisances(d, &f, spec).map_err(est_err)?;
    influence_matrix(d, &eta, smooth).map_err(est_err)
}

// bounds

#[derive(Args, Serialize, Debug)]
#[command(args_override_self = true)]
pub struct BoundsArgs {
    /// CSV with columns y, a, c and covariates.
    #[arg(long)]
    pub data: String,
    /// Comma-separated assumption sets.
    #[arg(long, default_value = "general")]
    pub set: String,
    #[arg(long, default_value_t = 0.05)]
    pub alpha_level: f64,
    #[command(flatten)]
    pub seeds: SeedArgs,
    #[command(flatten)]
    pub learner: LearnerArgs,
    #[command(flatten)]
    pub sens: SensArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct Resolved<'a, A: Serialize, P: Serialize> {
    args: &'a A,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<P>,
}

#[derive(Serialize)]
struct BoundsResult {
    n: usize,
    estimates: Vec<mixcens::SeedAggregate>,
}

fn check_level(alpha: f64) -> Result<(), CliError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CliError::Config(format!("--alpha-level must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

pub fn bounds(a: BoundsArgs) -> Result<(), CliError> {
    a.output.reject_table()?;
    check_level(a.alpha_level)?;
    let families = parse_families(&a.set)?;
    let p = a.sens.resolve(&families)?;
    let seeds = a.seeds.list()?;
    let spec = a.learner.spec()?;
    let d = load(&a.data)?;
    if a.seeds.folds > d.len() {
        return Err(CliError::Config(format!("--folds {} exceeds the {} rows", a.seeds.folds, d.len())));
    }
    let smooth = SmoothingSpec::new(p.epsilon).map_err(cfg_err)?;

    let per_seed: Vec<Vec<mixcens::BoundEstimate>> = seeds
        .par_iter()
        .map(|&s| {
            let m = fit_rows(&d, s, a.seeds.folds, &spec, smooth)?;
            families.iter().map(|&f| estimate(&m, f, &p, a.alpha_level).map_err(est_err)).collect()
        })
        .collect::<Result<_, CliError>>()?;
    let estimates = (0..families.len())
        .map(|j| {
            let col: Vec<_> = per_seed.iter().map(|r| r[j].clone()).collect();
            aggregate_seeds(&col).map_err(est_err)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let resolved = Resolved { args: &a, params: Some(p) };
    let bytes = match a.output.format {
        Format::Csv => {
            let mut rows = Vec::new();
            for agg in &estimates {
                let b = &agg.aggregate;
                let labels: &[&str] = if b.endpoints.len() == 1 { &["point"] } else { &["lower", "upper"] };
                for (lab, e) in labels.iter().zip(&b.endpoints) {
                    rows.push(endpoint_row(b.family.name(), lab, e, b.crossed));
                }
            }
            csv_bytes(
                csv_preamble("bounds", &resolved, &seeds)?,
                &["set", "endpoint", "estimate", "se", "ci_lower", "ci_upper", "crossed"],
                &rows,
            )?
        }
        _ => json_bytes(&envelope("bounds", &resolved, &seeds, &BoundsResult { n: d.len(), estimates }))?,
    };
    emit(&a.output.out, &bytes)
}

fn endpoint_row(set: &str, label: &str, e: &Endpoint, crossed: bool) -> Vec<String> {
    vec![set.into(), label.into(), fmt(e.estimate), fmt(e.se), fmt(e.ci_lower), fmt(e.ci_upper), crossed.to_string()]
}

// sensitivity

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Example {
    Running,
}

#[derive(Args, Serialize, Debug)]
#[command(args_override_self = true)]
pub struct SensitivityArgs {
    /// Estimate the summaries from a data file.
    #[arg(long, conflicts_with = "example", required_unless_present = "example")]
    pub data: Option<String>,
    /// Use the exact summaries of a built-in population.
    #[arg(long, value_enum)]
    pub example: Option<Example>,
    /// Comma-separated risk ratios (> 1) at which to trace the region.
    #[arg(long, default_value = "2,5,10")]
    pub tau: String,
    /// Spacing of the δ1 grid on [0, 1].
    #[arg(long, default_value_t = 0.01)]
    pub grid_step: f64,
    /// Also write the region grid as CSV to this path.
    #[arg(long)]
    #[serde(skip)]
    pub region: Option<String>,
    #[command(flatten)]
    pub seeds: SeedArgs,
    #[command(flatten)]
    pub learner: LearnerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct SensitivityResult {
    source: String,
    #[serde(flatten)]
    tipping: mixcens::TippingResult,
    region: Vec<RegionPoint>,
}

fn grid(step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(CliError::Config(format!("--grid-step must lie in (0, 1], got {step}")));
    }
    let k = (1.0 / step).round() as usize;
    Ok((0..=k).map(|i| (i as f64 * step).min(1.0)).collect())
}

pub fn sensitivity(a: SensitivityArgs) -> Result<(), CliError> {
    a.output.reject_table()?;
    let taus = parse_list("tau", &a.tau)?;
    if let Some(t) = taus.iter().find(|t| !(**t > 1.0 && t.is_finite())) {
        return Err(CliError::Config(format!("--tau values must exceed 1, got {t}")));
    }
    let g = grid(a.grid_step)?;
    let (source, seeds, naive, g0, g1) = match (&a.example, &a.data) {
        (Some(Example::Running), _) => {
            let r = oracle::population_bounds(&DiscretePopulation::running_example(), &SensitivityParams::default()).map_err(cfg_err)?;
            ("example:running".to_string(), Vec::new(), r.naive, r.grave_mu0, r.grave_mu1)
        }
        (None, Some(path)) => {
            let seeds = a.seeds.list()?;
            let spec = a.learner.spec()?;
            let d = load(path)?;
            let per: Vec<[f64; 3]> = seeds
                .par_iter()
                .map(|&s| {
                    let m = fit_rows(&d, s, a.seeds.folds, &spec, SmoothingSpec::default())?;
                    Ok([
                        m.column_mean(Col::Phi1_1) - m.column_mean(Col::Phi1_0),
                        m.column_mean(Col::Phi3_0),
                        m.column_mean(Col::Phi3_1),
                    ])
                })
                .collect::<Result<_, CliError>>()?;
            let med = |k: usize| median(&per.iter().map(|v| v[k]).collect::<Vec<_>>());
            (format!("data:{path}"), seeds, med(0), med(1), med(2))
        }
        (None, None) => return Err(CliError::Config("one of --data or --example is required".into())),
    };
    let tipping = tipping_from_summaries(naive, g0, g1, &taus).map_err(est_err)?;
    let mut region = Vec::new();
    for &t in &taus {
        region.extend(delta_region(t, naive, g0, g1, &g).map_err(est_err)?);
    }

    let resolved = Resolved::<_, ()> { args: &a, params: None };
    let region_csv = || -> Result<Vec<u8>, CliError> {
        let rows: Vec<Vec<String>> = region
            .iter()
            .map(|r| vec![fmt(r.tau), fmt(r.delta1), fmt(r.delta0_min), u8::from(r.feasible).to_string()])
            .collect();
        csv_bytes(csv_preamble("sensitivity", &resolved, &seeds)?, &["tau", "delta1", "delta0_min", "feasible"], &rows)
    };
    if let Some(path) = &a.region {
        emit(path, &region_csv()?)?;
    }
    let bytes = match a.output.format {
        Format::Csv => region_csv()?,
        _ => {
            let res = SensitivityResult { source, tipping, region: region.clone() };
            json_bytes(&envelope("sensitivity", &resolved, &seeds, &res))?
        }
    };
    emit(&a.output.out, &bytes)
}

// simulate

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    Perturb,
    Learner,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Constants {
    /// The preset used for the rate study.
    Table1,
    /// C1 = C2 = 1 for every nuisance.
    Unit,
}

#[derive(Args, Serialize, Debug)]
#[command(args_override_self = true)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub mode: SimMode,
    /// Perturbation rate exponent (perturb mode).
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = Constants::Table1)]
    pub constants: Constants,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Master seed; replication r uses stream r.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub folds: usize,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha_level: f64,
    #[arg(long, default_value_t = 2_000_000)]
    pub pop_size: usize,
    #[arg(long, default_value_t = 20_240_601)]
    pub pop_seed: u64,
    /// Quadrature nodes per piece for the truth.
    #[arg(long, default_value_t = 1024)]
    pub nodes: usize,
    /// Include every replication in the JSON output.
    #[arg(long)]
    pub keep_replications: bool,
    #[command(flatten)]
    pub learner: LearnerArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct SimulateResult {
    truth: [f64; 6],
    report: mixcens::StudyReport,
}

pub fn simulate(a: SimulateArgs) -> Result<(), CliError> {
    a.output.reject_table()?;
    let mode = match a.mode {
        SimMode::Perturb => {
            let Some(alpha) = a.alpha else {
                return Err(CliError::Config("missing --alpha for --mode perturb".into()));
            };
            let (c1, c2) = match a.constants {
                Constants::Table1 => (TABLE1_C1, TABLE1_C2),
                Constants::Unit => (PerNuisance::all(1.0), PerNuisance::all(1.0)),
            };
            StudyMode::Perturb { alpha, c1, c2 }
        }
        SimMode::Learner => StudyMode::Learner { spec: a.learner.spec()?, folds: a.folds },
    };
    let cfg = StudyConfig {
        n: a.n,
        reps: a.reps,
        mode,
        epsilon: a.epsilon,
        alpha_level: a.alpha_level,
        seed: a.seed,
        keep_replications: a.keep_replications,
    };
    cfg.validate().map_err(cfg_err)?;
    let dgp = DgpParams { n_pop: a.pop_size, seed: a.pop_seed, ..DgpParams::default() };
    dgp.validate().map_err(cfg_err)?;
    if a.n > a.pop_size {
        return Err(CliError::Config(format!("--n {} exceeds --pop-size {}", a.n, a.pop_size)));
    }
    let quad = QuadratureSpec { nodes: a.nodes, rule: Rule::GaussLegendre };
    let params = SensitivityParams { epsilon: a.epsilon, ..SensitivityParams::default() };
    let truth = oracle::population_truth_dgp(&dgp, &quad, &params).map_err(cfg_err)?;
    let pop = generate_population(&dgp).map_err(est_err)?;
    let report = run_study(&pop, &truth, &cfg).map_err(est_err)?;

    let seeds = [a.seed, a.pop_seed];
    let resolved = Resolved { args: &a, params: Some(&cfg) };
    let bytes = match a.output.format {
        Format::Csv => {
            let label = match &cfg.mode {
                StudyMode::Perturb { alpha, .. } => format!("perturb(alpha={alpha})"),
                StudyMode::Learner { spec, .. } => format!("learner({})", serde_json::to_value(spec.kind).map_err(cfg_err)?.as_str().unwrap_or("")),
            };
            let rows: Vec<Vec<String>> = report
                .summaries
                .iter()
                .map(|s| {
                    vec![s.name.clone(), label.clone(), fmt(s.truth), fmt(s.bias), fmt(s.rmse), fmt(s.coverage), fmt(s.mean_se)]
                })
                .collect();
            csv_bytes(
                csv_preamble("simulate", &resolved, &seeds)?,
                &["estimand", "mode", "truth", "bias", "rmse", "coverage", "mean_se"],
                &rows,
            )?
        }
        _ => json_bytes(&envelope("simulate", &resolved, &seeds, &SimulateResult { truth: truth.estimands(), report }))?,
    };
    emit(&a.output.out, &bytes)
}

// oracle

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dgp {
    Default,
}

#[derive(Args, Serialize, Debug)]
#[command(args_override_self = true)]
pub struct OracleArgs {
    #[arg(long, value_enum, conflicts_with = "dgp", required_unless_present = "dgp")]
    pub example: Option<Example>,
    /// The simulation design, integrated by quadrature.
    #[arg(long, value_enum)]
    pub dgp: Option<Dgp>,
    #[arg(long, default_value_t = 1024)]
    pub nodes: usize,
    #[command(flatten)]
    pub sens: SensArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct OracleResult {
    population: String,
    tipping_tau: Option<f64>,
    report: OracleReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimands: Option<BTreeMap<String, f64>>,
}

pub fn oracle(a: OracleArgs) -> Result<(), CliError> {
    // every family is evaluated, so only fill in what was not given
    let mut sens = a.sens.clone();
    if !sens.tau_given() {
        sens.tau = Some(sens.tau.unwrap_or(1.0));
    }
    if !sens.delta_given() {
        sens.delta = Some(sens.delta.unwrap_or(0.5));
    }
    let p = sens.resolve(&Family::ALL)?;
    let (population, report, estimands) = match (a.example, a.dgp) {
        (Some(Example::Running), _) => {
            let r = oracle::population_bounds(&DiscretePopulation::running_example(), &p).map_err(cfg_err)?;
            ("example:running".to_string(), r, None)
        }
        (None, Some(Dgp::Default)) => {
            let quad = QuadratureSpec { nodes: a.nodes, rule: Rule::GaussLegendre };
            let t = oracle::population_truth_dgp(&DgpParams::default(), &quad, &p).map_err(cfg_err)?;
            let names = mixcens::simulation::ESTIMANDS;
            let est = names.iter().map(|s| s.to_string()).zip(t.estimands()).collect();
            ("dgp:default".to_string(), t.report, Some(est))
        }
        (None, None) => return Err(CliError::Config("one of --example or --dgp is required".into())),
    };
    let tipping_tau = mixcens::sensitivity::tipping_tau(report.naive, report.grave_mu0, report.grave_mu1).ok();
    let res = OracleResult { population, tipping_tau, report, estimands };
    let resolved = Resolved { args: &a, params: Some(p) };
    let bytes = match a.output.format {
        Format::Json => json_bytes(&envelope("oracle", &resolved, &[], &res))?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = oracle_rows(&res).into_iter().map(|(k, l, u)| vec![k, fmt(l), fmt(u)]).collect();
            csv_bytes(csv_preamble("oracle", &resolved, &[])?, &["quantity", "lower", "upper"], &rows)?
        }
        Format::Table => oracle_table(&res).into_bytes(),
    };
    emit(&a.output.out, &bytes)
}

fn oracle_rows(res: &OracleResult) -> Vec<(String, f64, f64)> {
    let r = &res.report;
    let mut rows = vec![
        ("naive".to_string(), r.naive, r.naive),
        ("psi0".into(), r.psi0, r.psi0),
        ("psi1".into(), r.psi1, r.psi1),
        ("psi2".into(), r.psi2, r.psi2),
        ("grave_mu0".into(), r.grave_mu0, r.grave_mu0),
        ("grave_mu1".into(), r.grave_mu1, r.grave_mu1),
    ];
    if let Some(t) = res.tipping_tau {
        rows.push(("tipping_tau".into(), t, t));
    }
    for (k, v) in &r.bounds {
        rows.push((format!("bounds:{k}"), v[0], v[1]));
    }
    rows.push(("bounds:psi2-exact".into(), r.psi2_exact[0], r.psi2_exact[1]));
    if let Some(e) = &res.estimands {
        for (k, v) in e {
            rows.push((format!("estimand:{k}"), *v, *v));
        }
    }
    rows
}

fn oracle_table(res: &OracleResult) -> String {
    let mut s = format!("mixcens {} oracle ({})\n", mixcens::VERSION, res.population);
    for (k, l, u) in oracle_rows(res) {
        if l == u {
            s += &format!("  {k:<32} {l:>10.4}\n");
        } else {
            s += &format!("  {k:<32} [{l:>8.4}, {u:>8.4}]\n");
        }
    }
    s
}
