//! Simulation design: a finite population drawn from the piecewise-expit
//! censoring model, repeated sampling, and bias/RMSE/coverage summaries
//! for the six study estimands.

use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{split_folds, Dataset, Observation};
use crate::error::{invalid, Error, Result};
use crate::estimators::{Coefs, Family, SensitivityParams};
use crate::influence::{influence_matrix_obs, Col, SmoothingSpec};
use crate::nuisance::perturb::perturb_with;
use crate::nuisance::{cross_fit_nuisances, Eta, LearnerSpec, NuisanceValues, PerNuisance, PerturbationSpec, EPS_CLIP};
use crate::oracle::{Atom, DgpTruth};
use crate::stats::{expit, mean, z_crit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DgpParams {
    pub beta0: f64,
    pub beta1: f64,
    pub tau0: f64,
    pub tau1: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub n_pop: usize,
    pub seed: u64,
}

impl Default for DgpParams {
    fn default() -> Self {
        DgpParams { beta0: 1.0, beta1: 1.0, tau0: 0.5, tau1: 0.5, delta0: 0.5, delta1: 0.5, n_pop: 2_000_000, seed: 20_240_601 }
    }
}

impl DgpParams {
    pub fn validate(&self) -> Result<()> {
        for (name, d) in [("delta0", self.delta0), ("delta1", self.delta1)] {
            if !(0.0..1.0).contains(&d) {
                return invalid(format!("{name} = {d} outside [0, 1)"));
            }
        }
        if !(self.tau0 > 0.0 && self.tau1 > 0.0) {
            return invalid("tau must be positive");
        }
        if self.n_pop == 0 {
            return invalid("population size must be positive");
        }
        Ok(())
    }

    pub fn e(&self, x: f64) -> f64 {
        expit(x)
    }

    /// Composite censoring probability π_C(a).
    pub fn pi_c(&self, a: u8, x: f64) -> f64 {
        let z = match (a, x) {
            (1, x) if x < 0.0 => x,
            (1, x) if x < 1.0 => 0.8 * x,
            (1, x) => 0.2 + 0.6 * x,
            (_, x) if x < 0.0 => 0.6 * x,
            (_, x) if x < 1.0 => 0.5 * x,
            (_, x) => 0.1 + 0.4 * x,
        };
        expit(z)
    }

    fn delta(&self, a: u8) -> f64 {
        if a == 1 { self.delta1 } else { self.delta0 }
    }

    fn tau(&self, a: u8) -> f64 {
        if a == 1 { self.tau1 } else { self.tau0 }
    }

    /// P(U_I(a) = 1 | x) = δ_a π_C(a).
    pub fn pi_i(&self, a: u8, x: f64) -> f64 {
        self.delta(a) * self.pi_c(a, x)
    }

    /// P(U_NI(a) = 1 | x), chosen so the composite equals π_C(a).
    pub fn pi_ni(&self, a: u8, x: f64) -> f64 {
        let p = self.pi_c(a, x);
        let d = self.delta(a);
        p * (1.0 - d) / (1.0 - d * p)
    }

    /// Outcome regression among units without informative censoring.
    pub fn mu(&self, a: u8, x: f64) -> f64 {
        let b = if a == 1 { self.beta1 } else { self.beta0 };
        let t = self.tau(a);
        let m = expit(b * x);
        if t <= 1.0 { m } else { m / t }
    }

    /// Outcome regression among informatively censored units; μ*/μ = τ.
    pub fn mu_star(&self, a: u8, x: f64) -> f64 {
        self.tau(a) * self.mu(a, x)
    }

    pub fn true_eta(&self, x: f64) -> Eta {
        Eta { e: self.e(x), pi0: self.pi_c(0, x), pi1: self.pi_c(1, x), mu0: self.mu(0, x), mu1: self.mu(1, x) }
    }

    pub(crate) fn atom(&self, x: f64, w: f64) -> Atom {
        let comp = |a: u8| {
            let (s, n) = (self.pi_i(a, x), self.pi_ni(a, x));
            s + n - s * n
        };
        Atom {
            w,
            e: self.e(x),
            pi_star: [self.pi_i(0, x), self.pi_i(1, x)],
            pi: [comp(0), comp(1)],
            mu: [self.mu(0, x), self.mu(1, x)],
            mu_star: [self.mu_star(0, x), self.mu_star(1, x)],
        }
    }
}

/// Finite population with observed and latent columns.
#[derive(Debug, Clone)]
pub struct Population {
    pub params: DgpParams,
    pub x: Vec<f64>,
    pub a: Vec<u8>,
    pub c: Vec<u8>,
    /// Latent outcome under the assigned treatment, observed only if c = 0.
    pub y: Vec<f64>,
    pub u_i: Vec<u8>,
    pub u_ni: Vec<u8>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn observation(&self, i: usize) -> Observation {
        Observation { x: vec![self.x[i]], a: self.a[i], c: self.c[i], y: (self.c[i] == 0).then_some(self.y[i]) }
    }
}

pub fn generate_population(params: &DgpParams) -> Result<Population> {
    params.validate()?;
    let n = params.n_pop;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut pop = Population {
        params: *params,
        x: Vec::with_capacity(n),
        a: Vec::with_capacity(n),
        c: Vec::with_capacity(n),
        y: Vec::with_capacity(n),
        u_i: Vec::with_capacity(n),
        u_ni: Vec::with_capacity(n),
    };
    for _ in 0..n {
        let x: f64 = rng.random_range(-3.0..3.0);
        let a = (rng.random::<f64>() < params.e(x)) as u8;
        let ui = (rng.random::<f64>() < params.pi_i(a, x)) as u8;
        let uni = (rng.random::<f64>() < params.pi_ni(a, x)) as u8;
        let m = if ui == 1 { params.mu_star(a, x) } else { params.mu(a, x) };
        let y = (rng.random::<f64>() < m) as u8 as f64;
        pop.x.push(x);
        pop.a.push(a);
        pop.c.push(ui | uni);
        pop.y.push(y);
        pop.u_i.push(ui);
        pop.u_ni.push(uni);
    }
    Ok(pop)
}

/// Uniform sample without replacement; latent columns are dropped.
pub fn sample_dataset(pop: &Population, n: usize, seed: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx = draw(pop, n, &mut rng)?;
    Dataset::new(idx.into_iter().map(|i| pop.observation(i)).collect(), vec!["x1".into()])
}

fn draw(pop: &Population, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    if n > pop.len() {
        return invalid(format!("sample size {n} exceeds population size {}", pop.len()));
    }
    let mut idx = sample_indices(rng, pop.len(), n).into_vec();
    idx.sort_unstable();
    Ok(idx)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum StudyMode {
    /// True nuisances perturbed on the logit scale at rate n^-alpha.
    Perturb { alpha: f64, c1: PerNuisance, c2: PerNuisance },
    /// Cross-fitted learners.
    Learner { spec: LearnerSpec, folds: usize },
}

/// Perturbation constants used for the rate study: propensity pushed up
/// with a wide spread, censoring pulled down, outcome pushed up.
pub const TABLE1_C1: PerNuisance = PerNuisance { e: 0.5, pi0: -1.75, pi1: -1.75, mu0: 1.6, mu1: 1.6 };
pub const TABLE1_C2: PerNuisance = PerNuisance { e: 12.4, pi0: 0.2, pi1: 0.2, mu0: 0.0, mu1: 0.0 };

impl StudyMode {
    pub fn perturb(alpha: f64) -> Self {
        StudyMode::Perturb { alpha, c1: TABLE1_C1, c2: TABLE1_C2 }
    }
}

pub const ESTIMANDS: [&str; 6] = ["naive", "omega1", "omega2", "omega3", "omega4", "omega5"];

pub fn estimand_coefs() -> [Coefs; 6] {
    [
        Family::Naive.coefs(&SensitivityParams::default())[0],
        Coefs::new().add(Col::Phi2_1, 1.0),
        Coefs::new().add(Col::Phi2_0, 1.0),
        Coefs::new().add(Col::Phi3_1, 1.0),
        Coefs::new().add(Col::Phi3_0, 1.0),
        Coefs::new().add(Col::PhiU2, 1.0),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub n: usize,
    pub reps: usize,
    pub mode: StudyMode,
    pub epsilon: f64,
    pub alpha_level: f64,
    pub seed: u64,
    pub keep_replications: bool,
}

impl StudyConfig {
    pub fn new(n: usize, reps: usize, mode: StudyMode, seed: u64) -> Self {
        StudyConfig { n, reps, mode, epsilon: 0.05, alpha_level: 0.05, seed, keep_replications: false }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return invalid("reps must be at least 1");
        }
        if self.n < 50 {
            return invalid(format!("n must be at least 50, got {}", self.n));
        }
        SmoothingSpec::new(self.epsilon)?;
        if !(self.alpha_level > 0.0 && self.alpha_level < 1.0) {
            return invalid("alpha level must lie in (0, 1)");
        }
        match &self.mode {
            StudyMode::Perturb { alpha, c1, c2 } => PerturbationSpec {
                alpha: *alpha,
                c1: *c1,
                c2: *c2,
                n: self.n,
                seed: 0,
                eps_clip: EPS_CLIP,
            }
            .validate(),
            StudyMode::Learner { spec, folds } => {
                spec.validate()?;
                if *folds < 2 {
                    return invalid("learner mode needs at least two folds");
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimandSummary {
    pub name: String,
    pub truth: f64,
    pub bias: f64,
    pub rmse: f64,
    pub coverage: f64,
    pub mean_se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replication {
    pub index: usize,
    pub estimates: [f64; 6],
    pub se: [f64; 6],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub config: StudyConfig,
    pub dgp: DgpParams,
    pub generator: String,
    pub summaries: Vec<EstimandSummary>,
    pub completed: usize,
    pub failed: usize,
    pub replications: Option<Vec<Replication>>,
}

fn replicate(pop: &Population, cfg: &StudyConfig, r: usize) -> Result<Replication> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(r as u64);
    let idx = draw(pop, cfg.n, &mut rng)?;
    let obs: Vec<Observation> = idx.iter().map(|&i| pop.observation(i)).collect();
    let eta = match &cfg.mode {
        StudyMode::Perturb { alpha, c1, c2 } => {
            let truth = NuisanceValues::from_fn(obs.len(), |i| pop.params.true_eta(obs[i].x[0]));
            let spec = PerturbationSpec { alpha: *alpha, c1: *c1, c2: *c2, n: cfg.n, seed: 0, eps_clip: EPS_CLIP };
            perturb_with(&truth, &spec, &mut rng)?
        }
        StudyMode::Learner { spec, folds } => {
            let d = Dataset::new(obs.clone(), vec!["x1".into()])?;
            let f = split_folds(d.len(), *folds, rng.random())?;
            cross_fit_nuisances(&d, &f, spec)?
        }
    };
    let m = influence_matrix_obs(&obs, &eta, SmoothingSpec { epsilon: cfg.epsilon })?;
    let mut estimates = [0.0; 6];
    let mut se = [0.0; 6];
    for (k, a) in estimand_coefs().iter().enumerate() {
        let v = m.combine(&a.0);
        estimates[k] = mean(&v);
        se[k] = crate::stats::sd(&v) / (v.len() as f64).sqrt();
        if !estimates[k].is_finite() || !se[k].is_finite() {
            return Err(Error::Estimation(format!("non-finite {} estimate", ESTIMANDS[k])));
        }
    }
    Ok(Replication { index: r, estimates, se })
}

/// Run `reps` replications in parallel. Each replication owns the stream
/// `r` of a generator seeded by `config.seed`, so the report does not
/// depend on scheduling.
pub fn run_study(pop: &Population, truth: &DgpTruth, cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    if cfg.n > pop.len() {
        return invalid("sample size exceeds population size");
    }
    if (truth.epsilon - cfg.epsilon).abs() > 0.0 {
        return invalid("truth was computed with a different smoothing epsilon");
    }
    let results: Vec<Result<Replication>> = (0..cfg.reps).into_par_iter().map(|r| replicate(pop, cfg, r)).collect();
    let mut ok = Vec::with_capacity(cfg.reps);
    let mut failed = 0;
    for r in results {
        match r {
            Ok(v) => ok.push(v),
            Err(_) => failed += 1,
        }
    }
    if failed * 100 > cfg.reps {
        return Err(Error::Estimation(format!("{failed} of {} replications failed", cfg.reps)));
    }
    if ok.is_empty() {
        return Err(Error::Estimation("no replication succeeded".into()));
    }
    let z = z_crit(cfg.alpha_level);
    let t = truth.estimands();
    let k = ok.len() as f64;
    let summaries = (0..6)
        .map(|j| {
            let err: Vec<f64> = ok.iter().map(|r| r.estimates[j] - t[j]).collect();
            let covered = ok.iter().filter(|r| (r.estimates[j] - t[j]).abs() <= z * r.se[j]).count();
            EstimandSummary {
                name: ESTIMANDS[j].to_string(),
                truth: t[j],
                bias: err.iter().sum::<f64>() / k,
                rmse: (err.iter().map(|e| e * e).sum::<f64>() / k).sqrt(),
                coverage: covered as f64 / k,
                mean_se: ok.iter().map(|r| r.se[j]).sum::<f64>() / k,
            }
        })
        .collect();
    Ok(StudyReport {
        config: cfg.clone(),
        dgp: pop.params,
        generator: crate::GENERATOR.to_string(),
        summaries,
        completed: ok.len(),
        failed,
        replications: cfg.keep_replications.then_some(ok),
    })
}
