use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{NuisanceValues, EPS_CLIP};
use crate::error::{invalid, Result};
use crate::stats::{expit, logit};

/// One constant per nuisance function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerNuisance {
    pub e: f64,
    pub pi0: f64,
    pub pi1: f64,
    pub mu0: f64,
    pub mu1: f64,
}

impl PerNuisance {
    pub const fn all(v: f64) -> Self {
        PerNuisance { e: v, pi0: v, pi1: v, mu0: v, mu1: v }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.e, self.pi0, self.pi1, self.mu0, self.mu1]
    }
}

/// η̂ = expit(logit η + G), G ~ N(c1 n^-α, c2 n^-2α), drawn per unit and nuisance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub alpha: f64,
    pub c1: PerNuisance,
    pub c2: PerNuisance,
    /// Nominal sample size in the rate n^-α.
    pub n: usize,
    pub seed: u64,
    pub eps_clip: f64,
}

impl PerturbationSpec {
    pub fn new(alpha: f64, n: usize, seed: u64) -> Self {
        PerturbationSpec {
            alpha,
            c1: PerNuisance::all(1.0),
            c2: PerNuisance::all(1.0),
            n,
            seed,
            eps_clip: EPS_CLIP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) {
            return invalid("alpha must be positive");
        }
        if self.c2.as_array().iter().any(|&c| !(c >= 0.0)) {
            return invalid("c2 must be non-negative");
        }
        if self.c1.as_array().iter().any(|c| !c.is_finite()) {
            return invalid("c1 must be finite");
        }
        if self.n == 0 {
            return invalid("nominal n must be positive");
        }
        Ok(())
    }
}

pub fn perturb_nuisance(truth: &NuisanceValues, spec: &PerturbationSpec) -> Result<NuisanceValues> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    perturb_with(truth, spec, &mut rng)
}

pub(crate) fn perturb_with(
    truth: &NuisanceValues,
    spec: &PerturbationSpec,
    rng: &mut ChaCha8Rng,
) -> Result<NuisanceValues> {
    let rate = (spec.n as f64).powf(-spec.alpha);
    let mut out = truth.clone();
    let c1 = spec.c1.as_array();
    let c2 = spec.c2.as_array();
    let names = ["e", "pi0", "pi1", "mu0", "mu1"];
    for (j, col) in out.columns_mut().into_iter().enumerate() {
        let noise = Normal::new(c1[j] * rate, c2[j].sqrt() * rate)
            .map_err(|e| crate::Error::Invalid(e.to_string()))?;
        for (i, v) in col.iter_mut().enumerate() {
            let l = logit(*v);
            if !l.is_finite() {
                return invalid(format!("{} at unit {i} is {v}, outside (0, 1)", names[j]));
            }
            *v = expit(l + noise.sample(rng));
        }
    }
    out.clip(spec.eps_clip);
    Ok(out)
}
