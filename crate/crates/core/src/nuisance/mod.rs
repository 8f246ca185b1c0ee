//! Nuisance functions η = {e, π0, π1, μ0, μ1}: learners, cross-fitting and
//! the stochastic perturbation used in rate experiments.

mod crossfit;
mod kernel;
mod logistic;
pub(crate) mod perturb;

pub use crossfit::{cross_fit_detailed, cross_fit_nuisances, CrossFitDiagnostics};
pub use kernel::{fit_kernel, Bandwidth, KernelModel};
pub use logistic::{fit_logistic, LogisticModel};
pub use perturb::{perturb_nuisance, PerNuisance, PerturbationSpec};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Default clipping level for propensity and censoring probabilities.
pub const EPS_CLIP: f64 = 0.01;

/// Nuisance values at a single unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eta {
    pub e: f64,
    pub pi0: f64,
    pub pi1: f64,
    pub mu0: f64,
    pub mu1: f64,
}

impl Eta {
    #[inline]
    pub fn e_arm(&self, a: u8) -> f64 {
        if a == 1 {
            self.e
        } else {
            1.0 - self.e
        }
    }
    #[inline]
    pub fn pi(&self, a: u8) -> f64 {
        if a == 1 {
            self.pi1
        } else {
            self.pi0
        }
    }
    #[inline]
    pub fn mu(&self, a: u8) -> f64 {
        if a == 1 {
            self.mu1
        } else {
            self.mu0
        }
    }
}

/// Per-unit evaluations of the nuisance vector, one entry per observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuisanceValues {
    pub e: Vec<f64>,
    pub pi0: Vec<f64>,
    pub pi1: Vec<f64>,
    pub mu0: Vec<f64>,
    pub mu1: Vec<f64>,
}

impl NuisanceValues {
    pub fn with_len(n: usize) -> Self {
        NuisanceValues {
            e: vec![0.0; n],
            pi0: vec![0.0; n],
            pi1: vec![0.0; n],
            mu0: vec![0.0; n],
            mu1: vec![0.0; n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> Eta) -> Self {
        let mut v = Self::with_len(n);
        for i in 0..n {
            v.set(i, f(i));
        }
        v
    }

    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    #[inline]
    pub fn at(&self, i: usize) -> Eta {
        Eta { e: self.e[i], pi0: self.pi0[i], pi1: self.pi1[i], mu0: self.mu0[i], mu1: self.mu1[i] }
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: Eta) {
        self.e[i] = v.e;
        self.pi0[i] = v.pi0;
        self.pi1[i] = v.pi1;
        self.mu0[i] = v.mu0;
        self.mu1[i] = v.mu1;
    }

    pub fn columns(&self) -> [&Vec<f64>; 5] {
        [&self.e, &self.pi0, &self.pi1, &self.mu0, &self.mu1]
    }

    pub(crate) fn columns_mut(&mut self) -> [&mut Vec<f64>; 5] {
        [&mut self.e, &mut self.pi0, &mut self.pi1, &mut self.mu0, &mut self.mu1]
    }

    /// Apply the positivity clipping in place.
    pub fn clip(&mut self, eps_clip: f64) {
        for v in self.e.iter_mut() {
            *v = clip_propensity(*v, eps_clip);
        }
        for v in self.pi0.iter_mut().chain(self.pi1.iter_mut()) {
            *v = clip_censoring(*v, eps_clip);
        }
        for v in self.mu0.iter_mut().chain(self.mu1.iter_mut()) {
            *v = v.clamp(0.0, 1.0);
        }
    }

    pub fn check_finite(&self) -> Result<()> {
        for (name, col) in ["e", "pi0", "pi1", "mu0", "mu1"].iter().zip(self.columns()) {
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return invalid(format!("non-finite {name} at unit {i}"));
            }
        }
        Ok(())
    }
}

/// Propensity-type clipping to `[eps, 1 - eps]`.
pub fn clip_propensity(p: f64, eps_clip: f64) -> f64 {
    p.clamp(eps_clip, 1.0 - eps_clip)
}

/// Censoring-type clipping to `[0, 1 - eps]`.
pub fn clip_censoring(p: f64, eps_clip: f64) -> f64 {
    p.clamp(0.0, 1.0 - eps_clip)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LearnerKind {
    Logistic,
    Kernel,
}

impl std::str::FromStr for LearnerKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "logistic" => Ok(LearnerKind::Logistic),
            "kernel" => Ok(LearnerKind::Kernel),
            _ => Err(format!("unknown learner {s:?} (expected logistic or kernel)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerSpec {
    pub kind: LearnerKind,
    pub max_iter: usize,
    pub tol: f64,
    pub bandwidth: Bandwidth,
    pub eps_clip: f64,
}

impl Default for LearnerSpec {
    fn default() -> Self {
        LearnerSpec {
            kind: LearnerKind::Logistic,
            max_iter: 50,
            tol: 1e-8,
            bandwidth: Bandwidth::Silverman,
            eps_clip: EPS_CLIP,
        }
    }
}

impl LearnerSpec {
    pub fn kernel() -> Self {
        LearnerSpec { kind: LearnerKind::Kernel, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return invalid("learner tolerance must be positive");
        }
        if self.max_iter == 0 {
            return invalid("max_iter must be at least 1");
        }
        if let Bandwidth::Fixed(h) = self.bandwidth {
            if !(h > 0.0) {
                return invalid("fixed bandwidth must be positive");
            }
        }
        if !(self.eps_clip > 0.0 && self.eps_clip < 0.5) {
            return invalid("eps_clip must lie in (0, 0.5)");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_examples() {
        assert_eq!(clip_propensity(0.5, 0.01), 0.5);
        assert_eq!(clip_propensity(1.0, 0.01), 0.99);
        assert_eq!(clip_propensity(-0.2, 0.01), 0.01);
        assert_eq!(clip_censoring(1.0, 0.01), 0.99);
        assert_eq!(clip_censoring(-0.2, 0.01), 0.0);
        assert_eq!(clip_censoring(0.003, 0.01), 0.003);
    }
}
