use super::{fit_kernel, fit_logistic, KernelModel, LearnerKind, LearnerSpec, LogisticModel, NuisanceValues};
use crate::data::{Dataset, FoldAssignment};
use crate::error::{invalid, Error, Result};

enum Fitted {
    Logistic(LogisticModel),
    Kernel(KernelModel),
    Constant(f64),
}

impl Fitted {
    fn predict(&self, x: &[f64], fallbacks: &mut usize) -> f64 {
        match self {
            Fitted::Logistic(m) => m.predict(x, 0.0),
            Fitted::Kernel(m) => {
                let (v, fb) = m.predict(x);
                *fallbacks += fb as usize;
                v
            }
            Fitted::Constant(v) => *v,
        }
    }
}

fn fit(spec: &LearnerSpec, x: &[Vec<f64>], y: &[f64]) -> Result<Fitted> {
    match spec.kind {
        LearnerKind::Logistic => fit_logistic(x, y, None, spec.max_iter, spec.tol).map(Fitted::Logistic),
        LearnerKind::Kernel => fit_kernel(x, y, spec.bandwidth).map(Fitted::Kernel),
    }
}

/// Bookkeeping from a cross-fit: which units trained the models that scored each fold.
#[derive(Debug, Clone, Default)]
pub struct CrossFitDiagnostics {
    pub train_sets: Vec<Vec<usize>>,
    pub scored_sets: Vec<Vec<usize>>,
    /// Kernel queries that fell back to the training mean.
    pub kernel_fallbacks: usize,
}

/// Cross-fitted nuisance predictions; see [`cross_fit_detailed`].
pub fn cross_fit_nuisances(d: &Dataset, folds: &FoldAssignment, spec: &LearnerSpec) -> Result<NuisanceValues> {
    cross_fit_detailed(d, folds, spec).map(|(v, _)| v)
}

/// For each fold, fit e on all complement units, π_a on complement units with
/// A = a, and μ_a on complement units with A = a and C = 0, then score the fold.
pub fn cross_fit_detailed(
    d: &Dataset,
    folds: &FoldAssignment,
    spec: &LearnerSpec,
) -> Result<(NuisanceValues, CrossFitDiagnostics)> {
    spec.validate()?;
    let n = d.len();
    if folds.fold_of.len() != n {
        return invalid(format!("fold assignment covers {} units, dataset has {n}", folds.fold_of.len()));
    }
    let obs = &d.observations;
    let mut out = NuisanceValues::with_len(n);
    let mut diag = CrossFitDiagnostics::default();

    for f in 0..folds.k {
        let train = folds.complement(f);
        let score = folds.members(f);
        for arm in 0..=1u8 {
            if !train.iter().any(|&i| obs[i].a == arm) {
                return Err(Error::FoldArm { fold: f, arm, what: "units" });
            }
            if !train.iter().any(|&i| obs[i].a == arm && obs[i].c == 0) {
                return Err(Error::FoldArm { fold: f, arm, what: "uncensored units" });
            }
        }

        let xs = |idx: &[usize]| idx.iter().map(|&i| obs[i].x.clone()).collect::<Vec<_>>();
        let e_model = fit(spec, &xs(&train), &train.iter().map(|&i| obs[i].a as f64).collect::<Vec<_>>())
            .map_err(|e| context(e, f, "propensity"))?;
        let mut pi_models = Vec::with_capacity(2);
        let mut mu_models = Vec::with_capacity(2);
        for arm in 0..=1u8 {
            let arm_idx: Vec<usize> = train.iter().copied().filter(|&i| obs[i].a == arm).collect();
            let cens: Vec<f64> = arm_idx.iter().map(|&i| obs[i].c as f64).collect();
            pi_models.push(censoring_model(spec, &xs(&arm_idx), &cens).map_err(|e| context(e, f, "censoring"))?);
            let unc: Vec<usize> = arm_idx.iter().copied().filter(|&i| obs[i].c == 0).collect();
            let ys: Vec<f64> = unc.iter().map(|&i| obs[i].y_or_zero()).collect();
            mu_models.push(outcome_model(spec, &xs(&unc), &ys).map_err(|e| context(e, f, "outcome"))?);
        }

        for &i in &score {
            debug_assert!(folds.fold_of[i] == f);
            let x = &obs[i].x;
            let fb = &mut diag.kernel_fallbacks;
            out.e[i] = e_model.predict(x, fb);
            out.pi0[i] = pi_models[0].predict(x, fb);
            out.pi1[i] = pi_models[1].predict(x, fb);
            out.mu0[i] = mu_models[0].predict(x, fb);
            out.mu1[i] = mu_models[1].predict(x, fb);
        }
        diag.train_sets.push(train);
        diag.scored_sets.push(score);
    }
    out.clip(spec.eps_clip);
    Ok((out, diag))
}

/// A training arm with no censoring (or all censored) has a degenerate
/// target; the constant fit is exact there.
fn censoring_model(spec: &LearnerSpec, x: &[Vec<f64>], y: &[f64]) -> Result<Fitted> {
    if y.iter().all(|&v| v == 0.0) || y.iter().all(|&v| v == 1.0) {
        return Ok(Fitted::Constant(y[0]));
    }
    fit(spec, x, y)
}

fn outcome_model(spec: &LearnerSpec, x: &[Vec<f64>], y: &[f64]) -> Result<Fitted> {
    if y.len() < 2 || y.iter().all(|&v| v == y[0]) {
        return Ok(Fitted::Constant(y[0]));
    }
    fit(spec, x, y)
}

fn context(e: Error, fold: usize, what: &str) -> Error {
    match e {
        Error::Invalid(m) => Error::Estimation(format!("fold {fold}, {what} model: {m}")),
        Error::Estimation(m) => Error::Estimation(format!("fold {fold}, {what} model: {m}")),
        other => other,
    }
}
