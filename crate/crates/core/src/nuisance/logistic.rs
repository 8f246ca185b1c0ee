use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::stats::expit;

/// Coefficient norm (on standardized covariates) beyond which the fit is
/// treated as separated.
const SEPARATION_NORM: f64 = 30.0;

/// Logit-linear model on the original covariate scale.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub intercept: f64,
    pub coef: Vec<f64>,
    pub iterations: usize,
    /// Log-likelihood after each accepted step, starting from the initial point.
    pub loglik_trace: Vec<f64>,
}

impl LogisticModel {
    pub fn linear(&self, x: &[f64]) -> f64 {
        self.intercept + self.coef.iter().zip(x).map(|(b, v)| b * v).sum::<f64>()
    }

    pub fn predict(&self, x: &[f64], offset: f64) -> f64 {
        expit(self.linear(x) + offset)
    }
}

fn loglik(y: &[f64], eta: &[f64]) -> f64 {
    y.iter()
        .zip(eta)
        .map(|(&y, &t)| {
            // log(1 + e^t) computed stably
            let sp = if t > 0.0 { t + (-t).exp().ln_1p() } else { t.exp().ln_1p() };
            y * t - sp
        })
        .sum()
}

/// Fit P(label = 1 | x) = expit(b0 + x'b + offset) by iteratively reweighted
/// least squares. Labels may be fractional in `[0, 1]` (quasi-binomial).
///
/// Covariates are standardized internally; Newton steps are halved until
/// the log-likelihood does not decrease.
pub fn fit_logistic(
    features: &[Vec<f64>],
    labels: &[f64],
    offset: Option<&[f64]>,
    max_iter: usize,
    tol: f64,
) -> Result<LogisticModel> {
    let n = labels.len();
    if features.len() != n {
        return invalid("features and labels differ in length");
    }
    if offset.is_some_and(|o| o.len() != n) {
        return invalid("offset length differs from labels");
    }
    if labels.iter().any(|&y| !(0.0..=1.0).contains(&y)) {
        return invalid("labels must lie in [0, 1]");
    }
    if !labels.iter().any(|&y| y > 0.0) || !labels.iter().any(|&y| y < 1.0) {
        return invalid("need at least one positive and one negative label");
    }
    let p = features.first().map_or(0, Vec::len);
    if features.iter().any(|r| r.len() != p || r.iter().any(|v| !v.is_finite())) {
        return invalid("features must be finite with equal dimension");
    }

    let mut center = vec![0.0; p];
    let mut scale = vec![1.0; p];
    for j in 0..p {
        let m = features.iter().map(|r| r[j]).sum::<f64>() / n as f64;
        let v = features.iter().map(|r| (r[j] - m).powi(2)).sum::<f64>() / n as f64;
        center[j] = m;
        // constant columns carry no information; leave them unscaled so their
        // coefficient stays at zero
        scale[j] = if v > 0.0 { v.sqrt() } else { 0.0 };
    }
    let k = p + 1;
    let mut x = DMatrix::<f64>::zeros(n, k);
    for i in 0..n {
        x[(i, 0)] = 1.0;
        for j in 0..p {
            x[(i, j + 1)] = if scale[j] > 0.0 { (features[i][j] - center[j]) / scale[j] } else { 0.0 };
        }
    }
    let off: Vec<f64> = offset.map_or_else(|| vec![0.0; n], <[f64]>::to_vec);
    let y = DVector::from_column_slice(labels);

    let mut beta = DVector::<f64>::zeros(k);
    if offset.is_none() {
        let ybar = labels.iter().sum::<f64>() / n as f64;
        beta[0] = (ybar / (1.0 - ybar)).ln();
    }
    let lin = |b: &DVector<f64>| -> Vec<f64> {
        let t = &x * b;
        t.iter().zip(&off).map(|(a, o)| a + o).collect()
    };
    let mut eta = lin(&beta);
    let mut ll = loglik(labels, &eta);
    let mut trace = vec![ll];
    let mut grad_norm = f64::INFINITY;

    for it in 1..=max_iter {
        let mu: Vec<f64> = eta.iter().map(|&t| expit(t)).collect();
        let w: Vec<f64> = mu.iter().map(|m| (m * (1.0 - m)).max(1e-12)).collect();
        let resid = DVector::from_iterator(n, y.iter().zip(&mu).map(|(y, m)| y - m));
        let grad = x.transpose() * &resid;
        grad_norm = grad.norm();
        let mut xtwx = DMatrix::<f64>::zeros(k, k);
        for i in 0..n {
            let row = x.row(i);
            for a in 0..k {
                let ra = row[a] * w[i];
                for b in a..k {
                    xtwx[(a, b)] += ra * row[b];
                }
            }
        }
        for a in 0..k {
            for b in 0..a {
                xtwx[(a, b)] = xtwx[(b, a)];
            }
        }
        let step = match xtwx.clone().cholesky() {
            Some(ch) => ch.solve(&grad),
            None => {
                let ridge = DMatrix::<f64>::identity(k, k) * 1e-8;
                (xtwx + ridge)
                    .lu()
                    .solve(&grad)
                    .ok_or_else(|| Error::Estimation("singular information matrix".into()))?
            }
        };

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let cand = &beta + &step * t;
            let ce = lin(&cand);
            let cl = loglik(labels, &ce);
            if cl >= ll - 1e-12 * ll.abs().max(1.0) {
                accepted = Some((cand, ce, cl));
                break;
            }
            t *= 0.5;
        }
        let Some((nb, ne, nl)) = accepted else {
            return Err(Error::NoConvergence { iters: it, grad_norm });
        };
        debug_assert!(nl >= ll - 1e-9 * ll.abs().max(1.0), "log-likelihood decreased");
        let change = (&nb - &beta).amax();
        beta = nb;
        eta = ne;
        let gain = nl - ll;
        ll = nl;
        trace.push(ll);

        if beta.iter().skip(1).map(|b| b * b).sum::<f64>().sqrt() > SEPARATION_NORM {
            return Err(Error::Separation { coef_norm: beta.norm() });
        }
        if change < tol || gain.abs() < tol * 1e-3 * (ll.abs() + 1.0) {
            return Ok(unscale(&beta, &center, &scale, it, trace));
        }
    }
    Err(Error::NoConvergence { iters: max_iter, grad_norm })
}

fn unscale(beta: &DVector<f64>, center: &[f64], scale: &[f64], iters: usize, trace: Vec<f64>) -> LogisticModel {
    let p = center.len();
    let mut coef = vec![0.0; p];
    let mut intercept = beta[0];
    for j in 0..p {
        if scale[j] > 0.0 {
            coef[j] = beta[j + 1] / scale[j];
            intercept -= coef[j] * center[j];
        }
    }
    LogisticModel { intercept, coef, iterations: iters, loglik_trace: trace }
}
