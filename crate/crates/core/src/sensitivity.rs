//! Tipping-point analysis: which (τ, δ0, δ1) explain away a naive contrast.
//!
//! Under known informative fractions and a common risk ratio τ,
//! Ψ0 = Ψ̃ + (τ − 1)(δ1 μ̀1 − δ0 μ̀0) with μ̀a = E[πa μa]. Every function
//! here solves that expression, or a bound endpoint, for a zero.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::estimators::{Coefs, Family, SensitivityParams};
use crate::influence::{Col, InfluenceMatrix, N_COL};

/// Smallest τ at which the point-identified effect can reach zero.
pub fn tipping_tau(naive: f64, grave_mu0: f64, grave_mu1: f64) -> Result<f64> {
    check_grave(grave_mu0, grave_mu1)?;
    Ok(if naive > 0.0 {
        1.0 + naive / grave_mu0
    } else if naive < 0.0 {
        1.0 - naive / grave_mu1
    } else {
        1.0
    })
}

fn check_grave(g0: f64, g1: f64) -> Result<()> {
    if !(g0 > 0.0 && g1 > 0.0) {
        return invalid(format!("grave means must be positive, got ({g0}, {g1})"));
    }
    Ok(())
}

/// Zero set of the point-identified effect at fixed τ: δ0 = intercept + slope·δ1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCurve {
    pub tau: f64,
    pub slope: f64,
    pub intercept: f64,
}

pub fn region_curve(tau: f64, naive: f64, grave_mu0: f64, grave_mu1: f64) -> Result<RegionCurve> {
    check_grave(grave_mu0, grave_mu1)?;
    if !(tau > 1.0) {
        return invalid(format!("region needs tau > 1, got {tau}"));
    }
    Ok(RegionCurve { tau, slope: grave_mu1 / grave_mu0, intercept: naive / (tau - 1.0) / grave_mu0 })
}

/// One grid point of the region. For a positive naive contrast `delta0_min`
/// is the smallest δ0 that explains it away; for a negative one it is the
/// largest. Points outside [0, 1] are infeasible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionPoint {
    pub tau: f64,
    pub delta1: f64,
    pub delta0_min: f64,
    pub feasible: bool,
}

pub fn delta_region(tau: f64, naive: f64, grave_mu0: f64, grave_mu1: f64, delta1_grid: &[f64]) -> Result<Vec<RegionPoint>> {
    let c = region_curve(tau, naive, grave_mu0, grave_mu1)?;
    Ok(delta1_grid
        .iter()
        .map(|&d1| {
            let d0 = (d1 * grave_mu1 + naive / (tau - 1.0)) / grave_mu0;
            debug_assert!((d0 - (c.intercept + c.slope * d1)).abs() <= 1e-12 * d0.abs().max(1.0));
            RegionPoint { tau, delta1: d1, delta0_min: d0, feasible: (0.0..=1.0).contains(&d0) }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TippingResult {
    pub naive: f64,
    pub grave_mu0: f64,
    pub grave_mu1: f64,
    pub tau_threshold: f64,
    pub region_curves: Vec<RegionCurve>,
}

/// Tipping analysis from plug-in summaries.
pub fn tipping_from_summaries(naive: f64, grave_mu0: f64, grave_mu1: f64, taus: &[f64]) -> Result<TippingResult> {
    let tau_threshold = tipping_tau(naive, grave_mu0, grave_mu1)?;
    let region_curves = taus.iter().map(|&t| region_curve(t, naive, grave_mu0, grave_mu1)).collect::<Result<_>>()?;
    Ok(TippingResult { naive, grave_mu0, grave_mu1, tau_threshold, region_curves })
}

/// Tipping analysis with Ψ̃, μ̀0 and μ̀1 estimated from an influence matrix.
pub fn tipping_analysis(rows: &InfluenceMatrix, taus: &[f64]) -> Result<TippingResult> {
    let naive = rows.column_mean(Col::Phi1_1) - rows.column_mean(Col::Phi1_0);
    tipping_from_summaries(naive, rows.column_mean(Col::Phi3_0), rows.column_mean(Col::Phi3_1), taus)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignThreshold {
    /// δ at which the endpoint reaches zero.
    pub delta: f64,
    /// True when the threshold exceeds 1, so no admissible δ flips the sign.
    pub robust: bool,
    /// 0 for the lower endpoint, 1 for the upper.
    pub endpoint: usize,
}

fn column_means(rows: &InfluenceMatrix) -> [f64; N_COL] {
    let mut m = [0.0; N_COL];
    for c in Col::ALL {
        m[c as usize] = rows.column_mean(c);
    }
    m
}

/// δ_{u,arm} at which the endpoint of `family` moving toward zero crosses it.
///
/// The endpoint is linear in δ_{u,arm}, so two evaluations determine it.
pub fn max_delta_for_sign(rows: &InfluenceMatrix, family: Family, arm: u8, base: &SensitivityParams) -> Result<SignThreshold> {
    if family.kind() != crate::estimators::EstimateKind::Interval {
        return invalid("sign thresholds need an interval family");
    }
    let theta = column_means(rows);
    let at = |d: f64| -> Vec<f64> {
        let mut p = *base;
        if arm == 1 {
            p.delta_u1 = d;
            p.delta_l1 = p.delta_l1.min(d);
        } else {
            p.delta_u0 = d;
            p.delta_l0 = p.delta_l0.min(d);
        }
        family.coefs(&p).iter().map(|a: &Coefs| a.dot(&theta)).collect()
    };
    let (v0, v1) = (at(0.0), at(1.0));
    for k in 0..2 {
        let slope = v1[k] - v0[k];
        if slope == 0.0 {
            continue;
        }
        if v0[k] == 0.0 {
            return Ok(SignThreshold { delta: 0.0, robust: false, endpoint: k });
        }
        if v0[k].signum() != slope.signum() {
            let delta = -v0[k] / slope;
            return Ok(SignThreshold { delta, robust: delta > 1.0, endpoint: k });
        }
    }
    invalid(format!("no endpoint of {} moves toward zero with delta_u{arm}", family.name()))
}
