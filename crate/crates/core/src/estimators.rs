//! One-step estimators of bounds and point-identified effects.
//!
//! Every target is a linear combination aᵀE[φ] of influence columns, so an
//! estimate is the empirical mean of aᵀφ with a Wald interval from its
//! sample variance. The coefficient tables live in [`Family::coefs`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::influence::{Col, InfluenceMatrix, N_COL};
use crate::stats::{mean, median, sd, z_crit};

/// Sensitivity parameters shared by every family. Unused fields are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityParams {
    pub tau0: f64,
    pub tau1: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub delta_l0: f64,
    pub delta_u0: f64,
    pub delta_l1: f64,
    pub delta_u1: f64,
    pub epsilon: f64,
}

impl Default for SensitivityParams {
    fn default() -> Self {
        SensitivityParams {
            tau0: 1.0,
            tau1: 1.0,
            delta0: 0.5,
            delta1: 0.5,
            delta_l0: 0.0,
            delta_u0: 1.0,
            delta_l1: 0.0,
            delta_u1: 1.0,
            epsilon: 0.05,
        }
    }
}

impl SensitivityParams {
    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau0 = tau;
        self.tau1 = tau;
        self
    }

    pub fn with_delta(mut self, d0: f64, d1: f64) -> Self {
        self.delta0 = d0;
        self.delta1 = d1;
        self
    }

    pub fn with_delta_u(mut self, du: f64) -> Self {
        self.delta_u0 = du;
        self.delta_u1 = du;
        self
    }

    pub fn with_delta_l(mut self, dl: f64) -> Self {
        self.delta_l0 = dl;
        self.delta_l1 = dl;
        self
    }

    fn check_bounded_deltas(&self) -> Result<()> {
        for (name, v) in [
            ("delta_l0", self.delta_l0),
            ("delta_u0", self.delta_u0),
            ("delta_l1", self.delta_l1),
            ("delta_u1", self.delta_u1),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return invalid(format!("{name} = {v} outside [0, 1]"));
            }
        }
        if self.delta_l0 > self.delta_u0 || self.delta_l1 > self.delta_u1 {
            return invalid("lower delta exceeds upper delta");
        }
        Ok(())
    }

    fn check_point_deltas(&self) -> Result<()> {
        for (name, v) in [("delta0", self.delta0), ("delta1", self.delta1)] {
            if !(0.0..=1.0).contains(&v) {
                return invalid(format!("{name} = {v} outside [0, 1]"));
            }
        }
        Ok(())
    }
}

/// Assumption set selecting the coefficient table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Naive,
    General,
    MonotonePositive,
    MonotoneNegative,
    BoundedRisk,
    PointAte,
    Psi1,
    PointPsi1,
    Psi2Smooth,
    PointPsi2,
    UnconfoundedPsi0,
    UnconfoundedPsi1,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::Naive,
        Family::General,
        Family::MonotonePositive,
        Family::MonotoneNegative,
        Family::BoundedRisk,
        Family::PointAte,
        Family::Psi1,
        Family::PointPsi1,
        Family::Psi2Smooth,
        Family::PointPsi2,
        Family::UnconfoundedPsi0,
        Family::UnconfoundedPsi1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Naive => "naive",
            Family::General => "general",
            Family::MonotonePositive => "mono-pos",
            Family::MonotoneNegative => "mono-neg",
            Family::BoundedRisk => "bounded-risk",
            Family::PointAte => "point",
            Family::Psi1 => "psi1",
            Family::PointPsi1 => "point-psi1",
            Family::Psi2Smooth => "psi2",
            Family::PointPsi2 => "point-psi2",
            Family::UnconfoundedPsi0 => "unconfounded-psi0",
            Family::UnconfoundedPsi1 => "unconfounded-psi1",
        }
    }

    pub fn kind(self) -> EstimateKind {
        match self {
            Family::Naive | Family::PointAte | Family::PointPsi1 | Family::PointPsi2 => EstimateKind::Point,
            _ => EstimateKind::Interval,
        }
    }

    pub fn validate(self, p: &SensitivityParams) -> Result<()> {
        match self {
            Family::Naive | Family::General | Family::UnconfoundedPsi0 => Ok(()),
            Family::MonotonePositive | Family::MonotoneNegative | Family::Psi1 | Family::UnconfoundedPsi1 => {
                p.check_bounded_deltas()
            }
            Family::BoundedRisk => {
                if !(p.tau0 >= 1.0 && p.tau1 >= 1.0) || !p.tau0.is_finite() || !p.tau1.is_finite() {
                    return invalid(format!("bounded risk needs tau >= 1, got ({}, {})", p.tau0, p.tau1));
                }
                p.check_bounded_deltas()
            }
            Family::PointAte => {
                if !(p.tau0 > 0.0 && p.tau1 > 0.0) {
                    return invalid("tau must be positive");
                }
                p.check_point_deltas()
            }
            Family::PointPsi1 | Family::PointPsi2 => p.check_point_deltas(),
            Family::Psi2Smooth => {
                if !(p.epsilon > 0.0) {
                    return invalid("smoothing epsilon must be positive");
                }
                p.check_bounded_deltas()
            }
        }
    }

    /// Coefficient vectors: one for point families, (lower, upper) otherwise.
    pub fn coefs(self, p: &SensitivityParams) -> Vec<Coefs> {
        use Col::*;
        let naive = Coefs::new().add(Phi1_1, 1.0).add(Phi1_0, -1.0);
        // E[π_a(1 - μ_a)] and E[π_a μ_a]
        let gap = |a: u8| Coefs::new().add(Col::phi2(a), 1.0).add(Col::phi3(a), -1.0);
        let both = |l: Coefs, u: Coefs| vec![l, u];
        match self {
            Family::Naive => vec![naive],
            Family::General => both(
                naive.add(Phi3_1, -1.0).add(Phi2_0, -1.0).add(Phi3_0, 1.0),
                naive.add(Phi2_1, 1.0).add(Phi3_1, -1.0).add(Phi3_0, 1.0),
            ),
            Family::MonotonePositive => both(
                naive.plus(&gap(0), -p.delta_u0),
                naive.plus(&gap(1), p.delta_u1),
            ),
            Family::MonotoneNegative => both(
                naive.add(Phi3_1, -p.delta_u1),
                naive.add(Phi3_0, p.delta_u0),
            ),
            Family::BoundedRisk => both(
                naive
                    .add(Phi3_1, p.delta_u1 * (1.0 / p.tau1 - 1.0))
                    .add(Phi3_0, -p.delta_u0 * (p.tau0 - 1.0)),
                naive
                    .add(Phi3_1, p.delta_u1 * (p.tau1 - 1.0))
                    .add(Phi3_0, -p.delta_u0 * (1.0 / p.tau0 - 1.0)),
            ),
            Family::PointAte => vec![naive
                .add(Phi3_1, p.delta1 * (p.tau1 - 1.0))
                .add(Phi3_0, -p.delta0 * (p.tau0 - 1.0))],
            Family::Psi1 => both(
                naive.plus(&gap(1), p.delta_l1).plus(&gap(0), -p.delta_u0),
                naive.plus(&gap(1), p.delta_u1).plus(&gap(0), -p.delta_l0),
            ),
            Family::PointPsi1 => vec![naive.plus(&gap(1), p.delta1).plus(&gap(0), -p.delta0)],
            Family::Psi2Smooth => both(
                naive.add(PhiU2, -p.delta_u0),
                naive.add(PhiL2, -p.delta_u0),
            ),
            Family::PointPsi2 => vec![naive.add(Phi3_01, -p.delta0).add(Phi3_0, p.delta0)],
            Family::UnconfoundedPsi0 => {
                let core = Coefs::new().add(Phi4_1, 1.0).add(Phi6_1, -1.0).add(Phi4_0, -1.0).add(Phi6_0, 1.0);
                both(
                    core.add(Phi7_1, -1.0).add(Phi5_0, -1.0),
                    core.add(Phi7_0, 1.0).add(Phi5_1, 1.0),
                )
            }
            Family::UnconfoundedPsi1 => {
                let tilt = |a: u8| Coefs::new().add(Col::phi5(a), 1.0).add(Col::phi6(a), -1.0);
                let core = Coefs::new().add(Phi4_1, 1.0).add(Phi4_0, -1.0);
                both(
                    core.plus(&tilt(1), p.delta_l1).plus(&tilt(0), -p.delta_u0).add(Phi7_1, -1.0),
                    core.plus(&tilt(1), p.delta_u1).plus(&tilt(0), -p.delta_l0).add(Phi7_0, 1.0),
                )
            }
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown assumption set {s:?}"))
    }
}

/// Coefficient vector a over the influence columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefs(pub [f64; N_COL]);

impl Default for Coefs {
    fn default() -> Self {
        Coefs([0.0; N_COL])
    }
}

impl Coefs {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(mut self, c: Col, w: f64) -> Self {
        self.0[c as usize] += w;
        self
    }

    pub fn plus(mut self, other: &Coefs, w: f64) -> Self {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a += w * b;
        }
        self
    }

    pub fn get(&self, c: Col) -> f64 {
        self.0[c as usize]
    }

    /// aᵀθ for a vector of column means.
    pub fn dot(&self, theta: &[f64; N_COL]) -> f64 {
        self.0.iter().zip(theta).map(|(a, t)| a * t).sum()
    }

    /// Non-zero entries keyed by column name.
    pub fn named(&self) -> BTreeMap<String, f64> {
        Col::ALL
            .iter()
            .filter(|c| self.get(**c) != 0.0)
            .map(|c| (c.name().to_string(), self.get(*c)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimateKind {
    Interval,
    Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Endpoint {
    pub estimate: f64,
    pub se: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub coefficients: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEstimate {
    pub kind: EstimateKind,
    pub family: Family,
    /// One endpoint for point estimates, (lower, upper) for intervals.
    pub endpoints: Vec<Endpoint>,
    pub alpha_level: f64,
    /// Lower estimate above upper estimate; reported, never clamped.
    pub crossed: bool,
    pub n: usize,
}

impl BoundEstimate {
    pub fn lower(&self) -> f64 {
        self.endpoints[0].estimate
    }

    pub fn upper(&self) -> f64 {
        self.endpoints[self.endpoints.len() - 1].estimate
    }

    pub fn point(&self) -> f64 {
        self.endpoints[0].estimate
    }

    pub fn se_lower(&self) -> f64 {
        self.endpoints[0].se
    }

    pub fn se_upper(&self) -> f64 {
        self.endpoints[self.endpoints.len() - 1].se
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return invalid(format!("alpha level must lie in (0, 1), got {alpha}"));
    }
    Ok(())
}

fn endpoint(rows: &InfluenceMatrix, a: &Coefs, z: f64) -> Result<Endpoint> {
    if rows.len() < 2 {
        return invalid("need at least two units for a variance estimate");
    }
    let v = rows.combine(&a.0);
    let est = mean(&v);
    let se = sd(&v) / (v.len() as f64).sqrt();
    if !est.is_finite() || !se.is_finite() {
        return Err(Error::Estimation("non-finite estimate".into()));
    }
    Ok(Endpoint { estimate: est, se, ci_lower: est - z * se, ci_upper: est + z * se, coefficients: a.named() })
}

/// Point estimate P_n[aᵀφ] with standard error and Wald interval.
pub fn estimate_functional(rows: &InfluenceMatrix, a: &Coefs, alpha: f64) -> Result<BoundEstimate> {
    check_alpha(alpha)?;
    let ep = endpoint(rows, a, z_crit(alpha))?;
    Ok(BoundEstimate {
        kind: EstimateKind::Point,
        family: Family::Naive,
        endpoints: vec![ep],
        alpha_level: alpha,
        crossed: false,
        n: rows.len(),
    })
}

/// Estimate the bound or point target of `family`.
pub fn estimate(rows: &InfluenceMatrix, family: Family, p: &SensitivityParams, alpha: f64) -> Result<BoundEstimate> {
    check_alpha(alpha)?;
    family.validate(p)?;
    let z = z_crit(alpha);
    let endpoints = family.coefs(p).iter().map(|a| endpoint(rows, a, z)).collect::<Result<Vec<_>>>()?;
    let crossed = endpoints.len() == 2 && endpoints[0].estimate > endpoints[1].estimate;
    Ok(BoundEstimate { kind: family.kind(), family, endpoints, alpha_level: alpha, crossed, n: rows.len() })
}

pub fn bounds_general(rows: &InfluenceMatrix, alpha: f64) -> Result<BoundEstimate> {
    estimate(rows, Family::General, &SensitivityParams::default(), alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Positive,
    Negative,
}

pub fn bounds_monotone(rows: &InfluenceMatrix, dir: Direction, p: &SensitivityParams, alpha: f64) -> Result<BoundEstimate> {
    let f = match dir {
        Direction::Positive => Family::MonotonePositive,
        Direction::Negative => Family::MonotoneNegative,
    };
    estimate(rows, f, p, alpha)
}

pub fn bounds_bounded_risk(rows: &InfluenceMatrix, p: &SensitivityParams, alpha: f64) -> Result<BoundEstimate> {
    estimate(rows, Family::BoundedRisk, p, alpha)
}

pub fn point_ate(rows: &InfluenceMatrix, p: &SensitivityParams, alpha: f64) -> Result<BoundEstimate> {
    estimate(rows, Family::PointAte, p, alpha)
}

pub fn bounds_psi1(rows: &InfluenceMatrix, p: &SensitivityParams, alpha: f64) -> Result<BoundEstimate> {
    estimate(rows, Family::Psi1, p, alpha)
}

pub fn point_psi1(rows: &InfluenceMatrix, p: &SensitivityParams, alpha: f64) -> Result<BoundEstimate> {
    estimate(rows, Family::PointPsi1, p, alpha)
}

/// Smoothed Ψ2 bounds. The smoothing level is fixed when the influence
/// matrix is built, so `p.epsilon` must match the one used there.
pub fn bounds_psi2_smooth(rows: &InfluenceMatrix, p: &SensitivityParams, alpha: f64) -> Result<BoundEstimate> {
    estimate(rows, Family::Psi2Smooth, p, alpha)
}

pub fn point_psi2(rows: &InfluenceMatrix, p: &SensitivityParams, alpha: f64) -> Result<BoundEstimate> {
    estimate(rows, Family::PointPsi2, p, alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Psi0,
    Psi1,
}

pub fn bounds_unconfounded(rows: &InfluenceMatrix, target: Target, p: &SensitivityParams, alpha: f64) -> Result<BoundEstimate> {
    let f = match target {
        Target::Psi0 => Family::UnconfoundedPsi0,
        Target::Psi1 => Family::UnconfoundedPsi1,
    };
    estimate(rows, f, p, alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedAggregate {
    pub per_seed: Vec<BoundEstimate>,
    /// Median endpoints with seed-adjusted standard errors and intervals.
    pub aggregate: BoundEstimate,
}

/// Median across seeds; the adjusted SE of each endpoint is the median over
/// seeds of sqrt(se_s² + (θ_s − θ_med)²).
pub fn aggregate_seeds(per_seed: &[BoundEstimate]) -> Result<SeedAggregate> {
    let Some(first) = per_seed.first() else {
        return invalid("no seeds to aggregate");
    };
    if per_seed.iter().any(|b| b.kind != first.kind || b.family != first.family || b.endpoints.len() != first.endpoints.len()) {
        return invalid("cannot aggregate estimates of different kinds");
    }
    let z = z_crit(first.alpha_level);
    let mut endpoints = Vec::with_capacity(first.endpoints.len());
    for j in 0..first.endpoints.len() {
        let th: Vec<f64> = per_seed.iter().map(|b| b.endpoints[j].estimate).collect();
        let med = median(&th);
        let adj: Vec<f64> = per_seed
            .iter()
            .map(|b| (b.endpoints[j].se.powi(2) + (b.endpoints[j].estimate - med).powi(2)).sqrt())
            .collect();
        let se = median(&adj);
        endpoints.push(Endpoint {
            estimate: med,
            se,
            ci_lower: med - z * se,
            ci_upper: med + z * se,
            coefficients: first.endpoints[j].coefficients.clone(),
        });
    }
    let crossed = endpoints.len() == 2 && endpoints[0].estimate > endpoints[1].estimate;
    Ok(SeedAggregate {
        per_seed: per_seed.to_vec(),
        aggregate: BoundEstimate { endpoints, crossed, ..first.clone() },
    })
}
