//! Per-unit uncentered influence functions.
//!
//! Each column's empirical mean is a one-step estimate of a functional of η:
//!
//! | column     | functional            |
//! |------------|-----------------------|
//! | `phi1_a`   | E[μ_a]                |
//! | `phi2_a`   | E[π_a]                |
//! | `phi3_a`   | E[μ_a π_a]            |
//! | `phi3_01`  | E[μ_1 π_0]            |
//! | `phi4_a`   | E[μ_a e_a]            |
//! | `phi5_a`   | E[π_a e_a]            |
//! | `phi6_a`   | E[μ_a π_a e_a]        |
//! | `phi7_a`   | E[e_a] = P(A = a)     |
//! | `phi_u2`   | E[π_0 Δμ Φ_ε(Δμ)]     |
//! | `phi_l2`   | E[π_0 Δμ Φ_ε(−Δμ)]    |
//!
//! with e_1 = e, e_0 = 1 − e and Δμ = μ_1 − μ_0. Products use the rule
//! φ_fg = φ_f·g + φ_g·f − f·g.

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Observation};
use crate::error::{invalid, Result};
use crate::nuisance::{Eta, NuisanceValues};
use crate::stats::{mean, norm_cdf, norm_pdf, sd};

pub const N_COL: usize = 17;

/// Column index into an influence row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Col {
    Phi1_0,
    Phi1_1,
    Phi2_0,
    Phi2_1,
    Phi3_0,
    Phi3_1,
    Phi3_01,
    Phi4_0,
    Phi4_1,
    Phi5_0,
    Phi5_1,
    Phi6_0,
    Phi6_1,
    Phi7_0,
    Phi7_1,
    PhiL2,
    PhiU2,
}

impl Col {
    pub const ALL: [Col; N_COL] = [
        Col::Phi1_0,
        Col::Phi1_1,
        Col::Phi2_0,
        Col::Phi2_1,
        Col::Phi3_0,
        Col::Phi3_1,
        Col::Phi3_01,
        Col::Phi4_0,
        Col::Phi4_1,
        Col::Phi5_0,
        Col::Phi5_1,
        Col::Phi6_0,
        Col::Phi6_1,
        Col::Phi7_0,
        Col::Phi7_1,
        Col::PhiL2,
        Col::PhiU2,
    ];

    pub fn name(self) -> &'static str {
        [
            "phi1_0", "phi1_1", "phi2_0", "phi2_1", "phi3_0", "phi3_1", "phi3_01", "phi4_0", "phi4_1",
            "phi5_0", "phi5_1", "phi6_0", "phi6_1", "phi7_0", "phi7_1", "phi_l2", "phi_u2",
        ][self as usize]
    }

    pub fn phi1(a: u8) -> Col {
        if a == 1 { Col::Phi1_1 } else { Col::Phi1_0 }
    }
    pub fn phi2(a: u8) -> Col {
        if a == 1 { Col::Phi2_1 } else { Col::Phi2_0 }
    }
    pub fn phi3(a: u8) -> Col {
        if a == 1 { Col::Phi3_1 } else { Col::Phi3_0 }
    }
    pub fn phi4(a: u8) -> Col {
        if a == 1 { Col::Phi4_1 } else { Col::Phi4_0 }
    }
    pub fn phi5(a: u8) -> Col {
        if a == 1 { Col::Phi5_1 } else { Col::Phi5_0 }
    }
    pub fn phi6(a: u8) -> Col {
        if a == 1 { Col::Phi6_1 } else { Col::Phi6_0 }
    }
    pub fn phi7(a: u8) -> Col {
        if a == 1 { Col::Phi7_1 } else { Col::Phi7_0 }
    }
}

/// Standard deviation ε of the normal-CDF smoother Φ_ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingSpec {
    pub epsilon: f64,
}

impl Default for SmoothingSpec {
    fn default() -> Self {
        SmoothingSpec { epsilon: 0.05 }
    }
}

impl SmoothingSpec {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return invalid(format!("smoothing epsilon must be positive, got {epsilon}"));
        }
        Ok(SmoothingSpec { epsilon })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfluenceRow(pub [f64; N_COL]);

impl InfluenceRow {
    #[inline]
    pub fn get(&self, c: Col) -> f64 {
        self.0[c as usize]
    }
    #[inline]
    fn set(&mut self, c: Col, v: f64) {
        self.0[c as usize] = v;
    }
}

impl std::ops::Index<Col> for InfluenceRow {
    type Output = f64;
    fn index(&self, c: Col) -> &f64 {
        &self.0[c as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

#[inline]
fn ind(b: bool) -> f64 {
    if b { 1.0 } else { 0.0 }
}

/// φ1_a: IPW-corrected uncensored outcome regression.
#[inline]
pub fn phi1(o: &Observation, eta: &Eta, a: u8) -> f64 {
    let mu = eta.mu(a);
    if o.c == 0 && o.a == a {
        (o.y_or_zero() - mu) / ((1.0 - eta.pi(a)) * eta.e_arm(a)) + mu
    } else {
        mu
    }
}

/// φ2_a: IPW-corrected censoring probability.
#[inline]
pub fn phi2(o: &Observation, eta: &Eta, a: u8) -> f64 {
    let pi = eta.pi(a);
    if o.a == a {
        (o.c as f64 - pi) / eta.e_arm(a) + pi
    } else {
        pi
    }
}

/// Smoothed selection term for the Ψ2 bounds.
///
/// The upper side has mean E[π0 Δμ Φ_ε(Δμ)], the lower side E[π0 Δμ Φ_ε(−Δμ)].
pub fn phi_smooth_sde(o: &Observation, eta: &Eta, smooth: SmoothingSpec, side: Side) -> Result<f64> {
    if !(smooth.epsilon > 0.0) {
        return invalid("smoothing epsilon must be positive");
    }
    Ok(smooth_term(o, eta, smooth.epsilon, side, phi1(o, eta, 1), phi1(o, eta, 0)))
}

#[inline]
fn smooth_term(o: &Observation, eta: &Eta, eps: f64, side: Side, p11: f64, p10: f64) -> f64 {
    let dmu = eta.mu1 - eta.mu0;
    let pi0 = eta.pi0;
    let (s, dir) = match side {
        Side::Upper => (dmu, 1.0),
        Side::Lower => (-dmu, -1.0),
    };
    let big = norm_cdf(s, eps);
    let small = norm_pdf(s, eps);
    let resid = (p11 - eta.mu1) - (p10 - eta.mu0);
    let cens = if o.a == 0 { (o.c as f64 - pi0) / (1.0 - eta.e) } else { 0.0 };
    resid * pi0 * big + cens * dmu * big + dir * dmu * pi0 * small * (p11 - p10 - dmu) + dmu * pi0 * big
}

/// All influence columns for one unit.
pub fn influence_row(o: &Observation, eta: &Eta, smooth: SmoothingSpec) -> Result<InfluenceRow> {
    if ![eta.e, eta.pi0, eta.pi1, eta.mu0, eta.mu1].iter().all(|v| v.is_finite()) {
        return invalid("non-finite nuisance value");
    }
    Ok(row_unchecked(o, eta, smooth.epsilon))
}

fn row_unchecked(o: &Observation, eta: &Eta, eps: f64) -> InfluenceRow {
    let mut r = InfluenceRow([0.0; N_COL]);
    let mut p1 = [0.0; 2];
    for a in 0..=1u8 {
        let (mu, pi, ea) = (eta.mu(a), eta.pi(a), eta.e_arm(a));
        let f1 = phi1(o, eta, a);
        let f2 = phi2(o, eta, a);
        let f3 = f1 * pi + f2 * mu - mu * pi;
        let f7 = ind(o.a == a);
        p1[a as usize] = f1;
        r.set(Col::phi1(a), f1);
        r.set(Col::phi2(a), f2);
        r.set(Col::phi3(a), f3);
        r.set(Col::phi7(a), f7);
        r.set(Col::phi4(a), f1 * ea + f7 * mu - mu * ea);
        r.set(Col::phi5(a), f2 * ea + f7 * pi - pi * ea);
        r.set(Col::phi6(a), f3 * ea + f7 * mu * pi - mu * pi * ea);
    }
    let f20 = r.get(Col::Phi2_0);
    r.set(Col::Phi3_01, p1[1] * eta.pi0 + f20 * eta.mu1 - eta.mu1 * eta.pi0);
    r.set(Col::PhiU2, smooth_term(o, eta, eps, Side::Upper, p1[1], p1[0]));
    r.set(Col::PhiL2, smooth_term(o, eta, eps, Side::Lower, p1[1], p1[0]));
    r
}

/// Rows for a whole dataset, in observation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluenceMatrix {
    pub rows: Vec<InfluenceRow>,
}

impl InfluenceMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, c: Col) -> Vec<f64> {
        self.rows.iter().map(|r| r[c]).collect()
    }

    pub fn column_mean(&self, c: Col) -> f64 {
        mean(&self.column(c))
    }

    /// Per-unit values of the linear combination aᵀφ.
    pub fn combine(&self, a: &[f64; N_COL]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.0.iter().zip(a).filter(|(_, w)| **w != 0.0).map(|(v, w)| v * w).sum())
            .collect()
    }

    pub fn column_se(&self, c: Col) -> f64 {
        sd(&self.column(c)) / (self.len() as f64).sqrt()
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(Col::ALL.iter().map(|c| c.name()))?;
        for r in &self.rows {
            wtr.write_record(r.0.iter().map(|v| v.to_string()))?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub fn influence_matrix(d: &Dataset, eta: &NuisanceValues, smooth: SmoothingSpec) -> Result<InfluenceMatrix> {
    influence_matrix_obs(&d.observations, eta, smooth)
}

pub fn influence_matrix_obs(obs: &[Observation], eta: &NuisanceValues, smooth: SmoothingSpec) -> Result<InfluenceMatrix> {
    if obs.is_empty() {
        return invalid("influence matrix needs at least one observation");
    }
    if obs.len() != eta.len() {
        return invalid(format!("{} observations but {} nuisance rows", obs.len(), eta.len()));
    }
    SmoothingSpec::new(smooth.epsilon)?;
    eta.check_finite()?;
    let rows = obs.iter().enumerate().map(|(i, o)| row_unchecked(o, &eta.at(i), smooth.epsilon)).collect();
    Ok(InfluenceMatrix { rows })
}
