//! Exact population values of every target, by finite summation over a
//! discrete covariate distribution or by Gauss–Legendre quadrature over the
//! simulation design. These are the reference values for all estimator tests.
//!
//! Bounds here are written directly from their defining expressions in
//! terms of η and the latent (π*, μ*) quantities; nothing is shared with the
//! estimator coefficient tables.

use std::collections::BTreeMap;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimators::{Family, SensitivityParams};
use crate::simulation::DgpParams;
use crate::stats::norm_cdf;

/// Mass point of the covariate distribution with every population quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub w: f64,
    pub e: f64,
    /// Informative censoring probability P(U_I(a) = 1 | x).
    pub pi_star: [f64; 2],
    /// Composite censoring probability π_a(x).
    pub pi: [f64; 2],
    pub mu: [f64; 2],
    pub mu_star: [f64; 2],
}

impl Atom {
    pub fn e_arm(&self, a: usize) -> f64 {
        if a == 1 { self.e } else { 1.0 - self.e }
    }
    /// μ1 − μ0.
    pub fn dmu(&self) -> f64 {
        self.mu[1] - self.mu[0]
    }
}

/// Finite covariate support with tabulated nuisance and latent functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretePopulation {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub e: Vec<f64>,
    pub pi_star: [Vec<f64>; 2],
    pub pi_ni: [Vec<f64>; 2],
    pub mu: [Vec<f64>; 2],
    pub mu_star: [Vec<f64>; 2],
}

impl DiscretePopulation {
    /// Binary covariate with P(X=1) = 0.7, μ0 = 0.1 + 0.05x, μ1 = 2μ0,
    /// μ* = 2μ, π*0 = (0.07, 0.12), π*1 = (0.14, 0.19), non-informative
    /// probabilities half the informative ones, and e = 0.5.
    pub fn running_example() -> Self {
        let x = vec![0.0, 1.0];
        let mu0: Vec<f64> = x.iter().map(|x| 0.1 + 0.05 * x).collect();
        let mu1: Vec<f64> = mu0.iter().map(|m| 2.0 * m).collect();
        let ps0 = vec![0.07, 0.12];
        let ps1 = vec![0.14, 0.19];
        DiscretePopulation {
            p: vec![0.3, 0.7],
            e: vec![0.5, 0.5],
            pi_ni: [ps0.iter().map(|v| v / 2.0).collect(), ps1.iter().map(|v| v / 2.0).collect()],
            pi_star: [ps0, ps1],
            mu_star: [mu0.iter().map(|m| 2.0 * m).collect(), mu1.iter().map(|m| 2.0 * m).collect()],
            mu: [mu0, mu1],
            x,
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Composite probability π = π* + π_NI − π*·π_NI at support point `i`.
    pub fn pi(&self, a: usize, i: usize) -> f64 {
        let (s, n) = (self.pi_star[a][i], self.pi_ni[a][i]);
        s + n - s * n
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.x.len();
        let cols: [&Vec<f64>; 10] = [
            &self.p,
            &self.e,
            &self.pi_star[0],
            &self.pi_star[1],
            &self.pi_ni[0],
            &self.pi_ni[1],
            &self.mu[0],
            &self.mu[1],
            &self.mu_star[0],
            &self.mu_star[1],
        ];
        if k == 0 || cols.iter().any(|c| c.len() != k) {
            return invalid("population columns must be non-empty and equal length");
        }
        if cols.iter().any(|c| c.iter().any(|v| !(0.0..=1.0).contains(v))) {
            return invalid("population probabilities must lie in [0, 1]");
        }
        if (self.p.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return invalid("support probabilities must sum to 1");
        }
        for a in 0..2 {
            for i in 0..k {
                if self.pi(a, i) >= 1.0 {
                    return invalid(format!("composite censoring is 1 at support point {i}, arm {a}"));
                }
            }
        }
        Ok(())
    }

    pub fn atoms(&self) -> Vec<Atom> {
        (0..self.len())
            .map(|i| Atom {
                w: self.p[i],
                e: self.e[i],
                pi_star: [self.pi_star[0][i], self.pi_star[1][i]],
                pi: [self.pi(0, i), self.pi(1, i)],
                mu: [self.mu[0][i], self.mu[1][i]],
                mu_star: [self.mu_star[0][i], self.mu_star[1][i]],
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Midpoint,
    GaussLegendre,
}

/// Quadrature over X ~ U(−3, 3). Gauss–Legendre uses `nodes` points on
/// each smooth piece between the censoring-model breakpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub nodes: usize,
    pub rule: Rule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { nodes: 1024, rule: Rule::GaussLegendre }
    }
}

pub const DOMAIN: (f64, f64) = (-3.0, 3.0);
const BREAKS: [f64; 4] = [-3.0, 0.0, 1.0, 3.0];

impl QuadratureSpec {
    /// Nodes and weights of the uniform density on the domain.
    pub fn nodes_weights(&self) -> Result<Vec<(f64, f64)>> {
        if self.nodes < 64 {
            return invalid(format!("quadrature needs at least 64 nodes, got {}", self.nodes));
        }
        let width = DOMAIN.1 - DOMAIN.0;
        match self.rule {
            Rule::Midpoint => {
                let h = width / self.nodes as f64;
                Ok((0..self.nodes).map(|i| (DOMAIN.0 + (i as f64 + 0.5) * h, h / width)).collect())
            }
            Rule::GaussLegendre => {
                let gl = GaussLegendre::new(self.nodes).map_err(|e| Error::Invalid(e.to_string()))?;
                let mut out = Vec::with_capacity(3 * self.nodes);
                for w in BREAKS.windows(2) {
                    let (lo, hi) = (w[0], w[1]);
                    let half = 0.5 * (hi - lo);
                    let mid = 0.5 * (hi + lo);
                    for (x, wt) in gl.iter() {
                        out.push((mid + half * x, wt * half / width));
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Population functionals of η needed by the bound expressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Functionals {
    pub mu: [f64; 2],
    pub pi: [f64; 2],
    pub pi_mu: [f64; 2],
    pub pi0_mu1: f64,
    pub mu_e: [f64; 2],
    pub pi_e: [f64; 2],
    pub pi_mu_e: [f64; 2],
    pub e: [f64; 2],
}

fn expect(atoms: &[Atom], f: impl Fn(&Atom) -> f64) -> f64 {
    atoms.iter().map(|a| a.w * f(a)).sum()
}

/// Exact report for a population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub naive: f64,
    pub psi0: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub grave_mu0: f64,
    pub grave_mu1: f64,
    pub informative_share: [f64; 2],
    pub censoring_rate: [f64; 2],
    pub functionals: Functionals,
    /// Identified values per assumption set: [lower, upper], or [v, v] for points.
    pub bounds: BTreeMap<String, [f64; 2]>,
    /// Ψ2 bounds with the indicator in place of the smoother.
    pub psi2_exact: [f64; 2],
    pub params: SensitivityParams,
}

impl OracleReport {
    pub fn get(&self, f: Family) -> [f64; 2] {
        self.bounds[f.name()]
    }
}

/// Identified value of `family` on the population, from its defining display.
pub fn family_value(atoms: &[Atom], f: Family, p: &SensitivityParams) -> [f64; 2] {
    let naive = expect(atoms, |a| a.dmu());
    let pm = |k: usize| expect(atoms, |a| a.pi[k] * a.mu[k]);
    let p1m = |k: usize| expect(atoms, |a| a.pi[k] * (1.0 - a.mu[k]));
    let eps = p.epsilon;
    match f {
        Family::Naive => [naive; 2],
        Family::General => [naive - pm(1) - p1m(0), naive + p1m(1) + pm(0)],
        Family::MonotonePositive => [naive - p.delta_u0 * p1m(0), naive + p.delta_u1 * p1m(1)],
        Family::MonotoneNegative => [naive - p.delta_u1 * pm(1), naive + p.delta_u0 * pm(0)],
        Family::BoundedRisk => {
            let (t0, t1) = (p.tau0, p.tau1);
            [
                naive + p.delta_u1 * (1.0 / t1 - 1.0) * pm(1) - p.delta_u0 * (t0 - 1.0) * pm(0),
                naive + p.delta_u1 * (t1 - 1.0) * pm(1) - p.delta_u0 * (1.0 / t0 - 1.0) * pm(0),
            ]
        }
        Family::PointAte => {
            let v = naive + (p.tau1 - 1.0) * p.delta1 * pm(1) - (p.tau0 - 1.0) * p.delta0 * pm(0);
            [v; 2]
        }
        Family::Psi1 => [
            naive + p.delta_l1 * p1m(1) - p.delta_u0 * p1m(0),
            naive + p.delta_u1 * p1m(1) - p.delta_l0 * p1m(0),
        ],
        Family::PointPsi1 => [naive + p.delta1 * p1m(1) - p.delta0 * p1m(0); 2],
        Family::Psi2Smooth => [
            naive - p.delta_u0 * expect(atoms, |a| a.pi[0] * a.dmu() * norm_cdf(a.dmu(), eps)),
            naive - p.delta_u0 * expect(atoms, |a| a.pi[0] * a.dmu() * norm_cdf(-a.dmu(), eps)),
        ],
        Family::PointPsi2 => [naive - p.delta0 * expect(atoms, |a| a.pi[0] * a.dmu()); 2],
        Family::UnconfoundedPsi0 => {
            // E[Y(1)] ≥ E[e1 μ1 (1 − π1)], E[Y(0)] ≤ E[e0 {μ0 + π0(1 − μ0)}] + P(A = 1)
            let y1_lo = expect(atoms, |a| a.e_arm(1) * a.mu[1] * (1.0 - a.pi[1]));
            let y1_hi = expect(atoms, |a| a.e_arm(1) * (a.mu[1] + a.pi[1] * (1.0 - a.mu[1])) + a.e_arm(0));
            let y0_lo = expect(atoms, |a| a.e_arm(0) * a.mu[0] * (1.0 - a.pi[0]));
            let y0_hi = expect(atoms, |a| a.e_arm(0) * (a.mu[0] + a.pi[0] * (1.0 - a.mu[0])) + a.e_arm(1));
            [y1_lo - y0_hi, y1_hi - y0_lo]
        }
        Family::UnconfoundedPsi1 => {
            let z = |k: usize, d: f64| expect(atoms, |a| a.e_arm(k) * (a.mu[k] + d * a.pi[k] * (1.0 - a.mu[k])));
            let other = |k: usize| expect(atoms, |a| a.e_arm(1 - k));
            [
                z(1, p.delta_l1) - z(0, p.delta_u0) - other(0),
                z(1, p.delta_u1) + other(1) - z(0, p.delta_l0),
            ]
        }
    }
}

fn functionals(atoms: &[Atom]) -> Functionals {
    let arm = |f: &dyn Fn(&Atom, usize) -> f64| [expect(atoms, |a| f(a, 0)), expect(atoms, |a| f(a, 1))];
    Functionals {
        mu: arm(&|a, k| a.mu[k]),
        pi: arm(&|a, k| a.pi[k]),
        pi_mu: arm(&|a, k| a.pi[k] * a.mu[k]),
        pi0_mu1: expect(atoms, |a| a.pi[0] * a.mu[1]),
        mu_e: arm(&|a, k| a.mu[k] * a.e_arm(k)),
        pi_e: arm(&|a, k| a.pi[k] * a.e_arm(k)),
        pi_mu_e: arm(&|a, k| a.pi[k] * a.mu[k] * a.e_arm(k)),
        e: arm(&|a, k| a.e_arm(k)),
    }
}

/// Full report from atoms.
pub fn report(atoms: &[Atom], params: &SensitivityParams) -> OracleReport {
    let naive = expect(atoms, |a| a.dmu());
    let psi0 = naive + expect(atoms, |a| {
        a.pi_star[1] * (a.mu_star[1] - a.mu[1]) - a.pi_star[0] * (a.mu_star[0] - a.mu[0])
    });
    let psi1 = naive + expect(atoms, |a| a.pi_star[1] * (1.0 - a.mu[1]) - a.pi_star[0] * (1.0 - a.mu[0]));
    let psi2 = naive - expect(atoms, |a| a.pi_star[0] * a.dmu());
    let censoring_rate = [expect(atoms, |a| a.pi[0]), expect(atoms, |a| a.pi[1])];
    let informative_share = [
        expect(atoms, |a| a.pi_star[0]) / censoring_rate[0],
        expect(atoms, |a| a.pi_star[1]) / censoring_rate[1],
    ];
    let bounds = Family::ALL.iter().map(|f| (f.name().to_string(), family_value(atoms, *f, params))).collect();
    let du0 = params.delta_u0;
    let psi2_exact = [
        naive - du0 * expect(atoms, |a| a.pi[0] * a.dmu().max(0.0)),
        naive - du0 * expect(atoms, |a| a.pi[0] * a.dmu().min(0.0)),
    ];
    OracleReport {
        naive,
        psi0,
        psi1,
        psi2,
        grave_mu0: expect(atoms, |a| a.pi[0] * a.mu[0]),
        grave_mu1: expect(atoms, |a| a.pi[1] * a.mu[1]),
        informative_share,
        censoring_rate,
        functionals: functionals(atoms),
        bounds,
        psi2_exact,
        params: *params,
    }
}

/// Every target on a discrete population, by exact summation.
pub fn population_bounds(pop: &DiscretePopulation, params: &SensitivityParams) -> Result<OracleReport> {
    pop.validate()?;
    Ok(report(&pop.atoms(), params))
}

/// Quadrature atoms for the simulation design.
pub fn dgp_atoms(dgp: &DgpParams, quad: &QuadratureSpec) -> Result<Vec<Atom>> {
    dgp.validate()?;
    Ok(quad.nodes_weights()?.into_iter().map(|(x, w)| dgp.atom(x, w)).collect())
}

/// Truth for the simulation study's six estimands plus the causal targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DgpTruth {
    pub naive: f64,
    /// E[π1], E[π0], E[π1μ1], E[π0μ0], E[π0 Δμ Φ_ε(Δμ)].
    pub omega: [f64; 5],
    pub psi0: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub epsilon: f64,
    pub report: OracleReport,
}

impl DgpTruth {
    /// The six simulation estimands in table order.
    pub fn estimands(&self) -> [f64; 6] {
        [self.naive, self.omega[0], self.omega[1], self.omega[2], self.omega[3], self.omega[4]]
    }
}

pub fn population_truth_dgp(dgp: &DgpParams, quad: &QuadratureSpec, params: &SensitivityParams) -> Result<DgpTruth> {
    let atoms = dgp_atoms(dgp, quad)?;
    let eps = params.epsilon;
    let rep = report(&atoms, params);
    let omega = [
        rep.censoring_rate[1],
        rep.censoring_rate[0],
        rep.grave_mu1,
        rep.grave_mu0,
        expect(&atoms, |a| a.pi[0] * a.dmu() * norm_cdf(a.dmu(), eps)),
    ];
    Ok(DgpTruth { naive: rep.naive, omega, psi0: rep.psi0, psi1: rep.psi1, psi2: rep.psi2, epsilon: eps, report: rep })
}
