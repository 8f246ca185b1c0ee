use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bandwidth {
    /// 1.06 · sd · n^(-1/5) per covariate.
    Silverman,
    Fixed(f64),
}

/// Nadaraya–Watson smoother with a Gaussian product kernel.
#[derive(Debug, Clone)]
pub struct KernelModel {
    x: Vec<Vec<f64>>,
    y: Vec<f64>,
    pub h: Vec<f64>,
    pub global_mean: f64,
}

pub fn fit_kernel(features: &[Vec<f64>], labels: &[f64], bw: Bandwidth) -> Result<KernelModel> {
    let n = labels.len();
    if n < 2 {
        return invalid("kernel smoother needs at least two points");
    }
    if features.len() != n {
        return invalid("features and labels differ in length");
    }
    let p = features[0].len();
    let h = match bw {
        Bandwidth::Fixed(h) if h > 0.0 => vec![h; p],
        Bandwidth::Fixed(_) => return invalid("bandwidth must be positive"),
        Bandwidth::Silverman => (0..p)
            .map(|j| {
                let m = features.iter().map(|r| r[j]).sum::<f64>() / n as f64;
                let v = features.iter().map(|r| (r[j] - m).powi(2)).sum::<f64>() / (n as f64 - 1.0);
                let h = 1.06 * v.sqrt() * (n as f64).powf(-0.2);
                if h > 0.0 { h } else { 1.0 }
            })
            .collect(),
    };
    Ok(KernelModel {
        x: features.to_vec(),
        y: labels.to_vec(),
        h,
        global_mean: labels.iter().sum::<f64>() / n as f64,
    })
}

impl KernelModel {
    /// Returns the local average and whether the global-mean fallback was used.
    pub fn predict(&self, q: &[f64]) -> (f64, bool) {
        let mut sw = 0.0;
        let mut swy = 0.0;
        for (xi, yi) in self.x.iter().zip(&self.y) {
            let mut u2 = 0.0;
            for ((a, b), h) in xi.iter().zip(q).zip(&self.h) {
                let u = (a - b) / h;
                u2 += u * u;
            }
            let w = (-0.5 * u2).exp();
            sw += w;
            swy += w * yi;
        }
        if sw > 0.0 && sw.is_finite() {
            ((swy / sw).clamp(0.0, 1.0), false)
        } else {
            (self.global_mean, true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_labels() {
        let x: Vec<Vec<f64>> = (0..50).map(|i| vec![i as f64 / 10.0]).collect();
        let m = fit_kernel(&x, &vec![0.4; 50], Bandwidth::Silverman).unwrap();
        for q in [0.0, 2.5, 4.9] {
            assert!((m.predict(&[q]).0 - 0.4).abs() < 1e-12);
        }
    }

    #[test]
    fn step_midpoint() {
        let n = 20_000;
        let x: Vec<Vec<f64>> = (0..n).map(|i| vec![-1.0 + 2.0 * i as f64 / (n - 1) as f64]).collect();
        let y: Vec<f64> = x.iter().map(|v| (v[0] > 0.0) as u8 as f64).collect();
        let m = fit_kernel(&x, &y, Bandwidth::Fixed(0.02)).unwrap();
        assert!((m.predict(&[0.0]).0 - 0.5).abs() < 0.1);
        assert!(m.predict(&[0.5]).0 > 0.99);
    }

    #[test]
    fn far_query_falls_back() {
        let x = vec![vec![0.0], vec![1.0]];
        let m = fit_kernel(&x, &[0.0, 1.0], Bandwidth::Fixed(0.01)).unwrap();
        let (v, fb) = m.predict(&[1e6]);
        assert!(fb);
        assert_eq!(v, 0.5);
    }
}
