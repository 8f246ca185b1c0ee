//! Observations, CSV ingestion and fold assignment.
//!
//! The CSV schema is `y,a,c,x1,...,xp` with `y` left empty exactly when
//! `c = 1`. Outcomes must already lie in `[0, 1]`.

use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// One unit's record O = (X, A, C, (1-C)Y).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub x: Vec<f64>,
    pub a: u8,
    pub c: u8,
    /// Present if and only if the unit is uncensored.
    pub y: Option<f64>,
}

impl Observation {
    pub fn new(x: Vec<f64>, a: u8, c: u8, y: Option<f64>) -> Result<Self> {
        let o = Observation { x, a, c, y };
        o.check().map_err(Error::Invalid)?;
        Ok(o)
    }

    fn check(&self) -> std::result::Result<(), String> {
        if self.a > 1 {
            return Err(format!("treatment must be 0 or 1, got {}", self.a));
        }
        if self.c > 1 {
            return Err(format!("censoring flag must be 0 or 1, got {}", self.c));
        }
        match (self.c, self.y) {
            (1, Some(_)) => Err("outcome present for censored unit".into()),
            (0, None) => Err("outcome missing for uncensored unit".into()),
            (_, Some(y)) if !(0.0..=1.0).contains(&y) => {
                Err(format!("outcome {y} outside [0, 1]"))
            }
            _ if self.x.iter().any(|v| !v.is_finite()) => Err("non-finite covariate".into()),
            _ => Ok(()),
        }
    }

    /// Outcome with censored units mapped to zero, i.e. (1-C)Y.
    #[inline]
    pub fn y_or_zero(&self) -> f64 {
        self.y.unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub observations: Vec<Observation>,
    pub covariate_names: Vec<String>,
}

impl Dataset {
    pub fn new(observations: Vec<Observation>, covariate_names: Vec<String>) -> Result<Self> {
        if observations.is_empty() {
            return invalid("dataset is empty");
        }
        let p = covariate_names.len();
        for (i, o) in observations.iter().enumerate() {
            if o.x.len() != p {
                return Err(Error::Row {
                    row: i + 1,
                    msg: format!("expected {p} covariates, found {}", o.x.len()),
                });
            }
            o.check().map_err(|msg| Error::Row { row: i + 1, msg })?;
        }
        Ok(Dataset { observations, covariate_names })
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.covariate_names.len()
    }

    /// Both arms present, each with at least one uncensored unit.
    pub fn check_estimable(&self) -> Result<()> {
        for arm in 0..=1u8 {
            let any = self.observations.iter().any(|o| o.a == arm);
            let unc = self.observations.iter().any(|o| o.a == arm && o.c == 0);
            if !any {
                return invalid(format!("no units in arm {arm}"));
            }
            if !unc {
                return invalid(format!("no uncensored units in arm {arm}"));
            }
        }
        Ok(())
    }
}

fn parse_flag(s: &str, name: &str, row: usize) -> Result<u8> {
    match s.trim() {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(Error::Row { row, msg: format!("{name} must be 0 or 1, got {other:?}") }),
    }
}

/// Parse the CSV schema from any reader. Rows are numbered from 1, header excluded.
pub fn read_dataset<R: Read>(rdr: R) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(rdr);
    let header = rdr.headers()?.clone();
    let cols: Vec<&str> = header.iter().map(str::trim).collect();
    if cols.len() < 4 || cols[0] != "y" || cols[1] != "a" || cols[2] != "c" {
        return invalid(format!(
            "header must be y,a,c followed by at least one covariate, got {:?}",
            cols.join(",")
        ));
    }
    let names: Vec<String> = cols[3..].iter().map(|s| s.to_string()).collect();
    let mut obs = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::Row { row, msg: e.to_string() })?;
        if rec.len() != cols.len() {
            return Err(Error::Row {
                row,
                msg: format!("expected {} fields, found {}", cols.len(), rec.len()),
            });
        }
        let a = parse_flag(&rec[1], "a", row)?;
        let c = parse_flag(&rec[2], "c", row)?;
        let ys = rec[0].trim();
        let y = if ys.is_empty() {
            None
        } else {
            Some(ys.parse::<f64>().map_err(|_| Error::Row { row, msg: format!("bad outcome {ys:?}") })?)
        };
        let mut x = Vec::with_capacity(names.len());
        for f in rec.iter().skip(3) {
            let v = f
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Row { row, msg: format!("bad covariate {f:?}") })?;
            x.push(v);
        }
        let o = Observation { x, a, c, y };
        o.check().map_err(|msg| Error::Row { row, msg })?;
        obs.push(o);
    }
    if obs.is_empty() {
        return invalid("dataset has no rows");
    }
    Ok(Dataset { observations: obs, covariate_names: names })
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let f = std::fs::File::open(path)?;
    read_dataset(std::io::BufReader::new(f))
}

/// Write the CSV schema. Floats use the shortest representation that
/// parses back to the same value, so a load/save cycle is lossless.
pub fn write_dataset<W: Write>(d: &Dataset, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut head = vec!["y".to_string(), "a".into(), "c".into()];
    head.extend(d.covariate_names.iter().cloned());
    wtr.write_record(&head)?;
    let mut rec = Vec::with_capacity(head.len());
    for o in &d.observations {
        rec.clear();
        rec.push(o.y.map(|y| y.to_string()).unwrap_or_default());
        rec.push(o.a.to_string());
        rec.push(o.c.to_string());
        rec.extend(o.x.iter().map(|v| v.to_string()));
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn save_dataset(d: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_dataset(d, std::io::BufWriter::new(f))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub fold_of: Vec<usize>,
    pub k: usize,
    pub seed: u64,
}

impl FoldAssignment {
    /// Indices belonging to fold `f`.
    pub fn members(&self, f: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] == f).collect()
    }

    /// Indices outside fold `f`, the training set for units in `f`.
    pub fn complement(&self, f: usize) -> Vec<usize> {
        (0..self.fold_of.len()).filter(|&i| self.fold_of[i] != f).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &f in &self.fold_of {
            s[f] += 1;
        }
        s
    }
}

/// Seeded shuffle of `0..n`, then round-robin into `k` folds.
pub fn split_folds(n: usize, k: usize, seed: u64) -> Result<FoldAssignment> {
    if k < 2 {
        return invalid(format!("fold count must be at least 2, got {k}"));
    }
    if k > n {
        return invalid(format!("fold count {k} exceeds sample size {n}"));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut fold_of = vec![0; n];
    for (pos, &i) in idx.iter().enumerate() {
        fold_of[i] = pos % k;
    }
    Ok(FoldAssignment { fold_of, k, seed })
}
