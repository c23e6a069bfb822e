//! Bundled synthetic datasets so the full pipeline runs offline.
//!
//! - `toy_deterministic`: `target = 1` exactly when `color == red`; `shape`
//!   and `noise` are independent of the target.
//! - `toy_smoothing`: a 30-level `city` column whose levels have their own
//!   positive rate drawn from Beta(2, 2), with level sizes skewed so that
//!   rare levels need smoothing; `income` adds a weak linear signal.
//! - `toy_mixed`: two categorical and two numerical columns with missing
//!   cells; the target follows a logistic model of `plan`, `region` and `age`.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand_distr::{Beta, Distribution, Normal};

use super::{write_file, Result};
use crate::util::{derive_seed, rng};

/// Seed used for the bundled files.
pub const TOY_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq)]
pub struct ToyDataset {
    pub name: &'static str,
    pub csv: String,
}

fn fmt(x: f64) -> String {
    format!("{x:.4}")
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).unwrap();
    for r in rows {
        w.write_record(&r).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn deterministic(seed: u64) -> ToyDataset {
    let mut r = rng(seed);
    let colors = ["red", "green", "blue", "yellow"];
    let shapes = ["circle", "square", "triangle"];
    let normal = Normal::new(0.0, 1.0).unwrap();
    let rows = (0..240)
        .map(|i| {
            // Cycle colors first so every level appears early and often.
            let color = if i < 8 {
                colors[i % 4]
            } else {
                colors[r.random_range(0..4)]
            };
            let shape = shapes[r.random_range(0..3)];
            let y = u8::from(color == "red");
            vec![
                color.into(),
                shape.into(),
                fmt(normal.sample(&mut r)),
                y.to_string(),
            ]
        })
        .collect();
    ToyDataset {
        name: "toy_deterministic",
        csv: csv_text(&["color", "shape", "noise", "target"], rows),
    }
}

fn smoothing(seed: u64) -> ToyDataset {
    let mut r = rng(seed);
    let beta = Beta::new(2.0, 2.0).unwrap();
    let rates: Vec<f64> = (0..30).map(|_| beta.sample(&mut r)).collect();
    // Zipf-like level weights 1/(l+1).
    let weights: Vec<f64> = (0..30).map(|l| 1.0 / (l as f64 + 1.0)).collect();
    let total: f64 = weights.iter().sum();
    let normal = Normal::new(0.0, 1.0).unwrap();
    let rows = (0..400)
        .map(|i| {
            let level = if i < 30 {
                i
            } else {
                let mut u = r.random::<f64>() * total;
                weights
                    .iter()
                    .position(|w| {
                        u -= w;
                        u <= 0.0
                    })
                    .unwrap_or(29)
            };
            let income = normal.sample(&mut r);
            let p = (rates[level] + 0.1 * income).clamp(0.02, 0.98);
            let y = u8::from(r.random::<f64>() < p);
            vec![format!("city{level:02}"), fmt(income), y.to_string()]
        })
        .collect();
    ToyDataset {
        name: "toy_smoothing",
        csv: csv_text(&["city", "income", "target"], rows),
    }
}

fn mixed(seed: u64) -> ToyDataset {
    let mut r = rng(seed);
    let plans = [
        ("basic", -1.0),
        ("plus", 0.0),
        ("pro", 1.0),
        ("team", 1.5),
        ("edu", -0.5),
    ];
    let regions = [
        ("north", 0.5),
        ("south", -0.5),
        ("east", 0.0),
        ("west", 0.25),
        ("central", -0.25),
        ("islands", 0.75),
    ];
    let age = Normal::new(40.0, 12.0).unwrap();
    let visits = Normal::new(5.0, 2.0).unwrap();
    let rows = (0..300)
        .map(|_| {
            let (plan, bp) = plans[r.random_range(0..plans.len())];
            let (region, br) = regions[r.random_range(0..regions.len())];
            let a: f64 = age.sample(&mut r);
            let v: f64 = visits.sample(&mut r);
            let z = bp + br + 0.04 * (a - 40.0);
            let y = u8::from(r.random::<f64>() < 1.0 / (1.0 + (-z).exp()));
            let region_cell = if r.random::<f64>() < 0.1 {
                String::new()
            } else {
                region.into()
            };
            let visits_cell = if r.random::<f64>() < 0.05 {
                String::new()
            } else {
                fmt(v)
            };
            vec![plan.into(), region_cell, fmt(a), visits_cell, y.to_string()]
        })
        .collect();
    ToyDataset {
        name: "toy_mixed",
        csv: csv_text(&["plan", "region", "age", "visits", "target"], rows),
    }
}

/// The three toy datasets generated from `seed`.
pub fn toy_datasets(seed: u64) -> Vec<ToyDataset> {
    vec![
        deterministic(derive_seed(seed, 0)),
        smoothing(derive_seed(seed, 1)),
        mixed(derive_seed(seed, 2)),
    ]
}

/// Writes `<name>.csv` for each toy dataset into `dir`.
pub fn write_toy_datasets(dir: &Path, seed: u64) -> Result<Vec<PathBuf>> {
    toy_datasets(seed)
        .into_iter()
        .map(|t| write_file(dir, &format!("{}.csv", t.name), &t.csv))
        .collect()
}
