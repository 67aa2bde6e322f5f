//! Two-step learned energy model.
//!
//! Step one is a linear calibration mapping simulated (time, distance) to
//! their real-flight counterparts; step two is a Gaussian kernel ridge
//! regression from real (time, distance) to consumed joules. Composed,
//! they predict the energy a simulated mission will cost in the field,
//! which in turn drives the pre-flight battery feasibility check.

use crate::model::FleetConfig;
use crate::planner::Plan;
use serde::{Deserialize, Serialize};
use std::io::Read;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnergyError {
    #[error("need at least {0} samples, got {1}")]
    TooFewSamples(usize, usize),
    #[error("degenerate calibration data")]
    DegenerateCalibration,
    #[error("kernel system is not positive definite")]
    NotPositiveDefinite,
    #[error("csv column {0}: {1}")]
    Csv(String, String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Affine map [t_sim, d_sim, 1] -> [t_real, d_real], one row per output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrationModel {
    pub a: [[f64; 3]; 2],
}

impl CalibrationModel {
    pub fn identity() -> Self {
        CalibrationModel {
            a: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        }
    }

    pub fn apply(&self, t_sim: f64, d_sim: f64) -> (f64, f64) {
        let x = [t_sim, d_sim, 1.0];
        let t = self.a[0].iter().zip(&x).map(|(a, b)| a * b).sum();
        let d = self.a[1].iter().zip(&x).map(|(a, b)| a * b).sum();
        (t, d)
    }
}

/// Per-feature standardizer (zero mean, unit scale).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: [f64; 2],
    pub scale: [f64; 2],
}

impl Standardizer {
    fn fit(features: &[(f64, f64)]) -> Self {
        let n = features.len() as f64;
        let mean = [
            features.iter().map(|f| f.0).sum::<f64>() / n,
            features.iter().map(|f| f.1).sum::<f64>() / n,
        ];
        let var = [
            features.iter().map(|f| (f.0 - mean[0]).powi(2)).sum::<f64>() / n,
            features.iter().map(|f| (f.1 - mean[1]).powi(2)).sum::<f64>() / n,
        ];
        let scale = [var[0].sqrt().max(1e-12), var[1].sqrt().max(1e-12)];
        Standardizer { mean, scale }
    }

    fn apply(&self, f: (f64, f64)) -> (f64, f64) {
        (
            (f.0 - self.mean[0]) / self.scale[0],
            (f.1 - self.mean[1]) / self.scale[1],
        )
    }
}

/// Fitted kernel ridge regressor over standardized (time, distance).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConsumptionModel {
    pub support: Vec<(f64, f64)>,
    pub alpha: Vec<f64>,
    pub bandwidth: f64,
    pub ridge: f64,
    pub standardizer: Standardizer,
}

/// One flight record; sim columns present only for calibration pairs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FlightSample {
    pub t: f64,
    pub d: f64,
    pub energy: f64,
}

pub const DEFAULT_RIDGE: f64 = 1e-3;

/// Least-squares fit of the sim -> real calibration from
/// (t_sim, d_sim, t_real, d_real) pairs.
pub fn fit_calibration(pairs: &[(f64, f64, f64, f64)]) -> Result<CalibrationModel, EnergyError> {
    if pairs.len() < 3 {
        return Err(EnergyError::TooFewSamples(3, pairs.len()));
    }
    // normal equations: (X^T X) beta = X^T y with X rows [t, d, 1]
    let mut xtx = [[0.0f64; 3]; 3];
    let mut xty = [[0.0f64; 3]; 2];
    for &(t, d, tr, dr) in pairs {
        let row = [t, d, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                xtx[i][j] += row[i] * row[j];
            }
            xty[0][i] += row[i] * tr;
            xty[1][i] += row[i] * dr;
        }
    }
    let mut a = [[0.0f64; 3]; 2];
    for out in 0..2 {
        a[out] = solve3(xtx, xty[out]).ok_or(EnergyError::DegenerateCalibration)?;
    }
    Ok(CalibrationModel { a })
}

/// Solve a 3x3 system by Gaussian elimination with partial pivoting.
fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() < 1e-9 {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in (col + 1)..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0f64; 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for k in (row + 1)..3 {
            s -= m[row][k] * x[k];
        }
        x[row] = s / m[row][row];
    }
    Some(x)
}

fn gaussian(a: (f64, f64), b: (f64, f64), bandwidth: f64) -> f64 {
    let d2 = (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
    (-d2 / (2.0 * bandwidth * bandwidth)).exp()
}

/// Median pairwise distance between standardized features; the usual
/// bandwidth default.
fn median_heuristic(features: &[(f64, f64)]) -> f64 {
    let mut dists: Vec<f64> = Vec::new();
    for i in 0..features.len() {
        for j in (i + 1)..features.len() {
            let d = ((features[i].0 - features[j].0).powi(2)
                + (features[i].1 - features[j].1).powi(2))
            .sqrt();
            if d > 0.0 {
                dists.push(d);
            }
        }
    }
    if dists.is_empty() {
        return 1.0;
    }
    dists.sort_by(|a, b| a.total_cmp(b));
    dists[dists.len() / 2].max(1e-9)
}

/// Fit the kernel ridge consumption model. `bandwidth = None` uses the
/// median heuristic; the dual weights solve `(K + ridge*n*I) alpha = y`
/// with a Cholesky factorization.
pub fn fit_consumption(
    samples: &[FlightSample],
    ridge: f64,
    bandwidth: Option<f64>,
) -> Result<ConsumptionModel, EnergyError> {
    if samples.len() < 2 {
        return Err(EnergyError::TooFewSamples(2, samples.len()));
    }
    let raw: Vec<(f64, f64)> = samples.iter().map(|s| (s.t, s.d)).collect();
    let standardizer = Standardizer::fit(&raw);
    let feats: Vec<(f64, f64)> = raw.iter().map(|&f| standardizer.apply(f)).collect();
    let bandwidth = bandwidth.unwrap_or_else(|| median_heuristic(&feats));

    let n = feats.len();
    let mut k = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            k[i][j] = gaussian(feats[i], feats[j], bandwidth);
        }
        k[i][i] += ridge * n as f64;
    }
    let y: Vec<f64> = samples.iter().map(|s| s.energy).collect();
    let alpha = cholesky_solve(&k, &y).ok_or(EnergyError::NotPositiveDefinite)?;
    Ok(ConsumptionModel {
        support: feats,
        alpha,
        bandwidth,
        ridge,
        standardizer,
    })
}

/// Solve A x = b for symmetric positive definite A.
fn cholesky_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i][j] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    // forward then backward substitution
    let mut y = vec![0.0f64; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i][k] * y[k];
        }
        y[i] = s / l[i][i];
    }
    let mut x = vec![0.0f64; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[k][i] * x[k];
        }
        x[i] = s / l[i][i];
    }
    Some(x)
}

impl ConsumptionModel {
    /// Predicted joules for real (time, distance). May dip negative near
    /// the origin; callers compose through [`predict_energy`] for the
    /// clamped pipeline.
    pub fn predict(&self, t: f64, d: f64) -> f64 {
        let z = self.standardizer.apply((t, d));
        self.support
            .iter()
            .zip(&self.alpha)
            .map(|(s, a)| a * gaussian(z, *s, self.bandwidth))
            .sum()
    }
}

/// Composed prediction: calibrate simulated (t, d) to real, regress to
/// joules, clamp at zero.
pub fn predict_energy(
    cal: &CalibrationModel,
    con: &ConsumptionModel,
    t_sim: f64,
    d_sim: f64,
) -> f64 {
    let (t, d) = cal.apply(t_sim, d_sim);
    con.predict(t, d).max(0.0)
}

/// Per-UAV feasibility verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub uav: usize,
    pub predicted_j: f64,
    pub budget_j: f64,
    pub feasible: bool,
}

/// Battery margin applied before declaring a flight feasible.
pub const SAFETY_FACTOR: f64 = 0.8;

/// Predict each UAV's mission energy from its planned route length and
/// cruise time, and compare against the derated battery budget.
pub fn check_feasibility(
    plan: &Plan,
    fleet: &FleetConfig,
    cal: &CalibrationModel,
    con: &ConsumptionModel,
) -> Vec<FeasibilityReport> {
    plan.report
        .per_uav_distance
        .iter()
        .enumerate()
        .map(|(uav, &dist)| {
            let t = dist / fleet.cruise_speed;
            let predicted = predict_energy(cal, con, t, dist);
            let budget = SAFETY_FACTOR * fleet.battery_capacity;
            FeasibilityReport {
                uav,
                predicted_j: predicted,
                budget_j: budget,
                feasible: predicted <= budget,
            }
        })
        .collect()
}

/// Rows of the training CSV: `t_sim_s,d_sim_m,t_real_s,d_real_m,energy_j`.
/// Calibration rows may leave `energy_j` blank; consumption rows may leave
/// the sim columns blank.
#[derive(Debug, Clone, Default)]
pub struct TrainingData {
    pub calibration: Vec<(f64, f64, f64, f64)>,
    pub consumption: Vec<FlightSample>,
}

pub fn read_training_csv<R: Read>(reader: R) -> Result<TrainingData, EnergyError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| EnergyError::Csv("header".into(), e.to_string()))?
        .clone();
    let expect = ["t_sim_s", "d_sim_m", "t_real_s", "d_real_m", "energy_j"];
    for name in expect {
        if !headers.iter().any(|h| h == name) {
            return Err(EnergyError::Csv(name.into(), "missing column".into()));
        }
    }
    let idx = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let cols = [
        idx("t_sim_s"),
        idx("d_sim_m"),
        idx("t_real_s"),
        idx("d_real_m"),
        idx("energy_j"),
    ];
    let mut data = TrainingData::default();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| EnergyError::Csv(format!("row {}", line + 2), e.to_string()))?;
        let field = |c: usize, name: &str| -> Result<Option<f64>, EnergyError> {
            let raw = rec.get(cols[c]).unwrap_or("").trim();
            if raw.is_empty() {
                return Ok(None);
            }
            raw.parse::<f64>()
                .map(Some)
                .map_err(|e| EnergyError::Csv(name.into(), format!("row {}: {e}", line + 2)))
        };
        let t_sim = field(0, "t_sim_s")?;
        let d_sim = field(1, "d_sim_m")?;
        let t_real = field(2, "t_real_s")?;
        let d_real = field(3, "d_real_m")?;
        let energy = field(4, "energy_j")?;
        if let (Some(ts), Some(ds), Some(tr), Some(dr)) = (t_sim, d_sim, t_real, d_real) {
            data.calibration.push((ts, ds, tr, dr));
        }
        if let (Some(tr), Some(dr), Some(e)) = (t_real, d_real, energy) {
            data.consumption.push(FlightSample {
                t: tr,
                d: dr,
                energy: e,
            });
        }
    }
    Ok(data)
}
