//! Adaptive Dormand-Prince 5(4) integration of the coupled system, with
//! dense output, CSV trajectories and Backlund-covariance experiments.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::backlund::{apply_word, BacklundOptions, TransformedState};
use crate::error::{Error, Result};
use crate::hamiltonian::{vector_field, PhasePoint};
use crate::weyl::{ParameterVector, WeylWord};

pub const CSV_HEADER: &str = "s,q1,p1,q2,p2,q3,p3";

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
/// Dense-output weights.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

const SAFETY: f64 = 0.9;
const PI_BETA: f64 = 0.04;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Chosen automatically when `None`.
    pub initial_step: Option<f64>,
    pub max_steps: usize,
    pub dense: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rtol: 1e-10,
            atol: 1e-12,
            initial_step: None,
            max_steps: 100_000,
            dense: false,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        if let Some(h) = self.initial_step {
            if !(h.is_finite() && h > 0.0) {
                return Err(Error::InvalidConfig("initial step must be positive".into()));
            }
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be positive".into()));
        }
        Ok(())
    }

    /// Same configuration with both tolerances multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        IntegratorConfig {
            rtol: self.rtol * factor,
            atol: self.atol * factor,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub s: f64,
    /// `(q1, p1, q2, p2, q3, p3)`
    pub y: [f64; 6],
}

impl Sample {
    pub fn point(&self) -> PhasePoint<f64> {
        PhasePoint::from_coords(&self.y, self.s)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IntegratorStats {
    pub accepted: usize,
    pub rejected: usize,
    /// Scaled error norm of the last accepted step.
    pub final_error: f64,
}

/// Quartic interpolant over one accepted step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DenseSegment {
    pub s0: f64,
    pub h: f64,
    pub coeffs: [[f64; 6]; 5],
}

impl DenseSegment {
    pub fn eval(&self, s: f64) -> [f64; 6] {
        let t = (s - self.s0) / self.h;
        let u = 1.0 - t;
        let c = &self.coeffs;
        std::array::from_fn(|k| {
            c[0][k] + t * (c[1][k] + u * (c[2][k] + t * (c[3][k] + u * c[4][k])))
        })
    }

    fn contains(&self, s: f64) -> bool {
        let (lo, hi) = if self.h > 0.0 {
            (self.s0, self.s0 + self.h)
        } else {
            (self.s0 + self.h, self.s0)
        };
        (lo..=hi).contains(&s)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub stats: IntegratorStats,
    pub dense: Vec<DenseSegment>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// Dense-output value at `s`; `None` outside the covered interval or
    /// when dense output was not recorded.
    pub fn interpolate(&self, s: f64) -> Option<[f64; 6]> {
        let first = self.dense.first()?;
        let forward = first.h > 0.0;
        let idx = self.dense.partition_point(|seg| {
            let end = seg.s0 + seg.h;
            if forward {
                end < s
            } else {
                end > s
            }
        });
        let seg = self.dense.get(idx)?;
        seg.contains(s).then(|| seg.eval(s))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 160);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for smp in &self.samples {
            let _ = write!(out, "{:.16e}", smp.s);
            for v in smp.y {
                let _ = write!(out, ",{v:.16e}");
            }
            out.push('\n');
        }
        out
    }

    /// Reads samples written by [`Trajectory::to_csv`]. Statistics and dense
    /// output are not part of the format.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => {
                return Err(Error::Parse(format!(
                    "expected CSV header {CSV_HEADER:?}, found {other:?}"
                )))
            }
        }
        let mut samples = Vec::new();
        for (row, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let vals = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", row + 1)))?;
            if vals.len() != 7 {
                return Err(Error::Parse(format!(
                    "row {}: expected 7 fields, found {}",
                    row + 1,
                    vals.len()
                )));
            }
            samples.push(Sample {
                s: vals[0],
                y: std::array::from_fn(|k| vals[k + 1]),
            });
        }
        Ok(Trajectory {
            samples,
            ..Trajectory::default()
        })
    }
}

fn region(s: f64) -> i8 {
    if s < 0.0 {
        0
    } else if s < 1.0 {
        1
    } else {
        2
    }
}

fn check_interval(s0: f64, s_end: f64) -> Result<()> {
    for s in [s0, s_end] {
        if !s.is_finite() {
            return Err(Error::InvalidInterval(format!("non-finite endpoint {s}")));
        }
        if s == 0.0 || s == 1.0 {
            return Err(Error::SingularIndependentVariable(s.to_string()));
        }
    }
    if s0 == s_end {
        return Err(Error::InvalidInterval(format!(
            "empty interval at s = {s0}"
        )));
    }
    if region(s0) != region(s_end) {
        return Err(Error::InvalidInterval(format!(
            "[{s0}, {s_end}] crosses a fixed singularity"
        )));
    }
    Ok(())
}

struct System<'a> {
    alpha: &'a ParameterVector<f64>,
}

impl System<'_> {
    fn eval(&self, s: f64, y: &[f64; 6]) -> Result<[f64; 6]> {
        vector_field(&PhasePoint::from_coords(y, s), self.alpha)
    }
}

fn error_norm(err: &[f64; 6], y0: &[f64; 6], y1: &[f64; 6], cfg: &IntegratorConfig) -> f64 {
    let sum: f64 = (0..6)
        .map(|k| {
            let sc = cfg.atol + cfg.rtol * y0[k].abs().max(y1[k].abs());
            (err[k] / sc).powi(2)
        })
        .sum();
    let norm = (sum / 6.0).sqrt();
    if norm.is_nan() {
        f64::INFINITY
    } else {
        norm
    }
}

fn rms_scaled(v: &[f64; 6], y: &[f64; 6], cfg: &IntegratorConfig) -> f64 {
    let sum: f64 = (0..6)
        .map(|k| (v[k] / (cfg.atol + cfg.rtol * y[k].abs())).powi(2))
        .sum();
    (sum / 6.0).sqrt()
}

/// Starting step from the local scale of the solution and the field.
fn initial_step(
    sys: &System,
    s0: f64,
    y0: &[f64; 6],
    f0: &[f64; 6],
    dir: f64,
    span: f64,
    cfg: &IntegratorConfig,
) -> Result<f64> {
    let d0 = rms_scaled(y0, y0, cfg);
    let d1 = rms_scaled(f0, y0, cfg);
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h0 = h0.min(span);
    let y1: [f64; 6] = std::array::from_fn(|k| y0[k] + dir * h0 * f0[k]);
    let f1 = sys.eval(s0 + dir * h0, &y1)?;
    let diff: [f64; 6] = std::array::from_fn(|k| f1[k] - f0[k]);
    let d2 = rms_scaled(&diff, y0, cfg) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    Ok((100.0 * h0).min(h1).min(span))
}

/// Integrates from `z0` to `s_end`, recording every accepted step.
pub fn integrate(
    z0: &PhasePoint<f64>,
    alpha: &ParameterVector<f64>,
    s_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    check_interval(z0.s, s_end)?;
    let sys = System { alpha };
    let dir = (s_end - z0.s).signum();
    let span = (s_end - z0.s).abs();

    let mut s = z0.s;
    let mut y = z0.coords();
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(s));
    }
    let mut k1 = sys.eval(s, &y)?;
    let mut h = match cfg.initial_step {
        Some(h) => h.min(span),
        None => initial_step(&sys, s, &y, &k1, dir, span, cfg)?,
    };

    let mut traj = Trajectory {
        samples: vec![Sample { s, y }],
        ..Trajectory::default()
    };
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;

    loop {
        if traj.stats.accepted + traj.stats.rejected >= cfg.max_steps {
            return Err(Error::MaxStepsExceeded(cfg.max_steps));
        }
        let remaining = (s_end - s).abs();
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        if h <= 16.0 * f64::EPSILON * s.abs().max(1.0) {
            return Err(Error::StepUnderflow { s, h });
        }
        let hs = dir * h;

        let mut k = [[0.0; 6]; 7];
        k[0] = k1;
        let mut stage_failed = false;
        for i in 1..7 {
            let yi: [f64; 6] =
                std::array::from_fn(|c| y[c] + hs * (0..i).map(|j| A[i][j] * k[j][c]).sum::<f64>());
            let si = if i == 6 { s + hs } else { s + C[i] * hs };
            if !si.is_finite() || yi.iter().any(|v| !v.is_finite()) {
                stage_failed = true;
                break;
            }
            match sys.eval(si, &yi) {
                Ok(v) => k[i] = v,
                Err(Error::SingularIndependentVariable(_)) => {
                    stage_failed = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let y_new: [f64; 6] =
            std::array::from_fn(|c| y[c] + hs * (0..6).map(|j| A[6][j] * k[j][c]).sum::<f64>());
        let err = if stage_failed {
            f64::INFINITY
        } else {
            let e: [f64; 6] =
                std::array::from_fn(|c| hs * (0..7).map(|j| E[j] * k[j][c]).sum::<f64>());
            error_norm(&e, &y, &y_new, cfg)
        };

        let fac11 = err.powf(0.2 - PI_BETA * 0.75);
        if err <= 1.0 {
            let fac =
                (fac11 / fac_old.powf(PI_BETA) / SAFETY).clamp(1.0 / MAX_FACTOR, 1.0 / MIN_FACTOR);
            let mut h_new = h / fac;
            if last_rejected {
                h_new = h_new.min(h);
            }
            fac_old = err.max(1e-4);

            let s_new = if last { s_end } else { s + hs };
            if cfg.dense {
                let ydiff: [f64; 6] = std::array::from_fn(|c| y_new[c] - y[c]);
                let bspl: [f64; 6] = std::array::from_fn(|c| hs * k[0][c] - ydiff[c]);
                traj.dense.push(DenseSegment {
                    s0: s,
                    h: s_new - s,
                    coeffs: [
                        y,
                        ydiff,
                        bspl,
                        std::array::from_fn(|c| ydiff[c] - hs * k[6][c] - bspl[c]),
                        std::array::from_fn(|c| hs * (0..7).map(|j| D[j] * k[j][c]).sum::<f64>()),
                    ],
                });
            }
            s = s_new;
            y = y_new;
            k1 = k[6];
            traj.stats.accepted += 1;
            traj.stats.final_error = err;
            traj.samples.push(Sample { s, y });
            if last {
                return Ok(traj);
            }
            h = h_new;
            last_rejected = false;
        } else {
            let shrink = if err.is_finite() {
                (fac11 / SAFETY).min(1.0 / MIN_FACTOR)
            } else {
                1.0 / MIN_FACTOR
            };
            h /= shrink;
            traj.stats.rejected += 1;
            last_rejected = true;
        }
    }
}

/// Result of one covariance experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub word: String,
    pub max_deviation: f64,
    pub s_at_max: f64,
    pub samples: usize,
    pub reference_steps: usize,
    pub transformed_steps: usize,
}

/// Compares `g` applied along the trajectory from `(z0, alpha)` with the
/// trajectory integrated directly from `g(z0, alpha)`, on the reference
/// sample grid.
pub fn covariance_experiment(
    word: &WeylWord,
    z0: &PhasePoint<f64>,
    alpha: &ParameterVector<f64>,
    s_end: f64,
    cfg: &IntegratorConfig,
    opts: &BacklundOptions,
) -> Result<CovarianceReport> {
    let reference = integrate(z0, alpha, s_end, cfg)?;
    let start = apply_word(
        word,
        &TransformedState::new(z0.clone(), alpha.clone()),
        opts,
    )?;
    let direct = integrate(
        &start.point,
        &start.params,
        s_end,
        &IntegratorConfig {
            dense: true,
            ..cfg.clone()
        },
    )?;
    let mut max_dev = 0.0_f64;
    let mut s_at_max = z0.s;
    for smp in &reference.samples {
        let mapped = apply_word(
            word,
            &TransformedState::new(smp.point(), alpha.clone()),
            opts,
        )?;
        let w = direct.interpolate(smp.s).ok_or_else(|| {
            Error::InvalidInterval(format!("s = {} not covered by dense output", smp.s))
        })?;
        let dev = mapped
            .point
            .coords()
            .iter()
            .zip(w)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if !dev.is_finite() {
            return Err(Error::NonFinite(smp.s));
        }
        if dev > max_dev {
            max_dev = dev;
            s_at_max = smp.s;
        }
    }
    Ok(CovarianceReport {
        word: word.to_string(),
        max_deviation: max_dev,
        s_at_max,
        samples: reference.samples.len(),
        reference_steps: reference.stats.accepted,
        transformed_steps: direct.stats.accepted,
    })
}
