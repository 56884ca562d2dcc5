//! Randomized exact identity testing.
//!
//! Every claim here is an identity between rational functions of the phase
//! point, `s` and the parameters. Each trial evaluates both sides exactly at
//! a random point, over the rationals or over the prime field 2^61 - 1.
//! Trials draw from their own ChaCha stream keyed by `(seed, trial index)`,
//! so reports are identical whether trials run sequentially or in parallel.

use std::fmt::Display;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::backlund::{
    apply_word, generator_derivative, phi, pullback_form, symplectic_form, BacklundOptions,
    TransformedState,
};
use crate::error::{Error, Result};
use crate::fp::{Fp, MODULUS};
use crate::hamiltonian::{block_h, coupled_h, vector_field, PhasePoint, COUPLING_PARAM};
use crate::io::StateJson;
use crate::scalar::{Rational, Scalar};
use crate::weyl::{Generator, ParameterVector, Relation};

/// Consecutive singular samples tolerated before a trial gives up.
pub const RESAMPLE_CAP: usize = 100;

pub const DEFAULT_SEED: u64 = 0xE6;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_BOUND: i64 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldMode {
    Exact,
    PrimeField,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialConfig {
    pub trials: usize,
    pub seed: u64,
    /// Largest numerator/denominator magnitude of sampled rationals.
    pub bound: i64,
    pub mode: FieldMode,
    /// Worker threads; 1 runs trials on the calling thread.
    pub jobs: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            bound: DEFAULT_BOUND,
            mode: FieldMode::Exact,
            jobs: 1,
        }
    }
}

impl TrialConfig {
    pub fn with_trials(trials: usize) -> Self {
        TrialConfig {
            trials,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        if self.bound < 2 {
            return Err(Error::InvalidConfig(
                "coefficient bound must be at least 2".into(),
            ));
        }
        if self.jobs < 1 {
            return Err(Error::InvalidConfig("jobs must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Zero-based trial index; with the report's seed this reproduces the sample.
    pub trial: usize,
    pub state: Option<StateJson>,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim: String,
    pub pass: bool,
    pub trials: usize,
    pub seed: u64,
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Folds several reports into one: passes iff all pass, carrying the
    /// first counterexample.
    pub fn combine(claim: &str, seed: u64, parts: Vec<VerificationReport>) -> VerificationReport {
        let trials = parts.iter().map(|r| r.trials).sum();
        let failed = parts.into_iter().find(|r| !r.pass);
        VerificationReport {
            claim: claim.to_string(),
            pass: failed.is_none(),
            trials,
            seed,
            counterexample: failed.map(|r| {
                let mut c = r.counterexample.unwrap_or(Counterexample {
                    trial: 0,
                    state: None,
                    lhs: vec![],
                    rhs: vec![],
                    note: String::new(),
                });
                c.note = format!("{}: {}", r.claim, c.note);
                c
            }),
        }
    }
}

/// Scalars that can be sampled for identity testing.
pub trait ExactScalar: Scalar + Display + Send + Sync + 'static {
    fn sample<R: Rng>(rng: &mut R, bound: i64) -> Self;
}

impl ExactScalar for Rational {
    fn sample<R: Rng>(rng: &mut R, bound: i64) -> Self {
        let num = rng.gen_range(-bound..=bound);
        let den = rng.gen_range(1..=bound);
        Rational::from_ratio(num, den)
    }
}

impl ExactScalar for Fp {
    fn sample<R: Rng>(rng: &mut R, _bound: i64) -> Self {
        Fp::new(rng.gen_range(0..MODULUS))
    }
}

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Random parameters satisfying the normalization (solved for `alpha_3`).
pub fn sample_params<T: ExactScalar, R: Rng>(rng: &mut R, bound: i64) -> ParameterVector<T> {
    ParameterVector::normalized_from(std::array::from_fn(|_| T::sample(rng, bound)))
}

pub fn sample_point<T: ExactScalar, R: Rng>(rng: &mut R, bound: i64) -> PhasePoint<T> {
    PhasePoint {
        q: std::array::from_fn(|_| T::sample(rng, bound)),
        p: std::array::from_fn(|_| T::sample(rng, bound)),
        s: T::sample(rng, bound),
    }
}

/// A state off every singular locus: `s` not 0 or 1 and every `phi_i` nonzero.
/// Returns `None` when the draw must be rejected.
pub fn sample_generic_state<T: ExactScalar, R: Rng>(
    rng: &mut R,
    bound: i64,
) -> Option<TransformedState<T>> {
    let params: ParameterVector<T> = sample_params(rng, bound);
    let point: PhasePoint<T> = sample_point(rng, bound);
    let s_ok = !point.s.is_zero() && !(point.s.clone() - T::one()).is_zero();
    if !s_ok || phi(&point).0.iter().any(Scalar::is_zero) {
        return None;
    }
    Some(TransformedState { point, params })
}

enum Outcome {
    Pass,
    Fail(Counterexample),
}

fn run_trials<F>(claim: &str, cfg: &TrialConfig, trial: F) -> Result<VerificationReport>
where
    F: Fn(usize, &mut ChaCha20Rng) -> Result<Option<Outcome>> + Sync,
{
    cfg.validate()?;
    let run_one = |idx: usize| -> Result<Outcome> {
        let mut rng = trial_rng(cfg.seed, idx);
        for _ in 0..RESAMPLE_CAP {
            if let Some(outcome) = trial(idx, &mut rng)? {
                return Ok(outcome);
            }
        }
        Err(Error::ResampleExhausted {
            claim: claim.to_string(),
            trial: idx,
            attempts: RESAMPLE_CAP,
        })
    };

    let outcomes: Vec<Result<Outcome>> = if cfg.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::InvalidConfig(e.to_string()))?;
        pool.install(|| (0..cfg.trials).into_par_iter().map(run_one).collect())
    } else {
        let mut v = Vec::with_capacity(cfg.trials);
        for idx in 0..cfg.trials {
            let o = run_one(idx);
            let stop = !matches!(o, Ok(Outcome::Pass));
            v.push(o);
            if stop {
                break;
            }
        }
        v
    };

    for (idx, o) in outcomes.into_iter().enumerate() {
        match o? {
            Outcome::Pass => {}
            Outcome::Fail(c) => {
                return Ok(VerificationReport {
                    claim: claim.to_string(),
                    pass: false,
                    trials: idx + 1,
                    seed: cfg.seed,
                    counterexample: Some(c),
                })
            }
        }
    }
    Ok(VerificationReport {
        claim: claim.to_string(),
        pass: true,
        trials: cfg.trials,
        seed: cfg.seed,
        counterexample: None,
    })
}

fn strings<T: Display>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn exact_opts() -> BacklundOptions {
    BacklundOptions { threshold: 0.0 }
}

/// Total `s`-derivative of `g(z(s), s)` along the flow: `J V + dg/ds`.
pub fn pushforward_field<T: Scalar>(
    g: Generator,
    st: &TransformedState<T>,
    opts: &BacklundOptions,
) -> Result<([T; 6], TransformedState<T>)> {
    let v = vector_field(&st.point, &st.params)?;
    let d = generator_derivative(g, st, opts)?;
    let pushed = std::array::from_fn(|a| {
        (0..6).fold(d.ds[a].clone(), |acc, b| {
            acc + d.jacobian[a][b].clone() * v[b].clone()
        })
    });
    Ok((pushed, d.image))
}

fn theorem1_trial<T: ExactScalar>(
    g: Generator,
    idx: usize,
    rng: &mut ChaCha20Rng,
    bound: i64,
) -> Result<Option<Outcome>> {
    let Some(st) = sample_generic_state::<T, _>(rng, bound) else {
        return Ok(None);
    };
    let (pushed, image) = pushforward_field(g, &st, &exact_opts())?;
    let direct = vector_field(&image.point, &image.params)?;
    if pushed == direct {
        Ok(Some(Outcome::Pass))
    } else {
        Ok(Some(Outcome::Fail(Counterexample {
            trial: idx,
            state: Some(StateJson::from_exact(&st)),
            lhs: strings(&pushed),
            rhs: strings(&direct),
            note: "pushed-forward field differs from the field at the image".into(),
        })))
    }
}

/// Invariance of the Hamiltonian system under one generator.
pub fn check_theorem1(g: Generator, cfg: &TrialConfig) -> Result<VerificationReport> {
    let claim = format!("theorem1:{g}");
    match cfg.mode {
        FieldMode::Exact => run_trials(&claim, cfg, |i, rng| {
            theorem1_trial::<Rational>(g, i, rng, cfg.bound)
        }),
        FieldMode::PrimeField => run_trials(&claim, cfg, |i, rng| {
            theorem1_trial::<Fp>(g, i, rng, cfg.bound)
        }),
    }
}

fn relation_trial<T: ExactScalar>(
    rel: Relation,
    idx: usize,
    rng: &mut ChaCha20Rng,
    bound: i64,
) -> Result<Option<Outcome>> {
    let Some(st) = sample_generic_state::<T, _>(rng, bound) else {
        return Ok(None);
    };
    let (lw, rw) = rel.words();
    let sides = apply_word(&lw, &st, &exact_opts())
        .and_then(|l| Ok((l, apply_word(&rw, &st, &exact_opts())?)));
    let (lhs, rhs) = match sides {
        Ok(pair) => pair,
        Err(Error::SingularTransformation { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    if lhs == rhs {
        Ok(Some(Outcome::Pass))
    } else {
        let flat = |s: &TransformedState<T>| {
            let mut v = strings(&s.point.coords());
            v.extend(strings(&s.params.0));
            v
        };
        Ok(Some(Outcome::Fail(Counterexample {
            trial: idx,
            state: Some(StateJson::from_exact(&st)),
            lhs: flat(&lhs),
            rhs: flat(&rhs),
            note: format!("{rel} fails on phase space"),
        })))
    }
}

/// One group relation as an identity of maps on (phase point, parameters).
pub fn check_phase_relation(rel: Relation, cfg: &TrialConfig) -> Result<VerificationReport> {
    let claim = format!("relation:{rel}");
    match cfg.mode {
        FieldMode::Exact => run_trials(&claim, cfg, |i, rng| {
            relation_trial::<Rational>(rel, i, rng, cfg.bound)
        }),
        FieldMode::PrimeField => run_trials(&claim, cfg, |i, rng| {
            relation_trial::<Fp>(rel, i, rng, cfg.bound)
        }),
    }
}

/// Every group relation, on parameters (matrices and random vectors) and on
/// phase space.
pub fn check_phase_relations(cfg: &TrialConfig) -> Result<VerificationReport> {
    let mut parts = vec![crate::weyl::verify_parameter_relations(cfg)?];
    for rel in Relation::all() {
        parts.push(check_phase_relation(rel, cfg)?);
    }
    Ok(VerificationReport::combine("relations", cfg.seed, parts))
}

fn canonicity_trial<T: ExactScalar>(
    g: Generator,
    idx: usize,
    rng: &mut ChaCha20Rng,
    bound: i64,
) -> Result<Option<Outcome>> {
    let Some(st) = sample_generic_state::<T, _>(rng, bound) else {
        return Ok(None);
    };
    let d = generator_derivative(g, &st, &exact_opts())?;
    let pulled = pullback_form(&d.jacobian);
    if pulled == symplectic_form::<T>() {
        Ok(Some(Outcome::Pass))
    } else {
        Ok(Some(Outcome::Fail(Counterexample {
            trial: idx,
            state: Some(StateJson::from_exact(&st)),
            lhs: pulled.iter().flat_map(|r| strings(r)).collect(),
            rhs: symplectic_form::<T>()
                .iter()
                .flat_map(|r| strings(r))
                .collect(),
            note: "J^T Omega J != Omega".into(),
        })))
    }
}

pub fn check_canonicity(g: Generator, cfg: &TrialConfig) -> Result<VerificationReport> {
    let claim = format!("canonicity:{g}");
    match cfg.mode {
        FieldMode::Exact => run_trials(&claim, cfg, |i, rng| {
            canonicity_trial::<Rational>(g, i, rng, cfg.bound)
        }),
        FieldMode::PrimeField => run_trials(&claim, cfg, |i, rng| {
            canonicity_trial::<Fp>(g, i, rng, cfg.bound)
        }),
    }
}

fn degeneration_trial<T: ExactScalar>(
    enforced: &[usize],
    idx: usize,
    rng: &mut ChaCha20Rng,
    bound: i64,
) -> Result<Option<Outcome>> {
    let params: ParameterVector<T> = sample_params(rng, bound);
    let mut point: PhasePoint<T> = sample_point(rng, bound);
    for &i in enforced {
        let qm1 = point.q[i].clone() - T::one();
        if qm1.is_zero() {
            return Ok(None);
        }
        point.p[i] = -params.0[COUPLING_PARAM[i]].clone() / qm1;
    }
    let full = coupled_h(&point, &params);
    let blocks = (0..3).fold(T::zero(), |acc, i| acc + block_h(i, &point, &params));
    if full == blocks {
        Ok(Some(Outcome::Pass))
    } else {
        Ok(Some(Outcome::Fail(Counterexample {
            trial: idx,
            state: Some(StateJson::from_exact(&TransformedState { point, params })),
            lhs: vec![full.to_string()],
            rhs: vec![blocks.to_string()],
            note: format!("coupling term nonzero with factors {enforced:?} enforced"),
        })))
    }
}

/// Coupled Hamiltonian equals the sum of its three scalar blocks when the
/// coupling factors with the given (zero-based) indices are forced to zero.
pub fn check_degeneration_pattern(
    enforced: &[usize],
    cfg: &TrialConfig,
) -> Result<VerificationReport> {
    if enforced.iter().any(|&i| i >= 3) {
        return Err(Error::InvalidConfig(format!(
            "coupling index out of range in {enforced:?}"
        )));
    }
    let claim = format!("degeneration:{enforced:?}");
    match cfg.mode {
        FieldMode::Exact => run_trials(&claim, cfg, |i, rng| {
            degeneration_trial::<Rational>(enforced, i, rng, cfg.bound)
        }),
        FieldMode::PrimeField => run_trials(&claim, cfg, |i, rng| {
            degeneration_trial::<Fp>(enforced, i, rng, cfg.bound)
        }),
    }
}

/// All three ways of forcing two coupling factors to zero.
pub fn check_degeneration(cfg: &TrialConfig) -> Result<VerificationReport> {
    let parts = [[0, 1], [0, 2], [1, 2]]
        .iter()
        .map(|pair| check_degeneration_pattern(pair, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::combine("degeneration", cfg.seed, parts))
}

/// Parameter-level check shared with [`crate::weyl::verify_parameter_relations`].
pub(crate) fn parameter_relations_report(cfg: &TrialConfig) -> Result<VerificationReport> {
    if let Some(rel) = crate::weyl::first_failing_matrix_relation() {
        return Ok(VerificationReport {
            claim: "parameter-relations".into(),
            pass: false,
            trials: 0,
            seed: cfg.seed,
            counterexample: Some(Counterexample {
                trial: 0,
                state: None,
                lhs: vec![],
                rhs: vec![],
                note: format!("{rel} fails as a matrix identity"),
            }),
        });
    }
    run_trials("parameter-relations", cfg, |idx, rng| {
        let alpha: ParameterVector<Rational> = sample_params(rng, cfg.bound);
        for rel in Relation::all() {
            let (lw, rw) = rel.words();
            let l = crate::weyl::apply_word_params(&lw, &alpha);
            let r = crate::weyl::apply_word_params(&rw, &alpha);
            if l != r {
                return Ok(Some(Outcome::Fail(Counterexample {
                    trial: idx,
                    state: None,
                    lhs: strings(&l.0),
                    rhs: strings(&r.0),
                    note: format!("{rel} fails on alpha = {:?}", strings(&alpha.0)),
                })));
            }
        }
        Ok(Some(Outcome::Pass))
    })
}

/// Claims accepted by [`run_claim`].
pub fn claim_names() -> Vec<String> {
    let mut v: Vec<String> = Generator::all()
        .iter()
        .map(|g| format!("theorem1:{g}"))
        .collect();
    v.extend(
        [
            "theorem1",
            "relations",
            "canonicity",
            "degeneration",
            "heisenberg",
        ]
        .map(String::from),
    );
    v
}

/// Dispatches a named claim: `theorem1:<gen>`, `theorem1` (all nine),
/// `relations`, `canonicity`, `canonicity:<gen>`, `degeneration`,
/// `heisenberg`.
pub fn run_claim(name: &str, cfg: &TrialConfig) -> Result<VerificationReport> {
    let all_gens = |f: fn(Generator, &TrialConfig) -> Result<VerificationReport>, claim: &str| {
        let parts = Generator::all()
            .into_iter()
            .map(|g| f(g, cfg))
            .collect::<Result<Vec<_>>>()?;
        Ok(VerificationReport::combine(claim, cfg.seed, parts))
    };
    match name {
        "theorem1" => all_gens(check_theorem1, "theorem1"),
        "canonicity" => all_gens(check_canonicity, "canonicity"),
        "relations" => check_phase_relations(cfg),
        "degeneration" => check_degeneration(cfg),
        "heisenberg" => crate::lie::check_heisenberg(),
        _ => {
            if let Some(g) = name.strip_prefix("theorem1:") {
                check_theorem1(g.parse()?, cfg)
            } else if let Some(g) = name.strip_prefix("canonicity:") {
                check_canonicity(g.parse()?, cfg)
            } else {
                Err(Error::InvalidConfig(format!(
                    "unknown claim {name:?}; expected one of {}",
                    claim_names().join(", ")
                )))
            }
        }
    }
}
