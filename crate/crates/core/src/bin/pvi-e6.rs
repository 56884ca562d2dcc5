use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use pvi_e6::backlund::{apply_word, BacklundOptions};
use pvi_e6::flow::{covariance_experiment, integrate, IntegratorConfig};
use pvi_e6::io::{parse_state, StateJson};
use pvi_e6::lie::{AffineE6, Gradation};
use pvi_e6::verify::{run_claim, FieldMode, TrialConfig, DEFAULT_BOUND, DEFAULT_TRIALS};
use pvi_e6::weyl::{
    apply_word_params, cartan_matrix, first_failing_matrix_relation, ParameterVector, WeylWord,
};
use pvi_e6::{Error, Result};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(
    name = "pvi-e6",
    version,
    about = "Coupled Painleve VI system with E6(1) affine Weyl group symmetry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    PrimeField,
}

#[derive(clap::Args)]
struct Tolerances {
    #[arg(long, default_value_t = 1e-10)]
    rtol: f64,
    #[arg(long, default_value_t = 1e-12)]
    atol: f64,
    #[arg(long)]
    initial_step: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    max_steps: usize,
}

impl Tolerances {
    fn config(&self) -> IntegratorConfig {
        IntegratorConfig {
            rtol: self.rtol,
            atol: self.atol,
            initial_step: self.initial_step,
            max_steps: self.max_steps,
            dense: false,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the generalized Cartan matrix as JSON.
    Cartan {
        #[arg(long)]
        check_symmetric: bool,
        /// Print the marks, the left null vector of the matrix.
        #[arg(long)]
        null_vector: bool,
    },
    /// Print the parameter action of a word and optionally apply it to a parameter file.
    Weyl {
        /// Comma-separated generators applied left to right, e.g. "r1,pi2,r3".
        #[arg(default_value = "")]
        word: String,
        /// JSON file with {"alpha": [...]}; "-" reads stdin.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Check every defining relation on parameter matrices instead.
        #[arg(long, conflicts_with_all = ["word", "params"])]
        check_relations: bool,
    },
    /// Apply a Backlund word to a state file.
    Transform {
        word: String,
        /// JSON file with q, p, s and alpha; "-" reads stdin.
        state: PathBuf,
        /// Evaluate in binary64 instead of exact rationals.
        #[arg(long)]
        float: bool,
        /// Float mode: |phi_i| below this counts as singular.
        #[arg(long, default_value_t = 1e-12)]
        threshold: f64,
    },
    /// Run a randomized verification claim; exit 0 iff it passes.
    Verify {
        /// theorem1[:g], canonicity[:g], relations, degeneration or heisenberg.
        claim: String,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, env = "PVI_E6_SEED", default_value = "0xE6", value_parser = parse_seed)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: i64,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Integrate from a state file and write the CSV trajectory.
    Integrate {
        state: PathBuf,
        #[arg(long)]
        s_end: f64,
        #[command(flatten)]
        tol: Tolerances,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compare a transformed trajectory with one integrated from the transformed start.
    Covariance {
        word: String,
        state: PathBuf,
        #[arg(long, default_value_t = 0.7)]
        s_end: f64,
        #[arg(long, default_value_t = 1e-6)]
        max_dev: f64,
        #[command(flatten)]
        tol: Tolerances,
        #[arg(long, default_value_t = 1e-12)]
        threshold: f64,
    },
    /// Dump an element of the affine algebra: lambda1, lambda2, theta, e<i>,
    /// f<i>, h<i>, or a combination such as "2e_0 - 7e_{63}".
    LieDump {
        #[arg(default_value = "lambda1")]
        element: String,
        /// Also print the grade.
        #[arg(long)]
        grade: bool,
    },
}

fn parse_seed(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn read_input(path: &PathBuf) -> Result<String> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).expect("value serializes")
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::StepUnderflow { .. }
        | Error::MaxStepsExceeded(_)
        | Error::NonFinite(_)
        | Error::ResampleExhausted { .. }
        | Error::TruncationOverflow { .. }
        | Error::NotHomogeneous => EXIT_RUNTIME,
        _ => EXIT_USAGE,
    }
}

fn cmd_cartan(check_symmetric: bool, null_vector: bool) -> Result<u8> {
    let a = cartan_matrix();
    if check_symmetric {
        println!("{}", a.is_symmetric());
    } else if null_vector {
        println!("{}", pretty(&pvi_e6::weyl::MARKS));
    } else {
        println!("{}", pretty(a.rows()));
    }
    Ok(0)
}

fn cmd_weyl(word: &str, params: Option<&PathBuf>, check_relations: bool) -> Result<u8> {
    if check_relations {
        return Ok(match first_failing_matrix_relation() {
            None => {
                println!("{}", json!({"relations": "ok"}));
                0
            }
            Some(rel) => {
                println!(
                    "{}",
                    json!({"relations": "fail", "relation": rel.to_string()})
                );
                EXIT_FAIL
            }
        });
    }
    let w: WeylWord = word.parse()?;
    let mut out = json!({"word": w.to_string(), "matrix": w.matrix()});
    if let Some(path) = params {
        let p: pvi_e6::io::ParamsJson =
            serde_json::from_str(&read_input(path)?).map_err(|e| Error::Parse(e.to_string()))?;
        let alpha: ParameterVector<_> = p.to_exact()?;
        let image = apply_word_params(&w, &alpha);
        out["alpha"] = serde_json::to_value(pvi_e6::io::ParamsJson::from_exact(&image).alpha)
            .expect("serializes");
    }
    println!("{out}");
    Ok(0)
}

fn cmd_transform(word: &str, state: &PathBuf, float: bool, threshold: f64) -> Result<u8> {
    let w: WeylWord = word.parse()?;
    let st = parse_state(&read_input(state)?)?;
    let opts = BacklundOptions { threshold };
    let out = if float {
        StateJson::from_f64(&apply_word(&w, &st.to_f64()?, &opts)?)
    } else {
        StateJson::from_exact(&apply_word(&w, &st.to_exact()?, &opts)?)
    };
    println!("{}", pretty(&out));
    Ok(0)
}

fn cmd_verify(claim: &str, cfg: TrialConfig) -> Result<u8> {
    cfg.validate()?;
    let report = run_claim(claim, &cfg)?;
    println!("{}", report.to_json());
    Ok(if report.pass { 0 } else { EXIT_FAIL })
}

fn cmd_integrate(
    state: &PathBuf,
    s_end: f64,
    tol: &Tolerances,
    output: Option<&PathBuf>,
) -> Result<u8> {
    let st = parse_state(&read_input(state)?)?.to_f64()?;
    let traj = integrate(&st.point, &st.params, s_end, &tol.config())?;
    let csv = traj.to_csv();
    match output {
        Some(path) => {
            std::fs::write(path, csv)
                .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        }
        None => print!("{csv}"),
    }
    eprintln!(
        "accepted {} rejected {} final error {:e}",
        traj.stats.accepted, traj.stats.rejected, traj.stats.final_error
    );
    Ok(0)
}

fn cmd_covariance(
    word: &str,
    state: &PathBuf,
    s_end: f64,
    max_dev: f64,
    tol: &Tolerances,
    threshold: f64,
) -> Result<u8> {
    let w: WeylWord = word.parse()?;
    let st = parse_state(&read_input(state)?)?.to_f64()?;
    let report = covariance_experiment(
        &w,
        &st.point,
        &st.params,
        s_end,
        &tol.config(),
        &BacklundOptions { threshold },
    )?;
    let pass = report.max_deviation <= max_dev;
    let mut out = serde_json::to_value(&report).expect("serializes");
    out["max_dev"] = json!(max_dev);
    out["pass"] = json!(pass);
    println!("{out}");
    Ok(if pass { 0 } else { EXIT_FAIL })
}

fn cmd_lie_dump(element: &str, grade: bool) -> Result<u8> {
    let g = Gradation::new(AffineE6::default())?;
    let node = |rest: &str| -> Result<usize> {
        rest.parse::<usize>()
            .ok()
            .filter(|&i| i <= 6)
            .ok_or_else(|| Error::InvalidGenerator(element.to_string()))
    };
    let x = match element {
        "lambda1" => g.lambda1()?,
        "lambda2" => g.lambda2()?,
        "theta" => g.theta.element(),
        "K" => g.alg.central(),
        "d" => g.alg.derivation(),
        _ if element.len() == 2 && element.starts_with('e') => g.alg.e(node(&element[1..])?),
        _ if element.len() == 2 && element.starts_with('f') => g.alg.f(node(&element[1..])?),
        _ if element.len() == 2 && element.starts_with('h') => g.alg.coroot(node(&element[1..])?),
        _ => g.parse_combination(element)?,
    };
    print!("{}", x.dump());
    if grade {
        println!("grade {}", g.grade(&x)?);
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Cartan {
            check_symmetric,
            null_vector,
        } => cmd_cartan(check_symmetric, null_vector),
        Command::Weyl {
            word,
            params,
            check_relations,
        } => cmd_weyl(&word, params.as_ref(), check_relations),
        Command::Transform {
            word,
            state,
            float,
            threshold,
        } => cmd_transform(&word, &state, float, threshold),
        Command::Verify {
            claim,
            trials,
            seed,
            bound,
            mode,
            jobs,
        } => cmd_verify(
            &claim,
            TrialConfig {
                trials,
                seed,
                bound,
                mode: match mode {
                    Mode::Exact => FieldMode::Exact,
                    Mode::PrimeField => FieldMode::PrimeField,
                },
                jobs,
            },
        ),
        Command::Integrate {
            state,
            s_end,
            tol,
            output,
        } => cmd_integrate(&state, s_end, &tol, output.as_ref()),
        Command::Covariance {
            word,
            state,
            s_end,
            max_dev,
            tol,
            threshold,
        } => cmd_covariance(&word, &state, s_end, max_dev, &tol, threshold),
        Command::LieDump { element, grade } => cmd_lie_dump(&element, grade),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
