//! The `spinrep` command line.
//!
//! Exit codes: 0 on success, 1 when verification fails (or on an internal
//! fault), 2 on a usage error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use spinrep_core::coupling::{cg_table, closed_form_table, decompose_many, CgTable, Convention};
use spinrep_core::exact::HalfInt;
use spinrep_core::liealg::DEFAULT_TOL;
use spinrep_core::repn::{build_rep, casimir, SpinRep};
use spinrep_core::states::{measure_probabilities, sample, sample_shots, Particle, StateVector};
use spinrep_core::verify::{run_all, Check, VerifyOptions};
use spinrep_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses `-? digits ( "/2" )?`, e.g. `3/2`, `2`, `-1/2`.
pub fn parse_spin(text: &str) -> Result<HalfInt, Error> {
    text.parse()
}

#[derive(Debug, Parser)]
#[command(name = "spinrep", version, about = "Exact SU(2) spin representations and Clebsch-Gordan tables")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Direct,
    Standard,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The spin-s representation: S3 diagonal and S+ ladder factors.
    Rep {
        #[arg(long, value_parser = parse_spin)]
        s: HalfInt,
    },
    /// Irreducible content of a tensor product of spins.
    Decompose {
        #[arg(required = true, num_args = 1.., value_parser = parse_spin)]
        spins: Vec<HalfInt>,
    },
    /// Clebsch-Gordan table of s1 x s2.
    Cg {
        #[arg(long, value_parser = parse_spin)]
        s1: HalfInt,
        #[arg(long, value_parser = parse_spin)]
        s2: HalfInt,
        /// Use the closed form for s2 = 1/2 instead of the ladder.
        #[arg(long)]
        closed_form: bool,
        /// Sign convention of the closed form.
        #[arg(long, value_enum, default_value_t = ConventionArg::Standard, requires = "closed_form")]
        convention: ConventionArg,
    },
    /// Measure S3 of one particle in the coupled state |s m> of s1 x s2.
    Measure {
        #[arg(long, value_parser = parse_spin)]
        s1: HalfInt,
        #[arg(long, value_parser = parse_spin)]
        s2: HalfInt,
        #[arg(long, value_parser = parse_spin)]
        s: HalfInt,
        #[arg(long, value_parser = parse_spin, allow_hyphen_values = true)]
        m: HalfInt,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        particle: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of shots to tally instead of a single measurement.
        #[arg(long)]
        shots: Option<usize>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, value_parser = parse_spin, default_value = "4")]
        max_spin: HalfInt,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

/// JSON of `decompose`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecomposeOutput {
    pub spins: Vec<HalfInt>,
    pub content: Vec<Multiplicity>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplicity {
    pub s: HalfInt,
    pub multiplicity: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Probability {
    pub m: HalfInt,
    /// Exact rational, e.g. `"1/2"`.
    pub p: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub m: HalfInt,
    pub count: usize,
}

/// JSON of `measure`: one draw (`outcome`, `post`) or a tally over `shots`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureOutput {
    pub state: StateVector,
    pub particle: u8,
    pub probabilities: Vec<Probability>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<HalfInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub post: Option<StateVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<Tally>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub max_spin: HalfInt,
    pub tol: f64,
    pub passed: bool,
    pub total: usize,
    pub failures: Vec<Check>,
}

enum Failure {
    Usage(String),
    Internal(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::IncommensurateAdd { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };

    let result = execute(&cli).and_then(|(text, code)| {
        match &cli.output {
            Some(path) => std::fs::write(path, &text).map_err(Failure::Io)?,
            None => stdout.write_all(text.as_bytes()).map_err(Failure::Io)?,
        }
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Internal(msg)) => {
            let _ = writeln!(stderr, "internal error: {msg}");
            EXIT_FAILURE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    let format = cli.format;
    let text = match &cli.command {
        Command::Rep { s } => rep(*s, format)?,
        Command::Decompose { spins } => decompose(spins, format)?,
        Command::Cg { s1, s2, closed_form, convention } => {
            let table = if *closed_form {
                if *s2 != HalfInt::HALF {
                    return Err(Failure::Usage("--closed-form needs --s2 1/2".into()));
                }
                let conv = match convention {
                    ConventionArg::Direct => Convention::Direct,
                    ConventionArg::Standard => Convention::Standard,
                };
                closed_form_table(*s1, conv)?
            } else {
                cg_table(*s1, *s2)?
            };
            cg(&table, format)?
        }
        Command::Measure { s1, s2, s, m, particle, seed, shots } => {
            measure(*s1, *s2, *s, *m, *particle, *seed, *shots, format)?
        }
        Command::Verify { max_spin, tol } => return verify(*max_spin, *tol, format),
    };
    Ok((text, EXIT_OK))
}

fn rep(s: HalfInt, format: Format) -> Result<String, Failure> {
    let rep: SpinRep = build_rep(s)?;
    Ok(match format {
        Format::Json => json(&rep)?,
        Format::Csv => {
            let mut out = String::from("k,m,sign,num,den,radicand\n");
            // b₊(m_k) raises row k to row k−1; the top row has no factor.
            for k in 0..rep.dim() {
                let b = if k == 0 { None } else { Some(&rep.plus_factors()[k - 1]) };
                let _ = match b {
                    Some(b) => writeln!(
                        out,
                        "{k},{},{},{},{},{}",
                        rep.m_at(k),
                        b.sign(),
                        b.coeff().numer(),
                        b.coeff().denom(),
                        b.radicand()
                    ),
                    None => writeln!(out, "{k},{},0,0,1,1", rep.m_at(k)),
                };
            }
            out
        }
        Format::Text => {
            let join = |items: Vec<String>| items.join(" ");
            let cas = casimir(&rep).get(0, 0);
            format!(
                "spin {s}, dimension {}\nS3 diagonal: {}\nS+ superdiagonal: {}\nS^2 = {} I\n",
                rep.dim(),
                join(rep.s3_diag().iter().map(ToString::to_string).collect()),
                join(rep.plus_factors().iter().map(ToString::to_string).collect()),
                cas
            )
        }
    })
}

fn decompose(spins: &[HalfInt], format: Format) -> Result<String, Failure> {
    let content = decompose_many(spins)?;
    Ok(match format {
        Format::Json => json(&DecomposeOutput {
            spins: spins.to_vec(),
            content: content.iter().map(|&(s, multiplicity)| Multiplicity { s, multiplicity }).collect(),
        })?,
        Format::Csv => {
            let mut out = String::from("s,multiplicity\n");
            for (s, k) in &content {
                let _ = writeln!(out, "{s},{k}");
            }
            out
        }
        Format::Text => {
            let parts: Vec<String> = content.iter().map(|(s, k)| format!("{s}:{k}")).collect();
            parts.join(" ") + "\n"
        }
    })
}

fn cg(table: &CgTable, format: Format) -> Result<String, Failure> {
    Ok(match format {
        Format::Json => json(table)?,
        Format::Csv => table.to_csv(),
        Format::Text => {
            let mut out = format!("{} x {}\n", table.s1(), table.s2());
            for (s, state) in table.states() {
                let _ = write!(out, "|{s} {}⟩ =", state.m);
                for (i, t) in state.terms.iter().enumerate() {
                    let c = &t.coeff;
                    let a = c.abs();
                    let _ = match (i, c.is_negative()) {
                        (0, true) => write!(out, " -{a}"),
                        (0, false) => write!(out, " {a}"),
                        (_, true) => write!(out, " - {a}"),
                        (_, false) => write!(out, " + {a}"),
                    };
                    let _ = write!(out, " |{}⟩|{}⟩", t.m1, t.m2);
                }
                out.push('\n');
            }
            out
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn measure(
    s1: HalfInt,
    s2: HalfInt,
    s: HalfInt,
    m: HalfInt,
    particle_index: u8,
    seed: u64,
    shots: Option<usize>,
    format: Format,
) -> Result<String, Failure> {
    let particle = Particle::from_index(particle_index)?;
    let table = cg_table(s1, s2)?;
    let state = StateVector::coupled(s1, s2, s, m)?;
    let probs = measure_probabilities(&state, particle, &table)?;
    let probabilities: Vec<Probability> =
        probs.iter().map(|(m, p)| Probability { m: *m, p: p.to_string() }).collect();

    let mut output = MeasureOutput {
        state,
        particle: particle_index,
        probabilities,
        seed,
        outcome: None,
        post: None,
        shots,
        counts: None,
    };
    match shots {
        Some(n) => {
            let drawn = sample_shots(&output.state, particle, &table, seed, n)?;
            let mut counts: BTreeMap<HalfInt, usize> = probs.iter().map(|(m, _)| (*m, 0)).collect();
            for m in drawn {
                *counts.entry(m).or_default() += 1;
            }
            output.counts = Some(counts.into_iter().rev().map(|(m, count)| Tally { m, count }).collect());
        }
        None => {
            let (m, post) = sample(&output.state, particle, &table, seed)?;
            output.outcome = Some(m);
            output.post = Some(post);
        }
    }

    Ok(match format {
        Format::Json => json(&output)?,
        Format::Csv => {
            let mut out = String::from("m,p,count\n");
            for p in &output.probabilities {
                let count = match (&output.counts, output.outcome) {
                    (Some(counts), _) => counts.iter().find(|t| t.m == p.m).map_or(0, |t| t.count),
                    (None, outcome) => usize::from(outcome == Some(p.m)),
                };
                let _ = writeln!(out, "{},{},{count}", p.m, p.p);
            }
            out
        }
        Format::Text => {
            let mut out =
                format!("state |{s} {m}⟩ of {s1} x {s2}, measuring S3 of particle {particle_index}\n");
            for p in &output.probabilities {
                let _ = writeln!(out, "P(m = {}) = {}", p.m, p.p);
            }
            if let (Some(m), Some(post)) = (output.outcome, &output.post) {
                let _ = writeln!(out, "seed {seed}: outcome {m}, state after: {post}");
            }
            if let (Some(n), Some(counts)) = (shots, &output.counts) {
                let _ = writeln!(out, "seed {seed}, {n} shots:");
                for t in counts {
                    let _ = writeln!(out, "  {}: {}", t.m, t.count);
                }
            }
            out
        }
    })
}

fn verify(max_spin: HalfInt, tol: f64, format: Format) -> Result<(String, i32), Failure> {
    if max_spin.is_negative() {
        return Err(Failure::Usage(format!("--max-spin must be nonnegative, got {max_spin}")));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
    }
    let report = run_all(&VerifyOptions { max_spin, tol, ..VerifyOptions::default() });
    let code = if report.passed() { EXIT_OK } else { EXIT_FAILURE };
    let text = match format {
        Format::Json => json(&VerifyOutput {
            max_spin,
            tol,
            passed: report.passed(),
            total: report.checks.len(),
            failures: report.failures().cloned().collect(),
        })?,
        Format::Csv => {
            let mut out = String::from("name,passed\n");
            for c in &report.checks {
                let _ = writeln!(out, "\"{}\",{}", c.name.replace('"', "\"\""), c.passed);
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for c in report.failures() {
                let _ = match &c.detail {
                    Some(d) => writeln!(out, "FAIL {}: {d}", c.name),
                    None => writeln!(out, "FAIL {}", c.name),
                };
            }
            let failed = report.failures().count();
            let _ = writeln!(
                out,
                "{}: {} checks, {failed} failed (max spin {max_spin}, tol {tol:e})",
                if failed == 0 { "PASS" } else { "FAIL" },
                report.checks.len()
            );
            out
        }
    };
    Ok((text, code))
}
