//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check or oracle comparison failed, 2 usage or
//! hypothesis error. [`run`] never panics on bad input and never calls
//! `process::exit`, so it can be driven from tests.

mod render;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classify::{classify_all, classify_for_subgroup, isotopic_by_chi, ClassifyMode, ClassifyOptions};
use crate::cycle_index::{closed_form_p2, cycle_index_affine, cycle_index_affine_parallel, evaluate_at, itp_count};
use crate::error::{Error, Result};
use crate::modular::Modulus;
use crate::right_loop::{build_zna, isotopic_bruteforce, OracleBounds};
use crate::subset::SubsetA;
use crate::verify::{run_default, run_for_modulus, VerifyConfig};

pub use render::{CheckJson, ClassJson, ClassifyJson, CountJson, EvalJson, IsotopicJson, VerifyJson};

/// Environment variable read when `--threads` is absent.
pub const THREADS_ENV: &str = "DIHEDRAL_ISOTOPY_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "dihedral-isotopy", version, about = "Isotopy classes of transversal right loops in D_2n")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Oracle {
    Chi,
    Brute,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Order of the rotation subgroup; must be odd and > 1 for most commands.
    #[arg(long, global = true)]
    pub n: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// List every member of each class.
    #[arg(long, global = true)]
    pub members: bool,
    /// Transversals are taken for the subgroup {1, a b^k}.
    #[arg(long, global = true, default_value_t = 0)]
    pub subgroup_k: u64,
    #[arg(long, global = true, default_value_t = 9, value_parser = clap::value_parser!(u64).range(1..))]
    pub brute_bound: u64,
    #[arg(long, global = true, default_value_t = 25, value_parser = clap::value_parser!(u64).range(1..))]
    pub classify_bound: u64,
    /// Worker threads; 0 picks automatically, 1 selects the single-threaded reference path.
    #[arg(long, global = true, env = THREADS_ENV, default_value_t = 0)]
    pub threads: usize,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partition all subsets A ⊆ Z_n∖{0} into isotopy classes.
    Classify,
    /// Number of isotopy classes from the cycle index.
    Count,
    /// Cycle index of Aff(1, n).
    CycleIndex {
        /// Evaluate at x_l = VALUE for every l.
        #[arg(long, allow_negative_numbers = true)]
        eval: Option<i64>,
        /// Use the closed form for n = p².
        #[arg(long, value_name = "P")]
        closed_form: Option<u64>,
        /// Print both forms and whether they agree.
        #[arg(long, requires = "closed_form")]
        compare: bool,
    },
    /// Decide whether T_A and T_C are isotopic.
    Isotopic {
        #[arg(long)]
        a: String,
        #[arg(long)]
        c: String,
        #[arg(long, value_enum, default_value_t = Oracle::Chi)]
        oracle: Oracle,
    },
    /// Cayley table of Z_n^A.
    LoopTable {
        #[arg(long)]
        a: String,
    },
    /// Run the self-check suite, or the checks for one n with --n.
    Verify,
}

impl RunConfig {
    fn modulus(&self) -> Result<Modulus> {
        let n = self.n.ok_or_else(|| Error::Parse("--n is required".into()))?;
        Modulus::new(n)
    }

    fn odd_modulus(&self) -> Result<Modulus> {
        let n = self.modulus()?;
        n.require_odd()?;
        Ok(n)
    }

    fn classify_options(&self) -> ClassifyOptions {
        let mode = if self.threads == 1 { ClassifyMode::Reference } else { ClassifyMode::Parallel };
        ClassifyOptions { bound: self.classify_bound, mode }
    }

    fn oracle_bounds(&self) -> OracleBounds {
        OracleBounds { brute: self.brute_bound as usize, ..OracleBounds::default() }
    }
}

/// Outcome of a command: rendered output and exit code.
struct Outcome {
    output: String,
    code: i32,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, code: EXIT_OK }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let config = cli.config.clone();
    let outcome = with_threads(config.threads, || execute(&cli.command, &config));
    match outcome {
        Ok(Outcome { output, code }) => match emit(&config, &output) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_USAGE
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn with_threads<R: Send>(threads: usize, body: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        return body();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(body),
        Err(_) => body(),
    }
}

fn emit(config: &RunConfig, output: &str) -> std::io::Result<()> {
    match &config.out {
        Some(path) => std::fs::write(path, output),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(output.as_bytes())?;
            stdout.flush()
        }
    }
}

fn execute(command: &Command, config: &RunConfig) -> Result<Outcome> {
    match command {
        Command::Classify => cmd_classify(config),
        Command::Count => cmd_count(config),
        Command::CycleIndex { eval, closed_form, compare } => cmd_cycle_index(config, *eval, *closed_form, *compare),
        Command::Isotopic { a, c, oracle } => cmd_isotopic(config, a, c, *oracle),
        Command::LoopTable { a } => cmd_loop_table(config, a),
        Command::Verify => cmd_verify(config),
    }
}

fn cmd_classify(config: &RunConfig) -> Result<Outcome> {
    let n = config.odd_modulus()?;
    let options = config.classify_options();
    let partition = if config.subgroup_k.is_multiple_of(n.get()) {
        classify_all(n, options)?
    } else {
        classify_for_subgroup(n, config.subgroup_k, options)?
    };
    let json = ClassifyJson::from_partition(&partition, config.members)?;
    let output = match config.format {
        Format::Json => render::to_json(&json) + "\n",
        Format::Text => {
            let mut out = format!("classes: {}\n", json.class_count);
            for class in &json.classes {
                let rep = partition.rep(class.id)?;
                let _ = writeln!(out, "{} {} {}", class.id, class.size, rep);
                if config.members {
                    let members: Vec<String> =
                        partition.class_members(class.id)?.iter().map(ToString::to_string).collect();
                    let _ = writeln!(out, "  {}", members.join(" "));
                }
            }
            out
        }
    };
    Ok(Outcome::ok(output))
}

fn cmd_count(config: &RunConfig) -> Result<Outcome> {
    let n = config.odd_modulus()?;
    let count = itp_count(n)?;
    Ok(Outcome::ok(match config.format {
        Format::Text => format!("{count}\n"),
        Format::Json => render::to_json(&CountJson { n: n.get(), count: count.to_string() }) + "\n",
    }))
}

fn cmd_cycle_index(config: &RunConfig, eval: Option<i64>, closed_form: Option<u64>, compare: bool) -> Result<Outcome> {
    let n = config.modulus()?;
    let enumerate = || if config.threads == 1 { cycle_index_affine(n) } else { cycle_index_affine_parallel(n) };
    let closed = match closed_form {
        Some(p) => {
            if p.checked_mul(p) != Some(n.get()) {
                return Err(Error::Parse(format!("--closed-form {p} requires n = p², got n = {n}")));
            }
            Some(closed_form_p2(p)?)
        }
        None => None,
    };
    if compare {
        let closed = closed.expect("clap enforces --closed-form with --compare");
        let enumerated = enumerate();
        let equal = closed == enumerated;
        let output = match config.format {
            Format::Text => format!(
                "enumerated:  {enumerated}\nclosed form: {closed}\n{}\n",
                if equal { "EQUAL" } else { "DIFFERENT" }
            ),
            Format::Json => {
                render::to_json(&render::CompareJson {
                    n: n.get(),
                    equal,
                    enumerated: enumerated.json_repr(),
                    closed_form: closed.json_repr(),
                }) + "\n"
            }
        };
        return Ok(Outcome { output, code: if equal { EXIT_OK } else { EXIT_FAILED } });
    }
    let poly = closed.unwrap_or_else(enumerate);
    let output = match (eval, config.format) {
        (Some(v), Format::Text) => format!("{}\n", evaluate_at(&poly, v)),
        (Some(v), Format::Json) => {
            render::to_json(&EvalJson { n: n.get(), at: v, value: evaluate_at(&poly, v).to_string() }) + "\n"
        }
        (None, Format::Text) => format!("{poly}\n"),
        (None, Format::Json) => poly.to_json() + "\n",
    };
    Ok(Outcome::ok(output))
}

fn cmd_isotopic(config: &RunConfig, a: &str, c: &str, oracle: Oracle) -> Result<Outcome> {
    let n = config.odd_modulus()?;
    let a = SubsetA::parse(n, a)?;
    let c = SubsetA::parse(n, c)?;
    let chi = matches!(oracle, Oracle::Chi | Oracle::Both).then(|| isotopic_by_chi(n, &a, &c)).transpose()?;
    let brute = match oracle {
        Oracle::Chi => None,
        _ => Some(isotopic_bruteforce(&build_zna(n, &a)?, &build_zna(n, &c)?, config.oracle_bounds())?.is_some()),
    };
    let agree = chi.zip(brute).map(|(x, y)| x == y);
    let code = if agree == Some(false) { EXIT_FAILED } else { EXIT_OK };
    let output = match config.format {
        Format::Json => {
            render::to_json(&IsotopicJson { n: n.get(), a: a.to_vec(), c: c.to_vec(), chi, brute, agree }) + "\n"
        }
        Format::Text => {
            let mut out = String::new();
            if let Some(v) = chi {
                let _ = writeln!(out, "chi: {v}");
            }
            if let Some(v) = brute {
                let _ = writeln!(out, "brute: {v}");
            }
            match agree {
                Some(true) => out.push_str("agreement\n"),
                Some(false) => out.push_str("DISAGREEMENT\n"),
                None => {}
            }
            out
        }
    };
    Ok(Outcome { output, code })
}

fn cmd_loop_table(config: &RunConfig, a: &str) -> Result<Outcome> {
    let n = config.modulus()?;
    let table = build_zna(n, &SubsetA::parse(n, a)?)?;
    Ok(Outcome::ok(match config.format {
        Format::Text => table.to_text(),
        Format::Json => table.to_json() + "\n",
    }))
}

fn cmd_verify(config: &RunConfig) -> Result<Outcome> {
    let verify_config = VerifyConfig {
        classify: config.classify_options(),
        bounds: config.oracle_bounds(),
        subgroup_k: config.subgroup_k,
    };
    let report = match config.n {
        Some(n) => {
            Modulus::new_odd(n)?;
            run_for_modulus(n, &verify_config)
        }
        None => run_default(&verify_config),
    };
    let output = match config.format {
        Format::Text => format!("{report}\n"),
        Format::Json => render::to_json(&VerifyJson::from(&report)) + "\n",
    };
    Ok(Outcome { output, code: if report.passed() { EXIT_OK } else { EXIT_FAILED } })
}
