//! `lfhh`: check LF judgments, encode signatures as hereditary Harrop
//! programs, search for proofs of encoded judgments, and compare the two.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 usage or input error,
//! 3 proof search left the pattern fragment, 4 unsound mismatches found.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use lfhh::concrete::{parse_judgment, print, ParseError, SourceSignature};
use lfhh::encoding::{encode_signature, judgment_to_goal, EncodingError};
use lfhh::erasure::reflect_signature;
use lfhh::harness::{run_campaign, CampaignConfig};
use lfhh::kernel::{self, Conversion, Kernel, TypeErrorKind};
use lfhh::prover::{replay_trace, solve, SolveResult};
use lfhh::syntax::{LfContext, LfFamily, LfObject, LfSignature};

#[derive(Parser)]
#[command(name = "lfhh", version, about = "LF type checking versus proof search over its erasure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an LF judgment with the kernel.
    Check {
        signature: PathBuf,
        #[arg(long)]
        judgment: String,
        #[arg(long, value_enum, default_value_t = ConversionArg::BetaEta)]
        conversion: ConversionArg,
    },
    /// Print the signature as an istype/hastype program.
    Encode {
        signature: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also print the simple types of the reflected constants.
        #[arg(long)]
        emit_reflected: bool,
    },
    /// Search for a proof of an encoded judgment.
    Prove {
        signature: PathBuf,
        #[arg(long)]
        judgment: String,
        /// Bound on backchaining steps along a branch.
        #[arg(long)]
        depth: usize,
        /// Write the proof as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Compare kernel and prover on every small judgment.
    Difftest {
        signature: PathBuf,
        #[arg(long)]
        max_size: usize,
        #[arg(long, default_value_t = 4)]
        depth_mult: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Largest index object inside an annotation or type.
        #[arg(long, default_value_t = 1)]
        max_index_size: usize,
        /// Largest number of binders in a λ-annotation.
        #[arg(long, default_value_t = 1)]
        annotation_pi: usize,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConversionArg {
    Beta,
    BetaEta,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

const NOT_DERIVABLE: u8 = 1;
const USAGE: u8 = 2;
const NON_PATTERN: u8 = 3;
const MISMATCH: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Check { signature, judgment, conversion } => {
            let sig = load(&signature)?;
            let (m, a) = judgment_arg(&judgment, &sig)?;
            let mode = match conversion {
                ConversionArg::Beta => Conversion::Beta,
                ConversionArg::BetaEta => Conversion::BetaEta,
            };
            let result = Kernel::with_conversion(&sig, mode).check_object(&LfContext::new(), &m, &a);
            let shown = print::judgment(&m, &a);
            match result.error() {
                None => {
                    println!("derivable: {shown}");
                    Ok(0)
                }
                Some(e) => {
                    println!("not derivable: {shown}");
                    println!("  {e}");
                    Ok(NOT_DERIVABLE)
                }
            }
        }
        Command::Encode { signature, output, emit_reflected } => {
            let sig = load(&signature)?;
            let program = encode_signature(&sig)?;
            let mut text = String::new();
            if emit_reflected {
                text.push_str(&print::constant_decls(reflect_signature(&sig).constants()));
            }
            text.push_str(&print::program(&program));
            match output {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Prove { signature, judgment, depth, trace } => {
            let sig = load(&signature)?;
            let (m, a) = judgment_arg(&judgment, &sig)?;
            let program = encode_signature(&sig)?;
            let goal = match judgment_to_goal(&sig, &m, &a) {
                Ok(g) => g,
                Err(EncodingError::IllTyped(e)) => {
                    println!("not provable: {}", print::judgment(&m, &a));
                    println!("  the erased subject is not simply typed: {e}");
                    return Ok(NOT_DERIVABLE);
                }
                Err(e) => return Err(e.into()),
            };
            let shown = print::goal(&goal);
            match solve(&program, &goal, depth) {
                SolveResult::Proved(proof) => {
                    if !replay_trace(&program, &goal, &proof) {
                        return Err(anyhow!("the proof found for {shown} does not replay"));
                    }
                    println!("proved: {shown}");
                    print!("{}", proof.render());
                    if let Some(path) = trace {
                        let json = serde_json::to_string_pretty(&proof.to_json())?;
                        fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
                    }
                    Ok(0)
                }
                SolveResult::Incomplete(problem) => {
                    println!("unknown: {shown}");
                    println!("  unification problem outside the pattern fragment: {problem}");
                    Ok(NON_PATTERN)
                }
                other => {
                    println!("not proved: {shown}");
                    println!("  {other}");
                    Ok(NOT_DERIVABLE)
                }
            }
        }
        Command::Difftest { signature, max_size, depth_mult, format, max_index_size, annotation_pi, threads } => {
            let sig = load(&signature)?;
            let mut config = CampaignConfig::new(sig, max_size);
            config.depth_mult = depth_mult;
            config.max_index_size = max_index_size;
            config.max_annotation_pi = annotation_pi;
            config.parallelism = threads;
            let report = run_campaign(&config);
            if let Some(e) = &report.error {
                return Err(anyhow!("{e}"));
            }
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.to_json())?),
            }
            Ok(if report.mismatches.is_empty() { 0 } else { MISMATCH })
        }
    }
}

fn located(path: &Path, e: &ParseError) -> anyhow::Error {
    anyhow!("{}:{}:{}: {}", path.display(), e.line, e.col, e.kind)
}

/// Reads and parses a signature and has the kernel check it.
fn load(path: &Path) -> Result<LfSignature> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let source = SourceSignature::parse(&text).map_err(|e| located(path, &e))?;
    if let Some(e) = kernel::check_signature(&source.signature).error() {
        if let TypeErrorKind::IllFormedSignature { index, .. } = &e.kind {
            let pos = source.locations[*index];
            return Err(anyhow!("{}:{}:{}: {e}", path.display(), pos.line, pos.col));
        }
        return Err(anyhow!("{}: {e}", path.display()));
    }
    Ok(source.signature)
}

fn judgment_arg(text: &str, sig: &LfSignature) -> Result<(LfObject, LfFamily)> {
    parse_judgment(text, sig).map_err(|e| anyhow!("in judgment `{text}`: {e}"))
}
