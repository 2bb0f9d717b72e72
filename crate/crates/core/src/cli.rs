//! The `lsc` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or format error, 3 capacity
//! exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use num_rational::Ratio;

use crate::codes::CodeSpec;
use crate::container::{Container, PayloadKind};
use crate::error::Error;
use crate::gf::{FieldElement, FieldSpec};
use crate::lsc::{self, ListSourceCode, Syndrome, TrivialScheme, DEFAULT_LIST_CAP};
use crate::scheme::{derive_complement, two_phase_decrypt, two_phase_encrypt, InnerCipher};
use crate::secrecy::{LeakageAnalyzer, SourceModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

const PMF_FILE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "lsc",
    version,
    about = "List-source codes with tunable secrecy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a Vandermonde (MDS) parity check H and its complement D.
    MkCode {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Reduction polynomial for q = 256, e.g. 0x11B.
        #[arg(long, value_parser = parse_u32_auto)]
        poly: Option<u32>,
        /// Comma-separated distinct evaluation points.
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        out_h: PathBuf,
        #[arg(long)]
        out_d: PathBuf,
    },
    /// Pack comma-separated symbols into a plaintext container.
    Pack {
        #[arg(long)]
        q: u32,
        #[arg(long, value_parser = parse_u32_auto)]
        poly: Option<u32>,
        #[arg(long)]
        symbols: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a container's header and symbols.
    Show { file: PathBuf },
    /// Compute the syndrome of a plaintext block.
    Encode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// List the coset of a syndrome, one member per line.
    DecodeList {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        syndrome: PathBuf,
        /// Print at most this many members.
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Two-phase encryption.
    Encrypt {
        #[arg(long)]
        code: PathBuf,
        /// Complement D; derived from H when omitted.
        #[arg(long)]
        complement: Option<PathBuf>,
        #[arg(long, value_enum)]
        cipher: CipherArg,
        /// One-time pad as comma-separated symbols.
        #[arg(long)]
        key: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out_phase1: PathBuf,
        #[arg(long)]
        out_phase2: PathBuf,
    },
    /// Two-phase decryption.
    Decrypt {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        complement: Option<PathBuf>,
        #[arg(long, value_enum)]
        cipher: CipherArg,
        #[arg(long)]
        key: Option<String>,
        #[arg(long)]
        in_phase1: PathBuf,
        #[arg(long)]
        in_phase2: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustive symbol-secrecy analysis.
    Analyze {
        /// Parity-check container; alternatively give --q, --n, --k.
        #[arg(long, conflicts_with_all = ["q", "n", "k"])]
        code: Option<PathBuf>,
        #[arg(long, requires_all = ["n", "k"])]
        q: Option<u32>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_parser = parse_u32_auto)]
        poly: Option<u32>,
        /// Construction used with --q/--n/--k.
        #[arg(long, value_enum, default_value = "vandermonde")]
        scheme: SchemeArg,
        /// `uniform`, or a file with one probability per line.
        #[arg(long, default_value = "uniform")]
        source: String,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CipherArg {
    Otp,
    Prg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    Vandermonde,
    Trivial,
}

fn parse_u32_auto(s: &str) -> Result<u32, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u32::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| e.to_string())
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Capacity(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TooLarge { .. } | Error::ListTooLarge { .. } | Error::TooManySubsets { .. } => {
                Failure::Capacity(e.to_string())
            }
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
            Failure::Capacity(_) => EXIT_CAPACITY,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Capacity(m) => m,
        }
    }
}

type CmdResult<T = ()> = Result<T, Failure>;

/// Runs one command. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

fn read_container(path: &Path) -> CmdResult<Container> {
    let bytes = fs::read(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    Container::from_bytes(&bytes).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn write_container(path: &Path, c: &Container) -> CmdResult {
    fs::write(path, c.to_bytes()).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn parse_symbols(field: &FieldSpec, s: &str) -> CmdResult<Vec<FieldElement>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            let v: u64 = t
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("not a symbol: {t:?}")))?;
            field.element(v).map_err(|e| Failure::Usage(e.to_string()))
        })
        .collect()
}

fn join_symbols(xs: &[FieldElement]) -> String {
    xs.iter().join(",")
}

fn load_code(path: &Path) -> CmdResult<CodeSpec> {
    Ok(read_container(path)?.to_code()?)
}

fn load_complement(code: &CodeSpec, path: Option<&Path>) -> CmdResult<crate::linalg::Matrix> {
    match path {
        Some(p) => Ok(read_container(p)?.to_matrix()?),
        None => Ok(derive_complement(code)?),
    }
}

fn load_plaintext(path: &Path, code: &CodeSpec) -> CmdResult<Vec<FieldElement>> {
    let c = read_container(path)?;
    if c.kind != PayloadKind::Plaintext {
        return Err(Failure::Data(format!(
            "{}: not a plaintext payload",
            path.display()
        )));
    }
    if &c.field != code.field() {
        return Err(Failure::Data(
            "plaintext and code use different fields".into(),
        ));
    }
    Ok(c.symbols)
}

fn cipher_from_args(
    kind: CipherArg,
    field: &FieldSpec,
    key: Option<&str>,
    seed: Option<u64>,
) -> CmdResult<InnerCipher> {
    match kind {
        CipherArg::Otp => {
            let key = key.ok_or_else(|| Failure::Usage("--cipher otp needs --key".into()))?;
            Ok(InnerCipher::OneTimePad {
                key: parse_symbols(field, key)?,
            })
        }
        // The decryptor reads the seed from the phase-2 envelope.
        CipherArg::Prg => Ok(InnerCipher::PrgStream {
            seed: seed.unwrap_or(0),
        }),
    }
}

fn read_pmf_file(field: &FieldSpec, path: &Path) -> CmdResult<SourceModel> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    let pmf: Vec<f64> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.parse::<f64>()
                .map_err(|_| Failure::Data(format!("{}: not a probability: {l:?}", path.display())))
        })
        .collect::<CmdResult<_>>()?;
    let total: f64 = pmf.iter().sum();
    if (total - 1.0).abs() > PMF_FILE_TOLERANCE {
        return Err(Failure::Data(format!(
            "{}: probabilities sum to {total}",
            path.display()
        )));
    }
    if pmf.len() != field.order() as usize || pmf.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Failure::Data(format!(
            "{}: need {} nonnegative probabilities",
            path.display(),
            field.order()
        )));
    }
    let normalised = pmf.iter().map(|p| p / total).collect();
    Ok(SourceModel::new(field, normalised)?)
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let io = |e: std::io::Error| Failure::Data(e.to_string());
    match cmd {
        Command::MkCode {
            q,
            n,
            k,
            poly,
            points,
            out_h,
            out_d,
        } => {
            let field =
                FieldSpec::from_order(q, poly).map_err(|e| Failure::Usage(e.to_string()))?;
            let points = points.map(|p| parse_symbols(&field, &p)).transpose()?;
            let code = CodeSpec::vandermonde(&field, n, k, points.as_deref())?;
            let d = derive_complement(&code)?;
            write_container(&out_h, &Container::parity_check(&code))?;
            write_container(&out_d, &Container::matrix(&d, n, k))?;
        }
        Command::Pack {
            q,
            poly,
            symbols,
            out: path,
        } => {
            let field =
                FieldSpec::from_order(q, poly).map_err(|e| Failure::Usage(e.to_string()))?;
            let xs = parse_symbols(&field, &symbols)?;
            write_container(&path, &Container::plaintext(&field, xs))?;
        }
        Command::Show { file } => {
            let c = read_container(&file)?;
            writeln!(out, "field = {}", c.field).map_err(io)?;
            writeln!(out, "n = {}", c.n).map_err(io)?;
            writeln!(out, "k = {}", c.k).map_err(io)?;
            writeln!(out, "payload = {:?}", c.kind).map_err(io)?;
            writeln!(out, "rows = {}", c.rows).map_err(io)?;
            if let Some(seed) = c.seed_envelope() {
                writeln!(out, "seed = {}", u64::from_le_bytes(seed)).map_err(io)?;
            }
            writeln!(out, "symbols = {}", join_symbols(&c.symbols)).map_err(io)?;
        }
        Command::Encode {
            code,
            input,
            out: path,
        } => {
            let code = load_code(&code)?;
            let x = load_plaintext(&input, &code)?;
            let s = lsc::encode(&code, &x)?;
            write_container(&path, &Container::syndrome(&code, &s))?;
        }
        Command::DecodeList {
            code,
            syndrome,
            limit,
        } => {
            let code = load_code(&code)?;
            let s = read_container(&syndrome)?;
            if !matches!(s.kind, PayloadKind::Syndrome | PayloadKind::Phase1) {
                return Err(Failure::Data("expected a syndrome payload".into()));
            }
            let s = Syndrome::new(s.symbols);
            let list = lsc::decode_list(&code, &s)?;
            writeln!(err, "coset size {}", list.cardinality_exact()).map_err(io)?;
            let members = list.members_with_cap(DEFAULT_LIST_CAP)?;
            let limit = limit.unwrap_or(u64::MAX) as usize;
            for x in members.take(limit) {
                writeln!(out, "{}", join_symbols(&x)).map_err(io)?;
            }
        }
        Command::Encrypt {
            code,
            complement,
            cipher,
            key,
            seed,
            input,
            out_phase1,
            out_phase2,
        } => {
            let code = load_code(&code)?;
            let d = load_complement(&code, complement.as_deref())?;
            if cipher_is_prg(cipher) && seed.is_none() {
                return Err(Failure::Usage("--cipher prg needs --seed".into()));
            }
            let cipher = cipher_from_args(cipher, code.field(), key.as_deref(), seed)?;
            let x = load_plaintext(&input, &code)?;
            let bundle = two_phase_encrypt(&x, &code, &d, &cipher)?;
            write_container(&out_phase1, &Container::phase1(&code, &bundle))?;
            write_container(&out_phase2, &Container::phase2(&code, &bundle))?;
        }
        Command::Decrypt {
            code,
            complement,
            cipher,
            key,
            in_phase1,
            in_phase2,
            out: path,
        } => {
            let code = load_code(&code)?;
            let d = load_complement(&code, complement.as_deref())?;
            let cipher = cipher_from_args(cipher, code.field(), key.as_deref(), None)?;
            let bundle =
                Container::to_bundle(&read_container(&in_phase1)?, &read_container(&in_phase2)?)?;
            let x = two_phase_decrypt(&bundle, &code, &d, &cipher)?;
            write_container(&path, &Container::plaintext(code.field(), x))?;
        }
        Command::Analyze {
            code,
            q,
            n,
            k,
            poly,
            scheme,
            source,
            epsilon,
        } => {
            let (field, encoder): (FieldSpec, Box<dyn ListSourceCode>) = match (code, q, n, k) {
                (Some(path), ..) => {
                    let c = load_code(&path)?;
                    (c.field().clone(), Box::new(c))
                }
                (None, Some(q), Some(n), Some(k)) => {
                    let field = FieldSpec::from_order(q, poly)
                        .map_err(|e| Failure::Usage(e.to_string()))?;
                    let enc: Box<dyn ListSourceCode> = match scheme {
                        SchemeArg::Vandermonde => {
                            Box::new(CodeSpec::vandermonde(&field, n, k, None)?)
                        }
                        SchemeArg::Trivial => {
                            if n == 0 || k > n {
                                return Err(Failure::Usage("need 0 <= k <= n".into()));
                            }
                            Box::new(TrivialScheme::new(&field, n, Ratio::new(k, n))?)
                        }
                    };
                    (field, enc)
                }
                _ => return Err(Failure::Usage("give --code or all of --q, --n, --k".into())),
            };
            let source = if source == "uniform" {
                SourceModel::uniform(&field)
            } else {
                read_pmf_file(&field, Path::new(&source))?
            };
            let analyzer = LeakageAnalyzer::new(encoder.as_ref(), &source)?;
            let report = analyzer.report(epsilon)?;
            write!(out, "{}", report.to_text()).map_err(io)?;
        }
    }
    Ok(())
}

fn cipher_is_prg(c: CipherArg) -> bool {
    matches!(c, CipherArg::Prg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("lsc").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["mk-code", "--q", "5"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["analyze", "--q", "6", "--n", "2", "--k", "1"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn analyze_inline_code() {
        let (code, out, _) = run_args(&["analyze", "--q", "5", "--n", "4", "--k", "2"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("mu_zero = 0.5\n"), "{out}");
    }

    #[test]
    fn analyze_capacity_exit_code() {
        let (code, _, err) = run_args(&["analyze", "--q", "11", "--n", "7", "--k", "3"]);
        assert_eq!(code, EXIT_CAPACITY, "{err}");
    }

    #[test]
    fn analyze_epsilon_out_of_range_is_data_error() {
        let (code, _, _) = run_args(&[
            "analyze",
            "--q",
            "2",
            "--n",
            "2",
            "--k",
            "1",
            "--epsilon",
            "1",
        ]);
        assert_eq!(code, EXIT_DATA);
    }

    #[test]
    fn parse_hex_and_decimal() {
        assert_eq!(parse_u32_auto("0x11B"), Ok(0x11B));
        assert_eq!(parse_u32_auto("283"), Ok(283));
        assert!(parse_u32_auto("zz").is_err());
    }
}
