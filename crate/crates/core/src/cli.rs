//! Command-line front end.
//!
//! Exit codes: 0 clean, 1 counterexample found, 2 usage or parse error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::classify::classify;
use crate::error::{Error, Result};
use crate::geninv::InverseBundle;
use crate::harness::{generate, sweep, EntrySelection, GeneratorSpec, Mode, DEFAULT_BUDGET};
use crate::matrix::Matrix;
use crate::report::VerificationReport;
use crate::starfield::Field;
use crate::theorems::{informational, registry, TheoremEntry};

pub const EXIT_CLEAN: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "starring",
    version,
    about = "Generalized inverses and SEP checks in matrix *-rings"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Moore-Penrose and group inverses of a matrix.
    Invert(MatrixArgs),
    /// Print the classes a matrix belongs to.
    Classify(MatrixArgs),
    /// Check the registry entries over a generated stream of elements.
    Verify(VerifyArgs),
    /// List the elements a generator produces.
    Enumerate(EnumerateArgs),
    /// Print the registry.
    Theorems(TheoremsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Constructed {
    Sep,
    Ep,
    Pi,
}

fn parse_ring(s: &str) -> Result<Field> {
    Field::from_short_name(s)
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["matrix", "input"]))]
pub struct MatrixArgs {
    /// Ring of an inline matrix: q, qi, f<p> or f<p>2.
    #[arg(long, value_parser = parse_ring)]
    pub ring: Option<Field>,
    /// Inline matrix, rows separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
    /// File in the matrix text format.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["exhaustive", "random", "constructed"]))]
pub struct GeneratorArgs {
    #[arg(long, value_parser = parse_ring)]
    pub ring: Field,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Every matrix of a finite ring.
    #[arg(long)]
    pub exhaustive: bool,
    /// Seeded random matrices.
    #[arg(long)]
    pub random: bool,
    /// Elements built to be SEP, EP but not PI, or PI but not in R#.
    #[arg(long, value_enum)]
    pub constructed: Option<Constructed>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Largest ring an exhaustive run may enumerate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
}

impl GeneratorArgs {
    pub fn spec(&self) -> GeneratorSpec {
        let mode = match (self.exhaustive, self.random, self.constructed) {
            (true, _, _) => Mode::Exhaustive,
            (_, true, _) => Mode::Random,
            (_, _, Some(Constructed::Sep)) => Mode::ConstructedSep,
            (_, _, Some(Constructed::Ep)) => Mode::ConstructedEpOnly,
            _ => Mode::ConstructedPiOnly,
        };
        let mut spec = match mode {
            Mode::Exhaustive => GeneratorSpec::exhaustive(self.ring, self.dim),
            m => GeneratorSpec::sampled(m, self.ring, self.dim, self.count, self.seed),
        };
        spec.budget = self.budget;
        spec
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub generator: GeneratorArgs,
    /// Comma-separated entry ids, or `all`.
    #[arg(long, default_value = "all")]
    pub entries: EntrySelection,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub generator: GeneratorArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TheoremsArgs {
    /// Only entries from this section.
    #[arg(long)]
    pub section: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_CLEAN
            };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Invert(args) => cmd_invert(&args, out),
        Command::Classify(args) => cmd_classify(&args, out),
        Command::Verify(args) => cmd_verify(&args, out),
        Command::Enumerate(args) => cmd_enumerate(&args, out),
        Command::Theorems(args) => cmd_theorems(&args, out),
    }
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidSpec(format!("i/o: {e}"))
}

fn read_matrix(args: &MatrixArgs) -> Result<Matrix> {
    let m = match (&args.matrix, &args.input) {
        (Some(inline), _) => {
            let ring = args
                .ring
                .ok_or_else(|| Error::InvalidSpec("--matrix needs --ring".into()))?;
            Matrix::parse_inline(ring, inline)?
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(io)?;
            let m = Matrix::parse_text(&text)?;
            if let Some(ring) = args.ring {
                if ring != m.field() {
                    return Err(Error::FieldMismatch {
                        left: ring,
                        right: m.field(),
                    });
                }
            }
            m
        }
        (None, None) => return Err(Error::InvalidSpec("no matrix given".into())),
    };
    m.check_ring_element()?;
    Ok(m)
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body).map_err(io),
        None => out.write_all(body.as_bytes()).map_err(io),
    }
}

fn cmd_invert(args: &MatrixArgs, out: &mut dyn Write) -> Result<i32> {
    let b = InverseBundle::new(read_matrix(args)?)?;
    let body = match args.format {
        Format::Json => {
            let v = json!({
                "element": b.a().to_string_rows(),
                "mp": b.mp().map(Matrix::to_string_rows),
                "group": b.group().map(Matrix::to_string_rows),
            });
            serde_json::to_string_pretty(&v).expect("serializes") + "\n"
        }
        Format::Text => {
            let mut s = String::new();
            for (name, inv) in [("a†", b.mp()), ("a#", b.group())] {
                match inv {
                    Some(m) => {
                        s += &format!("# {name}\n");
                        s += &m.to_text();
                    }
                    None => s += &format!("# {name} does not exist\n"),
                }
            }
            s
        }
    };
    emit(out, None, &body)?;
    Ok(EXIT_CLEAN)
}

fn cmd_classify(args: &MatrixArgs, out: &mut dyn Write) -> Result<i32> {
    let c = classify(&InverseBundle::new(read_matrix(args)?)?);
    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&c).expect("serializes") + "\n",
        Format::Text => format!(
            "projection {}\nEP {}\nPI {}\nSEP {}\nR† {}\nR# {}\n",
            c.is_projection, c.is_ep, c.is_pi, c.is_sep, c.in_rdag, c.in_rsharp
        ),
    };
    emit(out, None, &body)?;
    Ok(EXIT_CLEAN)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let report = sweep(&args.generator.spec(), &args.entries)?;
    let body = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    emit(out, args.out.as_ref(), &body)?;
    Ok(exit_code(&report))
}

pub fn exit_code(report: &VerificationReport) -> i32 {
    if report.is_clean() {
        EXIT_CLEAN
    } else {
        EXIT_COUNTEREXAMPLE
    }
}

fn cmd_enumerate(args: &EnumerateArgs, out: &mut dyn Write) -> Result<i32> {
    let elements = generate(&args.generator.spec())?;
    let body = match args.format {
        Format::Json => {
            let list: Vec<_> = elements.iter().map(Matrix::to_string_rows).collect();
            serde_json::to_string_pretty(&list).expect("serializes") + "\n"
        }
        Format::Text => elements.iter().map(|m| m.to_inline() + "\n").collect(),
    };
    emit(out, args.out.as_ref(), &body)?;
    Ok(EXIT_CLEAN)
}

#[derive(Serialize)]
struct Row {
    id: &'static str,
    kind: &'static str,
    expression: &'static str,
    citation: &'static str,
    gated: bool,
}

fn row(e: &TheoremEntry) -> Row {
    Row {
        id: e.id,
        kind: match e.kind() {
            crate::theorems::EntryKind::BiconditionalWithSep => "biconditional-with-sep",
            crate::theorems::EntryKind::BiconditionalWithPi => "biconditional-with-pi",
        },
        expression: e.expression,
        citation: e.citation,
        gated: e.gated,
    }
}

const LEMMA_ROWS: [Row; 2] = [
    Row {
        id: "L2.8",
        kind: "lemma",
        expression: "x ∈ PE(R), x = aa†xa†a ⟹ a†axaa† ∈ PE(R)",
        citation: "Lemma 2.8",
        gated: true,
    },
    Row {
        id: "L3.1",
        kind: "lemma",
        expression: "e is a left a-idempotent ⟺ a - e is a right a-idempotent",
        citation: "Lemma 3.1",
        gated: true,
    },
];

fn cmd_theorems(args: &TheoremsArgs, out: &mut dyn Write) -> Result<i32> {
    let mut rows: Vec<Row> = registry()
        .iter()
        .chain(informational().iter())
        .filter(|e| {
            args.section
                .is_none_or(|s| e.section() == s && e.id.starts_with('T'))
        })
        .map(row)
        .collect();
    if args.section.is_none() {
        rows.extend(LEMMA_ROWS);
    }
    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("serializes") + "\n",
        Format::Text => rows
            .iter()
            .map(|r| {
                let note = if r.gated { "" } else { "  [informational]" };
                format!("{:<6} {:<52} {}{}\n", r.id, r.expression, r.citation, note)
            })
            .collect(),
    };
    emit(out, None, &body)?;
    Ok(EXIT_CLEAN)
}
