//! `parliament`: command-line front end for toric vector bundle analyses.
//!
//! Every subcommand reads one bundle file, runs one analysis and writes the
//! result as JSON or text. Failures are reported on stderr with a stable code
//! and exit status 1 (bad input), 2 (incompatible filtrations) or 3 (internal).

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use toric_parliament::cohomology::{cech_report, cohomology_at, euler_characteristic, DEFAULT_REGION_CAP};
use toric_parliament::exactlin::vector_text;
use toric_parliament::format::BundleFile;
use toric_parliament::parliament::{global_sections, parliament};
use toric_parliament::positivity::analyze;
use toric_parliament::report::{
    cohomology_text, parliament_text, positivity_text, restriction_records, restrictions_text, sections_text,
    CohomologySummary, PolytopeRecord, Report,
};
use toric_parliament::svg::render_svg;
use toric_parliament::{sample, Error, QBundle};

#[derive(Parser, Debug)]
#[command(name = "parliament", version, about = "Parliaments of polytopes and positivity of toric vector bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Bundle file to read; standard input when omitted or `-`.
    #[arg(long, short, global = true)]
    input: Option<PathBuf>,

    /// Where to write the result; standard output when omitted or `-`.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[arg(long, short, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse the file and check that the filtrations are compatible.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Every analysis in one document.
    Report {
        #[command(flatten)]
        common: Common,
        /// Jet orders to test in addition to 1.
        #[arg(long, value_name = "K")]
        jets: Vec<i64>,
        /// Include the Čech cohomology summary.
        #[arg(long)]
        cohomology: bool,
    },
    /// The polytope of every ground-set vector.
    Parliament {
        #[command(flatten)]
        common: Common,
        /// Also draw the parliament as SVG (two-dimensional fans only).
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// Dimensions of the graded pieces of the global sections.
    Sections {
        #[command(flatten)]
        common: Common,
    },
    /// Global generation, jet separation, ampleness and nefness.
    Positivity {
        #[command(flatten)]
        common: Common,
        /// Jet orders to test in addition to 1.
        #[arg(long, value_name = "K")]
        jets: Vec<i64>,
    },
    /// Splitting types on the invariant curves.
    Restrict {
        #[command(flatten)]
        common: Common,
    },
    /// Čech cohomology by character.
    Cohomology {
        #[command(flatten)]
        common: Common,
        /// Only this character, as comma-separated integers.
        #[arg(long, value_name = "A,B,...", allow_hyphen_values = true)]
        character: Option<String>,
        /// Print the equivariant Euler characteristic.
        #[arg(long)]
        euler: bool,
    },
    /// Print a random compatible bundle file.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seed: u64,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Validate { common }
            | Command::Report { common, .. }
            | Command::Parliament { common, .. }
            | Command::Sections { common }
            | Command::Positivity { common, .. }
            | Command::Restrict { common }
            | Command::Cohomology { common, .. }
            | Command::Sample { common, .. } => common,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Analysis(Error),
    Io { path: String, source: io::Error },
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Analysis(e) => e.code(),
            Failure::Io { .. } => "io",
        }
    }

    fn status(&self) -> u8 {
        match self {
            Failure::Analysis(e) => e.exit_status() as u8,
            Failure::Io { .. } => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Analysis(e) => e.to_string(),
            Failure::Io { path, source } => format!("{path}: {source}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Analysis(e)
    }
}

fn is_stdio(path: &Option<PathBuf>) -> bool {
    path.as_deref().is_none_or(|p| p == Path::new("-"))
}

fn read_input(common: &Common) -> Result<BundleFile, Failure> {
    let mut text = String::new();
    match &common.input {
        Some(p) if !is_stdio(&common.input) => {
            text = fs::read_to_string(p).map_err(|source| Failure::Io { path: p.display().to_string(), source })?;
        }
        _ => {
            io::stdin().read_to_string(&mut text).map_err(|source| Failure::Io { path: "<stdin>".into(), source })?;
        }
    }
    Ok(BundleFile::parse(&text)?)
}

fn load(common: &Common) -> Result<(BundleFile, QBundle), Failure> {
    let file = read_input(common)?;
    let bundle = file.to_bundle()?;
    Ok((file, bundle))
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|source| Failure::Io { path: path.display().to_string(), source })
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

fn parse_character(text: &str, d: usize) -> Result<Vec<i64>, Error> {
    let u: Vec<i64> = text
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Error::InvalidInput { path: "--character".into(), message: e.to_string() })?;
    if u.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: u.len() });
    }
    Ok(u)
}

/// The text written to the output for one invocation.
fn run(command: &Command) -> Result<String, Failure> {
    let common = command.common();
    let text = common.format == Format::Text;
    let out = match command {
        Command::Validate { .. } => {
            let (file, b) = load(common)?;
            let summary = json!({
                "valid": true,
                "name": file.name,
                "lattice_rank": b.fan().dim(),
                "rank": b.rank(),
                "rays": b.fan().num_rays(),
                "max_cones": b.fan().num_cones(),
                "ground_set": b.ground_set().len(),
            });
            if text {
                format!(
                    "valid: rank {} bundle on a {}-dimensional fan with {} rays and {} maximal cones, {} ground-set vectors\n",
                    b.rank(),
                    b.fan().dim(),
                    b.fan().num_rays(),
                    b.fan().num_cones(),
                    b.ground_set().len()
                )
            } else {
                pretty(&summary)
            }
        }
        Command::Report { jets, cohomology, .. } => {
            let (file, b) = load(common)?;
            let report = Report::build(&b, file.name, jets, *cohomology)?;
            if text {
                report.to_text()
            } else {
                report.to_json()
            }
        }
        Command::Parliament { svg, .. } => {
            let (_, b) = load(common)?;
            let members = parliament(&b)?;
            if let Some(path) = svg {
                write_file(path, &render_svg(&b, &members)?)?;
            }
            let records: Vec<PolytopeRecord> = members.iter().map(PolytopeRecord::from).collect();
            if text {
                parliament_text(&records)
            } else {
                pretty(&records)
            }
        }
        Command::Sections { .. } => {
            let (_, b) = load(common)?;
            let table = global_sections(&b, &parliament(&b)?);
            if text {
                sections_text(&table)
            } else {
                pretty(&table)
            }
        }
        Command::Positivity { jets, .. } => {
            let (_, b) = load(common)?;
            let report = analyze(&b, jets)?;
            if text {
                positivity_text(&report)
            } else {
                pretty(&report)
            }
        }
        Command::Restrict { .. } => {
            let (_, b) = load(common)?;
            let records = restriction_records(&b)?;
            if text {
                restrictions_text(&records)
            } else {
                pretty(&records)
            }
        }
        Command::Cohomology { character, euler, .. } => {
            let (_, b) = load(common)?;
            let d = b.fan().dim();
            if let Some(c) = character {
                let u = parse_character(c, d)?;
                let h = cohomology_at(&b, &u)?;
                if text {
                    format!("{} h = {}\n", vector_text(&u), vector_text(&h))
                } else {
                    pretty(&json!({ "character": u, "h": h }))
                }
            } else if *euler {
                let chi = euler_characteristic(&b)?;
                if text {
                    format!("{chi}\n")
                } else {
                    pretty(&json!({ "euler": chi.to_string() }))
                }
            } else {
                let summary = CohomologySummary::new(&cech_report(&b, DEFAULT_REGION_CAP)?, d);
                if text {
                    cohomology_text(&summary)
                } else {
                    pretty(&summary)
                }
            }
        }
        Command::Sample { seed, .. } => {
            let b = sample::sample(*seed);
            BundleFile::from_bundle(&b, Some(format!("sample {seed}"))).to_json()
        }
    };
    Ok(if out.ends_with('\n') { out } else { out + "\n" })
}

fn report_failure(failure: &Failure, format: Format) {
    let stderr = io::stderr();
    let mut err = stderr.lock();
    let _ = match format {
        Format::Json => {
            let body = json!({ "error": { "code": failure.code(), "message": failure.message() } });
            writeln!(err, "{}", pretty(&body))
        }
        Format::Text => writeln!(err, "error [{}]: {}", failure.code(), failure.message()),
    };
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let common = cli.command.common();
    let result = run(&cli.command).and_then(|out| {
        if is_stdio(&common.output) {
            io::stdout().write_all(out.as_bytes()).map_err(|source| Failure::Io { path: "<stdout>".into(), source })
        } else {
            write_file(common.output.as_deref().expect("checked above"), &out)
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            report_failure(&failure, common.format);
            ExitCode::from(failure.status())
        }
    }
}
