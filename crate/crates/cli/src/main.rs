use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use emdm_er::export::{export, ExportOptions, Format, RankDir};
use emdm_er::{parse_schema, rea2::rea2_with, Rea2Error, Rea2Options, Rea2Request};

/// Translates an (E)MDM schema into an E-R data model: a diagram (DOT), its
/// restriction set and informal description (Markdown) and the whole model
/// (JSON).
#[derive(Debug, Parser)]
#[command(name = "emdm-er", version)]
struct Cli {
    /// Schema source file (.emdm)
    #[arg(long)]
    schema: PathBuf,

    /// Center set; omit for the whole model
    #[arg(long = "set", value_name = "SET")]
    center: Option<String>,

    /// Sub-model radius around the center set (0 gives its single E-RD)
    #[arg(long)]
    radius: Option<u32>,

    /// Comma-separated output formats
    #[arg(long, value_delimiter = ',', default_value = "dot,json,md")]
    format: Vec<Format>,

    #[arg(long, default_value = ".")]
    out_dir: PathBuf,

    /// Let sub-model sets pull in codomains one hop beyond the radius
    #[arg(long)]
    spill_boundary: bool,

    /// Also write a JSON report of the step counters
    #[arg(long)]
    counters: bool,

    /// Ignore --radius when --set is missing instead of rejecting it
    #[arg(long)]
    lenient: bool,

    #[arg(long, default_value = "LR")]
    rankdir: RankDir,

    /// Leave the informal description out of the Markdown output
    #[arg(long)]
    no_informal: bool,
}

enum Failure {
    Usage(String),
    Parse,
    Translate(Rea2Error),
    Io(PathBuf, std::io::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse => 1,
            Failure::Translate(_) => 2,
            Failure::Io(..) => 3,
            Failure::Usage(_) => 64,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "error: {m}"),
            Failure::Parse => f.write_str("error: the schema has errors"),
            Failure::Translate(e) => write!(f, "{e}"),
            Failure::Io(p, e) => write!(f, "error: {}: {e}", p.display()),
        }
    }
}

fn stem(schema: &Path, center: Option<&str>, radius: u32) -> String {
    let mut s = schema
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "schema".into());
    if let Some(c) = center {
        s.push_str(&format!(".{c}.r{radius}"));
    }
    s
}

fn write(path: PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(&path, text).map_err(|e| Failure::Io(path, e))
}

fn run(mut cli: Cli) -> Result<(), Failure> {
    if cli.center.is_none() && cli.radius.is_some() {
        if !cli.lenient {
            return Err(Failure::Usage(
                "--radius requires --set (pass --lenient to ignore it)".into(),
            ));
        }
        eprintln!("warning: --radius ignored without --set");
        cli.radius = None;
    }
    let source = std::fs::read_to_string(&cli.schema).map_err(|e| Failure::Io(cli.schema.clone(), e))?;
    let shown = cli.schema.display();
    let parsed = match parse_schema(&source) {
        Ok(p) => p,
        Err(failure) => {
            for d in &failure.diagnostics {
                eprintln!("{shown}:{d}");
            }
            return Err(Failure::Parse);
        }
    };
    for d in &parsed.diagnostics {
        eprintln!("{shown}:{d}");
    }

    let request = Rea2Request {
        center: cli.center.clone(),
        radius: cli.radius,
    };
    let options = Rea2Options {
        spill_boundary: cli.spill_boundary,
    };
    let out = rea2_with(&parsed.schema, &request, options).map_err(Failure::Translate)?;

    std::fs::create_dir_all(&cli.out_dir).map_err(|e| Failure::Io(cli.out_dir.clone(), e))?;
    let base = stem(&cli.schema, cli.center.as_deref(), cli.radius.unwrap_or(0));
    let mut formats = cli.format.clone();
    formats.sort();
    formats.dedup();
    for format in formats {
        let opts = ExportOptions {
            format,
            include_informal: !cli.no_informal,
            rankdir: cli.rankdir,
        };
        write(
            cli.out_dir.join(format!("{base}.{}", format.extension())),
            &export(&out.model, &opts),
        )?;
    }
    if cli.counters {
        let report = serde_json::json!({
            "counters": out.counters,
            "total": out.counters.total(),
            "max_addset_body_runs": out.counters.max_body_runs(),
            "sub_model": out.table,
        });
        let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
        text.push('\n');
        write(cli.out_dir.join(format!("{base}.counters.json")), &text)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(64);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}
