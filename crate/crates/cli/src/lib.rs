//! Command-line driver for `bergman-core`: argument handling, validation,
//! structured diagnostics and deterministic CSV/JSON/SVG export.
//!
//! Exit status: 0 on success, 2 on a validation error, 3 on a numerical
//! failure (including a failed `verify` check), 1 on an I/O error. Every
//! failure is reported on the error stream as one JSON object with a stable
//! `code`.

pub mod args;
pub mod commands;
pub mod diag;
pub mod export;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Format};
use crate::commands::{dispatch, Output};
use crate::diag::{Code, Diagnostic, EXIT_OK};
use crate::export::export_svg_scatter;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "BERGMAN_OUT_DIR";

/// Runs one invocation. `out_dir` stands in for [`OUT_DIR_ENV`].
pub fn run<I, T>(args: I, out_dir: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let msg = e.render().to_string();
            return report(stderr, Diagnostic::new(Code::Usage, msg.trim_end()));
        }
    };
    match execute(&cli, out_dir, stdout) {
        Ok(None) => EXIT_OK,
        Ok(Some(d)) | Err(d) => report(stderr, d),
    }
}

/// Like [`run`] with the process arguments, environment and streams.
pub fn run_env() -> i32 {
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    run(
        std::env::args_os(),
        dir.as_deref(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

fn report(stderr: &mut dyn Write, d: Diagnostic) -> i32 {
    let _ = writeln!(stderr, "{}", d.to_json());
    d.exit
}

fn execute(cli: &Cli, out_dir: Option<&Path>, stdout: &mut dyn Write) -> Result<Option<Diagnostic>, Diagnostic> {
    if cli.format == Format::Svg && !cli.command.has_plot() {
        return Err(Diagnostic::new(
            Code::FormatUnsupported,
            format!("{} has no SVG form", cli.command.name()),
        ));
    }
    let output = dispatch(&cli.command)?;
    let target = cli
        .out
        .clone()
        .or_else(|| out_dir.map(|d| d.join(format!("{}.{}", cli.command.name(), cli.format.extension()))));
    match target {
        Some(path) => {
            let mut w = BufWriter::new(File::create(&path)?);
            write_output(&output, cli.format, &mut w)?;
            w.flush()?;
        }
        None => write_output(&output, cli.format, stdout)?,
    }
    Ok(output.failure)
}

pub fn write_output(output: &Output, format: Format, w: &mut dyn Write) -> Result<(), Diagnostic> {
    match format {
        Format::Csv => output.table.write_csv(w)?,
        Format::Json => output.table.write_json(w)?,
        Format::Svg => match &output.plot {
            Some(p) => export_svg_scatter(&p.series, p.window, &p.title, w)?,
            None => {
                return Err(Diagnostic::new(
                    Code::FormatUnsupported,
                    format!("schema {} has no SVG form", output.table.schema),
                ))
            }
        },
    }
    Ok(())
}
