use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use slkvn_cli::{parse_config_with_command, report, runner};

/// Spectral analysis of singular Sturm-Liouville operators: endpoint
/// classification, generalized boundary values, Friedrichs and
/// Krein-von Neumann extensions, and eigenvalue search.
#[derive(Parser)]
#[command(name = "slkvn", version)]
struct Cli {
    /// classify | frame | bv | friedrichs | krein | spectrum | verify
    command: String,
    /// path to the JSON problem configuration
    #[arg(long)]
    config: PathBuf,
    /// write the report here as well as to stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// tolerance override (gate margin, root refinement)
    #[arg(long)]
    tol: Option<f64>,
    /// spectral window as "lo,hi"
    #[arg(long, value_parser = parse_window)]
    window: Option<Window>,
}

#[derive(Clone, Copy, Debug)]
struct Window(f64, f64);

fn parse_window(s: &str) -> Result<Window, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected lo,hi".into());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|e| format!("lo: {e}"))?;
    let hi: f64 = parts[1].trim().parse().map_err(|e| format!("hi: {e}"))?;
    Ok(Window(lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(1);
        }
    };
    let mut config = match parse_config_with_command(&text, Some(&cli.command)) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Some(t) = cli.tol {
        config.options.tol = Some(t);
    }
    if let Some(Window(lo, hi)) = cli.window {
        config.options.window = Some((lo, hi));
    }

    let (report_value, code) = runner::run(&config);
    let rendered = report::render(&report_value);
    print!("{rendered}");
    if let Some(path) = &cli.out {
        match std::fs::File::create(path).and_then(|mut f| f.write_all(rendered.as_bytes())) {
            Ok(()) => {}
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::from(code as u8)
}
