mod cache;
mod commands;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use cfn5::flow::Guards;
use clap::{Parser, Subcommand};

use crate::cache::Cache;
use crate::commands::{Input, Outcome};

/// Circular nowhere-zero 5-flow tools.
///
/// Exit status: 0 for feasible / snark / no disagreement, 1 for the
/// negative answer, 2 for any error.
#[derive(Parser)]
#[command(name = "cfn5", version)]
struct Cli {
    /// Tab-separated output, one record per line.
    #[arg(long, global = true)]
    porcelain: bool,
    /// Reuse results stored in this directory.
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,
    /// Engine edge guard; also caps the number of interval edges.
    #[arg(long, global = true, value_name = "N")]
    guard_edges: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a capacity graph (or graph6 with (1,4) everywhere) has a flow.
    Decide {
        input: PathBuf,
        /// Print the flow values when one exists.
        #[arg(long)]
        certificate: bool,
    },
    /// Nowhere-zero integer 5-flow on the underlying graph.
    Nz5 {
        input: PathBuf,
        #[arg(long)]
        certificate: bool,
    },
    /// Capacity of a generalised edge; terminals come from the `t` record.
    Capacity { input: PathBuf },
    /// Evaluate the wheel predicate for W_n with edge set J and set A.
    Predicate {
        n: usize,
        /// `rim`, `0x..` or a decimal edge mask.
        j: String,
        a: String,
    },
    /// Compare predicate and engine on every wheel template up to n_max.
    Scan {
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also write the per-instance report here.
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Build a graph.
    #[command(subcommand)]
    Build(Build),
    /// Report the snark properties of a graph6 graph.
    CheckSnark { input: PathBuf },
}

#[derive(Subcommand)]
enum Build {
    /// The 28-vertex snark; writes appendix.g6 and appendix.report.
    Appendix {
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// An infeasible odd-cycle template on a graph.
    Template {
        input: PathBuf,
        /// Comma-separated vertex labels of an odd cycle.
        #[arg(long, value_delimiter = ',', required = true)]
        cycle: Vec<String>,
        #[arg(long, default_value = "(4,1)")]
        set: String,
        /// Write the template here instead of the current directory.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn guards(cli: &Cli) -> Guards {
    match cli.guard_edges {
        Some(n) => Guards {
            max_edges: n,
            max_interval_edges: n,
        },
        None => Guards::default(),
    }
}

/// Runs `f` through the cache when one is configured.
fn cached(cli: &Cli, parts: &[&str], f: impl FnOnce() -> Result<Outcome>) -> Result<Outcome> {
    let Some(dir) = &cli.cache else {
        return f();
    };
    let g = guards(cli);
    let guard_text = format!("{} {}", g.max_edges, g.max_interval_edges);
    let porcelain = cli.porcelain.to_string();
    let mut all = vec![guard_text.as_str(), porcelain.as_str()];
    all.extend_from_slice(parts);
    let key = cache::key(&all);
    let cache = Cache::open(dir)?;
    if let Some(hit) = cache.load(&key)? {
        return Ok(hit);
    }
    let out = f()?;
    cache.store(&key, &out)?;
    Ok(out)
}

fn write_files(dir: &Path, out: &Outcome) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, body) in &out.files {
        let p = dir.join(name);
        std::fs::write(&p, body).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<i32> {
    let g = guards(cli);
    let p = cli.porcelain;
    let load = |path: &Path| -> Result<Input> { commands::read_input(path) };
    let out = match &cli.command {
        Command::Decide { input, certificate } => {
            let inp = load(input)?;
            let c = certificate.to_string();
            cached(cli, &["decide", &c, &inp.canonical], || {
                commands::decide(&inp, g, *certificate, p)
            })?
        }
        Command::Nz5 { input, certificate } => {
            let inp = load(input)?;
            let c = certificate.to_string();
            cached(cli, &["nz5", &c, &inp.canonical], || {
                commands::nz5(&inp, g, *certificate, p)
            })?
        }
        Command::Capacity { input } => {
            let inp = load(input)?;
            cached(cli, &["capacity", &inp.canonical], || {
                commands::capacity(&inp, g, p)
            })?
        }
        Command::Predicate { n, j, a } => {
            let ns = n.to_string();
            cached(cli, &["predicate", &ns, j, a], || {
                commands::predicate(*n, j, a, p)
            })?
        }
        Command::Scan {
            n_max,
            jobs,
            output,
        } => {
            let ns = n_max.to_string();
            // The job count does not change the result, so it is not keyed.
            let out = cached(cli, &["scan", &ns], || {
                commands::scan_report(*n_max, *jobs, g, p)
            })?;
            if let Some(path) = output {
                let (_, report) = out
                    .files
                    .iter()
                    .find(|(n, _)| n == "scan.tsv")
                    .context("scan produced no report")?;
                std::fs::write(path, report)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            out
        }
        Command::Build(Build::Appendix { out_dir }) => {
            let out = cached(cli, &["build appendix"], || commands::build_appendix(p))?;
            write_files(out_dir, &out)?;
            out
        }
        Command::Build(Build::Template {
            input,
            cycle,
            set,
            out_dir,
        }) => {
            let inp = load(input)?;
            let joined = cycle.join(",");
            let out = cached(
                cli,
                &["build template", &joined, set, &inp.canonical],
                || commands::build_template(&inp, cycle, set, p),
            )?;
            write_files(out_dir, &out)?;
            out
        }
        Command::CheckSnark { input } => {
            let inp = load(input)?;
            cached(cli, &["check-snark", &inp.canonical], || {
                commands::check_snark(&inp, p)
            })?
        }
    };
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(out.stdout.as_bytes())?;
    stdout.flush()?;
    Ok(out.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
