//! Command-line front end: expand / eval / scan / kh / poles / oracle.
//!
//! Exit codes: 0 success, 2 validation or format errors (including CLI
//! usage), 3 numerical singularities. All emitted numbers carry 17
//! significant digits, so identical inputs produce byte-identical output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::fs;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::eval::{eval_chi, eval_s, EvalParams, EvalResult};
use crate::oracle::{oracle_chi, ClassicalField, OracleParams};
use crate::output::{fmt_f64, json_complex, json_string};
use crate::process::ProcessSpec;
use crate::spectra::{kh_pair, pole_table, scan, HalfPlane, PoleReport, ScanRecord, SolveFor, Varied};
use crate::system::LevelSystem;
use crate::terms::{
    cached_terms, default_mode_names, term_to_text, GreenKind, TermKind, TermList,
    MAX_EXPANSION_ORDER,
};

#[derive(Parser)]
#[command(
    name = "wavemix",
    version,
    about = "Causal and noncausal frequency-domain wave mixing in finite-level systems"
)]
struct Cli {
    /// Write the artifact to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Seed for randomized helpers; retained in the run configuration so
    /// reruns are reproducible. The built-in subcommands are deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Chi,
    S,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalKindArg {
    Chi,
    S,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

impl From<KindArg> for TermKind {
    fn from(k: KindArg) -> TermKind {
        match k {
            KindArg::Chi => TermKind::Causal,
            KindArg::S => TermKind::Noncausal,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Expand a term list symbolically (no system needed).
    Expand {
        /// Which expansion: the susceptibility (chi) or the scattering
        /// amplitude (s).
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Mixing order n; the list holds (n+1)! terms.
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Evaluate chi and/or S for a system and an on-shell process.
    Eval {
        #[arg(long, value_name = "FILE")]
        system: PathBuf,
        #[arg(long, value_name = "FILE")]
        process: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        kind: EvalKindArg,
        /// Global broadening epsilon.
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// On-shell tolerance override (default: 1e-9 relative to the
        /// largest mode frequency).
        #[arg(long, value_name = "TOL")]
        shell_tol: Option<f64>,
        /// Include the term-by-term breakdown in the output.
        #[arg(long)]
        per_term: bool,
    },
    /// Sweep one frequency over a grid, keeping the process on shell.
    Scan {
        #[arg(long, value_name = "FILE")]
        system: PathBuf,
        #[arg(long, value_name = "FILE")]
        process: PathBuf,
        /// Index of the varied mode.
        #[arg(long, conflicts_with = "detune")]
        mode: Option<usize>,
        /// Vary a common detuning added to every incoming mode instead of
        /// a single mode's frequency.
        #[arg(long)]
        detune: bool,
        /// Inclusive grid START:STOP:COUNT.
        #[arg(long, value_name = "START:STOP:COUNT", conflicts_with = "points")]
        grid: Option<String>,
        /// Explicit comma-separated grid values.
        #[arg(long, value_name = "V1,V2,...")]
        points: Option<String>,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        /// Which mode is re-solved to stay on shell: "signal" or a mode
        /// index.
        #[arg(long, default_value = "signal")]
        solve: String,
    },
    /// The explicit two-level Kramers-Heisenberg pair (constant-sign S,
    /// opposite-sign chi).
    Kh {
        #[arg(long, value_name = "FILE")]
        system: PathBuf,
        #[arg(long)]
        omega: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
    },
    /// Tabulate pole locations and half-planes for every term.
    Poles {
        #[arg(long, value_name = "FILE")]
        system: PathBuf,
        #[arg(long, value_name = "FILE")]
        process: PathBuf,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
    },
    /// Time-domain susceptibility estimate compared against the evaluator.
    Oracle(OracleCmd),
}

#[derive(Args)]
struct OracleCmd {
    #[arg(long, value_name = "FILE")]
    system: PathBuf,
    #[arg(long, value_name = "FILE")]
    process: PathBuf,
    /// Comma-separated drive amplitudes, one per incoming mode.
    #[arg(long, value_name = "A1,A2,...")]
    amps: String,
    /// Integration step.
    #[arg(long)]
    dt: f64,
    /// Extraction window length.
    #[arg(long)]
    window: f64,
    /// Settling time discarded before extraction.
    #[arg(long, default_value_t = 400.0)]
    transient: f64,
}

/// Entry point used by the `wavemix` binary; returns the process exit code.
pub fn run<I>(argv: I) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(artifact) => match write_artifact(&cli.out, &artifact) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write_artifact(out: &Option<PathBuf>, artifact: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, artifact)?,
        None => print!("{artifact}"),
    }
    Ok(())
}

fn read_system(path: &PathBuf) -> Result<LevelSystem> {
    LevelSystem::from_json(&fs::read_to_string(path)?)
}

fn read_process(path: &PathBuf) -> Result<ProcessSpec> {
    ProcessSpec::from_json(&fs::read_to_string(path)?)
}

fn dispatch(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Expand {
            kind,
            order,
            format,
        } => {
            if !(1..=MAX_EXPANSION_ORDER).contains(order) {
                return Err(Error::Invalid(format!(
                    "order must be in 1..={MAX_EXPANSION_ORDER}, got {order}"
                )));
            }
            let list = cached_terms((*kind).into(), *order);
            Ok(match format {
                FormatArg::Text => render_terms_text(&list),
                FormatArg::Json => render_terms_json(&list),
            })
        }
        Command::Eval {
            system,
            process,
            kind,
            eps,
            shell_tol,
            per_term,
        } => {
            let sys = read_system(system)?;
            let proc = read_process(process)?;
            if let Some(tol) = shell_tol {
                if !tol.is_finite() || *tol <= 0.0 {
                    return Err(Error::Invalid(format!(
                        "--shell-tol must be positive, got {tol}"
                    )));
                }
            }
            let params = EvalParams {
                epsilon: *eps,
                on_shell_tol: *shell_tol,
            };
            let render = |r: &EvalResult, label: &str| render_eval(r, label, *per_term);
            Ok(match kind {
                EvalKindArg::Chi => {
                    format!("{}\n", render(&eval_chi(&sys, &proc, &params)?, "chi"))
                }
                EvalKindArg::S => {
                    format!("{}\n", render(&eval_s(&sys, &proc, &params)?, "s"))
                }
                EvalKindArg::Both => {
                    let chi = eval_chi(&sys, &proc, &params)?;
                    let s = eval_s(&sys, &proc, &params)?;
                    format!(
                        "{{\"chi\":{},\"s\":{}}}\n",
                        render(&chi, "chi"),
                        render(&s, "s")
                    )
                }
            })
        }
        Command::Scan {
            system,
            process,
            mode,
            detune,
            grid,
            points,
            eps,
            solve,
        } => {
            let sys = read_system(system)?;
            let proc = read_process(process)?;
            let varied = match (mode, detune) {
                (Some(k), false) => Varied::Mode(*k),
                (None, true) => Varied::Detuning,
                (None, false) => {
                    return Err(Error::Invalid(
                        "scan needs either --mode K or --detune".into(),
                    ))
                }
                (Some(_), true) => unreachable!("clap conflicts_with"),
            };
            let grid_values = parse_grid(grid.as_deref(), points.as_deref())?;
            let solve = parse_solve(solve)?;
            let params = EvalParams::with_epsilon(*eps);
            let records = scan(&sys, &proc, varied, &grid_values, &params, solve)?;
            Ok(render_scan_csv(&records))
        }
        Command::Kh { system, omega, eps } => {
            let sys = read_system(system)?;
            let (s, chi) = kh_pair(&sys, *omega, *eps)?;
            Ok(format!(
                "{{\"omega\":{},\"eps\":{},\"s\":{},\"chi\":{}}}\n",
                fmt_f64(*omega),
                fmt_f64(*eps),
                json_complex(s),
                json_complex(chi)
            ))
        }
        Command::Poles {
            system,
            process,
            kind,
            eps,
        } => {
            let sys = read_system(system)?;
            let proc = read_process(process)?;
            let report = pole_table((*kind).into(), &sys, &proc, *eps)?;
            Ok(render_poles(&report))
        }
        Command::Oracle(cmd) => {
            let sys = read_system(&cmd.system)?;
            let proc = read_process(&cmd.process)?;
            let amps = parse_list(&cmd.amps)?;
            if amps.len() != proc.order() {
                return Err(Error::Invalid(format!(
                    "{} amplitudes for {} incoming modes",
                    amps.len(),
                    proc.order()
                )));
            }
            let fields: Vec<ClassicalField> = amps
                .iter()
                .zip(proc.modes())
                .map(|(a, m)| ClassicalField {
                    amplitude: *a,
                    omega: m.omega,
                })
                .collect();
            let params = OracleParams {
                dt: cmd.dt,
                t_transient: cmd.transient,
                t_window: cmd.window,
                integrator_order: 4,
            };
            let estimate = oracle_chi(&sys, &proc, &fields, &params)?;
            let reference = eval_chi(&sys, &proc, &EvalParams::default())?.total;
            let rel_err = (estimate - reference).norm() / reference.norm();
            Ok(format!(
                "{{\"estimate\":{},\"reference\":{},\"rel_err\":{}}}\n",
                json_complex(estimate),
                json_complex(reference),
                fmt_f64(rel_err)
            ))
        }
    }
}

fn parse_solve(text: &str) -> Result<SolveFor> {
    if text == "signal" {
        return Ok(SolveFor::Signal);
    }
    text.parse::<usize>().map(SolveFor::Mode).map_err(|_| {
        Error::Invalid(format!(
            "--solve expects \"signal\" or a mode index, got {text:?}"
        ))
    })
}

fn parse_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Invalid(format!("bad number {p:?} in list")))
        })
        .collect()
}

fn parse_grid(grid: Option<&str>, points: Option<&str>) -> Result<Vec<f64>> {
    match (grid, points) {
        (Some(spec), None) => {
            let parts: Vec<&str> = spec.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Invalid(format!(
                    "--grid expects START:STOP:COUNT, got {spec:?}"
                )));
            }
            let start: f64 = parts[0]
                .parse()
                .map_err(|_| Error::Invalid(format!("bad grid start {:?}", parts[0])))?;
            let stop: f64 = parts[1]
                .parse()
                .map_err(|_| Error::Invalid(format!("bad grid stop {:?}", parts[1])))?;
            let count: usize = parts[2]
                .parse()
                .map_err(|_| Error::Invalid(format!("bad grid count {:?}", parts[2])))?;
            if count == 0 {
                return Err(Error::Invalid("grid count must be positive".into()));
            }
            if count == 1 {
                return Ok(vec![start]);
            }
            let step = (stop - start) / (count - 1) as f64;
            Ok((0..count).map(|i| start + step * i as f64).collect())
        }
        (None, Some(list)) => parse_list(list),
        (None, None) => Err(Error::Invalid(
            "scan needs either --grid START:STOP:COUNT or --points V1,V2,...".into(),
        )),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    }
}

fn render_terms_text(list: &TermList) -> String {
    let names = default_mode_names(list.order);
    let mut out = String::new();
    for term in &list.terms {
        out.push_str(&term_to_text(term, &names));
        out.push('\n');
    }
    out
}

fn render_terms_json(list: &TermList) -> String {
    let kind = match list.kind {
        TermKind::Causal => "chi",
        TermKind::Noncausal => "s",
    };
    let terms = list
        .terms
        .iter()
        .enumerate()
        .map(|(id, term)| {
            let basic = term
                .basic_index
                .map(|m| format!("\"basic_index\":{m},"))
                .unwrap_or_default();
            let permutation: Vec<String> =
                term.permutation.iter().map(|p| p.to_string()).collect();
            let factors = term
                .factors
                .iter()
                .map(|f| {
                    let kind = match f.kind {
                        GreenKind::Retarded => "retarded",
                        GreenKind::Advanced => "advanced",
                    };
                    let modes: Vec<String> =
                        f.argument.modes().map(|m| m.to_string()).collect();
                    format!(
                        "{{\"kind\":{},\"modes\":[{}]}}",
                        json_string(kind),
                        modes.join(",")
                    )
                })
                .collect::<Vec<_>>()
                .join(",");
            format!(
                "{{\"id\":{id},{basic}\"permutation\":[{}],\"factors\":[{factors}]}}",
                permutation.join(",")
            )
        })
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "{{\"kind\":{},\"order\":{},\"count\":{},\"terms\":[{terms}]}}\n",
        json_string(kind),
        list.order,
        list.terms.len()
    )
}

fn render_eval(result: &EvalResult, label: &str, per_term: bool) -> String {
    let mut body = format!(
        "\"kind\":{},\"total\":{},\"prefactor\":{}",
        json_string(label),
        json_complex(result.total),
        fmt_f64(result.prefactor)
    );
    if per_term {
        let terms = result
            .per_term
            .iter()
            .map(|(id, v)| format!("{{\"term\":{id},\"value\":{}}}", json_complex(*v)))
            .collect::<Vec<_>>()
            .join(",");
        body.push_str(&format!(",\"per_term\":[{terms}]"));
    }
    format!("{{{body}}}")
}

fn render_scan_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from("grid,chi_re,chi_im,s_re,s_im,diff_re,diff_im,flag\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            fmt_f64(r.grid),
            fmt_f64(r.chi.re),
            fmt_f64(r.chi.im),
            fmt_f64(r.s.re),
            fmt_f64(r.s.im),
            fmt_f64(r.diff.re),
            fmt_f64(r.diff.im),
            u8::from(r.flagged)
        ));
    }
    out
}

fn render_poles(report: &PoleReport) -> String {
    let kind = match report.kind {
        TermKind::Causal => "chi",
        TermKind::Noncausal => "s",
    };
    let terms = report
        .terms
        .iter()
        .enumerate()
        .map(|(id, entries)| {
            let poles = entries
                .iter()
                .map(|e| {
                    let hp = match e.half_plane {
                        HalfPlane::Upper => "upper",
                        HalfPlane::Lower => "lower",
                    };
                    format!(
                        "{{\"slot\":{},\"level\":{},\"pole\":{},\"half_plane\":{}}}",
                        e.slot,
                        e.level,
                        json_complex(e.pole),
                        json_string(hp)
                    )
                })
                .collect::<Vec<_>>()
                .join(",");
            format!("{{\"term\":{id},\"poles\":[{poles}]}}")
        })
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "{{\"kind\":{},\"order\":{},\"terms\":[{terms}]}}\n",
        json_string(kind),
        report.order
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parses_inclusive_linspace() {
        let g = parse_grid(Some("0.0:1.0:5"), None).unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let p = parse_grid(None, Some("0.5, 0.7,0.9")).unwrap();
        assert_eq!(p, vec![0.5, 0.7, 0.9]);
        assert!(parse_grid(Some("0:1"), None).is_err());
        assert!(parse_grid(None, None).is_err());
    }

    #[test]
    fn solve_spec_parses() {
        assert_eq!(parse_solve("signal").unwrap(), SolveFor::Signal);
        assert_eq!(parse_solve("2").unwrap(), SolveFor::Mode(2));
        assert!(parse_solve("x").is_err());
    }

    #[test]
    fn nan_formats_as_text_in_csv() {
        assert_eq!(fmt_f64(f64::NAN), "NaN");
    }
}
