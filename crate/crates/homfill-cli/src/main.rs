//! Command-line frontend: build fixtures, validate complexes, compute
//! fillings, decompositions, connected-chain enumerations, filling
//! function tables, upper bounds and fineness reports.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 budget
//! exhaustion. Identical invocations produce byte-identical output.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use homfill::builders::{
    build_coned_off, build_cycle, build_grid, build_path, build_tetrahedron, build_torus_grid,
    fineness_report, ConedGroup, ConedOffSpec,
};
use homfill::equivariance::parse_action;
use homfill::{
    bn_via_orbits, decompose, dn_orbit_representatives, enumerate_dn, enumerate_dn_up_to,
    filling_norm, fv0_with_budget, fv_table, fv_upper_bound, is_rho_connected, parse_complex,
    serialize_complex, BoundResult, Chain, ChainComplex, FillingResult, FvValue, ModuleMap,
    PermutationAction,
};

#[derive(Parser)]
#[command(
    name = "homfill",
    about = "Exact l1 filling norms and filling functions of finite integer chain complexes",
    long_about = None,
    after_help = "\
COMPLEXES are built-in fixture names (tetra_solid, tetra_hollow, grid_WxH, \
torus_N, coned_f2_R, coned_z2_R, path_N, cycle_N) or paths to files in the \
canonical text format written by `build`.

CHAINS and CYCLES are whitespace-separated label:coefficient terms, e.g. \
\"ex(0,0):1 ey(1,0):-2\".

CSV output carries no header; `fv` rows are `k,value` with value a natural \
number, `inf`, or `budget(<cap>)`; `bound` rows are `n,bn,bound`; `fineness` \
rows are `edge,count`."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Records,
}

#[derive(Subcommand)]
enum Command {
    /// Write a complex in the canonical text format
    Build {
        #[arg(long)]
        complex: String,
        /// Output path; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that consecutive boundaries compose to zero
    Validate {
        #[arg(long)]
        complex: String,
    },
    /// Minimum-l1 integer filling of a degree-d cycle by (d+1)-chains
    Fill {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        cycle: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Split a kernel element into connected kernel parts, one per line
    Decompose {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        chain: String,
    },
    /// Report whether a chain is connected through the boundary map
    Connected {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        chain: String,
    },
    /// Connected chains of norm exactly n (representatives under an
    /// optional group action), one per line
    Dn {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        n: u64,
        /// Enumerate all norms up to n instead of exactly n
        #[arg(long)]
        cumulative: bool,
        /// Action file: one `element` block per generator with
        /// `source:` and `target:` permutation lines
        #[arg(long)]
        action: Option<PathBuf>,
    },
    /// Filling-function table for k = 0..=kmax as CSV
    Fv {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        kmax: u64,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// The upper bound n * B_n from connected kernel elements
    Bound {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        action: Option<PathBuf>,
    },
    /// Circuit count through every edge at the given length threshold
    Fineness {
        #[arg(long)]
        complex: String,
        #[arg(long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn resolve_complex(name: &str) -> Result<ChainComplex, String> {
    if let Some(fixture) = fixture(name)? {
        return Ok(fixture);
    }
    let text = std::fs::read_to_string(name)
        .map_err(|e| format!("cannot read complex file `{name}`: {e}"))?;
    parse_complex(&text).map_err(|e| e.to_string())
}

fn fixture(name: &str) -> Result<Option<ChainComplex>, String> {
    let parse_num = |s: &str, what: &str| -> Result<usize, String> {
        s.parse()
            .map_err(|_| format!("malformed {what} in fixture name `{name}`"))
    };
    let x = match name {
        "tetra_solid" => Some(build_tetrahedron(true)),
        "tetra_hollow" => Some(build_tetrahedron(false)),
        _ => {
            if let Some(dims) = name.strip_prefix("grid_") {
                let (w, h) = dims
                    .split_once('x')
                    .ok_or_else(|| format!("fixture `{name}` needs the form grid_WxH"))?;
                Some(build_grid(
                    parse_num(w, "width")?.max(1),
                    parse_num(h, "height")?.max(1),
                ))
            } else if let Some(n) = name.strip_prefix("torus_") {
                Some(build_torus_grid(parse_num(n, "size")?.max(2)))
            } else if let Some(n) = name.strip_prefix("path_") {
                Some(build_path(parse_num(n, "length")?.max(1)))
            } else if let Some(n) = name.strip_prefix("cycle_") {
                Some(build_cycle(parse_num(n, "length")?.max(2)))
            } else if let Some(r) = name.strip_prefix("coned_f2_") {
                Some(
                    build_coned_off(&ConedOffSpec {
                        group: ConedGroup::Free2,
                        radius: parse_num(r, "radius")? as u32,
                    })
                    .map_err(|e| e.to_string())?,
                )
            } else if let Some(r) = name.strip_prefix("coned_z2_") {
                Some(
                    build_coned_off(&ConedOffSpec {
                        group: ConedGroup::FreeAbelian2,
                        radius: parse_num(r, "radius")? as u32,
                    })
                    .map_err(|e| e.to_string())?,
                )
            } else {
                None
            }
        }
    };
    Ok(x)
}

fn parse_chain(x: &ChainComplex, degree: usize, spec: &str) -> Result<Chain, String> {
    let basis = x
        .basis(degree)
        .ok_or_else(|| format!("complex `{}` has no degree {degree}", x.name()))?;
    let mut terms = Vec::new();
    for token in spec.split_whitespace() {
        let (label, coeff) = token
            .rsplit_once(':')
            .ok_or_else(|| format!("term `{token}` is not label:coefficient"))?;
        let coeff: i64 = coeff
            .parse()
            .map_err(|_| format!("malformed coefficient in `{token}`"))?;
        terms.push((label, coeff));
    }
    Chain::from_labels(basis, terms).map_err(|e| e.to_string())
}

fn rho_map(x: &ChainComplex, degree: usize) -> Result<ModuleMap, String> {
    x.cycle_map(degree).map_err(|e| e.to_string())
}

fn load_action(
    path: &PathBuf,
    map: &ModuleMap,
) -> Result<PermutationAction, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read action file `{}`: {e}", path.display()))?;
    parse_action(&text, map.source().size(), map.target().size()).map_err(|e| e.to_string())
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Build { complex, out } => {
            let x = resolve_complex(&complex)?;
            let text = serialize_complex(&x);
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| format!("cannot write `{}`: {e}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { complex } => {
            let x = resolve_complex(&complex)?;
            x.validate().map_err(|e| e.to_string())?;
            println!("ok");
            Ok(ExitCode::SUCCESS)
        }
        Command::Fill {
            complex,
            degree,
            cycle,
            budget,
        } => {
            let x = resolve_complex(&complex)?;
            let z = parse_chain(&x, degree, &cycle)?;
            let fill = x.filling_map(degree).map_err(|e| e.to_string())?;
            match filling_norm(&fill, &z, budget).map_err(|e| e.to_string())? {
                FillingResult::Finite { norm, witness } => {
                    println!("finite {norm} {}", witness.term_string());
                    Ok(ExitCode::SUCCESS)
                }
                FillingResult::Infeasible(ob) => {
                    println!("infeasible {ob}");
                    Ok(ExitCode::SUCCESS)
                }
                FillingResult::BudgetExceeded(cap) => {
                    println!("budget-exceeded {cap}");
                    Ok(ExitCode::from(2))
                }
            }
        }
        Command::Decompose {
            complex,
            degree,
            chain,
        } => {
            let x = resolve_complex(&complex)?;
            let z = parse_chain(&x, degree, &chain)?;
            let map = rho_map(&x, degree)?;
            for part in decompose(&map, &z).map_err(|e| e.to_string())? {
                println!("{}", part.term_string());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Connected {
            complex,
            degree,
            chain,
        } => {
            let x = resolve_complex(&complex)?;
            let z = parse_chain(&x, degree, &chain)?;
            let map = rho_map(&x, degree)?;
            let connected = is_rho_connected(&map, &z).map_err(|e| e.to_string())?;
            println!("{connected}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Dn {
            complex,
            degree,
            n,
            cumulative,
            action,
        } => {
            let x = resolve_complex(&complex)?;
            let map = rho_map(&x, degree)?;
            let chains = match action {
                Some(path) => {
                    let action = load_action(&path, &map)?;
                    if cumulative {
                        return Err("--cumulative is not available with --action".to_string());
                    }
                    dn_orbit_representatives(&map, &action, n).map_err(|e| e.to_string())?
                }
                None if cumulative => enumerate_dn_up_to(&map, n).map_err(|e| e.to_string())?,
                None => enumerate_dn(&map, n).map_err(|e| e.to_string())?,
            };
            for c in chains {
                println!("{}", c.term_string());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fv {
            complex,
            degree,
            kmax,
            budget,
            format,
        } => {
            let x = resolve_complex(&complex)?;
            let rows: Vec<FvValue> = if degree == 0 {
                (0..=kmax)
                    .map(|k| fv0_with_budget(&x, k, budget))
                    .collect::<Result<_, _>>()
                    .map_err(|e| e.to_string())?
            } else {
                fv_table(&x, degree, kmax, budget)
                    .map_err(|e| e.to_string())?
                    .rows
            };
            let mut exceeded = false;
            let mut out = String::new();
            for (k, row) in rows.iter().enumerate() {
                match format {
                    Format::Csv => {
                        let value = match row {
                            FvValue::Finite(v) => v.to_string(),
                            FvValue::Infinite { .. } => "inf".to_string(),
                            FvValue::BudgetExceeded(cap) => format!("budget({cap})"),
                        };
                        writeln!(out, "{k},{value}").unwrap();
                    }
                    Format::Records => {
                        match row {
                            FvValue::Finite(v) => writeln!(out, "k={k} value={v}").unwrap(),
                            FvValue::Infinite { witness } => writeln!(
                                out,
                                "k={k} value=inf witness={}",
                                witness.term_string()
                            )
                            .unwrap(),
                            FvValue::BudgetExceeded(cap) => {
                                writeln!(out, "k={k} value=budget({cap})").unwrap()
                            }
                        };
                    }
                }
                if matches!(row, FvValue::BudgetExceeded(_)) {
                    exceeded = true;
                }
            }
            print!("{out}");
            Ok(if exceeded {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Bound {
            complex,
            degree,
            n,
            action,
        } => {
            let x = resolve_complex(&complex)?;
            let result = match action {
                Some(path) => {
                    let cycle_map = rho_map(&x, degree)?;
                    let fill_map = x.filling_map(degree).map_err(|e| e.to_string())?;
                    let action = load_action(&path, &cycle_map)?;
                    bn_via_orbits(&cycle_map, &fill_map, &action, n).map_err(|e| e.to_string())?
                }
                None => fv_upper_bound(&x, degree, n).map_err(|e| e.to_string())?,
            };
            match result {
                BoundResult::Finite(b) => println!("{},{},{}", b.n, b.bn, b.bound),
                BoundResult::Infinite { witness } => {
                    println!("{n},inf,inf witness={}", witness.term_string())
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fineness { complex, n } => {
            let x = resolve_complex(&complex)?;
            let edges = match x.basis(1) {
                Some(b) => b.clone(),
                None => return Ok(ExitCode::SUCCESS),
            };
            let report = fineness_report(&x, n).map_err(|e| e.to_string())?;
            let mut out = String::new();
            for (e, count) in report {
                writeln!(out, "{},{count}", edges.label(e)).unwrap();
            }
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
    }
}
