mod run;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use todavolt_core::bogo::RootType;
use todavolt_core::catalog::{Family, Kind, Symmetry, SystemId};
use todavolt_core::Error;

use run::{FlowChoice, SimSpec};
use verify::Check;

#[derive(Parser)]
#[command(name = "todavolt", version, about = "Poisson brackets, reductions and flows of Toda and Volterra lattices")]
struct Cli {
    /// Directory for output files; a bare --output name is placed inside it.
    #[arg(long, global = true, env = "TODAVOLT_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for random initial conditions.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Check bracket identities.
    Verify(VerifyArgs),
    /// Print the reduced bracket on a fixed-point set.
    Reduce {
        #[arg(long)]
        system: SystemId,
        #[arg(long)]
        map: Symmetry,
        #[arg(long, default_value_t = 2)]
        bracket: u32,
        /// Tensor JSON to reduce instead of the catalog bracket.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Integrate a flow with RK4 and monitor the conserved quantities.
    Simulate(SimArgs),
    /// Bogoyavlensky lattice of a root system.
    Bogo {
        #[arg(long = "type")]
        root_type: RootType,
        #[arg(long)]
        rank: usize,
    },
    /// Square the odd Lax matrix and split it into two Jacobi blocks.
    Moser {
        #[arg(long = "N")]
        size: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    Jacobi,
    Compatible,
    Deformation,
    Involution,
    Ladder,
    Reduction,
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    identity: Identity,
    #[arg(long)]
    system: Option<SystemId>,
    /// Bracket degrees, comma separated.
    #[arg(long, value_delimiter = ',')]
    bracket: Vec<u32>,
    #[arg(long)]
    map: Option<Symmetry>,
    /// Expected factor for `involution`.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    expect_sign: i64,
    #[arg(long, default_value_t = 4)]
    max_rank: usize,
    /// Tensor JSON checked by `jacobi` instead of a catalog bracket.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    system: SystemId,
    /// Flow of `H_K` in the lowest bracket.
    #[arg(long, conflicts_with = "lax")]
    hamiltonian: Option<u32>,
    /// Lax flow `[L, (L^K)_+]`.
    #[arg(long)]
    lax: Option<u32>,
    #[arg(long, default_value_t = 10.0)]
    t_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    /// JSON file `{"a": [...], "b": [...]}`.
    #[arg(long)]
    init: Option<PathBuf>,
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    a_interval: Option<(f64, f64)>,
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true, default_value = "-1,1")]
    b_interval: (f64, f64),
    /// Keep every k-th step in CSV output.
    #[arg(long, default_value_t = 1)]
    every: usize,
}

fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi || !lo.is_finite() || !hi.is_finite() {
        return Err(format!("bad interval {lo},{hi}"));
    }
    Ok((lo, hi))
}

/// A finished command: what to print and how it should exit.
struct Outcome {
    json: Value,
    text: String,
    csv: Option<String>,
    ok: bool,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn checks_outcome(identity: &str, checks: Vec<Check>) -> Outcome {
    let ok = checks.iter().all(|c| c.passed);
    let passed = checks.iter().filter(|c| c.passed).count();
    let mut text = String::new();
    for c in &checks {
        text.push_str(&format!("{} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name));
        if !c.passed {
            text.push_str(&format!("  {}\n", c.detail));
        }
    }
    text.push_str(&format!("{passed}/{} passed\n", checks.len()));
    let json = json!({
        "schema": "todavolt.verify/1",
        "identity": identity,
        "passed": ok,
        "checks": checks,
    });
    Outcome { json, text, csv: None, ok }
}

fn need_system(s: Option<SystemId>) -> Result<SystemId, Error> {
    s.ok_or_else(|| usage("--system is required"))
}

fn need_map(m: Option<Symmetry>) -> Result<Symmetry, Error> {
    m.ok_or_else(|| usage("--map is required"))
}

fn run_verify(a: VerifyArgs) -> Result<Outcome, Error> {
    let (name, checks) = match a.identity {
        Identity::Jacobi => match &a.input {
            Some(p) => ("jacobi", vec![verify::jacobi_tensor(&run::read_tensor(p)?)]),
            None => ("jacobi", verify::jacobi(need_system(a.system)?, &a.bracket)?),
        },
        Identity::Compatible => ("compatible", verify::compatible(need_system(a.system)?, &a.bracket)?),
        Identity::Deformation => ("deformation", verify::deformation(need_system(a.system)?)?),
        Identity::Involution => (
            "involution",
            verify::involution(need_system(a.system)?, need_map(a.map)?, &a.bracket, a.expect_sign)?,
        ),
        Identity::Ladder => ("ladder", verify::ladder(need_system(a.system)?)?),
        Identity::Reduction => {
            ("reduction", verify::reduction(need_system(a.system)?, need_map(a.map)?, &a.bracket)?)
        }
        Identity::All => {
            if a.max_rank == 0 {
                return Err(usage("--max-rank must be at least 1"));
            }
            ("all", verify::all(a.max_rank)?)
        }
    };
    Ok(checks_outcome(name, checks))
}

fn run_simulate(a: SimArgs, seed: u64) -> Result<Outcome, Error> {
    if !(a.h > 0.0 && a.t_end >= 0.0 && a.h.is_finite() && a.t_end.is_finite()) {
        return Err(usage("--h must be positive and --t-end non-negative"));
    }
    let flow = match (a.hamiltonian, a.lax) {
        (Some(k), _) => FlowChoice::Hamiltonian(k),
        (_, Some(k)) => FlowChoice::Lax(k),
        _ => run::default_flow(a.system),
    };
    // The B-type Volterra lattice blows up in finite time for positive a.
    let a_interval = a.a_interval.or(Some(match (a.system.family, a.system.canonical().kind) {
        (Family::Volterra, Kind::B) => (-1.0, -0.1),
        _ => (0.1, 1.0),
    }));
    let spec = SimSpec {
        sys: a.system,
        flow,
        t_end: a.t_end,
        h: a.h,
        seed,
        init: a.init,
        a_interval,
        b_interval: a.b_interval,
        every: a.every,
    };
    match run::simulate(&spec)? {
        Ok(out) => {
            let csv = run::csv(&out, spec.every);
            let text = format!(
                "{}\nfinal state {:?}\nmax H drift {:.3e}, max charpoly drift {:.3e}\n",
                out.summary["equations"].as_array().map(|v| v.iter().map(|e| e.as_str().unwrap_or("")).collect::<Vec<_>>().join("\n")).unwrap_or_default(),
                out.trajectory.last(),
                out.monitors.max_hamiltonian_drift(),
                out.monitors.max_charpoly_drift()
            );
            Ok(Outcome { json: out.summary, text, csv: Some(csv), ok: true })
        }
        Err(summary) => {
            let err = &summary["error"];
            let text = format!("integration produced a non-finite state at t = {} (last valid t = {})\n", err["t"], err["last_valid_t"]);
            Ok(Outcome { json: summary.clone(), text: text.clone(), csv: Some(text), ok: false })
        }
    }
}

fn execute(cli: &mut Cli) -> Result<Outcome, Error> {
    let cmd = std::mem::replace(&mut cli.command, Command::Moser { size: 0 });
    match cmd {
        Command::Verify(a) => run_verify(a),
        Command::Reduce { system, map, bracket, input } => {
            let (json, text) = run::reduce(system, map, bracket, input.as_deref())?;
            Ok(Outcome { json, text, csv: None, ok: true })
        }
        Command::Simulate(a) => run_simulate(a, cli.seed),
        Command::Bogo { root_type, rank } => {
            let (json, text) = run::bogo(root_type, rank)?;
            Ok(Outcome { json, text, csv: None, ok: true })
        }
        Command::Moser { size } => {
            let (json, text) = run::moser(size)?;
            Ok(Outcome { json, text, csv: None, ok: true })
        }
    }
}

fn destination(cli: &Cli) -> Option<PathBuf> {
    match (&cli.out_dir, &cli.output) {
        (Some(dir), Some(out)) if out.is_relative() => Some(dir.join(out)),
        (_, Some(out)) => Some(out.clone()),
        (Some(dir), None) => {
            let ext = match cli.format {
                Format::Json => "json",
                Format::Text => "txt",
                Format::Csv => "csv",
            };
            let stem = match &cli.command {
                Command::Verify(_) => "verify",
                Command::Reduce { .. } => "reduce",
                Command::Simulate(_) => "simulate",
                Command::Bogo { .. } => "bogo",
                Command::Moser { .. } => "moser",
            };
            Some(dir.join(format!("{stem}.{ext}")))
        }
        (None, None) => None,
    }
}

fn render(out: &Outcome, format: Format) -> Result<String, Error> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json).expect("json values serialize");
            s.push('\n');
            s
        }
        Format::Text => out.text.clone(),
        Format::Csv => out.csv.clone().ok_or_else(|| usage("--format csv is only available for simulate"))?,
    })
}

fn emit(body: &str, dest: Option<&Path>) -> Result<(), Error> {
    match dest {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
            }
            std::fs::write(path, body).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| usage(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    let dest = destination(&cli);
    let format = cli.format;
    let result = execute(&mut cli).and_then(|out| {
        let body = render(&out, format)?;
        emit(&body, dest.as_deref())?;
        Ok(out.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::parse_interval;

    #[test]
    fn intervals() {
        assert_eq!(parse_interval("-1, 0.5"), Ok((-1.0, 0.5)));
        assert!(parse_interval("1,0").is_err());
        assert!(parse_interval("nan,1").is_err());
        assert!(parse_interval("3").is_err());
    }
}
