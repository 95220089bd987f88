//! The `semiinv` command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! input errors. Output depends only on the inputs and the seed; timings go
//! to stderr.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::domzub::{extract_semiinvariants, membership_in_trace_algebra, multidegree_text, DZSpec, Membership};
use crate::quiverrep::{generic_representation, parse_quiver_file, QuiverFile};
use crate::routes::{
    eliminate_adjoint_pair, enumerate_simple_routes, find_adjoint_pair, generator_routes, is_simple, reduce_repeated,
    route_trace, route_weight, Route,
};
use crate::verify::{run_suite, Report, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "semiinv", version, about = "Semi-invariants of quiver representations of dimension (2, ..., 2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List simple route classes with their weights.
    Routes { quiver: PathBuf },
    /// Print the generator traces on the generic representation (all dimensions 2).
    Gens { quiver: PathBuf },
    /// Extract the semi-invariants of a block matrix spec.
    Dz { quiver: PathBuf, spec: PathBuf },
    /// Rewrite the trace of a route in terms of simpler routes.
    Reduce { quiver: PathBuf, route: String },
    /// Run a verification suite.
    Verify {
        /// lemma1, prop1, invariance, reduction, dz, counterexample or all
        suite: String,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value = "0xC0FFEE", value_parser = parse_seed)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

struct Failure {
    code: i32,
    msg: String,
}

fn usage(msg: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.to_string() }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_quiver(path: &Path) -> Result<QuiverFile, Failure> {
    parse_quiver_file(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Runs the command line `args` (including the program name), writing
/// results to `out` and diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let start = Instant::now();
    let result = match cli.command {
        Command::Routes { quiver } => cmd_routes(&quiver, out),
        Command::Gens { quiver } => cmd_gens(&quiver, out),
        Command::Dz { quiver, spec } => cmd_dz(&quiver, &spec, out),
        Command::Reduce { quiver, route } => cmd_reduce(&quiver, &route, out),
        Command::Verify { suite, k, trials, seed, json } => {
            let r = cmd_verify(&suite, &VerifyOptions { k, trials, seed }, json, out);
            let _ = writeln!(err, "elapsed: {:.3}s", start.elapsed().as_secs_f64());
            r
        }
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure { code: EXIT_FAIL, msg: e.to_string() }
}

fn cmd_routes(path: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let q = load_quiver(path)?.quiver;
    for class in enumerate_simple_routes(&q) {
        let w: Vec<String> = route_weight(&q, class.route()).iter().map(|(v, x)| format!("{v}:{x}")).collect();
        writeln!(out, "{}\tweight [{}]", class.text(&q), w.join(", ")).map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn require_twos(file: &QuiverFile) -> Result<(), Failure> {
    if let Some(v) = file.dims.iter().position(|&d| d != 2) {
        return Err(usage(format!(
            "vertex {} has dimension {}; simple-route traces generate the semi-invariants only when every dimension is 2",
            file.quiver.vertices()[v],
            file.dims[v]
        )));
    }
    Ok(())
}

fn cmd_gens(path: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let file = load_quiver(path)?;
    require_twos(&file)?;
    let q = &file.quiver;
    let rep = generic_representation(q, &file.dims);
    for class in generator_routes(q) {
        let t = route_trace(class.route(), &rep).map_err(usage)?;
        writeln!(out, "tr{} = {t}", class.text(q)).map_err(io)?;
    }
    Ok(EXIT_OK)
}

fn cmd_dz(quiver: &Path, spec_path: &Path, out: &mut dyn Write) -> Result<i32, Failure> {
    let file = load_quiver(quiver)?;
    let q = &file.quiver;
    let spec = DZSpec::parse(&read(spec_path)?).map_err(|e| usage(format!("{}: {e}", spec_path.display())))?;
    spec.validate(q, &file.dims).map_err(|e| usage(format!("{}: {e}", spec_path.display())))?;
    let rep = generic_representation(q, &file.dims);
    let found = extract_semiinvariants(&spec, &rep).map_err(usage)?;
    let twos = file.dims.iter().all(|&d| d == 2);
    let gens: Vec<Route> = if twos { generator_routes(q).iter().map(|c| c.route().clone()).collect() } else { Vec::new() };
    let mut code = EXIT_OK;
    for h in &found {
        writeln!(out, "{}: {}", multidegree_text(&h.multidegree), h.value).map_err(io)?;
        if !twos {
            continue;
        }
        match membership_in_trace_algebra(&h.value, &gens, &rep) {
            Ok(Membership::Found(c)) => writeln!(out, "  = {}", c.text(q)),
            Ok(Membership::NotFound) => {
                code = EXIT_FAIL;
                writeln!(out, "  not in the algebra of generator traces")
            }
            Err(e) => {
                code = EXIT_FAIL;
                writeln!(out, "  membership: {e}")
            }
        }
        .map_err(io)?;
    }
    Ok(code)
}

fn cmd_reduce(path: &Path, text: &str, out: &mut dyn Write) -> Result<i32, Failure> {
    let file = load_quiver(path)?;
    let q = &file.quiver;
    let route = Route::parse(q, text).map_err(usage)?;
    let expr = if !is_simple(&route) {
        reduce_repeated(&route).map_err(usage)?
    } else if find_adjoint_pair(q, &route).is_some() {
        eliminate_adjoint_pair(q, &route).map_err(usage)?
    } else {
        writeln!(out, "tr{} is simple without adjoint pairs", route.text(q)).map_err(io)?;
        return Ok(EXIT_OK);
    };
    writeln!(out, "tr{} = {}", route.text(q), expr.text(q)).map_err(io)?;
    if !file.dims.iter().all(|&d| d == 2) {
        return Ok(EXIT_OK);
    }
    let rep = generic_representation(q, &file.dims);
    let direct = route_trace(&route, &rep).map_err(usage)?;
    let ok = expr.evaluate(&rep).map_err(usage)? == direct;
    writeln!(out, "check on generic matrices: {}", if ok { "equal" } else { "DIFFERENT" }).map_err(io)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_verify(suite: &str, opts: &VerifyOptions, json: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let items = run_suite(suite, opts).map_err(usage)?;
    let command = format!("verify {suite} --k {} --trials {} --seed {:#x}", opts.k, opts.trials, opts.seed);
    let report = Report::new(command, items);
    if json {
        writeln!(out, "{}", report.json()).map_err(io)?;
    } else {
        write!(out, "{}", report.text()).map_err(io)?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}
