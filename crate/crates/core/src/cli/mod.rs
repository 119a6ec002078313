//! Command-line front end.
//!
//! [`run_command`] parses an argument vector, runs one subcommand and returns
//! the exit code with the text destined for stdout and stderr. Exit codes:
//! 0 success, 1 numerical or domain error, 2 verification failure, 64 usage error.

pub mod verify;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bargmann::{bargmann_inverse, bargmann_transform_coeffs, LineElement};
use crate::error::{Error, Result};
use crate::fock::{
    basis_psi, certify_divergence, reproducing_kernel, reproducing_kernel_sum, theta_membership, FockElement,
};
use crate::landau::{
    basis_psi_mn, default_sample_points, eigen_residual, landau_apply, landau_norm, lower, raise, LandauElement,
    WirtingerStep,
};
use crate::quadrature::{strip_inner_product, StripScheme};
use crate::scalar::TruncationBudget;
use crate::theta::{riemann_theta, ThetaArgs};
use crate::SpaceParams;

pub use verify::{verify_suite, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qptheta", version, about = "Quasi-periodic theta function spaces on the cylinder")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Riemann theta with characteristics.
    #[command(subcommand)]
    Theta(ThetaCommand),
    /// The holomorphic space: basis, Gram matrices, kernel, membership.
    #[command(subcommand)]
    Fock(FockCommand),
    /// The Bargmann transform and its inverse.
    #[command(subcommand)]
    Bargmann(BargmannCommand),
    /// The Landau operator and its ladder.
    #[command(subcommand)]
    Landau(LandauCommand),
    /// The release suite.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Debug, Subcommand)]
enum ThetaCommand {
    /// theta_{alpha,beta}(z | tau).
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        tau: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, default_value_t = TruncationBudget::DEFAULT_TOL, allow_hyphen_values = true)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
struct SpaceArgs {
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
}

impl SpaceArgs {
    fn params(&self) -> Result<SpaceParams> {
        SpaceParams::new(self.nu, self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelPath {
    Theta,
    Sum,
}

#[derive(Debug, Subcommand)]
enum FockCommand {
    /// psi_n(z).
    Psi {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Gram matrix of the basis by strip quadrature.
    Gram {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        nmin: i64,
        #[arg(long, allow_hyphen_values = true)]
        nmax: i64,
        /// Number of Landau levels to include (1 gives the holomorphic basis).
        #[arg(long, default_value_t = 1)]
        mlevels: u32,
    },
    /// Reproducing kernel K(z, w).
    Kernel {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: Complex64,
        #[arg(long, value_enum, default_value_t = KernelPath::Theta)]
        path: KernelPath,
    },
    /// Whether exp(nu/2 z^2) theta_{alpha,beta}(z|tau) lies in the space.
    Member {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        tau: Complex64,
    },
}

#[derive(Debug, Subcommand)]
enum BargmannCommand {
    /// Transform a line element; evaluate at --z or write the image to --out.
    Forward {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, conflicts_with = "out")]
        z: Option<Complex64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Magnetic parameter of the target space.
        #[arg(long, allow_hyphen_values = true, default_value_t = std::f64::consts::PI)]
        nu: f64,
    },
    /// Evaluate the inverse transform of a holomorphic element at q.
    Inverse {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
    },
}

#[derive(Debug, Subcommand)]
enum LandauCommand {
    /// (Delta f)(z), exactly and by finite differences.
    Apply {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Normalized creation step on coefficients.
    Raise {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Adjoint of raise on coefficients.
    Lower {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Finite-difference eigen-residual of psi_{m,n}.
    Eigres {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        m: u32,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Run every acceptance criterion.
    All {
        #[arg(long, default_value_t = verify::DEFAULT_TOL, allow_hyphen_values = true)]
        tol: f64,
    },
}

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i` and `-i`, with exponents allowed.
pub fn parse_complex(text: &str) -> std::result::Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("invalid complex literal {text:?}; expected a+bi");
    let number = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let Some(body) = s.strip_suffix('i') else {
        let re = number(&s)?;
        return if re.is_finite() { Ok(Complex64::new(re, 0.0)) } else { Err(bad()) };
    };
    // the sign that starts the imaginary part: not at position 0, not after an exponent marker
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (number(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => number(t)?,
    };
    if re.is_finite() && im.is_finite() {
        Ok(Complex64::new(re, im))
    } else {
        Err(bad())
    }
}

/// Shortest round-trip rendering, switching to exponent form for small magnitudes.
fn num(x: f64) -> String {
    Value::from(x).to_string()
}

fn complex_json(v: Complex64) -> Value {
    json!({ "re": v.re, "im": v.im })
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Usage(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string(value).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Output before formatting: a JSON value plus its CSV rendering.
struct Rendered {
    json: Value,
    csv: String,
}

impl Rendered {
    fn value(v: Complex64) -> Self {
        Self { json: complex_json(v), csv: format!("value_re,value_im\n{},{}\n", num(v.re), num(v.im)) }
    }
}

/// Flattens a JSON object of scalars and `{re, im}` pairs into one CSV row.
fn csv_row(object: &Value) -> String {
    let mut header = Vec::new();
    let mut row = Vec::new();
    if let Value::Object(map) = object {
        for (key, v) in map {
            match v {
                Value::Object(inner) if inner.contains_key("re") && inner.contains_key("im") => {
                    header.push(format!("{key}_re"));
                    header.push(format!("{key}_im"));
                    row.push(inner["re"].to_string());
                    row.push(inner["im"].to_string());
                }
                Value::Null => {
                    header.push(key.clone());
                    row.push(String::new());
                }
                other => {
                    header.push(key.clone());
                    row.push(other.to_string().trim_matches('"').to_string());
                }
            }
        }
    }
    format!("{}\n{}\n", header.join(","), row.join(","))
}

fn scalar_object(json: Value) -> Rendered {
    let csv = csv_row(&json);
    Rendered { json, csv }
}

fn theta_eval(alpha: f64, beta: f64, tau: Complex64, z: Complex64, tol: f64) -> Result<Rendered> {
    let args = ThetaArgs::new(alpha, beta, tau)?;
    let budget = TruncationBudget::with_tol(tol)?;
    Ok(Rendered::value(riemann_theta(&args, z, &budget)?))
}

fn gram(params: SpaceParams, nmin: i64, nmax: i64, mlevels: u32) -> Result<Rendered> {
    if nmin > nmax {
        return Err(Error::Domain(format!("nmin {nmin} exceeds nmax {nmax}")));
    }
    if mlevels == 0 {
        return Err(Error::Domain("mlevels must be at least 1".into()));
    }
    let keys: Vec<(u32, i64)> = (0..mlevels).flat_map(|m| (nmin..=nmax).map(move |n| (m, n))).collect();
    let scheme = if mlevels == 1 {
        StripScheme::spanning(&params, nmin as f64, nmax as f64)
    } else {
        LandauElement::new(params, keys.iter().map(|&k| (k, Complex64::new(1.0, 0.0)))).strip_scheme()
    };
    let f = |m: u32, n: i64, z: Complex64| if m == 0 { basis_psi(n, z, &params) } else { basis_psi_mn(m, n, z, &params) };
    let mut matrix = Vec::with_capacity(keys.len());
    let mut csv = String::from("row_m,row_n,col_m,col_n,value_re,value_im\n");
    let mut deviation = 0.0f64;
    for &(j, k) in &keys {
        let mut row = Vec::with_capacity(keys.len());
        for &(m, n) in &keys {
            let g = strip_inner_product(|z| f(j, k, z), |z| f(m, n, z), params.nu(), &scheme)?;
            let delta = if (j, k) == (m, n) { 1.0 } else { 0.0 };
            deviation = deviation.max((g - delta).norm());
            let _ = writeln!(csv, "{j},{k},{m},{n},{},{}", num(g.re), num(g.im));
            row.push(complex_json(g));
        }
        matrix.push(Value::Array(row));
    }
    let indices: Vec<Value> = keys.iter().map(|&(m, n)| json!({ "m": m, "n": n })).collect();
    Ok(Rendered { json: json!({ "indices": indices, "matrix": matrix, "max_deviation": deviation }), csv })
}

fn member(params: SpaceParams, beta: f64, tau: Complex64) -> Result<Rendered> {
    let args = ThetaArgs::new(params.alpha(), beta, tau)?;
    let m = theta_membership(&args, &params, &TruncationBudget::default())?;
    let certificate = if m.in_space { None } else { Some(certify_divergence(&args, &params)) };
    let json = json!({
        "in_space": m.in_space,
        "norm": m.norm,
        "divergence_certified": certificate.map(|c| c.certified),
        "log_partial_sums": certificate.map(|c| c.log_partial_sums.to_vec()),
    });
    let csv = format!(
        "in_space,norm,divergence_certified\n{},{},{}\n",
        m.in_space,
        m.norm.map(num).unwrap_or_default(),
        certificate.map(|c| c.certified.to_string()).unwrap_or_default()
    );
    Ok(Rendered { json, csv })
}

fn bargmann_forward(input: &Path, nu: f64, z: Option<Complex64>, out: Option<&Path>) -> Result<Rendered> {
    let line: LineElement = read_json(input)?;
    let image = bargmann_transform_coeffs(&line, nu)?;
    if let Some(z) = z {
        return Ok(Rendered::value(image.evaluate(z)?));
    }
    match out {
        Some(path) => {
            write_json(path, &image)?;
            Ok(scalar_object(json!({ "out": path.display().to_string() })))
        }
        None => {
            let json = serde_json::to_value(&image).map_err(|e| Error::Io(e.to_string()))?;
            let mut csv = String::from("n,re,im\n");
            for (n, a) in image.e_coeffs() {
                let _ = writeln!(csv, "{n},{},{}", num(a.re), num(a.im));
            }
            Ok(Rendered { json, csv })
        }
    }
}

fn landau_apply_cmd(input: &Path, z: Complex64) -> Result<Rendered> {
    let elem: LandauElement = read_json(input)?;
    let exact = elem.landau_image().evaluate(z)?;
    let params = *elem.params();
    let numeric = landau_apply(|w| elem.evaluate(w), z, &params, WirtingerStep::default())?;
    Ok(scalar_object(json!({ "value": complex_json(exact), "finite_difference": complex_json(numeric) })))
}

fn ladder_cmd(input: &Path, out: &Path, step: fn(&LandauElement) -> LandauElement) -> Result<Rendered> {
    let elem: LandauElement = read_json(input)?;
    let image = step(&elem);
    write_json(out, &image)?;
    Ok(scalar_object(json!({ "out": out.display().to_string(), "norm": landau_norm(&image) })))
}

fn verify_all(tol: f64) -> Result<(Rendered, bool)> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Domain(format!("tol must be > 0, got {tol}")));
    }
    let report = verify_suite(tol);
    let mut csv = String::from("name,expected,actual,tolerance,pass\n");
    for c in &report.cases {
        let _ = writeln!(csv, "{},{},{},{},{}", c.name, num(c.expected), num(c.actual), num(c.tolerance), c.pass);
    }
    let json = serde_json::to_value(&report).map_err(|e| Error::Io(e.to_string()))?;
    Ok((Rendered { json, csv }, report.passed()))
}

fn dispatch(command: Command) -> Result<(Rendered, bool)> {
    let ok = |r: Rendered| Ok((r, true));
    match command {
        Command::Theta(ThetaCommand::Eval { alpha, beta, tau, z, tol }) => ok(theta_eval(alpha, beta, tau, z, tol)?),
        Command::Fock(FockCommand::Psi { space, n, z }) => ok(Rendered::value(basis_psi(n, z, &space.params()?)?)),
        Command::Fock(FockCommand::Gram { space, nmin, nmax, mlevels }) => ok(gram(space.params()?, nmin, nmax, mlevels)?),
        Command::Fock(FockCommand::Kernel { space, z, w, path }) => {
            let p = space.params()?;
            let budget = TruncationBudget::default();
            let k = match path {
                KernelPath::Theta => reproducing_kernel(z, w, &p, &budget)?,
                KernelPath::Sum => reproducing_kernel_sum(z, w, &p, &budget)?,
            };
            ok(Rendered::value(k))
        }
        Command::Fock(FockCommand::Member { space, beta, tau }) => ok(member(space.params()?, beta, tau)?),
        Command::Bargmann(BargmannCommand::Forward { input, z, out, nu }) => {
            ok(bargmann_forward(&input, nu, z, out.as_deref())?)
        }
        Command::Bargmann(BargmannCommand::Inverse { input, q }) => {
            let elem: FockElement = read_json(&input)?;
            ok(Rendered::value(bargmann_inverse(&elem, q, &TruncationBudget::default())?))
        }
        Command::Landau(LandauCommand::Apply { input, z }) => ok(landau_apply_cmd(&input, z)?),
        Command::Landau(LandauCommand::Raise { input, out }) => ok(ladder_cmd(&input, &out, raise)?),
        Command::Landau(LandauCommand::Lower { input, out }) => ok(ladder_cmd(&input, &out, lower)?),
        Command::Landau(LandauCommand::Eigres { space, m, n }) => {
            let r = eigen_residual(m, n, &space.params()?, &default_sample_points(), WirtingerStep::default())?;
            ok(scalar_object(json!({ "m": m, "n": n, "residual": r })))
        }
        Command::Verify(VerifyCommand::All { tol }) => verify_all(tol),
    }
}

fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Usage(_) | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

/// Runs one subcommand. `argv` excludes the program name.
pub fn run_command(argv: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(std::iter::once("qptheta".to_string()).chain(argv.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let format = cli.format;
    match dispatch(cli.command) {
        Ok((rendered, passed)) => {
            let stdout = match format {
                Format::Json => rendered.json.to_string() + "\n",
                Format::Csv => rendered.csv,
            };
            let code = if passed { EXIT_OK } else { EXIT_VERIFY };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: exit_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &str) -> Outcome {
        let argv: Vec<String> = args.split_whitespace().map(String::from).collect();
        run_command(&argv)
    }

    #[test]
    fn complex_literals() {
        let cases = [
            ("1+2i", (1.0, 2.0)),
            ("1-2i", (1.0, -2.0)),
            ("-1.5e-3+2E+2i", (-1.5e-3, 200.0)),
            ("3", (3.0, 0.0)),
            ("-2i", (0.0, -2.0)),
            ("i", (0.0, 1.0)),
            ("-i", (0.0, -1.0)),
            ("0+1i", (0.0, 1.0)),
            ("1e-3i", (0.0, 1e-3)),
        ];
        for (text, (re, im)) in cases {
            assert_eq!(parse_complex(text).unwrap(), Complex64::new(re, im), "{text}");
        }
        for bad in ["", "1+", "abc", "1+2j", "1+2i+3i", "nan"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn theta_eval_output() {
        let out = run("theta eval --alpha 0 --beta 0 --tau 0+1i --z 0+0i");
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert!((v["re"].as_f64().unwrap() - 1.086_434_811_213_308).abs() < 1e-14);
        assert_eq!(v["im"].as_f64().unwrap(), 0.0);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run("theta eval --alpha 0 --beta 0 --tau 0-1i --z 0").code, EXIT_DOMAIN);
        assert_eq!(run("theta eval --alpha 0 --bogus 1").code, EXIT_USAGE);
        assert_eq!(run("fock psi --nu -1 --alpha 0 --n 0 --z 0").code, EXIT_DOMAIN);
        assert_eq!(run("landau apply --in /nonexistent.json --z 0").code, EXIT_USAGE);
        assert_eq!(run("--help").code, EXIT_OK);
    }

    #[test]
    fn csv_flattens_complex() {
        let out = run("fock psi --nu 3.14159265 --alpha 0.3 --n 0 --z 0.1+0.2i --format csv");
        assert_eq!(out.code, 0);
        assert!(out.stdout.starts_with("value_re,value_im\n"));
    }
}
