//! Command-line front end. `run` parses argv, writes CSV or JSON to `out`,
//! and returns the process exit status: 0 on success, 1 on a domain error,
//! 2 on a usage error.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::acceptance;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::family::{Cutoff, FamilySpec, SigmaCase};
use crate::generator::{
    dw_pattern, inverse_sqrt_potential, inverse_sqrt_roots, matched_boundary_check,
    quantsys_potential, reproduce_dw, solve_params_inverse_sqrt, solve_params_quantsys, Branch,
};
use crate::oracle::{linspace, FdHamiltonian};
use crate::poly::phi;
use crate::schrodinger::{potential, wavefunction, SchrodingerSystem};
use crate::specfun::special_function;

const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "solvable", version, about = "Exactly solvable Schrödinger systems and their generator")]
struct Cli {
    /// Seed for randomized sampling; `SOLVABLE_SEED` overrides the default.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the six families with their constraints as JSON.
    Families(FamiliesArgs),
    /// Monic polynomial coefficients as CSV `ell,j,c_j`.
    Poly(PolyArgs),
    /// Associated special functions.
    #[command(subcommand)]
    Specfun(SpecfunCommand),
    /// `V_m(x)` on a grid as CSV `x,V`.
    Potential(PotentialArgs),
    /// `Ψ_{ℓ,m}(x)` on a grid as CSV `x,psi`.
    Eigenfunction(EigenfunctionArgs),
    /// One eigenpair of a generated system as JSON.
    Generate(GenerateArgs),
    /// All parameter solutions for given potential coefficients, as JSON.
    SolveParams(SolveParamsArgs),
    /// Numerical cross-checks.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Push the translated oscillator through one substitution, as JSON.
    ReproduceDw(DwArgs),
    /// Run every acceptance criterion; exits 1 if any fails.
    Acceptance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    One,
    S,
    OneMinusS2,
    S2MinusOne,
    S2,
    S2PlusOne,
}

impl From<CaseArg> for SigmaCase {
    fn from(c: CaseArg) -> SigmaCase {
        match c {
            CaseArg::One => SigmaCase::One,
            CaseArg::S => SigmaCase::S,
            CaseArg::OneMinusS2 => SigmaCase::OneMinusS2,
            CaseArg::S2MinusOne => SigmaCase::S2Minus1,
            CaseArg::S2 => SigmaCase::S2,
            CaseArg::S2PlusOne => SigmaCase::S2Plus1,
        }
    }
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: CaseArg,
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
}

impl FamilyArgs {
    fn spec(&self) -> Result<FamilySpec> {
        FamilySpec::new(self.family.into(), self.alpha, self.beta)
    }
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = 201)]
    grid: usize,
    #[arg(long, allow_hyphen_values = true)]
    xmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xmax: Option<f64>,
}

#[derive(Debug, Args)]
struct FamiliesArgs {
    /// Describe one family at the given parameters instead of the defaults.
    #[arg(long, value_enum, requires_all = ["alpha", "beta"])]
    family: Option<CaseArg>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
}

#[derive(Debug, Args)]
struct PolyArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Highest degree; every `ℓ` from 0 up to it is listed.
    #[arg(long)]
    ell: usize,
}

#[derive(Debug, Subcommand)]
enum SpecfunCommand {
    /// `Φ_{ℓ,m}(s)` on a grid as CSV `s,value`.
    Eval(SpecfunEvalArgs),
}

#[derive(Debug, Args)]
struct SpecfunEvalArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    ell: usize,
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, default_value_t = 201)]
    grid: usize,
    #[arg(long, allow_hyphen_values = true)]
    smin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    smax: Option<f64>,
}

#[derive(Debug, Args)]
struct PotentialArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
struct EigenfunctionArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    ell: usize,
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    /// `c₁(3r/2)^{2/3} + c₂(2/(3r))^{2/3} - 5/(36r²)`.
    Cuberoot,
    /// `c₁/√(2r) + c₂/(2r) - 3/(16r²)`.
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    #[value(name = "+")]
    Plus,
    #[value(name = "-")]
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Branch {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(long, allow_hyphen_values = true)]
    c1: f64,
    #[arg(long, allow_hyphen_values = true)]
    c2: f64,
    #[arg(long)]
    n: usize,
    /// Sign of `E` for the cube-root system; ignored for `sqrt`.
    #[arg(long, value_enum, default_value = "+")]
    branch: BranchArg,
    #[arg(long, value_enum, default_value = "cuberoot")]
    which: Which,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Quantsys,
    Invsqrt,
}

#[derive(Debug, Args)]
struct SolveParamsArgs {
    #[arg(long, value_enum)]
    mode: Mode,
    #[arg(long, allow_hyphen_values = true)]
    c1: f64,
    #[arg(long, allow_hyphen_values = true)]
    c2: f64,
    #[arg(long)]
    n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SystemKind {
    Family,
    Cuberoot,
    Sqrt,
}

#[derive(Debug, Args)]
struct SystemArgs {
    #[arg(long, value_enum, default_value = "family")]
    system: SystemKind,
    #[arg(long, value_enum)]
    family: Option<CaseArg>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, allow_hyphen_values = true)]
    c1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c2: Option<f64>,
}

impl SystemArgs {
    fn family(&self) -> std::result::Result<FamilySpec, CliError> {
        match (self.family, self.alpha, self.beta) {
            (Some(f), Some(a), Some(b)) => Ok(FamilySpec::new(f.into(), a, b)?),
            _ => Err(CliError::Usage("--system family needs --family, --alpha and --beta".into())),
        }
    }

    fn coefficients(&self) -> std::result::Result<(f64, f64), CliError> {
        match (self.c1, self.c2) {
            (Some(c1), Some(c2)) => Ok((c1, c2)),
            _ => Err(CliError::Usage("generated systems need --c1 and --c2".into())),
        }
    }
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Pointwise residual of one eigenpair as CSV `x,residual`.
    Residual(VerifyResidualArgs),
    /// FD eigenvalues against the closed forms as CSV
    /// `index,E_numeric,E_analytic,abs_err`.
    Spectrum(VerifySpectrumArgs),
    /// Pairwise normalized inner products as CSV `ell,k,s_space,x_space`.
    Orthogonality(VerifyOrthogonalityArgs),
}

#[derive(Debug, Args)]
struct VerifyResidualArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Degree `ℓ` for families, level `n` for generated systems.
    #[arg(long, default_value_t = 0)]
    ell: usize,
    #[arg(long, value_enum, default_value = "+")]
    branch: BranchArg,
    #[command(flatten)]
    grid: GridArgs,
    /// Sample this many seeded random points instead of the uniform grid.
    #[arg(long)]
    random_points: Option<usize>,
}

#[derive(Debug, Args)]
struct VerifySpectrumArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, default_value_t = 4000)]
    grid: usize,
    /// Largest energy reported; defaults to just above the fifth analytic level.
    #[arg(long, allow_hyphen_values = true)]
    emax: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xmin: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xmax: Option<f64>,
}

#[derive(Debug, Args)]
struct VerifyOrthogonalityArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, default_value_t = 6)]
    max_ell: usize,
}

#[derive(Debug, Args)]
struct DwArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, allow_hyphen_values = true)]
    rho: f64,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    /// 1: `x = √(2r)`; 2: `x = (3r/2)^{2/3}`.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    which: u8,
}

#[derive(Debug)]
enum CliError {
    Domain(Error),
    Usage(String),
    Io(std::io::Error),
    AcceptanceFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult = std::result::Result<(), CliError>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let seed = cli
        .seed
        .or_else(|| std::env::var("SOLVABLE_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(DEFAULT_SEED);
    let result = match cli.command {
        Command::Families(a) => families(&a, out),
        Command::Poly(a) => poly(&a, out),
        Command::Specfun(SpecfunCommand::Eval(a)) => specfun_eval(&a, out),
        Command::Potential(a) => potential_csv(&a, out),
        Command::Eigenfunction(a) => eigenfunction_csv(&a, out),
        Command::Generate(a) => generate_json(&a, out),
        Command::SolveParams(a) => solve_params(&a, out),
        Command::Verify(VerifyCommand::Residual(a)) => verify_residual(&a, seed, out),
        Command::Verify(VerifyCommand::Spectrum(a)) => verify_spectrum(&a, out),
        Command::Verify(VerifyCommand::Orthogonality(a)) => verify_orthogonality(&a, out),
        Command::ReproduceDw(a) => dw_json(&a, out),
        Command::Acceptance => run_acceptance(out),
    };
    match result {
        Ok(()) => 0,
        Err(CliError::Domain(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(CliError::AcceptanceFailed) => 1,
    }
}

/// C's `%.12g`, except that `-0` prints as `0`.
pub fn fmt_g(x: f64) -> String {
    const P: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A JSON number rounded to 12 significant digits, or a string for non-finite values.
fn num(x: f64) -> Value {
    if x.is_finite() {
        let r: f64 = fmt_g(x).parse().expect("round trip");
        if r.fract() == 0.0 && r.abs() < 1e15 {
            json!(r as i64)
        } else {
            json!(r)
        }
    } else {
        json!(fmt_g(x))
    }
}

fn write_json(out: &mut dyn Write, v: &Value) -> CliResult {
    serde_json::to_writer_pretty(&mut *out, v).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn family_json(f: &FamilySpec) -> Value {
    let iv = f.interval();
    let (lambda, ell_max) = match f.cutoff() {
        Cutoff::Unbounded => (json!("inf"), Value::Null),
        Cutoff::Bounded { lambda, max_degree } => (num(lambda), json!(max_degree)),
    };
    json!({
        "case": f.case().label(),
        "alpha": num(f.alpha()),
        "beta": num(f.beta()),
        "constraint": f.case().constraint(),
        "interval": [num(iv.lo), num(iv.hi)],
        "Lambda": lambda,
        "L": ell_max,
    })
}

/// Parameters used when `families` is called without arguments.
fn default_parameters(case: SigmaCase) -> (f64, f64) {
    match case {
        SigmaCase::One => (-2.0, 0.0),
        SigmaCase::S => (-1.0, 2.0),
        SigmaCase::OneMinusS2 => (-5.0, 1.0),
        SigmaCase::S2Minus1 => (-3.0, 7.0),
        SigmaCase::S2 => (-7.0, 1.0),
        SigmaCase::S2Plus1 => (-5.0, 1.0),
    }
}

fn families(a: &FamiliesArgs, out: &mut dyn Write) -> CliResult {
    if let (Some(c), Some(al), Some(be)) = (a.family, a.alpha, a.beta) {
        let f = FamilySpec::new(c.into(), al, be)?;
        return write_json(out, &family_json(&f));
    }
    let list: Vec<Value> = SigmaCase::ALL
        .iter()
        .map(|&c| {
            let (al, be) = default_parameters(c);
            family_json(&FamilySpec::new(c, al, be).expect("default parameters are admissible"))
        })
        .collect();
    write_json(out, &Value::Array(list))
}

fn poly(a: &PolyArgs, out: &mut dyn Write) -> CliResult {
    let f = a.family.spec()?;
    f.check_degree(a.ell)?;
    writeln!(out, "ell,j,c_j")?;
    for ell in 0..=a.ell {
        let p = phi(&f, ell)?;
        for (j, c) in p.coeffs().iter().enumerate() {
            writeln!(out, "{ell},{j},{}", fmt_g(*c))?;
        }
    }
    Ok(())
}

fn specfun_eval(a: &SpecfunEvalArgs, out: &mut dyn Write) -> CliResult {
    let f = a.family.spec()?;
    let sf = special_function(&f, a.ell, a.m)?;
    let (wlo, whi) = f.sample_window();
    let iv = f.interval();
    let (lo, hi) = clamp(a.smin.unwrap_or(wlo), a.smax.unwrap_or(whi), iv.lo, iv.hi);
    writeln!(out, "s,value")?;
    for s in linspace(lo, hi, a.grid) {
        writeln!(out, "{},{}", fmt_g(s), fmt_g(sf.eval(s)))?;
    }
    Ok(())
}

/// Pulls a plot range in from finite interval ends by `1e-6` of the span.
fn clamp(lo: f64, hi: f64, a: f64, b: f64) -> (f64, f64) {
    let span = if (b - a).is_finite() { b - a } else { 1.0 };
    let eps = 1e-6 * span;
    let lo = if lo <= a { a + eps } else { lo };
    let hi = if hi >= b { b - eps } else { hi };
    (lo, hi)
}

fn system_range(sys: &SchrodingerSystem, g: &GridArgs) -> (f64, f64) {
    let (wlo, whi) = sys.window();
    clamp(g.xmin.unwrap_or(wlo), g.xmax.unwrap_or(whi), sys.interval.lo, sys.interval.hi)
}

fn curve(out: &mut dyn Write, header: &str, e: &Expr, lo: f64, hi: f64, n: usize) -> CliResult {
    let c = e.compile();
    writeln!(out, "{header}")?;
    for x in linspace(lo, hi, n) {
        writeln!(out, "{},{}", fmt_g(x), fmt_g(c.eval_or_nan(x)))?;
    }
    Ok(())
}

fn potential_csv(a: &PotentialArgs, out: &mut dyn Write) -> CliResult {
    let sys = potential(&a.family.spec()?, a.m)?;
    let (lo, hi) = system_range(&sys, &a.grid);
    curve(out, "x,V", &sys.potential, lo, hi, a.grid.grid)
}

fn eigenfunction_csv(a: &EigenfunctionArgs, out: &mut dyn Write) -> CliResult {
    let f = a.family.spec()?;
    let sys = potential(&f, a.m)?;
    let psi = wavefunction(&f, a.ell, a.m)?;
    let (lo, hi) = system_range(&sys, &a.grid);
    curve(out, "x,psi", &psi, lo, hi, a.grid.grid)
}

fn generate_json(a: &GenerateArgs, out: &mut dyn Write) -> CliResult {
    let found = match a.which {
        Which::Cuberoot => solve_params_quantsys(a.c1, a.c2, a.n, a.branch.into())
            .map(|p| (p.alpha, p.beta, p.energy, p.psi)),
        // The admissible root with the lowest energy.
        Which::Sqrt => solve_params_inverse_sqrt(a.c1, a.c2, a.n).map(|roots| {
            let p = roots
                .into_iter()
                .min_by(|x, y| x.energy.total_cmp(&y.energy))
                .expect("nonempty on success");
            (p.alpha, p.beta, p.energy, p.psi)
        }),
    };
    let v = match found {
        Ok((alpha, beta, energy, psi)) => json!({
            "energy": num(energy),
            "psi_expr": psi.to_string_in("r"),
            "admissible": true,
            "alpha": num(alpha),
            "beta": num(beta),
        }),
        Err(e @ (Error::Inadmissible(_) | Error::NoAdmissibleRoot(_))) => json!({
            "energy": Value::Null,
            "psi_expr": Value::Null,
            "admissible": false,
            "reason": e.to_string(),
        }),
        Err(e) => return Err(e.into()),
    };
    write_json(out, &v)
}

fn solve_params(a: &SolveParamsArgs, out: &mut dyn Write) -> CliResult {
    let rows: Vec<Value> = match a.mode {
        Mode::Quantsys => [Branch::Plus, Branch::Minus]
            .into_iter()
            .map(|b| match solve_params_quantsys(a.c1, a.c2, a.n, b) {
                Ok(p) => json!({
                    "branch": b.symbol(),
                    "alpha": num(p.alpha),
                    "beta": num(p.beta),
                    "energy": num(p.energy),
                    "admissible": true,
                }),
                Err(e) => json!({ "branch": b.symbol(), "admissible": false, "reason": e.to_string() }),
            })
            .collect(),
        Mode::Invsqrt => {
            let r = inverse_sqrt_roots(a.c1, a.c2, a.n);
            r.roots
                .iter()
                .map(|c| {
                    json!({
                        "alpha": num(c.alpha),
                        "beta": num(c.beta),
                        "energy": num(c.energy),
                        "admissible": c.admissible,
                        "degenerate": r.degenerate,
                    })
                })
                .collect()
        }
    };
    write_json(out, &Value::Array(rows))
}

/// Potential, energy and eigenfunction for `verify residual`.
fn eigenpair(a: &VerifyResidualArgs) -> std::result::Result<(Expr, f64, Expr, (f64, f64)), CliError> {
    let s = &a.system;
    Ok(match s.system {
        SystemKind::Family => {
            let f = s.family()?;
            let sys = potential(&f, s.m)?;
            let psi = wavefunction(&f, a.ell, s.m)?;
            let range = system_range(&sys, &a.grid);
            (sys.potential, f.eigenvalue(a.ell)?, psi, range)
        }
        SystemKind::Cuberoot => {
            let (c1, c2) = s.coefficients()?;
            let p = solve_params_quantsys(c1, c2, a.ell, a.branch.into())?;
            let range = (a.grid.xmin.unwrap_or(1e-3), a.grid.xmax.unwrap_or(30.0));
            (quantsys_potential(c1, c2), p.energy, p.psi, range)
        }
        SystemKind::Sqrt => {
            let (c1, c2) = s.coefficients()?;
            let roots = solve_params_inverse_sqrt(c1, c2, a.ell)?;
            let p = roots.into_iter().min_by(|x, y| x.energy.total_cmp(&y.energy)).expect("nonempty");
            let range = (a.grid.xmin.unwrap_or(1e-3), a.grid.xmax.unwrap_or(30.0));
            (inverse_sqrt_potential(c1, c2), p.energy, p.psi, range)
        }
    })
}

fn verify_residual(a: &VerifyResidualArgs, seed: u64, out: &mut dyn Write) -> CliResult {
    let (v, e, psi, (lo, hi)) = eigenpair(a)?;
    let pts = match a.random_points {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut p: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
            p.sort_by(f64::total_cmp);
            p
        }
        None => linspace(lo, hi, a.grid.grid),
    };
    let (vc, pc, d2) = (v.compile(), psi.compile(), psi.nth_diff(2).compile());
    writeln!(out, "x,residual")?;
    for x in pts {
        let p = pc.eval_or_nan(x);
        let r = (-d2.eval_or_nan(x) + vc.eval_or_nan(x) * p - e * p) / (1.0 + (e * p).abs());
        writeln!(out, "{},{}", fmt_g(x), fmt_g(r))?;
    }
    Ok(())
}

fn spectrum_rows(out: &mut dyn Write, rows: &[(f64, Option<f64>)]) -> CliResult {
    writeln!(out, "index,E_numeric,E_analytic,abs_err")?;
    for (i, (num, ana)) in rows.iter().enumerate() {
        match ana {
            Some(e) => writeln!(out, "{i},{},{},{}", fmt_g(*num), fmt_g(*e), fmt_g((num - e).abs()))?,
            None => writeln!(out, "{i},{},,", fmt_g(*num))?,
        }
    }
    Ok(())
}

fn verify_spectrum(a: &VerifySpectrumArgs, out: &mut dyn Write) -> CliResult {
    let s = &a.system;
    match s.system {
        SystemKind::Family => {
            let f = s.family()?;
            let sys = potential(&f, s.m)?;
            let top = f.cutoff().max_degree().unwrap_or(usize::MAX);
            let analytic: Vec<f64> =
                (s.m..=top.min(s.m + 9)).map(|l| f.eigenvalue_unchecked(l)).collect();
            let emax = a.emax.unwrap_or_else(|| {
                let k = analytic.len().min(5);
                analytic[k - 1] + 0.5 * (analytic[k - 1] - analytic[0]).max(1.0) / k as f64
            });
            // Twice the eigenfunction window on infinite sides.
            let (wlo, whi) = sys.window();
            let mid = 0.5 * (wlo + whi);
            let half = whi - wlo;
            let (lo, hi) = clamp(
                a.xmin.unwrap_or(if sys.interval.lo.is_finite() { wlo } else { mid - half }),
                a.xmax.unwrap_or(if sys.interval.hi.is_finite() { whi } else { mid + half }),
                sys.interval.lo,
                sys.interval.hi,
            );
            let h = FdHamiltonian::from_expr(&sys.potential, lo, hi, a.grid)?;
            let rows: Vec<(f64, Option<f64>)> = h
                .eigenvalues_below(emax)
                .into_iter()
                .enumerate()
                .map(|(i, e)| (e, analytic.get(i).copied()))
                .collect();
            spectrum_rows(out, &rows)
        }
        SystemKind::Cuberoot => {
            let (c1, c2) = s.coefficients()?;
            let (lo, hi) = (a.xmin.unwrap_or(1e-3), a.xmax.unwrap_or(40.0));
            let mut rows = Vec::new();
            for n in 0..5 {
                let chk = match matched_boundary_check(c1, c2, n, Branch::Plus, lo, hi, a.grid) {
                    Ok(c) => c,
                    Err(Error::Inadmissible(_)) => continue,
                    Err(e) => return Err(e.into()),
                };
                if a.emax.is_some_and(|m| chk.e_analytic > m) {
                    break;
                }
                rows.push((chk.e_matched, Some(chk.e_analytic)));
            }
            spectrum_rows(out, &rows)
        }
        SystemKind::Sqrt => Err(CliError::Usage(
            "verify spectrum supports --system family and --system cuberoot".into(),
        )),
    }
}

fn verify_orthogonality(a: &VerifyOrthogonalityArgs, out: &mut dyn Write) -> CliResult {
    let f = a.family.spec()?;
    let top = f.cutoff().max_degree().map_or(a.max_ell, |l| l.min(a.max_ell));
    if a.m > top {
        return Err(Error::OrderExceedsDegree { m: a.m, ell: top }.into());
    }
    let table = acceptance::inner_products(&f, a.m, top)?;
    writeln!(out, "ell,k,s_space,x_space")?;
    for row in table {
        writeln!(out, "{},{},{},{}", row.ell, row.k, fmt_g(row.s_space), fmt_g(row.x_space))?;
    }
    Ok(())
}

fn dw_json(a: &DwArgs, out: &mut dyn Write) -> CliResult {
    let sys = reproduce_dw(a.theta, a.rho, a.lambda, a.which)?;
    let pattern = dw_pattern(&sys).map(|p| {
        json!({
            "theta2": num(p.theta2),
            "rho": num(p.rho),
            "lambda": num(p.lambda),
            "r_minus_2": num(p.correction),
            "unexpected": p.unexpected.iter().map(|(q, c)| json!([q.to_string(), num(*c)])).collect::<Vec<_>>(),
        })
    });
    // Ground state e^{-θx²/2} of the source when it is a centered oscillator.
    let ground = (a.theta > 0.0 && a.rho == 0.0 && a.lambda == -a.theta)
        .then(|| sys.transform(&(Expr::var().powi(2) * (-a.theta / 2.0)).exp()));
    let v = json!({
        "x_of_r": sys.map.x_of_r.to_string_in("r"),
        "gauge": sys.gauge.to_string_in("r"),
        "potential": sys.potential.to_string_in("r"),
        "pattern": pattern,
        "ground_state": ground.map(|g| g.to_string_in("r")),
    });
    write_json(out, &v)
}

fn run_acceptance(out: &mut dyn Write) -> CliResult {
    let reports = acceptance::run_all();
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    writeln!(out, "{} of {} criteria passed", reports.len() - failed, reports.len())?;
    if failed > 0 {
        return Err(CliError::AcceptanceFailed);
    }
    Ok(())
}
