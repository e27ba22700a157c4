//! `lsys`: evaluate, classify and scan L-systems with half-line Schrödinger
//! main operators, compute Weyl functions, and run the verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input or a
//! failed computation, 3 boundary operator not accretive.

mod parse;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use lsys_core::funclass::{stieltjes_check, CheckOutcome, Variant};
use lsys_core::lsystem::{
    classify_extension, full_report, in_branch_domain, scan_mu, BoundaryParameter, ExtensionParameter,
    SchrodingerLSystem,
};
use lsys_core::numeric::sampling;
use lsys_core::verify::{self, VerifyOptions, DEFAULT_SEED};
use lsys_core::weyl::{Potential, WeylFunction, WeylSettings};
use lsys_core::Error;

use parse::{List, PotentialSpec};

#[derive(Parser, Debug)]
#[command(name = "lsys", version, about = "Impedance, Weyl-function and sectoriality calculus for half-line L-systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Impedance V and transfer function W at given points.
    Eval(EvalArgs),
    /// Class, angles and critical parameters as JSON.
    Classify(ClassifyArgs),
    /// f(mu) over a grid of extension parameters on one branch.
    ScanMu(ScanArgs),
    /// Weyl-Titchmarsh function m(lambda) and m(-0).
    Weyl(WeylArgs),
    /// Run the built-in verification suite.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Branch {
    Stieltjes,
    Inverse,
}

#[derive(Args, Debug)]
struct SystemArgs {
    /// Boundary parameter h as `a+bi` (Im h > 0).
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    h: Complex64,
    /// Extension parameter: a real number or `inf`.
    #[arg(long, allow_hyphen_values = true)]
    mu: ExtensionParameter,
    /// `free`, `const:<c>` or `table:<path>` (CSV with header `x,q`).
    #[arg(long, default_value = "free", value_parser = parse::potential)]
    potential: PotentialSpec,
}

#[derive(Args, Debug)]
struct PointArgs {
    /// Comma-separated complex points, e.g. `-1,1+i,0.5-2i`.
    #[arg(long, value_parser = parse::complex_list, allow_hyphen_values = true, conflicts_with = "random")]
    points: Option<List<Complex64>>,
    /// Use this many seeded random points off the real axis instead.
    #[arg(long)]
    random: Option<usize>,
    /// Seed for random points.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

impl PointArgs {
    fn resolve(&self) -> Result<Vec<Complex64>, Error> {
        match (&self.points, self.random) {
            (Some(p), _) => Ok(p.0.clone()),
            (None, Some(n)) => Ok(sampling::off_axis_points(self.seed, n)),
            (None, None) => Err(Error::Input("give --points or --random".into())),
        }
    }
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[command(flatten)]
    points: PointArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Seed for the sampled class check recorded in the report.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
    h: Complex64,
    #[arg(long, default_value = "free", value_parser = parse::potential)]
    potential: PotentialSpec,
    #[arg(long, value_enum, default_value_t = Branch::Stieltjes)]
    branch: Branch,
    /// `x1,x2,...` or `start:end:count`; points outside the branch are dropped.
    #[arg(long, value_parser = parse::real_grid, allow_hyphen_values = true)]
    grid: List<f64>,
    /// Reference parameter for the tan(beta) bound; defaults to the grid
    /// point nearest the critical value.
    #[arg(long, allow_hyphen_values = true)]
    mu_star: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct WeylArgs {
    #[arg(long, default_value = "free", value_parser = parse::potential)]
    potential: PotentialSpec,
    #[command(flatten)]
    points: PointArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Only reproduce worked example 1 or 2.
    #[arg(long, conflicts_with = "criterion", value_parser = clap::value_parser!(u8).range(1..=2))]
    example: Option<u8>,
    /// Only run criterion 1..=8.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
    criterion: Option<u8>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Negative control: evaluate with the wrong square-root branch.
    #[arg(long, hide = true)]
    flip_sqrt_branch: bool,
}

enum Failure {
    Verification(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn json_num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn weyl_for(spec: &PotentialSpec) -> Result<WeylFunction, Error> {
    let potential = match spec {
        PotentialSpec::Free => Potential::free(0.0),
        PotentialSpec::Constant(c) => Potential::constant(0.0, *c),
        PotentialSpec::Table(path) => Potential::from_csv_path(path)?,
    };
    WeylFunction::for_potential(potential, WeylSettings::default())
}

fn system(args: &SystemArgs) -> Result<SchrodingerLSystem, Error> {
    SchrodingerLSystem::new(BoundaryParameter::new(args.h)?, args.mu, weyl_for(&args.potential)?)
}

/// `Ok(None)` marks a pole.
fn value_or_pole(r: Result<Complex64, Error>) -> Result<Option<Complex64>, Error> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Pole(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn run_eval(args: &EvalArgs) -> Result<String, Failure> {
    let sys = system(&args.system)?;
    let points = args.points.resolve()?;
    let mut rows = Vec::with_capacity(points.len());
    for &z in &points {
        rows.push((z, value_or_pole(sys.impedance(z))?, value_or_pole(sys.transfer(z))?));
    }
    let mut out = String::new();
    match args.format {
        Format::Csv => {
            out.push_str("re_z,im_z,re_V,im_V,re_W,im_W\n");
            let cells = |v: Option<Complex64>| match v {
                Some(v) => format!("{},{}", num(v.re), num(v.im)),
                None => "pole,pole".to_string(),
            };
            for (z, v, w) in rows {
                writeln!(out, "{},{},{},{}", num(z.re), num(z.im), cells(v), cells(w)).unwrap();
            }
        }
        Format::Json => {
            let pair = |v: Option<Complex64>| match v {
                Some(v) => json!([v.re, v.im]),
                None => json!("pole"),
            };
            let items: Vec<Value> =
                rows.into_iter().map(|(z, v, w)| json!({"z": [z.re, z.im], "V": pair(v), "W": pair(w)})).collect();
            out = serde_json::to_string_pretty(&items).expect("finite values serialize") + "\n";
        }
    }
    Ok(out)
}

fn run_classify(args: &ClassifyArgs) -> Result<String, Failure> {
    let sys = system(&args.system)?;
    let mut report = full_report(&sys)?;
    if let Some(variant) = classify_extension(&sys)?.variant() {
        let samples = sampling::off_axis_points(args.seed, 20);
        if let CheckOutcome::Fail { witness, value } = stieltjes_check(&sys.impedance_fn(), &samples, 1e-9, variant)? {
            return Err(Error::Class(format!(
                "impedance fails the sampled {variant:?} check at {witness} (value {value:e})"
            ))
            .into());
        }
    }
    report.seed = Some(args.seed);
    let text = serde_json::to_string_pretty(&report).map_err(|e| Error::Consistency(e.to_string()))?;
    Ok(text + "\n")
}

fn run_scan(args: &ScanArgs) -> Result<String, Failure> {
    let weyl = weyl_for(&args.potential)?;
    let variant = match args.branch {
        Branch::Stieltjes => Variant::Stieltjes,
        Branch::Inverse => Variant::InverseStieltjes,
    };
    let m0 = weyl.m_at_neg_zero();
    let grid: Vec<f64> = args.grid.0.iter().copied().filter(|&mu| in_branch_domain(args.h, m0, variant, mu)).collect();
    let dropped = args.grid.0.len() - grid.len();
    if grid.is_empty() {
        return Err(Error::Input(format!("no grid point lies in the {variant:?} branch of the mu-axis")).into());
    }
    let scan = scan_mu(args.h, &weyl, variant, &grid, args.mu_star)?;
    let mut out = String::new();
    match args.format {
        Format::Csv => {
            out.push_str("mu,class,tan_a1,tan_a2,f_mu,flags\n");
            for r in &scan.rows {
                let flags: Vec<&str> = r.flags.iter().map(|f| f.name()).collect();
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    num(r.mu),
                    r.class_label.name(),
                    num(r.tan_a1),
                    num(r.tan_a2),
                    num(r.f_mu),
                    flags.join(";")
                )
                .unwrap();
            }
            match &scan.summary {
                Some(s) => writeln!(
                    out,
                    "# summary: mu_star={},tan_beta={},class_beta={},direction={},bound_holds={},dropped={dropped}",
                    num(s.mu_star),
                    num(s.tan_beta),
                    num(s.class_beta),
                    serde_json::to_value(s.direction).unwrap().as_str().unwrap(),
                    s.bound_holds
                )
                .unwrap(),
                None => writeln!(out, "# summary: no finite f(mu) on the grid,dropped={dropped}").unwrap(),
            }
        }
        Format::Json => {
            let mut v = serde_json::to_value(&scan).map_err(|e| Error::Consistency(e.to_string()))?;
            v["dropped"] = json!(dropped);
            out = serde_json::to_string_pretty(&v).unwrap() + "\n";
        }
    }
    Ok(out)
}

fn run_weyl(args: &WeylArgs) -> Result<String, Failure> {
    let weyl = weyl_for(&args.potential)?;
    let points = args.points.resolve()?;
    let values = points.iter().map(|&l| weyl.eval(l).map(|m| (l, m))).collect::<Result<Vec<_>, _>>()?;
    let m0 = weyl.m_at_neg_zero();
    let mut out = String::new();
    match args.format {
        Format::Csv => {
            out.push_str("re_lambda,im_lambda,re_m,im_m\n");
            for (l, m) in values {
                writeln!(out, "{},{},{},{}", num(l.re), num(l.im), num(m.re), num(m.im)).unwrap();
            }
            writeln!(out, "# m(-0)={}", num(m0)).unwrap();
        }
        Format::Json => {
            let items: Vec<Value> =
                values.into_iter().map(|(l, m)| json!({"lambda": [l.re, l.im], "m": [m.re, m.im]})).collect();
            let v = json!({"potential": weyl.description(), "m_neg_zero": json_num(m0), "values": items});
            out = serde_json::to_string_pretty(&v).unwrap() + "\n";
        }
    }
    Ok(out)
}

fn run_verify(args: &VerifyArgs) -> Result<String, Failure> {
    let opts = VerifyOptions { seed: args.seed, flip_sqrt_branch: args.flip_sqrt_branch };
    let results = match args.example.or(args.criterion) {
        Some(id) => vec![verify::run_criterion(id, &opts)?],
        None => verify::run_all(&opts),
    };
    let mut out = String::new();
    for r in &results {
        writeln!(out, "{r}").unwrap();
    }
    if results.iter().all(|r| r.passed) {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(a) => run_eval(a),
        Command::Classify(a) => run_classify(a),
        Command::ScanMu(a) => run_scan(a),
        Command::Weyl(a) => run_weyl(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e @ Error::NotAccretive { .. })) => {
            eprintln!("lsys: error: {e}; accretivity of T_h requires Re h >= -m(-0)");
            ExitCode::from(3)
        }
        Err(Failure::Core(e)) => {
            eprintln!("lsys: error: {e}");
            ExitCode::from(2)
        }
    }
}
