use std::fmt::Write as _;
use std::sync::Arc;

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};
use serde_json::{json, Value};

use nilcone::census::{self, CensusInput, CensusReport};
use nilcone::fitting::PresentedModule;
use nilcone::higgs::HiggsField;
use nilcone::json::{JsonCodec, JsonError};
use nilcone::selftest;
use nilcone::sheaves::LineSubsheaf;
use nilcone::springer::StrategyRegistry;

/// Input problems exit with 2, everything else with 1.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<JsonError> for CliError {
    fn from(e: JsonError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn input_error(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// What a subcommand produced: a JSON document or preformatted text.
pub enum Output {
    Json(Value),
    Text(String),
}

pub trait Subcommand: Send + Sync {
    fn name(&self) -> &'static str;

    fn about(&self) -> &'static str;

    /// Whether the command reads a JSON document via `--input`, `--json`
    /// or standard input.
    fn reads_document(&self) -> bool {
        true
    }

    fn configure(&self, cmd: Command) -> Command {
        cmd
    }

    fn run(&self, args: &ArgMatches, doc: Option<&Value>) -> Result<Output, CliError>;
}

fn doc(doc: Option<&Value>) -> &Value {
    doc.expect("document commands always receive input")
}

fn higgs(doc: Option<&Value>) -> Result<HiggsField, CliError> {
    Ok(HiggsField::from_json(self::doc(doc))?)
}

fn line(doc: Option<&Value>) -> Result<LineSubsheaf, CliError> {
    Ok(LineSubsheaf::from_json(self::doc(doc))?)
}

fn int_arg(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name)
        .long(name)
        .help(help)
        .value_parser(value_parser!(i64))
        .allow_negative_numbers(true)
}

fn range_arg(name: &'static str, help: &'static str) -> Arg {
    Arg::new(name)
        .long(name)
        .help(help)
        .value_name("A:B")
        .allow_hyphen_values(true)
}

/// Inclusive `A:B`.
fn parse_range(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Input(format!("range {text:?} is not of the form A:B"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a = a.trim().parse().map_err(|_| bad())?;
    let b = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(CliError::Input(format!("range {text:?} is empty")));
    }
    Ok((a, b))
}

struct Defect;

impl Subcommand for Defect {
    fn name(&self) -> &'static str {
        "defect"
    }

    fn about(&self) -> &'static str {
        "Defect divisor of a line subsheaf"
    }

    fn run(&self, _: &ArgMatches, d: Option<&Value>) -> Result<Output, CliError> {
        Ok(Output::Json(line(d)?.defect().to_json()))
    }
}

struct Normalize;

impl Subcommand for Normalize {
    fn name(&self) -> &'static str {
        "normalize"
    }

    fn about(&self) -> &'static str {
        "Saturation of a line subsheaf"
    }

    fn run(&self, _: &ArgMatches, d: Option<&Value>) -> Result<Output, CliError> {
        Ok(Output::Json(line(d)?.normalization().to_json()))
    }
}

struct NilpotentCheck;

impl Subcommand for NilpotentCheck {
    fn name(&self) -> &'static str {
        "nilpotent-check"
    }

    fn about(&self) -> &'static str {
        "Whether a traceless Higgs field squares to zero"
    }

    fn run(&self, _: &ArgMatches, d: Option<&Value>) -> Result<Output, CliError> {
        let phi = higgs(d)?;
        let nilpotent = phi.is_nilpotent();
        if nilpotent != phi.square().is_zero() {
            return Err(CliError::Internal(
                "determinant and composed-square tests disagree".into(),
            ));
        }
        Ok(Output::Json(json!({
            "nilpotent": nilpotent,
            "minus_determinant": phi.minus_determinant().to_json(),
        })))
    }
}

struct CanonicalForm;

impl Subcommand for CanonicalForm {
    fn name(&self) -> &'static str {
        "canonical-form"
    }

    fn about(&self) -> &'static str {
        "Write a nonzero nilpotent as h (st, -s^2; t^2, -st)"
    }

    fn run(&self, _: &ArgMatches, d: Option<&Value>) -> Result<Output, CliError> {
        let c = higgs(d)?.canonical_form().map_err(input_error)?;
        Ok(Output::Json(c.to_json()))
    }
}

struct Kernel;

impl Subcommand for Kernel {
    fn name(&self) -> &'static str {
        "kernel"
    }

    fn about(&self) -> &'static str {
        "Kernel subbundle of a nonzero nilpotent"
    }

    fn run(&self, _: &ArgMatches, d: Option<&Value>) -> Result<Output, CliError> {
        let k = higgs(d)?.kernel_subbundle().map_err(input_error)?;
        Ok(Output::Json(k.to_json()))
    }
}

struct Irregularity;

impl Subcommand for Irregularity {
    fn name(&self) -> &'static str {
        "irregularity"
    }

    fn about(&self) -> &'static str {
        "Irregularity divisor of a nonzero nilpotent"
    }

    fn run(&self, _: &ArgMatches, d: Option<&Value>) -> Result<Output, CliError> {
        let phi = higgs(d)?;
        let irr = phi.irregularity().map_err(input_error)?;
        let regular = nilcone::springer::is_globally_regular(&phi).map_err(input_error)?;
        Ok(Output::Json(json!({
            "divisor": irr.to_json(),
            "globally_regular": regular,
        })))
    }
}

struct Fiber {
    strategies: StrategyRegistry,
}

impl Subcommand for Fiber {
    fn name(&self) -> &'static str {
        "fiber"
    }

    fn about(&self) -> &'static str {
        "Springer fiber over a nilpotent in one or several components"
    }

    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(int_arg("m", "Component degree").conflicts_with("range"))
            .arg(range_arg("range", "Inclusive range of component degrees"))
            .arg(
                Arg::new("strategy")
                    .long("strategy")
                    .help("Enumeration strategy")
                    .value_parser(self.strategies.names().collect::<Vec<_>>())
                    .default_value("divisor"),
            )
    }

    fn run(&self, args: &ArgMatches, d: Option<&Value>) -> Result<Output, CliError> {
        let phi = higgs(d)?;
        let name = args.get_one::<String>("strategy").expect("has a default");
        let strategy = self.strategies.get(name).map_err(input_error)?;
        let fiber_at = |m| {
            strategy
                .enumerate(&phi, m)
                .map(|f| f.to_json())
                .map_err(input_error)
        };
        if let Some(text) = args.get_one::<String>("range") {
            let (a, b) = parse_range(text)?;
            let fibers = (a..=b).map(fiber_at).collect::<Result<Vec<_>, _>>()?;
            return Ok(Output::Json(json!({ "fibers": fibers })));
        }
        let m = match args.get_one::<i64>("m") {
            Some(&m) => m,
            None => phi.canonical_form().map_err(input_error)?.k,
        };
        Ok(Output::Json(fiber_at(m)?))
    }
}

struct QuasiMap;

impl Subcommand for QuasiMap {
    fn name(&self) -> &'static str {
        "quasimap"
    }

    fn about(&self) -> &'static str {
        "Classify a column O(-n) -> O + O as a map or a quasi-map"
    }

    fn run(&self, _: &ArgMatches, d: Option<&Value>) -> Result<Output, CliError> {
        let class = line(d)?.quasimap_classify().map_err(input_error)?;
        Ok(Output::Json(class.to_json()))
    }
}

struct Fitting;

impl Subcommand for Fitting {
    fn name(&self) -> &'static str {
        "fitting"
    }

    fn about(&self) -> &'static str {
        "Fitting ideals and Fitting rank of a presented Q[t]-module"
    }

    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(
            Arg::new("h")
                .long("h")
                .help("Index of a single Fitting ideal")
                .value_parser(value_parser!(usize)),
        )
    }

    fn run(&self, args: &ArgMatches, d: Option<&Value>) -> Result<Output, CliError> {
        let m = PresentedModule::from_json(doc(d))?;
        if let Some(&h) = args.get_one::<usize>("h") {
            return Ok(Output::Json(m.fitting_ideal(h).to_json()));
        }
        let ideals: Vec<Value> = (0..=m.target_rank())
            .map(|h| m.fitting_ideal(h).to_json())
            .collect();
        Ok(Output::Json(json!({
            "ideals": ideals,
            "rank": m.fitting_rank().to_json(),
        })))
    }
}

struct Census;

impl Census {
    fn table(report: &CensusReport) -> String {
        let fam = &report.component_families;
        let mut out = String::new();
        let _ = writeln!(out, "g = {}, degL = {}, regime {:?}", report.g, report.deg_l, report.regime);
        let _ = writeln!(out, "dimension {}", report.dimension);
        let _ = writeln!(out, "{:<14} {:>8} {:>12}", "family", "degree", "components");
        let _ = writeln!(
            out,
            "{:<14} {:>8} {:>12}",
            "square-root", fam.square_root_degree, fam.square_root_count
        );
        let _ = writeln!(
            out,
            "{:<14} {:>8} {:>12}",
            "integer",
            format!("> {}", fam.integer_family.exclusive_lower_bound),
            "1 each"
        );
        if let Some(dim) = report.zero_section_dimension {
            let _ = writeln!(out, "{:<14} {:>8} {:>12}   dim {}", "zero-section", "-", 1, dim);
        }
        if !report.components.is_empty() {
            let _ = writeln!(out);
            let _ = writeln!(out, "{:>6} {:>6} {:>8} {:>6} {:>6}", "d", "count", "dim BunB", "rank", "dim");
            let opt = |x: Option<i64>| x.map_or("-".to_string(), |v| v.to_string());
            for c in &report.components {
                let _ = writeln!(
                    out,
                    "{:>6} {:>6} {:>8} {:>6} {:>6}",
                    c.d,
                    c.count,
                    c.bun_b_dimension,
                    opt(c.bundle_rank),
                    opt(c.dimension)
                );
            }
        }
        out
    }
}

impl Subcommand for Census {
    fn name(&self) -> &'static str {
        "census"
    }

    fn about(&self) -> &'static str {
        "Components and dimension of the nilpotent cone"
    }

    fn reads_document(&self) -> bool {
        false
    }

    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(
            Arg::new("g")
                .long("g")
                .help("Genus")
                .required(true)
                .value_parser(value_parser!(u32)),
        )
        .arg(int_arg("degL", "Degree of the twisting line bundle").required(true))
        .arg(range_arg("d-range", "Inclusive range of components to tabulate"))
        .arg(
            Arg::new("table")
                .long("table")
                .help("Print a text table instead of JSON")
                .action(ArgAction::SetTrue),
        )
    }

    fn run(&self, args: &ArgMatches, _: Option<&Value>) -> Result<Output, CliError> {
        let mut input = CensusInput::new(
            *args.get_one::<u32>("g").expect("required"),
            *args.get_one::<i64>("degL").expect("required"),
        );
        if let Some(text) = args.get_one::<String>("d-range") {
            let (a, b) = parse_range(text)?;
            input = input.with_range(a, b);
        }
        let report = census::nilcone_census(&input).map_err(input_error)?;
        if args.get_flag("table") {
            return Ok(Output::Text(Self::table(&report)));
        }
        serde_json::to_value(&report)
            .map(Output::Json)
            .map_err(|e| CliError::Internal(e.to_string()))
    }
}

struct StableCensus;

impl Subcommand for StableCensus {
    fn name(&self) -> &'static str {
        "stable-census"
    }

    fn about(&self) -> &'static str {
        "Number of irreducible components of the stable locus (g >= 2)"
    }

    fn reads_document(&self) -> bool {
        false
    }

    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(
            Arg::new("g")
                .long("g")
                .help("Genus")
                .required(true)
                .value_parser(value_parser!(u32)),
        )
        .arg(int_arg("degL", "Degree of the twisting line bundle").required(true))
    }

    fn run(&self, args: &ArgMatches, _: Option<&Value>) -> Result<Output, CliError> {
        let g = *args.get_one::<u32>("g").expect("required");
        let deg_l = *args.get_one::<i64>("degL").expect("required");
        let count = census::stable_census(g, deg_l).map_err(input_error)?;
        let regime = census::regime(g, deg_l).map_err(input_error)?;
        Ok(Output::Json(json!({
            "g": g,
            "degL": deg_l,
            "regime": regime,
            "components": count,
        })))
    }
}

struct SelfTest;

impl Subcommand for SelfTest {
    fn name(&self) -> &'static str {
        "selftest"
    }

    fn about(&self) -> &'static str {
        "Run the bundled invariant suite"
    }

    fn reads_document(&self) -> bool {
        false
    }

    fn configure(&self, cmd: Command) -> Command {
        cmd.arg(
            Arg::new("seed")
                .long("seed")
                .help("Corpus seed")
                .value_parser(value_parser!(u64))
                .default_value("0"),
        )
    }

    fn run(&self, args: &ArgMatches, _: Option<&Value>) -> Result<Output, CliError> {
        let seed = *args.get_one::<u64>("seed").expect("has a default");
        let reports = selftest::run_all(&selftest::default_checks(), seed);
        for r in &reports {
            eprintln!(
                "{} {} ({} cases)",
                if r.passed() { "PASS" } else { "FAIL" },
                r.name,
                r.cases
            );
        }
        let passed = reports.iter().all(|r| r.passed());
        let doc = json!({ "seed": seed, "passed": passed, "checks": reports });
        if passed {
            Ok(Output::Json(doc))
        } else {
            println!("{}", nilcone::json::render(&doc));
            Err(CliError::Internal("selftest failures".into()))
        }
    }
}

pub fn registry() -> Vec<Arc<dyn Subcommand>> {
    vec![
        Arc::new(Defect),
        Arc::new(Normalize),
        Arc::new(NilpotentCheck),
        Arc::new(CanonicalForm),
        Arc::new(Kernel),
        Arc::new(Irregularity),
        Arc::new(Fiber {
            strategies: StrategyRegistry::default(),
        }),
        Arc::new(QuasiMap),
        Arc::new(Fitting),
        Arc::new(Census),
        Arc::new(StableCensus),
        Arc::new(SelfTest),
    ]
}
