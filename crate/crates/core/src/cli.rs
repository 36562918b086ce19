//! The `weierfm` command line.
//!
//! [`run`] parses arguments and renders output without touching the process,
//! so tests can drive it directly. `--json` switches every command to a
//! single JSON document on stdout; errors then become
//! `{"error": {"code": …, "message": …}}`.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::duality::{duality_decision, engine_conclusion, Decision, EngineOutcome, SheafScenario};
use crate::error::{Error, Result};
use crate::fm::{
    char_fiber_degree, commutativity_sides, dual_char, format_divisor, slope, transform_char, CommutativitySides,
    KernelChoice, LineBundleX, Polarization, TransformResult, TruncatedChar, WitType,
};
use crate::presets::Preset;
use crate::rational::{parse_vector, Rational};
use crate::ring::{
    fiber_degree, pullback, pushforward, x_integrate, DivisorClassX, LatticeVector, SurfaceClass, SurfaceModel,
    ThreefoldClass,
};
use crate::stability::{
    certify, enumerate_candidates, transform_stability, Bounds, DestabilizerCandidate, Enumeration, StabilityReport,
    TransformStability,
};

#[derive(Parser, Debug)]
#[command(name = "weierfm", version, about = "Exact Fourier-Mukai calculus on Weierstrass elliptic threefolds")]
struct Cli {
    /// Emit JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Character, WIT type and local freeness of the transform of a line bundle.
    Transform(LineArgs),
    /// Slope of the transform of a line bundle, or of a given character.
    Slope(SlopeArgs),
    /// Character of the derived dual of a transform or of a given character.
    Dual(DualArgs),
    /// Character-level check that duality commutes with the transform.
    Commute(CommuteArgs),
    /// Spectral-sequence comparison for a WIT sheaf, against the closed-form table.
    SsDuality(ScenarioArgs),
    /// Certifies one destabilizer candidate for the transform of O_X(-nΘ).
    Certify(CertifyArgs),
    /// Exhaustive destabilizer search for the transform of O_X(mΘ), m < 0.
    Scan(ScanArgs),
    /// Full stability check for the transform of any line bundle with m ≠ 0.
    Stability(StabilityArgs),
    /// Intersection-ring operations on JSON-encoded classes.
    Ring(RingArgs),
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Built-in base surface.
    #[arg(long, value_enum, conflicts_with = "model_file")]
    preset: Option<PresetArg>,
    /// Surface model as a JSON file.
    #[arg(long)]
    model_file: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
enum PresetArg {
    K3Quartic,
    Enriques,
    GeneralDemo,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::K3Quartic => Preset::K3Quartic,
            PresetArg::Enriques => Preset::Enriques,
            PresetArg::GeneralDemo => Preset::GeneralDemo,
        }
    }
}

impl ModelArgs {
    /// The model, and the preset's ample class if there is one.
    fn load(&self) -> Result<(SurfaceModel, Option<LatticeVector>)> {
        match (&self.preset, &self.model_file) {
            (_, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
                let model = serde_json::from_str(&text)
                    .map_err(|e| Error::InvalidModel(format!("{}: {e}", path.display())))?;
                Ok((model, None))
            }
            (preset, None) => {
                let p: Preset = preset.map(Into::into).unwrap_or(Preset::K3Quartic);
                Ok((p.model(), Some(p.default_ample())))
            }
        }
    }
}

fn vector(s: &str) -> std::result::Result<LatticeVector, Error> {
    parse_vector(s)
}

#[derive(Args, Debug)]
struct BundleArgs {
    /// Fiber degree m of O_X(mΘ) ⊗ p*N.
    #[arg(short = 'm', allow_negative_numbers = true)]
    m: i64,
    /// c1(N) as comma-separated rationals; zero if omitted.
    #[arg(long, value_parser = vector, allow_hyphen_values = true)]
    twist: Option<LatticeVector>,
}

impl BundleArgs {
    fn bundle(&self, model: &SurfaceModel) -> Result<LineBundleX> {
        let lb = match &self.twist {
            Some(t) => LineBundleX::new(self.m, t.clone()),
            None => LineBundleX::untwisted(self.m, model.picard_rank()),
        };
        model.check_vector(&lb.twist)?;
        Ok(lb)
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KernelArg {
    Standard,
    Untwisted,
}

impl From<KernelArg> for KernelChoice {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Standard => KernelChoice::Standard,
            KernelArg::Untwisted => KernelChoice::Untwisted,
        }
    }
}

#[derive(Args, Debug)]
struct LineArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    bundle: BundleArgs,
    #[arg(long, value_enum, default_value = "standard")]
    kernel: KernelArg,
}

#[derive(Args, Debug)]
struct PolArgs {
    /// Coefficient of Θ in ω = tΘ + s·p*H_S.
    #[arg(short = 't', default_value = "1")]
    t: Rational,
    #[arg(short = 's', default_value = "1")]
    s: Rational,
    /// H_S as comma-separated rationals; the preset's ample class if omitted.
    #[arg(long, value_parser = vector, allow_hyphen_values = true)]
    h: Option<LatticeVector>,
}

impl PolArgs {
    fn polarization(&self, model: &SurfaceModel, default_h: Option<LatticeVector>) -> Result<Polarization> {
        let h = match (&self.h, default_h) {
            (Some(h), _) => h.clone(),
            (None, Some(h)) => h,
            (None, None) => return Err(Error::InvalidInput("--h is required with --model-file".into())),
        };
        model.check_vector(&h)?;
        Polarization::new(model, self.t.clone(), self.s.clone(), h)
    }
}

#[derive(Args, Debug)]
struct CharArgs {
    /// ch0 of an explicit character (with --ch1 instead of -m).
    #[arg(long, requires = "ch1", conflicts_with = "m", allow_hyphen_values = true)]
    ch0: Option<Rational>,
    /// ch1 = aΘ + p*δ as "a;δ1,δ2,…".
    #[arg(long, requires = "ch0", allow_hyphen_values = true)]
    ch1: Option<String>,
    #[arg(short = 'm', allow_negative_numbers = true, required_unless_present = "ch0")]
    m: Option<i64>,
    #[arg(long, value_parser = vector, allow_hyphen_values = true, requires = "m")]
    twist: Option<LatticeVector>,
}

impl CharArgs {
    /// The character and, when it is a transform, the transform result.
    fn character(&self, model: &SurfaceModel) -> Result<(TruncatedChar, Option<TransformResult>)> {
        if let (Some(ch0), Some(ch1)) = (&self.ch0, &self.ch1) {
            let (a, delta) = ch1
                .split_once(';')
                .ok_or_else(|| Error::InvalidInput(format!("--ch1 {ch1:?} must look like \"a;δ1,δ2\"")))?;
            let d = DivisorClassX::new(a.parse()?, parse_vector(delta)?);
            model.check_vector(&d.delta)?;
            return Ok((TruncatedChar::new(ch0.clone(), d), None));
        }
        let m = self.m.expect("clap requires -m without --ch0");
        let bundle = BundleArgs { m, twist: self.twist.clone() }.bundle(model)?;
        let res = transform_char(model, &bundle, KernelChoice::Standard)?;
        Ok((res.character.clone(), Some(res)))
    }
}

#[derive(Args, Debug)]
struct SlopeArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    char: CharArgs,
    #[command(flatten)]
    pol: PolArgs,
}

#[derive(Args, Debug)]
struct DualArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    char: CharArgs,
}

#[derive(Args, Debug)]
struct CommuteArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    bundle: BundleArgs,
    /// Kernel to check; both when omitted.
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    /// dim X.
    #[arg(short = 'n', default_value_t = 3)]
    n: u32,
    /// Codimension of E.
    #[arg(short = 'c')]
    c: u32,
    /// 0 or 1.
    #[arg(long)]
    wit: WitType,
    /// dim Φ^i E - dim E for the surviving transform.
    #[arg(long, allow_negative_numbers = true, allow_hyphen_values = true)]
    dim_shift: i32,
    /// Print both E_2 pages.
    #[arg(long)]
    pages: bool,
}

#[derive(Args, Debug)]
struct CandidateArgs {
    #[arg(short = 'r')]
    r: Option<i64>,
    #[arg(short = 'a', allow_hyphen_values = true)]
    a: Option<Rational>,
    #[arg(long, value_parser = vector, allow_hyphen_values = true)]
    delta: Option<LatticeVector>,
    #[arg(short = 'e', allow_negative_numbers = true)]
    e: Option<i64>,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Rank of the transform O_X(-nΘ).
    #[arg(short = 'n')]
    n: u32,
    #[command(flatten)]
    pol: PolArgs,
    #[command(flatten)]
    cand: CandidateArgs,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long, default_value = "6")]
    a_max: Rational,
    #[arg(long, default_value = "6")]
    delta_max: Rational,
    /// Grid step is 1/grid-den.
    #[arg(long, default_value_t = 2)]
    grid_den: u32,
}

impl BoundArgs {
    fn bounds(&self) -> Bounds {
        Bounds { a_max: self.a_max.clone(), delta_max: self.delta_max.clone(), grid_den: self.grid_den }
    }
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Negative fiber degree; the transform has rank -m.
    #[arg(short = 'm', allow_negative_numbers = true)]
    m: i64,
    #[command(flatten)]
    pol: PolArgs,
    #[command(flatten)]
    bounds: BoundArgs,
    /// Parallel chunks; the output does not depend on it.
    #[arg(long)]
    shards: Option<usize>,
    /// Include every per-candidate report in the JSON output.
    #[arg(long)]
    reports: bool,
}

#[derive(Args, Debug)]
struct StabilityArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    bundle: BundleArgs,
    #[command(flatten)]
    pol: PolArgs,
    #[command(flatten)]
    bounds: BoundArgs,
}

#[derive(Args, Debug)]
struct RingArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(value_enum)]
    op: RingOp,
    /// First operand as JSON.
    #[arg(long, allow_hyphen_values = true)]
    u: String,
    /// Second operand as JSON, for binary operations.
    #[arg(long, allow_hyphen_values = true)]
    v: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RingOp {
    /// Product of two threefold classes.
    Mul,
    /// Product of two surface classes.
    SurfaceMul,
    /// Degree of a threefold class.
    Integrate,
    Pullback,
    Pushforward,
    /// Chern character of O_X(D) for a divisor class.
    Exp,
    FiberDegree,
    /// Intersection pairing of two lattice vectors.
    Pair,
}

/// Exit code, standard output and standard error of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line given by `args`, including the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let json_requested = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new() },
                _ => failure(&Error::InvalidInput(e.kind().to_string()), text, json_requested),
            };
        }
    };
    match dispatch(&cli) {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(e) => failure(&e, format!("error: {e}\n"), cli.json),
    }
}

#[derive(Serialize, Deserialize)]
struct ErrorBody {
    code: i32,
    message: String,
}

#[derive(Serialize, Deserialize)]
struct ErrorDoc {
    error: ErrorBody,
}

fn failure(e: &Error, stderr: String, json: bool) -> Outcome {
    let code = e.exit_code();
    let stdout = if json {
        to_json(&ErrorDoc { error: ErrorBody { code, message: e.to_string() } })
    } else {
        String::new()
    };
    Outcome { code, stdout, stderr }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output types serialize");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli) -> Result<String> {
    let json = cli.json;
    match &cli.command {
        Command::Transform(a) => cmd_transform(a, json),
        Command::Slope(a) => cmd_slope(a, json),
        Command::Dual(a) => cmd_dual(a, json),
        Command::Commute(a) => cmd_commute(a, json),
        Command::SsDuality(a) => cmd_ss_duality(a, json),
        Command::Certify(a) => cmd_certify(a, json),
        Command::Scan(a) => cmd_scan(a, json),
        Command::Stability(a) => cmd_stability(a, json),
        Command::Ring(a) => cmd_ring(a, json),
    }
}

/// Output of `transform`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformOutput {
    pub line_bundle: LineBundleX,
    pub kernel: KernelChoice,
    pub result: TransformResult,
    pub fiber_degree: Rational,
}

fn cmd_transform(a: &LineArgs, json: bool) -> Result<String> {
    let (model, _) = a.model.load()?;
    let lb = a.bundle.bundle(&model)?;
    let kernel = a.kernel.into();
    let result = transform_char(&model, &lb, kernel)?;
    let out = TransformOutput { fiber_degree: char_fiber_degree(&result.character), line_bundle: lb, kernel, result };
    if json {
        return Ok(to_json(&out));
    }
    let r = &out.result;
    let mut s = String::new();
    writeln!(s, "ch0           {}", r.character.ch0).unwrap();
    writeln!(s, "ch1           {}", format_divisor(&r.character.ch1)).unwrap();
    writeln!(s, "wit           {}", r.wit).unwrap();
    writeln!(s, "locally_free  {}", r.locally_free).unwrap();
    Ok(s)
}

/// Output of `slope`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeOutput {
    pub character: TruncatedChar,
    pub polarization: Polarization,
    pub slope: Rational,
}

fn cmd_slope(a: &SlopeArgs, json: bool) -> Result<String> {
    let (model, default_h) = a.model.load()?;
    let pol = a.pol.polarization(&model, default_h)?;
    let (character, _) = a.char.character(&model)?;
    let mu = slope(&model, &character, &pol)?;
    let out = SlopeOutput { character, polarization: pol, slope: mu };
    if json {
        return Ok(to_json(&out));
    }
    Ok(format!("character  {}\nslope      {}\n", out.character, out.slope))
}

/// Output of `dual`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualOutput {
    pub character: TruncatedChar,
    pub dual: TruncatedChar,
}

fn cmd_dual(a: &DualArgs, json: bool) -> Result<String> {
    let (model, _) = a.model.load()?;
    let (character, _) = a.char.character(&model)?;
    let out = DualOutput { dual: dual_char(&character), character };
    if json {
        return Ok(to_json(&out));
    }
    Ok(format!("character  {}\ndual       {}\n", out.character, out.dual))
}

/// One kernel's result in `commute`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommuteEntry {
    pub kernel: KernelChoice,
    pub sides: CommutativitySides,
    pub holds: bool,
}

fn cmd_commute(a: &CommuteArgs, json: bool) -> Result<String> {
    let (model, _) = a.model.load()?;
    let lb = a.bundle.bundle(&model)?;
    let kernels: Vec<KernelChoice> = match a.kernel {
        Some(k) => vec![k.into()],
        None => KernelChoice::ALL.to_vec(),
    };
    let entries = kernels
        .into_iter()
        .map(|kernel| {
            let sides = commutativity_sides(&model, &lb, kernel)?;
            Ok(CommuteEntry { kernel, holds: sides.holds(), sides })
        })
        .collect::<Result<Vec<_>>>()?;
    if json {
        return Ok(to_json(&entries));
    }
    let mut s = String::new();
    writeln!(s, "{:<10} {:<40} {:<40} holds", "kernel", "dual of transform", "transform of dual").unwrap();
    for e in &entries {
        writeln!(
            s,
            "{:<10} {:<40} {:<40} {}",
            e.kernel.name(),
            e.sides.dual_of_transform.to_string(),
            e.sides.transform_of_dual.to_string(),
            e.holds
        )
        .unwrap();
    }
    Ok(s)
}

/// Output of `ss-duality`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SsDualityOutput {
    pub decision: Decision,
    pub engine: EngineOutcome,
    pub agree: bool,
}

fn cmd_ss_duality(a: &ScenarioArgs, json: bool) -> Result<String> {
    let sc = SheafScenario::new(a.n, a.c, a.wit, a.dim_shift);
    let decision = duality_decision(&sc)?;
    let engine = engine_conclusion(&sc)?;
    let agree = engine.conclusion.as_ref().is_some_and(|c| c.same_kind(&decision.conclusion));
    if !agree {
        return Err(Error::InvariantBreach(format!(
            "engine and closed form disagree on {sc}: {:?} vs {}",
            engine.conclusion, decision.conclusion
        )));
    }
    let out = SsDualityOutput { decision, engine, agree };
    if json {
        return Ok(to_json(&out));
    }
    let mut s = String::new();
    writeln!(s, "{}", out.decision.conclusion.name()).unwrap();
    writeln!(s, "scenario     {sc}").unwrap();
    writeln!(s, "conclusion   {}", out.decision.conclusion).unwrap();
    let rules: Vec<String> = out.decision.rules.iter().map(ToString::to_string).collect();
    writeln!(s, "rules        {}", rules.join(", ")).unwrap();
    writeln!(
        s,
        "degenerates  left at E_{}, right at E_{}",
        out.engine.left_degeneration_page, out.engine.right_degeneration_page
    )
    .unwrap();
    writeln!(s, "relations").unwrap();
    for rel in &out.engine.comparison.relations {
        writeln!(s, "  {rel}").unwrap();
    }
    if a.pages {
        writeln!(s, "{}", out.engine.comparison.left).unwrap();
        writeln!(s, "{}", out.engine.comparison.right).unwrap();
    }
    Ok(s)
}

fn cmd_certify(a: &CertifyArgs, json: bool) -> Result<String> {
    let (model, default_h) = a.model.load()?;
    let pol = a.pol.polarization(&model, default_h)?;
    let c = &a.cand;
    let cand = match (c.r, &c.a, &c.e) {
        (None, None, None) if c.delta.is_none() => None,
        (Some(r), a_val, e) => Some(DestabilizerCandidate::new(
            r,
            a_val.clone().unwrap_or_else(Rational::zero),
            c.delta.clone().unwrap_or_else(|| vec![Rational::zero(); model.picard_rank()]),
            e.unwrap_or(0),
        )),
        _ => return Err(Error::InvalidInput("a candidate needs -r".into())),
    };
    let report: StabilityReport = certify(&model, a.n, &pol, cand.as_ref())?;
    if json {
        return Ok(to_json(&report));
    }
    Ok(format!("{report}\n"))
}

fn cmd_scan(a: &ScanArgs, json: bool) -> Result<String> {
    let (model, default_h) = a.model.load()?;
    let pol = a.pol.polarization(&model, default_h)?;
    if a.m >= 0 {
        return Err(Error::HypothesisViolation(format!(
            "scan needs a negative fiber degree, got m = {}; use `stability` for m > 0",
            a.m
        )));
    }
    let n = u32::try_from(a.m.unsigned_abs()).map_err(|_| Error::InvalidInput("m is too large".into()))?;
    let mut en: Enumeration = enumerate_candidates(&model, n, &pol, &a.bounds.bounds(), a.shards)?;
    if !a.reports {
        en.reports.clear();
    }
    if json {
        return Ok(to_json(&en));
    }
    Ok(enumeration_table(&en))
}

fn enumeration_table(en: &Enumeration) -> String {
    let mut s = String::new();
    writeln!(s, "rank n                {}", en.n).unwrap();
    writeln!(s, "target slope          {}", en.target_slope).unwrap();
    writeln!(s, "candidates            {}", en.candidate_count).unwrap();
    writeln!(s, "admissible            {}", en.admissible_count).unwrap();
    let max = en.max_admissible_slope.as_ref().map_or("-".to_string(), ToString::to_string);
    writeln!(s, "max admissible slope  {max}").unwrap();
    writeln!(s, "any_violation         {}", en.any_violation).unwrap();
    s
}

fn cmd_stability(a: &StabilityArgs, json: bool) -> Result<String> {
    let (model, default_h) = a.model.load()?;
    let pol = a.pol.polarization(&model, default_h)?;
    let lb = a.bundle.bundle(&model)?;
    let out: TransformStability = transform_stability(&model, &lb, &pol, &a.bounds.bounds())?;
    if json {
        return Ok(to_json(&out));
    }
    let mut s = String::new();
    writeln!(s, "transform             {}", out.transform.character).unwrap();
    writeln!(s, "wit                   {}", out.transform.wit).unwrap();
    writeln!(s, "locally_free          {}", out.transform.locally_free).unwrap();
    writeln!(s, "slope                 {}", out.transform_slope).unwrap();
    s.push_str(&enumeration_table(&out.search));
    writeln!(s, "stable                {}", out.stable).unwrap();
    for line in &out.trace {
        writeln!(s, "  {line}").unwrap();
    }
    Ok(s)
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("{what}: {e}")))
}

/// Output of `ring`: the result as a JSON value, tagged with its kind.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum RingValue {
    Rational(Rational),
    SurfaceClass(SurfaceClass),
    ThreefoldClass(ThreefoldClass),
}

fn cmd_ring(a: &RingArgs, json: bool) -> Result<String> {
    let (model, _) = a.model.load()?;
    let second = || a.v.as_deref().ok_or_else(|| Error::InvalidInput("this operation needs --v".into()));
    let value = match a.op {
        RingOp::Mul => {
            let u: ThreefoldClass = parse_json("--u", &a.u)?;
            let v: ThreefoldClass = parse_json("--v", second()?)?;
            RingValue::ThreefoldClass(model.x_mul(&u, &v)?)
        }
        RingOp::SurfaceMul => {
            let x: SurfaceClass = parse_json("--u", &a.u)?;
            let y: SurfaceClass = parse_json("--v", second()?)?;
            RingValue::SurfaceClass(model.surface_mul(&x, &y)?)
        }
        RingOp::Integrate => {
            let u: ThreefoldClass = parse_json("--u", &a.u)?;
            model.check_threefold(&u)?;
            RingValue::Rational(x_integrate(&u))
        }
        RingOp::Pullback => {
            let x: SurfaceClass = parse_json("--u", &a.u)?;
            model.check_surface(&x)?;
            RingValue::ThreefoldClass(pullback(&x))
        }
        RingOp::Pushforward => {
            let u: ThreefoldClass = parse_json("--u", &a.u)?;
            model.check_threefold(&u)?;
            RingValue::SurfaceClass(pushforward(&u))
        }
        RingOp::Exp => {
            let d: DivisorClassX = parse_json("--u", &a.u)?;
            RingValue::ThreefoldClass(model.exp_divisor(&d)?)
        }
        RingOp::FiberDegree => {
            let d: DivisorClassX = parse_json("--u", &a.u)?;
            model.check_vector(&d.delta)?;
            RingValue::Rational(fiber_degree(&d))
        }
        RingOp::Pair => {
            let d: LatticeVector = parse_json("--u", &a.u)?;
            let e: LatticeVector = parse_json("--v", second()?)?;
            RingValue::Rational(model.pair(&d, &e)?)
        }
    };
    if json {
        return Ok(to_json(&value));
    }
    Ok(match value {
        RingValue::Rational(r) => format!("{r}\n"),
        other => to_json(&other),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &str) -> Outcome {
        run(std::iter::once("weierfm").chain(args.split_whitespace()))
    }

    #[test]
    fn transform_table() {
        let out = cli("transform --preset k3_quartic -m 3");
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.contains("ch0           3\n"));
        assert!(out.stdout.contains("ch1           -Θ\n"));
        assert!(out.stdout.contains("WIT0"));
    }

    #[test]
    fn negative_numbers_parse() {
        let out = cli("transform --preset enriques -m -4 --twist -1/2");
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.contains("p*(2)"), "{}", out.stdout);
    }

    #[test]
    fn parse_errors_exit_one() {
        assert_eq!(cli("transform -m 1.5").code, 1);
        assert_eq!(cli("slope -m 2 -t 0.5").code, 1);
        assert_eq!(cli("nonsense").code, 1);
        assert_eq!(cli("transform --preset mars -m 1").code, 1);
        assert_eq!(cli("--help").code, 0);
    }

    #[test]
    fn json_errors_are_documents() {
        let out = cli("scan --preset general_demo -m -2 --json");
        assert_eq!(out.code, 2);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["error"]["code"], 2);
    }

    #[test]
    fn certify_vacuous_and_explicit() {
        let out = cli("certify -n 1");
        assert_eq!(out.code, 0, "{}", out.stderr);
        assert!(out.stdout.contains("Certified"));
        let out = cli("certify -n 3 -r 1 -a 0 -e 1");
        assert!(out.stdout.contains("Inadmissible"));
        assert_eq!(cli("certify -n 3 -a 1").code, 1);
    }

    #[test]
    fn ring_ops() {
        let theta = r#"{"alpha":{"r":"1/1","d":["0/1"],"s":"0/1"},"beta":{"r":"0/1","d":["0/1"],"s":"0/1"}}"#;
        let ph = r#"{"alpha":{"r":"0/1","d":["0/1"],"s":"0/1"},"beta":{"r":"0/1","d":["1/1"],"s":"0/1"}}"#;
        let out = run(["weierfm", "ring", "mul", "--u", theta, "--v", ph]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let out = run(["weierfm", "ring", "pair", "--u", r#"["1/1"]"#, "--v", r#"["1/1"]"#]);
        assert_eq!(out.stdout, "4\n");
        assert_eq!(run(["weierfm", "ring", "mul", "--u", theta]).code, 1);
    }
}
