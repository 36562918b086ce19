//! Slope stability of `Φ(O_X(-nΘ))` and of transforms of line bundles.
//!
//! A proper subsheaf `F` of the rank-`n` transform sits in
//! `0 → F'' → F → F' → 0`, where `F''` lies in the transform of `O_{nΘ}` and
//! `F'` in `O_Θ ⊗ p*ω`. A [`DestabilizerCandidate`] records exactly the data
//! the slope bound uses: `ch1(F'') = -(aΘ + p*δ)` with `aΘ + p*δ` effective,
//! and `ch1(F') = eΘ` with `e ∈ {0, 1}`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::duality::{duality_decision, Conclusion, Decision, SheafScenario};
use crate::error::{Error, Result};
use crate::fm::{dual_char, slope, transform_char, KernelChoice, LineBundleX, Polarization, TransformResult, TruncatedChar, WitType};
use crate::rational::Rational;
use crate::ring::{x_integrate, DivisorClassX, LatticeVector, SurfaceModel, ThreefoldClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DestabilizerCandidate {
    /// `rank F`.
    pub r: i64,
    pub a: Rational,
    pub delta: LatticeVector,
    pub e: i64,
}

impl DestabilizerCandidate {
    pub fn new(r: i64, a: Rational, delta: LatticeVector, e: i64) -> Self {
        DestabilizerCandidate { r, a, delta, e }
    }

    /// `ch1(F'') = -(aΘ + p*δ)`.
    pub fn ch1_sub(&self) -> DivisorClassX {
        -DivisorClassX::new(self.a.clone(), self.delta.clone())
    }

    /// `ch1(F') = eΘ`.
    pub fn ch1_quot(&self) -> DivisorClassX {
        DivisorClassX::new(Rational::from_int(self.e), vec![Rational::zero(); self.delta.len()])
    }

    pub fn ch1(&self) -> DivisorClassX {
        self.ch1_sub() + self.ch1_quot()
    }

    /// `ch1(F)·f = e - a`.
    pub fn fiber_degree(&self) -> Rational {
        Rational::from_int(self.e) - &self.a
    }
}

impl fmt::Display for DestabilizerCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let delta: Vec<String> = self.delta.iter().map(|x| x.to_string()).collect();
        write!(f, "r={} a={} delta=({}) e={}", self.r, self.a, delta.join(", "), self.e)
    }
}

/// The part of effectivity of `aΘ + p*δ` that the slope bound uses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectivityProxy {
    pub a_nonneg: bool,
    /// `δ·H_S`.
    pub pairing: Rational,
}

impl EffectivityProxy {
    pub fn of(model: &SurfaceModel, cand: &DestabilizerCandidate, pol: &Polarization) -> Result<Self> {
        Ok(EffectivityProxy { a_nonneg: !cand.a.is_negative(), pairing: model.pair(&cand.delta, &pol.h)? })
    }

    pub fn admissible(&self) -> bool {
        self.a_nonneg && !self.pairing.is_negative()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Certified,
    Violation,
    Inadmissible,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One term of `r·μ(F) = ∫ch1(F)·ω²`, with the bound it must satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub name: String,
    pub value: Rational,
    /// `"<= 0"` or `"= 0"`.
    pub bound: String,
    pub holds: bool,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.holds { "ok" } else { "FAILS" };
        write!(f, "{:<18} {:>8}  {:<5} {mark}", self.name, self.value.to_string(), self.bound)
    }
}

pub const FIBER_DEGREE_STEP: &str = "fiber-degree step";
pub const EFFECTIVITY_STEP: &str = "effectivity step";
pub const SECTION_STEP: &str = "section step";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub n: u32,
    pub candidate: Option<DestabilizerCandidate>,
    pub target_slope: Rational,
    pub candidate_slope: Option<Rational>,
    pub verdict: Verdict,
    pub trace: Vec<TraceStep>,
    /// Why the candidate is inadmissible; empty otherwise.
    pub reasons: Vec<String>,
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.candidate {
            Some(c) => writeln!(f, "candidate        {c}")?,
            None => writeln!(f, "candidate        none (empty rank window)")?,
        }
        writeln!(f, "target slope     {}", self.target_slope)?;
        if let Some(s) = &self.candidate_slope {
            writeln!(f, "candidate slope  {s}")?;
        }
        for step in &self.trace {
            writeln!(f, "  {step}")?;
        }
        for r in &self.reasons {
            writeln!(f, "  inadmissible: {r}")?;
        }
        write!(f, "verdict          {}", self.verdict)
    }
}

fn require_num_trivial(model: &SurfaceModel) -> Result<()> {
    if !model.k_trivial() {
        return Err(Error::HypothesisViolation(
            "stability results need a numerically trivial canonical class on S".into(),
        ));
    }
    Ok(())
}

/// `μ_ω(Φ(O_X(-nΘ))) = s²H_S²/n`, computed through the ring.
pub fn target_slope(model: &SurfaceModel, n: u32, pol: &Polarization) -> Result<Rational> {
    require_num_trivial(model)?;
    if n == 0 {
        return Err(Error::InvalidInput("the transform rank n must be at least 1".into()));
    }
    let lb = LineBundleX::untwisted(-(n as i64), model.picard_rank());
    let v = transform_char(model, &lb, KernelChoice::Standard)?.character;
    let mu = slope(model, &v, pol)?;
    if !mu.is_positive() {
        return Err(Error::InvariantBreach(format!("target slope {mu} is not positive")));
    }
    Ok(mu)
}

fn integrate_against(model: &SurfaceModel, d: &DivisorClassX, w: &ThreefoldClass) -> Result<Rational> {
    Ok(x_integrate(&model.x_mul(&d.to_class(), w)?))
}

/// `∫ch1(F)·ω²` from the expansion of `ω²` in `Θ², Θ·p*H_S, p*H_S²`:
/// `x(t²K² + 2ts K·H + s²H²) + t²(δ'·K) + 2ts(δ'·H)` for `ch1 = xΘ + p*δ'`.
fn closed_form_degree(model: &SurfaceModel, cand: &DestabilizerCandidate, pol: &Polarization) -> Result<Rational> {
    let k = model.canonical();
    let (t, s, h) = (&pol.t, &pol.s, &pol.h);
    let x = cand.fiber_degree();
    let d: LatticeVector = cand.delta.iter().map(|v| -v).collect();
    let two = Rational::from_int(2);
    let kk = model.pair(k, k)?;
    let kh = model.pair(k, h)?;
    let hh = model.pair(h, h)?;
    let dk = model.pair(&d, k)?;
    let dh = model.pair(&d, h)?;
    let ts2 = &two * t * s;
    Ok(&x * (t * t * &kk + &ts2 * &kh + s * s * &hh) + t * t * &dk + &ts2 * &dh)
}

/// `μ_ω(F) = ∫ch1(F)·ω² / r`, computed by ring integration and checked
/// against the closed form.
pub fn candidate_slope(model: &SurfaceModel, cand: &DestabilizerCandidate, pol: &Polarization) -> Result<Rational> {
    Expansion::new(model, pol)?.slope(model, cand, pol)
}

/// Classes of `ω` reused across candidates.
struct Expansion {
    omega_sq: ThreefoldClass,
    /// `t²Θ² + 2tsΘ·p*H_S`.
    theta_part: ThreefoldClass,
    /// `s²p*H_S²`.
    base_part: ThreefoldClass,
}

impl Expansion {
    fn new(model: &SurfaceModel, pol: &Polarization) -> Result<Self> {
        let theta = ThreefoldClass::theta(model.picard_rank());
        let ph = DivisorClassX::pullback(pol.h.clone()).to_class();
        let t2 = &pol.t * &pol.t;
        let ts2 = Rational::from_int(2) * &pol.t * &pol.s;
        let s2 = &pol.s * &pol.s;
        let theta_part = model.x_mul(&theta, &theta)?.scale(&t2) + model.x_mul(&theta, &ph)?.scale(&ts2);
        let base_part = model.x_mul(&ph, &ph)?.scale(&s2);
        Ok(Expansion { omega_sq: pol.square(model)?, theta_part, base_part })
    }

    fn slope(&self, model: &SurfaceModel, cand: &DestabilizerCandidate, pol: &Polarization) -> Result<Rational> {
        model.check_vector(&cand.delta)?;
        if cand.r <= 0 {
            return Err(Error::UndefinedSlope);
        }
        let ring = integrate_against(model, &cand.ch1(), &self.omega_sq)?;
        let closed = closed_form_degree(model, cand, pol)?;
        if ring != closed {
            return Err(Error::InvariantBreach(format!(
                "ring integration gives {ring} but the closed form gives {closed} for {cand}"
            )));
        }
        Ok(ring / Rational::from_int(cand.r))
    }

    fn trace(&self, model: &SurfaceModel, cand: &DestabilizerCandidate) -> Result<Vec<TraceStep>> {
        let fiber = integrate_against(model, &cand.ch1(), &self.base_part)?;
        let effective = integrate_against(model, &cand.ch1_sub(), &self.theta_part)?;
        let section = integrate_against(model, &cand.ch1_quot(), &self.theta_part)?;
        let le_zero =
            |name: &str, v: Rational| TraceStep { name: name.into(), holds: !v.is_positive(), value: v, bound: "<= 0".into() };
        Ok(vec![
            le_zero(FIBER_DEGREE_STEP, fiber),
            le_zero(EFFECTIVITY_STEP, effective),
            TraceStep { name: SECTION_STEP.into(), holds: section.is_zero(), value: section, bound: "= 0".into() },
        ])
    }
}

/// The three terms of `∫ch1(F)·ω²`, in order.
pub fn slope_trace(model: &SurfaceModel, cand: &DestabilizerCandidate, pol: &Polarization) -> Result<Vec<TraceStep>> {
    model.check_vector(&cand.delta)?;
    Expansion::new(model, pol)?.trace(model, cand)
}

fn inadmissibility(
    model: &SurfaceModel,
    n: u32,
    cand: &DestabilizerCandidate,
    pol: &Polarization,
) -> Result<Vec<String>> {
    let mut reasons = Vec::new();
    if cand.r <= 0 || cand.r >= n as i64 {
        reasons.push(format!("rank {} is outside the window 0 < r < {n}", cand.r));
    }
    if cand.e != 0 && cand.e != 1 {
        reasons.push(format!("ch1(F') must be 0 or Θ, got e = {}", cand.e));
    }
    let proxy = EffectivityProxy::of(model, cand, pol)?;
    if !proxy.a_nonneg {
        reasons.push(format!("a = {} is negative, so -ch1(F'') is not effective", cand.a));
    }
    if proxy.pairing.is_negative() {
        reasons.push(format!("δ·H_S = {} is negative, so -ch1(F'') is not effective", proxy.pairing));
    }
    let fd = cand.fiber_degree();
    if !fd.is_integer() {
        reasons.push(format!("fiber degree {fd} is not an integer"));
    } else if fd.is_positive() {
        reasons.push(format!("fiber degree {fd} is positive"));
    }
    Ok(reasons)
}

/// Checks one candidate against `μ_ω(F) < μ_ω(Φ(O_X(-nΘ)))`.
///
/// With no candidate the rank window must be empty (`n = 1`), and the
/// report is vacuously certified.
pub fn certify(
    model: &SurfaceModel,
    n: u32,
    pol: &Polarization,
    cand: Option<&DestabilizerCandidate>,
) -> Result<StabilityReport> {
    let target = target_slope(model, n, pol)?;
    let Some(cand) = cand else {
        if n != 1 {
            return Err(Error::InvalidInput(format!("a candidate is required when n = {n} > 1")));
        }
        return Ok(StabilityReport {
            n,
            candidate: None,
            target_slope: target,
            candidate_slope: None,
            verdict: Verdict::Certified,
            trace: Vec::new(),
            reasons: Vec::new(),
        });
    };
    check_one(model, n, pol, &Expansion::new(model, pol)?, &target, cand)
}

fn check_one(
    model: &SurfaceModel,
    n: u32,
    pol: &Polarization,
    expansion: &Expansion,
    target: &Rational,
    cand: &DestabilizerCandidate,
) -> Result<StabilityReport> {
    model.check_vector(&cand.delta)?;
    let reasons = inadmissibility(model, n, cand, pol)?;
    let (candidate_slope, trace) = if cand.r > 0 {
        let mu = expansion.slope(model, cand, pol)?;
        let trace = expansion.trace(model, cand)?;
        let total = trace.iter().map(|s| s.value.clone()).sum::<Rational>();
        if total != &mu * Rational::from_int(cand.r) {
            return Err(Error::InvariantBreach(format!("trace sums to {total}, not r·μ for {cand}")));
        }
        (Some(mu), trace)
    } else {
        (None, Vec::new())
    };
    let verdict = if !reasons.is_empty() {
        Verdict::Inadmissible
    } else if candidate_slope.as_ref().is_some_and(|mu| mu >= target) {
        Verdict::Violation
    } else {
        Verdict::Certified
    };
    Ok(StabilityReport {
        n,
        candidate: Some(cand.clone()),
        target_slope: target.clone(),
        candidate_slope,
        verdict,
        trace,
        reasons,
    })
}

/// Grid for [`enumerate_candidates`]: `a` runs over `[0, a_max]` and each
/// coordinate of `δ` over `[-delta_max, delta_max]`, both in steps of
/// `1/grid_den`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub a_max: Rational,
    pub delta_max: Rational,
    pub grid_den: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { a_max: Rational::from_int(6), delta_max: Rational::from_int(6), grid_den: 2 }
    }
}

/// Refuse grids beyond this many candidates.
pub const MAX_CANDIDATES: usize = 5_000_000;

impl Bounds {
    /// Integer numerators `k` with `lo ≤ k/grid_den ≤ hi`.
    fn numerators(&self, lo: &Rational, hi: &Rational) -> Result<(i64, i64)> {
        let den = Rational::from_int(self.grid_den as i64);
        let from = (lo * &den).ceil();
        let to = (hi * &den).floor();
        let too_large = |_| Error::InvalidInput("grid bound too large".into());
        Ok((i64::try_from(from).map_err(too_large)?, i64::try_from(to).map_err(too_large)?))
    }

    fn steps(&self, (from, to): (i64, i64)) -> Vec<Rational> {
        (from..=to).map(|k| Rational::new(k, self.grid_den as i64)).collect()
    }

    fn validate(&self) -> Result<()> {
        if self.grid_den == 0 {
            return Err(Error::InvalidInput("grid denominator must be positive".into()));
        }
        if self.a_max.is_negative() || self.delta_max.is_negative() {
            return Err(Error::InvalidInput("grid bounds must be non-negative".into()));
        }
        Ok(())
    }
}

/// Every candidate of the grid, in the fixed order `r`, `e`, `a`, then `δ`
/// lexicographically.
pub fn candidate_grid(model: &SurfaceModel, n: u32, bounds: &Bounds) -> Result<Vec<DestabilizerCandidate>> {
    bounds.validate()?;
    let a_range = bounds.numerators(&Rational::zero(), &bounds.a_max)?;
    let d_range = bounds.numerators(&-bounds.delta_max.clone(), &bounds.delta_max)?;
    let count = |(from, to): (i64, i64)| usize::try_from((to - from + 1).max(0)).ok();
    let rho = model.picard_rank();
    let ranks = (n as usize).saturating_sub(1);
    let total = count(d_range)
        .and_then(|d| d.checked_pow(rho as u32))
        .zip(count(a_range))
        .and_then(|(d, a)| d.checked_mul(a))
        .and_then(|x| x.checked_mul(2 * ranks));
    match total {
        Some(t) if t <= MAX_CANDIDATES => {}
        _ => {
            return Err(Error::InvalidInput(format!(
                "the candidate grid exceeds {MAX_CANDIDATES} entries; tighten the bounds"
            )))
        }
    }
    let a_values = bounds.steps(a_range);
    let d_values = bounds.steps(d_range);

    let mut deltas: Vec<LatticeVector> = vec![Vec::new()];
    for _ in 0..rho {
        deltas = deltas
            .into_iter()
            .flat_map(|prefix| {
                d_values.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for r in 1..n as i64 {
        for e in 0..=1 {
            for a in &a_values {
                for d in &deltas {
                    out.push(DestabilizerCandidate::new(r, a.clone(), d.clone(), e));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub n: u32,
    pub polarization: Polarization,
    pub bounds: Bounds,
    pub target_slope: Rational,
    pub candidate_count: usize,
    pub admissible_count: usize,
    /// Largest slope among admissible candidates.
    pub max_admissible_slope: Option<Rational>,
    pub any_violation: bool,
    pub reports: Vec<StabilityReport>,
}

/// Certifies every candidate of the grid, split into `shards` parallel
/// chunks (`None` uses the rayon pool size). The result does not depend on
/// the sharding.
pub fn enumerate_candidates(
    model: &SurfaceModel,
    n: u32,
    pol: &Polarization,
    bounds: &Bounds,
    shards: Option<usize>,
) -> Result<Enumeration> {
    let target = target_slope(model, n, pol)?;
    let grid = candidate_grid(model, n, bounds)?;
    let expansion = Expansion::new(model, pol)?;
    let shards = shards.unwrap_or_else(rayon::current_num_threads).max(1);
    let chunk = grid.len().div_ceil(shards).max(1);
    let chunks: Vec<Vec<StabilityReport>> = grid
        .par_chunks(chunk)
        .map(|part| part.iter().map(|c| check_one(model, n, pol, &expansion, &target, c)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let reports: Vec<StabilityReport> = chunks.into_iter().flatten().collect();

    let admissible: Vec<&StabilityReport> = reports.iter().filter(|r| r.verdict != Verdict::Inadmissible).collect();
    let max_admissible_slope = admissible.iter().filter_map(|r| r.candidate_slope.clone()).max();
    Ok(Enumeration {
        n,
        polarization: pol.clone(),
        bounds: bounds.clone(),
        target_slope: target,
        candidate_count: reports.len(),
        admissible_count: admissible.len(),
        max_admissible_slope,
        any_violation: reports.iter().any(|r| r.verdict == Verdict::Violation),
        reports,
    })
}

/// How a positive fiber degree was reduced to a negative one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualReduction {
    /// The duality table applied to `E = O_X(-mΘ)`: codimension 0, WIT1,
    /// with `Φ¹E` of full dimension.
    pub decision: Decision,
    /// `(ch0, ch1)` of the sheaf `Φ¹(O_X(-mΘ))`.
    pub negative_transform: TruncatedChar,
    /// Its dual, which must match the transform of `O_X(mΘ)` up to `⊗p*L`.
    pub dual: TruncatedChar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformStability {
    pub line_bundle: LineBundleX,
    pub transform: TransformResult,
    pub transform_slope: Rational,
    pub reduction: Option<DualReduction>,
    /// The search for the rank-`|m|` transform of `O_X(-|m|Θ)`, without the
    /// per-candidate reports.
    pub search: Enumeration,
    pub stable: bool,
    pub trace: Vec<String>,
}

/// Checks that the transform of `O_X(mΘ) ⊗ p*N` is slope stable by searching
/// for destabilizers of `Φ(O_X(-|m|Θ))`.
pub fn transform_stability(
    model: &SurfaceModel,
    lb: &LineBundleX,
    pol: &Polarization,
    bounds: &Bounds,
) -> Result<TransformStability> {
    if lb.m == 0 {
        return Err(Error::HypothesisViolation("the line bundle must have nonzero fiber degree".into()));
    }
    require_num_trivial(model)?;
    if !model.threefold_k_trivial() {
        return Err(Error::HypothesisViolation("the threefold must be declared K-trivial".into()));
    }
    model.check_vector(&lb.twist)?;
    let transform = transform_char(model, lb, KernelChoice::Standard)?;
    let transform_slope = slope(model, &transform.character, pol)?;
    let rank = model.picard_rank();
    let n = lb.m.unsigned_abs();
    let n = u32::try_from(n).map_err(|_| Error::InvalidInput(format!("|m| = {n} is too large")))?;
    let mut trace = Vec::new();
    if lb.twist.iter().any(|x| !x.is_zero()) {
        trace.push("twist by p*N commutes with the transform and shifts every slope equally; dropped".to_string());
    }

    let reduction = if lb.m > 0 {
        let scenario = SheafScenario::new(3, 0, WitType::Wit1, 0);
        let decision = duality_decision(&scenario)?;
        if decision.conclusion != (Conclusion::DualIdentification { transform_index: 1 }) {
            return Err(Error::InvariantBreach(format!("unexpected duality outcome {}", decision.conclusion)));
        }
        let negative = transform_char(model, &LineBundleX::untwisted(-lb.m, rank), KernelChoice::Standard)?;
        // the WIT1 transform sits in degree 1, so the sheaf has the opposite character
        let negative_transform = negative.character.shift();
        let dual = dual_char(&negative_transform);
        let positive = transform_char(model, &LineBundleX::untwisted(lb.m, rank), KernelChoice::Standard)?;
        let expected = positive.character.twist_by_pullback(&KernelChoice::Standard.l_class(model));
        if dual != expected {
            return Err(Error::InvariantBreach(format!("dual of the transform is {dual}, expected {expected}")));
        }
        trace.push(format!("O_X(-{}Θ) is WIT1 of codimension 0: {}", lb.m, decision.conclusion));
        trace.push(format!("dual of Φ^1(O_X(-{}Θ)) has {dual}, matching Φ(O_X({}Θ)) ⊗ p*L", lb.m, lb.m));
        trace.push("duals and pullback twists preserve slope stability; reduced to negative fiber degree".into());
        Some(DualReduction { decision, negative_transform, dual })
    } else {
        None
    };

    let mut search = enumerate_candidates(model, n, pol, bounds, None)?;
    trace.push(format!(
        "searched {} candidates for Φ(O_X(-{n}Θ)), {} admissible, target slope {}",
        search.candidate_count, search.admissible_count, search.target_slope
    ));
    let stable = !search.any_violation;
    search.reports.clear();
    Ok(TransformStability { line_bundle: lb.clone(), transform, transform_slope, reduction, search, stable, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::Preset;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    fn pol(p: Preset, t: Rational, s: Rational) -> Polarization {
        Polarization::new(&p.model(), t, s, p.default_ample()).unwrap()
    }

    fn k3() -> (SurfaceModel, Polarization) {
        (Preset::K3Quartic.model(), pol(Preset::K3Quartic, qi(1), qi(1)))
    }

    fn cand(r: i64, a: Rational, d: i64, e: i64) -> DestabilizerCandidate {
        DestabilizerCandidate::new(r, a, vec![qi(d)], e)
    }

    #[test]
    fn target_slopes() {
        let (m, p) = k3();
        assert_eq!(target_slope(&m, 2, &p).unwrap(), qi(2));
        let e = Preset::Enriques;
        assert_eq!(target_slope(&e.model(), 1, &pol(e, qi(1), qi(3))).unwrap(), qi(18));
        let doubled = pol(Preset::K3Quartic, qi(1), qi(2));
        assert_eq!(target_slope(&m, 2, &doubled).unwrap(), qi(8));
    }

    #[test]
    fn target_slope_needs_trivial_canonical_class() {
        let g = Preset::GeneralDemo;
        let err = target_slope(&g.model(), 2, &pol(g, qi(1), qi(1))).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn candidate_slopes() {
        let (m, p) = k3();
        assert_eq!(candidate_slope(&m, &cand(1, qi(1), 0, 1), &p).unwrap(), qi(0));
        assert_eq!(candidate_slope(&m, &cand(1, qi(0), 0, 0), &p).unwrap(), qi(0));
        assert_eq!(candidate_slope(&m, &cand(2, qi(2), 1, 0), &p).unwrap(), qi(-8));
        assert!(matches!(candidate_slope(&m, &cand(0, qi(0), 0, 0), &p), Err(Error::UndefinedSlope)));
    }

    #[test]
    fn candidate_slope_on_general_model_matches_closed_form() {
        let g = Preset::GeneralDemo;
        let c = DestabilizerCandidate::new(2, q(3, 2), vec![qi(1), qi(-2)], 1);
        assert!(candidate_slope(&g.model(), &c, &pol(g, q(1, 2), qi(3))).is_ok());
    }

    #[test]
    fn certify_examples() {
        let (m, p) = k3();
        let rep = certify(&m, 2, &p, Some(&cand(1, qi(1), 0, 1))).unwrap();
        assert_eq!(rep.verdict, Verdict::Certified);
        assert_eq!(rep.candidate_slope, Some(qi(0)));
        assert_eq!(rep.target_slope, qi(2));

        let rep = certify(&m, 3, &p, Some(&cand(1, qi(0), 0, 1))).unwrap();
        assert_eq!(rep.verdict, Verdict::Inadmissible);
        assert!(rep.reasons.iter().any(|r| r.contains("fiber degree")));

        let rep = certify(&m, 2, &p, Some(&DestabilizerCandidate::new(1, qi(1), vec![q(-1, 4)], 0))).unwrap();
        assert_eq!(rep.verdict, Verdict::Inadmissible);
        assert!(rep.reasons.iter().any(|r| r.contains("δ·H_S = -1")));
    }

    #[test]
    fn trace_names_and_values() {
        let (m, p) = k3();
        let rep = certify(&m, 3, &p, Some(&cand(2, qi(2), 1, 1))).unwrap();
        let names: Vec<&str> = rep.trace.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, [FIBER_DEGREE_STEP, EFFECTIVITY_STEP, SECTION_STEP]);
        assert_eq!(rep.trace[0].value, qi(-4));
        assert_eq!(rep.trace[1].value, qi(-8));
        assert_eq!(rep.trace[2].value, qi(0));
        assert_eq!(rep.candidate_slope, Some(qi(-6)));
    }

    #[test]
    fn positive_slope_below_target_is_not_a_violation() {
        // inadmissible δ pairing makes the slope positive but the verdict must not be Violation
        let (m, p) = k3();
        let rep = certify(&m, 2, &p, Some(&DestabilizerCandidate::new(1, qi(0), vec![qi(-1)], 0))).unwrap();
        assert_eq!(rep.candidate_slope, Some(qi(8)));
        assert_eq!(rep.verdict, Verdict::Inadmissible);
    }

    #[test]
    fn vacuous_rank_one() {
        let (m, p) = k3();
        assert_eq!(certify(&m, 1, &p, None).unwrap().verdict, Verdict::Certified);
        assert!(certify(&m, 2, &p, None).is_err());
        let en = enumerate_candidates(&m, 1, &p, &Bounds::default(), None).unwrap();
        assert!(en.reports.is_empty());
        assert!(!en.any_violation);
    }

    #[test]
    fn exhaustive_searches_find_nothing() {
        let (m, p) = k3();
        let en = enumerate_candidates(&m, 2, &p, &Bounds::default(), None).unwrap();
        assert!(!en.any_violation);
        assert_eq!(en.candidate_count, 13 * 25 * 2);
        let e = Preset::Enriques;
        let en = enumerate_candidates(&e.model(), 4, &pol(e, qi(1), qi(1)), &Bounds::default(), None).unwrap();
        assert!(!en.any_violation);
        assert!(en.max_admissible_slope.unwrap() <= qi(0));
    }

    #[test]
    fn sharding_does_not_change_output() {
        let (m, p) = k3();
        let b = Bounds { a_max: qi(3), delta_max: qi(3), grid_den: 2 };
        let one = enumerate_candidates(&m, 3, &p, &b, Some(1)).unwrap();
        for shards in [2, 3, 7, 64, 10_000] {
            assert_eq!(enumerate_candidates(&m, 3, &p, &b, Some(shards)).unwrap(), one);
        }
    }

    #[test]
    fn grid_is_bounded() {
        let g = Preset::K3Quartic.model();
        let b = Bounds { a_max: qi(1_000_000), delta_max: qi(1_000_000), grid_den: 2 };
        assert!(candidate_grid(&g, 3, &b).is_err());
        assert!(candidate_grid(&g, 3, &Bounds { grid_den: 0, ..Bounds::default() }).is_err());
    }

    #[test]
    fn transform_stability_negative_and_positive() {
        let (m, p) = k3();
        let b = Bounds { a_max: qi(2), delta_max: qi(2), grid_den: 2 };
        let neg = transform_stability(&m, &LineBundleX::untwisted(-2, 1), &p, &b).unwrap();
        assert!(neg.stable);
        assert_eq!(neg.transform_slope, qi(2));
        assert!(neg.reduction.is_none());

        let pos = transform_stability(&m, &LineBundleX::untwisted(3, 1), &p, &b).unwrap();
        assert!(pos.stable);
        assert_eq!(pos.transform.wit, WitType::Wit0);
        let red = pos.reduction.unwrap();
        assert_eq!(red.decision.conclusion, Conclusion::DualIdentification { transform_index: 1 });
        assert!(pos.trace.iter().any(|l| l.contains("WIT1 of codimension 0")));

        let twisted = transform_stability(&m, &LineBundleX::new(-2, vec![qi(1)]), &p, &b).unwrap();
        assert!(twisted.stable);
        assert!(twisted.trace[0].contains("twist"));
    }

    #[test]
    fn transform_stability_hypotheses() {
        let (m, p) = k3();
        let b = Bounds::default();
        let err = transform_stability(&m, &LineBundleX::untwisted(0, 1), &p, &b).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let g = Preset::GeneralDemo;
        let err = transform_stability(&g.model(), &LineBundleX::untwisted(-2, 2), &pol(g, qi(1), qi(1)), &b).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    fn half(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
        (lo * 2..=hi * 2).prop_map(|k| q(k, 2))
    }

    fn positive() -> impl Strategy<Value = Rational> {
        (1i64..=12, 1i64..=4).prop_map(|(p, d)| q(p, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn admissible_slopes_are_nonpositive(
            preset in prop_oneof![Just(Preset::K3Quartic), Just(Preset::Enriques)],
            n in 2u32..6, r in 1i64..5, a in 0i64..10, d in half(0, 10), e in 0i64..=1,
            t in positive(), s in positive(),
        ) {
            let model = preset.model();
            let p = pol(preset, t, s);
            let c = DestabilizerCandidate::new(r.min(n as i64 - 1), qi(a), vec![d], e);
            // candidate_slope itself errors if ring and closed form disagree
            let rep = certify(&model, n, &p, Some(&c)).unwrap();
            if rep.verdict != Verdict::Inadmissible {
                prop_assert!(rep.candidate_slope.unwrap() <= qi(0));
                prop_assert!(rep.target_slope > qi(0));
            }
        }
    }

    proptest! {
        #[test]
        fn homogeneous_of_degree_two(
            r in 1i64..4, a in half(0, 6), d in half(-6, 6), e in 0i64..=1,
            t in positive(), s in positive(), lambda in positive(),
        ) {
            let (model, _) = k3();
            let p = pol(Preset::K3Quartic, t, s);
            let scaled = p.scaled(&lambda).unwrap();
            let c = DestabilizerCandidate::new(r, a, vec![d], e);
            let before = certify(&model, 4, &p, Some(&c)).unwrap();
            let after = certify(&model, 4, &scaled, Some(&c)).unwrap();
            let l2 = &lambda * &lambda;
            prop_assert_eq!(after.target_slope, &before.target_slope * &l2);
            prop_assert_eq!(after.candidate_slope.unwrap(), before.candidate_slope.unwrap() * &l2);
            prop_assert_eq!(after.verdict, before.verdict);
        }

        #[test]
        fn trace_sums_to_rank_times_slope_on_any_model(
            r in 1i64..4, a in half(-3, 3), d1 in half(-3, 3), d2 in half(-3, 3), e in -1i64..=2,
            t in positive(), s in positive(),
        ) {
            let g = Preset::GeneralDemo;
            let model = g.model();
            let p = pol(g, t, s);
            let c = DestabilizerCandidate::new(r, a, vec![d1, d2], e);
            let mu = candidate_slope(&model, &c, &p).unwrap();
            let total: Rational = slope_trace(&model, &c, &p).unwrap().into_iter().map(|s| s.value).sum();
            prop_assert_eq!(total, mu * Rational::from_int(r));
        }
    }
}
