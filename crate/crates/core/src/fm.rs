//! The relative Fourier-Mukai transform and the derived dual, acting on
//! `(ch0, ch1)` of line bundles on the threefold.
//!
//! A line bundle on `X` is `O_X(mΘ) ⊗ p*N`. Its transform is a sheaf
//! concentrated in one degree (WIT0 for `m > 0`, WIT1 for `m ≤ 0`); the
//! characters here are those of the complex `Φ(L)`, so a WIT1 transform
//! carries a negative `ch0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ring::{fiber_degree, x_integrate, DivisorClassX, LatticeVector, SurfaceModel, ThreefoldClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineBundleX {
    /// Coefficient of `Θ`, which is also the fiber degree.
    pub m: i64,
    /// `c1(N)` of the pulled back twist `p*N`.
    pub twist: LatticeVector,
}

impl LineBundleX {
    pub fn new(m: i64, twist: LatticeVector) -> Self {
        LineBundleX { m, twist }
    }

    /// `O_X(mΘ)` with no twist.
    pub fn untwisted(m: i64, rank: usize) -> Self {
        LineBundleX { m, twist: vec![Rational::zero(); rank] }
    }

    pub fn c1(&self) -> DivisorClassX {
        DivisorClassX::new(Rational::from_int(self.m), self.twist.clone())
    }

    pub fn dual(&self) -> Self {
        LineBundleX { m: -self.m, twist: self.twist.iter().map(|x| -x).collect() }
    }

    pub fn fiber_degree(&self) -> i64 {
        self.m
    }
}

/// `(ch0, ch1)` of a sheaf or complex on `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedChar {
    pub ch0: Rational,
    pub ch1: DivisorClassX,
}

impl TruncatedChar {
    pub fn new(ch0: Rational, ch1: DivisorClassX) -> Self {
        TruncatedChar { ch0, ch1 }
    }

    /// Shift by one: the character changes sign.
    pub fn shift(&self) -> Self {
        TruncatedChar { ch0: -&self.ch0, ch1: -self.ch1.clone() }
    }

    /// Product with `ch(p*N) = 1 + p*c1(N) + …`, truncated to degree 2.
    pub fn twist_by_pullback(&self, n: &[Rational]) -> Self {
        let extra = DivisorClassX::pullback(n.iter().map(|x| x * &self.ch0).collect());
        TruncatedChar { ch0: self.ch0.clone(), ch1: self.ch1.clone() + extra }
    }
}

impl fmt::Display for TruncatedChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ch0 = {}, ch1 = {}", self.ch0, format_divisor(&self.ch1))
    }
}

/// Human-readable `aΘ + p*(δ)`.
pub fn format_divisor(d: &DivisorClassX) -> String {
    let theta = match &d.a {
        a if a.is_zero() => String::new(),
        a if *a == 1 => "Θ".to_string(),
        a if *a == -1 => "-Θ".to_string(),
        a => format!("{a}Θ"),
    };
    if d.delta.iter().all(Rational::is_zero) {
        return if theta.is_empty() { "0".to_string() } else { theta };
    }
    let delta: Vec<String> = d.delta.iter().map(ToString::to_string).collect();
    let pulled = format!("p*({})", delta.join(", "));
    if theta.is_empty() {
        pulled
    } else {
        format!("{theta} + {pulled}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitType {
    #[serde(rename = "WIT0")]
    Wit0,
    #[serde(rename = "WIT1")]
    Wit1,
}

impl WitType {
    /// The cohomological degree the transform is concentrated in.
    pub fn index(self) -> u8 {
        match self {
            WitType::Wit0 => 0,
            WitType::Wit1 => 1,
        }
    }
}

impl fmt::Display for WitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WIT{}", self.index())
    }
}

impl FromStr for WitType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" | "WIT0" | "wit0" => Ok(WitType::Wit0),
            "1" | "WIT1" | "wit1" => Ok(WitType::Wit1),
            _ => Err(Error::InvalidInput(format!("unknown WIT type {s:?} (expected 0 or 1)"))),
        }
    }
}

/// Which normalization of the transform kernel is used. The two differ by a
/// line bundle pulled back from `S`, which only shows up in the base line
/// bundle `L` of the duality formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelChoice {
    /// `I_Δ ⊗ π1*O(Θ) ⊗ π2*O(Θ) ⊗ π*ω⁻¹`; gives `L = ω⁻¹`.
    Standard,
    /// The same kernel without the `π*ω⁻¹` factor; gives `L = ω⁻³`.
    Untwisted,
}

impl KernelChoice {
    pub const ALL: [KernelChoice; 2] = [KernelChoice::Standard, KernelChoice::Untwisted];

    pub fn name(self) -> &'static str {
        match self {
            KernelChoice::Standard => "standard",
            KernelChoice::Untwisted => "untwisted",
        }
    }

    /// Numerical class of `L`.
    pub fn l_class(self, model: &SurfaceModel) -> LatticeVector {
        let factor = match self {
            KernelChoice::Standard => Rational::from_int(-1),
            KernelChoice::Untwisted => Rational::from_int(-3),
        };
        model.omega_class().iter().map(|w| w * &factor).collect()
    }
}

impl FromStr for KernelChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        KernelChoice::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown kernel {s:?} (expected standard or untwisted)")))
    }
}

/// Ample class `ω = tΘ + s·p*H_S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolarizationData")]
pub struct Polarization {
    pub t: Rational,
    pub s: Rational,
    pub h: LatticeVector,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolarizationData {
    t: Rational,
    s: Rational,
    h: LatticeVector,
}

impl TryFrom<PolarizationData> for Polarization {
    type Error = Error;
    fn try_from(d: PolarizationData) -> Result<Self> {
        Polarization::unchecked(d.t, d.s, d.h)
    }
}

impl Polarization {
    /// Checks `t, s > 0` and `H_S² > 0` on the given model.
    pub fn new(model: &SurfaceModel, t: Rational, s: Rational, h: LatticeVector) -> Result<Self> {
        let pol = Polarization::unchecked(t, s, h)?;
        pol.validate(model)?;
        Ok(pol)
    }

    fn unchecked(t: Rational, s: Rational, h: LatticeVector) -> Result<Self> {
        if !t.is_positive() || !s.is_positive() {
            return Err(Error::InvalidPolarization(format!("t and s must be positive (t = {t}, s = {s})")));
        }
        Ok(Polarization { t, s, h })
    }

    pub fn validate(&self, model: &SurfaceModel) -> Result<()> {
        let hh = model.pair(&self.h, &self.h)?;
        if !hh.is_positive() {
            return Err(Error::InvalidPolarization(format!("H_S² = {hh} is not positive, so H_S is not ample")));
        }
        Ok(())
    }

    pub fn divisor(&self) -> DivisorClassX {
        DivisorClassX::new(self.t.clone(), self.h.iter().map(|x| x * &self.s).collect())
    }

    pub fn class(&self) -> ThreefoldClass {
        self.divisor().to_class()
    }

    pub fn square(&self, model: &SurfaceModel) -> Result<ThreefoldClass> {
        let w = self.class();
        model.x_mul(&w, &w)
    }

    /// Same class scaled by `λ`: `(t, s) → (λt, λs)`.
    pub fn scaled(&self, lambda: &Rational) -> Result<Self> {
        Polarization::unchecked(lambda * &self.t, lambda * &self.s, self.h.clone())
    }
}

/// WIT type of `O_X(mΘ) ⊗ p*N`, decided by the fiber degree alone.
pub fn wit_classify(lb: &LineBundleX) -> WitType {
    if lb.m > 0 {
        WitType::Wit0
    } else {
        WitType::Wit1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransformResult {
    pub character: TruncatedChar,
    pub wit: WitType,
    /// Carried over from the known structure of these transforms, never
    /// computed here.
    pub locally_free: bool,
}

/// `(ch0, ch1)` of `Φ(O_X(mΘ) ⊗ p*N)`.
///
/// For `m ≠ 0`: `ch0 = m`, `ch1 = -Θ - (m/2)c + m·p*c1(N)` with `c = -p*K_S`.
/// For `m = 0` the transform is `O_Θ ⊗ p*(ω ⊗ N)` up to shift, with
/// `ch0 = 0` and `ch1 = Θ`.
pub fn transform_char(model: &SurfaceModel, lb: &LineBundleX, kernel: KernelChoice) -> Result<TransformResult> {
    model.check_vector(&lb.twist)?;
    // Both kernels give the same (ch0, ch1); the choice only enters through L.
    let _ = kernel;
    let rank = model.picard_rank();
    let wit = wit_classify(lb);
    if lb.m == 0 {
        return Ok(TransformResult {
            character: TruncatedChar::new(Rational::zero(), DivisorClassX::theta(rank)),
            wit,
            locally_free: false,
        });
    }
    let m = Rational::from_int(lb.m);
    let half_m = &m / Rational::from_int(2);
    let delta = model.canonical().iter().zip(&lb.twist).map(|(k, n)| &half_m * k + &m * n).collect();
    Ok(TransformResult {
        character: TruncatedChar::new(m, DivisorClassX::new(Rational::from_int(-1), delta)),
        wit,
        locally_free: true,
    })
}

/// Character of the derived dual: odd degrees change sign.
pub fn dual_char(v: &TruncatedChar) -> TruncatedChar {
    TruncatedChar { ch0: v.ch0.clone(), ch1: -v.ch1.clone() }
}

/// `μ_ω = ∫ ch1·ω² / ch0`.
pub fn slope(model: &SurfaceModel, v: &TruncatedChar, pol: &Polarization) -> Result<Rational> {
    model.check_vector(&v.ch1.delta)?;
    pol.validate(model)?;
    if v.ch0.is_zero() {
        return Err(Error::UndefinedSlope);
    }
    let degree = x_integrate(&model.x_mul(&v.ch1.to_class(), &pol.square(model)?)?);
    Ok(degree / &v.ch0)
}

/// Both sides of `Δ∘Φ(E) = ι*(Φ∘Δ(E)) ⊗ p*L [1]` at character level, with
/// `ι*` acting trivially on numerical classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutativitySides {
    pub dual_of_transform: TruncatedChar,
    pub transform_of_dual: TruncatedChar,
    pub l_class: LatticeVector,
}

impl CommutativitySides {
    pub fn holds(&self) -> bool {
        self.dual_of_transform == self.transform_of_dual
    }
}

pub fn commutativity_sides(model: &SurfaceModel, lb: &LineBundleX, kernel: KernelChoice) -> Result<CommutativitySides> {
    if lb.m == 0 {
        return Err(Error::HypothesisViolation("the character-level duality check needs m ≠ 0".into()));
    }
    let left = dual_char(&transform_char(model, lb, kernel)?.character);
    let l_class = kernel.l_class(model);
    let right = transform_char(model, &lb.dual(), kernel)?.character.twist_by_pullback(&l_class).shift();
    Ok(CommutativitySides { dual_of_transform: left, transform_of_dual: right, l_class })
}

pub fn commutativity_check(model: &SurfaceModel, lb: &LineBundleX, kernel: KernelChoice) -> Result<bool> {
    Ok(commutativity_sides(model, lb, kernel)?.holds())
}

/// Fiber degree of the first Chern class of a character.
pub fn char_fiber_degree(v: &TruncatedChar) -> Rational {
    fiber_degree(&v.ch1)
}
