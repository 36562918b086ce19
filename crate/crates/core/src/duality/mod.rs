//! Bookkeeping for the two duality spectral sequences
//!
//! ```text
//! E_L^{p,q} = Ext^q(Φ^{-p}E, O)  ⇒  H  ⇐  ι*(Φ^{q+1} Ext^p(E, O)) ⊗ p*L = E_R^{p,q}
//! ```
//!
//! Terms are tracked only as Zero / NonZero / Unknown. [`pages`] builds the
//! `E_2` pages of a [`SheafScenario`] and runs them to the limit page,
//! [`solve`] compares the anti-diagonals of the two limits and propagates
//! vanishing, and [`decision`] holds the closed-form table the engine is
//! checked against.

pub mod decision;
pub mod pages;
pub mod solve;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fm::WitType;

pub use decision::{duality_decision, Decision, DualityRule};
pub use pages::{build_pages, degenerate, PageGrid, Region, Side, Term, TermStatus};
pub use solve::{compare_limits, engine_conclusion, Comparison, DerivedRelation, EngineOutcome, TermRef};

/// A coherent sheaf `E` on an `n`-dimensional `X`, described by the data the
/// duality argument needs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SheafScenario {
    /// `dim X`.
    pub n: u32,
    /// Codimension of `E`.
    pub c: u32,
    pub wit: WitType,
    /// `dim Φ^i E - dim E` for the surviving transform, in `{-1, 0, 1}`.
    pub dim_shift: i32,
}

impl SheafScenario {
    pub fn new(n: u32, c: u32, wit: WitType, dim_shift: i32) -> Self {
        SheafScenario { n, c, wit, dim_shift }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InfeasibleScenario("dimension n must be positive".into()));
        }
        if self.c > self.n {
            return Err(Error::InfeasibleScenario(format!("codimension {} exceeds dimension {}", self.c, self.n)));
        }
        if !(-1..=1).contains(&self.dim_shift) {
            return Err(Error::InfeasibleScenario(format!(
                "dimension shift {} is outside [-1, 1]",
                self.dim_shift
            )));
        }
        let ct = self.transform_codim();
        if ct < 0 || ct > self.n as i32 {
            return Err(Error::InfeasibleScenario(format!(
                "the surviving transform would have codimension {ct}, outside [0, {}]",
                self.n
            )));
        }
        Ok(())
    }

    /// Codimension of the surviving transform `Φ^i E`, i.e. `c - dim_shift`.
    pub fn transform_codim(&self) -> i32 {
        self.c as i32 - self.dim_shift
    }

    /// Every scenario with `n` in `dims`, feasible or not.
    pub fn all(dims: std::ops::RangeInclusive<u32>) -> Vec<SheafScenario> {
        let mut out = Vec::new();
        for n in dims {
            for c in 0..=n {
                for wit in [WitType::Wit0, WitType::Wit1] {
                    for dim_shift in -1..=1 {
                        out.push(SheafScenario::new(n, c, wit, dim_shift));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for SheafScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} c={} {} dim_shift={:+}", self.n, self.c, self.wit, self.dim_shift)
    }
}

/// What the comparison says about the dual sheaf `E^D = Ext^c(E, O)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Conclusion {
    /// `ι*(Φ⁰(E^D)) ⊗ p*L = (Φ^i E)^D` for the surviving index `i`.
    DualIdentification { transform_index: u8 },
    /// `Φ⁰(E^D) = 0`, so `E^D` is WIT1.
    DualIsWit1,
    /// No sheaf fits the scenario.
    Forbidden { reason: String },
}

impl Conclusion {
    pub fn name(&self) -> &'static str {
        match self {
            Conclusion::DualIdentification { .. } => "DualIdentification",
            Conclusion::DualIsWit1 => "DualIsWIT1",
            Conclusion::Forbidden { .. } => "Forbidden",
        }
    }

    /// Equality ignoring the free-text reason of a forbidden case.
    pub fn same_kind(&self, other: &Conclusion) -> bool {
        match (self, other) {
            (Conclusion::DualIdentification { transform_index: a }, Conclusion::DualIdentification { transform_index: b }) => a == b,
            (Conclusion::DualIsWit1, Conclusion::DualIsWit1) => true,
            (Conclusion::Forbidden { .. }, Conclusion::Forbidden { .. }) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::DualIdentification { transform_index } => {
                write!(f, "DualIdentification: ι*(Φ^0(E^D))⊗p*L = (Φ^{transform_index}E)^D")
            }
            Conclusion::DualIsWit1 => write!(f, "DualIsWIT1: Φ^0(E^D) = 0, so E^D is WIT1"),
            Conclusion::Forbidden { reason } => write!(f, "Forbidden: {reason}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn feasibility() {
        assert!(SheafScenario::new(3, 4, WitType::Wit0, 0).validate().is_err());
        assert!(SheafScenario::new(3, 0, WitType::Wit1, 1).validate().is_err());
        assert!(SheafScenario::new(3, 3, WitType::Wit1, -1).validate().is_err());
        assert!(SheafScenario::new(3, 1, WitType::Wit0, 2).validate().is_err());
        assert!(SheafScenario::new(0, 0, WitType::Wit0, 0).validate().is_err());
        assert!(SheafScenario::new(3, 1, WitType::Wit0, 1).validate().is_ok());
    }

    #[test]
    fn scenario_enumeration_size() {
        // (n + 1) codimensions × 2 WIT types × 3 shifts
        assert_eq!(SheafScenario::all(1..=4).len(), (2 + 3 + 4 + 5) * 6);
    }
}
