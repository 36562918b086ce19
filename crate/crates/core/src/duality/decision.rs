//! Closed-form duality table for WIT sheaves.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fm::WitType;

use super::{Conclusion, SheafScenario};

/// The rule of the table that produced a [`Decision`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualityRule {
    /// `E` is WIT0, compared on degrees `c - 1` and `c`.
    Wit0Duality,
    /// `E` is WIT1, compared on degrees `≤ c - 1`.
    Wit1Duality,
    /// `dim E = n` and `dim Φ¹E < n`, compared on degree `-1`; needs no WIT
    /// assumption.
    FullDimensionDuality,
}

impl fmt::Display for DualityRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DualityRule::Wit0Duality => "WIT0 duality",
            DualityRule::Wit1Duality => "WIT1 duality",
            DualityRule::FullDimensionDuality => "full-dimension duality",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub scenario: SheafScenario,
    pub conclusion: Conclusion,
    /// Every rule that applies; more than one when they agree.
    pub rules: Vec<DualityRule>,
}

/// | WIT | dim shift | conclusion |
/// |-----|-----------|------------|
/// | 0   | +1        | `ι*(Φ⁰(E^D))⊗p*L = (Φ⁰E)^D` |
/// | 0   | 0         | `E^D` is WIT1 |
/// | 0   | -1        | forbidden |
/// | 1   | +1        | forbidden |
/// | 1   | 0         | `ι*(Φ⁰(E^D))⊗p*L = (Φ¹E)^D` |
/// | 1   | -1        | `E^D` is WIT1 |
///
/// When `c = 0` and `dim Φ¹E < n` the full-dimension rule also gives
/// `E^D` WIT1; it never disagrees with a feasible row.
pub fn duality_decision(sc: &SheafScenario) -> Result<Decision> {
    sc.validate()?;
    let (conclusion, rule) = match (sc.wit, sc.dim_shift) {
        (WitType::Wit0, 1) => (Conclusion::DualIdentification { transform_index: 0 }, DualityRule::Wit0Duality),
        (WitType::Wit0, 0) => (Conclusion::DualIsWit1, DualityRule::Wit0Duality),
        (WitType::Wit0, _) => (
            Conclusion::Forbidden { reason: "a WIT0 sheaf cannot have dim Φ^0E = dim E - 1".into() },
            DualityRule::Wit0Duality,
        ),
        (WitType::Wit1, 1) => (
            Conclusion::Forbidden { reason: "a WIT1 sheaf cannot have dim Φ^1E = dim E + 1".into() },
            DualityRule::Wit1Duality,
        ),
        (WitType::Wit1, 0) => (Conclusion::DualIdentification { transform_index: 1 }, DualityRule::Wit1Duality),
        (WitType::Wit1, _) => (Conclusion::DualIsWit1, DualityRule::Wit1Duality),
    };
    let mut rules = vec![rule];
    let phi1_small = match sc.wit {
        WitType::Wit0 => true,
        WitType::Wit1 => sc.dim_shift < 0,
    };
    if sc.c == 0 && phi1_small && !matches!(conclusion, Conclusion::Forbidden { .. }) {
        debug_assert_eq!(conclusion, Conclusion::DualIsWit1);
        rules.push(DualityRule::FullDimensionDuality);
    }
    Ok(Decision { scenario: *sc, conclusion, rules })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{build_pages, compare_limits, degenerate, engine_conclusion, DerivedRelation, Side, TermStatus};

    fn decide(n: u32, c: u32, wit: WitType, shift: i32) -> Decision {
        duality_decision(&SheafScenario::new(n, c, wit, shift)).unwrap()
    }

    #[test]
    fn table_rows() {
        assert_eq!(decide(3, 1, WitType::Wit0, 0).conclusion, Conclusion::DualIsWit1);
        assert!(matches!(decide(3, 1, WitType::Wit1, 1).conclusion, Conclusion::Forbidden { .. }));
        assert_eq!(
            decide(3, 1, WitType::Wit1, 0).conclusion,
            Conclusion::DualIdentification { transform_index: 1 }
        );
        assert_eq!(
            decide(3, 2, WitType::Wit0, 1).conclusion,
            Conclusion::DualIdentification { transform_index: 0 }
        );
        assert!(matches!(decide(3, 1, WitType::Wit0, -1).conclusion, Conclusion::Forbidden { .. }));
        assert_eq!(decide(3, 1, WitType::Wit1, -1).conclusion, Conclusion::DualIsWit1);
    }

    #[test]
    fn full_dimension_rule_only_when_it_applies() {
        assert_eq!(
            decide(3, 0, WitType::Wit0, 0).rules,
            vec![DualityRule::Wit0Duality, DualityRule::FullDimensionDuality]
        );
        assert_eq!(
            decide(3, 0, WitType::Wit1, -1).rules,
            vec![DualityRule::Wit1Duality, DualityRule::FullDimensionDuality]
        );
        assert_eq!(decide(3, 0, WitType::Wit1, 0).rules, vec![DualityRule::Wit1Duality]);
        assert_eq!(decide(3, 0, WitType::Wit0, -1).rules, vec![DualityRule::Wit0Duality]);
    }

    #[test]
    fn infeasible_is_an_error() {
        assert!(duality_decision(&SheafScenario::new(3, 4, WitType::Wit0, 0)).is_err());
    }

    #[test]
    fn engine_agrees_with_table_up_to_dimension_four() {
        for sc in SheafScenario::all(1..=4) {
            let table = duality_decision(&sc);
            let engine = engine_conclusion(&sc);
            match (table, engine) {
                (Err(_), Err(_)) => {}
                (Ok(d), Ok(out)) => {
                    let got = out.conclusion.unwrap_or_else(|| panic!("engine undecided on {sc}"));
                    assert!(got.same_kind(&d.conclusion), "{sc}: engine {got}, table {}", d.conclusion);
                }
                (t, e) => panic!("{sc}: feasibility disagrees ({:?} vs {:?})", t.is_ok(), e.is_ok()),
            }
        }
    }

    #[test]
    fn degeneration_pages() {
        for sc in SheafScenario::all(1..=4).into_iter().filter(|s| s.validate().is_ok()) {
            let out = engine_conclusion(&sc).unwrap();
            assert_eq!(out.right_degeneration_page, 2, "{sc}");
            assert!(out.left_degeneration_page <= 3, "{sc}");
        }
    }

    #[test]
    fn identifications_stay_on_one_antidiagonal() {
        for sc in SheafScenario::all(1..=4).into_iter().filter(|s| s.validate().is_ok()) {
            let out = engine_conclusion(&sc).unwrap();
            for rel in &out.comparison.relations {
                if let DerivedRelation::Identification { degree, left, right } = rel {
                    assert_eq!(left.degree(), *degree);
                    assert_eq!(right.degree(), *degree);
                }
            }
        }
    }

    #[test]
    fn extra_vanishing_never_revives_a_term() {
        for sc in SheafScenario::all(1..=3).into_iter().filter(|s| s.validate().is_ok()) {
            let (left, right) = build_pages(&sc).unwrap();
            let base = degenerate(&right).0;
            for t in left.terms.iter().filter(|t| t.status == TermStatus::Unknown) {
                let mut more = left.clone();
                more.assume_zero(t.p, t.q).unwrap();
                let (before, _) = degenerate(&left);
                let (after, _) = degenerate(&more);
                let a = compare_limits(&before, &base).unwrap();
                let b = compare_limits(&after, &base).unwrap();
                if b.contradiction {
                    continue;
                }
                for g in [Side::Left, Side::Right] {
                    for term in &a.grid(g).terms {
                        if term.status == TermStatus::Zero {
                            assert_eq!(b.grid(g).status(term.p, term.q), TermStatus::Zero, "{sc} {}", term.label);
                        }
                    }
                }
            }
        }
    }
}
