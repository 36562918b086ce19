//! Comparison of the two limits.
//!
//! Both sequences abut to the same object, so on every anti-diagonal
//! `p + q = k` the surviving terms of either side are the graded pieces of
//! the same filtered sheaf. The solver uses three consequences:
//!
//! * if one side is zero on degree `k`, so is every stable term of the other;
//! * if one side has a stable nonzero term on degree `k` and the other has a
//!   single candidate, that candidate is nonzero;
//! * a [`NonZeroGroup`](super::pages::NonZeroGroup) with one candidate left
//!   makes it nonzero, and with none left is a contradiction.
//!
//! A term forced to vanish while known to be nonzero is a contradiction, and
//! the scenario is then forbidden.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::pages::{build_pages, degenerate, PageGrid, Side, Term, TermStatus};
use super::{Conclusion, SheafScenario};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRef {
    pub side: Side,
    pub p: i32,
    pub q: i32,
    pub label: String,
}

impl TermRef {
    fn of(side: Side, t: &Term) -> Self {
        TermRef { side, p: t.p, q: t.q, label: t.label.clone() }
    }

    pub fn degree(&self) -> i32 {
        self.p + self.q
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DerivedRelation {
    Identification { degree: i32, left: TermRef, right: TermRef },
    ForcedZero { degree: i32, term: TermRef, because: String },
    /// `0 → sub → mid → quot → 0`, with `mid` the lone term of one side and
    /// `sub`, `quot` the two graded pieces of the other.
    ShortExact { degree: i32, sub: TermRef, mid: TermRef, quot: TermRef },
    Forbidden { degree: i32, reason: String },
}

impl DerivedRelation {
    pub fn degree(&self) -> i32 {
        match self {
            DerivedRelation::Identification { degree, .. }
            | DerivedRelation::ForcedZero { degree, .. }
            | DerivedRelation::ShortExact { degree, .. }
            | DerivedRelation::Forbidden { degree, .. } => *degree,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            DerivedRelation::Forbidden { .. } => 0,
            DerivedRelation::ForcedZero { .. } => 1,
            DerivedRelation::Identification { .. } => 2,
            DerivedRelation::ShortExact { .. } => 3,
        }
    }
}

impl fmt::Display for DerivedRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivedRelation::Identification { degree, left, right } => {
                write!(f, "[k={degree}] {} = {}", left.label, right.label)
            }
            DerivedRelation::ForcedZero { degree, term, because } => {
                write!(f, "[k={degree}] {} = 0 ({because})", term.label)
            }
            DerivedRelation::ShortExact { degree, sub, mid, quot } => {
                write!(f, "[k={degree}] 0 → {} → {} → {} → 0", sub.label, mid.label, quot.label)
            }
            DerivedRelation::Forbidden { degree, reason } => write!(f, "[k={degree}] contradiction: {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub left: PageGrid,
    pub right: PageGrid,
    pub relations: Vec<DerivedRelation>,
    pub contradiction: bool,
}

impl Comparison {
    pub fn grid(&self, side: Side) -> &PageGrid {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }
}

fn live(g: &PageGrid, k: i32) -> Vec<&Term> {
    g.diagonal(k).filter(|t| t.status != TermStatus::Zero).collect()
}

enum Step {
    Set { side: Side, p: i32, q: i32, status: TermStatus, relation: Option<DerivedRelation> },
    Contradiction(DerivedRelation),
}

/// One pass over degree `k` from `src` to `dst`.
fn diagonal_steps(src: &PageGrid, dst: &PageGrid, k: i32) -> Vec<Step> {
    let mut steps = Vec::new();
    let src_live = live(src, k);
    let dst_live = live(dst, k);
    if src_live.is_empty() {
        let because = format!("every {:?} term of degree {k} vanishes", src.side);
        for t in dst_live.iter().filter(|t| t.stable) {
            if t.status == TermStatus::NonZero {
                steps.push(Step::Contradiction(DerivedRelation::Forbidden {
                    degree: k,
                    reason: format!("{} is nonzero but {because}", t.label),
                }));
                return steps;
            }
            steps.push(Step::Set {
                side: dst.side,
                p: t.p,
                q: t.q,
                status: TermStatus::Zero,
                relation: Some(DerivedRelation::ForcedZero {
                    degree: k,
                    term: TermRef::of(dst.side, t),
                    because: because.clone(),
                }),
            });
        }
    }
    let src_nonzero = src_live.iter().any(|t| t.stable && t.status == TermStatus::NonZero);
    if src_nonzero && dst_live.len() == 1 && dst_live[0].status == TermStatus::Unknown {
        let t = dst_live[0];
        steps.push(Step::Set { side: dst.side, p: t.p, q: t.q, status: TermStatus::NonZero, relation: None });
    }
    steps
}

fn group_steps(g: &PageGrid) -> Vec<Step> {
    let mut steps = Vec::new();
    for group in &g.groups {
        let candidates: Vec<&Term> = group
            .members
            .iter()
            .filter_map(|&(p, q)| g.term(p, q))
            .filter(|t| t.status != TermStatus::Zero)
            .collect();
        match candidates.as_slice() {
            [] => {
                let degree = group.members.iter().map(|(p, q)| p + q).max().unwrap_or(0);
                steps.push(Step::Contradiction(DerivedRelation::Forbidden {
                    degree,
                    reason: format!("{}, yet every term it could live in vanishes", group.reason),
                }));
            }
            [t] if t.status == TermStatus::Unknown => {
                steps.push(Step::Set { side: g.side, p: t.p, q: t.q, status: TermStatus::NonZero, relation: None });
            }
            _ => {}
        }
    }
    steps
}

/// Compares two degenerated pages, propagating statuses to a fixpoint, and
/// lists the identifications and short exact sequences the limits force.
pub fn compare_limits(left: &PageGrid, right: &PageGrid) -> Result<Comparison> {
    if left.side != Side::Left || right.side != Side::Right {
        return Err(Error::InvalidInput("compare_limits expects a Left and a Right page".into()));
    }
    if left.n != right.n {
        return Err(Error::InvalidInput("pages belong to different dimensions".into()));
    }
    if left.degeneration_page.is_none() || right.degeneration_page.is_none() {
        return Err(Error::InvalidInput("pages must be degenerated before comparing limits".into()));
    }
    let mut grids = [left.clone(), right.clone()];
    let mut relations = Vec::new();
    let (ld, rd) = (left.region.degrees(), right.region.degrees());
    let lo = *ld.start().min(rd.start());
    let hi = *ld.end().max(rd.end());

    let mut contradiction = None;
    'fixpoint: loop {
        let mut changed = false;
        for k in lo..=hi {
            for side in [Side::Left, Side::Right] {
                let (src, dst) = match side {
                    Side::Left => (&grids[0], &grids[1]),
                    Side::Right => (&grids[1], &grids[0]),
                };
                let mut steps = diagonal_steps(src, dst, k);
                steps.extend(group_steps(&grids[0]));
                steps.extend(group_steps(&grids[1]));
                for step in steps {
                    match step {
                        Step::Contradiction(rel) => {
                            contradiction = Some(rel);
                            break 'fixpoint;
                        }
                        Step::Set { side, p, q, status, relation } => {
                            let g = &mut grids[if side == Side::Left { 0 } else { 1 }];
                            let t = g.term_mut(p, q).expect("step refers to an in-region term");
                            if t.status == TermStatus::Unknown {
                                t.status = status;
                                changed = true;
                                relations.extend(relation);
                            } else if t.status != status {
                                contradiction = Some(DerivedRelation::Forbidden {
                                    degree: p + q,
                                    reason: format!("{} is required to be both zero and nonzero", t.label),
                                });
                                break 'fixpoint;
                            }
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    let [left, right] = grids;
    let is_contradiction = contradiction.is_some();
    if let Some(rel) = contradiction {
        relations.push(rel);
    } else {
        for k in lo..=hi {
            relations.extend(structural_relation(&left, &right, k));
        }
    }
    relations.sort_by_key(|r| (r.degree(), r.rank()));
    Ok(Comparison { left, right, relations, contradiction: is_contradiction })
}

fn structural_relation(left: &PageGrid, right: &PageGrid, k: i32) -> Option<DerivedRelation> {
    let l = live(left, k);
    let r = live(right, k);
    if l.iter().chain(&r).any(|t| !t.stable) {
        return None;
    }
    let adjacent = |a: &Term, b: &Term| (a.p - b.p).abs() == 1;
    // the limit is filtered by q: the piece with larger q is the subobject
    let split = |pair: &[&Term], side: Side| {
        let (hi, lo) = if pair[0].q > pair[1].q { (pair[0], pair[1]) } else { (pair[1], pair[0]) };
        (TermRef::of(side, hi), TermRef::of(side, lo))
    };
    match (l.len(), r.len()) {
        (1, 1) => Some(DerivedRelation::Identification {
            degree: k,
            left: TermRef::of(Side::Left, l[0]),
            right: TermRef::of(Side::Right, r[0]),
        }),
        (1, 2) if adjacent(r[0], r[1]) => {
            let (sub, quot) = split(&r, Side::Right);
            Some(DerivedRelation::ShortExact { degree: k, sub, mid: TermRef::of(Side::Left, l[0]), quot })
        }
        (2, 1) if adjacent(l[0], l[1]) => {
            let (sub, quot) = split(&l, Side::Left);
            Some(DerivedRelation::ShortExact { degree: k, sub, mid: TermRef::of(Side::Right, r[0]), quot })
        }
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineOutcome {
    pub scenario: SheafScenario,
    pub left_degeneration_page: u32,
    pub right_degeneration_page: u32,
    pub comparison: Comparison,
    /// `None` when the relations do not settle the fate of `Φ⁰(E^D)`.
    pub conclusion: Option<Conclusion>,
}

/// Builds, degenerates and compares the pages of `sc`, then reads off what
/// the relations say about `Φ⁰(E^D)`, the Right term at `(c, -1)`.
pub fn engine_conclusion(sc: &SheafScenario) -> Result<EngineOutcome> {
    let (left, right) = build_pages(sc)?;
    let (left, left_page) = degenerate(&left);
    let (right, right_page) = degenerate(&right);
    let comparison = compare_limits(&left, &right)?;

    let c = sc.c as i32;
    let alive = -(sc.wit.index() as i32);
    let conclusion = if comparison.contradiction {
        let reason = comparison
            .relations
            .iter()
            .find_map(|r| match r {
                DerivedRelation::Forbidden { reason, .. } => Some(reason.clone()),
                _ => None,
            })
            .unwrap_or_default();
        Some(Conclusion::Forbidden { reason })
    } else {
        match comparison.right.status(c, -1) {
            TermStatus::Zero => Some(Conclusion::DualIsWit1),
            TermStatus::NonZero => {
                let identified = comparison.relations.iter().any(|r| {
                    matches!(r, DerivedRelation::Identification { left, right, .. }
                        if (right.p, right.q) == (c, -1) && (left.p, left.q) == (alive, sc.transform_codim()))
                });
                identified.then_some(Conclusion::DualIdentification { transform_index: sc.wit.index() })
            }
            TermStatus::Unknown => None,
        }
    };
    Ok(EngineOutcome {
        scenario: *sc,
        left_degeneration_page: left_page,
        right_degeneration_page: right_page,
        comparison,
        conclusion,
    })
}
