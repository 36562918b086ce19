//! `E_2` pages and their run to the limit page.
//!
//! Both pages put the degree of the outer functor in `q` and the degree of
//! the inner functor in `p`, so the differential on page `r` is
//! `d_r: (p, q) → (p - r + 1, q + r)` and the limit is filtered by `q`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fm::WitType;

use super::SheafScenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `Ext^q(Φ^{-p}E, O)`, from dualizing the transform.
    Left,
    /// `ι*(Φ^{q+1}Ext^p(E, O)) ⊗ p*L`, from transforming the dual.
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermStatus {
    Zero,
    NonZero,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub p: i32,
    pub q: i32,
    pub status: TermStatus,
    pub label: String,
    /// False when a differential may touch this term, so that its limit is
    /// only a subquotient of the `E_2` term.
    pub stable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub p_min: i32,
    pub p_max: i32,
    pub q_min: i32,
    pub q_max: i32,
}

impl Region {
    pub fn contains(&self, p: i32, q: i32) -> bool {
        (self.p_min..=self.p_max).contains(&p) && (self.q_min..=self.q_max).contains(&q)
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        (self.p_min + self.q_min)..=(self.p_max + self.q_max)
    }
}

/// "At least one of these terms is nonzero".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonZeroGroup {
    pub members: Vec<(i32, i32)>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PossibleDifferential {
    pub page: u32,
    pub source: (i32, i32),
    pub target: (i32, i32),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageGrid {
    pub side: Side,
    pub n: u32,
    pub region: Region,
    /// Every in-region term, sorted by `(p, q)`.
    pub terms: Vec<Term>,
    pub groups: Vec<NonZeroGroup>,
    /// Set by [`degenerate`]: the page at which the sequence stabilizes.
    pub degeneration_page: Option<u32>,
    pub differentials: Vec<PossibleDifferential>,
}

fn left_label(p: i32, q: i32) -> String {
    format!("Ext^{q}(Φ^{}E, O)", -p)
}

fn right_label(p: i32, q: i32) -> String {
    format!("ι*(Φ^{}Ext^{p}(E, O))⊗p*L", q + 1)
}

impl PageGrid {
    /// A page with every in-region term Unknown.
    pub fn empty(side: Side, n: u32) -> Self {
        let n_i = n as i32;
        let region = match side {
            Side::Left => Region { p_min: -1, p_max: 0, q_min: 0, q_max: n_i },
            Side::Right => Region { p_min: 0, p_max: n_i, q_min: -1, q_max: 0 },
        };
        let mut terms = Vec::new();
        for p in region.p_min..=region.p_max {
            for q in region.q_min..=region.q_max {
                let label = match side {
                    Side::Left => left_label(p, q),
                    Side::Right => right_label(p, q),
                };
                terms.push(Term { p, q, status: TermStatus::Unknown, label, stable: true });
            }
        }
        PageGrid { side, n, region, terms, groups: Vec::new(), degeneration_page: None, differentials: Vec::new() }
    }

    fn index(&self, p: i32, q: i32) -> Option<usize> {
        self.terms.binary_search_by(|t| (t.p, t.q).cmp(&(p, q))).ok()
    }

    pub fn term(&self, p: i32, q: i32) -> Option<&Term> {
        self.index(p, q).map(|i| &self.terms[i])
    }

    pub(crate) fn term_mut(&mut self, p: i32, q: i32) -> Option<&mut Term> {
        self.index(p, q).map(move |i| &mut self.terms[i])
    }

    /// Status of `(p, q)`; anything outside the region is Zero.
    pub fn status(&self, p: i32, q: i32) -> TermStatus {
        self.term(p, q).map_or(TermStatus::Zero, |t| t.status)
    }

    /// Records that `(p, q)` vanishes. Only Unknown → Zero is allowed.
    pub fn assume_zero(&mut self, p: i32, q: i32) -> Result<()> {
        let side = self.side;
        match self.term_mut(p, q) {
            None => Ok(()),
            Some(t) => match t.status {
                TermStatus::NonZero => Err(Error::InvalidInput(format!(
                    "{side:?} term ({p},{q}) is already known to be nonzero"
                ))),
                _ => {
                    t.status = TermStatus::Zero;
                    Ok(())
                }
            },
        }
    }

    /// Records that `(p, q)` is nonzero. Only Unknown → NonZero is allowed.
    pub fn assume_nonzero(&mut self, p: i32, q: i32) -> Result<()> {
        let side = self.side;
        match self.term_mut(p, q) {
            None => Err(Error::InvalidInput(format!("{side:?} term ({p},{q}) is outside the region"))),
            Some(t) => match t.status {
                TermStatus::Zero => Err(Error::InvalidInput(format!("{side:?} term ({p},{q}) is already known to vanish"))),
                _ => {
                    t.status = TermStatus::NonZero;
                    Ok(())
                }
            },
        }
    }

    /// Terms on the anti-diagonal `p + q = k`, in increasing `p`.
    pub fn diagonal(&self, k: i32) -> impl Iterator<Item = &Term> {
        self.terms.iter().filter(move |t| t.p + t.q == k)
    }

    /// Target of `d_r` from `(p, q)`.
    pub fn differential_target(p: i32, q: i32, r: u32) -> (i32, i32) {
        let r = r as i32;
        (p - r + 1, q + r)
    }

    /// Columns with at least one term not known to vanish.
    pub fn live_columns(&self) -> Vec<i32> {
        let mut cols: Vec<i32> = self.terms.iter().filter(|t| t.status != TermStatus::Zero).map(|t| t.p).collect();
        cols.dedup();
        cols
    }
}

impl fmt::Display for PageGrid {
    /// `*` nonzero, `0` zero, `?` unknown, `~` unstable. Highest `q` first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = |s: TermStatus| match s {
            TermStatus::Zero => "0",
            TermStatus::NonZero => "*",
            TermStatus::Unknown => "?",
        };
        writeln!(f, "{:?} E_2 page (q rows, p columns):", self.side)?;
        for q in (self.region.q_min..=self.region.q_max).rev() {
            write!(f, "  q={q:>2} |")?;
            for p in self.region.p_min..=self.region.p_max {
                let t = self.term(p, q).expect("in region");
                let mark = if t.stable { "" } else { "~" };
                write!(f, " {}{mark:<1}", sym(t.status))?;
            }
            writeln!(f)?;
        }
        write!(f, "         ")?;
        for p in self.region.p_min..=self.region.p_max {
            write!(f, "{p:>2} ")?;
        }
        Ok(())
    }
}

/// `E_2` pages of both spectral sequences for `sc`.
///
/// Left: the column of the transform that vanishes by the WIT assumption is
/// zero, and in the surviving column `Ext^q(T, O)` vanishes below the
/// codimension `c_T = c - dim_shift` of `T` and is nonzero at `q = c_T`.
/// Right: `Ext^p(E, O) = 0` for `p < c` and `E^D = Ext^c(E, O) ≠ 0`, so one
/// of the two terms in column `c` is nonzero.
pub fn build_pages(sc: &SheafScenario) -> Result<(PageGrid, PageGrid)> {
    sc.validate()?;
    let c = sc.c as i32;
    let ct = sc.transform_codim();

    let mut left = PageGrid::empty(Side::Left, sc.n);
    let (dead, alive) = match sc.wit {
        WitType::Wit0 => (-1, 0),
        WitType::Wit1 => (0, -1),
    };
    for t in left.terms.iter_mut() {
        if t.p == dead || (t.p == alive && t.q < ct) {
            t.status = TermStatus::Zero;
        } else if t.p == alive && t.q == ct {
            t.status = TermStatus::NonZero;
        }
    }

    let mut right = PageGrid::empty(Side::Right, sc.n);
    for t in right.terms.iter_mut() {
        if t.p < c {
            t.status = TermStatus::Zero;
        }
    }
    right.groups.push(NonZeroGroup {
        members: vec![(c, -1), (c, 0)],
        reason: format!("E^D = Ext^{c}(E, O) is nonzero"),
    });
    Ok((left, right))
}

/// Runs the differentials `d_2, d_3, …` and returns the stabilized grid and
/// the first page from which no differential can be nonzero. A differential
/// is possible when both endpoints are in the region and not known to
/// vanish; its endpoints are marked unstable.
pub fn degenerate(page: &PageGrid) -> (PageGrid, u32) {
    let mut out = page.clone();
    out.differentials.clear();
    // Any d_r with r > n + 2 leaves every region.
    let max_r = page.n + 3;
    let mut last = 1;
    for r in 2..=max_r {
        for t in page.terms.iter().filter(|t| t.status != TermStatus::Zero) {
            let (tp, tq) = PageGrid::differential_target(t.p, t.q, r);
            if page.region.contains(tp, tq) && page.status(tp, tq) != TermStatus::Zero {
                out.differentials.push(PossibleDifferential { page: r, source: (t.p, t.q), target: (tp, tq) });
                last = r;
            }
        }
    }
    for d in out.differentials.clone() {
        for (p, q) in [d.source, d.target] {
            if let Some(t) = out.term_mut(p, q) {
                t.stable = false;
            }
        }
    }
    let stable_page = last + 1;
    out.degeneration_page = Some(stable_page);
    (out, stable_page)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn live_terms(g: &PageGrid) -> Vec<(i32, i32)> {
        g.terms.iter().filter(|t| t.status != TermStatus::Zero).map(|t| (t.p, t.q)).collect()
    }

    #[test]
    fn wit0_codim_one_pages() {
        let (l, r) = build_pages(&SheafScenario::new(3, 1, WitType::Wit0, 1)).unwrap();
        assert_eq!(l.live_columns(), vec![0]);
        assert_eq!(live_terms(&l), vec![(0, 0), (0, 1), (0, 2), (0, 3)]);
        assert_eq!(l.status(0, 0), TermStatus::NonZero);
        let live = live_terms(&r);
        assert!(live.iter().all(|&(p, q)| (1..=3).contains(&p) && (-1..=0).contains(&q)));
        assert_eq!(live.len(), 6);
    }

    #[test]
    fn wit1_full_dimension_has_lone_column() {
        for shift in [0, -1] {
            let (l, _) = build_pages(&SheafScenario::new(3, 0, WitType::Wit1, shift)).unwrap();
            assert_eq!(l.live_columns(), vec![-1]);
        }
    }

    #[test]
    fn infeasible_codimension() {
        assert!(matches!(
            build_pages(&SheafScenario::new(3, 4, WitType::Wit0, 0)),
            Err(Error::InfeasibleScenario(_))
        ));
    }

    #[test]
    fn labels() {
        let (l, r) = build_pages(&SheafScenario::new(3, 1, WitType::Wit0, 1)).unwrap();
        assert_eq!(l.term(0, 2).unwrap().label, "Ext^2(Φ^0E, O)");
        assert_eq!(l.term(-1, 1).unwrap().label, "Ext^1(Φ^1E, O)");
        assert_eq!(r.term(1, -1).unwrap().label, "ι*(Φ^0Ext^1(E, O))⊗p*L");
        assert_eq!(r.term(2, 0).unwrap().label, "ι*(Φ^1Ext^2(E, O))⊗p*L");
    }

    #[test]
    fn right_pages_degenerate_at_two() {
        for n in 1..=4 {
            let (_, page) = degenerate(&PageGrid::empty(Side::Right, n));
            assert_eq!(page, 2);
        }
    }

    #[test]
    fn unconstrained_left_page_needs_e3() {
        let (g, page) = degenerate(&PageGrid::empty(Side::Left, 3));
        assert_eq!(page, 3);
        assert!(g.differentials.iter().all(|d| d.page == 2 && d.source.0 == 0 && d.target.0 == -1));
        assert!(!g.term(0, 0).unwrap().stable);
        assert!(!g.term(-1, 2).unwrap().stable);
    }

    #[test]
    fn empty_page_degenerates_at_two() {
        let mut g = PageGrid::empty(Side::Left, 2);
        for t in g.terms.iter_mut() {
            t.status = TermStatus::Zero;
        }
        assert_eq!(degenerate(&g).1, 2);
    }

    #[test]
    fn status_transitions_are_guarded() {
        let (mut l, _) = build_pages(&SheafScenario::new(3, 1, WitType::Wit0, 1)).unwrap();
        assert!(l.assume_zero(0, 0).is_err());
        assert!(l.assume_zero(0, 3).is_ok());
        assert!(l.assume_nonzero(0, 3).is_err());
        assert!(l.assume_nonzero(5, 5).is_err());
    }
}
