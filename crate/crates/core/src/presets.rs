//! Built-in base surfaces.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::{qi, Rational};
use crate::ring::{LatticeVector, SurfaceModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Quartic K3: `ρ = 1`, `H² = 4`, `K_S = 0`.
    K3Quartic,
    /// Enriques surface, sublattice spanned by a class with `H² = 2`; `K_S` is
    /// 2-torsion, hence zero numerically.
    Enriques,
    /// Hirzebruch surface `F_1` with basis `(e, f)`, `e² = -1`, `e·f = 1`,
    /// `f² = 0` and `K = -2e - 3f`. Not numerically K-trivial, so it only
    /// serves ring and character demonstrations.
    GeneralDemo,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::K3Quartic, Preset::Enriques, Preset::GeneralDemo];

    pub fn name(self) -> &'static str {
        match self {
            Preset::K3Quartic => "k3_quartic",
            Preset::Enriques => "enriques",
            Preset::GeneralDemo => "general_demo",
        }
    }

    pub fn model(self) -> SurfaceModel {
        let built = match self {
            Preset::K3Quartic => SurfaceModel::new(1, vec![vec![4]], vec![qi(0)], true, true, vec![qi(0)]),
            Preset::Enriques => SurfaceModel::new(1, vec![vec![2]], vec![qi(0)], true, true, vec![qi(0)]),
            Preset::GeneralDemo => {
                let k = vec![qi(-2), qi(-3)];
                SurfaceModel::new(2, vec![vec![-1, 1], vec![1, 0]], k.clone(), false, true, k)
            }
        };
        built.expect("preset models are valid")
    }

    /// The ample class `H_S` used when none is given: the lattice generator
    /// for the rank-one presets, `e + 2f` (with `H² = 3`) on `F_1`.
    pub fn default_ample(self) -> LatticeVector {
        match self {
            Preset::K3Quartic | Preset::Enriques => vec![Rational::one()],
            Preset::GeneralDemo => vec![qi(1), qi(2)],
        }
    }

    /// Whether the stability commands accept this preset.
    pub fn supports_stability(self) -> bool {
        self.model().k_trivial()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown preset {s:?} (expected k3_quartic, enriques or general_demo)")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_validate() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
            let m = p.model();
            let h = p.default_ample();
            assert!(m.pair(&h, &h).unwrap().is_positive());
        }
        assert!("k3".parse::<Preset>().is_err());
    }

    #[test]
    fn only_num_trivial_presets_support_stability() {
        assert!(Preset::K3Quartic.supports_stability());
        assert!(Preset::Enriques.supports_stability());
        assert!(!Preset::GeneralDemo.supports_stability());
    }

    #[test]
    fn canonical_square_of_f1_is_eight() {
        let m = Preset::GeneralDemo.model();
        assert_eq!(m.pair(m.canonical(), m.canonical()).unwrap(), qi(8));
    }
}
