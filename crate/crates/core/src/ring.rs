//! Numerical even cohomology of the base surface `S` and of the Weierstrass
//! threefold `X = Θ·p*H(S) ⊕ p*H(S)`.
//!
//! Classes on `S` are triples `(r, d, s)` in degrees 0, 2, 4, with the divisor
//! part `d` expressed in a user supplied Picard lattice. A class on `X` is a
//! pair `(alpha, beta)` standing for `Θ·p*alpha + p*beta`; the only relation
//! needed to multiply is `Θ² = Θ·p*K_S`.

use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A vector in the Picard lattice of `S`, in the basis fixed by the Gram matrix.
pub type LatticeVector = Vec<Rational>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SurfaceModelData")]
pub struct SurfaceModel {
    picard_rank: usize,
    gram: Vec<Vec<i64>>,
    canonical: LatticeVector,
    k_trivial: bool,
    /// Whether the threefold itself is declared K-trivial, which pins
    /// `c1(ω) = K_S` for `ω = R¹p_*O_X`.
    threefold_k_trivial: bool,
    omega_class: LatticeVector,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceModelData {
    picard_rank: usize,
    gram: Vec<Vec<i64>>,
    canonical: LatticeVector,
    k_trivial: bool,
    #[serde(default)]
    threefold_k_trivial: bool,
    omega_class: LatticeVector,
}

impl TryFrom<SurfaceModelData> for SurfaceModel {
    type Error = Error;

    fn try_from(d: SurfaceModelData) -> Result<Self> {
        SurfaceModel::new(
            d.picard_rank,
            d.gram,
            d.canonical,
            d.k_trivial,
            d.threefold_k_trivial,
            d.omega_class,
        )
    }
}

impl SurfaceModel {
    pub fn new(
        picard_rank: usize,
        gram: Vec<Vec<i64>>,
        canonical: LatticeVector,
        k_trivial: bool,
        threefold_k_trivial: bool,
        omega_class: LatticeVector,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidModel(msg));
        if picard_rank == 0 {
            return invalid("picard_rank must be positive".into());
        }
        if gram.len() != picard_rank || gram.iter().any(|row| row.len() != picard_rank) {
            return invalid(format!("gram must be {picard_rank}x{picard_rank}"));
        }
        for (i, row) in gram.iter().enumerate() {
            for (j, g) in row.iter().enumerate().take(i) {
                if *g != gram[j][i] {
                    return invalid(format!("gram is not symmetric at ({i},{j})"));
                }
            }
        }
        if canonical.len() != picard_rank {
            return invalid(format!("canonical has length {}, expected {picard_rank}", canonical.len()));
        }
        if omega_class.len() != picard_rank {
            return invalid(format!("omega_class has length {}, expected {picard_rank}", omega_class.len()));
        }
        if k_trivial && canonical.iter().any(|c| !c.is_zero()) {
            return invalid("k_trivial is set but the canonical class is nonzero".into());
        }
        if threefold_k_trivial && omega_class != canonical {
            return invalid("a K-trivial threefold requires omega_class == canonical".into());
        }
        Ok(SurfaceModel { picard_rank, gram, canonical, k_trivial, threefold_k_trivial, omega_class })
    }

    pub fn picard_rank(&self) -> usize {
        self.picard_rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn canonical(&self) -> &[Rational] {
        &self.canonical
    }

    pub fn k_trivial(&self) -> bool {
        self.k_trivial
    }

    pub fn threefold_k_trivial(&self) -> bool {
        self.threefold_k_trivial
    }

    pub fn omega_class(&self) -> &[Rational] {
        &self.omega_class
    }

    pub fn check_vector(&self, v: &[Rational]) -> Result<()> {
        if v.len() == self.picard_rank {
            Ok(())
        } else {
            Err(Error::ModelMismatch { expected: self.picard_rank, found: v.len() })
        }
    }

    pub fn check_surface(&self, x: &SurfaceClass) -> Result<()> {
        self.check_vector(&x.d)
    }

    pub fn check_threefold(&self, u: &ThreefoldClass) -> Result<()> {
        self.check_surface(&u.alpha)?;
        self.check_surface(&u.beta)
    }

    /// Intersection number `d·d'` through the Gram matrix.
    pub fn pair(&self, d: &[Rational], e: &[Rational]) -> Result<Rational> {
        self.check_vector(d)?;
        self.check_vector(e)?;
        Ok(self.pair_unchecked(d, e))
    }

    fn pair_unchecked(&self, d: &[Rational], e: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, di) in d.iter().enumerate() {
            if di.is_zero() {
                continue;
            }
            for (j, ej) in e.iter().enumerate() {
                let g = self.gram[i][j];
                if g != 0 && !ej.is_zero() {
                    acc += &(di * ej * Rational::from_int(g));
                }
            }
        }
        acc
    }

    /// `K_S` as a degree-2 class on `S`.
    pub fn canonical_class(&self) -> SurfaceClass {
        SurfaceClass::divisor(self.canonical.clone())
    }

    /// Cup product on `S`; everything above degree 4 vanishes.
    pub fn surface_mul(&self, x: &SurfaceClass, y: &SurfaceClass) -> Result<SurfaceClass> {
        self.check_surface(x)?;
        self.check_surface(y)?;
        Ok(self.surface_mul_unchecked(x, y))
    }

    fn surface_mul_unchecked(&self, x: &SurfaceClass, y: &SurfaceClass) -> SurfaceClass {
        let r = &x.r * &y.r;
        let d = x.d.iter().zip(&y.d).map(|(a, b)| &x.r * b + &y.r * a).collect();
        let s = &x.r * &y.s + &y.r * &x.s + self.pair_unchecked(&x.d, &y.d);
        SurfaceClass { r, d, s }
    }

    /// Product on `X`:
    /// `(Θα + β)(Θα' + β') = Θ·(K_S·αα' + αβ' + α'β) + ββ'`.
    pub fn x_mul(&self, u: &ThreefoldClass, v: &ThreefoldClass) -> Result<ThreefoldClass> {
        self.check_threefold(u)?;
        self.check_threefold(v)?;
        Ok(self.x_mul_unchecked(u, v))
    }

    fn x_mul_unchecked(&self, u: &ThreefoldClass, v: &ThreefoldClass) -> ThreefoldClass {
        let m = |a: &SurfaceClass, b: &SurfaceClass| self.surface_mul_unchecked(a, b);
        let aa = m(&u.alpha, &v.alpha);
        let alpha = m(&self.canonical_class(), &aa) + m(&u.alpha, &v.beta) + m(&v.alpha, &u.beta);
        let beta = m(&u.beta, &v.beta);
        ThreefoldClass { alpha, beta }
    }

    /// `k`-th power of a class on `X`.
    pub fn x_pow(&self, u: &ThreefoldClass, k: u32) -> Result<ThreefoldClass> {
        self.check_threefold(u)?;
        let mut acc = ThreefoldClass::one(self.picard_rank);
        for _ in 0..k {
            acc = self.x_mul_unchecked(&acc, u);
        }
        Ok(acc)
    }

    /// Chern character of `O_X(D)`: `1 + D + D²/2 + D³/6`, exact by nilpotence.
    pub fn exp_divisor(&self, divisor: &DivisorClassX) -> Result<ThreefoldClass> {
        self.check_vector(&divisor.delta)?;
        let d = divisor.to_class();
        let d2 = self.x_mul_unchecked(&d, &d);
        let d3 = self.x_mul_unchecked(&d2, &d);
        let one = ThreefoldClass::one(self.picard_rank);
        Ok(one + d + d2.scale(&Rational::new(1, 2)) + d3.scale(&Rational::new(1, 6)))
    }

    /// `∫_X D·E·F` for three divisors, a convenience used by the slope code.
    pub fn triple(&self, d: &DivisorClassX, e: &DivisorClassX, f: &DivisorClassX) -> Result<Rational> {
        self.check_vector(&d.delta)?;
        self.check_vector(&e.delta)?;
        self.check_vector(&f.delta)?;
        let de = self.x_mul_unchecked(&d.to_class(), &e.to_class());
        Ok(x_integrate(&self.x_mul_unchecked(&de, &f.to_class())))
    }
}

/// Class `(r, d, s)` on the base surface, truncated at degree 4.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceClass {
    pub r: Rational,
    pub d: LatticeVector,
    pub s: Rational,
}

impl SurfaceClass {
    pub fn new(r: Rational, d: LatticeVector, s: Rational) -> Self {
        SurfaceClass { r, d, s }
    }

    pub fn zero(rank: usize) -> Self {
        SurfaceClass { r: Rational::zero(), d: vec![Rational::zero(); rank], s: Rational::zero() }
    }

    pub fn one(rank: usize) -> Self {
        SurfaceClass { r: Rational::one(), ..SurfaceClass::zero(rank) }
    }

    pub fn divisor(d: LatticeVector) -> Self {
        SurfaceClass { r: Rational::zero(), d, s: Rational::zero() }
    }

    /// Point class, normalized so that `∫_S [pt] = 1`.
    pub fn point(rank: usize) -> Self {
        SurfaceClass { s: Rational::one(), ..SurfaceClass::zero(rank) }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero() && self.d.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SurfaceClass { r: c * &self.r, d: self.d.iter().map(|x| c * x).collect(), s: c * &self.s }
    }
}

fn assert_same_rank(a: &[Rational], b: &[Rational]) {
    assert_eq!(a.len(), b.len(), "model mismatch: adding classes of different Picard rank");
}

impl Add for SurfaceClass {
    type Output = SurfaceClass;
    fn add(self, rhs: SurfaceClass) -> SurfaceClass {
        assert_same_rank(&self.d, &rhs.d);
        SurfaceClass {
            r: self.r + rhs.r,
            d: self.d.into_iter().zip(rhs.d).map(|(a, b)| a + b).collect(),
            s: self.s + rhs.s,
        }
    }
}

impl Sub for SurfaceClass {
    type Output = SurfaceClass;
    fn sub(self, rhs: SurfaceClass) -> SurfaceClass {
        self + (-rhs)
    }
}

impl Neg for SurfaceClass {
    type Output = SurfaceClass;
    fn neg(self) -> SurfaceClass {
        SurfaceClass { r: -self.r, d: self.d.into_iter().map(|x| -x).collect(), s: -self.s }
    }
}

/// Class `Θ·p*alpha + p*beta` on the threefold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreefoldClass {
    pub alpha: SurfaceClass,
    pub beta: SurfaceClass,
}

impl ThreefoldClass {
    pub fn new(alpha: SurfaceClass, beta: SurfaceClass) -> Self {
        ThreefoldClass { alpha, beta }
    }

    pub fn zero(rank: usize) -> Self {
        ThreefoldClass { alpha: SurfaceClass::zero(rank), beta: SurfaceClass::zero(rank) }
    }

    pub fn one(rank: usize) -> Self {
        ThreefoldClass { alpha: SurfaceClass::zero(rank), beta: SurfaceClass::one(rank) }
    }

    /// The section `Θ`.
    pub fn theta(rank: usize) -> Self {
        ThreefoldClass { alpha: SurfaceClass::one(rank), beta: SurfaceClass::zero(rank) }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ThreefoldClass { alpha: self.alpha.scale(c), beta: self.beta.scale(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }

    /// `H⁰(X)` coefficient.
    pub fn degree0(&self) -> &Rational {
        &self.beta.r
    }

    /// `H²(X)` part as a divisor `aΘ + p*δ`.
    pub fn degree2(&self) -> DivisorClassX {
        DivisorClassX { a: self.alpha.r.clone(), delta: self.beta.d.clone() }
    }

    /// `H⁴(X)` part: `(Θ·p*δ coefficient vector, p*[pt] coefficient)`.
    pub fn degree4(&self) -> (&[Rational], &Rational) {
        (&self.alpha.d, &self.beta.s)
    }

    /// `H⁶(X)` part, the coefficient of `Θ·p*[pt]`.
    pub fn degree6(&self) -> &Rational {
        &self.alpha.s
    }
}

impl Add for ThreefoldClass {
    type Output = ThreefoldClass;
    fn add(self, rhs: ThreefoldClass) -> ThreefoldClass {
        ThreefoldClass { alpha: self.alpha + rhs.alpha, beta: self.beta + rhs.beta }
    }
}

impl Sub for ThreefoldClass {
    type Output = ThreefoldClass;
    fn sub(self, rhs: ThreefoldClass) -> ThreefoldClass {
        self + (-rhs)
    }
}

impl Neg for ThreefoldClass {
    type Output = ThreefoldClass;
    fn neg(self) -> ThreefoldClass {
        ThreefoldClass { alpha: -self.alpha, beta: -self.beta }
    }
}

/// Divisor `aΘ + p*delta` on `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorClassX {
    pub a: Rational,
    pub delta: LatticeVector,
}

impl DivisorClassX {
    pub fn new(a: Rational, delta: LatticeVector) -> Self {
        DivisorClassX { a, delta }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClassX { a: Rational::zero(), delta: vec![Rational::zero(); rank] }
    }

    pub fn theta(rank: usize) -> Self {
        DivisorClassX { a: Rational::one(), delta: vec![Rational::zero(); rank] }
    }

    pub fn pullback(delta: LatticeVector) -> Self {
        DivisorClassX { a: Rational::zero(), delta }
    }

    pub fn to_class(&self) -> ThreefoldClass {
        let rank = self.delta.len();
        ThreefoldClass {
            alpha: SurfaceClass { r: self.a.clone(), ..SurfaceClass::zero(rank) },
            beta: SurfaceClass::divisor(self.delta.clone()),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        DivisorClassX { a: c * &self.a, delta: self.delta.iter().map(|x| c * x).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.delta.iter().all(Rational::is_zero)
    }
}

impl Add for DivisorClassX {
    type Output = DivisorClassX;
    fn add(self, rhs: DivisorClassX) -> DivisorClassX {
        assert_same_rank(&self.delta, &rhs.delta);
        DivisorClassX {
            a: self.a + rhs.a,
            delta: self.delta.into_iter().zip(rhs.delta).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for DivisorClassX {
    type Output = DivisorClassX;
    fn sub(self, rhs: DivisorClassX) -> DivisorClassX {
        self + (-rhs)
    }
}

impl Neg for DivisorClassX {
    type Output = DivisorClassX;
    fn neg(self) -> DivisorClassX {
        DivisorClassX { a: -self.a, delta: self.delta.into_iter().map(|x| -x).collect() }
    }
}

/// Degree of `X` integration: only the `Θ·p*[pt]` coefficient survives.
pub fn x_integrate(v: &ThreefoldClass) -> Rational {
    v.alpha.s.clone()
}

pub fn pullback(x: &SurfaceClass) -> ThreefoldClass {
    ThreefoldClass { alpha: SurfaceClass::zero(x.d.len()), beta: x.clone() }
}

/// `p_*`: kills pullbacks and strips the `Θ` factor.
pub fn pushforward(v: &ThreefoldClass) -> SurfaceClass {
    v.alpha.clone()
}

/// Intersection with the fiber class `f`: `Θ·f = 1`, `p*δ·f = 0`.
pub fn fiber_degree(c1: &DivisorClassX) -> Rational {
    c1.a.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::Preset;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    fn quartic() -> SurfaceModel {
        Preset::K3Quartic.model()
    }

    fn demo() -> SurfaceModel {
        Preset::GeneralDemo.model()
    }

    #[test]
    fn surface_unit_is_identity() {
        let m = demo();
        let y = SurfaceClass::new(q(2, 3), vec![qi(1), q(-1, 2)], qi(5));
        assert_eq!(m.surface_mul(&SurfaceClass::one(2), &y).unwrap(), y);
    }

    #[test]
    fn hyperplane_square_on_quartic_lattice() {
        let m = quartic();
        let h = SurfaceClass::divisor(vec![qi(1)]);
        assert_eq!(m.surface_mul(&h, &h).unwrap(), SurfaceClass::new(qi(0), vec![qi(0)], qi(4)));
    }

    #[test]
    fn point_times_divisor_vanishes() {
        let m = quartic();
        let prod = m.surface_mul(&SurfaceClass::point(1), &SurfaceClass::divisor(vec![qi(1)])).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn mismatched_rank_is_rejected() {
        let m = quartic();
        let err = m.surface_mul(&SurfaceClass::one(2), &SurfaceClass::one(1)).unwrap_err();
        assert_eq!(err, Error::ModelMismatch { expected: 1, found: 2 });
        assert!(m.x_mul(&ThreefoldClass::theta(1), &ThreefoldClass::theta(3)).is_err());
    }

    #[test]
    fn theta_square_vanishes_when_k_trivial() {
        let m = quartic();
        let t = ThreefoldClass::theta(1);
        assert!(m.x_mul(&t, &t).unwrap().is_zero());
        assert!(m.x_pow(&t, 3).unwrap().is_zero());
    }

    #[test]
    fn theta_square_is_theta_times_canonical() {
        let m = demo();
        let t = ThreefoldClass::theta(2);
        let expected = m.x_mul(&t, &pullback(&m.canonical_class())).unwrap();
        assert_eq!(m.x_mul(&t, &t).unwrap(), expected);
        assert!(!expected.is_zero());
    }

    #[test]
    fn theta_times_point_integrates_to_one() {
        let m = quartic();
        let v = m.x_mul(&ThreefoldClass::theta(1), &pullback(&SurfaceClass::point(1))).unwrap();
        assert_eq!(x_integrate(&v), qi(1));
        assert_eq!(*v.degree6(), qi(1));
    }

    #[test]
    fn pullbacks_integrate_to_zero() {
        let x = SurfaceClass::new(qi(3), vec![qi(2)], qi(7));
        assert_eq!(x_integrate(&pullback(&x)), qi(0));
    }

    #[test]
    fn omega_squared_against_minus_theta_on_quartic() {
        // ω = Θ + p*H, so ω² = 2Θp*H + p*H² and -Θ·ω² integrates to -H² = -4.
        let m = quartic();
        let omega = DivisorClassX::new(qi(1), vec![qi(1)]).to_class();
        let w2 = m.x_mul(&omega, &omega).unwrap();
        let v = m.x_mul(&w2, &(-ThreefoldClass::theta(1))).unwrap();
        assert_eq!(x_integrate(&v), qi(-4));
    }

    #[test]
    fn push_pull() {
        let m = quartic();
        let x = SurfaceClass::new(qi(1), vec![qi(2)], qi(3));
        assert!(pushforward(&pullback(&x)).is_zero());
        assert_eq!(pushforward(&ThreefoldClass::theta(1)), SurfaceClass::one(1));
        let h = pullback(&SurfaceClass::divisor(vec![qi(1)]));
        assert_eq!(m.x_mul(&h, &h).unwrap(), pullback(&SurfaceClass::new(qi(0), vec![qi(0)], qi(4))));
    }

    #[test]
    fn exp_of_multiple_of_theta_is_linear_when_k_trivial() {
        let m = quartic();
        let ch = m.exp_divisor(&DivisorClassX::theta(1).scale(&qi(7))).unwrap();
        assert_eq!(ch, ThreefoldClass::one(1) + ThreefoldClass::theta(1).scale(&qi(7)));
        assert_eq!(m.exp_divisor(&DivisorClassX::zero(1)).unwrap(), ThreefoldClass::one(1));
    }

    #[test]
    fn exp_of_theta_with_nonzero_canonical() {
        // 1 + Θ + ½Θp*κ + ⅙Θp*(κ²), with κ = (-2,-3) on the demo lattice: κ² = 8.
        let m = demo();
        let ch = m.exp_divisor(&DivisorClassX::theta(2)).unwrap();
        let kappa = m.canonical().to_vec();
        let expected = ThreefoldClass::new(
            SurfaceClass::new(qi(1), kappa.iter().map(|k| k * &q(1, 2)).collect(), q(8, 6)),
            SurfaceClass::one(2),
        );
        assert_eq!(ch, expected);
    }

    #[test]
    fn fiber_degrees() {
        assert_eq!(fiber_degree(&DivisorClassX::theta(1)), qi(1));
        assert_eq!(fiber_degree(&DivisorClassX::pullback(vec![qi(5)])), qi(0));
        let d = -DivisorClassX::new(qi(2), vec![qi(1)]) + DivisorClassX::theta(1);
        assert_eq!(fiber_degree(&d), qi(-1));
    }

    #[test]
    fn model_validation() {
        assert!(SurfaceModel::new(1, vec![vec![4]], vec![qi(1)], true, false, vec![qi(1)]).is_err());
        assert!(SurfaceModel::new(2, vec![vec![0, 1], vec![2, 0]], vec![qi(0); 2], true, true, vec![qi(0); 2]).is_err());
        assert!(SurfaceModel::new(1, vec![vec![4]], vec![qi(0)], true, true, vec![qi(1)]).is_err());
        assert!(SurfaceModel::new(0, vec![], vec![], true, true, vec![]).is_err());
        let m = SurfaceModel::new(1, vec![vec![2]], vec![qi(0)], true, true, vec![qi(0)]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<SurfaceModel>(&json).unwrap(), m);
        let bad = json.replace("\"k_trivial\":true", "\"k_trivial\":true,\"extra\":1");
        assert!(serde_json::from_str::<SurfaceModel>(&bad).is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(p, d)| Rational::new(p, d))
    }

    fn surface_class() -> impl Strategy<Value = SurfaceClass> {
        (small_rational(), prop::collection::vec(small_rational(), 2), small_rational())
            .prop_map(|(r, d, s)| SurfaceClass::new(r, d, s))
    }

    fn threefold_class() -> impl Strategy<Value = ThreefoldClass> {
        (surface_class(), surface_class()).prop_map(|(a, b)| ThreefoldClass::new(a, b))
    }

    proptest! {
        #[test]
        fn x_mul_is_commutative_and_associative(u in threefold_class(), v in threefold_class(), w in threefold_class()) {
            let m = demo();
            prop_assert_eq!(m.x_mul(&u, &v).unwrap(), m.x_mul(&v, &u).unwrap());
            let left = m.x_mul(&m.x_mul(&u, &v).unwrap(), &w).unwrap();
            let right = m.x_mul(&u, &m.x_mul(&v, &w).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn x_mul_distributes(u in threefold_class(), v in threefold_class(), w in threefold_class()) {
            let m = demo();
            let lhs = m.x_mul(&u, &(v.clone() + w.clone())).unwrap();
            let rhs = m.x_mul(&u, &v).unwrap() + m.x_mul(&u, &w).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn exp_is_a_homomorphism(a in small_rational(), b in small_rational(),
                                 d in prop::collection::vec(small_rational(), 2),
                                 e in prop::collection::vec(small_rational(), 2)) {
            let m = demo();
            let x = DivisorClassX::new(a, d);
            let y = DivisorClassX::new(b, e);
            let lhs = m.x_mul(&m.exp_divisor(&x).unwrap(), &m.exp_divisor(&y).unwrap()).unwrap();
            prop_assert_eq!(lhs, m.exp_divisor(&(x + y)).unwrap());
        }

        #[test]
        fn projection_formula(x in surface_class()) {
            let m = demo();
            let v = m.x_mul(&ThreefoldClass::theta(2), &pullback(&x)).unwrap();
            prop_assert_eq!(pushforward(&v), x);
        }
    }
}
