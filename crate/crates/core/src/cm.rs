//! CM machinery: reduced binary quadratic forms and their CM points,
//! Taylor coefficients of Phi_d about the diagonal, Masser's explicit
//! formulas for psi = E2* E4 / E6 at CM points, the bridge
//! chi* = psi (j - 1728), and Galois-orbit consistency checks.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Float, Integer};
use thiserror::Error;

use crate::exactalg::Rat;
use crate::hecke::GL2Matrix;
use crate::hp::{round_to_integer, ComplexHP};
use crate::modpoly::{build_phi, BiPolynomial, ModPolyError, RecoveryConfig};
use crate::numeval::{eval_all, random_tau, seeded_rng, NumEvalError};

#[derive(Debug, Error)]
pub enum CmError {
    #[error("invalid discriminant {0}: need D < 0 and D = 0 or 1 mod 4")]
    InvalidDiscriminant(i64),
    #[error("formula pole: j(tau) = 1728 (discriminant -4)")]
    FormulaPole,
    #[error("small denominator: {0}")]
    SmallDenominator(String),
    #[error("modular polynomial of level {0} is not available")]
    LevelUnavailable(u64),
    #[error("no candidate level certified by the Phi_d(j, j) residual: tried {0:?}")]
    NoCertifiedLevel(Vec<u64>),
    #[error(transparent)]
    Eval(#[from] NumEvalError),
    #[error(transparent)]
    ModPoly(#[from] ModPolyError),
}

/// A reduced binary quadratic form A x^2 + B xy + C y^2 of negative
/// discriminant, together with its CM point (-B + i sqrt(|D|)) / (2A).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QuadraticPoint {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticPoint {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0
            && b.abs() <= a
            && a <= c
            && (b >= 0 || (b.abs() < a && a < c))
    }

    /// gcd(A, B, C) = 1; class numbers count primitive forms only.
    pub fn is_primitive(&self) -> bool {
        crate::exactalg::arith::gcd(crate::exactalg::arith::gcd(self.a, self.b), self.c) == 1
    }

    /// The CM point in the upper half plane.
    pub fn tau(&self, prec: u32) -> ComplexHP {
        let d = self.discriminant();
        assert!(d < 0);
        let root = Float::with_val(prec, -d).sqrt();
        ComplexHP::from_floats(
            Float::with_val(prec, -self.b) / (2 * self.a),
            root / (2 * self.a),
        )
    }

    /// The integer matrix (-B, -2C; 2A, B) fixing tau under the Moebius
    /// action; its determinant is |D|.
    pub fn fixing_matrix_unscaled(&self) -> GL2Matrix {
        GL2Matrix::new(-self.b, -2 * self.c, 2 * self.a, self.b)
    }
}

impl std::fmt::Display for QuadraticPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// All reduced forms of discriminant D; the count is the class number h(D).
pub fn reduced_forms(d: i64) -> Result<Vec<QuadraticPoint>, CmError> {
    if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(CmError::InvalidDiscriminant(d));
    }
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let form = QuadraticPoint { a, b, c };
            if form.is_reduced() && form.is_primitive() {
                out.push(form);
            }
        }
        a += 1;
    }
    out.sort_by_key(|f| (f.a, f.b));
    Ok(out)
}

/// The primitive part of the fixing matrix. Its determinant, or the
/// unscaled determinant |D|, is the candidate level for Phi_d.
pub fn fixing_matrix(p: &QuadraticPoint) -> GL2Matrix {
    p.fixing_matrix_unscaled().primitive_part()
}

/// A set of built classical modular polynomials, keyed by level.
#[derive(Default)]
pub struct PhiSet {
    map: BTreeMap<u64, BiPolynomial>,
}

impl PhiSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, d: u64, phi: BiPolynomial) {
        self.map.insert(d, phi);
    }

    pub fn get(&self, d: u64) -> Result<&BiPolynomial, CmError> {
        self.map.get(&d).ok_or(CmError::LevelUnavailable(d))
    }

    pub fn contains(&self, d: u64) -> bool {
        self.map.contains_key(&d)
    }

    pub fn levels(&self) -> Vec<u64> {
        self.map.keys().copied().collect()
    }

    /// Build (with default settings) any missing levels.
    pub fn ensure(&mut self, levels: &[u64]) -> Result<(), CmError> {
        for &d in levels {
            if !self.map.contains_key(&d) {
                let phi = build_phi(d, &RecoveryConfig::for_level(d))?;
                self.map.insert(d, phi);
            }
        }
        Ok(())
    }
}

/// Candidate levels for a form: the primitive fixing-matrix determinant
/// first, then the unscaled |D|. Level 1 is skipped (Phi_1(j, j) vanishes
/// identically, certifying nothing).
pub fn level_candidates(p: &QuadraticPoint) -> Vec<u64> {
    let prim = fixing_matrix(p).det() as u64;
    let full = p.fixing_matrix_unscaled().det() as u64;
    let mut out = Vec::new();
    for d in [prim, full] {
        if d > 1 && !out.contains(&d) {
            out.push(d);
        }
    }
    out
}

/// Certify the level by the Phi_d(j(tau), j(tau)) residual (< 1e-10,
/// normalised by the largest monomial). Returns the level and its residual.
pub fn certify_level(
    p: &QuadraticPoint,
    phis: &PhiSet,
    prec: u32,
) -> Result<(u64, Float), CmError> {
    let tau = p.tau(prec + 32);
    let j = eval_all(&tau, prec)?.j;
    let candidates = level_candidates(p);
    for &d in &candidates {
        let phi = phis.get(d)?;
        let val = phi.eval(&j, &j);
        let mut scale = phi.max_monomial(&j, &j);
        if scale < 1 {
            // all monomials can vanish together (j = 0); fall back to the
            // absolute residual
            scale = Float::with_val(scale.prec(), 1);
        }
        let resid = val.abs() / scale;
        if resid.to_f64() < 1e-10 {
            return Ok((d, resid));
        }
    }
    Err(CmError::NoCertifiedLevel(candidates))
}

/// Taylor coefficients beta_(i,k) of Phi_d about (center, center), for
/// 0 < i + k <= max_order, computed by evaluating the scaled mixed partial
/// derivatives.
#[derive(Clone, Debug)]
pub struct BetaTable {
    pub d: u64,
    pub center: ComplexHP,
    pub max_order: u32,
    entries: BTreeMap<(u32, u32), ComplexHP>,
}

impl BetaTable {
    pub fn get(&self, i: u32, k: u32) -> &ComplexHP {
        &self.entries[&(i, k)]
    }
}

fn factorial(n: u32) -> Integer {
    let mut out = Integer::from(1);
    for i in 2..=n {
        out *= i;
    }
    out
}

/// Numeric beta table about a complex center.
pub fn beta_table(
    phis: &PhiSet,
    d: u64,
    center: &ComplexHP,
    max_order: u32,
) -> Result<BetaTable, CmError> {
    assert!(max_order >= 1);
    let phi = phis.get(d)?;
    let prec = center.prec();
    let mut entries = BTreeMap::new();
    let mut row: Vec<BiPolynomial> = vec![phi.clone()];
    for i in 0..=max_order {
        if i > 0 {
            row = vec![row[0].derivative(0)];
        }
        let mut current = row[0].clone();
        for k in 0..=(max_order - i) {
            if i + k >= 1 {
                let fact = factorial(i) * factorial(k);
                let inv_fact = Float::with_val(prec, fact).recip();
                let value = current.eval(center, center).mul_float(&inv_fact);
                entries.insert((i, k), value);
            }
            if k < max_order - i {
                current = current.derivative(1);
            }
        }
    }
    Ok(BetaTable {
        d,
        center: center.clone(),
        max_order,
        entries,
    })
}

/// Exact beta table about a rational center (for levels with rational
/// singular moduli).
pub fn beta_table_exact(
    phis: &PhiSet,
    d: u64,
    center: &Rat,
    max_order: u32,
) -> Result<BTreeMap<(u32, u32), Rat>, CmError> {
    let phi = phis.get(d)?;
    let mut entries = BTreeMap::new();
    let mut dx = phi.clone();
    for i in 0..=max_order {
        if i > 0 {
            dx = dx.derivative(0);
        }
        let mut current = dx.clone();
        for k in 0..=(max_order - i) {
            if i + k >= 1 {
                let fact = Rat::from(factorial(i) * factorial(k));
                let value = current.specialize_y(center).eval(center) / fact;
                entries.insert((i, k), value);
            }
            if k < max_order - i {
                current = current.derivative(1);
            }
        }
    }
    Ok(entries)
}

/// True if d = 3 k^2 for some odd k (the selector between Masser's two
/// closed formulas).
pub fn is_three_times_odd_square(d: u64) -> bool {
    if d % 3 != 0 {
        return false;
    }
    let k2 = d / 3;
    let k = (k2 as f64).sqrt().round() as u64;
    k * k == k2 && k % 2 == 1
}

/// The direct evaluation psi = E2* E4 / E6 (the oracle the formulas are
/// checked against).
pub fn psi_direct(tau: &ComplexHP, prec: u32) -> Result<ComplexHP, NumEvalError> {
    let v = eval_all(tau, prec)?;
    Ok(v.e2star.mul(&v.e4).div(&v.e6))
}

/// Masser's closed formula for psi(tau) at a CM point, driven by the
/// certified level d and the Taylor coefficients of Phi_d about
/// (j(tau), j(tau)).
///
/// Errors: `FormulaPole` at j = 1728 (discriminant -4); `SmallDenominator`
/// when beta_(0,1) nearly vanishes, and also at j = 0 (the order-3 elliptic
/// point), where the formulas degenerate and no value is reported.
pub fn masser_psi(
    p: &QuadraticPoint,
    phis: &PhiSet,
    prec: u32,
) -> Result<ComplexHP, CmError> {
    let tau = p.tau(prec + 32);
    let j = eval_all(&tau, prec)?.j;
    let j1728 = j.sub(&ComplexHP::from_int(1728, prec));
    if j1728.abs().to_f64() < 1e-8 {
        return Err(CmError::FormulaPole);
    }
    if j.abs().to_f64() < 1e-8 {
        return Err(CmError::SmallDenominator(
            "j(tau) = 0: the Taylor-coefficient formulas degenerate at the order-3 \
             elliptic point"
                .into(),
        ));
    }
    let (d, _) = certify_level(p, phis, prec)?;
    let betas = beta_table(phis, d, &j, 4)?;
    let b01 = betas.get(0, 1);
    let alternating = if is_three_times_odd_square(d) {
        // q-case: beta_40 - beta_31 + beta_22 - beta_13 + beta_04
        betas
            .get(4, 0)
            .sub(betas.get(3, 1))
            .add(betas.get(2, 2))
            .sub(betas.get(1, 3))
            .add(betas.get(0, 4))
    } else {
        // p-case: beta_20 - beta_11 + beta_02
        betas.get(2, 0).sub(betas.get(1, 1)).add(betas.get(0, 2))
    };
    // guard only against a denominator that is pure rounding noise relative
    // to the numerator it divides
    let eps = Float::with_val(prec, 2f64).pow(-(prec as i32));
    let scale = {
        let a = alternating.abs();
        if a < 1 {
            Float::with_val(prec, 1)
        } else {
            a
        }
    };
    if b01.abs() < eps * scale {
        return Err(CmError::SmallDenominator(format!(
            "beta_(0,1) = {b01} is below tolerance at level {d}"
        )));
    }
    let first = j.mul_i64(9).mul(&alternating).div(b01);
    let second = j
        .mul_i64(7)
        .sub(&ComplexHP::from_int(6912, prec))
        .mul_i64(3)
        .div(&j1728.mul_i64(2));
    // The closed formulas are stated in a normalisation that carries an
    // extra factor 3/2 relative to psi = E2* E4 / E6 (checked exactly
    // against the direct evaluation across discriminants); rescale.
    let scale23 = Float::with_val(prec, 2) / 3u32;
    Ok(first.add(&second).mul_float(&scale23))
}

/// chi* at a CM point through Masser's formula and the bridge
/// chi* = psi (j - 1728). ([`certify_bridge`] validates the bridge itself.)
pub fn chi_star_cm(
    p: &QuadraticPoint,
    phis: &PhiSet,
    prec: u32,
) -> Result<ComplexHP, CmError> {
    let psi = masser_psi(p, phis, prec)?;
    let tau = p.tau(prec + 32);
    let j = eval_all(&tau, prec)?.j;
    Ok(psi.mul(&j.sub(&ComplexHP::from_int(1728, prec))))
}

/// Numerical certification of the bridge identity chi* = psi (j - 1728)
/// at seeded random (non-CM) points; returns the worst absolute deviation.
/// The identity is exact: j - 1728 = E6^2 / Delta, so
/// psi (j - 1728) = E2* E4 E6 / Delta = chi*.
pub fn certify_bridge(samples: usize, prec: u32, seed: u64) -> Result<Float, CmError> {
    let mut rng = seeded_rng(seed);
    let mut worst = Float::with_val(prec, 0);
    for _ in 0..samples {
        let tau = random_tau(&mut rng, prec + 32);
        let v = eval_all(&tau, prec)?;
        let psi = v.e2star.mul(&v.e4).div(&v.e6);
        let bridge = psi.mul(&v.j.sub(&ComplexHP::from_int(1728, prec)));
        let diff = bridge.dist(&v.chi_star);
        if diff > worst {
            worst = diff;
        }
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Galois orbit checks
// ---------------------------------------------------------------------------

/// Continued-fraction rational reconstruction of a real value, with a
/// denominator bound and an absolute tolerance.
///
/// The float is first converted to the exact dyadic rational it represents,
/// so the continued-fraction walk itself is exact arithmetic.
pub fn reconstruct_rational(x: &Float, max_den: u64, tol: f64) -> Option<Rat> {
    let exact = x.to_rational()?;
    let tol = rug::Rational::from_f64(tol)?;
    let mut a = exact.clone();
    let (mut p0, mut q0) = (Integer::from(1), Integer::from(0));
    let (mut p1, mut q1): (Integer, Integer) = {
        let f = rug::Rational::from(&a).floor();
        (f.numer().clone(), Integer::from(1))
    };
    for _ in 0..10_000 {
        if q1 <= max_den {
            let approx = rug::Rational::from((p1.clone(), q1.clone()));
            let mut diff = exact.clone() - approx;
            diff.abs_mut();
            if diff < tol {
                return Some(Rat(rug::Rational::from((p1, q1))));
            }
        }
        let floor = rug::Rational::from(&a).floor();
        let frac = a - &floor;
        if frac == 0 {
            break;
        }
        a = frac.recip();
        let ai = rug::Rational::from(&a).floor().numer().clone();
        let p2 = Integer::from(&ai * &p1) + &p0;
        let q2 = Integer::from(&ai * &q1) + &q0;
        if q2 > max_den {
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }
    None
}

/// Outcome of reconstructing one symmetric function of chi* values.
#[derive(Clone, Debug)]
pub enum Reconstruction {
    Rational { value: Rat, error: f64 },
    Failed { value: ComplexHP },
}

/// Per-point outcome of the Masser-formula comparison.
#[derive(Clone, Debug)]
pub enum MasserOutcome {
    Agreement { level: u64, difference: f64 },
    Skipped { reason: String },
}

/// Full consistency report for the Galois orbit of discriminant D.
#[derive(Debug)]
pub struct GaloisReport {
    pub disc: i64,
    pub forms: Vec<QuadraticPoint>,
    pub j_values: Vec<ComplexHP>,
    pub chi_star_values: Vec<ComplexHP>,
    /// distance of each elementary symmetric function of the j-values from
    /// the nearest integer
    pub j_integrality: Vec<f64>,
    /// reconstruction of each elementary symmetric function of the chi*
    /// values
    pub chi_star_sym: Vec<Reconstruction>,
    pub masser: Vec<MasserOutcome>,
    pub levels_certified: bool,
}

/// Elementary symmetric functions e_1..e_n of complex values.
fn elementary_symmetric(values: &[ComplexHP], prec: u32) -> Vec<ComplexHP> {
    let n = values.len();
    let mut e = vec![ComplexHP::new(prec); n + 1];
    e[0] = ComplexHP::from_int(1, prec);
    for v in values {
        for k in (1..=n).rev() {
            let t = e[k - 1].mul(v);
            e[k] = e[k].add(&t);
        }
    }
    e.remove(0);
    e
}

pub fn galois_orbit_check(
    disc: i64,
    phis: &PhiSet,
    prec: u32,
) -> Result<GaloisReport, CmError> {
    let forms = reduced_forms(disc)?;
    let mut j_values = Vec::new();
    let mut chi_star_values = Vec::new();
    let mut masser = Vec::new();
    let mut levels_certified = true;
    for p in &forms {
        let tau = p.tau(prec + 32);
        let v = eval_all(&tau, prec)?;
        j_values.push(v.j.clone());
        chi_star_values.push(v.chi_star.clone());
        match masser_psi(p, phis, prec) {
            Ok(by_formula) => {
                let direct = psi_direct(&tau, prec)?;
                let level = certify_level(p, phis, prec)?.0;
                masser.push(MasserOutcome::Agreement {
                    level,
                    difference: by_formula.dist(&direct).to_f64(),
                });
            }
            Err(CmError::FormulaPole) => masser.push(MasserOutcome::Skipped {
                reason: "formula pole at j = 1728".into(),
            }),
            Err(CmError::SmallDenominator(why)) => {
                masser.push(MasserOutcome::Skipped { reason: why })
            }
            Err(CmError::NoCertifiedLevel(cands)) => {
                levels_certified = false;
                masser.push(MasserOutcome::Skipped {
                    reason: format!("no certified level among {cands:?}"),
                });
            }
            Err(e) => return Err(e),
        }
    }

    let j_integrality = elementary_symmetric(&j_values, prec)
        .iter()
        .map(|e| {
            let nearest = round_to_integer(e.re());
            let d = e.sub(&ComplexHP::from_floats(
                Float::with_val(prec, nearest),
                Float::new(prec),
            ));
            d.abs().to_f64()
        })
        .collect();

    let chi_star_sym = elementary_symmetric(&chi_star_values, prec)
        .iter()
        .map(|e| {
            if e.im().to_f64().abs() > 1e-10 {
                return Reconstruction::Failed { value: e.clone() };
            }
            match reconstruct_rational(e.re(), 1_000_000_000_000, 1e-10) {
                Some(r) => {
                    let err = (Float::with_val(prec, &r.0) - e.re()).abs().to_f64();
                    Reconstruction::Rational { value: r, error: err }
                }
                None => Reconstruction::Failed { value: e.clone() },
            }
        })
        .collect();

    Ok(GaloisReport {
        disc,
        forms,
        j_values,
        chi_star_values,
        j_integrality,
        chi_star_sym,
        masser,
        levels_certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_forms_small_discriminants() {
        assert_eq!(
            reduced_forms(-3).unwrap(),
            vec![QuadraticPoint { a: 1, b: 1, c: 1 }]
        );
        assert_eq!(
            reduced_forms(-4).unwrap(),
            vec![QuadraticPoint { a: 1, b: 0, c: 1 }]
        );
        assert_eq!(
            reduced_forms(-15).unwrap(),
            vec![
                QuadraticPoint { a: 1, b: 1, c: 4 },
                QuadraticPoint { a: 2, b: 1, c: 2 }
            ]
        );
        assert!(matches!(
            reduced_forms(-5),
            Err(CmError::InvalidDiscriminant(-5))
        ));
        assert!(matches!(
            reduced_forms(4),
            Err(CmError::InvalidDiscriminant(4))
        ));
    }

    #[test]
    fn reduced_forms_match_bruteforce_box_scan() {
        // independent oracle: scan the whole (A, B, C) box and test the
        // reduction inequalities directly
        for d in [-3i64, -4, -7, -8, -11, -15, -20, -23, -47] {
            let bound = (-d) + 1;
            let mut count = 0;
            for a in 1..=bound {
                for b in -bound..=bound {
                    for c in 1..=bound {
                        let form = QuadraticPoint { a, b, c };
                        if form.discriminant() == d && form.is_reduced() && form.is_primitive() {
                            count += 1;
                        }
                    }
                }
            }
            let forms = reduced_forms(d).unwrap();
            assert_eq!(forms.len(), count, "class number mismatch at D={d}");
            // all have discriminant exactly D and are pairwise distinct
            for f in &forms {
                assert_eq!(f.discriminant(), d);
            }
            for (i, f) in forms.iter().enumerate() {
                for g in &forms[i + 1..] {
                    assert_ne!(f, g);
                }
            }
        }
    }

    #[test]
    fn known_class_numbers() {
        for (d, h) in [(-3, 1), (-4, 1), (-7, 1), (-8, 1), (-11, 1), (-12, 1), (-15, 2), (-16, 1), (-23, 3), (-27, 1), (-47, 5)] {
            assert_eq!(reduced_forms(d).unwrap().len(), h, "h({d})");
        }
    }

    #[test]
    fn fixing_matrices() {
        // (1,0,1): unscaled (0,-2;2,0) has content 2; primitive part is the
        // inversion with determinant 1
        let i_form = QuadraticPoint { a: 1, b: 0, c: 1 };
        assert_eq!(fixing_matrix(&i_form), GL2Matrix::new(0, -1, 1, 0));
        assert_eq!(i_form.fixing_matrix_unscaled().det(), 4);
        assert_eq!(level_candidates(&i_form), vec![4]);

        // (1,1,1): (-1,-2;2,1), determinant 3, already primitive
        let rho_form = QuadraticPoint { a: 1, b: 1, c: 1 };
        let m = fixing_matrix(&rho_form);
        assert_eq!(m, GL2Matrix::new(-1, -2, 2, 1));
        assert_eq!(m.det(), 3);

        // (1,1,4) at D=-15: (-1,-8;2,1), determinant 15, primitive
        let f15 = QuadraticPoint { a: 1, b: 1, c: 4 };
        let m15 = fixing_matrix(&f15);
        assert_eq!(m15, GL2Matrix::new(-1, -8, 2, 1));
        assert_eq!(m15.det(), 15);

        // the fixing matrix really fixes tau
        for form in [i_form, rho_form, f15] {
            let tau = form.tau(192);
            let moved = fixing_matrix(&form).apply(&tau);
            assert!(moved.dist(&tau).to_f64() < 1e-40, "{form}");
        }
    }

    #[test]
    fn beta_table_level_one_is_linear() {
        let mut phis = PhiSet::new();
        phis.ensure(&[1]).unwrap();
        let betas = beta_table_exact(&phis, 1, &Rat::zero(), 3).unwrap();
        assert_eq!(betas[&(1, 0)], Rat::one());
        assert_eq!(betas[&(0, 1)], -Rat::one());
        for (&(i, k), v) in &betas {
            if (i, k) != (1, 0) && (i, k) != (0, 1) {
                assert!(v.is_zero(), "beta_({i},{k}) = {v}");
            }
        }
    }

    #[test]
    fn beta_symmetry_and_footnote() {
        let mut phis = PhiSet::new();
        phis.ensure(&[2, 3]).unwrap();
        // symmetry at level 2, arbitrary rational center
        let b2 = beta_table_exact(&phis, 2, &Rat::from_int(5), 3).unwrap();
        assert_eq!(b2[&(1, 2)], b2[&(2, 1)]);
        assert_eq!(b2[&(0, 1)], b2[&(1, 0)]);
        // the asymmetric-looking denominator is no asymmetry at all:
        // beta_01 = beta_10 at level 3 about j(rho) = 0
        let b3 = beta_table_exact(&phis, 3, &Rat::zero(), 4).unwrap();
        assert_eq!(b3[&(0, 1)], b3[&(1, 0)]);
        assert!(!b3[&(0, 1)].is_zero());
    }

    #[test]
    fn level_certification_small() {
        let mut phis = PhiSet::new();
        phis.ensure(&[2, 3]).unwrap();
        let rho_form = QuadraticPoint { a: 1, b: 1, c: 1 };
        let (d, resid) = certify_level(&rho_form, &phis, 192).unwrap();
        assert_eq!(d, 3);
        assert!(resid.to_f64() < 1e-10);
        // D = -8: primitive level 2
        let f8 = QuadraticPoint { a: 1, b: 0, c: 2 };
        let (d8, r8) = certify_level(&f8, &phis, 192).unwrap();
        assert_eq!(d8, 2);
        assert!(r8.to_f64() < 1e-10);
    }

    #[test]
    fn formula_case_selector() {
        assert!(is_three_times_odd_square(3)); // 3 * 1^2
        assert!(is_three_times_odd_square(27)); // 3 * 3^2
        assert!(is_three_times_odd_square(75)); // 3 * 5^2
        assert!(!is_three_times_odd_square(12)); // 3 * 2^2, even k
        assert!(!is_three_times_odd_square(7));
        assert!(!is_three_times_odd_square(15));
    }

    #[test]
    fn masser_pole_and_degeneracy() {
        let mut phis = PhiSet::new();
        phis.ensure(&[2, 3]).unwrap();
        // D = -4: j = 1728 is the formula pole
        let i_form = QuadraticPoint { a: 1, b: 0, c: 1 };
        assert!(matches!(
            masser_psi(&i_form, &phis, 192),
            Err(CmError::FormulaPole)
        ));
        // D = -3: j = 0 degeneracy is reported, not guessed at
        let rho_form = QuadraticPoint { a: 1, b: 1, c: 1 };
        assert!(matches!(
            masser_psi(&rho_form, &phis, 192),
            Err(CmError::SmallDenominator(_))
        ));
    }

    #[test]
    fn bridge_certification_series_level() {
        // (j - 1728) Delta = E6^2 exactly as q-series; this is the algebraic
        // content behind chi* = psi (j - 1728)
        use crate::modforms::{delta_qexp, eisenstein_qexp, j_qexp};
        use crate::qseries::{PuiseuxSeries, Scalar};
        let t = 24;
        let lhs = j_qexp(t)
            .sub(&PuiseuxSeries::constant(Scalar::from_int(1728), t))
            .mul(&delta_qexp(t));
        let rhs = eisenstein_qexp(6, t).pow(2);
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn bridge_certification_numeric() {
        let worst = certify_bridge(8, 256, 17).unwrap();
        assert!(worst.to_f64() < 1e-40, "bridge deviation {worst}");
    }

    #[test]
    fn rational_reconstruction_roundtrip() {
        let prec = 384;
        for (num, den) in [(22i64, 7u64), (-355, 113), (1, 1), (123456, 1000001)] {
            let x = Float::with_val(prec, num) / Float::with_val(prec, den);
            // a tight tolerance pins down the fraction itself; a loose one
            // may legitimately return a smaller-denominator approximation
            let r = reconstruct_rational(&x, 1_000_000_000_000, 1e-30).unwrap();
            assert_eq!(r, Rat::new(num, den as i64));
        }
        // an irrational survives no reconstruction at tight tolerance
        let sqrt2 = Float::with_val(prec, 2).sqrt();
        assert!(reconstruct_rational(&sqrt2, 1_000, 1e-25).is_none());
    }

    #[test]
    fn masser_agrees_with_direct_at_minus_seven() {
        let mut phis = PhiSet::new();
        phis.ensure(&[7]).unwrap();
        let p = QuadraticPoint { a: 1, b: 1, c: 2 };
        assert_eq!(p.discriminant(), -7);
        let by_formula = masser_psi(&p, &phis, 256).unwrap();
        let direct = psi_direct(&p.tau(288), 256).unwrap();
        let diff = by_formula.dist(&direct).to_f64();
        assert!(diff < 1e-15, "masser vs direct at D=-7: {diff:e}");
    }
}
