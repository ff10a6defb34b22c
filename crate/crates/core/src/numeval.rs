//! Arbitrary-precision evaluation of the modular and quasimodular functions
//! on the upper half plane, plus the residual-based verification harness for
//! the transformation laws and the Psi_N identities.
//!
//! Evaluation strategy: reduce tau to the standard fundamental domain, sum
//! the Eisenstein q-expansions there (where |q| <= exp(-pi sqrt(3)) makes
//! them converge fast), then transport back with the exact transformation
//! laws. Everything else is assembled from E2, E4, E6 and Im tau.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::ops::Pow;
use rug::Float;
use thiserror::Error;

use crate::exactalg::Rat;
use crate::hecke::{enumerate_dn, reduce_fundamental, GL2Matrix, HeckeError};
use crate::hp::{pi, q_from_tau, ComplexHP};
use crate::modforms::{eisenstein_qexp, FnName};
use crate::modpoly::TriPolynomial;
use crate::qseries::Scalar;

#[derive(Debug, Error)]
pub enum NumEvalError {
    #[error("point is not in the upper half plane")]
    DomainError,
    #[error("precision loss during fundamental-domain reduction")]
    PrecisionLoss,
}

impl From<HeckeError> for NumEvalError {
    fn from(_: HeckeError) -> Self {
        NumEvalError::PrecisionLoss
    }
}

/// A numeric value together with the heuristic series tail bound and the
/// fundamental-domain representative used to compute it.
#[derive(Clone, Debug)]
pub struct EvalReport {
    pub value: ComplexHP,
    pub tail_bound: Float,
    pub reduced_point: ComplexHP,
}

/// All function values at one point, sharing a single reduction and one
/// summation of the Eisenstein series.
#[derive(Clone, Debug)]
pub struct FunctionValues {
    pub e2: ComplexHP,
    pub e4: ComplexHP,
    pub e6: ComplexHP,
    pub e2star: ComplexHP,
    pub delta: ComplexHP,
    pub j: ComplexHP,
    pub f: ComplexHP,
    pub chi: ComplexHP,
    pub chi_star: ComplexHP,
    pub tail_bound: Float,
    pub reduced_point: ComplexHP,
}

/// Sum an exact integer q-expansion at a complex q.
fn sum_series(series: &crate::qseries::PuiseuxSeries, q: &ComplexHP) -> (ComplexHP, Float) {
    let prec = q.prec();
    debug_assert_eq!(series.ram(), 1);
    // Horner over the stored window
    let mut acc = ComplexHP::new(prec);
    let mut terms: Vec<Float> = Vec::new();
    for (_, c) in series.terms().collect::<Vec<_>>().into_iter().rev() {
        let cf = match c {
            Scalar::Rat(r) => Float::with_val(prec, &r.0),
            _ => unreachable!("evaluation series are rational"),
        };
        acc = acc.mul(q);
        acc = acc.add(&ComplexHP::from_floats(cf.clone(), Float::new(prec)));
        terms.push(cf.abs());
    }
    // shift by q^val
    let val = series.val();
    if val != 0 {
        let qv = if val > 0 {
            q.powi(val as u32)
        } else {
            q.recip().powi((-val) as u32)
        };
        acc = acc.mul(&qv);
    }
    // geometric tail heuristic: largest coefficient ratio r, last-term
    // magnitude times r|q|/(1 - r|q|)
    let mut ratio = Float::with_val(prec, 1);
    for w in terms.windows(2) {
        if w[1].is_zero() {
            continue;
        }
        let r = Float::with_val(prec, &w[0] / &w[1]); // reversed order: w[0] is higher exponent
        if r > ratio {
            ratio = r;
        }
    }
    let qabs = q.abs();
    let last_mag = terms.first().cloned().unwrap_or_else(|| Float::new(prec));
    let t_high = series.trunc() - 1;
    let q_high = Float::with_val(prec, qabs.clone().pow(t_high as i32));
    let rq = Float::with_val(prec, &ratio * &qabs);
    let tail = if rq < 1 {
        last_mag * q_high * rq.clone() / (Float::with_val(prec, 1) - rq)
    } else {
        Float::with_val(prec, f64::INFINITY)
    };
    (acc, tail)
}

/// Number of q-expansion terms needed so the geometric tail at the reduced
/// point sits below 2^(-prec/2).
fn terms_needed(prec: u32, q_abs: &Float) -> i64 {
    let ln_q = q_abs.to_f64().ln(); // negative
    let target = -(prec as f64) * 0.5 * std::f64::consts::LN_2;
    let n = (target / ln_q).ceil() as i64;
    n.max(24) + 16
}

/// Evaluate E2, E4, E6 and friends at tau. The point is reduced to the
/// fundamental domain, the series are summed there, and the values are
/// transported back through the weight-k laws (with the quasimodular
/// correction for E2).
pub fn eval_all(tau: &ComplexHP, prec: u32) -> Result<FunctionValues, NumEvalError> {
    if !(tau.im().to_f64() > 0.0) {
        return Err(NumEvalError::DomainError);
    }
    let work = prec + 64;
    let tau_w = tau.with_prec(work);
    let (reduced, gamma) = reduce_fundamental(&tau_w)?;
    let q = q_from_tau(&reduced);
    let t = terms_needed(prec, &q.abs());

    let (e2_r, tail2) = sum_series(&eisenstein_qexp(2, t), &q);
    let (e4_r, tail4) = sum_series(&eisenstein_qexp(4, t), &q);
    let (e6_r, tail6) = sum_series(&eisenstein_qexp(6, t), &q);
    let mut tail = tail2;
    if tail4 > tail {
        tail = tail4;
    }
    if tail6 > tail {
        tail = tail6;
    }

    // transport back: gamma tau = reduced, so E_k(reduced) = (c tau + d)^k E_k(tau) etc.
    let c = gamma.c;
    let d = gamma.d;
    let cd = tau_w
        .mul_i64(c)
        .add(&ComplexHP::from_int(d, work));
    let cd2 = cd.mul(&cd);
    let e4 = e4_r.div(&cd2.powi(2));
    let e6 = e6_r.div(&cd2.powi(3));
    let e2 = {
        // E2(reduced) = cd^2 E2(tau) - (6i/pi) c cd
        let six_i_over_pi = ComplexHP::from_floats(
            Float::new(work),
            Float::with_val(work, 6) / pi(work),
        );
        let corr = six_i_over_pi.mul_i64(c).mul(&cd);
        e2_r.add(&corr).div(&cd2)
    };

    let three = ComplexHP::from_int(3, work);
    let y_inv = three.div(&ComplexHP::from_floats(
        pi(work) * tau_w.im(),
        Float::new(work),
    ));
    let e2star = e2.sub(&y_inv);
    let e4_cubed = e4.powi(3);
    let delta = e4_cubed
        .sub(&e6.powi(2))
        .mul_float(&Float::with_val(work, &Rat::new(1, 1728).0));
    let j = e4_cubed.div(&delta);
    let f = e4.mul(&e6).div(&delta);
    let chi = e2.mul(&f);
    let chi_star = e2star.mul(&f);

    Ok(FunctionValues {
        e2: e2.with_prec(prec),
        e4: e4.with_prec(prec),
        e6: e6.with_prec(prec),
        e2star: e2star.with_prec(prec),
        delta: delta.with_prec(prec),
        j: j.with_prec(prec),
        f: f.with_prec(prec),
        chi: chi.with_prec(prec),
        chi_star: chi_star.with_prec(prec),
        tail_bound: tail,
        reduced_point: reduced,
    })
}

/// Evaluate one named function at tau.
pub fn eval_fn(name: FnName, tau: &ComplexHP, prec: u32) -> Result<EvalReport, NumEvalError> {
    let all = eval_all(tau, prec)?;
    let value = match name {
        FnName::E2 => all.e2,
        FnName::E4 => all.e4,
        FnName::E6 => all.e6,
        FnName::E2Star => all.e2star,
        FnName::Delta => all.delta,
        FnName::J => all.j,
        FnName::F => all.f,
        FnName::Chi => all.chi,
        FnName::ChiStar => all.chi_star,
    };
    Ok(EvalReport {
        value,
        tail_bound: all.tail_bound,
        reduced_point: all.reduced_point,
    })
}

// ---------------------------------------------------------------------------
// Seeded sampling
// ---------------------------------------------------------------------------

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random point in a box inside the fundamental domain.
pub fn random_tau(rng: &mut ChaCha8Rng, prec: u32) -> ComplexHP {
    let re: f64 = rng.gen_range(-0.45..0.45);
    let im: f64 = rng.gen_range(1.02..2.2);
    ComplexHP::from_f64(re, im, prec)
}

/// A random SL2(Z) element with entries bounded by `bound`, built as a short
/// word in the generators (rejection-sampled on the bound).
pub fn random_sl2(rng: &mut ChaCha8Rng, bound: i64) -> GL2Matrix {
    loop {
        let mut m = GL2Matrix::identity();
        let len = rng.gen_range(1..=6);
        for _ in 0..len {
            let step = match rng.gen_range(0..3) {
                0 => GL2Matrix::translation(1),
                1 => GL2Matrix::translation(-1),
                _ => GL2Matrix::inversion(),
            };
            m = m.mul(&step);
        }
        if m.a.abs() <= bound && m.b.abs() <= bound && m.c.abs() <= bound && m.d.abs() <= bound {
            debug_assert_eq!(m.det(), 1);
            return m;
        }
    }
}

// ---------------------------------------------------------------------------
// Verification harness
// ---------------------------------------------------------------------------

fn max_f(a: Float, b: &Float) -> Float {
    if *b > a {
        b.clone()
    } else {
        a
    }
}

/// |lhs - rhs| / max(1, |lhs|, |rhs|).
fn normalized_diff(lhs: &ComplexHP, rhs: &ComplexHP) -> Float {
    let diff = lhs.dist(rhs);
    let scale = max_f(
        max_f(Float::with_val(lhs.prec(), 1), &lhs.abs()),
        &rhs.abs(),
    );
    diff / scale
}

/// Residuals of the three transformation laws, each checked by computing
/// both sides independently: the left via evaluation at gamma tau, the
/// right via evaluation at tau.
#[derive(Clone, Debug, Default)]
pub struct LawReport {
    pub e2_quasimodular: f64,
    pub e2star_weight2: f64,
    pub chi_defect: f64,
}

pub fn verify_transformation_laws(
    samples: usize,
    prec: u32,
    seed: u64,
) -> Result<LawReport, NumEvalError> {
    let mut rng = seeded_rng(seed);
    let mut report = LawReport::default();
    let work = prec + 32;
    for _ in 0..samples {
        let tau = random_tau(&mut rng, work);
        let gamma = random_sl2(&mut rng, 20);
        let gt = gamma.apply(&tau);
        let lhs = eval_all(&gt, prec)?;
        let rhs = eval_all(&tau, prec)?;
        let cd = tau.mul_i64(gamma.c).add(&ComplexHP::from_int(gamma.d, work));
        let cd2 = cd.mul(&cd);
        let six_i_over_pi = ComplexHP::from_floats(
            Float::new(work),
            Float::with_val(work, 6) / pi(work),
        );

        // E2(gamma tau) = cd^2 E2(tau) - (6i/pi) c cd
        let e2_rhs = cd2
            .mul(&rhs.e2)
            .sub(&six_i_over_pi.mul_i64(gamma.c).mul(&cd));
        let r1 = normalized_diff(&lhs.e2, &e2_rhs).to_f64();
        report.e2_quasimodular = report.e2_quasimodular.max(r1);

        // E2*(gamma tau) = cd^2 E2*(tau)
        let e2s_rhs = cd2.mul(&rhs.e2star);
        let r2 = normalized_diff(&lhs.e2star, &e2s_rhs).to_f64();
        report.e2star_weight2 = report.e2star_weight2.max(r2);

        // chi(gamma tau) = chi(tau) - (6i/pi) (c/cd) f(tau)
        let chi_rhs = rhs
            .chi
            .sub(&six_i_over_pi.mul_i64(gamma.c).div(&cd).mul(&rhs.f));
        let r3 = normalized_diff(&lhs.chi, &chi_rhs).to_f64();
        report.chi_defect = report.chi_defect.max(r3);
    }
    Ok(report)
}

/// The identity Psi_N(chi*(g tau), j(tau), chi*(tau)) = 0, checked over
/// seeded sample points, all g in D_N, and `twists` random SL2(Z)-twists
/// gamma g' (these exercise arbitrary primitive determinant-N matrices).
/// Returns the maximum residual, normalised by the largest monomial.
pub fn verify_psi_identity(
    psi: &TriPolynomial,
    n: u64,
    samples: usize,
    twists: usize,
    prec: u32,
    seed: u64,
) -> Result<Float, NumEvalError> {
    let mut rng = seeded_rng(seed);
    let mut gs: Vec<GL2Matrix> = enumerate_dn(n);
    for _ in 0..twists {
        let gamma = random_sl2(&mut rng, 20);
        let rep = gs[rng.gen_range(0..enumerate_dn(n).len())];
        gs.push(gamma.mul(&rep));
    }
    let mut worst = Float::with_val(prec, 0);
    for _ in 0..samples {
        let tau = random_tau(&mut rng, prec + 64);
        let base = eval_all(&tau, prec)?;
        for g in &gs {
            let gt = g.apply(&tau);
            let at_g = eval_all(&gt, prec)?;
            let value = psi.eval(&at_g.chi_star, &base.j, &base.chi_star);
            let scale = psi.max_monomial(&at_g.chi_star, &base.j, &base.chi_star);
            let resid = value.abs() / scale;
            worst = max_f(worst, &resid);
        }
    }
    Ok(worst)
}

/// Verdict for the chi-variant of the modular relation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ChiVerdict {
    Holds,
    Fails,
    Indeterminate,
}

#[derive(Clone, Debug)]
pub struct ChiIdentityReport {
    pub max_residual: Float,
    pub min_residual: Float,
    pub samples: usize,
    pub above_fail_tol: usize,
    pub verdict: ChiVerdict,
}

/// Check Psi_N(chi(g tau), j(tau), chi(tau)) over seeded samples. The
/// relation holds for upper-triangular g and fails otherwise; tolerances
/// are hold_tol = 2^(-prec/3) and fail_tol = 1e-5.
pub fn verify_chi_identity(
    psi: &TriPolynomial,
    g: &GL2Matrix,
    samples: usize,
    prec: u32,
    seed: u64,
) -> Result<ChiIdentityReport, NumEvalError> {
    let mut rng = seeded_rng(seed);
    let hold_tol = Float::with_val(prec, 2f64).pow(-((prec / 3) as i32));
    let fail_tol = Float::with_val(prec, 1e-5);
    let mut max_r = Float::with_val(prec, 0);
    let mut min_r = Float::with_val(prec, f64::INFINITY);
    let mut above = 0usize;
    for _ in 0..samples {
        let tau = random_tau(&mut rng, prec + 64);
        let base = eval_all(&tau, prec)?;
        let gt = g.apply(&tau);
        let at_g = eval_all(&gt, prec)?;
        let value = psi.eval(&at_g.chi, &base.j, &base.chi);
        let scale = psi.max_monomial(&at_g.chi, &base.j, &base.chi);
        let resid = value.abs() / scale;
        if resid > fail_tol {
            above += 1;
        }
        max_r = max_f(max_r, &resid);
        if resid < min_r {
            min_r = resid;
        }
    }
    let verdict = if max_r < hold_tol {
        ChiVerdict::Holds
    } else if min_r > fail_tol {
        ChiVerdict::Fails
    } else {
        ChiVerdict::Indeterminate
    };
    Ok(ChiIdentityReport {
        max_residual: max_r,
        min_residual: min_r,
        samples,
        above_fail_tol: above,
        verdict,
    })
}

/// One value of the family chi(g(gamma_k i)) computed two ways.
#[derive(Clone, Debug)]
pub struct DemoValue {
    pub index: i64,
    pub by_formula: ComplexHP,
    pub by_direct: ComplexHP,
    pub agreement: Float,
}

/// The family g = (N,0;0,1), gamma_k = (1,-1;1-kN,kN) applied to tau = i:
/// chi(g gamma_k i) takes a new value for every k. Each value is computed
/// both by the closed transformation-law formula and by direct evaluation;
/// the two must agree and the values must be pairwise distinct.
pub fn infinite_values_demo(
    n: u64,
    k_max: i64,
    prec: u32,
) -> Result<Vec<DemoValue>, NumEvalError> {
    assert!(n >= 2 && k_max >= 2);
    let work = prec + 64;
    let ni = n as i64;
    let tau = ComplexHP::i(work);
    let tau_over_n = ComplexHP::from_floats(
        tau.re().clone() / ni as f64,
        tau.im().clone() / ni as f64,
    );
    let at_base = eval_all(&tau_over_n, prec)?;
    let six_i_over_pi = ComplexHP::from_floats(Float::new(work), Float::with_val(work, 6) / pi(work));
    let mut out = Vec::new();
    for k in 1..=k_max {
        // closed formula: chi(tau/N) - (6i/pi) (1-kN)/((1-kN) tau/N + k) f(tau/N)
        let c = 1 - k * ni;
        let den = tau_over_n.mul_i64(c).add(&ComplexHP::from_int(k, work));
        let formula = at_base
            .chi
            .sub(&six_i_over_pi.mul_i64(c).div(&den).mul(&at_base.f));
        // direct: evaluate chi at the composed Moebius image of i
        let composed = GL2Matrix::new(ni, -ni, 1 - k * ni, k * ni);
        debug_assert_eq!(composed.det(), ni);
        let z = composed.apply(&tau);
        let direct = eval_all(&z, prec)?.chi;
        let agreement = formula.dist(&direct);
        out.push(DemoValue {
            index: k,
            by_formula: formula,
            by_direct: direct,
            agreement,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_small(x: &Float, bound: f64, what: &str) {
        assert!(
            x.to_f64() < bound,
            "{what}: {} !< {bound}",
            x.to_f64()
        );
    }

    #[test]
    fn classical_anchor_values() {
        let prec = 128;
        // j(i) = 1728
        let i = ComplexHP::i(prec);
        let ji = eval_fn(FnName::J, &i, prec).unwrap().value;
        assert_small(
            &ji.sub(&ComplexHP::from_int(1728, prec)).abs(),
            1e-30,
            "j(i)",
        );
        // j(rho) = 0 at rho = exp(2 pi i / 3) = (-1 + i sqrt(3))/2
        let rho = ComplexHP::from_floats(
            Float::with_val(prec, -0.5),
            Float::with_val(prec, 3f64).sqrt() / 2u32,
        );
        let jr = eval_fn(FnName::J, &rho, prec).unwrap().value;
        assert_small(&jr.abs(), 1e-30, "j(rho)");
        // chi(i) = chi*(i) = 0 (E6(i) = 0), chi*(rho) = 0 (E4(rho) = 0)
        assert_small(&eval_fn(FnName::Chi, &i, prec).unwrap().value.abs(), 1e-30, "chi(i)");
        assert_small(
            &eval_fn(FnName::ChiStar, &i, prec).unwrap().value.abs(),
            1e-30,
            "chi*(i)",
        );
        assert_small(
            &eval_fn(FnName::ChiStar, &rho, prec).unwrap().value.abs(),
            1e-30,
            "chi*(rho)",
        );
    }

    #[test]
    fn modular_invariance_of_j_and_chi_star() {
        let prec = 192;
        let mut rng = seeded_rng(7);
        for _ in 0..5 {
            let tau = random_tau(&mut rng, prec);
            let gamma = random_sl2(&mut rng, 20);
            let gt = gamma.apply(&tau);
            let a = eval_all(&tau, prec).unwrap();
            let b = eval_all(&gt, prec).unwrap();
            assert_small(&a.j.dist(&b.j), 1e-40, "j invariance");
            assert_small(&a.chi_star.dist(&b.chi_star), 1e-40, "chi* invariance");
        }
    }

    #[test]
    fn chi_star_consistency_of_representations() {
        // chi* = chi - 3/(pi y) f at random points
        let prec = 192;
        let mut rng = seeded_rng(11);
        for _ in 0..5 {
            let tau = random_tau(&mut rng, prec);
            let v = eval_all(&tau, prec).unwrap();
            let y_inv = ComplexHP::from_floats(
                Float::with_val(prec, 3) / (pi(prec) * tau.im()),
                Float::new(prec),
            );
            let rhs = v.chi.sub(&y_inv.mul(&v.f));
            assert_small(&v.chi_star.dist(&rhs), 1e-40, "chi* = chi - (3/pi y) f");
        }
    }

    #[test]
    fn transformation_laws_hold() {
        let report = verify_transformation_laws(6, 256, 3).unwrap();
        assert!(report.e2_quasimodular < 1e-30, "{report:?}");
        assert!(report.e2star_weight2 < 1e-30, "{report:?}");
        assert!(report.chi_defect < 1e-30, "{report:?}");
    }

    #[test]
    fn precision_doubling_shrinks_residuals() {
        let lo = verify_transformation_laws(4, 128, 5).unwrap();
        let hi = verify_transformation_laws(4, 256, 5).unwrap();
        // rerunning at twice the precision must reduce the residual to at
        // most its square-root scale (i.e. the log-residual roughly doubles)
        assert!(hi.e2_quasimodular < lo.e2_quasimodular.sqrt());
        assert!(hi.chi_defect < lo.chi_defect.sqrt());
    }

    #[test]
    fn tail_bound_is_sane() {
        let prec = 128;
        let tau = ComplexHP::from_f64(0.1, 1.3, prec);
        let rep = eval_fn(FnName::J, &tau, prec).unwrap();
        assert!(rep.tail_bound.to_f64() < 1e-18);
        assert!(rep.tail_bound.to_f64() >= 0.0);
        // reduced point is in the fundamental domain
        assert!(rep.reduced_point.norm_sqr().to_f64() >= 1.0 - 1e-12);
    }
}
