//! The polynomial constructions.
//!
//! Phi_N comes from expanding prod_(g in D_N) (X - j(g tau)) over q-series
//! and recognising each X-coefficient as a polynomial in j by peeling off
//! the most negative q-power with a matching power of j. For small N the
//! product is expanded directly over cyclotomic conjugates (which exercises
//! the root-of-unity cancellation); for larger N the same coefficients are
//! assembled per divisor class from Moebius-sifted power sums and Newton's
//! identities, which avoids deep intermediate poles and cyclotomic blowup.
//!
//! Psi_N expands prod_(g in D_N) (X - chi*(g tau)) the same way, checks that
//! the fractional powers and roots of unity cancel out of every coefficient,
//! and then recovers each coefficient as a rational function p(j, chi*) /
//! q(j, chi*) by exact linear algebra before clearing denominators.

use super::recover::{div_exact2, lcm2, recover_fraction, MonomialBasis, YzFraction};
use super::{BiPolynomial, ModPolyError, RecoveryConfig, TriPolynomial};
use crate::exactalg::arith::{divisors, gcd, moebius};
use crate::exactalg::Rat;
use crate::hecke::{act_series, enumerate_dn};
use crate::modforms::{chi_star_qexp, j_qexp};
use crate::qseries::{AhmSeries, PuiseuxSeries, Scalar};

const MIN_RESIDUAL_WINDOW: i64 = 4;

/// Verify that a series has rational coefficients and integral q-powers,
/// returning the simplified form.
fn rationalize(s: &PuiseuxSeries, what: &str) -> Result<PuiseuxSeries, ModPolyError> {
    let t = s.simplify_ram();
    if t.ram() != 1 {
        return Err(ModPolyError::CancellationFailure(format!(
            "{what}: fractional q-powers did not cancel (ramification {})",
            t.ram()
        )));
    }
    for (e, c) in t.terms() {
        if c.as_rat().is_none() {
            return Err(ModPolyError::CancellationFailure(format!(
                "{what}: coefficient of q^{e} is irrational: {c}"
            )));
        }
    }
    Ok(t)
}

fn rationalize_ahm(s: &AhmSeries, what: &str) -> Result<AhmSeries, ModPolyError> {
    let mut out = Vec::with_capacity(s.y_degree() + 1);
    for (k, yc) in s.ycoeffs().iter().enumerate() {
        out.push(rationalize(yc, &format!("{what} (Y^{k})"))?);
    }
    Ok(AhmSeries::from_ycoeffs(out))
}

/// Express a rational Laurent q-series as a polynomial in j by repeatedly
/// peeling the most negative q-power with the matching power of j. The tail
/// left after peeling must vanish identically up to the truncation.
fn express_in_j(c: &PuiseuxSeries, j_pows: &[PuiseuxSeries]) -> Result<Vec<Rat>, ModPolyError> {
    let maxdeg = j_pows.len() - 1;
    let mut out = vec![Rat::zero(); maxdeg + 1];
    let mut r = c.clone();
    while !r.is_zero() && r.val() < 0 {
        let m = (-r.val()) as usize;
        if m > maxdeg {
            return Err(ModPolyError::TruncationTooSmall(format!(
                "pole order {m} exceeds available j-powers"
            )));
        }
        let lead = match r.coefficient_at(r.val(), 1).unwrap() {
            Scalar::Rat(x) => x,
            other => {
                return Err(ModPolyError::CancellationFailure(format!(
                    "irrational leading coefficient {other}"
                )))
            }
        };
        out[m] = lead.clone();
        r = r.sub(&j_pows[m].scale(&Scalar::Rat(lead)));
    }
    let c0 = match r.coefficient_at(0, 1) {
        Ok(Scalar::Rat(x)) => x,
        Ok(other) => {
            return Err(ModPolyError::CancellationFailure(format!(
                "irrational constant term {other}"
            )))
        }
        Err(_) => {
            return Err(ModPolyError::TruncationTooSmall(
                "no constant term left within the truncation".into(),
            ))
        }
    };
    out[0] = c0.clone();
    r = r.sub(&PuiseuxSeries::constant(Scalar::Rat(c0), r.trunc()));
    if r.trunc() < MIN_RESIDUAL_WINDOW {
        return Err(ModPolyError::TruncationTooSmall(format!(
            "residual window [{}, {}) too narrow to certify the peeling",
            r.val(),
            r.trunc()
        )));
    }
    if !r.is_zero() {
        return Err(ModPolyError::TruncationTooSmall(format!(
            "nonzero residual {r} after peeling"
        )));
    }
    Ok(out)
}

/// X-coefficients of prod_(g in D_N)(X - j(g tau)) by direct expansion over
/// cyclotomic conjugates. Index k = coefficient of X^k.
fn phi_coeffs_by_product(n: u64, t: i64) -> Result<Vec<PuiseuxSeries>, ModPolyError> {
    let j = j_qexp(t);
    let mut coeffs: Vec<PuiseuxSeries> = vec![PuiseuxSeries::one(t * n as i64)];
    for g in enumerate_dn(n) {
        let jg = j.substitute_q(g.a, g.b.rem_euclid(g.d), g.d);
        let mut next = vec![PuiseuxSeries::zero(1, jg.trunc()); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(&jg));
        }
        coeffs = next;
    }
    coeffs
        .iter()
        .map(|c| rationalize(c, "Phi coefficient"))
        .collect()
}

/// Power sum over one divisor class (a, d): the sum of (j^m)((a tau + b)/d)
/// over the admissible b. Moebius inversion over t | gcd(a, d) reduces the
/// root-of-unity sum to integral sifting, so everything stays rational.
fn class_power_sum(j_pow_m: &PuiseuxSeries, a: i64, d: i64) -> PuiseuxSeries {
    debug_assert_eq!(j_pow_m.ram(), 1);
    let g0 = gcd(a, d);
    let out_trunc = {
        // exponents e < T map to e*a/d; integral knowledge below ceil(T a/d)
        let ta = j_pow_m.trunc() * a;
        ta.div_euclid(d) + i64::from(ta.rem_euclid(d) != 0)
    };
    let out_val_bound = {
        let va = j_pow_m.val() * a;
        va.div_euclid(d)
    };
    let mut acc = vec![Rat::zero(); (out_trunc - out_val_bound).max(0) as usize];
    for t in divisors(g0 as u64) {
        let mu = moebius(t);
        if mu == 0 {
            continue;
        }
        let step = d / t as i64; // keep exponents divisible by d/t
        let weight = Rat::from_int(mu * step);
        for (e, c) in j_pow_m.terms() {
            if c.is_zero() || e.rem_euclid(step) != 0 {
                continue;
            }
            let out_e = e * a / d; // integral: (d/t) | e and t | a
            if out_e < out_val_bound || out_e >= out_trunc {
                continue;
            }
            let r = c.as_rat().expect("rational j power");
            acc[(out_e - out_val_bound) as usize] += &(r * &weight);
        }
    }
    PuiseuxSeries::from_rat_coeffs(1, out_val_bound, acc)
}

/// X-coefficients of the same product, assembled per divisor class from
/// power sums and Newton's identities.
fn phi_coeffs_by_power_sums(n: u64, t: i64) -> Result<Vec<PuiseuxSeries>, ModPolyError> {
    let j = j_qexp(t);
    // class sizes determine how many j-powers we need
    let classes: Vec<(i64, i64, usize)> = divisors(n)
        .into_iter()
        .map(|a| {
            let a = a as i64;
            let d = n as i64 / a;
            let g0 = gcd(a, d) as u64;
            let size: i64 = divisors(g0).iter().map(|&t| moebius(t) * (d / t as i64)).sum();
            (a, d, size as usize)
        })
        .collect();
    let max_size = classes.iter().map(|&(_, _, s)| s).max().unwrap();
    let mut j_pows: Vec<PuiseuxSeries> = Vec::with_capacity(max_size + 1);
    j_pows.push(PuiseuxSeries::one(t));
    for m in 1..=max_size {
        j_pows.push(j_pows[m - 1].mul(&j));
    }

    // per class: elementary symmetric functions via Newton's identities,
    // then the class polynomial prod (X - root) in ascending X powers
    let big = 4 * t * n as i64 + 64;
    let mut total: Vec<PuiseuxSeries> = vec![PuiseuxSeries::one(big)];
    for &(a, d, size) in &classes {
        let psums: Vec<PuiseuxSeries> = (1..=size)
            .map(|m| class_power_sum(&j_pows[m], a, d))
            .collect();
        let mut elem: Vec<PuiseuxSeries> = vec![PuiseuxSeries::one(big)];
        for k in 1..=size {
            let mut s = PuiseuxSeries::zero(1, big);
            for i in 1..=k {
                let term = elem[k - i].mul(&psums[i - 1]);
                s = if i % 2 == 1 { s.add(&term) } else { s.sub(&term) };
            }
            elem.push(s.scale(&Scalar::Rat(Rat::new(1, k as i64))));
        }
        // class polynomial: coefficient of X^(size-k) is (-1)^k e_k
        let class_poly: Vec<PuiseuxSeries> = (0..=size)
            .map(|xk| {
                let k = size - xk;
                let e = elem[k].clone();
                if k % 2 == 1 {
                    e.neg()
                } else {
                    e
                }
            })
            .collect();
        // convolve into the running product
        let mut next = vec![PuiseuxSeries::zero(1, big); total.len() + size];
        for (i, ci) in total.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (k, ck) in class_poly.iter().enumerate() {
                let p = ci.mul(ck);
                next[i + k] = next[i + k].add(&p);
            }
        }
        total = next;
    }
    total
        .iter()
        .map(|c| rationalize(c, "Phi coefficient"))
        .collect()
}

fn phi_from_coeffs(coeffs: &[PuiseuxSeries]) -> Result<BiPolynomial, ModPolyError> {
    let n = coeffs.len() - 1;
    let maxdeg = coeffs
        .iter()
        .map(|c| if c.is_zero() { 0 } else { (-c.val()).max(0) })
        .max()
        .unwrap() as usize;
    let mut j_pows: Vec<PuiseuxSeries> = Vec::with_capacity(maxdeg + 1);
    let t = coeffs
        .iter()
        .map(|c| c.trunc())
        .min()
        .unwrap()
        .max(MIN_RESIDUAL_WINDOW + 2);
    let tj = t + maxdeg as i64 + 2;
    let j = j_qexp(tj);
    j_pows.push(PuiseuxSeries::one(tj));
    for m in 1..=maxdeg {
        let p = j_pows[m - 1].mul(&j);
        j_pows.push(p);
    }
    // leading coefficient must be exactly 1
    let lead = &coeffs[n];
    if lead.sub(&PuiseuxSeries::one(lead.trunc())).is_zero() == false {
        return Err(ModPolyError::CancellationFailure(
            "product is not monic in X".into(),
        ));
    }
    let mut phi = BiPolynomial::zero();
    phi.insert((n as u32, 0), Rat::one());
    for (k, c) in coeffs.iter().enumerate().take(n) {
        for (m, coeff) in express_in_j(c, &j_pows)?.into_iter().enumerate() {
            if !coeff.is_zero() {
                if !coeff.is_integer() {
                    return Err(ModPolyError::TruncationTooSmall(format!(
                        "non-integer coefficient {coeff} of X^{k} Y^{m}"
                    )));
                }
                phi.insert((k as u32, m as u32), coeff);
            }
        }
    }
    Ok(phi)
}

/// Build the classical modular polynomial Phi_N in Z[X, Y].
///
/// Escalates the truncation (doubling, up to the configured limit) if the
/// peeling cannot be certified.
pub fn build_phi(n: u64, cfg: &RecoveryConfig) -> Result<BiPolynomial, ModPolyError> {
    assert!(n >= 1);
    let mut t = cfg.truncation;
    let mut last_err = None;
    for _ in 0..=cfg.max_escalations {
        let coeffs = if n <= 6 {
            phi_coeffs_by_product(n, t)
        } else {
            phi_coeffs_by_power_sums(n, t)
        };
        match coeffs.and_then(|c| phi_from_coeffs(&c)) {
            Ok(phi) => return Ok(phi),
            Err(e @ ModPolyError::TruncationTooSmall(_)) => {
                last_err = Some(e);
                t *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or(ModPolyError::NoSolution))
}

/// X-coefficients of prod_(g in D_N)(X - chi*(g tau)), verified rational
/// with integral q-powers (the cancellation check).
fn psi_coeffs(n: u64, t: i64) -> Result<Vec<AhmSeries>, ModPolyError> {
    let chi_star = chi_star_qexp(t);
    let mut coeffs: Vec<AhmSeries> = vec![AhmSeries::from_puiseux(PuiseuxSeries::one(
        t * n as i64,
    ))];
    for g in enumerate_dn(n) {
        let cg = act_series(&g, &chi_star);
        let zero = AhmSeries::zero(cg.ram(), cg.trunc());
        let mut next = vec![zero; coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(&cg));
        }
        coeffs = next;
    }
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| rationalize_ahm(c, &format!("Psi X^{k} coefficient")))
        .collect()
}

/// Build the modular polynomial Psi_N in Q[X, Y, Z] for chi*: the monic
/// product over D_N is expanded, each X-coefficient is written as
/// p_k(j, chi*)/q_k(j, chi*) through the homogeneous linear system, and the
/// least common denominator is cleared exactly. The result is normalised to
/// integer coefficients with content 1 and positive leading term.
pub fn build_psi(n: u64, cfg: &RecoveryConfig) -> Result<TriPolynomial, ModPolyError> {
    assert!(n >= 1);
    let dn = enumerate_dn(n).len() as u32;
    let mut b = cfg.degree_bound;
    let mut t = cfg.truncation;
    let (mut b_esc, mut t_esc) = (0u32, 0u32);
    loop {
        match try_build_psi(n, b, t) {
            Ok(psi) => return Ok(psi),
            Err(e @ (ModPolyError::NoSolution | ModPolyError::TruncationTooSmall(_))) => {
                // escalate B first, then T, each at most max_escalations times
                if b_esc < cfg.max_escalations {
                    b += dn;
                    b_esc += 1;
                } else if t_esc < cfg.max_escalations {
                    t *= 2;
                    t_esc += 1;
                } else {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        }
    }
}

fn try_build_psi(n: u64, bound: u32, t: i64) -> Result<TriPolynomial, ModPolyError> {
    let coeffs = psi_coeffs(n, t)?;
    let deg = coeffs.len() - 1;
    let lead = &coeffs[deg];
    if !lead
        .sub(&AhmSeries::from_puiseux(PuiseuxSeries::one(lead.trunc())))
        .is_zero()
    {
        return Err(ModPolyError::CancellationFailure(
            "product is not monic in X".into(),
        ));
    }

    let j = AhmSeries::from_puiseux(j_qexp(t));
    let chi_star = chi_star_qexp(t);
    let mut basis = MonomialBasis::new(j, chi_star);

    let mut fractions: Vec<YzFraction> = Vec::with_capacity(deg);
    for c in coeffs.iter().take(deg) {
        fractions.push(recover_fraction(c, &mut basis, bound)?);
    }

    // clear the least common denominator exactly; the product is monic in X,
    // so the X^deg coefficient becomes the denominator itself
    let mut lcm = BiPolynomial::zero();
    lcm.insert((0, 0), Rat::one());
    for f in &fractions {
        lcm = lcm2(&lcm, &f.den);
    }
    let mut x_coeffs: Vec<BiPolynomial> = Vec::with_capacity(deg + 1);
    for f in &fractions {
        let cof = div_exact2(&lcm, &f.den);
        x_coeffs.push(f.num.mul(&cof));
    }
    x_coeffs.push(lcm);
    Ok(TriPolynomial::from_x_coefficients(&x_coeffs).integer_cleared())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modpoly::psi_sanity;

    #[test]
    fn phi_1_is_x_minus_y() {
        let phi = build_phi(1, &RecoveryConfig::for_level(1)).unwrap();
        let mut expect = BiPolynomial::zero();
        expect.insert((1, 0), Rat::one());
        expect.insert((0, 1), -Rat::one());
        assert_eq!(phi, expect);
    }

    #[test]
    fn phi_2_known_coefficients() {
        let phi = build_phi(2, &RecoveryConfig::for_level(2)).unwrap();
        assert_eq!(phi.deg_x(), 3);
        assert!(phi.is_symmetric());
        assert_eq!(phi.coeff((2, 1)), Rat::from_int(1488));
        assert_eq!(phi.coeff((2, 2)), Rat::from_int(-1));
        assert_eq!(phi.coeff((0, 0)), Rat::from_int(-157464000000000i64));
        assert_eq!(phi.coeff((1, 1)), Rat::from_int(40773375));
        assert_eq!(phi.coeff((0, 1)), Rat::from_int(8748000000i64));
        assert_eq!(phi.coeff((2, 0)), Rat::from_int(-162000));
    }

    #[test]
    fn phi_routes_agree() {
        // the direct cyclotomic product and the sifted power-sum assembly
        // must produce identical coefficient series
        for n in [2u64, 3, 4] {
            let t = 40 * n as i64;
            let a = phi_coeffs_by_product(n, t).unwrap();
            let b = phi_coeffs_by_power_sums(n, t).unwrap();
            assert_eq!(a.len(), b.len(), "N={n}");
            for (k, (x, y)) in a.iter().zip(&b).enumerate() {
                assert!(x.sub(y).is_zero(), "N={n}, X^{k}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn psi_1_is_x_minus_z() {
        let psi = build_psi(1, &RecoveryConfig::for_level(1)).unwrap();
        let mut expect = TriPolynomial::zero();
        expect.insert((1, 0, 0), Rat::one());
        expect.insert((0, 0, 1), -Rat::one());
        assert_eq!(psi, expect);
        let report = psi_sanity(&psi, 1);
        assert!(report.ok);
        assert_eq!(report.deg_y, 0);
    }

    #[test]
    fn psi_2_structure() {
        let psi = build_psi(2, &RecoveryConfig::for_level(2)).unwrap();
        let report = psi_sanity(&psi, 2);
        assert_eq!(report.deg_x, 3);
        assert!(report.deg_y >= 1);
        assert!(report.ok, "{report:?}");
    }
}
