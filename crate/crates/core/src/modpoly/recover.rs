//! Rational-function recovery: express a q/Y-series as p(j, chi*)/q(j, chi*)
//! by solving the homogeneous linear system that matches every
//! (q-power, Y-power) coefficient of c * q(j, chi*) - p(j, chi*) to zero.
//!
//! Also provides exact gcd/lcm arithmetic in Q[Y, Z], used to clear the
//! denominators of the recovered coefficient fractions.

use super::{BiPolynomial, ModPolyError};
use crate::exactalg::{nullspace, LinearSystem, QPolynomial, Rat};
use crate::qseries::{AhmSeries, Scalar};

/// A fraction p/q of polynomials in (Y, Z) = (j, chi*), in lowest terms.
#[derive(Clone, Debug)]
pub(super) struct YzFraction {
    pub num: BiPolynomial,
    pub den: BiPolynomial,
}

/// Monomials j^u chi*^v as rational series, computed lazily on demand.
pub(super) struct MonomialBasis {
    j: AhmSeries,
    chi_star: AhmSeries,
    j_pows: Vec<AhmSeries>,
    c_pows: Vec<AhmSeries>,
    products: std::collections::HashMap<(u32, u32), AhmSeries>,
}

impl MonomialBasis {
    pub fn new(j: AhmSeries, chi_star: AhmSeries) -> Self {
        let big = j.trunc().max(chi_star.trunc());
        let one = AhmSeries::from_puiseux(crate::qseries::PuiseuxSeries::one(big));
        MonomialBasis {
            j,
            chi_star,
            j_pows: vec![one.clone()],
            c_pows: vec![one],
            products: std::collections::HashMap::new(),
        }
    }

    fn ensure(&mut self, u: u32, v: u32) {
        while self.j_pows.len() <= u as usize {
            let next = self.j_pows.last().unwrap().mul(&self.j);
            self.j_pows.push(next);
        }
        while self.c_pows.len() <= v as usize {
            let next = self.c_pows.last().unwrap().mul(&self.chi_star);
            self.c_pows.push(next);
        }
        if !self.products.contains_key(&(u, v)) {
            let p = self.j_pows[u as usize].mul(&self.c_pows[v as usize]);
            self.products.insert((u, v), p);
        }
    }

    fn get(&self, u: u32, v: u32) -> &AhmSeries {
        &self.products[&(u, v)]
    }
}

/// Coefficient of q^e Y^y in a rational, integral-power series.
fn coeff_at(s: &AhmSeries, e: i64, y: usize) -> Rat {
    debug_assert_eq!(s.ram(), 1, "series must have integral powers");
    if y > s.y_degree() {
        return Rat::zero();
    }
    match s.ycoeff(y).coefficient_at(e, 1) {
        Ok(Scalar::Rat(r)) => r,
        Ok(_) => panic!("series must have rational coefficients"),
        Err(_) => panic!("coefficient read beyond truncation"),
    }
}

/// Find the minimal-total-degree representation c = p(j, chi*)/q(j, chi*).
///
/// Monomial supports are escalated by total degree (capped per variable by
/// the basis bound); at the first feasible degree the nullspace essentially
/// determines the fraction up to scale. Among the basis vectors with a
/// nonzero denominator part, the one with the smallest denominator total
/// degree is taken, ties broken by basis order.
pub(super) fn recover_fraction(
    c: &AhmSeries,
    basis: &mut MonomialBasis,
    bound_each: u32,
) -> Result<YzFraction, ModPolyError> {
    let mut qcache: std::collections::HashMap<(u32, u32), AhmSeries> =
        std::collections::HashMap::new();
    for t in 0..=(2 * bound_each) {
        let support: Vec<(u32, u32)> = (0..=bound_each.min(t))
            .flat_map(|u| (0..=(t - u).min(bound_each)).map(move |v| (u, v)))
            .collect();
        if let Some(frac) = try_support(c, basis, &support, &mut qcache)? {
            return Ok(frac);
        }
    }
    Err(ModPolyError::NoSolution)
}

fn try_support(
    c: &AhmSeries,
    basis: &mut MonomialBasis,
    support: &[(u32, u32)],
    qcache: &mut std::collections::HashMap<(u32, u32), AhmSeries>,
) -> Result<Option<YzFraction>, ModPolyError> {
    // q-columns carry c * m_uv, p-columns carry m_uv
    for &(u, v) in support {
        basis.ensure(u, v);
        if !qcache.contains_key(&(u, v)) {
            qcache.insert((u, v), c.mul(basis.get(u, v)));
        }
    }
    let q_series: Vec<&AhmSeries> = support.iter().map(|uv| &qcache[uv]).collect();
    let p_series: Vec<&AhmSeries> = support.iter().map(|&(u, v)| basis.get(u, v)).collect();

    let mut trunc = i64::MAX;
    let mut vmin = i64::MAX;
    let mut ymax = 0usize;
    for s in q_series.iter().copied().chain(p_series.iter().copied()) {
        if s.ram() != 1 {
            return Err(ModPolyError::CancellationFailure(
                "non-integral powers entered the recovery system".into(),
            ));
        }
        trunc = trunc.min(s.trunc());
        for yc in s.ycoeffs() {
            if !yc.is_zero() {
                vmin = vmin.min(yc.val());
            }
        }
        ymax = ymax.max(s.y_degree());
    }
    if vmin == i64::MAX {
        vmin = 0;
    }
    if trunc - vmin < 8 {
        return Err(ModPolyError::TruncationTooSmall(format!(
            "only {} coefficient rows available for recovery",
            (trunc - vmin).max(0)
        )));
    }

    let ncols = 2 * support.len();
    let mut rows = Vec::new();
    for y in 0..=ymax {
        for e in vmin..trunc {
            let mut row = Vec::with_capacity(ncols);
            let mut nonzero = false;
            for &s in &q_series {
                let v = coeff_at(s, e, y);
                nonzero |= !v.is_zero();
                row.push(v);
            }
            for &s in &p_series {
                let v = -coeff_at(s, e, y);
                nonzero |= !v.is_zero();
                row.push(v);
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    let sys = LinearSystem::new(rows, ncols);
    let null = nullspace(&sys);
    let mut best: Option<(u32, YzFraction)> = None;
    for vec in &null {
        let mut den = BiPolynomial::zero();
        let mut num = BiPolynomial::zero();
        for (idx, &(u, v)) in support.iter().enumerate() {
            den.add_assign_term((u, v), &vec[idx]);
            num.add_assign_term((u, v), &vec[support.len() + idx]);
        }
        if den.is_zero() {
            continue; // spurious relation p(j, chi*) = 0; skip
        }
        let deg = den.total_degree();
        if best.as_ref().map_or(true, |(d, _)| deg < *d) {
            best = Some((deg, YzFraction { num, den }));
        }
    }
    match best {
        None => Ok(None),
        Some((_, frac)) => Ok(Some(reduce_fraction(frac))),
    }
}

fn reduce_fraction(f: YzFraction) -> YzFraction {
    let g = gcd2(&f.num, &f.den);
    let (mut num, mut den) = if g.total_degree() > 0 {
        (div_exact2(&f.num, &g), div_exact2(&f.den, &g))
    } else {
        (f.num, f.den)
    };
    // canonical scale: primitive-integer denominator with positive leading term
    let den_cleared = den.integer_cleared();
    if !den.is_zero() {
        // scale factor den_cleared/den applied to both parts
        let (kd, cd) = den.terms().next_back().map(|(k, c)| (*k, c.clone())).unwrap();
        let target = den_cleared.coeff(kd);
        let s = target / cd;
        num = num.scale(&s);
        den = den_cleared;
    }
    YzFraction { num, den }
}

// ---------------------------------------------------------------------------
// Exact arithmetic in Q[Y, Z] via the (Q[Y])[Z] representation
// ---------------------------------------------------------------------------

/// (Q[Y])[Z] form: entry m is the coefficient of Z^m, a polynomial in Y.
fn bipoly_to_z(p: &BiPolynomial) -> Vec<QPolynomial> {
    if p.is_zero() {
        return Vec::new();
    }
    let degz = p.terms().map(|(&(_, v), _)| v).max().unwrap() as usize;
    let mut cols: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); degz + 1];
    for (&(u, v), c) in p.terms() {
        cols[v as usize].push((u as usize, c.clone()));
    }
    cols.into_iter()
        .map(|col| {
            let deg = col.iter().map(|(u, _)| *u).max().unwrap_or(0);
            let mut coeffs = vec![Rat::zero(); deg + 1];
            for (u, c) in col {
                coeffs[u] = c;
            }
            QPolynomial::from_coeffs(coeffs)
        })
        .collect()
}

fn z_to_bipoly(z: &[QPolynomial]) -> BiPolynomial {
    let mut out = BiPolynomial::zero();
    for (v, p) in z.iter().enumerate() {
        for (u, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.insert((u as u32, v as u32), c.clone());
            }
        }
    }
    out
}

fn z_strip(mut z: Vec<QPolynomial>) -> Vec<QPolynomial> {
    while z.last().map_or(false, QPolynomial::is_zero) {
        z.pop();
    }
    z
}

fn z_content(z: &[QPolynomial]) -> QPolynomial {
    let mut g = QPolynomial::zero();
    for p in z {
        g = g.gcd(p);
    }
    g
}

fn z_divide_content(z: &[QPolynomial], content: &QPolynomial) -> Vec<QPolynomial> {
    z.iter()
        .map(|p| {
            let (q, r) = p.divrem(content);
            debug_assert!(r.is_zero());
            q
        })
        .collect()
}

fn z_primitive(z: Vec<QPolynomial>) -> Vec<QPolynomial> {
    let z = z_strip(z);
    if z.is_empty() {
        return z;
    }
    let c = z_content(&z);
    z_divide_content(&z, &c)
}

/// Pseudo-remainder in (Q[Y])[Z]: repeatedly scale by the divisor's leading
/// coefficient so every cancellation stays polynomial.
fn z_pseudo_rem(a: &[QPolynomial], b: &[QPolynomial]) -> Vec<QPolynomial> {
    assert!(!b.is_empty());
    let mut r: Vec<QPolynomial> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    loop {
        r = z_strip(r);
        if r.len() <= db {
            return r;
        }
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        // r <- lb * r - lr * Z^(dr-db) * b
        for p in r.iter_mut() {
            *p = p.mul(lb);
        }
        for (i, bp) in b.iter().enumerate() {
            let idx = dr - db + i;
            r[idx] = r[idx].sub(&lr.mul(bp));
        }
    }
}

/// Exact division in Q[Y, Z]; panics in debug builds if not divisible.
pub(super) fn div_exact2(a: &BiPolynomial, b: &BiPolynomial) -> BiPolynomial {
    let za = bipoly_to_z(a);
    let zb = z_strip(bipoly_to_z(b));
    assert!(!zb.is_empty(), "division by zero polynomial");
    if za.is_empty() {
        return BiPolynomial::zero();
    }
    let db = zb.len() - 1;
    let lb = &zb[db];
    let mut r = za;
    let mut q = vec![QPolynomial::zero(); r.len().saturating_sub(db)];
    loop {
        r = z_strip(r);
        if r.len() <= db {
            break;
        }
        let dr = r.len() - 1;
        let (qy, rem) = r[dr].divrem(lb);
        debug_assert!(rem.is_zero(), "leading coefficient not divisible");
        q[dr - db] = qy.clone();
        for (i, bp) in zb.iter().enumerate() {
            let t = qy.mul(bp);
            r[dr - db + i] = r[dr - db + i].sub(&t);
        }
    }
    debug_assert!(r.iter().all(QPolynomial::is_zero), "inexact division");
    z_to_bipoly(&q)
}

/// Gcd in Q[Y, Z] (primitive, with positive leading term).
pub(super) fn gcd2(a: &BiPolynomial, b: &BiPolynomial) -> BiPolynomial {
    if a.is_zero() {
        return normalize2(b.clone());
    }
    if b.is_zero() {
        return normalize2(a.clone());
    }
    let a_cleared = a.integer_cleared();
    let b_cleared = b.integer_cleared();
    let za = bipoly_to_z(&a_cleared);
    let zb = bipoly_to_z(&b_cleared);
    let ca = z_content(&za);
    let cb = z_content(&zb);
    let cont = ca.gcd(&cb);
    let mut x = z_primitive(za);
    let mut y = z_primitive(zb);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = z_pseudo_rem(&x, &y);
        x = y;
        y = z_primitive(r);
    }
    // reattach the Y-content
    let g: Vec<QPolynomial> = x.iter().map(|p| p.mul(&cont)).collect();
    normalize2(z_to_bipoly(&g))
}

pub(super) fn lcm2(a: &BiPolynomial, b: &BiPolynomial) -> BiPolynomial {
    let g = gcd2(a, b);
    let q = div_exact2(a, &g);
    normalize2(q.mul(b))
}

/// Primitive-integer, positive-leading normal form.
fn normalize2(p: BiPolynomial) -> BiPolynomial {
    p.integer_cleared()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(u32, u32, i64)]) -> BiPolynomial {
        let mut out = BiPolynomial::zero();
        for &(u, v, c) in terms {
            out.insert((u, v), Rat::from_int(c));
        }
        out
    }

    #[test]
    fn gcd_of_products() {
        // (Y + Z) is a common factor
        let g = p(&[(1, 0, 1), (0, 1, 1)]);
        let a = g.mul(&p(&[(1, 0, 1), (0, 0, -3)])); // (Y+Z)(Y-3)
        let b = g.mul(&p(&[(0, 1, 2), (0, 0, 1)])); // (Y+Z)(2Z+1)
        let got = gcd2(&a, &b);
        assert_eq!(got, g.integer_cleared());
    }

    #[test]
    fn coprime_gcd_is_constant() {
        let a = p(&[(1, 0, 1), (0, 0, 1)]); // Y + 1
        let b = p(&[(0, 1, 1), (0, 0, 1)]); // Z + 1
        let got = gcd2(&a, &b);
        assert_eq!(got.total_degree(), 0);
    }

    #[test]
    fn lcm_and_exact_division() {
        let a = p(&[(1, 0, 1), (0, 1, 1)]); // Y + Z
        let b = p(&[(1, 0, 1), (0, 1, -1)]); // Y - Z
        let l = lcm2(&a, &b);
        // lcm of coprime polynomials is the product (up to normalisation)
        assert_eq!(l, a.mul(&b).integer_cleared());
        let q = div_exact2(&l, &a);
        assert_eq!(q.integer_cleared(), b.integer_cleared());
    }
}
