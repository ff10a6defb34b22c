//! Truncated Puiseux series in q over exact coefficients, optionally extended
//! by a formal variable Y standing for 3/(pi * Im tau).
//!
//! A [`PuiseuxSeries`] stores coefficients for exponents v/M, (v+1)/M, ...,
//! (T-1)/M where M is the ramification. The truncation T is hard metadata:
//! reading a coefficient at or beyond T/M is an error, never silently zero,
//! and every operation propagates the truncation pessimistically.
//!
//! An [`AhmSeries`] is a polynomial in Y whose coefficients are Puiseux
//! series; the q-substitution action q -> zeta_d^b q^(a/d) also rescales Y by
//! d/a, because Im((a tau + b)/d) = (a/d) Im tau.

use std::fmt;

use thiserror::Error;

use crate::exactalg::arith::{gcd, lcm};
use crate::exactalg::{CycloElement, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("coefficient at exponent {num}/{den} is beyond the truncation")]
    OutOfTruncation { num: i64, den: u32 },
    #[error("leading coefficient is not invertible")]
    NonUnitLeading,
}

// ---------------------------------------------------------------------------
// Scalar: Rat or CycloElement, with automatic demotion
// ---------------------------------------------------------------------------

/// A coefficient: an exact rational or a cyclotomic field element.
///
/// Arithmetic normalises eagerly: a cyclotomic value whose non-constant
/// coordinates vanish is demoted to `Rat`, so structural equality coincides
/// with equality of values.
#[derive(Clone, PartialEq, Debug)]
pub enum Scalar {
    Rat(Rat),
    Cyclo(CycloElement),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rat::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(Rat::from_int(n))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Cyclo(c) => c.is_zero(),
        }
    }

    fn normalize(self) -> Self {
        match self {
            Scalar::Cyclo(c) => match c.to_rat() {
                Some(r) => Scalar::Rat(r),
                None => Scalar::Cyclo(c),
            },
            s => s,
        }
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Cyclo(_) => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Rat(a), Scalar::Cyclo(b)) => {
                Scalar::Cyclo(CycloElement::from_rat(a.clone(), b.order()).add(b)).normalize()
            }
            (Scalar::Cyclo(a), Scalar::Rat(b)) => {
                Scalar::Cyclo(a.add(&CycloElement::from_rat(b.clone(), a.order()))).normalize()
            }
            (Scalar::Cyclo(a), Scalar::Cyclo(b)) => Scalar::Cyclo(a.add(b)).normalize(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Cyclo(c) => Scalar::Cyclo(c.neg()),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Rat(a), Scalar::Cyclo(b)) => Scalar::Cyclo(b.scale(a)).normalize(),
            (Scalar::Cyclo(a), Scalar::Rat(b)) => Scalar::Cyclo(a.scale(b)).normalize(),
            (Scalar::Cyclo(a), Scalar::Cyclo(b)) => Scalar::Cyclo(a.mul(b)).normalize(),
        }
    }

    pub fn inv(&self) -> Result<Self, SeriesError> {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    Err(SeriesError::NonUnitLeading)
                } else {
                    Ok(Scalar::Rat(r.recip()))
                }
            }
            Scalar::Cyclo(c) => c
                .inv()
                .map(|i| Scalar::Cyclo(i).normalize())
                .map_err(|_| SeriesError::NonUnitLeading),
        }
    }
}

impl From<Rat> for Scalar {
    fn from(r: Rat) -> Self {
        Scalar::Rat(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Cyclo(c) => {
                write!(f, "(")?;
                let d = c.order();
                let mut first = true;
                for (i, x) in c.coeffs().iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match i {
                        0 => write!(f, "{x}")?,
                        1 => write!(f, "{x}*z{d}")?,
                        _ => write!(f, "{x}*z{d}^{i}")?,
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                write!(f, ")")
            }
        }
    }
}

// ---------------------------------------------------------------------------
// PuiseuxSeries
// ---------------------------------------------------------------------------

/// Truncated series sum c_e q^(e/M), with coefficients stored densely for
/// exponents v <= e < T (in units of 1/M).
#[derive(Clone, PartialEq, Debug)]
pub struct PuiseuxSeries {
    ram: u32,
    val: i64,
    trunc: i64,
    coeffs: Vec<Scalar>,
}

impl PuiseuxSeries {
    /// The zero series, known to be zero for all exponents below `trunc`/`ram`.
    pub fn zero(ram: u32, trunc: i64) -> Self {
        assert!(ram >= 1);
        PuiseuxSeries {
            ram,
            val: trunc,
            trunc,
            coeffs: Vec::new(),
        }
    }

    /// c * q^(val/ram), truncated at trunc/ram.
    pub fn monomial(c: Scalar, val: i64, ram: u32, trunc: i64) -> Self {
        assert!(ram >= 1);
        if c.is_zero() || val >= trunc {
            return Self::zero(ram, trunc);
        }
        let mut coeffs = vec![Scalar::zero(); (trunc - val) as usize];
        coeffs[0] = c;
        PuiseuxSeries {
            ram,
            val,
            trunc,
            coeffs,
        }
    }

    pub fn constant(c: Scalar, trunc: i64) -> Self {
        Self::monomial(c, 0, 1, trunc)
    }

    pub fn one(trunc: i64) -> Self {
        Self::constant(Scalar::one(), trunc)
    }

    /// Build from dense coefficients; entry i is the coefficient of
    /// q^((val+i)/ram).
    pub fn from_coeffs(ram: u32, val: i64, coeffs: Vec<Scalar>) -> Self {
        assert!(ram >= 1);
        let trunc = val + coeffs.len() as i64;
        let mut s = PuiseuxSeries {
            ram,
            val,
            trunc,
            coeffs,
        };
        s.strip();
        s
    }

    pub fn from_rat_coeffs(ram: u32, val: i64, coeffs: Vec<Rat>) -> Self {
        Self::from_coeffs(ram, val, coeffs.into_iter().map(Scalar::Rat).collect())
    }

    fn strip(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) => {
                self.coeffs.drain(..k);
                self.val += k as i64;
            }
            None => {
                self.coeffs.clear();
                self.val = self.trunc;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    /// Lowest stored exponent numerator (the exponent is val/ram). Equals the
    /// truncation for the zero series.
    pub fn val(&self) -> i64 {
        self.val
    }

    /// Truncation numerator: coefficients are known for exponents < trunc/ram.
    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    fn get(&self, e: i64) -> Scalar {
        if e < self.val || e >= self.trunc {
            return Scalar::zero();
        }
        self.coeffs[(e - self.val) as usize].clone()
    }

    /// Exact coefficient at the rational exponent `num/den`.
    pub fn coefficient_at(&self, num: i64, den: u32) -> Result<Scalar, SeriesError> {
        assert!(den >= 1);
        let g = gcd(num, den as i64).max(1);
        let (n, d) = (num / g, den as i64 / g);
        if n * self.ram as i64 >= self.trunc * d {
            return Err(SeriesError::OutOfTruncation { num, den });
        }
        if self.ram as i64 % d != 0 {
            // exponent not representable at this ramification: coefficient 0
            return Ok(Scalar::zero());
        }
        Ok(self.get(n * (self.ram as i64 / d)))
    }

    /// Rescale to a finer ramification (`m` must be a multiple).
    pub fn to_ram(&self, m: u32) -> Self {
        assert!(m % self.ram == 0, "ramification {} -> {}", self.ram, m);
        let k = (m / self.ram) as i64;
        if k == 1 {
            return self.clone();
        }
        let mut coeffs = vec![Scalar::zero(); ((self.trunc - self.val) * k) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                coeffs[i * k as usize] = c.clone();
            }
        }
        PuiseuxSeries {
            ram: m,
            val: self.val * k,
            trunc: self.trunc * k,
            coeffs,
        }
    }

    /// Reduce the ramification as far as the support allows.
    pub fn simplify_ram(&self) -> Self {
        if self.ram == 1 {
            return self.clone();
        }
        let mut g = self.ram as i64;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                g = gcd(g, self.val + i as i64);
                if g == 1 {
                    return self.clone();
                }
            }
        }
        let new_ram = (self.ram as i64 / g) as u32;
        // knowledge window [val, trunc) maps to ceil of the division
        let ceil_div = |x: i64| x.div_euclid(g) + i64::from(x.rem_euclid(g) != 0);
        let new_val = ceil_div(self.val);
        let new_trunc = ceil_div(self.trunc);
        let mut coeffs = vec![Scalar::zero(); (new_trunc - new_val).max(0) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = (self.val + i as i64) / g;
                coeffs[(e - new_val) as usize] = c.clone();
            }
        }
        let mut s = PuiseuxSeries {
            ram: new_ram,
            val: new_val.min(new_trunc),
            trunc: new_trunc,
            coeffs,
        };
        s.strip();
        s
    }

    fn unify(a: &Self, b: &Self) -> (Self, Self) {
        let m = lcm(a.ram as i64, b.ram as i64) as u32;
        (a.to_ram(m), b.to_ram(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        let trunc = a.trunc.min(b.trunc);
        let val = a.val.min(b.val).min(trunc);
        let mut coeffs = vec![Scalar::zero(); (trunc - val) as usize];
        for (i, slot) in coeffs.iter_mut().enumerate() {
            let e = val + i as i64;
            *slot = a.get(e).add(&b.get(e));
        }
        let mut s = PuiseuxSeries {
            ram: a.ram,
            val,
            trunc,
            coeffs,
        };
        s.strip();
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            ram: self.ram,
            val: self.val,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.ram, self.trunc);
        }
        let mut s = PuiseuxSeries {
            ram: self.ram,
            val: self.val,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
        };
        s.strip();
        s
    }

    /// Multiply by q^(e/ram): shifts the exponent window.
    pub fn shift(&self, e: i64) -> Self {
        PuiseuxSeries {
            ram: self.ram,
            val: self.val + e,
            trunc: self.trunc + e,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::unify(self, other);
        // the product coefficient at e is complete iff e < min(Ta+vb, Tb+va)
        let trunc = (a.trunc + b.val).min(b.trunc + a.val);
        if a.is_zero() || b.is_zero() {
            return Self::zero(a.ram, trunc);
        }
        let val = a.val + b.val;
        let n = (trunc - val).max(0) as usize;
        let mut coeffs = vec![Scalar::zero(); n];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() || i >= n {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if cb.is_zero() {
                    continue;
                }
                let t = ca.mul(cb);
                coeffs[i + j] = coeffs[i + j].add(&t);
            }
        }
        let mut s = PuiseuxSeries {
            ram: a.ram,
            val,
            trunc,
            coeffs,
        };
        s.strip();
        s
    }

    /// Multiplicative inverse: a * invert(a) = 1 up to truncation. Fails if
    /// the leading coefficient is not invertible.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        if self.is_zero() {
            return Err(SeriesError::NonUnitLeading);
        }
        let lead_inv = self.coeffs[0].inv()?;
        let n = (self.trunc - self.val) as usize;
        let mut out: Vec<Scalar> = Vec::with_capacity(n);
        out.push(lead_inv.clone());
        for m in 1..n {
            let mut s = Scalar::zero();
            for i in 1..=m {
                if !self.coeffs[i].is_zero() && !out[m - i].is_zero() {
                    s = s.add(&self.coeffs[i].mul(&out[m - i]));
                }
            }
            out.push(s.mul(&lead_inv).neg());
        }
        Ok(PuiseuxSeries {
            ram: self.ram,
            val: -self.val,
            trunc: self.trunc - 2 * self.val,
            coeffs: out,
        })
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one(self.trunc - self.val);
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        result.unwrap()
    }

    /// Clamp the truncation down to `t` (in units of 1/ram).
    pub fn truncate_to(&self, t: i64) -> Self {
        if t >= self.trunc {
            return self.clone();
        }
        let keep = (t - self.val).max(0) as usize;
        let mut s = PuiseuxSeries {
            ram: self.ram,
            val: self.val.min(t),
            trunc: t,
            coeffs: self.coeffs[..keep.min(self.coeffs.len())].to_vec(),
        };
        s.strip();
        s
    }

    /// The operator q d/dq: multiplies the coefficient of q^(e/M) by e/M.
    pub fn q_derivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = Rat::new(self.val + i as i64, self.ram as i64);
            coeffs.push(c.mul(&Scalar::Rat(e)));
        }
        let mut s = PuiseuxSeries {
            ram: self.ram,
            val: self.val,
            trunc: self.trunc,
            coeffs,
        };
        s.strip();
        s
    }

    /// The action q -> zeta_d^b q^(a/d), with exact exponent bookkeeping.
    ///
    /// A term c q^(e/M) becomes c zeta_(dM)^(eb) q^(ea/(dM)); the output
    /// ramification dM is simplified afterwards where possible.
    pub fn substitute_q(&self, a: i64, b: i64, d: i64) -> Self {
        assert!(a >= 1 && d >= 1);
        let out_ram_i = self.ram as i64 * d;
        let out_ram = u32::try_from(out_ram_i).expect("ramification overflow");
        let val = self.val * a;
        let trunc = self.trunc * a;
        let mut coeffs = vec![Scalar::zero(); (trunc - val) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = self.val + i as i64;
            let root_pow = (e * b).rem_euclid(out_ram_i);
            let term = if root_pow == 0 {
                c.clone()
            } else {
                c.mul(&Scalar::Cyclo(CycloElement::zeta_pow(out_ram, root_pow)).normalize())
            };
            coeffs[(i as i64 * a) as usize] = term;
        }
        let s = PuiseuxSeries {
            ram: out_ram,
            val,
            trunc,
            coeffs,
        };
        s.simplify_ram()
    }

    /// Stored coefficients with their exponent numerators (units of 1/ram).
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.val + i as i64, c))
    }

    /// True if every coefficient is rational and every exponent integral.
    pub fn is_rational_integral(&self) -> bool {
        let s = self.simplify_ram();
        s.ram == 1 && s.coeffs.iter().all(|c| matches!(c, Scalar::Rat(_)))
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{c}")?;
            } else if self.ram == 1 {
                write!(f, "{c}*q^{e}")?;
            } else {
                write!(f, "{c}*q^({e}/{})", self.ram)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        if self.ram == 1 {
            write!(f, " + O(q^{})", self.trunc)
        } else {
            write!(f, " + O(q^({}/{}))", self.trunc, self.ram)
        }
    }
}

// ---------------------------------------------------------------------------
// AhmSeries
// ---------------------------------------------------------------------------

/// A polynomial in Y with Puiseux-series coefficients; Y stands for
/// 3/(pi * Im tau). All Y-coefficients share one ramification and truncation.
#[derive(Clone, PartialEq, Debug)]
pub struct AhmSeries {
    ycoeffs: Vec<PuiseuxSeries>, // index k = coefficient of Y^k; never empty
}

impl AhmSeries {
    pub fn zero(ram: u32, trunc: i64) -> Self {
        AhmSeries {
            ycoeffs: vec![PuiseuxSeries::zero(ram, trunc)],
        }
    }

    /// A pure q-series (Y-degree 0).
    pub fn from_puiseux(s: PuiseuxSeries) -> Self {
        AhmSeries { ycoeffs: vec![s] }
    }

    /// Assemble from Y-coefficients (index = power of Y).
    pub fn from_ycoeffs(ycoeffs: Vec<PuiseuxSeries>) -> Self {
        assert!(!ycoeffs.is_empty());
        let mut s = AhmSeries { ycoeffs };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let ram = self
            .ycoeffs
            .iter()
            .fold(1i64, |m, s| lcm(m, s.ram() as i64)) as u32;
        let trunc = self
            .ycoeffs
            .iter()
            .map(|s| s.trunc() * (ram / s.ram()) as i64)
            .min()
            .unwrap();
        for s in &mut self.ycoeffs {
            *s = s.to_ram(ram).truncate_to(trunc);
        }
        while self.ycoeffs.len() > 1 && self.ycoeffs.last().unwrap().is_zero() {
            self.ycoeffs.pop();
        }
    }

    pub fn y_degree(&self) -> usize {
        self.ycoeffs.len() - 1
    }

    pub fn ycoeff(&self, k: usize) -> PuiseuxSeries {
        self.ycoeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| PuiseuxSeries::zero(self.ram(), self.trunc()))
    }

    pub fn ycoeffs(&self) -> &[PuiseuxSeries] {
        &self.ycoeffs
    }

    pub fn ram(&self) -> u32 {
        self.ycoeffs[0].ram()
    }

    pub fn trunc(&self) -> i64 {
        self.ycoeffs[0].trunc()
    }

    pub fn is_zero(&self) -> bool {
        self.ycoeffs.iter().all(PuiseuxSeries::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.ycoeffs.len().max(other.ycoeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.ycoeff(k).add(&other.ycoeff(k)));
        }
        Self::from_ycoeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        AhmSeries {
            ycoeffs: self.ycoeffs.iter().map(PuiseuxSeries::neg).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.ycoeffs.len() + other.ycoeffs.len() - 1;
        let mut out: Vec<Option<PuiseuxSeries>> = vec![None; n];
        for (i, a) in self.ycoeffs.iter().enumerate() {
            for (j, b) in other.ycoeffs.iter().enumerate() {
                let p = a.mul(b);
                out[i + j] = Some(match out[i + j].take() {
                    None => p,
                    Some(acc) => acc.add(&p),
                });
            }
        }
        Self::from_ycoeffs(out.into_iter().map(Option::unwrap).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_ycoeffs(self.ycoeffs.iter().map(|s| s.scale(c)).collect())
    }

    pub fn mul_puiseux(&self, s: &PuiseuxSeries) -> Self {
        Self::from_ycoeffs(self.ycoeffs.iter().map(|y| y.mul(s)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::from_puiseux(PuiseuxSeries::one(
                self.trunc() - self.ycoeffs[0].val(),
            ));
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base);
        }
        result.unwrap()
    }

    pub fn truncate_to(&self, t: i64) -> Self {
        Self::from_ycoeffs(self.ycoeffs.iter().map(|s| s.truncate_to(t)).collect())
    }

    /// True if every Y-coefficient has rational coefficients and integral
    /// q-powers only.
    pub fn is_rational_integral(&self) -> bool {
        self.ycoeffs.iter().all(PuiseuxSeries::is_rational_integral)
    }
}

/// The substitution action of an upper-triangular matrix (a, b; 0, d):
/// q -> zeta_d^b q^(a/d) on the series part, Y -> (d/a) Y on the formal part.
pub fn substitute_qaction(s: &AhmSeries, a: i64, b: i64, d: i64) -> AhmSeries {
    assert!(a >= 1 && d >= 1);
    let y_scale = Rat::new(d, a);
    let mut out = Vec::with_capacity(s.ycoeffs.len());
    let mut factor = Rat::one();
    for y in &s.ycoeffs {
        out.push(y.substitute_q(a, b, d).scale(&Scalar::Rat(factor.clone())));
        factor = factor * &y_scale;
    }
    AhmSeries::from_ycoeffs(out)
}

impl fmt::Display for AhmSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.ycoeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + Y^{k}*")?;
            }
            write!(f, "[{s}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(val: i64, coeffs: &[i64]) -> PuiseuxSeries {
        PuiseuxSeries::from_coeffs(1, val, coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    #[test]
    fn add_and_mul_basics() {
        // (1+q)(1-q) = 1 - q^2
        let a = series(0, &[1, 1]);
        let b = series(0, &[1, -1]);
        let p = a.mul(&b);
        assert_eq!(p.coefficient_at(0, 1).unwrap(), Scalar::from_int(1));
        assert_eq!(p.coefficient_at(1, 1).unwrap(), Scalar::zero());
        assert_eq!(p.trunc(), 2);

        // q^-1 + q^-1 = 2 q^-1
        let c = series(-1, &[1, 0, 0]);
        let s = c.add(&c);
        assert_eq!(s.coefficient_at(-1, 1).unwrap(), Scalar::from_int(2));
    }

    #[test]
    fn ramification_merge() {
        // (1 + q^(1/2)) * (1 - q^(1/2)) = 1 - q
        let a = PuiseuxSeries::from_coeffs(
            2,
            0,
            vec![Scalar::one(), Scalar::one(), Scalar::zero(), Scalar::zero()],
        );
        let b = PuiseuxSeries::from_coeffs(
            2,
            0,
            vec![
                Scalar::one(),
                Scalar::from_int(-1),
                Scalar::zero(),
                Scalar::zero(),
            ],
        );
        let p = a.mul(&b);
        assert_eq!(p.coefficient_at(0, 1).unwrap(), Scalar::one());
        assert_eq!(p.coefficient_at(1, 2).unwrap(), Scalar::zero());
        assert_eq!(p.coefficient_at(1, 1).unwrap(), Scalar::from_int(-1));
    }

    #[test]
    fn invert_examples() {
        // 1/(1-q) = 1 + q + q^2 + ...
        let a = series(0, &[1, -1, 0, 0, 0]);
        let inv = a.invert().unwrap();
        for e in 0..5 {
            assert_eq!(inv.coefficient_at(e, 1).unwrap(), Scalar::one());
        }
        // q(1+q) inverts to q^-1 (1 - q + q^2 - ...)
        let b = series(1, &[1, 1, 0, 0]);
        let binv = b.invert().unwrap();
        assert_eq!(binv.val(), -1);
        assert_eq!(binv.coefficient_at(-1, 1).unwrap(), Scalar::one());
        assert_eq!(binv.coefficient_at(0, 1).unwrap(), Scalar::from_int(-1));
        assert_eq!(binv.coefficient_at(1, 1).unwrap(), Scalar::one());
        // constants invert exactly
        let two = PuiseuxSeries::constant(Scalar::from_int(2), 4);
        assert_eq!(
            two.invert().unwrap().coefficient_at(0, 1).unwrap(),
            Scalar::Rat(Rat::new(1, 2))
        );
        // a * invert(a) = 1 up to truncation
        let prod = b.mul(&binv);
        assert_eq!(prod.coefficient_at(0, 1).unwrap(), Scalar::one());
        for e in 1..prod.trunc() {
            assert_eq!(prod.coefficient_at(e, 1).unwrap(), Scalar::zero());
        }
        // zero leading coefficient is rejected
        assert_eq!(
            PuiseuxSeries::zero(1, 5).invert(),
            Err(SeriesError::NonUnitLeading)
        );
    }

    #[test]
    fn coefficient_access_rules() {
        let s = series(0, &[1, -24]); // 1 - 24q, truncation 2
        assert_eq!(s.coefficient_at(1, 1).unwrap(), Scalar::from_int(-24));
        assert_eq!(s.coefficient_at(1, 2).unwrap(), Scalar::zero());
        assert_eq!(
            s.coefficient_at(5, 1),
            Err(SeriesError::OutOfTruncation { num: 5, den: 1 })
        );
    }

    #[test]
    fn substitution_examples() {
        // q under (a,b,d) = (1,1,2) becomes zeta_2 q^(1/2) = -q^(1/2)
        let q = series(1, &[1, 0, 0]);
        let t = q.substitute_q(1, 1, 2);
        assert_eq!(t.coefficient_at(1, 2).unwrap(), Scalar::from_int(-1));
        // q^-1 under (1,0,2) becomes q^(-1/2)
        let qi = series(-1, &[1, 0, 0]);
        let u = qi.substitute_q(1, 0, 2);
        assert_eq!(u.coefficient_at(-1, 2).unwrap(), Scalar::one());
        // Y alone under (2,0,1) picks up the factor d/a = 1/2
        let y = AhmSeries::from_ycoeffs(vec![PuiseuxSeries::zero(1, 4), PuiseuxSeries::one(4)]);
        let v = substitute_qaction(&y, 2, 0, 1);
        assert_eq!(
            v.ycoeff(1).coefficient_at(0, 1).unwrap(),
            Scalar::Rat(Rat::new(1, 2))
        );
    }

    #[test]
    fn substitution_is_multiplicative() {
        let s = series(-1, &[3, 1, 0, 2, 5, -7, 1, 0, 4]);
        let t = series(0, &[1, -2, 0, 1, 1, 3, -1, 2]);
        for (a, b, d) in [(1, 1, 2), (2, 1, 3), (3, 2, 4), (2, 0, 1)] {
            let lhs = s.mul(&t).substitute_q(a, b, d);
            let rhs = s.substitute_q(a, b, d).mul(&t.substitute_q(a, b, d));
            let diff = lhs.sub(&rhs);
            assert!(diff.is_zero(), "({a},{b},{d}): {diff}");
        }
    }

    #[test]
    fn symmetrization_cancels_fractional_powers() {
        // For a rational series, the product over b = 0..d-1 of the images
        // under (a,b,d) has integral powers and rational coefficients.
        let s = series(-1, &[2, -3, 5, 1, 0, 7, -2, 1, 1, 4, -6, 2]);
        for (a, d) in [(1i64, 2i64), (1, 3), (1, 4), (2, 3)] {
            let mut prod = PuiseuxSeries::one(1000);
            for b in 0..d {
                prod = prod.mul(&s.substitute_q(a, b, d));
            }
            assert!(prod.is_rational_integral(), "a={a} d={d}: {prod}");
        }
    }

    #[test]
    fn ring_laws_on_random_series() {
        let mut state = 0x1234_5678_9abc_def1u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 13) as i64 - 6
        };
        for _ in 0..25 {
            let mut mk = || {
                let val = next() % 3;
                let n = 4 + (next().unsigned_abs() as usize % 5);
                let coeffs = (0..n).map(|_| Scalar::from_int(next())).collect();
                PuiseuxSeries::from_coeffs(1, val, coeffs)
            };
            let a = mk();
            let b = mk();
            let c = mk();
            let assoc = a.mul(&b).mul(&c).sub(&a.mul(&b.mul(&c)));
            assert!(assoc.is_zero(), "associativity failed");
            let distrib = a.mul(&b.add(&c)).sub(&a.mul(&b).add(&a.mul(&c)));
            assert!(distrib.is_zero(), "distributivity failed");
        }
    }

    #[test]
    fn ahm_series_structure() {
        let chi_like = AhmSeries::from_ycoeffs(vec![
            series(-1, &[1, 0, 2, 3]),
            series(-1, &[-1, 0, 0, 0]),
        ]);
        assert_eq!(chi_like.y_degree(), 1);
        let sq = chi_like.mul(&chi_like);
        assert_eq!(sq.y_degree(), 2);
        // (x + yY)^2 has Y-coefficient 2xy
        let expect = series(-1, &[1, 0, 2, 3])
            .mul(&series(-1, &[-1, 0, 0, 0]))
            .scale(&Scalar::from_int(2));
        assert_eq!(sq.ycoeff(1), expect.truncate_to(sq.trunc()));
    }
}
