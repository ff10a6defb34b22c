//! Exact q-expansions of the generating functions: the Eisenstein series
//! E2, E4, E6, the discriminant Delta, the j-function, f = E4*E6/Delta,
//! chi = E2*f, and chi* = chi - Y*f with Y the formal stand-in for
//! 3/(pi * Im tau).
//!
//! The Eisenstein normalisations (-24, 240, -504) are hard-coded and guarded
//! by the derivative identity D(E4) = (E2*E4 - E6)/3, D = q d/dq, which pins
//! all three constants at once.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::Integer;

use crate::exactalg::Rat;
use crate::qseries::{AhmSeries, PuiseuxSeries, Scalar};

/// Names of the functions this crate evaluates and expands.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum FnName {
    E2,
    E4,
    E6,
    E2Star,
    Delta,
    J,
    F,
    Chi,
    ChiStar,
}

impl FnName {
    pub const ALL: [FnName; 9] = [
        FnName::E2,
        FnName::E4,
        FnName::E6,
        FnName::E2Star,
        FnName::Delta,
        FnName::J,
        FnName::F,
        FnName::Chi,
        FnName::ChiStar,
    ];
}

impl fmt::Display for FnName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FnName::E2 => "E2",
            FnName::E4 => "E4",
            FnName::E6 => "E6",
            FnName::E2Star => "E2star",
            FnName::Delta => "Delta",
            FnName::J => "j",
            FnName::F => "f",
            FnName::Chi => "chi",
            FnName::ChiStar => "chi_star",
        };
        write!(f, "{s}")
    }
}

impl FromStr for FnName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "E2" | "e2" => Ok(FnName::E2),
            "E4" | "e4" => Ok(FnName::E4),
            "E6" | "e6" => Ok(FnName::E6),
            "E2star" | "e2star" | "E2*" => Ok(FnName::E2Star),
            "Delta" | "delta" => Ok(FnName::Delta),
            "j" => Ok(FnName::J),
            "f" => Ok(FnName::F),
            "chi" => Ok(FnName::Chi),
            "chi_star" | "chistar" | "chi*" => Ok(FnName::ChiStar),
            other => Err(format!("unknown function name: {other}")),
        }
    }
}

/// A named q-expansion together with its truncation.
#[derive(Clone, Debug)]
pub struct NamedSeries {
    pub name: FnName,
    pub series: AhmSeries,
    pub truncation: i64,
}

/// Divisor power sum: sum of d^k over positive divisors d of n.
pub fn sigma(k: u32, n: u64) -> Integer {
    assert!(n >= 1);
    let mut s = Integer::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += Integer::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += Integer::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// Exact q-expansion of E2, E4 or E6 to truncation T (constant term 1).
pub fn eisenstein_qexp(k: u32, t: i64) -> PuiseuxSeries {
    assert!(t >= 1);
    let (weight, factor) = match k {
        2 => (1u32, -24i64),
        4 => (3, 240),
        6 => (5, -504),
        other => panic!("eisenstein_qexp: weight {other} not in {{2, 4, 6}}"),
    };
    let mut coeffs = Vec::with_capacity(t as usize);
    coeffs.push(Rat::one());
    for n in 1..t {
        coeffs.push(Rat::from(sigma(weight, n as u64) * Integer::from(factor)));
    }
    PuiseuxSeries::from_rat_coeffs(1, 0, coeffs)
}

/// The q-expansions of Delta, j, f, chi and chi*, exact to truncation T.
///
/// Everything is built by ring operations from the Eisenstein expansions,
/// computed with enough margin that the stated truncation is exact.
pub fn derived_qexp(name: FnName, t: i64) -> NamedSeries {
    assert!(t >= 2);
    assert!(
        matches!(
            name,
            FnName::Delta | FnName::J | FnName::F | FnName::Chi | FnName::ChiStar
        ),
        "derived_qexp: {name} is not a derived series"
    );
    named_series(name, t)
}

/// Like [`derived_qexp`] but accepting every [`FnName`], including the raw
/// Eisenstein series and E2* = E2 - Y.
pub fn named_series(name: FnName, t: i64) -> NamedSeries {
    let series = match name {
        FnName::E2 => AhmSeries::from_puiseux(eisenstein_qexp(2, t)),
        FnName::E4 => AhmSeries::from_puiseux(eisenstein_qexp(4, t)),
        FnName::E6 => AhmSeries::from_puiseux(eisenstein_qexp(6, t)),
        FnName::E2Star => AhmSeries::from_ycoeffs(vec![
            eisenstein_qexp(2, t),
            PuiseuxSeries::constant(Scalar::from_int(-1), t),
        ]),
        FnName::Delta => AhmSeries::from_puiseux(delta_qexp(t)),
        FnName::J => AhmSeries::from_puiseux(j_qexp(t)),
        FnName::F => AhmSeries::from_puiseux(f_qexp(t)),
        FnName::Chi => AhmSeries::from_puiseux(chi_qexp(t)),
        FnName::ChiStar => chi_star_qexp(t),
    };
    NamedSeries {
        name,
        series,
        truncation: t,
    }
}

/// Delta = (E4^3 - E6^2)/1728, exact to T; valuation 1, leading coefficient 1.
pub fn delta_qexp(t: i64) -> PuiseuxSeries {
    let m = t + 2;
    let e4 = eisenstein_qexp(4, m);
    let e6 = eisenstein_qexp(6, m);
    e4.pow(3)
        .sub(&e6.pow(2))
        .scale(&Scalar::Rat(Rat::new(1, 1728)))
        .truncate_to(t)
}

/// j = E4^3 / Delta = q^-1 + 744 + 196884 q + ..., exact to T.
pub fn j_qexp(t: i64) -> PuiseuxSeries {
    let m = t + 2;
    let e4 = eisenstein_qexp(4, m);
    let delta = delta_qexp(m);
    e4.pow(3)
        .mul(&delta.invert().expect("Delta has unit leading coefficient"))
        .truncate_to(t)
}

/// f = E4*E6/Delta, a weight -2 meromorphic modular form; valuation -1.
pub fn f_qexp(t: i64) -> PuiseuxSeries {
    let m = t + 2;
    let e4 = eisenstein_qexp(4, m);
    let e6 = eisenstein_qexp(6, m);
    let delta = delta_qexp(m);
    e4.mul(&e6)
        .mul(&delta.invert().expect("Delta has unit leading coefficient"))
        .truncate_to(t)
}

/// chi = E2*f, the quasimodular generator; valuation -1.
pub fn chi_qexp(t: i64) -> PuiseuxSeries {
    let m = t + 2;
    eisenstein_qexp(2, m).mul(&f_qexp(m)).truncate_to(t)
}

/// chi* = chi - Y*f as a Y-polynomial of degree exactly 1.
pub fn chi_star_qexp(t: i64) -> AhmSeries {
    AhmSeries::from_ycoeffs(vec![chi_qexp(t), f_qexp(t).neg()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat_coeff(s: &PuiseuxSeries, e: i64) -> Rat {
        match s.coefficient_at(e, 1).unwrap() {
            Scalar::Rat(r) => r,
            other => panic!("non-rational coefficient {other:?}"),
        }
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(sigma(1, 1), 1);
        assert_eq!(sigma(1, 6), 12);
        assert_eq!(sigma(3, 2), 9);
        assert_eq!(sigma(5, 4), 1 + 32 + 1024);
    }

    #[test]
    fn eisenstein_coefficients() {
        let e2 = eisenstein_qexp(2, 8);
        assert_eq!(rat_coeff(&e2, 0), Rat::one());
        assert_eq!(rat_coeff(&e2, 1), Rat::from_int(-24));
        let e4 = eisenstein_qexp(4, 8);
        assert_eq!(rat_coeff(&e4, 1), Rat::from_int(240));
        assert_eq!(rat_coeff(&e4, 2), Rat::from_int(2160));
        let e6 = eisenstein_qexp(6, 8);
        assert_eq!(rat_coeff(&e6, 0), Rat::one());
        assert_eq!(rat_coeff(&e6, 1), Rat::from_int(-504));
    }

    #[test]
    fn delta_against_eta_product_oracle() {
        // Independent oracle: Delta = q * prod_(n>=1) (1 - q^n)^24.
        let t = 31;
        let mut prod = PuiseuxSeries::one(t);
        for n in 1..t {
            let factor = PuiseuxSeries::from_rat_coeffs(
                1,
                0,
                {
                    let mut c = vec![Rat::zero(); t as usize];
                    c[0] = Rat::one();
                    c[n as usize] = -Rat::one();
                    c
                },
            );
            prod = prod.mul(&factor).truncate_to(t);
        }
        let oracle = prod.pow(24).truncate_to(t).shift(1);
        let delta = delta_qexp(t);
        assert!(delta.sub(&oracle).is_zero(), "Delta mismatch with product");
        assert_eq!(rat_coeff(&delta, 1), Rat::one());
        assert_eq!(rat_coeff(&delta, 2), Rat::from_int(-24));
        assert_eq!(rat_coeff(&delta, 3), Rat::from_int(252));
        assert_eq!(rat_coeff(&delta, 4), Rat::from_int(-1472));
    }

    #[test]
    fn j_expansion_and_double_truncation() {
        let j30 = j_qexp(30);
        assert_eq!(j30.val(), -1);
        assert_eq!(rat_coeff(&j30, -1), Rat::one());
        assert_eq!(rat_coeff(&j30, 0), Rat::from_int(744));
        assert_eq!(rat_coeff(&j30, 1), Rat::from_int(196884));
        assert_eq!(rat_coeff(&j30, 2), Rat::from_int(21493760));
        // computing at twice the truncation must reproduce every coefficient
        let j60 = j_qexp(60);
        assert!(j60.truncate_to(30).sub(&j30).is_zero());
    }

    #[test]
    fn derivative_identity_pins_normalisations() {
        // D(E4) = (E2*E4 - E6)/3 exactly, D = q d/dq
        let t = 40;
        let e2 = eisenstein_qexp(2, t);
        let e4 = eisenstein_qexp(4, t);
        let e6 = eisenstein_qexp(6, t);
        let lhs = e4.q_derivative();
        let rhs = e2.mul(&e4).sub(&e6).scale(&Scalar::Rat(Rat::new(1, 3)));
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn integrality_of_cleared_series() {
        // Delta, j*Delta = E4^3 and f*Delta = E4*E6 all have integer
        // coefficients; exercise the divisions by re-multiplying.
        let t = 25;
        let delta = delta_qexp(t);
        let j = j_qexp(t);
        let f = f_qexp(t);
        for s in [&delta, &j.mul(&delta), &f.mul(&delta)] {
            for (_, c) in s.terms() {
                let r = c.as_rat().expect("rational");
                assert!(r.is_integer(), "non-integer coefficient {r}");
            }
        }
        // j itself is an integer Laurent series
        for (_, c) in j.terms() {
            assert!(c.as_rat().unwrap().is_integer());
        }
    }

    #[test]
    fn chi_and_chi_star_shape() {
        let t = 20;
        let ns = derived_qexp(FnName::ChiStar, t);
        let chi_star = ns.series;
        assert_eq!(chi_star.y_degree(), 1);
        // Y-coefficient is exactly -f
        assert!(chi_star.ycoeff(1).sub(&f_qexp(t).neg()).is_zero());
        // constant Y-coefficient is chi = E2*f
        let chi = chi_star.ycoeff(0);
        assert!(chi.sub(&eisenstein_qexp(2, t + 2).mul(&f_qexp(t + 2)).truncate_to(t)).is_zero());
        assert_eq!(chi.val(), -1);
        // f and j have valuation -1, Delta valuation 1
        assert_eq!(f_qexp(t).val(), -1);
        assert_eq!(delta_qexp(t).val(), 1);
    }
}
