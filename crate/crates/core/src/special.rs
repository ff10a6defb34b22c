//! Geodesic descriptors and numeric membership probes for the special
//! varieties attached to (j, chi*): the V_N equations, the push-forward map
//! pi(tau_1, ..., tau_n) = (j(tau_1), chi*(tau_1), ..., j(tau_n), chi*(tau_n)),
//! and rank probes of sampled point clouds.

use std::collections::BTreeMap;
use std::str::FromStr;

use rug::ops::Pow;
use rug::Float;
use thiserror::Error;

use crate::exactalg::Rat;
use crate::hecke::GL2Matrix;
use crate::hp::ComplexHP;
use crate::modpoly::{BiPolynomial, TriPolynomial};
use crate::numeval::{eval_all, random_tau, seeded_rng, NumEvalError};

#[derive(Debug, Error)]
pub enum SpecialError {
    #[error("descriptor parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("descriptor is inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Eval(#[from] NumEvalError),
}

/// One partition block with geodesic relations: every member except the
/// base is tied to the base by a positive-determinant integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub base: usize,
    pub relations: BTreeMap<usize, GL2Matrix>,
}

/// The data of a weakly special set in H^n: constant coordinates, blocks of
/// geodesically related coordinates, and free coordinates (singleton
/// blocks).
///
/// Coordinates are 1-based. In the text format, indices carrying a `const`
/// line form S_0; a `rel <block> <index> a b c d` line attaches tau_index =
/// g tau_base to the named block. Block bases are not written explicitly:
/// the unconstrained indices are assigned, in increasing order, as the
/// bases of the blocks in increasing block order (each base must precede
/// the block's related indices); indices left over after that are free
/// singletons.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialDescriptor {
    pub n: usize,
    pub constants: BTreeMap<usize, (Rat, Rat)>,
    pub blocks: Vec<Block>,
}

impl SpecialDescriptor {
    /// A descriptor with no constraints at all.
    pub fn free(n: usize) -> Self {
        SpecialDescriptor {
            n,
            constants: BTreeMap::new(),
            blocks: Vec::new(),
        }
    }

    /// All relation matrices, in deterministic order.
    pub fn relations(&self) -> impl Iterator<Item = (&usize, &GL2Matrix)> {
        self.blocks.iter().flat_map(|b| b.relations.iter())
    }

    pub fn validate(&self) -> Result<(), SpecialError> {
        let mut seen = vec![false; self.n + 1];
        let mut mark = |i: usize| -> Result<(), SpecialError> {
            if i == 0 || i > self.n {
                return Err(SpecialError::Inconsistent(format!(
                    "coordinate index {i} out of range 1..={}",
                    self.n
                )));
            }
            if seen[i] {
                return Err(SpecialError::Inconsistent(format!(
                    "coordinate {i} constrained twice"
                )));
            }
            seen[i] = true;
            Ok(())
        };
        for &i in self.constants.keys() {
            mark(i)?;
        }
        for b in &self.blocks {
            mark(b.base)?;
            for (&i, g) in &b.relations {
                mark(i)?;
                if g.det() <= 0 {
                    return Err(SpecialError::Inconsistent(format!(
                        "relation matrix for coordinate {i} has nonpositive determinant"
                    )));
                }
                if i < b.base {
                    return Err(SpecialError::Inconsistent(format!(
                        "block base {} is not the least element (found {i})",
                        b.base
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parse the text format: lines `n <dim>`, `const <index> <re> <im>`,
    /// `rel <block> <index> a b c d`. Blank lines and `#` comments allowed.
    pub fn parse(text: &str) -> Result<Self, SpecialError> {
        let mut n: Option<usize> = None;
        let mut constants = BTreeMap::new();
        // block number -> relations
        let mut rels: BTreeMap<usize, BTreeMap<usize, GL2Matrix>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| SpecialError::Parse { line, msg };
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tok: Vec<&str> = trimmed.split_whitespace().collect();
            match tok[0] {
                "n" => {
                    if tok.len() != 2 {
                        return Err(err("expected: n <dim>".into()));
                    }
                    n = Some(
                        tok[1]
                            .parse()
                            .map_err(|e| err(format!("bad dimension: {e}")))?,
                    );
                }
                "const" => {
                    if tok.len() != 4 {
                        return Err(err("expected: const <index> <re> <im>".into()));
                    }
                    let i: usize = tok[1]
                        .parse()
                        .map_err(|e| err(format!("bad index: {e}")))?;
                    let re = parse_exact(tok[2]).ok_or_else(|| {
                        err(format!("bad rational real part {:?}", tok[2]))
                    })?;
                    let im = parse_exact(tok[3]).ok_or_else(|| {
                        err(format!("bad rational imaginary part {:?}", tok[3]))
                    })?;
                    if im.signum() <= 0 {
                        return Err(err("constant point must have Im > 0".into()));
                    }
                    constants.insert(i, (re, im));
                }
                "rel" => {
                    if tok.len() != 7 {
                        return Err(err("expected: rel <block> <index> a b c d".into()));
                    }
                    let b: usize = tok[1]
                        .parse()
                        .map_err(|e| err(format!("bad block: {e}")))?;
                    let i: usize = tok[2]
                        .parse()
                        .map_err(|e| err(format!("bad index: {e}")))?;
                    let ent = |s: &str| -> Result<i64, SpecialError> {
                        s.parse().map_err(|e| err(format!("bad entry {s:?}: {e}")))
                    };
                    let g = GL2Matrix::new(ent(tok[3])?, ent(tok[4])?, ent(tok[5])?, ent(tok[6])?);
                    rels.entry(b).or_default().insert(i, g);
                }
                other => return Err(err(format!("unknown directive {other:?}"))),
            }
        }
        let n = n.ok_or(SpecialError::Parse {
            line: 1,
            msg: "missing `n <dim>` line".into(),
        })?;
        // assign bases: unconstrained indices in increasing order feed the
        // blocks in increasing block-number order
        let mut taken: Vec<bool> = vec![false; n + 1];
        for &i in constants.keys() {
            if i == 0 || i > n {
                return Err(SpecialError::Inconsistent(format!(
                    "const index {i} out of range"
                )));
            }
            taken[i] = true;
        }
        for relmap in rels.values() {
            for &i in relmap.keys() {
                if i == 0 || i > n {
                    return Err(SpecialError::Inconsistent(format!(
                        "rel index {i} out of range"
                    )));
                }
                taken[i] = true;
            }
        }
        let mut free: Vec<usize> = (1..=n).filter(|&i| !taken[i]).collect();
        let mut blocks = Vec::new();
        for (bnum, relations) in rels {
            let least_rel = *relations.keys().next().unwrap();
            let pos = free.iter().position(|&f| f < least_rel).ok_or_else(|| {
                SpecialError::Inconsistent(format!(
                    "no free coordinate available as the base of block {bnum}"
                ))
            })?;
            let base = free.remove(pos);
            blocks.push(Block { base, relations });
        }
        let d = SpecialDescriptor {
            n,
            constants,
            blocks,
        };
        d.validate()?;
        Ok(d)
    }
}

/// Exact rational from "p/q", an integer, or a finite decimal like "1.25".
pub fn parse_exact(s: &str) -> Option<Rat> {
    if let Some((num, den)) = s.split_once('/') {
        let n = rug::Integer::from_str(num.trim()).ok()?;
        let d = rug::Integer::from_str(den.trim()).ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rat(rug::Rational::from((n, d))));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let whole = rug::Integer::from_str(if int_part.is_empty() { "0" } else { int_part }).ok()?;
        let frac = rug::Integer::from_str(frac_part).ok()?;
        let scale = rug::Integer::from(10).pow(frac_part.len() as u32);
        let num = whole * &scale + if negative { -frac } else { frac };
        return Some(Rat(rug::Rational::from((num, scale))));
    }
    rug::Integer::from_str(s.trim())
        .ok()
        .map(|n| Rat(rug::Rational::from(n)))
}

/// True iff every relation matrix is upper triangular (vacuously true when
/// there are no relations at all).
pub fn is_gut(d: &SpecialDescriptor) -> bool {
    d.relations().all(|(_, g)| g.is_upper_triangular())
}

/// Sample points of the set described by `d`: free coordinates and block
/// bases are drawn from a box in the fundamental domain, constants are
/// inserted exactly, and related coordinates are computed by the Moebius
/// action.
pub fn sample_points(
    d: &SpecialDescriptor,
    count: usize,
    seed: u64,
    prec: u32,
) -> Result<Vec<Vec<ComplexHP>>, SpecialError> {
    d.validate()?;
    let mut rng = seeded_rng(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut point: Vec<Option<ComplexHP>> = vec![None; d.n + 1];
        for (&i, (re, im)) in &d.constants {
            point[i] = Some(ComplexHP::from_rat(re, im, prec));
        }
        for b in &d.blocks {
            let base = random_tau(&mut rng, prec);
            for (&i, g) in &b.relations {
                point[i] = Some(g.apply(&base));
            }
            point[b.base] = Some(base);
        }
        for slot in point.iter_mut().skip(1) {
            if slot.is_none() {
                *slot = Some(random_tau(&mut rng, prec));
            }
        }
        out.push(point.into_iter().skip(1).map(Option::unwrap).collect());
    }
    Ok(out)
}

/// The three defining residuals of V_N at the point
/// (W, X, Y, Z) = (j(tau), chi*(tau), j(g tau), chi*(g tau)):
/// Phi_N(W, Y), Psi_N(X, Y, Z) and Psi_N(Z, W, X), each normalised by the
/// largest monomial magnitude.
pub fn vn_membership(
    phi: &BiPolynomial,
    psi: &TriPolynomial,
    tau: &ComplexHP,
    g: &GL2Matrix,
    prec: u32,
) -> Result<[Float; 3], NumEvalError> {
    let base = eval_all(tau, prec)?;
    let gt = g.apply(tau);
    let at_g = eval_all(&gt, prec)?;
    let (w, x, y, z) = (&base.j, &base.chi_star, &at_g.j, &at_g.chi_star);
    let clamp = |s: Float| if s < 1 { Float::with_val(s.prec(), 1) } else { s };
    let r1 = phi.eval(w, y).abs() / clamp(phi.max_monomial(w, y));
    let r2 = psi.eval(x, y, z).abs() / clamp(psi.max_monomial(x, y, z));
    let r3 = psi.eval(z, w, x).abs() / clamp(psi.max_monomial(z, w, x));
    Ok([r1, r2, r3])
}

/// Report from [`plane_rank_probe`].
#[derive(Debug)]
pub struct RankProbe {
    pub samples: usize,
    /// numeric rank of the affine span of the sampled (W, X, Y, Z) cloud
    pub rank: usize,
    /// pivot magnitudes from the elimination, largest first
    pub pivots: Vec<f64>,
    /// count of distinct values seen in each of the four coordinates
    pub distinct: [usize; 4],
}

/// Sample the curve tau -> (j(tau), chi*(tau), j(g tau), chi*(g tau)) for
/// the first coset representative g of determinant N, and measure the
/// numeric rank of the affine span of the cloud. The image of a generic
/// curve fills all four complex dimensions unless coordinates coincide
/// (as happens for N = 1, where the pairs repeat).
pub fn plane_rank_probe(
    n: u64,
    count: usize,
    prec: u32,
    seed: u64,
) -> Result<RankProbe, NumEvalError> {
    assert!(count >= 8);
    let g = crate::hecke::enumerate_dn(n)[0];
    let mut rng = seeded_rng(seed);
    let mut rows: Vec<[ComplexHP; 4]> = Vec::with_capacity(count);
    for _ in 0..count {
        let tau = random_tau(&mut rng, prec + 32);
        let base = eval_all(&tau, prec)?;
        let at_g = eval_all(&g.apply(&tau), prec)?;
        rows.push([base.j, base.chi_star, at_g.j, at_g.chi_star]);
    }
    let mut distinct = [0usize; 4];
    for k in 0..4 {
        let mut values: Vec<&ComplexHP> = Vec::new();
        for row in &rows {
            if values.iter().all(|v| v.dist(&row[k]).to_f64() > 1e-20) {
                values.push(&row[k]);
            }
        }
        distinct[k] = values.len();
    }
    // affine span: subtract the first row, then eliminate
    let mut mat: Vec<Vec<ComplexHP>> = rows[1..]
        .iter()
        .map(|r| (0..4).map(|k| r[k].sub(&rows[0][k])).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    let scale0: f64 = mat
        .iter()
        .flat_map(|r| r.iter())
        .map(|x| x.abs().to_f64())
        .fold(0.0, f64::max);
    let tol = scale0.max(1.0) * 2f64.powi(-(prec as i32) / 2);
    for col in 0..4 {
        let Some(p) = (rank..mat.len())
            .filter(|&r| mat[r][col].abs().to_f64() > tol)
            .max_by(|&a, &b| {
                mat[a][col]
                    .abs()
                    .partial_cmp(&mat[b][col].abs())
                    .unwrap()
            })
        else {
            continue;
        };
        mat.swap(rank, p);
        pivots.push(mat[rank][col].abs().to_f64());
        for r in rank + 1..mat.len() {
            let factor = mat[r][col].div(&mat[rank][col]);
            for c in col..4 {
                let t = factor.mul(&mat[rank][c]);
                mat[r][c] = mat[r][c].sub(&t);
            }
        }
        rank += 1;
        if rank == mat.len() {
            break;
        }
    }
    Ok(RankProbe {
        samples: count,
        rank,
        pivots,
        distinct,
    })
}

/// A sampled source point in H^n together with its image under pi.
#[derive(Clone, Debug)]
pub struct PushforwardPoint {
    pub source: Vec<ComplexHP>,
    /// (j(tau_1), chi*(tau_1), ..., j(tau_n), chi*(tau_n)), or only the
    /// chi* coordinates when projected
    pub image: Vec<ComplexHP>,
}

/// Push descriptor samples through pi; `project_chi_star` keeps only the
/// chi* coordinates.
pub fn pushforward(
    d: &SpecialDescriptor,
    count: usize,
    prec: u32,
    seed: u64,
    project_chi_star: bool,
) -> Result<Vec<PushforwardPoint>, SpecialError> {
    let sources = sample_points(d, count, seed, prec + 32)?;
    let mut out = Vec::with_capacity(sources.len());
    for source in sources {
        let mut image = Vec::with_capacity(2 * d.n);
        for tau in &source {
            let v = eval_all(tau, prec)?;
            if !project_chi_star {
                image.push(v.j);
            }
            image.push(v.chi_star);
        }
        out.push(PushforwardPoint { source, image });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Numeric elimination: resultants of complex polynomials
// ---------------------------------------------------------------------------

/// Determinant by Gaussian elimination with partial pivoting; returns the
/// determinant together with the Hadamard bound (product of row norms) used
/// to normalise "is this zero" questions.
fn det_with_hadamard(mut m: Vec<Vec<ComplexHP>>, prec: u32) -> (ComplexHP, Float) {
    let n = m.len();
    let mut hadamard = Float::with_val(prec, 1);
    for row in &m {
        let mut s = Float::with_val(prec, 0);
        for x in row {
            s += x.norm_sqr();
        }
        hadamard *= s.sqrt();
    }
    let mut det = ComplexHP::from_f64(1.0, 0.0, prec);
    for col in 0..n {
        let Some(p) = (col..n).max_by(|&a, &b| {
            m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap()
        }) else {
            break;
        };
        if m[p][col].abs().to_f64() == 0.0 {
            return (ComplexHP::new(prec), hadamard);
        }
        if p != col {
            m.swap(p, col);
            det = det.neg();
        }
        det = det.mul(&m[col][col].clone());
        for r in col + 1..n {
            let factor = m[r][col].div(&m[col][col]);
            for c in col..n {
                let t = factor.mul(&m[col][c]);
                m[r][c] = m[r][c].sub(&t);
            }
        }
    }
    (det, hadamard)
}

/// Resultant of two complex polynomials (coefficients ascending) via the
/// Sylvester matrix.
fn sylvester_resultant(p: &[ComplexHP], q: &[ComplexHP], prec: u32) -> (ComplexHP, Float) {
    let dp = p.len() - 1;
    let dq = q.len() - 1;
    let size = dp + dq;
    let zero = ComplexHP::new(prec);
    let mut m = vec![vec![zero.clone(); size]; size];
    for r in 0..dq {
        for (k, c) in p.iter().enumerate() {
            m[r][r + dp - k] = c.clone();
        }
    }
    for r in 0..dp {
        for (k, c) in q.iter().enumerate() {
            m[dq + r][r + dq - k] = c.clone();
        }
    }
    det_with_hadamard(m, prec)
}

/// Interpolate a polynomial (coefficients ascending) through values at
/// integer nodes 0, 1, ..., len-1 by solving the Vandermonde system.
fn interpolate(values: &[ComplexHP], prec: u32) -> Vec<ComplexHP> {
    let n = values.len();
    // Newton's divided differences, then expand
    let mut dd: Vec<ComplexHP> = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = dd[i].sub(&dd[i - 1]);
            dd[i] = num.mul_float(&Float::with_val(prec, level as f64).recip());
        }
    }
    // expand Newton form sum dd[k] prod_(i<k) (x - i)
    let mut coeffs = vec![ComplexHP::new(prec); n];
    let mut basis = vec![ComplexHP::from_f64(1.0, 0.0, prec)];
    for (k, d) in dd.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            coeffs[i] = coeffs[i].add(&d.mul(b));
        }
        // basis *= (x - k)
        let mut next = vec![ComplexHP::new(prec); basis.len() + 1];
        for (i, b) in basis.iter().enumerate() {
            next[i + 1] = next[i + 1].add(b);
            next[i] = next[i].sub(&b.mul_i64(k as i64));
        }
        basis = next;
    }
    coeffs
}

/// Residual of the chi*-projection equations for the n = 2 geodesic
/// relation tau_2 = g tau_1 of determinant N: eliminate the two j-variables
/// from {Phi_N(W, Y0), Psi_N(z, W, x), Psi_N(x, Y0, z)} by resultants and
/// evaluate at the sampled chi* pair (x, z) = (chi*(tau), chi*(g tau)).
///
/// Returns |R| normalised by the Hadamard bound of the final Sylvester
/// matrix; image points of the projection drive this to zero.
pub fn chi_star_projection_residual(
    phi: &BiPolynomial,
    psi: &TriPolynomial,
    x: &ComplexHP,
    z: &ComplexHP,
    prec: u32,
) -> Float {
    // inner resultant in W at interpolation nodes for Y0
    let phi_degw = phi.deg_x() as usize;
    let phi_degy = phi.deg_y() as usize;
    let psi_degw = psi.deg_y() as usize; // W sits in the Y slot of Psi(z, W, x)
    let r1_degree = phi_degy * psi_degw + phi_degw * 0 + 1;
    let nodes = phi_degw * psi_degw + phi_degy * psi_degw + r1_degree + 2;
    let mut values = Vec::with_capacity(nodes);
    for node in 0..nodes {
        let y0 = ComplexHP::from_f64(node as f64, 0.5, prec);
        // Phi(W, y0) as a polynomial in W
        let mut pw = vec![ComplexHP::new(prec); phi_degw + 1];
        for (&(i, j), c) in phi.terms() {
            let t = y0
                .powi(j)
                .mul_float(&Float::with_val(prec, &c.0));
            pw[i as usize] = pw[i as usize].add(&t);
        }
        // Psi(z, W, x) as a polynomial in W
        let mut qw = vec![ComplexHP::new(prec); psi_degw + 1];
        for (&(i, j, k), c) in psi.terms() {
            let t = z
                .powi(i)
                .mul(&x.powi(k))
                .mul_float(&Float::with_val(prec, &c.0));
            qw[j as usize] = qw[j as usize].add(&t);
        }
        let (det, _) = sylvester_resultant(&pw, &qw, prec);
        values.push(det);
    }
    let r1 = interpolate(&values, prec);
    // strip numerically tiny leading coefficients
    let mut r1 = r1;
    let scale: f64 = r1.iter().map(|c| c.abs().to_f64()).fold(0.0, f64::max);
    while r1.len() > 1
        && r1.last().unwrap().abs().to_f64() < scale * 2f64.powi(-(prec as i32) + 64)
    {
        r1.pop();
    }
    // Psi(x, Y0, z) as a polynomial in Y0
    let mut p2 = vec![ComplexHP::new(prec); psi.deg_y() as usize + 1];
    for (&(i, j, k), c) in psi.terms() {
        let t = x
            .powi(i)
            .mul(&z.powi(k))
            .mul_float(&Float::with_val(prec, &c.0));
        p2[j as usize] = p2[j as usize].add(&t);
    }
    let (det, hadamard) = sylvester_resultant(&r1, &p2, prec);
    det.abs() / hadamard
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_coord_relation(g: GL2Matrix) -> SpecialDescriptor {
        SpecialDescriptor {
            n: 2,
            constants: BTreeMap::new(),
            blocks: vec![Block {
                base: 1,
                relations: [(2usize, g)].into_iter().collect(),
            }],
        }
    }

    #[test]
    fn gut_detection() {
        let all_identity = two_coord_relation(GL2Matrix::identity());
        assert!(is_gut(&all_identity));
        let lower = two_coord_relation(GL2Matrix::new(1, 0, 1, 2));
        assert!(!is_gut(&lower));
        // no relations at all: vacuously a GUT descriptor
        assert!(is_gut(&SpecialDescriptor::free(3)));
    }

    #[test]
    fn parse_and_base_inference() {
        let text = "n 3\nconst 3 1/2 3/2\nrel 1 2 2 0 0 1\n";
        let d = SpecialDescriptor::parse(text).unwrap();
        assert_eq!(d.n, 3);
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].base, 1);
        assert_eq!(d.blocks[0].relations[&2], GL2Matrix::new(2, 0, 0, 1));
        assert_eq!(
            d.constants[&3],
            (Rat::new(1, 2), Rat::new(3, 2))
        );
        // decimals parse exactly
        assert_eq!(parse_exact("1.25").unwrap(), Rat::new(5, 4));
        assert_eq!(parse_exact("-0.1").unwrap(), Rat::new(-1, 10));
        // malformed lines carry positions
        match SpecialDescriptor::parse("n 2\nrel 1 2 1 0 0\n") {
            Err(SpecialError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn samples_respect_constraints() {
        let prec = 128;
        // tau_2 = 2 tau_1 exactly
        let d = two_coord_relation(GL2Matrix::new(2, 0, 0, 1));
        for p in sample_points(&d, 4, 3, prec).unwrap() {
            assert!(p[1].dist(&p[0].mul_i64(2)).to_f64() < 1e-30);
        }
        // constants are inserted exactly
        let mut with_const = SpecialDescriptor::free(2);
        with_const
            .constants
            .insert(2, (Rat::zero(), Rat::one()));
        for p in sample_points(&with_const, 3, 5, prec).unwrap() {
            assert!(p[1].dist(&ComplexHP::i(prec)).to_f64() < 1e-35);
        }
        // free sampling produces the requested count
        assert_eq!(sample_points(&SpecialDescriptor::free(1), 7, 1, prec).unwrap().len(), 7);
    }

    #[test]
    fn interpolation_roundtrip() {
        let prec = 128;
        // p(x) = 3 - 2x + x^3 sampled at 0..5
        let eval = |x: f64| 3.0 - 2.0 * x + x * x * x;
        let values: Vec<ComplexHP> = (0..6)
            .map(|k| ComplexHP::from_f64(eval(k as f64), 0.0, prec))
            .collect();
        let coeffs = interpolate(&values, prec);
        let expect = [3.0, -2.0, 0.0, 1.0, 0.0, 0.0];
        for (c, e) in coeffs.iter().zip(expect) {
            assert!((c.re().to_f64() - e).abs() < 1e-25, "{c} vs {e}");
            assert!(c.im().to_f64().abs() < 1e-25);
        }
    }

    #[test]
    fn resultant_detects_common_roots() {
        let prec = 192;
        // p = (x-2)(x-5), q = (x-2)(x+1) share the root 2
        let p = [
            ComplexHP::from_f64(10.0, 0.0, prec),
            ComplexHP::from_f64(-7.0, 0.0, prec),
            ComplexHP::from_f64(1.0, 0.0, prec),
        ];
        let q = [
            ComplexHP::from_f64(-2.0, 0.0, prec),
            ComplexHP::from_f64(-1.0, 0.0, prec),
            ComplexHP::from_f64(1.0, 0.0, prec),
        ];
        let (r, h) = sylvester_resultant(&p, &q, prec);
        assert!((r.abs() / &h).to_f64() < 1e-40);
        // coprime polynomials give a solidly nonzero resultant
        let q2 = [
            ComplexHP::from_f64(1.0, 0.0, prec),
            ComplexHP::from_f64(1.0, 0.0, prec),
        ];
        let (r2, h2) = sylvester_resultant(&p, &q2, prec);
        assert!((r2.abs() / h2).to_f64() > 1e-6);
    }
}
