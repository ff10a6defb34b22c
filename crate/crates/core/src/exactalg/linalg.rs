//! Exact rational linear algebra: fraction-free elimination, nullspace, solve.

use rug::Integer;

use super::rat::Rat;

/// A dense system of rational linear equations (one row per equation).
#[derive(Clone, Debug)]
pub struct LinearSystem {
    rows: Vec<Vec<Rat>>,
    ncols: usize,
}

impl LinearSystem {
    pub fn new(rows: Vec<Vec<Rat>>, ncols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        LinearSystem { rows, ncols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.rows
    }
}

/// Row echelon data from fraction-free elimination.
struct Echelon {
    mat: Vec<Vec<Integer>>,
    pivot_cols: Vec<usize>,
}

/// Bareiss-style fraction-free elimination. Rows are first scaled to
/// integers; pivots are chosen by largest absolute value in the column,
/// which keeps the exact-division intermediates from blowing up.
fn eliminate(sys: &LinearSystem) -> Echelon {
    let ncols = sys.ncols;
    let mut mat: Vec<Vec<Integer>> = sys
        .rows
        .iter()
        .filter(|row| row.iter().any(|x| !x.is_zero()))
        .map(|row| {
            let mut l = Integer::from(1);
            for x in row {
                l = l.lcm(x.denom());
            }
            row.iter()
                .map(|x| Integer::from(x.numer() * &l) / x.denom())
                .collect()
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut prev = Integer::from(1);
    let mut rank = 0usize;
    for col in 0..ncols {
        // largest-numerator pivot selection
        let pivot = (rank..mat.len())
            .filter(|&i| mat[i][col] != 0)
            .max_by(|&i, &j| mat[i][col].cmp_abs(&mat[j][col]));
        let Some(p) = pivot else { continue };
        mat.swap(rank, p);
        for i in rank + 1..mat.len() {
            for j in col + 1..ncols {
                let t = Integer::from(&mat[rank][col] * &mat[i][j])
                    - Integer::from(&mat[i][col] * &mat[rank][j]);
                debug_assert!(t.is_divisible(&prev));
                mat[i][j] = t / &prev;
            }
            mat[i][col] = Integer::new();
        }
        prev = mat[rank][col].clone();
        pivot_cols.push(col);
        rank += 1;
        if rank == mat.len() {
            break;
        }
    }
    mat.truncate(rank);
    Echelon { mat, pivot_cols }
}

/// Scale a rational vector to a primitive integer vector. The scale factor
/// is positive, so the distinguished free coordinate keeps its sign.
fn canonicalize(v: &mut [Rat]) {
    let mut l = Integer::from(1);
    for x in v.iter() {
        l = l.lcm(x.denom());
    }
    let mut g = Integer::new();
    for x in v.iter() {
        let scaled = Integer::from(x.numer() * &l) / x.denom();
        g.gcd_mut(&scaled);
    }
    if g == 0 {
        return;
    }
    let scale = Rat(rug::Rational::from((l, g)));
    for x in v.iter_mut() {
        *x *= &scale;
    }
}

/// Basis of the exact rational nullspace (possibly empty). Each basis vector
/// is scaled to primitive integers with its distinguished free coordinate
/// positive; vectors are ordered by free column.
pub fn nullspace(sys: &LinearSystem) -> Vec<Vec<Rat>> {
    let ech = eliminate(sys);
    let ncols = sys.ncols;
    let mut is_pivot = vec![false; ncols];
    for &c in &ech.pivot_cols {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (k, &p) in ech.pivot_cols.iter().enumerate().rev() {
            let row = &ech.mat[k];
            let mut s = Rat::zero();
            for j in p + 1..ncols {
                if row[j] != 0 && !v[j].is_zero() {
                    s += &(&Rat::from(row[j].clone()) * &v[j]);
                }
            }
            if !s.is_zero() {
                v[p] = -s / Rat::from(row[p].clone());
            }
        }
        canonicalize(&mut v);
        basis.push(v);
    }
    basis
}

/// Rank of the coefficient matrix.
pub fn rank(sys: &LinearSystem) -> usize {
    eliminate(sys).pivot_cols.len()
}

/// One exact solution of `sys * x = b`, or `None` if the system is
/// inconsistent. Free variables are set to zero.
pub fn solve(sys: &LinearSystem, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(b.len(), sys.nrows());
    let aug_rows: Vec<Vec<Rat>> = sys
        .rows
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(-bi);
            r
        })
        .collect();
    let aug = LinearSystem::new(aug_rows, sys.ncols + 1);
    let basis = nullspace(&aug);
    for v in basis {
        let t = &v[sys.ncols];
        if !t.is_zero() {
            let tinv = t.recip();
            return Some(v[..sys.ncols].iter().map(|x| x * &tinv).collect());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(data: &[&[i64]]) -> LinearSystem {
        let ncols = data[0].len();
        LinearSystem::new(
            data.iter()
                .map(|r| r.iter().map(|&x| Rat::from_int(x)).collect())
                .collect(),
            ncols,
        )
    }

    #[test]
    fn line_x_equals_y() {
        let basis = nullspace(&rows(&[&[1, -1]]));
        assert_eq!(basis, vec![vec![Rat::one(), Rat::one()]]);
    }

    #[test]
    fn full_rank_has_empty_nullspace() {
        let basis = nullspace(&rows(&[&[1, 0], &[0, 1]]));
        assert!(basis.is_empty());
    }

    #[test]
    fn single_equation_three_unknowns() {
        let sys = rows(&[&[2, 4, 6]]);
        let basis = nullspace(&sys);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            let s = &v[0] * &Rat::from_int(2)
                + &v[1] * &Rat::from_int(4)
                + &v[2] * &Rat::from_int(6);
            assert!(s.is_zero(), "2v1+4v2+6v3 != 0 for {v:?}");
        }
        // basis vectors are linearly independent: stack them and check rank
        let stacked = LinearSystem::new(basis.clone(), 3);
        assert_eq!(rank(&stacked), 2);
    }

    #[test]
    fn nullspace_vectors_satisfy_system_randomized() {
        let mut state = 0xb5297a4d6c38f2u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 11) as i64 - 5
        };
        for _ in 0..40 {
            let (r, c) = (2 + (next().unsigned_abs() as usize % 4), 2 + (next().unsigned_abs() as usize % 5));
            let data: Vec<Vec<Rat>> = (0..r)
                .map(|_| (0..c).map(|_| Rat::new(next(), next().abs() + 1)).collect())
                .collect();
            let sys = LinearSystem::new(data.clone(), c);
            let basis = nullspace(&sys);
            for v in &basis {
                for row in &data {
                    let mut s = Rat::zero();
                    for (a, x) in row.iter().zip(v) {
                        s += &(a * x);
                    }
                    assert!(s.is_zero());
                }
            }
            // rank-nullity
            assert_eq!(rank(&sys) + basis.len(), c);
            if !basis.is_empty() {
                let stacked = LinearSystem::new(basis.clone(), c);
                assert_eq!(rank(&stacked), basis.len());
            }
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let sys = rows(&[&[1, 1], &[1, -1]]);
        let x = solve(&sys, &[Rat::from_int(4), Rat::from_int(2)]).unwrap();
        assert_eq!(x, vec![Rat::from_int(3), Rat::from_int(1)]);

        let bad = rows(&[&[1, 1], &[2, 2]]);
        assert!(solve(&bad, &[Rat::from_int(1), Rat::from_int(3)]).is_none());
    }
}
