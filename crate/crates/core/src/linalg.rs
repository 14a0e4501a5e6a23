//! Exact linear solving over the rationals: plain Gaussian elimination
//! with deterministic pivoting (first nonzero row in column order), which
//! keeps certificate output reproducible byte for byte.

use crate::rat::Rat;
use num_traits::Zero;

/// Solution of a possibly over- or under-determined system rows·x = rhs.
pub struct LinSolution {
    pub x: Vec<Rat>,
    /// columns that stayed free (set to zero in `x`)
    pub free_cols: Vec<usize>,
}

/// Solve rows·x = rhs; None when inconsistent. Free columns are assigned
/// zero, scanning pivot columns left to right.
pub fn solve(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<LinSolution> {
    assert_eq!(rows.len(), rhs.len());
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let nrows = a.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut row = 0usize;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let d = a[row][col].clone();
        for j in col..=ncols {
            a[row][j] = &a[row][j] / &d;
        }
        for r in 0..nrows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..=ncols {
                    let t = &a[row][j] * &f;
                    a[r][j] -= t;
                }
            }
        }
        pivot_of_col[col] = Some(row);
        row += 1;
    }
    // inconsistency: a zero row with nonzero rhs
    for r in 0..nrows {
        if a[r][..ncols].iter().all(|c| c.is_zero()) && !a[r][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); ncols];
    let mut free_cols = vec![];
    for col in 0..ncols {
        match pivot_of_col[col] {
            Some(r) => x[col] = a[r][ncols].clone(),
            None => free_cols.push(col),
        }
    }
    Some(LinSolution { x, free_cols })
}

/// Solve requiring a unique solution (full column rank and consistent).
pub fn solve_unique(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let s = solve(rows, rhs)?;
    if s.free_cols.is_empty() {
        Some(s.x)
    } else {
        None
    }
}

const MODP: u64 = (1 << 61) - 1;

fn mod_reduce(r: &Rat) -> Option<u64> {
    use num_bigint::BigInt;
    let p = BigInt::from(MODP);
    let num = ((r.numer() % &p) + &p) % &p;
    let den = ((r.denom() % &p) + &p) % &p;
    let den: u64 = den.try_into().ok()?;
    if den == 0 {
        return None;
    }
    let num: u64 = num.try_into().ok()?;
    Some(mod_mul(num, mod_inv(den)))
}

fn mod_mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODP as u128) as u64
}

fn mod_inv(a: u64) -> u64 {
    // Fermat: a^{p-2}
    let mut base = a % MODP;
    let mut e = MODP - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, base);
        }
        base = mod_mul(base, base);
        e >>= 1;
    }
    acc
}

/// Large systems: locate the sparse solution support by solving modulo a
/// 61-bit prime with the same deterministic pivoting, then solve the
/// restricted exact system and verify every row. Falls back to the dense
/// exact path on any mismatch, so the result is always exact.
pub fn solve_with_support_hint(rows: &[Vec<Rat>], rhs: &[Rat]) -> Option<LinSolution> {
    let ncols = rows.first().map_or(0, |r| r.len());
    'modular: {
        let mut a: Vec<Vec<u64>> = Vec::with_capacity(rows.len());
        for (r, b) in rows.iter().zip(rhs) {
            let mut v = Vec::with_capacity(ncols + 1);
            for c in r {
                match mod_reduce(c) {
                    Some(x) => v.push(x),
                    None => break 'modular,
                }
            }
            match mod_reduce(b) {
                Some(x) => v.push(x),
                None => break 'modular,
            }
            a.push(v);
        }
        let nrows = a.len();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
        let mut row = 0usize;
        for col in 0..ncols {
            if row >= nrows {
                break;
            }
            let Some(p) = (row..nrows).find(|&r| a[r][col] != 0) else {
                continue;
            };
            a.swap(row, p);
            let inv = mod_inv(a[row][col]);
            for j in col..=ncols {
                a[row][j] = mod_mul(a[row][j], inv);
            }
            for r in 0..nrows {
                if r != row && a[r][col] != 0 {
                    let f = a[r][col];
                    for j in col..=ncols {
                        a[r][j] = (a[r][j] + MODP - mod_mul(a[row][j], f)) % MODP;
                    }
                }
            }
            pivot_of_col[col] = Some(row);
            row += 1;
        }
        for r in 0..nrows {
            if a[r][..ncols].iter().all(|&c| c == 0) && a[r][ncols] != 0 {
                return None; // genuinely inconsistent (mod p implies exact)
            }
        }
        let support: Vec<usize> = (0..ncols)
            .filter(|&c| pivot_of_col[c].is_some_and(|r| a[r][ncols] != 0))
            .collect();
        // exact solve restricted to the support columns, using only a
        // low-order row prefix (small numerators) to pin the solution;
        // every row is then verified exactly below, so nothing is trusted
        // from the prefix alone
        let prefix = (support.len() + 8).min(rows.len());
        let sub_rows: Vec<Vec<Rat>> = rows[..prefix]
            .iter()
            .map(|r| support.iter().map(|&c| r[c].clone()).collect())
            .collect();
        let Some(sub) = solve(&sub_rows, &rhs[..prefix]) else {
            break 'modular;
        };
        if !sub.free_cols.is_empty() {
            break 'modular;
        }
        let mut x = vec![Rat::zero(); ncols];
        for (i, &c) in support.iter().enumerate() {
            x[c] = sub.x[i].clone();
        }
        // verify every row exactly before trusting the hint
        for (r, b) in rows.iter().zip(rhs) {
            let mut acc = Rat::zero();
            for &c in &support {
                if !x[c].is_zero() && !r[c].is_zero() {
                    acc += &r[c] * &x[c];
                }
            }
            if &acc != b {
                break 'modular;
            }
        }
        let free_cols: Vec<usize> = (0..ncols).filter(|c| !support.contains(c)).collect();
        return Some(LinSolution { x, free_cols });
    }
    solve(rows, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i64;

    #[test]
    fn unique_and_inconsistent() {
        let rows = vec![
            vec![rat_i64(1), rat_i64(1)],
            vec![rat_i64(1), rat_i64(-1)],
            vec![rat_i64(2), rat_i64(0)],
        ];
        let rhs = vec![rat_i64(3), rat_i64(1), rat_i64(4)];
        let x = solve_unique(&rows, &rhs).unwrap();
        assert_eq!(x, vec![rat_i64(2), rat_i64(1)]);
        let bad = vec![rat_i64(3), rat_i64(1), rat_i64(5)];
        assert!(solve(&rows, &bad).is_none());
    }

    #[test]
    fn underdetermined_reports_free_columns() {
        let rows = vec![vec![rat_i64(1), rat_i64(2), rat_i64(0)]];
        let rhs = vec![rat_i64(5)];
        let s = solve(&rows, &rhs).unwrap();
        assert_eq!(s.free_cols, vec![1, 2]);
        assert_eq!(s.x[0], rat_i64(5));
    }
}
