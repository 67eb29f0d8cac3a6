//! Exact Gaussian elimination over a field.

use super::field::{Field, FieldElem};

/// Reduces `rows` (each of length `ncols`) to reduced row echelon form in
/// place and returns the pivot columns. Zero rows are dropped.
pub fn rref(rows: &mut Vec<Vec<FieldElem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for v in rows[r].iter_mut().skip(c) {
            *v = &*v * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (k, v) in row.iter_mut().enumerate().skip(c) {
                if !pivot_row[k].is_zero() {
                    *v = &*v - &(&f * &pivot_row[k]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<FieldElem>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of the right nullspace {v : M v = 0}. Each vector is scaled so its
/// first nonzero entry is 1.
pub fn nullspace(field: &Field, rows: &[Vec<FieldElem>], ncols: usize) -> Vec<Vec<FieldElem>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[r][free];
        }
        let lead = v.iter().find(|e| !e.is_zero()).cloned().expect("nonzero vector");
        let inv = lead.inv().expect("nonzero");
        basis.push(v.iter().map(|e| e * &inv).collect());
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_trivial_kernel() {
        let k = Field::rationals();
        let m = vec![vec![k.one(), k.zero()], vec![k.zero(), k.one()]];
        assert!(nullspace(&k, &m, 2).is_empty());
    }

    #[test]
    fn single_row() {
        let k = Field::rationals();
        let m = vec![vec![k.one(), k.int(-1)]];
        assert_eq!(nullspace(&k, &m, 2), vec![vec![k.one(), k.one()]]);
    }

    #[test]
    fn line_through_two_points() {
        // monomials 1, x, y evaluated at (1,1), (2,2)
        let k = Field::rationals();
        let m = vec![vec![k.one(), k.one(), k.one()], vec![k.one(), k.int(2), k.int(2)]];
        let ns = nullspace(&k, &m, 3);
        assert_eq!(ns, vec![vec![k.zero(), k.one(), k.int(-1)]]);
    }
}
