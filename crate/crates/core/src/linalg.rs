//! Dense linear algebra over a finite field, row-major.

use crate::field::{Elem, Field};

/// Reduces `rows` to reduced row echelon form, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub(crate) fn rref(f: &Field, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        let Some(pr) = (top..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(top, pr);
        let inv = f.inv(rows[top][col]).expect("nonzero pivot");
        for x in rows[top].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[top].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == top || row[col].is_zero() {
                continue;
            }
            let c = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        pivots.push(col);
        top += 1;
    }
    rows.truncate(top);
    pivots
}

pub(crate) fn rank(f: &Field, rows: &[Vec<Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Basis of the right kernel {v : M v = 0}.
pub(crate) fn kernel(f: &Field, rows: &[Vec<Elem>], ncols: usize) -> Vec<Vec<Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut out = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Elem::ZERO; ncols];
        v[free] = Elem::ONE;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = f.neg(row[free]);
        }
        out.push(v);
    }
    out
}

/// Coefficients a with sum_i a_i vs[i] = target, if any exist.
pub(crate) fn solve(f: &Field, vs: &[Vec<Elem>], target: &[Elem]) -> Option<Vec<Elem>> {
    let len = target.len();
    let nv = vs.len();
    // one equation per coordinate, unknowns a_0..a_{nv-1}, last column the target
    let mut m: Vec<Vec<Elem>> = (0..len)
        .map(|c| {
            let mut row: Vec<Elem> = vs.iter().map(|v| v[c]).collect();
            row.push(target[c]);
            row
        })
        .collect();
    let pivots = rref(f, &mut m);
    if pivots.last() == Some(&nv) {
        return None;
    }
    let mut a = vec![Elem::ZERO; nv];
    for (row, &pc) in m.iter().zip(&pivots) {
        a[pc] = row[nv];
    }
    Some(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: &[u32]) -> Vec<Elem> {
        v.iter().map(|&x| Elem(x)).collect()
    }

    #[test]
    fn rank_and_kernel_over_f3() {
        let f = Field::conway(3, 1).unwrap();
        let m = vec![e(&[1, 2, 0, 1]), e(&[2, 1, 0, 2]), e(&[0, 0, 1, 1])];
        assert_eq!(rank(&f, &m), 2);
        let ker = kernel(&f, &m, 4);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for row in &m {
                let s = row
                    .iter()
                    .zip(v)
                    .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn solve_in_gf9() {
        let f = Field::conway(3, 2).unwrap();
        let vs = vec![e(&[1, 0, 4]), e(&[0, 1, 7])];
        let a = [Elem(5), Elem(8)];
        let target: Vec<Elem> = (0..3)
            .map(|c| f.add(f.mul(a[0], vs[0][c]), f.mul(a[1], vs[1][c])))
            .collect();
        assert_eq!(solve(&f, &vs, &target).unwrap(), a.to_vec());
        assert!(solve(&f, &vs, &e(&[0, 0, 1])).is_none());
    }
}
