//! Dense exact linear algebra over any [`FieldElem`] type.

use super::FieldElem;

pub type Matrix<T> = Vec<Vec<T>>;

/// Row-reduces `m` in place to echelon form and returns the pivot columns.
pub fn row_reduce<T: FieldElem>(m: &mut Matrix<T>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero_elem()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].try_inv().expect("pivot is nonzero");
        for j in c..cols {
            m[r][j] = m[r][j].mul_ref(&inv);
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero_elem() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..cols {
                if !m[r][j].is_zero_elem() {
                    let t = f.mul_ref(&m[r][j]);
                    m[i][j] = m[i][j].sub_ref(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: FieldElem>(m: &Matrix<T>) -> usize {
    let mut work = m.clone();
    row_reduce(&mut work).len()
}

pub fn mat_mul<T: FieldElem>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let zero = a[0][0].zero_like();
    let mut out = vec![vec![zero.clone(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero_elem() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero_elem() {
                    out[i][j] = out[i][j].add_ref(&a[i][l].mul_ref(&b[l][j]));
                }
            }
        }
    }
    out
}

pub fn transpose<T: Clone>(a: &Matrix<T>) -> Matrix<T> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<T: FieldElem>(a: &Matrix<T>) -> Option<Matrix<T>> {
    let n = a.len();
    let zero = a[0][0].zero_like();
    let one = a[0][0].one_like();
    let mut aug: Matrix<T> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    let piv = row_reduce(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Outcome of solving `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<T> {
    /// One solution (free variables set to zero).
    Consistent(Vec<T>),
    /// Row echelon form has a row `0 = c` with `c != 0`; `c` is returned.
    Inconsistent(T),
}

pub fn solve<T: FieldElem>(a: &Matrix<T>, b: &[T]) -> Solution<T> {
    let n = a.first().map_or(0, Vec::len);
    let mut aug: Matrix<T> =
        a.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect()).collect();
    let piv = row_reduce(&mut aug);
    let zero = b[0].zero_like();
    if piv.contains(&n) {
        let witness = inconsistency_witness(a, b).unwrap_or_else(|| zero.one_like());
        return Solution::Inconsistent(witness);
    }
    let mut x = vec![zero; n];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    Solution::Consistent(x)
}

/// Eliminates without normalizing pivots and returns the first nonzero
/// right-hand side left in a row whose coefficient part vanished.
fn inconsistency_witness<T: FieldElem>(a: &Matrix<T>, b: &[T]) -> Option<T> {
    let n = a.first().map_or(0, Vec::len);
    let mut m: Matrix<T> =
        a.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect()).collect();
    let rows = m.len();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero_elem()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].try_inv()?;
        for i in r + 1..rows {
            if m[i][c].is_zero_elem() {
                continue;
            }
            let f = m[i][c].mul_ref(&inv);
            for j in c..=n {
                let t = f.mul_ref(&m[r][j]);
                m[i][j] = m[i][j].sub_ref(&t);
            }
        }
        r += 1;
    }
    m[r..].iter().map(|row| row[n].clone()).find(|v| !v.is_zero_elem())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::{int, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    #[test]
    fn rank_and_inverse() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(rank(&a), 2);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), m(&[&[1, 0], &[0, 1]]));
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn consistent_and_inconsistent_systems() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(solve(&a, &[int(3), int(1)]), Solution::Consistent(vec![int(2), int(1)]));
        let a = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(solve(&a, &[int(1), int(5)]), Solution::Inconsistent(int(3)));
    }
}
