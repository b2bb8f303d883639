//! Small dense linear algebra over a floating scalar.

use crate::num::Real;

pub(crate) type Dense<T> = Vec<Vec<T>>;

pub(crate) fn mat_vec<T: Real>(m: &Dense<T>, v: &[T]) -> Vec<T> {
    m.iter().map(|row| row.iter().zip(v).map(|(&a, &b)| a * b).sum()).collect()
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Determinant by Gaussian elimination with partial pivoting.
pub(crate) fn det<T: Real>(m: &Dense<T>) -> T {
    let n = m.len();
    let mut a = m.clone();
    let mut d = T::one();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap()).unwrap();
        if a[p][c] == T::zero() {
            return T::zero();
        }
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d = d * a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                let t = a[c][k];
                a[r][k] = a[r][k] - f * t;
            }
        }
    }
    d
}

fn minor<T: Real>(m: &Dense<T>, row: usize, col: usize) -> Dense<T> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &x)| x).collect())
        .collect()
}

/// Column `k` of the adjugate: entry `i` is the cofactor of `(k, i)`.
pub(crate) fn adjugate_column<T: Real>(m: &Dense<T>, k: usize) -> Vec<T> {
    let n = m.len();
    if n == 1 {
        return vec![T::one()];
    }
    (0..n)
        .map(|i| {
            let c = det(&minor(m, k, i));
            if (i + k).is_multiple_of(2) { c } else { -c }
        })
        .collect()
}

/// Inverse by Gauss-Jordan elimination; `None` when singular.
pub(crate) fn inverse<T: Real>(m: &Dense<T>) -> Option<Dense<T>> {
    let n = m.len();
    let mut a: Dense<T> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap())?;
        if a[p][c] == T::zero() {
            return None;
        }
        a.swap(p, c);
        let piv = a[c][c];
        for x in a[c].iter_mut() {
            *x = *x / piv;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c];
                for k in 0..2 * n {
                    let t = a[c][k];
                    a[r][k] = a[r][k] - f * t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_and_inverse() {
        let m = vec![vec![2.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 4.0]];
        assert!((det(&m) - 18.0f64).abs() < 1e-12);
        let inv = inverse(&m).unwrap();
        for (i, row) in m.iter().enumerate() {
            for j in 0..3 {
                let s: f64 = (0..3).map(|k| row[k] * inv[k][j]).sum();
                assert!((s - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        assert!(inverse(&vec![vec![1.0, 2.0], vec![2.0, 4.0f64]]).is_none());
    }

    #[test]
    fn adjugate_spans_kernel() {
        // rank-one 2x2: kernel spanned by (1, -1)
        let m = vec![vec![1.0f64, 1.0], vec![2.0, 2.0]];
        let c = adjugate_column(&m, 0);
        assert_eq!(mat_vec(&m, &c), vec![0.0, 0.0]);
    }
}
