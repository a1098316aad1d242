//! Dense matrices over any [`Scalar`], row-major `Vec<Vec<R>>`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Mat<R> = Vec<Vec<R>>;

pub fn identity<R: Scalar>(n: usize) -> Mat<R> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { R::one() } else { R::zero() }).collect())
        .collect()
}

pub fn zeros<R: Scalar>(r: usize, c: usize) -> Mat<R> {
    vec![vec![R::zero(); c]; r]
}

pub fn mat_mul<R: Scalar>(a: &Mat<R>, b: &Mat<R>) -> Mat<R> {
    let n = a.len();
    let m = b.first().map_or(0, |r: &Vec<R>| r.len());
    let k = b.len();
    let mut out: Mat<R> = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            let x = &a[i][l];
            if x.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] = out[i][j].add(&x.mul(&b[l][j]));
                }
            }
        }
    }
    out
}

pub fn mat_vec<R: Scalar>(a: &Mat<R>, v: &[R]) -> Vec<R> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(R::zero(), |acc, (x, y)| if x.is_zero() || y.is_zero() { acc } else { acc.add(&x.mul(y)) })
        })
        .collect()
}

pub fn transpose<R: Scalar>(a: &Mat<R>) -> Mat<R> {
    let m = a.first().map_or(0, |r: &Vec<R>| r.len());
    (0..m).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_sub<R: Scalar>(a: &Mat<R>, b: &Mat<R>) -> Mat<R> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.sub(q)).collect())
        .collect()
}

pub fn mat_add<R: Scalar>(a: &Mat<R>, b: &Mat<R>) -> Mat<R> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.add(q)).collect())
        .collect()
}

pub fn mat_scale<R: Scalar>(a: &Mat<R>, c: &R) -> Mat<R> {
    a.iter().map(|r| r.iter().map(|x| x.mul(c)).collect()).collect()
}

pub fn mat_map<R: Scalar, S: Scalar>(a: &Mat<R>, f: impl Fn(&R) -> S) -> Mat<S> {
    a.iter().map(|r| r.iter().map(&f).collect()).collect()
}

/// Row echelon form with partial pivoting by [`Scalar::magnitude`]; returns
/// the reduced matrix, pivot columns and the determinant sign/scale factor.
fn eliminate<R: Scalar>(mut a: Mat<R>, ncols: usize) -> (Mat<R>, Vec<usize>, R) {
    let rows = a.len();
    let mut piv = Vec::new();
    let mut det = R::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .max_by(|&i, &j| a[i][c].magnitude().total_cmp(&a[j][c].magnitude()));
        let Some(p) = best else { continue };
        if p != r {
            a.swap(p, r);
            det = det.neg();
        }
        let inv = a[r][c].inv().expect("nonzero pivot is invertible");
        det = det.mul(&a[r][c]);
        let w = a[r].len();
        for j in 0..w {
            a[r][j] = a[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..w {
                if !a[r][j].is_zero() {
                    let t = f.mul(&a[r][j]);
                    a[i][j] = a[i][j].sub(&t);
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    (a, piv, det)
}

pub fn rank<R: Scalar>(a: &Mat<R>) -> usize {
    let n = a.first().map_or(0, |r: &Vec<R>| r.len());
    eliminate(a.clone(), n).1.len()
}

pub fn det<R: Scalar>(a: &Mat<R>) -> R {
    let n = a.len();
    let (_, piv, d) = eliminate(a.clone(), n);
    if piv.len() < n {
        R::zero()
    } else {
        d
    }
}

pub fn inverse<R: Scalar>(a: &Mat<R>) -> Result<Mat<R>> {
    let n = a.len();
    let aug: Mat<R> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { R::one() } else { R::zero() }));
            r
        })
        .collect();
    let (red, piv, _) = eliminate(aug, n);
    if piv.len() < n {
        return Err(Error::Singular);
    }
    Ok(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `a x = b` for square invertible `a`.
pub fn solve<R: Scalar>(a: &Mat<R>, b: &[R]) -> Result<Vec<R>> {
    let inv = inverse(a)?;
    Ok(mat_vec(&inv, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Q};

    fn m(rows: &[&[i64]]) -> Mat<Q> {
        rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
    }

    #[test]
    fn inverse_and_det() {
        let a = m(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity(3));
        assert_eq!(det(&a), qi(-2));
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_err());
    }
}
