//! Exact Gaussian elimination over a coefficient field.

use super::coeff::Coeff;
use crate::error::{Error, Result};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<C: Coeff>(m: &mut [Vec<C>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = C::one() / m[r][c].clone();
        for v in m[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<C: Coeff>(m: &[Vec<C>]) -> usize {
    let mut w = m.to_vec();
    rref(&mut w).len()
}

/// Dimension of the kernel of an `rows × cols` matrix.
pub fn nullity<C: Coeff>(m: &[Vec<C>], cols: usize) -> usize {
    cols - rank(m)
}

/// Solves `A x = b` for a consistent system with a unique solution.
///
/// Fails with [`Error::Singular`] when the kernel is nontrivial or the system
/// is inconsistent.
pub fn solve<C: Coeff>(a: &[Vec<C>], b: &[C]) -> Result<Vec<C>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&cols) {
        return Err(Error::Singular);
    }
    if piv.len() < cols {
        return Err(Error::Singular);
    }
    let mut x = vec![C::zero(); cols];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn hilbert_solve() {
        let h: Vec<Vec<BigRational>> = (0..4).map(|i| (0..4).map(|j| q(1, i + j + 1)).collect()).collect();
        let x_true = vec![q(1, 1), q(-2, 1), q(3, 7), q(0, 1)];
        let b: Vec<BigRational> = h
            .iter()
            .map(|row| row.iter().zip(&x_true).fold(q(0, 1), |s, (a, x)| s + a * x))
            .collect();
        assert_eq!(solve(&h, &b).unwrap(), x_true);
    }

    #[test]
    fn singular_detected() {
        let m = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert_eq!(nullity(&m, 2), 1);
        assert_eq!(solve(&m, &[q(1, 1), q(2, 1)]), Err(Error::Singular));
    }
}
