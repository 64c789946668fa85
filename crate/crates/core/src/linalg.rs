//! Exact linear algebra on small symmetric integer matrices.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Signature counts of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

fn to_rational(m: &[Vec<i64>]) -> Vec<Vec<Rational>> {
    m.iter()
        .map(|row| row.iter().map(|&x| Rational::from_int(x)).collect())
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone() * sign
}

/// Inverse over the rationals by Gauss-Jordan elimination.
pub fn inverse(m: &[Vec<i64>]) -> Result<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a = to_rational(m);
    let mut inv: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or(Error::DegeneratePairing)?;
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col].recip().expect("nonzero pivot");
        for j in 0..n {
            a[col][j] *= &p;
            inv[col][j] *= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let da = &f * &a[col][j];
                a[r][j] -= &da;
                let di = &f * &inv[col][j];
                inv[r][j] -= &di;
            }
        }
    }
    Ok(inv)
}

/// Signature of a symmetric matrix via symmetric pivoting (Sylvester's law of inertia).
///
/// Each step either pivots on a nonzero diagonal entry, or, when the diagonal
/// of the remaining block vanishes but some off-diagonal entry `a_ij` does not,
/// replaces basis vector `e_i` by `e_i + e_j` so that the new diagonal entry is
/// `2 a_ij != 0`. Both steps are congruences, so the sign counts are preserved.
pub fn inertia(m: &[Vec<i64>]) -> Inertia {
    let mut a = to_rational(m);
    let mut out = Inertia { positive: 0, negative: 0, zero: 0 };
    while !a.is_empty() {
        let n = a.len();
        let diag = (0..n).find(|&i| !a[i][i].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                let off = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
                match off {
                    None => {
                        out.zero += n;
                        break;
                    }
                    Some((i, j)) => {
                        // row_i += row_j, then col_i += col_j
                        for k in 0..n {
                            let v = a[j][k].clone();
                            a[i][k] += &v;
                        }
                        for k in 0..n {
                            let v = a[k][j].clone();
                            a[k][i] += &v;
                        }
                        i
                    }
                }
            }
        };
        let pivot = a[p][p].clone();
        if pivot.is_positive() {
            out.positive += 1;
        } else {
            out.negative += 1;
        }
        // Schur complement on the remaining indices.
        let rest: Vec<usize> = (0..n).filter(|&k| k != p).collect();
        let next: Vec<Vec<Rational>> = rest
            .iter()
            .map(|&i| {
                rest.iter()
                    .map(|&j| &a[i][j] - &(&a[i][p] * &a[p][j]) / &pivot)
                    .collect()
            })
            .collect();
        a = next;
    }
    out
}

/// `true` if the matrix is square and symmetric.
pub fn is_symmetric(m: &[Vec<i64>]) -> bool {
    let n = m.len();
    m.iter().all(|row| row.len() == n) && (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![1]]), BigInt::from(1));
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(determinant(&[vec![0, 0], vec![0, 1]]), BigInt::from(0));
        assert_eq!(
            determinant(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]),
            BigInt::from(4)
        );
    }

    #[test]
    fn inverse_of_hyperbolic_is_itself() {
        let h = vec![vec![0, 1], vec![1, 0]];
        let inv = inverse(&h).unwrap();
        assert_eq!(inv, to_rational(&h));
    }

    #[test]
    fn inverse_rejects_degenerate() {
        assert_eq!(inverse(&[vec![0, 0], vec![0, 1]]), Err(Error::DegeneratePairing));
    }

    #[test]
    fn inertia_examples() {
        assert_eq!(inertia(&[vec![1]]), Inertia { positive: 1, negative: 0, zero: 0 });
        assert_eq!(
            inertia(&[vec![0, 1], vec![1, 0]]),
            Inertia { positive: 1, negative: 1, zero: 0 }
        );
        assert_eq!(
            inertia(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]),
            Inertia { positive: 1, negative: 2, zero: 0 }
        );
        assert_eq!(
            inertia(&[vec![0, 0], vec![0, 1]]),
            Inertia { positive: 1, negative: 0, zero: 1 }
        );
        // E8 root lattice (negative definite form)
        let e8 = [
            [-2, 1, 0, 0, 0, 0, 0, 0],
            [1, -2, 1, 0, 0, 0, 0, 0],
            [0, 1, -2, 1, 0, 0, 0, 1],
            [0, 0, 1, -2, 1, 0, 0, 0],
            [0, 0, 0, 1, -2, 1, 0, 0],
            [0, 0, 0, 0, 1, -2, 1, 0],
            [0, 0, 0, 0, 0, 1, -2, 0],
            [0, 0, 1, 0, 0, 0, 0, -2],
        ];
        let e8: Vec<Vec<i64>> = e8.iter().map(|r| r.to_vec()).collect();
        assert_eq!(inertia(&e8), Inertia { positive: 0, negative: 8, zero: 0 });
        assert_eq!(determinant(&e8), BigInt::from(1));
    }
}
