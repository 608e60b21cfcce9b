//! Integral LLL reduction (δ = 3/4) with exact Gram-Schmidt bookkeeping.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `a / b` for `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// Reduces a basis of linearly independent integer row vectors in place.
#[allow(clippy::needless_range_loop)] // mirrors the textbook index form
pub(crate) fn reduce(basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = basis.len();
    if n <= 1 {
        return basis;
    }
    // 1-based indexing keeps the recurrences readable.
    let mut b: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    b.push(Vec::new());
    b.extend(basis);
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    d[1] = dot(&b[1], &b[1]);
    let mut k = 2;
    let mut kmax = 1;

    let red =
        |b: &mut Vec<Vec<BigInt>>, lam: &mut Vec<Vec<BigInt>>, d: &[BigInt], k: usize, l: usize| {
            let twice: BigInt = lam[k][l].abs() * 2;
            if twice > d[l] {
                let q = round_div(&lam[k][l], &d[l]);
                let bl = b[l].clone();
                for (x, y) in b[k].iter_mut().zip(&bl) {
                    *x -= &q * y;
                }
                lam[k][l] -= &q * &d[l];
                for i in 1..l {
                    let t = &q * &lam[l][i];
                    lam[k][i] -= t;
                }
            }
        };

    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "LLL input vectors are dependent");
                    d[k] = u;
                }
            }
        }
        red(&mut b, &mut lam, &d, k, k - 1);
        let lhs = BigInt::from(4) * &d[k] * &d[k - 2];
        let rhs = BigInt::from(3) * &d[k - 1] * &d[k - 1]
            - BigInt::from(4) * &lam[k][k - 1] * &lam[k][k - 1];
        if lhs < rhs {
            b.swap(k, k - 1);
            for j in 1..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let big_b = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
                lam[i][k - 1] = (&big_b * &t + &l * &lam[i][k]) / &d[k];
            }
            d[k - 1] = big_b;
            k = (k - 1).max(2);
        } else {
            for l in (1..k - 1).rev() {
                red(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    b.remove(0);
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&t| BigInt::from(t)).collect()
    }

    #[test]
    fn classic_example() {
        let basis = vec![v(&[1, 1, 1]), v(&[-1, 0, 2]), v(&[3, 5, 6])];
        let out = reduce(basis.clone());
        // same determinant up to sign
        let det = |m: &[Vec<BigInt>]| -> BigInt {
            &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
                - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
                + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
        };
        assert_eq!(det(&out).abs(), det(&basis).abs());
        let shortest: BigInt = out.iter().map(|r| dot(r, r)).min().unwrap();
        assert!(shortest <= BigInt::from(3));
    }

    #[test]
    fn recovers_hidden_relation() {
        // t·r ≡ c0 + c1·e (mod M) with (c0, c1, t) = (3, -2, 5)
        let m = BigInt::from(1_000_003i64) * BigInt::from(999_983i64);
        let e = BigInt::from(123_456_789i64);
        let target = (BigInt::from(3) + BigInt::from(-2) * &e).mod_floor(&m);
        let g = BigInt::from(5).extended_gcd(&m);
        let r = (&target * g.x).mod_floor(&m);
        let basis = vec![
            vec![m.clone(), BigInt::zero(), BigInt::zero()],
            vec![(-&e).mod_floor(&m), BigInt::one(), BigInt::zero()],
            vec![r, BigInt::zero(), BigInt::one()],
        ];
        let out = reduce(basis);
        assert!(out.iter().any(|row| {
            let s = if row[2].is_negative() {
                -BigInt::one()
            } else {
                BigInt::one()
            };
            row.iter().map(|x| x * &s).collect::<Vec<_>>() == v(&[3, -2, 5])
        }));
    }
}
