//! Dense polynomials over the rationals, used for the cyclotomic presentation.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) type QPoly = Vec<BigRational>;

pub(crate) fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn degree(p: &QPoly) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Integer polynomial x^n - 1 divided by all cyclotomic factors of proper divisors.
pub(crate) fn cyclotomic(n: u64) -> Vec<BigInt> {
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic(d);
            num = exact_div_int(&num, &den);
        }
    }
    num
}

fn exact_div_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // den is monic
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let nn = num.len() - 1;
    let mut quo = vec![BigInt::zero(); nn - dn + 1];
    for k in (0..=nn - dn).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quo[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quo
}

pub(crate) fn divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = a.clone();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead_inv = b[db].recip();
    let mut q = vec![BigRational::zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] * &lead_inv;
        let shift = dr - db;
        for j in 0..=db {
            r[shift + j] = &r[shift + j] - &c * &b[j];
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub(crate) fn inverse_mod(a: &QPoly, m: &QPoly) -> Option<QPoly> {
    // Extended Euclid tracking only the coefficient of `a`.
    let (_, mut r0) = divrem(a, m);
    let mut r1 = m.clone();
    trim(&mut r1);
    let mut s0: QPoly = vec![BigRational::one()];
    let mut s1: QPoly = Vec::new();
    degree(&r0)?;
    loop {
        if degree(&r1).is_none() {
            break;
        }
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    // r0 is the gcd; it must be a nonzero constant
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = r0[0].recip();
    let (_, mut out) = divrem(&s0, m);
    for x in out.iter_mut() {
        *x *= &c;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic(2), ints(&[1, 1]));
        assert_eq!(cyclotomic(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic(8), ints(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic(12), ints(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(5), ints(&[1, 1, 1, 1, 1]));
    }
}
