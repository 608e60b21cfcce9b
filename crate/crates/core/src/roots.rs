//! Roots in Q(ζ_N, √q) of polynomials over the same field.
//!
//! A prime P ≡ 1 (mod N) with q a square mod P gives a ring map from the
//! P-integral part of the field onto F_P. Simple roots mod P are lifted
//! P-adically, and a candidate field element `Σ c_i b_i / t` is recovered by
//! lattice reduction, then verified exactly. Anything that fails
//! verification at the largest precision is declared absent from the field.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{CycloWeilField, Elem};
use crate::kpoly::KPoly;
use crate::lll;
use crate::matrix::Matrix;
use crate::qpoly;

const MIN_PRIME: u64 = 200;
const PRIME_ATTEMPTS: usize = 400;
const PRECISION_DOUBLINGS: u32 = 4;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut base = (b % m) as u128;
    let m = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

/// Polynomial helpers over F_P, coefficients constant term first.
mod fp {
    use super::*;

    pub fn trim(p: &mut Vec<u64>) {
        while p.last() == Some(&0) {
            p.pop();
        }
    }

    pub fn eval(p: &[u64], x: u64, m: u64) -> u64 {
        let mut acc: u128 = 0;
        for &c in p.iter().rev() {
            acc = (acc * x as u128 + c as u128) % m as u128;
        }
        acc as u64
    }

    pub fn derivative(p: &[u64], m: u64) -> Vec<u64> {
        let mut out: Vec<u64> = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| ((i as u128 * c as u128) % m as u128) as u64)
            .collect();
        trim(&mut out);
        out
    }

    fn rem(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let inv = pow_mod(b[db], m - 2, m);
        while r.len() > db {
            let top = r.len() - 1;
            let c = (r[top] as u128 * inv as u128 % m as u128) as u64;
            for (j, &bj) in b.iter().enumerate() {
                let idx = top - db + j;
                let sub = (c as u128 * bj as u128 % m as u128) as u64;
                r[idx] = (r[idx] + m - sub) % m;
            }
            trim(&mut r);
        }
        r
    }

    pub fn gcd_degree(a: &[u64], b: &[u64], m: u64) -> usize {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, m);
            x = y;
            y = r;
        }
        x.len().saturating_sub(1)
    }
}

/// Embedding of the field into Z/M for M a power of the chosen prime.
struct Embedding {
    prime: u64,
    zeta: u64,
    sqrt: Option<u64>,
}

impl Embedding {
    fn find(field: &CycloWeilField, poly_denominator: &BigInt, poly: &KPoly) -> Option<Self> {
        let n = field.conductor();
        let q = field.q();
        let mut k = MIN_PRIME / n + 1;
        let mut tried = 0;
        while tried < PRIME_ATTEMPTS {
            let p = k * n + 1;
            k += 1;
            if p.is_multiple_of(2) || !is_prime(p) || q.is_multiple_of(p) {
                continue;
            }
            if (poly_denominator % BigInt::from(p)).is_zero() {
                continue;
            }
            tried += 1;
            let sqrt = if field.sqrt_adjoined() {
                match (1..p).find(|&t| (t as u128 * t as u128 % p as u128) as u64 == q % p) {
                    Some(t) => Some(t),
                    None => continue,
                }
            } else {
                None
            };
            let Some(zeta) = primitive_root_of_unity(n, p) else {
                continue;
            };
            let emb = Embedding {
                prime: p,
                zeta,
                sqrt,
            };
            let image = emb.reduce_poly_small(field, poly);
            if image.len() != poly.coeffs().len() {
                continue;
            }
            let deriv = fp::derivative(&image, p);
            if fp::gcd_degree(&image, &deriv, p) == 0 {
                return Some(emb);
            }
        }
        None
    }

    fn reduce_poly_small(&self, field: &CycloWeilField, poly: &KPoly) -> Vec<u64> {
        let m = BigInt::from(self.prime);
        let lifted = Lifted::new(field, self, &m, 1);
        let mut out: Vec<u64> = poly
            .coeffs()
            .iter()
            .map(|c| lifted.image(c).to_u64().unwrap())
            .collect();
        fp::trim(&mut out);
        out
    }
}

fn primitive_root_of_unity(n: u64, p: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    let factors = prime_factors(n);
    (2..p)
        .map(|a| pow_mod(a, (p - 1) / n, p))
        .find(|&w| w != 1 && factors.iter().all(|&f| pow_mod(w, n / f, p) != 1))
}

/// Images of the basis elements modulo `M = P^k`.
struct Lifted {
    modulus: BigInt,
    basis_images: Vec<BigInt>,
}

impl Lifted {
    fn new(field: &CycloWeilField, emb: &Embedding, modulus: &BigInt, steps: u32) -> Self {
        let n = field.conductor();
        let phi = field.phi();
        let cyclo: Vec<BigInt> = qpoly::cyclotomic(n);
        // Newton lift of ζ as a root of Φ_N, and of √q as a root of x² − q
        let mut z = BigInt::from(emb.zeta);
        let eval = |c: &[BigInt], x: &BigInt| -> BigInt {
            let mut acc = BigInt::zero();
            for a in c.iter().rev() {
                acc = (acc * x + a).mod_floor(modulus);
            }
            acc
        };
        let dcyclo: Vec<BigInt> = cyclo
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        for _ in 0..steps {
            let num = eval(&cyclo, &z);
            let den = eval(&dcyclo, &z);
            z = (&z - num * inv_mod(&den, modulus)).mod_floor(modulus);
        }
        let s = emb.sqrt.map(|t| {
            let mut s = BigInt::from(t);
            let q = BigInt::from(field.q());
            for _ in 0..steps {
                let num = &s * &s - &q;
                let den = &s * 2;
                s = (&s - num * inv_mod(&den, modulus)).mod_floor(modulus);
            }
            s
        });
        let mut powers = Vec::with_capacity(phi);
        let mut cur = BigInt::one();
        for _ in 0..phi {
            powers.push(cur.clone());
            cur = (cur * &z).mod_floor(modulus);
        }
        let mut basis_images = powers.clone();
        if let Some(s) = s {
            basis_images.extend(powers.iter().map(|p| (p * &s).mod_floor(modulus)));
        }
        Lifted {
            modulus: modulus.clone(),
            basis_images,
        }
    }

    fn rational(&self, r: &BigRational) -> BigInt {
        let den = inv_mod(r.denom(), &self.modulus);
        (r.numer() * den).mod_floor(&self.modulus)
    }

    fn image(&self, e: &Elem) -> BigInt {
        let mut acc = BigInt::zero();
        for (c, b) in e.iter().zip(&self.basis_images) {
            if !c.is_zero() {
                acc += self.rational(c) * b;
            }
        }
        acc.mod_floor(&self.modulus)
    }
}

fn inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.mod_floor(m).extended_gcd(m);
    debug_assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

fn newton_root(poly: &[BigInt], r0: u64, modulus: &BigInt, steps: u32) -> BigInt {
    let eval = |c: &[BigInt], x: &BigInt| -> BigInt {
        let mut acc = BigInt::zero();
        for a in c.iter().rev() {
            acc = (acc * x + a).mod_floor(modulus);
        }
        acc
    };
    let deriv: Vec<BigInt> = poly
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    let mut r = BigInt::from(r0);
    for _ in 0..steps {
        let num = eval(poly, &r);
        let den = eval(&deriv, &r);
        r = (&r - num * inv_mod(&den, modulus)).mod_floor(modulus);
    }
    r
}

/// Searches for a short relation `t·r ≡ Σ c_i e_i (mod M)` and returns the
/// candidate field elements it suggests.
fn lattice_candidates(lifted: &Lifted, r: &BigInt) -> Vec<Elem> {
    let dim = lifted.basis_images.len();
    let m = &lifted.modulus;
    // coordinates (c_0, …, c_{D-1}, t) with c_0 determined modulo M
    let mut rows = Vec::with_capacity(dim + 1);
    let mut first = vec![BigInt::zero(); dim + 1];
    first[0] = m.clone();
    rows.push(first);
    for i in 1..dim {
        let mut row = vec![BigInt::zero(); dim + 1];
        row[0] = (-&lifted.basis_images[i]).mod_floor(m);
        row[i] = BigInt::one();
        rows.push(row);
    }
    let mut last = vec![BigInt::zero(); dim + 1];
    last[0] = r.mod_floor(m);
    last[dim] = BigInt::one();
    rows.push(last);
    lll::reduce(rows)
        .into_iter()
        .filter(|row| !row[dim].is_zero())
        .map(|row| {
            let t = row[dim].clone();
            row[..dim]
                .iter()
                .map(|c| BigRational::new(c.clone(), t.clone()))
                .collect()
        })
        .collect()
}

/// Distinct roots of `poly` lying in its coefficient field.
pub(crate) fn roots_in_field(poly: &KPoly) -> Vec<Elem> {
    let field = poly.field().clone();
    if poly.degree() == 0 {
        return Vec::new();
    }
    let g = poly.squarefree();
    if g.degree() == 1 {
        return vec![field.neg_elem(&g.coeffs()[0])];
    }
    let mut denominator = BigInt::one();
    for c in g.coeffs() {
        for r in c {
            denominator = denominator.lcm(r.denom());
        }
    }
    let Some(emb) = Embedding::find(&field, &denominator, &g) else {
        return Vec::new();
    };
    let p = emb.prime;
    let image = emb.reduce_poly_small(&field, &g);
    let mut pending: Vec<u64> = (0..p).filter(|&x| fp::eval(&image, x, p) == 0).collect();
    let mut found: Vec<Elem> = Vec::new();
    let dim = field.degree() as u64;
    let base_bits = (dim + 1) * (dim + 24);
    let log2p = 64 - u64::from(p.leading_zeros());
    for round in 0..=PRECISION_DOUBLINGS {
        if pending.is_empty() || found.len() == g.degree() {
            break;
        }
        let bits = base_bits << round;
        let k = (bits / (log2p - 1)).max(2) as u32;
        let modulus = BigInt::from(p).pow(k);
        let steps = 1 + 32 - k.leading_zeros();
        let lifted = Lifted::new(&field, &emb, &modulus, steps);
        let big_poly: Vec<BigInt> = g.coeffs().iter().map(|c| lifted.image(c)).collect();
        pending.retain(|&r0| {
            let r = newton_root(&big_poly, r0, &modulus, steps);
            match lattice_candidates(&lifted, &r)
                .into_iter()
                .find(|cand| CycloWeilField::is_zero_elem(&g.eval(cand)))
            {
                Some(root) => {
                    found.push(root);
                    false
                }
                None => true,
            }
        });
    }
    found
}

/// Eigenvalues of a square matrix with algebraic multiplicities.
pub(crate) fn eigenvalues(m: &Matrix, what: &'static str) -> Result<Vec<(Elem, usize)>> {
    let cp = m.charpoly();
    let mut out: Vec<(Elem, usize)> = roots_in_field(&cp)
        .into_iter()
        .map(|r| {
            let mult = cp.root_multiplicity(&r);
            (r, mult)
        })
        .collect();
    let total: usize = out.iter().map(|(_, k)| k).sum();
    if total != m.rows() {
        return Err(Error::NonSplit(what));
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CwScalar;

    fn poly_from_roots(field: &CycloWeilField, roots: &[Elem]) -> KPoly {
        let mut coeffs = vec![field.one_elem()];
        for r in roots {
            let mut next = vec![field.zero_elem(); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = field.add_elem(&next[i + 1], c);
                next[i] = field.sub_elem(&next[i], &field.mul_elem(c, r));
            }
            coeffs = next;
        }
        KPoly::new(field, coeffs)
    }

    fn sorted(mut v: Vec<Elem>) -> Vec<Elem> {
        v.sort();
        v
    }

    #[test]
    fn recovers_weil_numbers() {
        let f = CycloWeilField::new(3, 5).unwrap();
        let s: CwScalar = f.sqrt_q();
        let roots = vec![
            f.q_pow_elem(-1),
            f.mul_elem(&f.z_pow_elem(1), s.elem()),
            f.scale_elem(&f.z_pow_elem(2), &BigRational::new((-2).into(), 7.into())),
            f.int_elem(1),
        ];
        let p = poly_from_roots(&f, &roots);
        assert_eq!(sorted(roots_in_field(&p)), sorted(roots));
    }

    #[test]
    fn gaussian_weil_number() {
        // 1 + 2i has absolute value √5
        let f = CycloWeilField::new(4, 5).unwrap();
        let a = f.add_elem(
            &f.one_elem(),
            &f.scale_elem(&f.z_pow_elem(1), &BigRational::from_integer(2.into())),
        );
        let b = f.conj_elem(&a);
        let p = poly_from_roots(&f, &[a.clone(), b.clone()]);
        assert_eq!(sorted(roots_in_field(&p)), sorted(vec![a, b]));
    }

    #[test]
    fn irreducible_has_no_roots() {
        // x² − 3 over Q(√2)
        let f = CycloWeilField::new(1, 2).unwrap();
        let p = KPoly::new(&f, vec![f.int_elem(-3), f.zero_elem(), f.one_elem()]);
        assert!(roots_in_field(&p).is_empty());
        // x² + 1 over Q(ζ_3, √2): not split, i ∉ field
        let f = CycloWeilField::new(3, 2).unwrap();
        let p = KPoly::new(&f, vec![f.int_elem(1), f.zero_elem(), f.one_elem()]);
        assert!(roots_in_field(&p).is_empty());
    }

    #[test]
    fn eigenvalues_with_multiplicity() {
        let f = CycloWeilField::new(4, 3).unwrap();
        let m = Matrix::from_ints(&f, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, -1]]);
        let ev = eigenvalues(&m, "test").unwrap();
        assert_eq!(ev, vec![(f.int_elem(-1), 1), (f.int_elem(1), 2)]);
        let rot = Matrix::from_ints(&f, &[&[0, -1], &[1, 0]]);
        assert_eq!(eigenvalues(&rot, "rot").unwrap().len(), 2);
        // Q(ζ_3, √3) contains i, Q(ζ_3, √2) does not
        let f3 = CycloWeilField::new(3, 3).unwrap();
        let rot3 = Matrix::from_ints(&f3, &[&[0, -1], &[1, 0]]);
        assert_eq!(eigenvalues(&rot3, "rot").unwrap().len(), 2);
        let f3 = CycloWeilField::new(3, 2).unwrap();
        let rot = Matrix::from_ints(&f3, &[&[0, -1], &[1, 0]]);
        assert_eq!(
            eigenvalues(&rot, "rot").unwrap_err(),
            Error::NonSplit("rot")
        );
    }
}
