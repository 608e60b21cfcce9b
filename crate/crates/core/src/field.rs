//! Exact arithmetic in Q(ζ_N, √q).
//!
//! Elements are coordinate vectors in the power basis of
//! `Q[z]/(Φ_N(z))`, optionally extended by `s` with `s² = q` when √q does
//! not already lie in the cyclotomic field. Complex conjugation sends
//! `z ↦ z⁻¹` and fixes `s`; since the field is abelian over Q it realizes
//! complex conjugation under every complex embedding.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qpoly;

/// Raw coordinates of a field element.
pub(crate) type Elem = Vec<BigRational>;

struct FieldData {
    conductor: u64,
    q: u64,
    ell: u64,
    exponent: u32,
    adjoined: bool,
    phi: usize,
    cyclo: Vec<BigRational>,
    /// `z^(phi + k) mod Φ_N` for `k < phi - 1`.
    reduce_table: Vec<Vec<BigRational>>,
    /// `conj(z^i) = z^(N - i)` reduced, for `i < phi`.
    conj_table: Vec<Vec<BigRational>>,
    sqrt_q: Elem,
}

/// Handle to the field Q(ζ_N, √q). Cheap to clone; compares by `(N, q)`.
#[derive(Clone)]
pub struct CycloWeilField(Arc<FieldData>);

impl PartialEq for CycloWeilField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.conductor == other.0.conductor && self.0.q == other.0.q)
    }
}

impl Eq for CycloWeilField {}

impl fmt::Debug for CycloWeilField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{}, sqrt {})", self.0.conductor, self.0.q)
    }
}

impl fmt::Display for CycloWeilField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={}, q={}, sqrt={}",
            self.0.conductor,
            self.0.q,
            u8::from(self.0.adjoined)
        )
    }
}

/// Returns `(ℓ, h)` with `q = ℓ^h`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut ell = 0;
    let mut d = 2u64;
    while d.saturating_mul(d) <= q {
        if q.is_multiple_of(d) {
            ell = d;
            break;
        }
        d += 1;
    }
    if ell == 0 {
        return Some((q, 1));
    }
    let mut rest = q;
    let mut h = 0;
    while rest.is_multiple_of(ell) {
        rest /= ell;
        h += 1;
    }
    (rest == 1).then_some((ell, h))
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Legendre symbol `(a | p)` for an odd prime `p`.
fn legendre(a: u64, p: u64) -> i64 {
    let r = mod_pow(a, (p - 1) / 2, p);
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Decides whether √q ∈ Q(ζ_N) via the quadratic Gauss sum criterion.
pub fn sqrt_in_cyclotomic(conductor: u64, ell: u64, exponent: u32) -> bool {
    if exponent.is_multiple_of(2) {
        return true;
    }
    if ell % 4 == 1 {
        conductor.is_multiple_of(ell)
    } else {
        conductor.is_multiple_of(4 * ell)
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CycloWeilField {
    /// Builds the presentation of Q(ζ_N, √q).
    pub fn new(conductor: u64, q: u64) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::ZeroConductor);
        }
        let (ell, exponent) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let cyclo: Vec<BigRational> = qpoly::cyclotomic(conductor)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let phi = cyclo.len() - 1;
        let adjoined = !sqrt_in_cyclotomic(conductor, ell, exponent);

        let mut data = FieldData {
            conductor,
            q,
            ell,
            exponent,
            adjoined,
            phi,
            cyclo,
            reduce_table: Vec::new(),
            conj_table: Vec::new(),
            sqrt_q: Vec::new(),
        };
        // monomials z^j for j < max(N, 2 phi)
        let top = (conductor as usize).max(2 * phi);
        let mut monomials: Vec<Vec<BigRational>> = Vec::with_capacity(top);
        let mut cur = vec![BigRational::zero(); phi];
        cur[0] = BigRational::one();
        for _ in 0..top {
            monomials.push(cur.clone());
            cur = data.times_z(&cur);
        }
        data.reduce_table = (0..phi.saturating_sub(1))
            .map(|k| monomials[phi + k].clone())
            .collect();
        data.conj_table = (0..phi)
            .map(|i| monomials[(conductor as usize - i) % conductor as usize].clone())
            .collect();

        let field = CycloWeilField(Arc::new(data));
        let sqrt_q = if adjoined {
            let mut e = field.zero_elem();
            e[phi] = BigRational::one();
            e
        } else {
            field.cyclotomic_sqrt(&monomials)
        };
        let mut data = Arc::try_unwrap(field.0).ok().expect("fresh handle");
        data.sqrt_q = sqrt_q;
        let field = CycloWeilField(Arc::new(data));
        debug_assert_eq!(
            field.mul_elem(&field.0.sqrt_q, &field.0.sqrt_q),
            field.rational_elem(BigRational::from_integer(BigInt::from(q)))
        );
        Ok(field)
    }

    /// √q as an element of Q(ζ_N) when the criterion says it lies there.
    fn cyclotomic_sqrt(&self, monomials: &[Vec<BigRational>]) -> Elem {
        let d = &self.0;
        let n = d.conductor as usize;
        let mut root_ell = if d.exponent.is_multiple_of(2) {
            self.one_elem()
        } else if d.ell == 2 {
            // ζ_8 + ζ_8⁻¹
            let k = n / 8;
            self.add_elem(&monomials[k], &monomials[(n - k) % n])
        } else {
            // Gauss sum g with g² = (−1|ℓ) ℓ
            let ell = d.ell as usize;
            let step = n / ell;
            let mut g = self.zero_elem();
            for a in 1..ell {
                let term = &monomials[(a * step) % n];
                let sym = legendre(a as u64, d.ell);
                g = if sym == 1 {
                    self.add_elem(&g, term)
                } else {
                    self.sub_elem(&g, term)
                };
            }
            if d.ell % 4 == 3 {
                // i·g with i = ζ_4
                self.mul_elem(&monomials[n / 4], &g)
            } else {
                g
            }
        };
        let half = if d.exponent.is_multiple_of(2) {
            d.exponent / 2
        } else {
            (d.exponent - 1) / 2
        };
        let scale = BigRational::from_integer(BigInt::from(d.ell).pow(half));
        for c in root_ell.iter_mut() {
            *c *= &scale;
        }
        root_ell
    }

    pub fn conductor(&self) -> u64 {
        self.0.conductor
    }

    /// Residue cardinality q.
    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn residue_prime(&self) -> u64 {
        self.0.ell
    }

    /// True when √q had to be adjoined to Q(ζ_N).
    pub fn sqrt_adjoined(&self) -> bool {
        self.0.adjoined
    }

    /// Degree of the field over Q.
    pub fn degree(&self) -> usize {
        self.0.phi * if self.0.adjoined { 2 } else { 1 }
    }

    pub(crate) fn phi(&self) -> usize {
        self.0.phi
    }

    pub(crate) fn zero_elem(&self) -> Elem {
        vec![BigRational::zero(); self.degree()]
    }

    pub(crate) fn one_elem(&self) -> Elem {
        self.rational_elem(BigRational::one())
    }

    pub(crate) fn rational_elem(&self, r: BigRational) -> Elem {
        let mut e = self.zero_elem();
        e[0] = r;
        e
    }

    pub(crate) fn int_elem(&self, n: i64) -> Elem {
        self.rational_elem(rat(n))
    }

    /// q^k as a field element, for any integer k.
    pub(crate) fn q_pow_elem(&self, k: i64) -> Elem {
        self.rational_elem(q_pow(self.0.q, k))
    }

    pub(crate) fn z_pow_elem(&self, k: i64) -> Elem {
        let n = self.0.conductor as i64;
        let j = k.rem_euclid(n) as usize;
        let mut cur = vec![BigRational::zero(); self.0.phi];
        cur[0] = BigRational::one();
        for _ in 0..j {
            cur = self.0.times_z(&cur);
        }
        self.embed_cyclotomic(cur)
    }

    pub(crate) fn sqrt_q_elem(&self) -> Elem {
        self.0.sqrt_q.clone()
    }

    fn embed_cyclotomic(&self, mut c: Vec<BigRational>) -> Elem {
        if self.0.adjoined {
            c.resize(2 * self.0.phi, BigRational::zero());
        }
        c
    }

    pub(crate) fn is_zero_elem(a: &Elem) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    pub(crate) fn is_one_elem(&self, a: &Elem) -> bool {
        a[0].is_one() && a[1..].iter().all(|c| c.is_zero())
    }

    pub(crate) fn add_elem(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub(crate) fn sub_elem(&self, a: &Elem, b: &Elem) -> Elem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub(crate) fn neg_elem(&self, a: &Elem) -> Elem {
        a.iter().map(|x| -x).collect()
    }

    pub(crate) fn scale_elem(&self, a: &Elem, r: &BigRational) -> Elem {
        a.iter().map(|x| x * r).collect()
    }

    pub(crate) fn mul_elem(&self, a: &Elem, b: &Elem) -> Elem {
        if let Some(r) = Self::as_rational(a) {
            return self.scale_elem(b, r);
        }
        if let Some(r) = Self::as_rational(b) {
            return self.scale_elem(a, r);
        }
        let d = &self.0;
        let phi = d.phi;
        if !d.adjoined {
            return d.cyc_mul(a, b);
        }
        let (a0, a1) = a.split_at(phi);
        let (b0, b1) = b.split_at(phi);
        let q = rat(d.q as i64);
        let mut lo = d.cyc_mul(a0, b0);
        let hh = d.cyc_mul(a1, b1);
        for (x, y) in lo.iter_mut().zip(&hh) {
            *x += y * &q;
        }
        let mut hi = d.cyc_mul(a0, b1);
        let cross = d.cyc_mul(a1, b0);
        for (x, y) in hi.iter_mut().zip(&cross) {
            *x += y;
        }
        lo.extend(hi);
        lo
    }

    pub(crate) fn inv_elem(&self, a: &Elem) -> Option<Elem> {
        let d = &self.0;
        let phi = d.phi;
        if Self::is_zero_elem(a) {
            return None;
        }
        if let Some(r) = Self::as_rational(a) {
            let mut out = self.zero_elem();
            out[0] = r.recip();
            return Some(out);
        }
        if !d.adjoined {
            return d.cyc_inv(a);
        }
        // (a0 + a1 s)^{-1} = (a0 - a1 s) / (a0² - q a1²)
        let (a0, a1) = a.split_at(phi);
        let q = rat(d.q as i64);
        let mut norm = d.cyc_mul(a0, a0);
        let a1sq = d.cyc_mul(a1, a1);
        for (x, y) in norm.iter_mut().zip(&a1sq) {
            *x -= y * &q;
        }
        let ninv = d.cyc_inv(&norm)?;
        let mut out = d.cyc_mul(a0, &ninv);
        let neg_a1: Vec<BigRational> = a1.iter().map(|x| -x).collect();
        out.extend(d.cyc_mul(&neg_a1, &ninv));
        Some(out)
    }

    pub(crate) fn conj_elem(&self, a: &Elem) -> Elem {
        let d = &self.0;
        let phi = d.phi;
        let mut out = vec![BigRational::zero(); a.len()];
        for (block, chunk) in a.chunks(phi).enumerate() {
            for (i, c) in chunk.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (j, t) in d.conj_table[i].iter().enumerate() {
                    if !t.is_zero() {
                        out[block * phi + j] += c * t;
                    }
                }
            }
        }
        out
    }

    pub(crate) fn pow_elem(&self, a: &Elem, k: i64) -> Option<Elem> {
        let mut base = if k < 0 { self.inv_elem(a)? } else { a.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = self.one_elem();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_elem(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_elem(&base, &base);
            }
        }
        Some(acc)
    }

    /// Returns `a` as a rational number when it lies in Q.
    pub(crate) fn as_rational(a: &Elem) -> Option<&BigRational> {
        a[1..].iter().all(|c| c.is_zero()).then_some(&a[0])
    }

    pub(crate) fn wrap(&self, coords: Elem) -> CwScalar {
        debug_assert_eq!(coords.len(), self.degree());
        CwScalar {
            field: self.clone(),
            coords,
        }
    }

    pub fn zero(&self) -> CwScalar {
        self.wrap(self.zero_elem())
    }

    pub fn one(&self) -> CwScalar {
        self.wrap(self.one_elem())
    }

    pub fn from_int(&self, n: i64) -> CwScalar {
        self.wrap(self.int_elem(n))
    }

    pub fn from_rational(&self, r: BigRational) -> CwScalar {
        self.wrap(self.rational_elem(r))
    }

    /// The chosen primitive N-th root of unity ζ_N.
    pub fn zeta(&self) -> CwScalar {
        self.wrap(self.z_pow_elem(1))
    }

    pub fn zeta_pow(&self, k: i64) -> CwScalar {
        self.wrap(self.z_pow_elem(k))
    }

    /// The distinguished square root of q, fixed by conjugation.
    pub fn sqrt_q(&self) -> CwScalar {
        self.wrap(self.sqrt_q_elem())
    }

    /// q^k for an integer k.
    pub fn q_pow(&self, k: i64) -> CwScalar {
        self.wrap(self.q_pow_elem(k))
    }

    /// (√q)^k for an integer k.
    pub fn sqrt_q_pow(&self, k: i64) -> CwScalar {
        let s = self.sqrt_q_elem();
        self.wrap(self.pow_elem(&s, k).expect("sqrt q is nonzero"))
    }

    /// Builds a scalar from raw power-basis coordinates.
    pub fn from_coords(&self, coords: Vec<BigRational>) -> Result<CwScalar> {
        if coords.len() != self.degree() {
            return Err(Error::DimensionMismatch {
                what: "scalar coordinates",
                expected: self.degree(),
                found: coords.len(),
            });
        }
        Ok(self.wrap(coords))
    }

    /// Parses a term list such as `1/2 + -3*z^2 + 1*z*s`, with no field suffix.
    pub fn parse_terms(&self, text: &str) -> Result<CwScalar> {
        let mut acc = self.zero_elem();
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(Error::ParseScalar("empty scalar".into()));
        }
        for raw in trimmed.split('+') {
            let term = raw.trim();
            if term.is_empty() {
                return Err(Error::ParseScalar(format!("empty term in `{text}`")));
            }
            let value = self.parse_term(term)?;
            acc = self.add_elem(&acc, &value);
        }
        Ok(self.wrap(acc))
    }

    fn parse_term(&self, term: &str) -> Result<Elem> {
        let mut coef = BigRational::one();
        let mut z_exp: i64 = 0;
        let mut s_exp: i64 = 0;
        let mut saw_coef = false;
        for (idx, factor) in term.split('*').enumerate() {
            let f = factor.trim();
            if f.is_empty() {
                return Err(Error::ParseScalar(format!("malformed term `{term}`")));
            }
            let (sign, body) = match f.strip_prefix('-') {
                Some(rest) if idx == 0 => (-1, rest.trim()),
                _ => (1, f),
            };
            if body.starts_with('z') || body.starts_with('s') {
                let (name, exp) = match body.split_once('^') {
                    Some((n, e)) => (
                        n.trim(),
                        e.trim()
                            .parse::<i64>()
                            .map_err(|_| Error::ParseScalar(format!("bad exponent in `{term}`")))?,
                    ),
                    None => (body, 1),
                };
                match name {
                    "z" => z_exp += exp,
                    "s" => s_exp += exp,
                    _ => return Err(Error::ParseScalar(format!("unknown symbol `{name}`"))),
                }
                if sign < 0 {
                    coef = -coef;
                }
            } else {
                if saw_coef {
                    return Err(Error::ParseScalar(format!("two coefficients in `{term}`")));
                }
                saw_coef = true;
                let r = parse_rational(body)
                    .ok_or_else(|| Error::ParseScalar(format!("bad coefficient `{body}`")))?;
                coef *= r;
                if sign < 0 {
                    coef = -coef;
                }
            }
        }
        let z = self.z_pow_elem(z_exp);
        let s = self
            .pow_elem(&self.sqrt_q_elem(), s_exp)
            .expect("sqrt q is nonzero");
        Ok(self.scale_elem(&self.mul_elem(&z, &s), &coef))
    }

    /// Parses the full form `<terms> | N=<N>, q=<q>, sqrt=<0|1>`.
    pub fn parse_scalar(text: &str) -> Result<CwScalar> {
        let (terms, suffix) = text
            .split_once('|')
            .ok_or_else(|| Error::ParseScalar("missing `| N=.., q=.., sqrt=..` suffix".into()))?;
        let mut n = None;
        let mut q = None;
        let mut sq = None;
        for part in suffix.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::ParseScalar(format!("bad suffix entry `{part}`")))?;
            let v: u64 = v
                .trim()
                .parse()
                .map_err(|_| Error::ParseScalar(format!("bad value in `{part}`")))?;
            match k.trim() {
                "N" => n = Some(v),
                "q" => q = Some(v),
                "sqrt" => sq = Some(v),
                other => return Err(Error::ParseScalar(format!("unknown key `{other}`"))),
            }
        }
        let (n, q, sq) = match (n, q, sq) {
            (Some(n), Some(q), Some(sq)) => (n, q, sq),
            _ => return Err(Error::ParseScalar("suffix needs N, q and sqrt".into())),
        };
        let field = CycloWeilField::new(n, q)?;
        if sq != u64::from(field.sqrt_adjoined()) {
            return Err(Error::ParseScalar(format!(
                "sqrt flag {sq} does not match the presentation of Q(zeta_{n}, sqrt {q})"
            )));
        }
        field.parse_terms(terms)
    }

    pub(crate) fn format_terms(&self, a: &Elem) -> String {
        let phi = self.0.phi;
        let mut parts: Vec<String> = Vec::new();
        for (idx, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, with_s) = (idx % phi, idx >= phi);
            let mono = match (i, with_s) {
                (0, false) => String::new(),
                (0, true) => "s".to_string(),
                (1, false) => "z".to_string(),
                (1, true) => "z*s".to_string(),
                (k, false) => format!("z^{k}"),
                (k, true) => format!("z^{k}*s"),
            };
            if mono.is_empty() {
                parts.push(c.to_string());
            } else {
                parts.push(format!("{c}*{mono}"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl FieldData {
    fn times_z(&self, a: &[BigRational]) -> Vec<BigRational> {
        let phi = self.phi;
        let mut out = vec![BigRational::zero(); phi];
        let top = a[phi - 1].clone();
        for i in (1..phi).rev() {
            out[i] = a[i - 1].clone();
        }
        if phi >= 1 {
            out[0] = BigRational::zero();
        }
        if !top.is_zero() {
            // z^phi = -Σ c_i z^i
            for (i, c) in self.cyclo[..phi].iter().enumerate() {
                out[i] -= &top * c;
            }
        }
        out
    }

    /// Product in `Q[z]/Φ_N`, computed on integer numerators over a common
    /// denominator so that only the final coefficients are normalized.
    fn cyc_mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let phi = self.phi;
        let (an, ad) = common_denominator(a);
        let (bn, bd) = common_denominator(b);
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in an.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bn.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let (low, high) = prod.split_at_mut(phi);
        for (k, c) in high.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, t) in self.reduce_table[k].iter().enumerate() {
                if !t.is_zero() {
                    low[i] += c * t.numer();
                }
            }
        }
        let den = ad * bd;
        prod.truncate(phi);
        prod.into_iter()
            .map(|n| {
                if n.is_zero() {
                    BigRational::zero()
                } else {
                    BigRational::new(n, den.clone())
                }
            })
            .collect()
    }

    fn cyc_inv(&self, a: &[BigRational]) -> Option<Vec<BigRational>> {
        if self.phi == 1 {
            return (!a[0].is_zero()).then(|| vec![a[0].recip()]);
        }
        let inv = qpoly::inverse_mod(&a.to_vec(), &self.cyclo)?;
        let mut out = inv;
        out.resize(self.phi, BigRational::zero());
        Some(out)
    }
}

/// Integer numerators over the least common denominator.
fn common_denominator(a: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = a
        .iter()
        .filter(|c| !c.is_zero())
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = a
        .iter()
        .map(|c| {
            if c.is_zero() {
                BigInt::zero()
            } else {
                c.numer() * (&den / c.denom())
            }
        })
        .collect();
    (nums, den)
}

/// q^k as a rational, for any integer k.
pub(crate) fn q_pow(q: u64, k: i64) -> BigRational {
    let p = BigInt::from(q).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Parses `p`, `-p`, `p/r`.
pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

/// An element of Q(ζ_N, √q).
#[derive(Clone)]
pub struct CwScalar {
    field: CycloWeilField,
    coords: Elem,
}

impl CwScalar {
    pub fn field(&self) -> &CycloWeilField {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub(crate) fn elem(&self) -> &Elem {
        &self.coords
    }

    pub(crate) fn into_elem(self) -> Elem {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        CycloWeilField::is_zero_elem(&self.coords)
    }

    pub fn is_one(&self) -> bool {
        self.field.is_one_elem(&self.coords)
    }

    fn same_field(&self, other: &CwScalar) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields(
                self.field.to_string(),
                other.field.to_string(),
            ))
        }
    }

    pub fn try_add(&self, other: &CwScalar) -> Result<CwScalar> {
        self.same_field(other)?;
        Ok(self
            .field
            .wrap(self.field.add_elem(&self.coords, &other.coords)))
    }

    pub fn try_sub(&self, other: &CwScalar) -> Result<CwScalar> {
        self.same_field(other)?;
        Ok(self
            .field
            .wrap(self.field.sub_elem(&self.coords, &other.coords)))
    }

    pub fn try_mul(&self, other: &CwScalar) -> Result<CwScalar> {
        self.same_field(other)?;
        Ok(self
            .field
            .wrap(self.field.mul_elem(&self.coords, &other.coords)))
    }

    pub fn inv(&self) -> Result<CwScalar> {
        let e = self
            .field
            .inv_elem(&self.coords)
            .ok_or(Error::ZeroInverse)?;
        Ok(self.field.wrap(e))
    }

    pub fn neg(&self) -> CwScalar {
        self.field.wrap(self.field.neg_elem(&self.coords))
    }

    pub fn pow(&self, k: i64) -> Result<CwScalar> {
        let e = self
            .field
            .pow_elem(&self.coords, k)
            .ok_or(Error::ZeroInverse)?;
        Ok(self.field.wrap(e))
    }

    /// Complex conjugation: ζ_N ↦ ζ_N⁻¹, √q ↦ √q.
    pub fn conj(&self) -> CwScalar {
        self.field.wrap(self.field.conj_elem(&self.coords))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        CycloWeilField::as_rational(&self.coords)
    }

    /// The weight w with `a · conj(a) = q^w`, if there is one.
    pub fn weil_weight(&self) -> Result<Option<i64>> {
        if self.is_zero() {
            return Err(Error::ZeroScalar);
        }
        Ok(weil_weight_elem(&self.field, &self.coords))
    }

    /// Canonical term list without the field suffix.
    pub fn to_terms(&self) -> String {
        self.field.format_terms(&self.coords)
    }
}

pub(crate) fn weil_weight_elem(field: &CycloWeilField, a: &Elem) -> Option<i64> {
    let norm = field.mul_elem(a, &field.conj_elem(a));
    let r = CycloWeilField::as_rational(&norm)?;
    if !r.is_positive() {
        return None;
    }
    let q = BigInt::from(field.q());
    let (num, den) = (r.numer().clone(), r.denom().clone());
    let (mut big, sign) = if den.is_one() {
        (num, 1)
    } else if num.is_one() {
        (den, -1)
    } else {
        return None;
    };
    let mut w = 0i64;
    while big > BigInt::one() {
        let (quo, rem) = big.div_rem(&q);
        if !rem.is_zero() {
            return None;
        }
        big = quo;
        w += 1;
    }
    Some(sign * w)
}

impl PartialEq for CwScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}

impl Eq for CwScalar {}

impl PartialOrd for CwScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CwScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.conductor(), self.field.q(), &self.coords).cmp(&(
            other.field.conductor(),
            other.field.q(),
            &other.coords,
        ))
    }
}

impl fmt::Display for CwScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.to_terms(), self.field)
    }
}

impl fmt::Debug for CwScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_terms())
    }
}

impl FromStr for CwScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CycloWeilField::parse_scalar(s)
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl core::ops::$tr<&CwScalar> for &CwScalar {
            type Output = CwScalar;

            /// Panics when the operands live in different fields.
            fn $method(self, rhs: &CwScalar) -> CwScalar {
                self.$checked(rhs).expect("scalars from different fields")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl core::ops::Neg for &CwScalar {
    type Output = CwScalar;

    fn neg(self) -> CwScalar {
        CwScalar::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: u64, q: u64) -> CycloWeilField {
        CycloWeilField::new(n, q).unwrap()
    }

    #[test]
    fn presentation_degrees() {
        assert_eq!(f(1, 2).degree(), 2);
        assert!(f(1, 2).sqrt_adjoined());
        assert!(!f(5, 5).sqrt_adjoined());
        assert_eq!(f(5, 5).degree(), 4);
        assert!(!f(4, 9).sqrt_adjoined());
        assert_eq!(f(4, 9).sqrt_q(), f(4, 9).from_int(3));
        assert!(!f(8, 2).sqrt_adjoined());
        assert!(f(4, 2).sqrt_adjoined());
        assert!(f(3, 3).sqrt_adjoined());
        assert!(!f(12, 3).sqrt_adjoined());
        assert!(!f(12, 27).sqrt_adjoined());
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(CycloWeilField::new(0, 2).unwrap_err(), Error::ZeroConductor);
        assert_eq!(
            CycloWeilField::new(4, 1).unwrap_err(),
            Error::NotPrimePower(1)
        );
        assert_eq!(
            CycloWeilField::new(4, 6).unwrap_err(),
            Error::NotPrimePower(6)
        );
    }

    #[test]
    fn gauss_sum_square_by_expansion() {
        // (Σ_a (a|5) ζ_5^a)² = 5, expanded with field arithmetic on monomials.
        let k = f(5, 5);
        let mut g = k.zero();
        for a in 1..5i64 {
            let sym = legendre(a as u64, 5);
            let term = k.zeta_pow(a);
            g = if sym == 1 { &g + &term } else { &g - &term };
        }
        assert_eq!(&g * &g, k.from_int(5));
        assert_eq!(k.sqrt_q(), g);
    }

    #[test]
    fn sqrt_squares_to_q() {
        for &(n, q) in &[
            (1, 2),
            (8, 2),
            (8, 32),
            (12, 3),
            (20, 5),
            (3, 3),
            (7, 7),
            (28, 7),
            (4, 49),
            (9, 3),
        ] {
            let k = f(n, q);
            let s = k.sqrt_q();
            assert_eq!(&s * &s, k.from_int(q as i64), "N={n} q={q}");
            assert_eq!(s.conj(), s, "N={n} q={q}");
        }
    }

    #[test]
    fn basic_arithmetic() {
        let k = f(3, 2);
        let z = k.zeta();
        assert!((&z * &k.zeta_pow(2)).is_one());
        let s = k.sqrt_q();
        assert_eq!(
            s.inv().unwrap(),
            &s * &k.from_rational(BigRational::new(1.into(), 2.into()))
        );
        let k4 = f(4, 3);
        let i = k4.zeta();
        let one = k4.one();
        assert_eq!(&(&one + &i) * &(&one - &i), k4.from_int(2));
        assert_eq!(k.zero().inv().unwrap_err(), Error::ZeroInverse);
        assert!(matches!(
            k.one().try_add(&k4.one()),
            Err(Error::MixedFields(..))
        ));
    }

    #[test]
    fn conjugation_examples() {
        let k5 = f(5, 5);
        assert_eq!(k5.zeta().conj(), k5.zeta_pow(4));
        assert_eq!(k5.sqrt_q().conj(), k5.sqrt_q());
        let k8 = f(8, 3);
        let a = &k8.from_int(2) + &(&k8.from_int(3) * &k8.zeta());
        let b = &k8.from_int(2) + &(&k8.from_int(3) * &k8.zeta_pow(7));
        assert_eq!(a.conj(), b);
    }

    #[test]
    fn weil_weights() {
        let k = f(7, 3);
        assert_eq!(k.q_pow(-1).weil_weight().unwrap(), Some(-2));
        let a = &k.zeta() * &k.sqrt_q();
        assert_eq!(a.weil_weight().unwrap(), Some(1));
        assert_eq!(k.from_int(2).weil_weight().unwrap(), None);
        assert_eq!(k.zero().weil_weight().unwrap_err(), Error::ZeroScalar);
        assert_eq!(k.sqrt_q_pow(-3).weil_weight().unwrap(), Some(-3));
    }

    #[test]
    fn string_round_trip() {
        let k = f(8, 3);
        let a = &(&k.from_rational(BigRational::new((-3).into(), 2.into())) * &k.zeta_pow(3))
            + &(&k.sqrt_q() * &k.zeta());
        let text = a.to_string();
        assert_eq!(text, "-3/2*z^3 + 1*z*s | N=8, q=3, sqrt=1");
        let back: CwScalar = text.parse().unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_string(), text);
        assert_eq!(k.zero().to_string(), "0 | N=8, q=3, sqrt=1");
        assert!("1 | N=8, q=3, sqrt=0".parse::<CwScalar>().is_err());
        assert!("1 + | N=8, q=3, sqrt=1".parse::<CwScalar>().is_err());
    }

    #[test]
    fn parse_accepts_sqrt_symbol_in_collapsed_field() {
        let k = f(5, 5);
        assert_eq!(k.parse_terms("1*s").unwrap(), k.sqrt_q());
        assert_eq!(k.parse_terms("z^5").unwrap(), k.one());
        assert_eq!(k.parse_terms("-z").unwrap(), k.zeta().neg());
        assert_eq!(k.parse_terms("z^-1").unwrap(), k.zeta_pow(4));
    }
}
