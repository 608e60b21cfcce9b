//! Univariate polynomials with coefficients in a cyclotomic Weil field.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::field::{CycloWeilField, Elem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct KPoly {
    field: CycloWeilField,
    /// Constant term first; no trailing zeros.
    coeffs: Vec<Elem>,
}

impl KPoly {
    pub fn new(field: &CycloWeilField, mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(CycloWeilField::is_zero_elem) {
            coeffs.pop();
        }
        KPoly {
            field: field.clone(),
            coeffs,
        }
    }

    /// `x − r`.
    pub fn linear(field: &CycloWeilField, r: &Elem) -> Self {
        Self::new(field, vec![field.neg_elem(r), field.one_elem()])
    }

    pub fn field(&self) -> &CycloWeilField {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let f = &self.field;
        let mut acc = f.zero_elem();
        for c in self.coeffs.iter().rev() {
            acc = f.add_elem(&f.mul_elem(&acc, x), c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.scale_elem(c, &BigRational::from_integer(BigInt::from(i))))
            .collect();
        Self::new(f, coeffs)
    }

    pub fn monic(&self) -> Self {
        let f = &self.field;
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = f.inv_elem(lead).expect("leading coefficient is nonzero");
                let coeffs = self.coeffs.iter().map(|c| f.mul_elem(c, &inv)).collect();
                Self::new(f, coeffs)
            }
        }
    }

    pub fn divrem(&self, d: &KPoly) -> (KPoly, KPoly) {
        let f = &self.field;
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        if r.len() <= dd {
            return (Self::new(f, Vec::new()), self.clone());
        }
        let lead_inv = f.inv_elem(d.coeffs.last().unwrap()).unwrap();
        let mut q = vec![f.zero_elem(); r.len() - dd];
        for k in (0..r.len() - dd).rev() {
            let c = f.mul_elem(&r[k + dd], &lead_inv);
            if CycloWeilField::is_zero_elem(&c) {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k + j] = f.sub_elem(&r[k + j], &f.mul_elem(&c, dj));
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(f, q), Self::new(f, r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &KPoly) -> KPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Monic squarefree part `p / gcd(p, p')`.
    pub fn squarefree(&self) -> KPoly {
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &Elem) -> usize {
        let lin = Self::linear(&self.field, r);
        let mut p = self.clone();
        let mut m = 0;
        while !p.is_zero() {
            let (q, rem) = p.divrem(&lin);
            if !rem.is_zero() {
                break;
            }
            p = q;
            m += 1;
        }
        m
    }
}
