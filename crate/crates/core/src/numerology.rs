//! Cohomology dimension bookkeeping for de Rham objects from abstract
//! inputs: rank, degree, Hodge-Tate weights and the `h⁰` counts of the object
//! and of its twisted dual.

use alloc::format;
use alloc::vec::Vec;

use crate::eps::HodgeTateData;
use crate::error::{Error, Result};
use crate::report::IdentityCheck;

/// Inputs for the dimension formulas. `h0` is `dim Fil⁰ D_crys^{φ=1}`, `h0_t`
/// is `dim D_crys^{φ=1}`, and the `dual` fields are the same counts for the
/// twisted dual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeRhamNumerology {
    d: usize,
    kdeg: usize,
    ht: HodgeTateData,
    h0: usize,
    h0_t: usize,
    h0_dual: usize,
    h0_dual_t: usize,
}

/// Dimensions produced by [`formulary`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormularyOutput {
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
    pub h0_t: i64,
    pub h1_t: i64,
    pub h2_t: i64,
    pub h1_e: i64,
    pub h1_f: i64,
    pub h1_g: i64,
    pub h1_over_f: i64,
    pub h1_over_g: i64,
}

fn bad(msg: impl Into<alloc::string::String>) -> Error {
    Error::Numerology(msg.into())
}

/// Rejects `h⁰` counts that contradict the weights: with only negative
/// weights `Fil⁰` vanishes, with only nonnegative weights it is everything.
fn check_side(ht: &HodgeTateData, h0: usize, h0_t: usize, bound: usize, side: &str) -> Result<()> {
    if h0 > h0_t {
        return Err(bad(format!("{side}: h0 = {h0} exceeds h0_t = {h0_t}")));
    }
    if h0_t > bound {
        return Err(bad(format!(
            "{side}: h0_t = {h0_t} exceeds [K:Q_p]·d = {bound}"
        )));
    }
    if ht.total() > 0 && ht.all_negative() && h0 != 0 {
        return Err(bad(format!(
            "{side}: all weights are negative but h0 = {h0}"
        )));
    }
    if ht.all_nonnegative() && h0 != h0_t {
        return Err(bad(format!(
            "{side}: all weights are nonnegative but h0 = {h0} differs from h0_t = {h0_t}"
        )));
    }
    let e = ht.count_negative() as i64 + h0 as i64 - h0_t as i64;
    if e < 0 {
        return Err(bad(format!(
            "{side}: h1_e = d_- + h0 - h0_t = {e} is negative"
        )));
    }
    Ok(())
}

impl DeRhamNumerology {
    pub fn new(
        d: usize,
        kdeg: usize,
        ht: HodgeTateData,
        h0: usize,
        h0_t: usize,
        h0_dual: usize,
        h0_dual_t: usize,
    ) -> Result<Self> {
        if d == 0 || kdeg == 0 {
            return Err(bad("rank and degree must be positive"));
        }
        if ht.total() != kdeg * d {
            return Err(bad(format!(
                "Hodge-Tate total {} differs from [K:Q_p]·d = {}",
                ht.total(),
                kdeg * d
            )));
        }
        let bound = kdeg * d;
        check_side(&ht, h0, h0_t, bound, "object")?;
        check_side(&ht.dual_twist(), h0_dual, h0_dual_t, bound, "twisted dual")?;
        Ok(DeRhamNumerology {
            d,
            kdeg,
            ht,
            h0,
            h0_t,
            h0_dual,
            h0_dual_t,
        })
    }

    /// Numerology of the twisted dual, with weights `i ↦ −1 − i`.
    pub fn dual(&self) -> DeRhamNumerology {
        DeRhamNumerology {
            d: self.d,
            kdeg: self.kdeg,
            ht: self.ht.dual_twist(),
            h0: self.h0_dual,
            h0_t: self.h0_dual_t,
            h0_dual: self.h0,
            h0_dual_t: self.h0_t,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kdeg(&self) -> usize {
        self.kdeg
    }

    pub fn ht(&self) -> &HodgeTateData {
        &self.ht
    }

    pub fn h0(&self) -> usize {
        self.h0
    }

    pub fn h0_t(&self) -> usize {
        self.h0_t
    }

    pub fn h0_dual(&self) -> usize {
        self.h0_dual
    }

    pub fn h0_dual_t(&self) -> usize {
        self.h0_dual_t
    }

    /// `d_−`: number of negative weights with multiplicity.
    pub fn d_minus(&self) -> usize {
        self.ht.count_negative()
    }

    /// `d_+`: number of nonnegative weights with multiplicity.
    pub fn d_plus(&self) -> usize {
        self.ht.total() - self.ht.count_negative()
    }

    fn rank_degree(&self) -> i64 {
        (self.kdeg * self.d) as i64
    }
}

/// Dimension formulas for `D` given the numerology of `D` and of `D^*(1)`.
pub fn formulary(n: &DeRhamNumerology, n_dual: &DeRhamNumerology) -> Result<FormularyOutput> {
    if n_dual.d != n.d || n_dual.kdeg != n.kdeg {
        return Err(bad("dual has a different rank or degree"));
    }
    if n_dual.ht != n.ht.dual_twist() {
        return Err(bad("dual weights are not i -> -1 - i"));
    }
    if n_dual.h0 != n.h0_dual
        || n_dual.h0_t != n.h0_dual_t
        || n_dual.h0_dual != n.h0
        || n_dual.h0_dual_t != n.h0_t
    {
        return Err(bad("h0 counts of the dual disagree"));
    }
    let kd = n.rank_degree();
    let h0 = n.h0 as i64;
    let h0_t = n.h0_t as i64;
    let h2 = n_dual.h0 as i64;
    let d_minus = n.d_minus() as i64;
    let h1 = kd + h0 + h2;
    let h1_f = d_minus + h0;
    let h1_g = d_minus + h0 + n_dual.h0_t as i64;
    Ok(FormularyOutput {
        h0,
        h1,
        h2,
        h0_t,
        h1_t: kd + h0_t,
        h2_t: 0,
        h1_e: d_minus + h0 - h0_t,
        h1_f,
        h1_g,
        h1_over_f: h1 - h1_f,
        h1_over_g: h1 - h1_g,
    })
}

/// Euler characteristics and the duality `h² = h⁰` of the dual.
pub fn euler_tate_check(out: &FormularyOutput, n: &DeRhamNumerology) -> Vec<IdentityCheck> {
    let kd = n.rank_degree();
    alloc::vec![
        IdentityCheck::equal("Euler characteristic", &(out.h0 - out.h1 + out.h2), &-kd),
        IdentityCheck::equal("Tate duality h2", &out.h2, &(n.h0_dual as i64)),
        IdentityCheck::equal(
            "Euler characteristic after inverting t",
            &(out.h0_t - out.h1_t + out.h2_t),
            &-kd,
        ),
    ]
}

/// Identities linking the outputs for `D` and for `D^*(1)`.
pub fn duality_checks(n: &DeRhamNumerology) -> Result<Vec<IdentityCheck>> {
    let dual = n.dual();
    let a = formulary(n, &dual)?;
    let b = formulary(&dual, n)?;
    let chain = a.h1_e <= a.h1_f && a.h1_f <= a.h1_g && a.h1_g <= a.h1 && a.h1_e >= 0;
    let mut out = euler_tate_check(&a, n);
    out.push(IdentityCheck::equal(
        "h1_f duality",
        &(a.h1_f + b.h1_f),
        &a.h1,
    ));
    out.push(IdentityCheck::equal(
        "h1_e duality",
        &a.h1_e,
        &(b.h1 - b.h1_g),
    ));
    out.push(IdentityCheck {
        name: "h1_e <= h1_f <= h1_g <= h1",
        lhs: format!("{} {} {} {}", a.h1_e, a.h1_f, a.h1_g, a.h1),
        rhs: "increasing".into(),
        passed: chain,
    });
    Ok(out)
}

/// Consequences of a Panchishkin sequence `D⁺ → D → D⁻`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PanchishkinSequence {
    /// `h⁰((D⁺)^*(1)[1/t]) + h⁰((D⁻)^*(1)[1/t]) − h⁰(D^*(1)[1/t])`.
    pub dim_x: i64,
    /// Whether `h⁰(D[1/t]) = h⁰(D^*(1)[1/t]) = 0`; the remaining fields are
    /// `None` otherwise.
    pub lemma_applies: bool,
    /// `h⁰(D⁻[1/t]) = h⁰(D⁻) = h⁰((D⁺)^*(1)[1/t])`.
    pub h0_identity: Option<bool>,
    /// `h¹(D⁺) = h⁰(D⁻) + h¹_f(D)`.
    pub h1f_surjectivity: Option<bool>,
}

pub fn panchishkin_sequence(
    nplus: &DeRhamNumerology,
    nminus: &DeRhamNumerology,
    n: &DeRhamNumerology,
) -> Result<PanchishkinSequence> {
    if !nplus.ht.all_negative() {
        return Err(bad("plus part has a nonnegative Hodge-Tate weight"));
    }
    if !nminus.ht.all_nonnegative() {
        return Err(bad("minus part has a negative Hodge-Tate weight"));
    }
    if nplus.ht.union(&nminus.ht) != n.ht {
        return Err(bad("weights of the parts do not add up"));
    }
    if nplus.kdeg != n.kdeg || nminus.kdeg != n.kdeg || nplus.d + nminus.d != n.d {
        return Err(bad("ranks or degrees of the parts do not add up"));
    }
    let dim_x = nplus.h0_dual_t as i64 + nminus.h0_dual_t as i64 - n.h0_dual_t as i64;
    if dim_x < 0 {
        return Err(bad(format!("dim X = {dim_x} is negative")));
    }
    let lemma_applies = n.h0_t == 0 && n.h0_dual_t == 0;
    if !lemma_applies {
        return Ok(PanchishkinSequence {
            dim_x,
            lemma_applies,
            h0_identity: None,
            h1f_surjectivity: None,
        });
    }
    let h0_identity = nminus.h0_t == nminus.h0 && nminus.h0 == nplus.h0_dual_t;
    let out = formulary(n, &n.dual())?;
    let plus = formulary(nplus, &nplus.dual())?;
    let h1f_surjectivity = plus.h1 == nminus.h0 as i64 + out.h1_f;
    Ok(PanchishkinSequence {
        dim_x,
        lemma_applies,
        h0_identity: Some(h0_identity),
        h1f_surjectivity: Some(h1f_surjectivity),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(d: usize, ht: &[(i64, usize)], h: [usize; 4]) -> DeRhamNumerology {
        DeRhamNumerology::new(
            d,
            1,
            HodgeTateData::new(ht.iter().copied()),
            h[0],
            h[1],
            h[2],
            h[3],
        )
        .unwrap()
    }

    #[test]
    fn trivial_and_cyclotomic() {
        let triv = num(1, &[(0, 1)], [1, 1, 0, 0]);
        let out = formulary(&triv, &triv.dual()).unwrap();
        assert_eq!((out.h1, out.h1_f), (2, 1));
        let cyc = triv.dual();
        let out = formulary(&cyc, &triv).unwrap();
        assert_eq!((out.h1, out.h1_f, out.h1_g), (2, 1, 2));
        assert!(euler_tate_check(&out, &cyc).iter().all(|c| c.passed));
    }

    #[test]
    fn generic_rank_two() {
        let n = num(2, &[(-1, 1), (0, 1)], [0, 0, 0, 0]);
        let out = formulary(&n, &n.dual()).unwrap();
        assert_eq!((out.h1, out.h1_e, out.h1_f, out.h1_g), (2, 1, 1, 1));
        assert_eq!(out.h0 - out.h1 + out.h2, -2);
    }

    #[test]
    fn inconsistent_inputs_are_rejected() {
        let ht = HodgeTateData::new([(0, 1)]);
        assert!(DeRhamNumerology::new(1, 1, ht.clone(), 1, 0, 0, 0).is_err());
        assert!(DeRhamNumerology::new(2, 1, ht.clone(), 0, 0, 0, 0).is_err());
        assert!(DeRhamNumerology::new(1, 1, HodgeTateData::new([(-1, 1)]), 1, 1, 0, 0).is_err());
        let n = num(1, &[(0, 1)], [1, 1, 0, 0]);
        assert!(formulary(&n, &n).is_err());
    }

    #[test]
    fn split_multiplicative_sequence() {
        let n = num(2, &[(-1, 1), (0, 1)], [0, 0, 0, 0]);
        let plus = num(1, &[(-1, 1)], [0, 0, 1, 1]);
        let minus = num(1, &[(0, 1)], [1, 1, 0, 0]);
        let s = panchishkin_sequence(&plus, &minus, &n).unwrap();
        assert_eq!(s.dim_x, 1);
        assert_eq!(s.h0_identity, Some(true));
        assert_eq!(s.h1f_surjectivity, Some(true));
        let plus_out = formulary(&plus, &plus.dual()).unwrap();
        assert_eq!(plus_out.h1, 2);
    }

    #[test]
    fn ordinary_sequence() {
        let n = num(2, &[(-1, 1), (0, 1)], [0, 0, 0, 0]);
        let plus = num(1, &[(-1, 1)], [0, 0, 0, 0]);
        let minus = num(1, &[(0, 1)], [0, 0, 0, 0]);
        let s = panchishkin_sequence(&plus, &minus, &n).unwrap();
        assert_eq!(
            (s.dim_x, s.h0_identity, s.h1f_surjectivity),
            (0, Some(true), Some(true))
        );
    }

    #[test]
    fn sign_conditions_on_parts() {
        let n = num(2, &[(0, 2)], [0, 0, 0, 0]);
        let zero = num(1, &[(0, 1)], [0, 0, 0, 0]);
        assert!(panchishkin_sequence(&zero, &zero, &n).is_err());
    }
}
