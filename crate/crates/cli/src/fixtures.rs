//! Builders for the shipped example files. Places above `p` live over
//! `Q(ζ_4, √5)`, places away from `p` over `Q(√3)` or `Q(ζ_4, √3)`.

use wdparity_core::global::{GlobalPointDatum, Place, PlaceKind};
use wdparity_core::symplectic::{hyperbolic_pair, special_symplectic};
use wdparity_core::{
    CycloWeilField, DeRhamNumerology, HodgeTateData, Matrix, PstLocalDatum, Result, Sign,
    SympPairing, WdRep,
};

use crate::datum::Parsed;

fn p_field() -> Result<CycloWeilField> {
    CycloWeilField::new(4, 5)
}

fn elliptic_ht() -> (HodgeTateData, HodgeTateData, HodgeTateData) {
    (
        HodgeTateData::new([(-1, 1), (0, 1)]),
        HodgeTateData::new([(-1, 1)]),
        HodgeTateData::new([(0, 1)]),
    )
}

fn above_p(label: &str, pairing: SympPairing, lagrangian: Matrix) -> Result<Place> {
    let (ht, plus, minus) = elliptic_ht();
    let numerology = DeRhamNumerology::new(2, 1, ht.clone(), 0, 0, 0, 0)?;
    let datum = PstLocalDatum::new(pairing, lagrangian, ht, plus, minus, None, 1)?;
    Ok(Place {
        label: label.into(),
        kind: PlaceKind::AboveP { datum, numerology },
    })
}

/// `unr(±1) ⊗ sp(2)` at `p`: split for `+`, nonsplit for `−`.
pub fn multiplicative_at_p(label: &str, sign: Sign) -> Result<Place> {
    let (pairing, lag) = special_symplectic(&p_field()?, 2, sign)?;
    above_p(label, pairing, lag)
}

/// `unr(α) ⊕ unr(α)^*(1)` at `p` with `α = ζ_4/√q`, Lagrangian `unr(α)`.
pub fn ordinary_at_p(label: &str) -> Result<Place> {
    let f = p_field()?;
    let alpha = f.zeta().try_mul(&f.sqrt_q_pow(-1))?;
    let (pairing, lag) = hyperbolic_pair(&WdRep::make_unr(&alpha)?)?;
    above_p(label, pairing, lag)
}

/// `unr(±1) ⊗ sp(2)` at a place away from `p`.
pub fn multiplicative_away(label: &str, sign: Sign) -> Result<Place> {
    let (pairing, _) = special_symplectic(&CycloWeilField::new(1, 3)?, 2, sign)?;
    Ok(Place {
        label: label.into(),
        kind: PlaceKind::Away {
            pairing,
            declared_ramified: Some(true),
        },
    })
}

/// Good reduction away from `p`: a hyperbolic plane on `unr(ζ_4/√q)`.
pub fn good_away(label: &str) -> Result<Place> {
    let f = CycloWeilField::new(4, 3)?;
    let alpha = f.zeta().try_mul(&f.sqrt_q_pow(-1))?;
    let (pairing, _) = hyperbolic_pair(&WdRep::make_unr(&alpha)?)?;
    Ok(Place {
        label: label.into(),
        kind: PlaceKind::Away {
            pairing,
            declared_ramified: Some(false),
        },
    })
}

/// `χ ⊗ sp(2)` away from `p` with `χ` ramified quadratic and
/// `χ(Art(−1)) = −1`.
pub fn twisted_special_away(label: &str) -> Result<Place> {
    let f = CycloWeilField::new(1, 3)?;
    let (s, _) = special_symplectic(&f, 2, Sign::Plus)?;
    let id = Matrix::identity(&f, 2);
    let rep = WdRep::new(
        s.rep().frobenius().clone(),
        s.rep().monodromy().clone(),
        vec![id.clone(), id.neg()],
        1,
    )?;
    Ok(Place {
        label: label.into(),
        kind: PlaceKind::Away {
            pairing: SympPairing::validate(rep, s.gram().clone())?,
            declared_ramified: Some(true),
        },
    })
}

fn over_q(places: Vec<Place>, h1f: i64) -> GlobalPointDatum {
    GlobalPointDatum {
        degree: 1,
        r2: 0,
        dim: 2,
        places,
        h1f: Some(h1f),
    }
}

/// Split multiplicative at `p` and at `ℓ`: `ε = −1`, `h¹_f = 1`.
pub fn split_mult() -> Result<GlobalPointDatum> {
    Ok(over_q(
        vec![
            multiplicative_at_p("5", Sign::Plus)?,
            multiplicative_away("3", Sign::Plus)?,
        ],
        1,
    ))
}

/// Nonsplit at `p`, split at `ℓ`: `ε = +1`.
pub fn nonsplit_mult() -> Result<GlobalPointDatum> {
    Ok(over_q(
        vec![
            multiplicative_at_p("5", Sign::Minus)?,
            multiplicative_away("3", Sign::Plus)?,
        ],
        0,
    ))
}

/// Ordinary at `p`, multiplicative at `ℓ` with the given sign.
pub fn good_ordinary(at_l: Sign) -> Result<GlobalPointDatum> {
    let h1f = if at_l == Sign::Plus { 0 } else { 1 };
    Ok(over_q(
        vec![ordinary_at_p("5")?, multiplicative_away("3", at_l)?],
        h1f,
    ))
}

/// Ordinary at `p`, good at `ℓ`: `ε = −1`.
pub fn good_everywhere() -> Result<GlobalPointDatum> {
    Ok(over_q(vec![ordinary_at_p("5")?, good_away("3")?], 1))
}

/// Totally real field of the given degree with `p` split completely and an
/// ordinary datum at each place above `p`, so `d⁻ = −degree`.
pub fn totally_real(degree: u32) -> Result<GlobalPointDatum> {
    let places = (1..=degree)
        .map(|i| ordinary_at_p(&format!("5.{i}")))
        .collect::<Result<_>>()?;
    Ok(GlobalPointDatum {
        degree,
        r2: 0,
        dim: 2,
        places,
        h1f: Some(i64::from(degree % 2)),
    })
}

/// `Q_p`: `h⁰ = 1`, Frobenius fixes `D_crys`.
pub fn trivial_numerology() -> Result<DeRhamNumerology> {
    DeRhamNumerology::new(1, 1, HodgeTateData::new([(0, 1)]), 1, 1, 0, 0)
}

/// `Q_p(1)`, the twisted dual of `Q_p`.
pub fn cyclotomic_numerology() -> Result<DeRhamNumerology> {
    Ok(trivial_numerology()?.dual())
}

/// Two specializations sharing ramification and signs away from `p`.
pub fn family_consistent() -> Result<Vec<GlobalPointDatum>> {
    Ok(vec![split_mult()?, good_ordinary(Sign::Plus)?])
}

/// The consistent family with the sign at `ℓ` flipped in one member.
pub fn family_corrupted() -> Result<Vec<GlobalPointDatum>> {
    let mut flipped = good_ordinary(Sign::Minus)?;
    flipped.h1f = Some(0);
    Ok(vec![split_mult()?, flipped])
}

/// Every shipped example as `(file name, contents)`.
pub fn all() -> Result<Vec<(String, Parsed)>> {
    let mut out = vec![
        ("split_mult.datum".to_string(), Parsed::Point(split_mult()?)),
        (
            "nonsplit_mult.datum".into(),
            Parsed::Point(nonsplit_mult()?),
        ),
        (
            "good_ordinary.datum".into(),
            Parsed::Point(good_ordinary(Sign::Plus)?),
        ),
        (
            "good_ordinary_nonsplit.datum".into(),
            Parsed::Point(good_ordinary(Sign::Minus)?),
        ),
        (
            "good_everywhere.datum".into(),
            Parsed::Point(good_everywhere()?),
        ),
        (
            "twisted_special.datum".into(),
            Parsed::Local(twisted_special_away("3")?),
        ),
        ("qp.num".into(), Parsed::Numerology(trivial_numerology()?)),
        (
            "qp1.num".into(),
            Parsed::Numerology(cyclotomic_numerology()?),
        ),
        (
            "family_consistent.datum".into(),
            Parsed::Family(family_consistent()?),
        ),
        (
            "family_corrupted.datum".into(),
            Parsed::Family(family_corrupted()?),
        ),
    ];
    for degree in 1..=5 {
        out.push((
            format!("totally_real_{degree}.datum"),
            Parsed::Point(totally_real(degree)?),
        ));
    }
    Ok(out)
}
