//! Global bookkeeping: local signs at every place of `S`, the archimedean
//! sign, the global sign, and the shifted quantities that stay constant in
//! families.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::eps::{eps_sign, h0_dminus, panchishkin_eps, PstLocalDatum};
use crate::error::{Error, Result};
use crate::numerology::DeRhamNumerology;
use crate::report::CheckItem;
use crate::sign::Sign;
use crate::symplectic::SympPairing;

/// Local data at one finite place.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum PlaceKind {
    /// A place not above `p`; `declared_ramified` overrides the status read
    /// off the representation when present.
    Away {
        pairing: SympPairing,
        declared_ramified: Option<bool>,
    },
    /// A place above `p`.
    AboveP {
        datum: PstLocalDatum,
        numerology: DeRhamNumerology,
    },
}

#[derive(Clone, Debug)]
pub struct Place {
    pub label: String,
    pub kind: PlaceKind,
}

impl Place {
    pub fn is_above_p(&self) -> bool {
        matches!(self.kind, PlaceKind::AboveP { .. })
    }

    /// Ramification status used for the sign: declared when given, else read
    /// off the Weil-Deligne representation.
    pub fn is_ramified(&self) -> bool {
        match &self.kind {
            PlaceKind::Away {
                pairing,
                declared_ramified,
            } => declared_ramified.unwrap_or_else(|| pairing.rep().is_ramified()),
            PlaceKind::AboveP { datum, .. } => datum.pairing().rep().is_ramified(),
        }
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            PlaceKind::Away { pairing, .. } => pairing.dim(),
            PlaceKind::AboveP { datum, .. } => datum.pairing().dim(),
        }
    }
}

/// Places of `S` plus the archimedean invariants of the number field.
#[derive(Clone, Debug)]
pub struct GlobalPointDatum {
    /// `[F:Q]`.
    pub degree: u32,
    /// Number of complex places.
    pub r2: u32,
    pub dim: usize,
    pub places: Vec<Place>,
    /// Dimension of the Bloch-Kato Selmer group, when known.
    pub h1f: Option<i64>,
}

/// Sign at one place with the count `h⁰(D⁻)` for places above `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceSign {
    pub label: String,
    pub above_p: bool,
    pub ramified: bool,
    pub sign: Sign,
    pub h0_minus: usize,
}

#[derive(Clone, Debug)]
pub struct ParityReport {
    pub places: Vec<PlaceSign>,
    pub eps_infinity: Sign,
    /// `Σ_{v|p} d⁻(V_v)`.
    pub dminus_total: i64,
    pub eps: Sign,
    /// `Σ_{v|p} h⁰(D_v⁻)`.
    pub h0_minus_total: usize,
    pub eps_modified: Sign,
    pub h1f: Option<i64>,
    pub h1f_modified: Option<i64>,
    /// `ε(V)·(−1)^{h¹_f}`.
    pub invariant: Option<Sign>,
    pub log: Vec<CheckItem>,
}

/// `(−1)^{r₂·d/2} · (−1)^{d⁻}`.
pub fn eps_infinity(r2: u32, d: usize, dminus_total: i64) -> Result<Sign> {
    if d % 2 == 1 {
        return Err(Error::Precondition(format!("global dimension {d} is odd")));
    }
    Ok(Sign::parity(r2 as i64 * (d / 2) as i64) * Sign::parity(dminus_total))
}

fn labelled(label: &str, item: CheckItem) -> CheckItem {
    CheckItem {
        detail: if item.detail.is_empty() {
            label.to_string()
        } else {
            format!("{label}: {}", item.detail)
        },
        ..item
    }
}

/// Every structural condition on the datum, one log line each.
pub fn validate_datum(g: &GlobalPointDatum) -> Vec<CheckItem> {
    let mut log = Vec::new();
    log.push(CheckItem::new(
        "global dimension even",
        g.dim.is_multiple_of(2),
        format!("d = {}", g.dim),
    ));
    log.push(CheckItem::new(
        "archimedean invariants",
        2 * g.r2 <= g.degree && g.degree > 0,
        format!("[F:Q] = {}, r2 = {}", g.degree, g.r2),
    ));
    let mut labels: Vec<&str> = g.places.iter().map(|p| p.label.as_str()).collect();
    labels.sort_unstable();
    let before = labels.len();
    labels.dedup();
    log.push(CheckItem::new(
        "distinct place labels",
        labels.len() == before,
        "",
    ));
    for place in &g.places {
        let label = place.label.as_str();
        log.push(labelled(
            label,
            CheckItem::new(
                "dimension",
                place.dim() == g.dim,
                format!("local {} vs global {}", place.dim(), g.dim),
            ),
        ));
        match &place.kind {
            PlaceKind::Away {
                pairing,
                declared_ramified,
            } => {
                let computed = pairing.rep().is_ramified();
                if place.is_ramified() {
                    let purity = pairing.rep().is_pure(-1);
                    log.push(labelled(
                        label,
                        CheckItem::new("purity", purity.holds(), format!("{purity:?}")),
                    ));
                }
                if let Some(declared) = declared_ramified {
                    log.push(labelled(
                        label,
                        CheckItem::new(
                            "ramification flag",
                            *declared == computed,
                            format!("declared {declared}, representation gives {computed}"),
                        ),
                    ));
                }
            }
            PlaceKind::AboveP { datum, numerology } => {
                for item in datum.checks() {
                    log.push(labelled(label, item));
                }
                let matches = numerology.ht() == datum.ht()
                    && numerology.d() == datum.pairing().dim()
                    && numerology.kdeg() == datum.kdeg();
                log.push(labelled(
                    label,
                    CheckItem::new("numerology matches local datum", matches, ""),
                ));
            }
        }
    }
    log
}

fn local_sign(place: &Place) -> Result<(Sign, usize)> {
    match &place.kind {
        PlaceKind::AboveP { datum, .. } => Ok((panchishkin_eps(datum)?, h0_dminus(datum))),
        PlaceKind::Away { pairing, .. } => {
            if place.is_ramified() {
                Ok((eps_sign(pairing)?, 0))
            } else {
                Ok((Sign::Plus, 0))
            }
        }
    }
}

/// Local signs, archimedean sign, global sign and the shifted quantities.
pub fn global_eps(g: &GlobalPointDatum) -> Result<ParityReport> {
    let log = validate_datum(g);
    if let Some(bad) = log.iter().find(|c| !c.passed) {
        return Err(Error::Precondition(format!("{}: {}", bad.name, bad.detail)));
    }
    let mut places = Vec::new();
    let mut dminus_total = 0;
    for place in &g.places {
        let (sign, h0_minus) = local_sign(place).map_err(|e| Error::at_place(&place.label, e))?;
        if let PlaceKind::AboveP { datum, .. } = &place.kind {
            dminus_total += datum.ht().d_minus_weighted();
        }
        places.push(PlaceSign {
            label: place.label.clone(),
            above_p: place.is_above_p(),
            ramified: place.is_ramified(),
            sign,
            h0_minus,
        });
    }
    let eps_infinity = eps_infinity(g.r2, g.dim, dminus_total)?;
    let eps = eps_infinity * places.iter().map(|p| p.sign).product::<Sign>();
    let h0_minus_total: usize = places.iter().map(|p| p.h0_minus).sum();
    let eps_modified = Sign::parity(h0_minus_total as i64) * eps;
    Ok(ParityReport {
        places,
        eps_infinity,
        dminus_total,
        eps,
        h0_minus_total,
        eps_modified,
        h1f: g.h1f,
        h1f_modified: g.h1f.map(|h| h + h0_minus_total as i64),
        invariant: g.h1f.map(|h| eps * Sign::parity(h)),
        log,
    })
}

/// [`global_eps`] plus the check that the shift leaves `ε·(−1)^{h¹_f}`
/// unchanged.
pub fn modified_invariants(g: &GlobalPointDatum) -> Result<ParityReport> {
    let mut report = global_eps(g)?;
    if let (Some(inv), Some(h)) = (report.invariant, report.h1f_modified) {
        let shifted = report.eps_modified * Sign::parity(h);
        let item = CheckItem::new(
            "shifted invariant",
            inv == shifted,
            format!("{inv} vs {shifted}"),
        );
        let passed = item.passed;
        report.log.push(item);
        if !passed {
            return Err(Error::IdentityFailure("shifted invariant"));
        }
    }
    Ok(report)
}

/// Consequences of the members being specializations of one family: a
/// constant invariant `ε·(−1)^{h¹_f}`, and matching ramification and signs
/// at places away from `p`.
pub fn family_constancy_check(members: &[GlobalPointDatum]) -> Vec<CheckItem> {
    let mut log = Vec::new();
    log.push(CheckItem::new(
        "at least two members",
        members.len() >= 2,
        format!("{} members", members.len()),
    ));
    let reports: Vec<Result<ParityReport>> = members.iter().map(modified_invariants).collect();
    let mut invariants = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        match r {
            Ok(rep) => match rep.invariant {
                Some(s) => invariants.push(s),
                None => log.push(CheckItem::new(
                    "h1f supplied",
                    false,
                    format!("member {i} has no h1f"),
                )),
            },
            Err(e) => log.push(CheckItem::new(
                "member evaluates",
                false,
                format!("member {i}: {e}"),
            )),
        }
    }
    let constant = invariants.windows(2).all(|w| w[0] == w[1]);
    log.push(CheckItem::new(
        "invariant constant",
        constant && invariants.len() == members.len(),
        invariants
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", "),
    ));

    let mut status: BTreeMap<&str, Vec<bool>> = BTreeMap::new();
    for m in members {
        for p in m.places.iter().filter(|p| !p.is_above_p()) {
            status
                .entry(p.label.as_str())
                .or_default()
                .push(p.is_ramified());
        }
    }
    let mut pattern_ok = true;
    let mut detail = Vec::new();
    for (label, flags) in &status {
        let same = flags.len() == members.len() && flags.windows(2).all(|w| w[0] == w[1]);
        if !same {
            pattern_ok = false;
            detail.push(format!("{label} differs"));
        }
    }
    log.push(CheckItem::new(
        "ramification pattern",
        pattern_ok,
        detail.join(", "),
    ));

    let mut signs: BTreeMap<String, Vec<Sign>> = BTreeMap::new();
    for rep in reports.iter().flatten() {
        for p in rep.places.iter().filter(|p| !p.above_p) {
            signs.entry(p.label.clone()).or_default().push(p.sign);
        }
    }
    let mut signs_ok = true;
    let mut detail = Vec::new();
    for (label, s) in &signs {
        if !s.windows(2).all(|w| w[0] == w[1]) {
            signs_ok = false;
            detail.push(format!("{label} differs"));
        }
    }
    log.push(CheckItem::new(
        "local signs away from p",
        signs_ok,
        detail.join(", "),
    ));
    log
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn archimedean_sign() {
        assert_eq!(eps_infinity(0, 2, -1).unwrap(), Sign::Minus);
        assert_eq!(eps_infinity(1, 2, -1).unwrap(), Sign::Plus);
        for n in 1..=5 {
            assert_eq!(eps_infinity(0, 2, -n).unwrap(), Sign::parity(n));
        }
        assert!(eps_infinity(0, 3, 0).is_err());
    }
}
