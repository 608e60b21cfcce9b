//! The subcommands, each turning a parsed datum into a [`Report`].

use wdparity_core::eps::{eps_sign, h0_dminus, panchishkin_eps};
use wdparity_core::filtration::MonodromyFiltration;
use wdparity_core::global::{
    family_constancy_check, modified_invariants, validate_datum, GlobalPointDatum, ParityReport,
    Place, PlaceKind,
};
use wdparity_core::numerology::{duality_checks, formulary as formulary_of};
use wdparity_core::{CheckItem, CycloWeilField, DeRhamNumerology, PstLocalDatum, SympPairing};

use crate::corpus;
use crate::datum::Parsed;
use crate::report::{Report, Section};

/// The input does not hold what the subcommand needs.
#[derive(Debug, thiserror::Error)]
#[error("`{command}` does not accept a {found} datum")]
pub struct WrongInput {
    pub command: &'static str,
    pub found: &'static str,
}

fn kind_name(parsed: &Parsed) -> &'static str {
    match parsed {
        Parsed::Point(_) => "point",
        Parsed::Local(_) => "local",
        Parsed::Numerology(_) => "numerology",
        Parsed::Family(_) => "family",
    }
}

fn wrong(command: &'static str, parsed: &Parsed) -> WrongInput {
    WrongInput {
        command,
        found: kind_name(parsed),
    }
}

fn places_of(parsed: &Parsed) -> Vec<(String, &Place)> {
    match parsed {
        Parsed::Point(g) => g.places.iter().map(|p| (p.label.clone(), p)).collect(),
        Parsed::Local(p) => vec![(p.label.clone(), p)],
        Parsed::Family(members) => members
            .iter()
            .enumerate()
            .flat_map(|(i, g)| {
                g.places
                    .iter()
                    .map(move |p| (format!("member {i}, {}", p.label), p))
            })
            .collect(),
        Parsed::Numerology(_) => Vec::new(),
    }
}

fn above_p_section(title: String, datum: &PstLocalDatum) -> Section {
    let mut s = Section::new(title);
    s.value("kind", "above p");
    let direct = eps_sign(datum.pairing());
    let routed = panchishkin_eps(datum);
    match &direct {
        Ok(e) => s.value("eps (direct)", e),
        Err(e) => s.failure("direct sign", e),
    };
    match &routed {
        Ok(e) => s.value("eps (Panchishkin)", e),
        Err(e) => s.failure("Panchishkin sign", e),
    };
    s.value("h0(D-)", h0_dminus(datum));
    s.checks_from(datum.checks());
    if let (Ok(a), Ok(b)) = (&direct, &routed) {
        s.check("routes agree", a == b, format!("{a} vs {b}"));
    }
    let semisimple = datum.pairing().frobenius_semisimplification();
    match semisimple.as_ref().map(eps_sign) {
        Ok(Ok(e)) => {
            if let Ok(a) = &direct {
                s.check(
                    "Frobenius semisimplification invariance",
                    *a == e,
                    format!("{a} vs {e}"),
                );
            }
        }
        Ok(Err(e)) => {
            s.failure("Frobenius semisimplification", e);
        }
        Err(e) => {
            s.failure("Frobenius semisimplification", e);
        }
    }
    if let Ok(ss) = &semisimple {
        match corpus::reduction_checks_on(datum, ss) {
            Ok(checks) => s.checks_from(checks),
            Err(e) => s.failure("reduction identities", e),
        };
    }
    s
}

fn away_section(
    title: String,
    place: &Place,
    pairing: &SympPairing,
    report: &mut Report,
) -> Section {
    let mut s = Section::new(title);
    s.value("kind", "away from p");
    if place.is_ramified() {
        s.value("ramified", "yes");
        match eps_sign(pairing) {
            Ok(e) => s.value("eps", e),
            Err(e) => s.failure("local sign", e),
        };
        let purity = pairing.rep().is_pure(-1);
        s.check("purity", purity.holds(), format!("{purity:?}"));
        report.warn(format!(
            "{}: only the direct route applies away from p",
            place.label
        ));
    } else {
        s.value("ramified", "no");
        s.value("eps", "+1");
    }
    s
}

/// Local signs by every available route, with the identities they rest on.
pub fn eps_local(parsed: &Parsed) -> Result<Report, WrongInput> {
    let places = places_of(parsed);
    if places.is_empty() {
        return Err(wrong("eps-local", parsed));
    }
    let mut report = Report::new("eps-local");
    for (title, place) in places {
        let section = match &place.kind {
            PlaceKind::AboveP { datum, .. } => above_p_section(format!("place {title}"), datum),
            PlaceKind::Away { pairing, .. } => {
                away_section(format!("place {title}"), place, pairing, &mut report)
            }
        };
        report.push(section);
    }
    Ok(report)
}

fn formulary_section(title: String, n: &DeRhamNumerology) -> Section {
    let mut s = Section::new(title);
    s.value("d", n.d()).value("[K:Q_p]", n.kdeg());
    match formulary_of(n, &n.dual()) {
        Ok(out) => {
            s.value("h0", out.h0)
                .value("h1", out.h1)
                .value("h2", out.h2)
                .value("h0[1/t]", out.h0_t)
                .value("h1[1/t]", out.h1_t)
                .value("h2[1/t]", out.h2_t)
                .value("h1_e", out.h1_e)
                .value("h1_f", out.h1_f)
                .value("h1_g", out.h1_g)
                .value("h1/h1_f", out.h1_over_f)
                .value("h1/h1_g", out.h1_over_g);
        }
        Err(e) => {
            s.failure("formulary", e);
        }
    }
    match duality_checks(n) {
        Ok(checks) => s.checks_from(checks),
        Err(e) => s.failure("duality", e),
    };
    s
}

/// Cohomology dimensions from a numerology, or from every place above `p`.
pub fn formulary(parsed: &Parsed) -> Result<Report, WrongInput> {
    let mut report = Report::new("formulary");
    match parsed {
        Parsed::Numerology(n) => report.push(formulary_section("numerology".into(), n)),
        _ => {
            for (title, place) in places_of(parsed) {
                if let PlaceKind::AboveP { numerology, .. } = &place.kind {
                    report.push(formulary_section(format!("place {title}"), numerology));
                }
            }
        }
    }
    if report.sections.is_empty() {
        return Err(wrong("formulary", parsed));
    }
    Ok(report)
}

fn parity_section(title: String, g: &GlobalPointDatum, report: &mut Report) -> Section {
    let mut s = Section::new(title);
    match modified_invariants(g) {
        Ok(r) => fill_parity(&mut s, &r, report),
        Err(e) => {
            s.checks_from(validate_datum(g));
            s.failure("global sign", e);
        }
    }
    s
}

fn fill_parity(s: &mut Section, r: &ParityReport, report: &mut Report) {
    for p in &r.places {
        let kind = match (p.above_p, p.ramified) {
            (true, _) => "above p",
            (false, true) => "ramified",
            (false, false) => "unramified",
        };
        s.value(format!("eps_{}", p.label), format!("{} ({kind})", p.sign));
    }
    s.value("eps_infinity", r.eps_infinity)
        .value("d- total", r.dminus_total)
        .value("eps", r.eps)
        .value("h0(D-) total", r.h0_minus_total)
        .value("modified eps", r.eps_modified);
    match (r.h1f, r.h1f_modified, r.invariant) {
        (Some(h), Some(hm), Some(inv)) => {
            s.value("h1_f", h)
                .value("modified h1_f", hm)
                .value("eps * (-1)^h1_f", inv);
        }
        _ => report.warn(format!("{}: no h1_f supplied", s.title)),
    }
    s.checks_from(r.log.iter().cloned());
}

/// The parity report of a global point, or constancy across a family.
pub fn global(parsed: &Parsed) -> Result<Report, WrongInput> {
    let mut report = Report::new("global");
    match parsed {
        Parsed::Point(g) => {
            let s = parity_section("global".into(), g, &mut report);
            report.push(s);
        }
        Parsed::Family(members) => {
            for (i, g) in members.iter().enumerate() {
                let s = parity_section(format!("member {i}"), g, &mut report);
                report.push(s);
            }
            let mut s = Section::new("family");
            s.checks_from(family_constancy_check(members));
            report.push(s);
        }
        _ => return Err(wrong("global", parsed)),
    }
    Ok(report)
}

fn place_validation(place: &Place) -> Vec<CheckItem> {
    match &place.kind {
        PlaceKind::AboveP { datum, .. } => datum.checks(),
        PlaceKind::Away {
            pairing,
            declared_ramified,
        } => {
            let mut out = Vec::new();
            if place.is_ramified() {
                let purity = pairing.rep().is_pure(-1);
                out.push(CheckItem::new(
                    "purity",
                    purity.holds(),
                    format!("{purity:?}"),
                ));
            }
            if let Some(declared) = declared_ramified {
                let computed = pairing.rep().is_ramified();
                out.push(CheckItem::new(
                    "ramification flag",
                    *declared == computed,
                    format!("declared {declared}, representation gives {computed}"),
                ));
            }
            out
        }
    }
}

/// The validation log alone.
pub fn verify(parsed: &Parsed) -> Report {
    let mut report = Report::new("verify");
    match parsed {
        Parsed::Point(g) => {
            let mut s = Section::new("global");
            s.checks_from(validate_datum(g));
            report.push(s);
        }
        Parsed::Family(members) => {
            for (i, g) in members.iter().enumerate() {
                let mut s = Section::new(format!("member {i}"));
                s.checks_from(validate_datum(g));
                report.push(s);
            }
        }
        Parsed::Local(place) => {
            let mut s = Section::new(format!("place {}", place.label));
            s.checks_from(place_validation(place));
            report.push(s);
        }
        Parsed::Numerology(n) => {
            let mut s = Section::new("numerology");
            s.check(
                "numerology consistent",
                true,
                format!("d = {}, [K:Q_p] = {}", n.d(), n.kdeg()),
            );
            report.push(s);
        }
    }
    report
}

/// Pass counts of the randomized suites.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteCounts {
    pub passed: usize,
    pub total: usize,
    pub first_failure: Option<String>,
}

impl SuiteCounts {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else if self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }
}

fn suite_section(s: &mut Section, name: &str, counts: &SuiteCounts) {
    s.value(name, format!("{}/{}", counts.passed, counts.total));
    s.check(
        name.to_string(),
        counts.passed == counts.total,
        counts.first_failure.clone().unwrap_or_default(),
    );
}

/// Runs the randomized suites for `cases` inputs each from `seed`.
pub fn selfcheck(seed: u64, cases: usize) -> Report {
    let mut routes = SuiteCounts::default();
    let mut semisimple = SuiteCounts::default();
    let mut reductions = SuiteCounts::default();
    match corpus::corpus(seed, cases) {
        Ok(data) => {
            for case in &data {
                let label = || format!("case {}: {}", case.index, case.description);
                match corpus::evaluate(case) {
                    Ok(out) => {
                        routes.record(out.routes_agree(), label);
                        semisimple.record(out.semisimplification_invariant(), label);
                        reductions.record(out.reduction_holds(), label);
                    }
                    Err(e) => {
                        let why = || format!("{}: {e}", label());
                        routes.record(false, why);
                        semisimple.record(false, why);
                        reductions.record(false, why);
                    }
                }
            }
        }
        Err(e) => routes.record(false, || format!("generation failed: {e}")),
    }

    let mut numerology = SuiteCounts::default();
    let mut r = corpus::rng(seed.wrapping_add(1));
    for i in 0..cases {
        let n = corpus::random_numerology(&mut r);
        let ok = duality_checks(&n).is_ok_and(|c| c.iter().all(|x| x.passed));
        numerology.record(ok, || format!("case {i}: {n:?}"));
    }

    let mut monodromy = SuiteCounts::default();
    let mut r = corpus::rng(seed.wrapping_add(2));
    let rationals = CycloWeilField::new(1, 2).expect("small field");
    for i in 0..cases {
        let n = corpus::random_nilpotent(&mut r, &rationals, 10);
        let ok = MonodromyFiltration::compute(&n).verify(&n);
        monodromy.record(ok, || format!("case {i}: dimension {}", n.rows()));
    }

    let mut report = Report::new("selfcheck");
    let mut s = Section::new(format!("seed {seed}, {cases} cases per suite"));
    suite_section(&mut s, "local sign routes agree", &routes);
    suite_section(
        &mut s,
        "Frobenius semisimplification invariance",
        &semisimple,
    );
    suite_section(&mut s, "reduction identities", &reductions);
    suite_section(&mut s, "formulary invariants", &numerology);
    suite_section(&mut s, "monodromy filtration", &monodromy);
    report.push(s);
    report
}
