//! One pass/fail line per acceptance criterion; exits nonzero if any fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use wdparity::corpus::{self, CaseOutcome, MAX_DIM};
use wdparity::datum::{self, Parsed};
use wdparity_core::eps::{eps_sign, panchishkin_eps};
use wdparity_core::global::{
    eps_infinity, family_constancy_check, global_eps, modified_invariants, GlobalPointDatum,
    PlaceKind,
};
use wdparity_core::numerology::{duality_checks, formulary};
use wdparity_core::{CycloWeilField, MonodromyFiltration, PstLocalDatum, Sign, WdRep};

const SEED: u64 = 0;

fn load(name: &str) -> Parsed {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{name}: {e}"));
    datum::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn point(name: &str) -> GlobalPointDatum {
    match load(name) {
        Parsed::Point(g) => g,
        other => panic!("{name} holds {other:?}"),
    }
}

fn p_datum(name: &str) -> PstLocalDatum {
    point(name)
        .places
        .into_iter()
        .find_map(|p| match p.kind {
            PlaceKind::AboveP { datum, .. } => Some(datum),
            PlaceKind::Away { .. } => None,
        })
        .expect("a place above p")
}

struct Line {
    passed: bool,
    summary: String,
}

fn line(passed: bool, summary: impl Into<String>) -> Line {
    Line {
        passed,
        summary: summary.into(),
    }
}

fn multiplicative_signs() -> Line {
    let start = Instant::now();
    let mut ok = true;
    let mut found = Vec::new();
    for (name, expected) in [
        ("split_mult.datum", Sign::Minus),
        ("nonsplit_mult.datum", Sign::Plus),
    ] {
        let datum = p_datum(name);
        let routed = panchishkin_eps(&datum).ok();
        let direct = eps_sign(datum.pairing()).ok();
        ok &= routed == Some(expected) && direct == Some(expected);
        found.push(format!("{name}: {routed:?}/{direct:?}"));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(1);
    line(ok, format!("{} in {elapsed:.2?}", found.join(", ")))
}

struct CorpusRun {
    outcomes: Vec<Option<CaseOutcome>>,
    max_dim: usize,
    elapsed: Duration,
}

fn run_corpus() -> CorpusRun {
    let start = Instant::now();
    let cases = corpus::corpus(SEED, 500).expect("corpus generation");
    let max_dim = cases.iter().map(|c| c.pairing().dim()).max().unwrap_or(0);
    let outcomes = cases.iter().map(|c| corpus::evaluate(c).ok()).collect();
    CorpusRun {
        outcomes,
        max_dim,
        elapsed: start.elapsed(),
    }
}

fn count(run: &CorpusRun, pred: impl Fn(&CaseOutcome) -> bool) -> usize {
    run.outcomes.iter().flatten().filter(|o| pred(o)).count()
}

fn routes_agree(run: &CorpusRun) -> Line {
    let n = run.outcomes.len();
    let agree = count(run, CaseOutcome::routes_agree);
    let ok =
        n >= 500 && agree == n && run.max_dim <= MAX_DIM && run.elapsed < Duration::from_secs(60);
    line(
        ok,
        format!(
            "{agree}/{n} data agree, dimension <= {}, {:.1?} total",
            run.max_dim, run.elapsed
        ),
    )
}

fn reduction_identities(run: &CorpusRun) -> Line {
    let n = run.outcomes.len();
    let holds = count(run, CaseOutcome::reduction_holds);
    let required = ["reduction1", "reduction2", "delta f=1 mod 2"];
    let evaluated = count(run, |o| {
        required
            .iter()
            .all(|name| o.reduction.iter().any(|c| c.name == *name))
    });
    line(
        holds == n,
        format!("{holds}/{n} hold ({evaluated} with nonzero inertia invariants)"),
    )
}

fn formulary_oracle() -> Line {
    let mut found = Vec::new();
    let mut ok = true;
    for (name, h1_g) in [("qp.num", None), ("qp1.num", Some(2))] {
        let Parsed::Numerology(n) = load(name) else {
            return line(false, format!("{name} is not a numerology"));
        };
        match formulary(&n, &n.dual()) {
            Ok(out) => {
                ok &= out.h1 == 2 && out.h1_f == 1 && h1_g.is_none_or(|g| out.h1_g == g);
                found.push(format!(
                    "{name}: h1 = {}, h1_f = {}, h1_g = {}",
                    out.h1, out.h1_f, out.h1_g
                ));
            }
            Err(e) => {
                ok = false;
                found.push(format!("{name}: {e}"));
            }
        }
    }
    line(ok, found.join("; "))
}

fn duality_suite() -> Line {
    let mut rng = corpus::rng(SEED);
    let mut passed = 0;
    let total = 1000;
    for _ in 0..total {
        let n = corpus::random_numerology(&mut rng);
        if duality_checks(&n).is_ok_and(|c| c.iter().all(|x| x.passed)) {
            passed += 1;
        }
    }
    line(passed == total, format!("{passed}/{total} dual pairs"))
}

fn monodromy_filtration() -> Line {
    let field = CycloWeilField::new(1, 2).expect("field");
    let mut rng = corpus::rng(SEED);
    let total = 500;
    let mut passed = 0;
    for _ in 0..total {
        let n = corpus::random_nilpotent(&mut rng, &field, 10);
        if MonodromyFiltration::compute(&n).verify(&n) {
            passed += 1;
        }
    }
    let mut special_ok = true;
    for m in 1..=4i64 {
        let sp = WdRep::make_sp(&field, m).expect("sp(m)");
        let filt = MonodromyFiltration::compute(sp.monodromy());
        let expected: Vec<(i64, usize)> = (0..m).map(|k| (1 - m + 2 * k, 1)).collect();
        let found: Vec<(i64, usize)> = filt
            .graded_dims()
            .into_iter()
            .filter(|(_, d)| *d > 0)
            .collect();
        special_ok &= found == expected && filt.verify(sp.monodromy());
    }
    line(
        passed == total && special_ok,
        format!("{passed}/{total} random nilpotents, sp(1..4) graded pieces match: {special_ok}"),
    )
}

fn archimedean_sign() -> Line {
    let mut ok = true;
    let mut found = Vec::new();
    for degree in 1..=5u32 {
        let g = point(&format!("totally_real_{degree}.datum"));
        let expected = Sign::parity(i64::from(degree));
        match global_eps(&g) {
            Ok(r) => {
                let direct = eps_infinity(g.r2, g.dim, -i64::from(degree)).ok();
                ok &= g.r2 == 0
                    && r.dminus_total == -i64::from(degree)
                    && r.eps_infinity == expected
                    && direct == Some(expected);
                found.push(format!("{degree}: {}", r.eps_infinity));
            }
            Err(e) => {
                ok = false;
                found.push(format!("{degree}: {e}"));
            }
        }
    }
    line(ok, format!("degrees {}", found.join(", ")))
}

fn bookkeeping() -> Line {
    let mut members = Vec::new();
    for name in [
        "split_mult.datum",
        "nonsplit_mult.datum",
        "good_ordinary.datum",
        "good_ordinary_nonsplit.datum",
        "good_everywhere.datum",
        "totally_real_1.datum",
        "totally_real_2.datum",
        "totally_real_3.datum",
        "totally_real_4.datum",
        "totally_real_5.datum",
    ] {
        members.push((name.to_string(), point(name)));
    }
    for name in ["family_consistent.datum", "family_corrupted.datum"] {
        let Parsed::Family(list) = load(name) else {
            return line(false, format!("{name} is not a family"));
        };
        members.extend(
            list.into_iter()
                .enumerate()
                .map(|(i, g)| (format!("{name}[{i}]"), g)),
        );
    }
    let invariant_ok = members.iter().all(|(_, g)| modified_invariants(g).is_ok());
    let family = |name: &str| match load(name) {
        Parsed::Family(list) => family_constancy_check(&list),
        _ => Vec::new(),
    };
    let consistent = family("family_consistent.datum");
    let corrupted = family("family_corrupted.datum");
    let consistent_ok = !consistent.is_empty() && consistent.iter().all(|c| c.passed);
    let flagged: Vec<&str> = corrupted
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name)
        .collect();
    line(
        invariant_ok && consistent_ok && !flagged.is_empty(),
        format!(
            "shifted invariant on {} points: {invariant_ok}; consistent family passes: {consistent_ok}; corrupted family flags {flagged:?}",
            members.len()
        ),
    )
}

fn semisimplification(run: &CorpusRun) -> Line {
    let n = run.outcomes.len();
    let same = count(run, CaseOutcome::semisimplification_invariant);
    line(same == n, format!("{same}/{n} data unchanged"))
}

fn main() -> ExitCode {
    let mut lines = vec![(1, multiplicative_signs())];
    let run = run_corpus();
    lines.push((2, routes_agree(&run)));
    lines.push((3, reduction_identities(&run)));
    lines.push((4, formulary_oracle()));
    lines.push((5, duality_suite()));
    lines.push((6, monodromy_filtration()));
    lines.push((7, archimedean_sign()));
    lines.push((8, bookkeeping()));
    lines.push((9, semisimplification(&run)));
    let mut all = true;
    for (n, l) in &lines {
        all &= l.passed;
        let tag = if l.passed { "PASS" } else { "FAIL" };
        println!("criterion {n}: {tag}  {}", l.summary);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
