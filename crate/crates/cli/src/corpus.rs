//! Seed-deterministic random inputs: symplectic Panchishkin data assembled
//! from hyperbolic and special blocks, numerology dual pairs and nilpotent
//! operators.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use wdparity_core::eps::{
    det_galois_at_minus_one, eps_sign, panchishkin_eps, reduction_identity_checks,
};
use wdparity_core::matrix::subspace;
use wdparity_core::symplectic::{hyperbolic_pair, special_symplectic};
use wdparity_core::{
    CwScalar, CycloWeilField, DeRhamNumerology, HodgeTateData, IdentityCheck, LagrangianSplit,
    Matrix, Part, PstLocalDatum, Result, Sign, SympPairing, WdRep,
};

pub use rand::SeedableRng;
pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    CorpusRng::seed_from_u64(seed)
}

/// `(N, q, π)` where `π·π̄ = q` gives the weight-0 unit `π²/q`.
const FIELDS: &[(u64, u64, Option<&str>)] = &[
    (1, 2, None),
    (1, 3, None),
    (1, 5, None),
    (3, 4, None),
    (3, 7, Some("3 + z")),
    (4, 2, None),
    (4, 5, Some("1 + 2*z")),
    (4, 9, None),
    (12, 5, Some("1 + 2*z^3")),
    (12, 7, Some("3 + z^4")),
    (12, 13, Some("3 + 2*z^3")),
];

/// Largest total dimension of a generated datum.
pub const MAX_DIM: usize = 8;

struct Ambient {
    field: CycloWeilField,
    unit: Option<CwScalar>,
    /// Order of the cyclic inertia image, 1 when unramified.
    order: usize,
    /// Primitive root of unity of that order.
    root: CwScalar,
    artm1: usize,
}

impl Ambient {
    fn pick(rng: &mut CorpusRng, ramify: bool) -> Result<Self> {
        let &(n, q, pi) = FIELDS.choose(rng).expect("nonempty table");
        let field = CycloWeilField::new(n, q)?;
        let unit = match pi {
            Some(text) => {
                let pi = field.parse_terms(text)?;
                Some(&(&pi * &pi) * &field.q_pow(-1))
            }
            None => None,
        };
        // ζ_M for M = lcm(N, 2)
        let (m, zeta_m) = if n % 2 == 0 {
            (n as usize, field.zeta())
        } else {
            (2 * n as usize, field.zeta().neg())
        };
        let order = if ramify {
            let divisors: Vec<usize> = (2..=m).filter(|d| m % d == 0).collect();
            *divisors.choose(rng).expect("m >= 2")
        } else {
            1
        };
        let root = zeta_m.pow((m / order) as i64)?;
        let artm1 = if order % 2 == 0 && rng.gen_bool(0.5) {
            order / 2
        } else {
            0
        };
        Ok(Ambient {
            field,
            unit,
            order,
            root,
            artm1,
        })
    }

    /// One-dimensional inertia character `g^k ↦ root^{e·k}` with trivial
    /// Frobenius.
    fn character(&self, e: usize) -> Result<WdRep> {
        let f = &self.field;
        let inertia = (0..self.order)
            .map(|k| Matrix::diagonal(f, &[self.root.pow((e * k) as i64).expect("unit")]))
            .collect();
        WdRep::new(
            Matrix::identity(f, 1),
            Matrix::zeros(f, 1, 1),
            inertia,
            self.artm1,
        )
    }

    /// `ζ_N^k · √q^w · u^j` for random `k` and `j`.
    fn weil_number(&self, rng: &mut CorpusRng, weight: i64) -> Result<CwScalar> {
        let f = &self.field;
        let k = rng.gen_range(0..f.conductor().max(1) as i64);
        let mut alpha = &f.zeta_pow(k) * &f.sqrt_q_pow(weight);
        if let Some(u) = &self.unit {
            alpha = &alpha * &u.pow(rng.gen_range(-1..=1))?;
        }
        Ok(alpha)
    }
}

/// Two-dimensional unramified representation with unipotent Frobenius.
fn unipotent_pair(field: &CycloWeilField) -> Result<WdRep> {
    WdRep::unramified(
        Matrix::from_ints(field, &[&[1, 1], &[0, 1]]),
        Matrix::zeros(field, 2, 2),
    )
}

/// Block and its Lagrangian basis.
fn random_block(
    rng: &mut CorpusRng,
    amb: &Ambient,
    budget: usize,
    notes: &mut Vec<String>,
) -> Result<(SympPairing, Matrix)> {
    let f = &amb.field;
    let want_special = budget >= 2 && rng.gen_bool(0.4);
    if want_special {
        let m = if budget >= 4 && rng.gen_bool(0.3) {
            4
        } else {
            2
        };
        let sign = if rng.gen_bool(0.5) {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let (p, lag) = special_symplectic(f, m, sign)?;
        if amb.order.is_multiple_of(2) && rng.gen_bool(0.5) {
            let chi = amb.character(amb.order / 2)?;
            notes.push(format!("quadratic twist of special({m}, {sign})"));
            let twisted = SympPairing::validate(p.rep().tensor(&chi)?, p.gram().clone())?;
            return Ok((twisted, lag));
        }
        notes.push(format!("special({m}, {sign})"));
        return Ok((p, lag));
    }
    let half = budget / 2;
    let m = rng.gen_range(1..=half.min(3));
    let jordan = if 2 * m <= half && rng.gen_bool(0.3) {
        2
    } else {
        1
    };
    let alpha = amb.weil_number(rng, m as i64 - 2)?;
    let mut x = WdRep::make_unr(&alpha)?.tensor(&WdRep::make_sp(f, m as i64)?)?;
    if jordan == 2 {
        x = x.tensor(&unipotent_pair(f)?)?;
    }
    let e = if amb.order > 1 {
        rng.gen_range(0..amb.order)
    } else {
        0
    };
    if e != 0 {
        x = x.tensor(&amb.character(e)?)?;
    }
    let (p, lag) = hyperbolic_pair(&x)?;
    let n = x.dim();
    let use_dual = rng.gen_bool(0.5);
    notes.push(format!(
        "hyperbolic(sp({m}){}{}, {} half)",
        if jordan == 2 { " x unipotent" } else { "" },
        if e != 0 {
            format!(" x chi^{e}")
        } else {
            String::new()
        },
        if use_dual { "dual" } else { "direct" }
    ));
    if use_dual {
        let zero = Matrix::zeros(f, n, n);
        Ok((p, zero.vstack(&Matrix::identity(f, n))))
    } else {
        Ok((p, lag))
    }
}

/// Random unimodular integer matrix: a product of unitriangular factors with
/// small entries and a permutation, so the inverse stays integral.
fn random_basis(rng: &mut CorpusRng, field: &CycloWeilField, d: usize) -> Matrix {
    let mut order: Vec<usize> = (0..d).collect();
    order.shuffle(rng);
    let mut lower = vec![vec![0i64; d]; d];
    let mut upper = vec![vec![0i64; d]; d];
    for i in 0..d {
        lower[i][i] = 1;
        upper[i][i] = 1;
        for j in 0..i {
            lower[i][j] = rng.gen_range(-1..=1);
            upper[j][i] = rng.gen_range(-1..=1);
        }
    }
    let as_matrix = |rows: &[Vec<i64>]| {
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        Matrix::from_ints(field, &refs)
    };
    as_matrix(&lower)
        .mul(&as_matrix(&upper))
        .select_columns(&order)
}

fn random_weights(rng: &mut CorpusRng, count: usize, lo: i64, hi: i64) -> HodgeTateData {
    HodgeTateData::new((0..count).map(|_| (rng.gen_range(lo..=hi), 1)))
}

/// A generated local datum with the untransformed description.
#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub index: usize,
    pub datum: PstLocalDatum,
    pub ramified_inertia: bool,
    pub description: String,
}

impl CorpusCase {
    pub fn pairing(&self) -> &SympPairing {
        self.datum.pairing()
    }
}

/// Generates one pure symplectic Panchishkin datum of dimension at most
/// [`MAX_DIM`].
pub fn random_case(rng: &mut CorpusRng, index: usize) -> Result<CorpusCase> {
    let ramify = rng.gen_bool(0.35);
    let amb = Ambient::pick(rng, ramify)?;
    let f = amb.field.clone();
    let target = 2 * rng.gen_range(1..=MAX_DIM / 2);
    let mut notes = Vec::new();
    let (mut pairing, mut lag) = random_block(rng, &amb, target, &mut notes)?;
    while pairing.dim() < target {
        let (p, l) = random_block(rng, &amb, target - pairing.dim(), &mut notes)?;
        pairing = pairing.direct_sum(&p)?;
        lag = lag.block_diag(&l);
    }
    let basis = random_basis(rng, &f, pairing.dim());
    let pairing = pairing.change_basis(&basis)?;
    let lag = basis.inverse().expect("invertible").mul(&lag);

    let kdeg = rng.gen_range(1..=2);
    let half = pairing.dim() / 2;
    let ht_plus = random_weights(rng, kdeg * half, -3, -1);
    let ht_minus = random_weights(rng, kdeg * half, 0, 2);
    let ht = ht_plus.union(&ht_minus);
    let ramified_inertia = !pairing.rep().inertia_is_trivial();
    let mut datum = PstLocalDatum::new(
        pairing.clone(),
        lag.clone(),
        ht.clone(),
        ht_plus.clone(),
        ht_minus.clone(),
        None,
        kdeg,
    )?;
    if rng.gen_bool(0.3) {
        let det = det_galois_at_minus_one(&datum, Part::Plus)?;
        datum = PstLocalDatum::new(pairing, lag, ht, ht_plus, ht_minus, Some(det), kdeg)?;
    }
    let description = format!(
        "N={} q={} inertia order {} artm1 {}: {}",
        f.conductor(),
        f.q(),
        amb.order,
        amb.artm1,
        notes.join(" + ")
    );
    Ok(CorpusCase {
        index,
        datum,
        ramified_inertia,
        description,
    })
}

/// The first `cases` data for `seed`.
pub fn corpus(seed: u64, cases: usize) -> Result<Vec<CorpusCase>> {
    let mut rng = rng(seed);
    (0..cases).map(|i| random_case(&mut rng, i)).collect()
}

/// Outcome of the per-datum identities.
#[derive(Clone, Debug)]
pub struct CaseOutcome {
    pub eps_direct: Sign,
    pub eps_panchishkin: Sign,
    pub eps_semisimplified: Sign,
    pub reduction: Vec<IdentityCheck>,
}

impl CaseOutcome {
    pub fn routes_agree(&self) -> bool {
        self.eps_direct == self.eps_panchishkin
    }

    pub fn semisimplification_invariant(&self) -> bool {
        self.eps_direct == self.eps_semisimplified
    }

    pub fn reduction_holds(&self) -> bool {
        self.reduction.iter().all(|c| c.passed)
    }
}

/// Restricts to the inertia invariants of the Frobenius semisimplification,
/// where the reduction identities apply, and evaluates them.
pub fn reduction_checks(datum: &PstLocalDatum) -> Result<Vec<IdentityCheck>> {
    reduction_checks_on(datum, &datum.pairing().frobenius_semisimplification()?)
}

pub fn reduction_checks_on(datum: &PstLocalDatum, ss: &SympPairing) -> Result<Vec<IdentityCheck>> {
    if ss.rep().inertia_is_trivial() {
        let split = LagrangianSplit::new(ss, datum.split().plus_basis().clone())?;
        return reduction_identity_checks(ss, &split);
    }
    let invariant = ss.rep().inertia_split().invariant_basis;
    if invariant.cols() == 0 {
        return Ok(Vec::new());
    }
    let sub = ss.restrict(&invariant)?;
    let meet = subspace::intersection(datum.split().plus_basis(), &invariant);
    let coords =
        subspace::coordinates(&invariant, &meet).ok_or(wdparity_core::Error::Precondition(
            "Lagrangian meets the invariants outside their span".into(),
        ))?;
    let split = LagrangianSplit::new(&sub, coords)?;
    reduction_identity_checks(&sub, &split)
}

pub fn evaluate(case: &CorpusCase) -> Result<CaseOutcome> {
    let pairing = case.pairing();
    let ss = pairing.frobenius_semisimplification()?;
    Ok(CaseOutcome {
        eps_direct: eps_sign(pairing)?,
        eps_panchishkin: panchishkin_eps(&case.datum)?,
        eps_semisimplified: eps_sign(&ss)?,
        reduction: reduction_checks_on(&case.datum, &ss)?,
    })
}

/// A random valid numerology whose dual is the twisted dual.
pub fn random_numerology(rng: &mut CorpusRng) -> DeRhamNumerology {
    loop {
        let d = rng.gen_range(1..=4);
        let kdeg = rng.gen_range(1..=3);
        let bound = d * kdeg;
        let ht = random_weights(rng, bound, -3, 3);
        let h0_t = rng.gen_range(0..=bound);
        let h0 = rng.gen_range(0..=h0_t);
        let h0_dual_t = rng.gen_range(0..=bound);
        let h0_dual = rng.gen_range(0..=h0_dual_t);
        if let Ok(n) = DeRhamNumerology::new(d, kdeg, ht, h0, h0_t, h0_dual, h0_dual_t) {
            return n;
        }
    }
}

/// A random nilpotent matrix over `Q`: a random Jordan type conjugated by a
/// random integer basis.
pub fn random_nilpotent(rng: &mut CorpusRng, field: &CycloWeilField, max_dim: usize) -> Matrix {
    let d = rng.gen_range(1..=max_dim);
    let mut jordan = Matrix::zeros(field, 0, 0);
    let mut left = d;
    while left > 0 {
        let size = rng.gen_range(1..=left);
        let mut rows = vec![vec![0i64; size]; size];
        for (j, row) in rows.iter_mut().enumerate().skip(1) {
            row[j - 1] = 1;
        }
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        jordan = jordan.block_diag(&Matrix::from_ints(field, &refs));
        left -= size;
    }
    let basis = random_basis(rng, field, d);
    basis
        .mul(&jordan)
        .mul(&basis.inverse().expect("invertible"))
}
