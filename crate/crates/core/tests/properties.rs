use proptest::prelude::*;

use wdparity_core::eps::eps_sign;
use wdparity_core::numerology::duality_checks;
use wdparity_core::symplectic::{
    decompose_symplectic, hyperbolic_pair, snake_pairing, special_symplectic,
};
use wdparity_core::{
    BlockKind, CwScalar, CycloWeilField, DeRhamNumerology, HodgeTateData, LagrangianSplit, Matrix,
    MonodromyFiltration, Sign, SympPairing, WdRep,
};

const FIELDS: &[(u64, u64)] = &[(1, 3), (3, 7), (4, 5), (8, 2), (5, 5), (12, 13)];

fn field(idx: usize) -> CycloWeilField {
    let (n, q) = FIELDS[idx % FIELDS.len()];
    CycloWeilField::new(n, q).unwrap()
}

// ---------------------------------------------------------------------------
// complex embedding z ↦ e^{2πi/N}, evaluated from the printed term list

#[derive(Clone, Copy, Debug)]
struct C(f64, f64);

impl C {
    fn mul(self, o: C) -> C {
        C(self.0 * o.0 - self.1 * o.1, self.0 * o.1 + self.1 * o.0)
    }
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn powi(self, k: i32) -> C {
        let (r, t) = (
            (self.0 * self.0 + self.1 * self.1).sqrt(),
            self.1.atan2(self.0),
        );
        let rk = r.powi(k);
        C(rk * (t * k as f64).cos(), rk * (t * k as f64).sin())
    }
    fn close(self, o: C) -> bool {
        let scale = 1.0 + (o.0.abs() + o.1.abs());
        (self.0 - o.0).abs() < 1e-6 * scale && (self.1 - o.1).abs() < 1e-6 * scale
    }
}

fn rational(text: &str) -> f64 {
    match text.split_once('/') {
        Some((a, b)) => a.parse::<f64>().unwrap() / b.parse::<f64>().unwrap(),
        None => text.parse().unwrap(),
    }
}

/// Evaluates `c*z^i*s^j + ...` with `z = e^{2πi/N}` and the given `s`.
fn embed_terms(text: &str, n: u64, s: C) -> C {
    let zeta = C(
        (2.0 * std::f64::consts::PI / n as f64).cos(),
        (2.0 * std::f64::consts::PI / n as f64).sin(),
    );
    let mut acc = C(0.0, 0.0);
    for term in text.split(" + ") {
        let mut value = C(1.0, 0.0);
        for factor in term.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b, e.parse::<i32>().unwrap()),
                None => (factor, 1),
            };
            value = match base {
                "z" => value.mul(zeta.powi(exp)),
                "s" => value.mul(s.powi(exp)),
                c => value.mul(C(rational(c), 0.0)),
            };
        }
        acc = acc.add(value);
    }
    acc
}

fn embed(x: &CwScalar) -> C {
    let f = x.field();
    let s = if f.sqrt_adjoined() {
        C((f.q() as f64).sqrt(), 0.0)
    } else {
        embed_terms(&f.sqrt_q().to_terms(), f.conductor(), C(0.0, 0.0))
    };
    embed_terms(&x.to_terms(), f.conductor(), s)
}

fn scalar(f: &CycloWeilField, coeffs: &[(i64, i64, i64)]) -> CwScalar {
    let mut acc = f.zero();
    for &(c, k, w) in coeffs {
        let term = &(&f.from_int(c) * &f.zeta_pow(k)) * &f.sqrt_q_pow(w);
        acc = &acc + &term;
    }
    acc
}

fn coeffs() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((-4i64..=4, 0i64..24, -2i64..=2), 1..4)
}

// ---------------------------------------------------------------------------
// building blocks

/// `unr(ζ^k · √q^{m−2}) ⊗ sp(m)`, pure of weight `−1` after pairing with its
/// twisted dual.
fn hyperbolic(f: &CycloWeilField, k: i64, m: usize) -> (SympPairing, Matrix) {
    let alpha = f.zeta_pow(k).try_mul(&f.sqrt_q_pow(m as i64 - 2)).unwrap();
    let x = WdRep::make_unr(&alpha)
        .unwrap()
        .tensor(&WdRep::make_sp(f, m as i64).unwrap())
        .unwrap();
    hyperbolic_pair(&x).unwrap()
}

#[derive(Clone, Debug)]
enum BlockPlan {
    Hyperbolic { k: i64, m: usize },
    Special { m: usize, plus: bool },
}

fn block_plan() -> impl Strategy<Value = BlockPlan> {
    prop_oneof![
        (0i64..24, 1usize..=2).prop_map(|(k, m)| BlockPlan::Hyperbolic { k, m }),
        (prop_oneof![Just(2usize), Just(4)], any::<bool>())
            .prop_map(|(m, plus)| BlockPlan::Special { m, plus }),
    ]
}

fn sign_of(plus: bool) -> Sign {
    if plus {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn build(f: &CycloWeilField, s: &BlockPlan) -> (SympPairing, Matrix) {
    match *s {
        BlockPlan::Hyperbolic { k, m } => hyperbolic(f, k, m),
        BlockPlan::Special { m, plus } => special_symplectic(f, m, sign_of(plus)).unwrap(),
    }
}

fn assemble(f: &CycloWeilField, plans: &[BlockPlan]) -> (SympPairing, Matrix) {
    let mut iter = plans.iter().map(|s| build(f, s));
    let (mut p, mut lag) = iter.next().unwrap();
    for (q, l) in iter {
        p = p.direct_sum(&q).unwrap();
        lag = lag.block_diag(&l);
    }
    (p, lag)
}

/// `L·U` with unit diagonals and entries in `{−1, 0, 1}`, then a column swap.
fn unimodular(f: &CycloWeilField, d: usize, entries: &[i64], swap: usize) -> Matrix {
    let mut lower = vec![vec![0i64; d]; d];
    let mut upper = vec![vec![0i64; d]; d];
    let mut it = entries.iter().cycle();
    for i in 0..d {
        lower[i][i] = 1;
        upper[i][i] = 1;
        for j in 0..i {
            lower[i][j] = *it.next().unwrap();
            upper[j][i] = *it.next().unwrap();
        }
    }
    let l: Vec<&[i64]> = lower.iter().map(Vec::as_slice).collect();
    let u: Vec<&[i64]> = upper.iter().map(Vec::as_slice).collect();
    let b = Matrix::from_ints(f, &l).mul(&Matrix::from_ints(f, &u));
    let mut order: Vec<usize> = (0..d).collect();
    order.swap(0, swap % d);
    b.select_columns(&order)
}

fn ints() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-1i64..=1, 8..16)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn field_arithmetic_matches_complex_embedding(
        idx in 0usize..6, a in coeffs(), b in coeffs()
    ) {
        let f = field(idx);
        let (x, y) = (scalar(&f, &a), scalar(&f, &b));
        prop_assert!(embed(&(&x * &y)).close(embed(&x).mul(embed(&y))));
        prop_assert!(embed(&(&x + &y)).close(embed(&x).add(embed(&y))));
        if !y.is_zero() {
            let inv = embed(&y.inv().unwrap());
            prop_assert!(inv.mul(embed(&y)).close(C(1.0, 0.0)));
        }
        let conj = embed(&x.conj());
        let ex = embed(&x);
        prop_assert!(conj.close(C(ex.0, -ex.1)));
    }

    #[test]
    fn scalar_text_round_trips(idx in 0usize..6, a in coeffs()) {
        let x = scalar(&field(idx), &a);
        let back: CwScalar = x.to_string().parse().unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(x.field().parse_terms(&x.to_terms()).unwrap(), x);
    }

    #[test]
    fn hyperbolic_pairs_are_valid_and_pure(idx in 0usize..6, k in 0i64..24, m in 1usize..=3) {
        let f = field(idx);
        let (p, lag) = hyperbolic(&f, k, m);
        prop_assert!(p.rep().is_pure(-1).holds());
        let split = LagrangianSplit::new(&p, lag).unwrap();
        prop_assert_eq!(split.plus().dim(), m);
    }

    #[test]
    fn special_blocks_are_pure_and_decompose_to_themselves(
        idx in 0usize..6, half in 1usize..=3, plus in any::<bool>()
    ) {
        let f = field(idx);
        let (p, _) = special_symplectic(&f, 2 * half, sign_of(plus)).unwrap();
        prop_assert!(p.rep().is_pure(-1).holds());
        let blocks = decompose_symplectic(&p).unwrap();
        prop_assert_eq!(blocks.len(), 1);
        prop_assert_eq!(blocks[0].kind, BlockKind::Special(sign_of(plus)));
        prop_assert_eq!(blocks[0].length, 2 * half);
    }

    #[test]
    fn decomposition_recovers_special_blocks(
        idx in 0usize..6, plans in prop::collection::vec(block_plan(), 1..=3),
        entries in ints(), swap in 0usize..8
    ) {
        let f = field(idx);
        // a self-dual hyperbolic block may also split as two special blocks
        prop_assume!(plans.iter().all(|s| match *s {
            BlockPlan::Hyperbolic { k, .. } => f.zeta_pow(2 * k) != f.one(),
            BlockPlan::Special { .. } => true,
        }));
        let (p, _) = assemble(&f, &plans);
        let b = unimodular(&f, p.dim(), &entries, swap);
        let moved = p.change_basis(&b).unwrap();
        let blocks = decompose_symplectic(&moved).unwrap();
        prop_assert_eq!(blocks.iter().map(|bl| bl.dim()).sum::<usize>(), p.dim());
        for sign in [Sign::Plus, Sign::Minus] {
            let mut planted: Vec<usize> = plans.iter().filter_map(|s| match *s {
                BlockPlan::Special { m, plus } if sign_of(plus) == sign => Some(m),
                _ => None,
            }).collect();
            let mut found: Vec<usize> = blocks.iter()
                .filter(|bl| bl.kind == BlockKind::Special(sign))
                .map(|bl| bl.length)
                .collect();
            planted.sort_unstable();
            found.sort_unstable();
            prop_assert_eq!(found, planted);
        }
    }

    #[test]
    fn snake_form_is_symmetric(
        idx in 0usize..6, plans in prop::collection::vec(block_plan(), 1..=3)
    ) {
        let f = field(idx);
        let (p, lag) = assemble(&f, &plans);
        let split = LagrangianSplit::new(&p, lag).unwrap();
        let snake = snake_pairing(&p, &split).unwrap();
        prop_assert_eq!(snake.gram.transpose(), snake.gram.clone());
    }

    #[test]
    fn epsilon_is_multiplicative(
        idx in 0usize..6, a in block_plan(), b in block_plan(), twist_a in any::<bool>()
    ) {
        let f = field(idx);
        let (pa, _) = build(&f, &a);
        let pa = if twist_a { quadratic_twist(&pa) } else { pa };
        let (pb, _) = build(&f, &b);
        let sum = pa.direct_sum(&pb).unwrap();
        prop_assert_eq!(
            eps_sign(&sum).unwrap(),
            eps_sign(&pa).unwrap() * eps_sign(&pb).unwrap()
        );
    }

    #[test]
    fn epsilon_is_invariant_under_change_of_basis(
        idx in 0usize..6, plans in prop::collection::vec(block_plan(), 1..=3),
        entries in ints(), swap in 0usize..8
    ) {
        let f = field(idx);
        let (p, _) = assemble(&f, &plans);
        let b = unimodular(&f, p.dim(), &entries, swap);
        prop_assert_eq!(eps_sign(&p.change_basis(&b).unwrap()).unwrap(), eps_sign(&p).unwrap());
    }

    #[test]
    fn numerology_duality(
        d in 1usize..=4, kdeg in 1usize..=3,
        weights in prop::collection::vec(-3i64..=3, 12),
        h in prop::collection::vec(0usize..=12, 4)
    ) {
        let bound = d * kdeg;
        let ht = HodgeTateData::new(weights[..bound].iter().map(|&w| (w, 1)));
        let (h0_t, h0_dual_t) = (h[0] % (bound + 1), h[2] % (bound + 1));
        let (h0, h0_dual) = (h[1] % (h0_t + 1), h[3] % (h0_dual_t + 1));
        if let Ok(n) = DeRhamNumerology::new(d, kdeg, ht, h0, h0_t, h0_dual, h0_dual_t) {
            prop_assert_eq!(&n.dual().dual(), &n);
            let checks = duality_checks(&n).unwrap();
            prop_assert!(checks.iter().all(|c| c.passed), "{:?}", checks);
        }
    }

    #[test]
    fn monodromy_filtration_of_conjugated_jordan_forms(
        sizes in prop::collection::vec(1usize..=4, 1..=3),
        entries in ints(), swap in 0usize..8
    ) {
        let f = field(0);
        let mut n = Matrix::zeros(&f, 0, 0);
        for &s in &sizes {
            n = n.block_diag(WdRep::make_sp(&f, s as i64).unwrap().monodromy());
        }
        let b = unimodular(&f, n.rows(), &entries, swap);
        let conj = b.inverse().unwrap().mul(&n).mul(&b);
        let filt = MonodromyFiltration::compute(&conj);
        prop_assert!(filt.verify(&conj));
        let dims = filt.graded_dims();
        for (i, d) in &dims {
            prop_assert_eq!(dims.get(&-i).copied().unwrap_or(0), *d);
        }
        prop_assert_eq!(dims.values().sum::<usize>(), n.rows());
    }
}

/// Tensor with the ramified quadratic character sending `Art(−1)` to `−1`.
fn quadratic_twist(p: &SympPairing) -> SympPairing {
    let f = p.field();
    let d = p.dim();
    let id = Matrix::identity(f, d);
    let rep = WdRep::new(
        p.rep().frobenius().clone(),
        p.rep().monodromy().clone(),
        vec![id.clone(), id.neg()],
        1,
    )
    .unwrap();
    SympPairing::validate(rep, p.gram().clone()).unwrap()
}
