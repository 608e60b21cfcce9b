//! Symplectic self-duality `V × V → unr(q⁻¹)`: pairing validation, Lagrangian
//! splittings, classification of pure unramified objects into hyperbolic and
//! special blocks, and the symmetric form induced by monodromy on the
//! quotient.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{weil_weight_elem, CwScalar, CycloWeilField, Elem};
use crate::matrix::{subspace, Matrix};
use crate::roots;
use crate::sign::Sign;
use crate::wd::{intertwiners, WdRep};

/// A Weil-Deligne representation with a skew Gram matrix `J` satisfying
/// `FᵀJF = q⁻¹J`, `NᵀJ + JN = 0` and `gᵀJg = J` for `g` in inertia.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SympPairing {
    rep: WdRep,
    gram: Matrix,
}

impl SympPairing {
    pub fn validate(rep: WdRep, gram: Matrix) -> Result<Self> {
        let d = rep.dim();
        if gram.field() != rep.field() {
            return Err(Error::MixedFields(
                alloc::string::ToString::to_string(gram.field()),
                alloc::string::ToString::to_string(rep.field()),
            ));
        }
        if gram.rows() != d || gram.cols() != d {
            return Err(Error::DimensionMismatch {
                what: "Gram matrix",
                expected: d,
                found: gram.rows().max(gram.cols()),
            });
        }
        if gram.transpose() != gram.neg() {
            return Err(Error::Pairing("not skew"));
        }
        if d % 2 == 1 || gram.inverse().is_none() {
            return Err(Error::Pairing("not nondegenerate skew"));
        }
        let f = rep.frobenius();
        let qinv = rep.field().q_pow_elem(-1);
        if f.transpose().mul(&gram).mul(f) != gram.scale_elem(&qinv) {
            return Err(Error::Pairing("Frobenius does not scale the form by q^-1"));
        }
        let n = rep.monodromy();
        if !n.transpose().mul(&gram).add(&gram.mul(n)).is_zero() {
            return Err(Error::Pairing("monodromy is not anti-self-adjoint"));
        }
        for g in rep.inertia() {
            if g.transpose().mul(&gram).mul(g) != gram {
                return Err(Error::Pairing("inertia does not preserve the form"));
            }
        }
        Ok(SympPairing { rep, gram })
    }

    pub fn rep(&self) -> &WdRep {
        &self.rep
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn field(&self) -> &CycloWeilField {
        self.rep.field()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    /// `vᵀ J w` for column blocks `v`, `w`.
    pub fn pair(&self, v: &Matrix, w: &Matrix) -> Matrix {
        v.transpose().mul(&self.gram).mul(w)
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &SympPairing) -> Result<SympPairing> {
        let rep = self.rep.direct_sum(&other.rep)?;
        SympPairing::validate(rep, self.gram.block_diag(&other.gram))
    }

    /// The same pairing in the basis given by the columns of `basis`.
    pub fn change_basis(&self, basis: &Matrix) -> Result<SympPairing> {
        let rep = self.rep.change_basis(basis)?;
        SympPairing::validate(rep, basis.transpose().mul(&self.gram).mul(basis))
    }

    /// Restriction to a stable subspace on which the form is nondegenerate.
    pub fn restrict(&self, basis: &Matrix) -> Result<SympPairing> {
        let rep = self.rep.subrep(basis)?;
        SympPairing::validate(rep, self.pair(basis, basis))
    }

    /// Replaces Frobenius by its semisimple part; the form is unchanged.
    pub fn frobenius_semisimplification(&self) -> Result<SympPairing> {
        let rep = self
            .rep
            .semisimplify(crate::wd::SemisimpleKind::Frobenius)?;
        SympPairing::validate(rep, self.gram.clone())
    }

    /// The same data with `N = 0`.
    pub fn forget_monodromy(&self) -> SympPairing {
        SympPairing {
            rep: self.rep.without_monodromy(),
            gram: self.gram.clone(),
        }
    }
}

/// `J⁻¹ Xᵀ J`, the adjoint of `X` for the form.
fn adjoint_for(gram: &Matrix, x: &Matrix) -> Matrix {
    let inv = gram.inverse().expect("nondegenerate form");
    inv.mul(&x.transpose()).mul(gram)
}

/// `x ⊕ x^*(1)` with `⟨(a, a'), (b, b')⟩ = a'(b) − b'(a)`, together with the
/// Lagrangian basis spanning `x`.
pub fn hyperbolic_pair(x: &WdRep) -> Result<(SympPairing, Matrix)> {
    let f = x.field();
    let n = x.dim();
    let rep = x.direct_sum(&x.dual_twist1())?;
    let id = Matrix::identity(f, n);
    let zero = Matrix::zeros(f, n, n);
    let gram = zero.hstack(&id.neg()).vstack(&id.hstack(&zero));
    let lagrangian = id.vstack(&zero);
    Ok((SympPairing::validate(rep, gram)?, lagrangian))
}

/// `unr(±q^{m/2−1}) ⊗ sp(m)` with `J[i][m−1−i] = (−1)^i`, together with the
/// Lagrangian basis `e_{m/2}, …, e_{m−1}` (the kernel of `N^{m/2}`).
pub fn special_symplectic(
    field: &CycloWeilField,
    m: usize,
    sign: Sign,
) -> Result<(SympPairing, Matrix)> {
    if m == 0 || m % 2 == 1 {
        return Err(Error::Precondition(format!(
            "special symplectic block needs an even positive length, got {m}"
        )));
    }
    let alpha = field
        .q_pow(m as i64 / 2 - 1)
        .try_mul(&field.from_int(sign.as_i8() as i64))?;
    let rep = WdRep::make_unr(&alpha)?.tensor(&WdRep::make_sp(field, m as i64)?)?;
    let mut gram = Matrix::zeros(field, m, m);
    for i in 0..m {
        let v = if i % 2 == 0 { 1 } else { -1 };
        gram.set(i, m - 1 - i, field.int_elem(v));
    }
    let lagrangian = Matrix::identity(field, m).select_columns(&(m / 2..m).collect::<Vec<_>>());
    Ok((SympPairing::validate(rep, gram)?, lagrangian))
}

/// A stable Lagrangian `Δ⁺ ⊆ Δ` and the quotient `Δ⁻ = Δ/Δ⁺`.
#[derive(Clone, Debug)]
pub struct LagrangianSplit {
    plus_basis: Matrix,
    minus_basis: Matrix,
    plus: WdRep,
    minus: WdRep,
    cross: Matrix,
}

impl LagrangianSplit {
    /// Checks independence, half dimension, stability, isotropy and that the
    /// pairing identifies `Δ⁺` with `(Δ⁻)^*(1)`.
    pub fn new(pairing: &SympPairing, plus_basis: Matrix) -> Result<Self> {
        let d = pairing.dim();
        if plus_basis.rows() != d {
            return Err(Error::DimensionMismatch {
                what: "Lagrangian basis",
                expected: d,
                found: plus_basis.rows(),
            });
        }
        if plus_basis.cols() > 0 && plus_basis.rank() != plus_basis.cols() {
            return Err(Error::Lagrangian("basis vectors are dependent"));
        }
        if 2 * plus_basis.cols() != d {
            return Err(Error::Lagrangian("not half-dimensional"));
        }
        let rep = pairing.rep();
        if !rep.is_stable(&plus_basis) {
            return Err(Error::Lagrangian("not stable under F, N and inertia"));
        }
        if !pairing.pair(&plus_basis, &plus_basis).is_zero() {
            return Err(Error::Lagrangian("not isotropic"));
        }
        let plus = rep.subrep(&plus_basis)?;
        let (minus, minus_basis) = rep.quotient(&plus_basis)?;
        let cross = pairing.pair(&plus_basis, &minus_basis);
        if cross.inverse().is_none() {
            return Err(Error::Lagrangian(
                "pairing between the two halves is degenerate",
            ));
        }
        let qinv = pairing.field().q_pow_elem(-1);
        let frob_ok = plus
            .frobenius()
            .transpose()
            .mul(&cross)
            .mul(minus.frobenius())
            == cross.scale_elem(&qinv);
        let mono_ok = plus
            .monodromy()
            .transpose()
            .mul(&cross)
            .add(&cross.mul(minus.monodromy()))
            .is_zero();
        let inertia_ok = plus
            .inertia()
            .iter()
            .zip(minus.inertia())
            .all(|(gp, gm)| gp.transpose().mul(&cross).mul(gm) == cross);
        if !(frob_ok && mono_ok && inertia_ok) {
            return Err(Error::Lagrangian("halves are not dual up to the twist"));
        }
        Ok(LagrangianSplit {
            plus_basis,
            minus_basis,
            plus,
            minus,
            cross,
        })
    }

    /// `Δ⁺` in the given basis.
    pub fn plus(&self) -> &WdRep {
        &self.plus
    }

    /// `Δ⁻`, presented on the complement basis.
    pub fn minus(&self) -> &WdRep {
        &self.minus
    }

    pub fn plus_basis(&self) -> &Matrix {
        &self.plus_basis
    }

    /// Ambient vectors lifting the basis of `Δ⁻`.
    pub fn minus_basis(&self) -> &Matrix {
        &self.minus_basis
    }

    /// `⟨Δ⁺, Δ⁻⟩` in the two bases.
    pub fn cross_pairing(&self) -> &Matrix {
        &self.cross
    }
}

/// Shape of an orthogonal summand in the classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// `x ⊕ x^*(1)` with `x = unr(α) ⊗ sp(m)`.
    Hyperbolic,
    /// `unr(±q^{m/2−1}) ⊗ sp(m)`, `m` even.
    Special(Sign),
}

/// One orthogonal summand with ambient bases of the summand and of a
/// stable Lagrangian inside it.
#[derive(Clone, Debug)]
pub struct SymplecticBlock {
    pub kind: BlockKind,
    pub length: usize,
    pub top_eigenvalue: CwScalar,
    pub basis: Matrix,
    pub lagrangian: Matrix,
}

impl SymplecticBlock {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

fn chain(mono: &Matrix, v: &Matrix, len: usize) -> Matrix {
    let mut out = v.clone();
    let mut cur = v.clone();
    for _ in 1..len {
        cur = mono.mul(&cur);
        out = out.hstack(&cur);
    }
    out
}

fn frobenius_is_semisimple(rep: &WdRep, eig: &[(Elem, usize)]) -> bool {
    eig.iter()
        .map(|(l, _)| rep.eigenspace_elem(l).cols())
        .sum::<usize>()
        == rep.dim()
}

pub(crate) fn require_pure(rep: &WdRep, weight: i64) -> Result<()> {
    let purity = rep.is_pure(weight);
    if purity.holds() {
        Ok(())
    } else {
        Err(Error::NotPure {
            weight,
            reason: format!("{purity:?}"),
        })
    }
}

/// Orthogonal decomposition of a pure weight −1, Frobenius-semisimple,
/// unramified symplectic object into hyperbolic and special blocks.
///
/// Vectors of eigenvalue `λ` killed by `N^m`, with `λ` of weight `m − 2`, are
/// the tops of the length-`m` strings; `B(v, w) = ⟨v, N^{m−1} w⟩` pairs the
/// tops with eigenvalue `λ` against those with eigenvalue `q^{m−2}/λ`.
pub fn decompose_symplectic(pairing: &SympPairing) -> Result<Vec<SymplecticBlock>> {
    let rep = pairing.rep();
    let f = pairing.field();
    let d = rep.dim();
    if !rep.inertia_is_trivial() {
        return Err(Error::Precondition("inertia must act trivially".into()));
    }
    let eig = rep.frob_eigen_elems()?;
    if !frobenius_is_semisimple(rep, &eig) {
        return Err(Error::Precondition("Frobenius is not semisimple".into()));
    }
    require_pure(rep, -1)?;
    let mono = rep.monodromy();
    let mut blocks = Vec::new();
    let mut handled: Vec<Elem> = Vec::new();
    for (lambda, _) in &eig {
        if handled.contains(lambda) {
            continue;
        }
        let weight = weil_weight_elem(f, lambda).expect("purity checked the weights");
        let m = weight + 2;
        if m < 1 {
            continue;
        }
        let m = m as usize;
        let tops =
            subspace::intersection(&rep.eigenspace_elem(lambda), &mono.pow(m as u32).kernel());
        if tops.cols() == 0 {
            continue;
        }
        let partner = f.mul_elem(
            &f.q_pow_elem(m as i64 - 2),
            &f.inv_elem(lambda).expect("eigenvalues are nonzero"),
        );
        let top_form = mono.pow(m as u32 - 1);
        let form = |v: &Matrix, w: &Matrix| pairing.pair(v, &top_form.mul(w));
        handled.push(lambda.clone());
        if partner != *lambda {
            handled.push(partner.clone());
            let dual_tops = subspace::intersection(
                &rep.eigenspace_elem(&partner),
                &mono.pow(m as u32).kernel(),
            );
            let g = form(&tops, &dual_tops);
            let ginv = g.inverse().ok_or_else(|| {
                Error::Unclassified(format!("degenerate top pairing in length {m}"))
            })?;
            let dual_tops = dual_tops.mul(&ginv);
            for i in 0..tops.cols() {
                let x = chain(mono, &tops.column(i), m);
                let y = chain(mono, &dual_tops.column(i), m);
                blocks.push(SymplecticBlock {
                    kind: BlockKind::Hyperbolic,
                    length: m,
                    top_eigenvalue: f.wrap(lambda.clone()),
                    basis: x.hstack(&y),
                    lagrangian: x,
                });
            }
        } else if m.is_multiple_of(2) {
            let sign = f
                .inv_elem(&f.q_pow_elem(m as i64 / 2 - 1))
                .map(|c| f.mul_elem(lambda, &c))
                .and_then(|s| {
                    if f.is_one_elem(&s) {
                        Some(Sign::Plus)
                    } else if f.is_one_elem(&f.neg_elem(&s)) {
                        Some(Sign::Minus)
                    } else {
                        None
                    }
                })
                .ok_or_else(|| {
                    Error::Unclassified("self-dual top eigenvalue is not ±q^{m/2-1}".into())
                })?;
            for v in orthogonal_basis(&tops, &form)? {
                let x = chain(mono, &v, m);
                let lagrangian = x.select_columns(&(m / 2..m).collect::<Vec<_>>());
                blocks.push(SymplecticBlock {
                    kind: BlockKind::Special(sign),
                    length: m,
                    top_eigenvalue: f.wrap(lambda.clone()),
                    basis: x,
                    lagrangian,
                });
            }
        } else {
            for (v, w) in symplectic_basis(&tops, &form)? {
                let x = chain(mono, &v, m);
                let y = chain(mono, &w, m);
                blocks.push(SymplecticBlock {
                    kind: BlockKind::Hyperbolic,
                    length: m,
                    top_eigenvalue: f.wrap(lambda.clone()),
                    basis: x.hstack(&y),
                    lagrangian: x,
                });
            }
        }
    }
    let total: usize = blocks.iter().map(SymplecticBlock::dim).sum();
    if total != d {
        return Err(Error::Unclassified(format!(
            "blocks cover dimension {total} of {d}"
        )));
    }
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            if !pairing.pair(&a.basis, &b.basis).is_zero() {
                return Err(Error::Unclassified("blocks are not orthogonal".into()));
            }
        }
    }
    Ok(blocks)
}

/// Diagonalizes a symmetric form on the span of `basis` (one vector per
/// returned column).
fn orthogonal_basis(
    basis: &Matrix,
    form: &dyn Fn(&Matrix, &Matrix) -> Matrix,
) -> Result<Vec<Matrix>> {
    let f = basis.field().clone();
    let mut pool: Vec<Matrix> = (0..basis.cols()).map(|j| basis.column(j)).collect();
    let mut out = Vec::new();
    let value = |a: &Matrix, b: &Matrix| form(a, b).at(0, 0).clone();
    while !pool.is_empty() {
        let pick = match pool
            .iter()
            .position(|v| !CycloWeilField::is_zero_elem(&value(v, v)))
        {
            Some(i) => i,
            None => {
                let mut found = None;
                'search: for i in 0..pool.len() {
                    for j in i + 1..pool.len() {
                        if !CycloWeilField::is_zero_elem(&value(&pool[i], &pool[j])) {
                            found = Some((i, j));
                            break 'search;
                        }
                    }
                }
                let (i, j) = found
                    .ok_or_else(|| Error::Unclassified("degenerate symmetric top form".into()))?;
                pool[i] = pool[i].add(&pool[j]);
                i
            }
        };
        let v = pool.swap_remove(pick);
        let norm_inv = f.inv_elem(&value(&v, &v)).expect("nonzero by choice");
        for u in pool.iter_mut() {
            let c = f.mul_elem(&value(u, &v), &norm_inv);
            *u = u.sub(&v.scale_elem(&c));
        }
        out.push(v);
    }
    Ok(out)
}

/// Symplectic basis `(v_i, w_i)` with `B(v_i, w_j) = δ_ij` for a skew form.
fn symplectic_basis(
    basis: &Matrix,
    form: &dyn Fn(&Matrix, &Matrix) -> Matrix,
) -> Result<Vec<(Matrix, Matrix)>> {
    let f = basis.field().clone();
    let mut pool: Vec<Matrix> = (0..basis.cols()).map(|j| basis.column(j)).collect();
    let mut out = Vec::new();
    let value = |a: &Matrix, b: &Matrix| form(a, b).at(0, 0).clone();
    while let Some(v) = pool.pop() {
        let j = pool
            .iter()
            .position(|w| !CycloWeilField::is_zero_elem(&value(&v, w)))
            .ok_or_else(|| Error::Unclassified("degenerate skew top form".into()))?;
        let w = pool.swap_remove(j);
        let inv = f.inv_elem(&value(&v, &w)).expect("nonzero by choice");
        let w = w.scale_elem(&inv);
        for u in pool.iter_mut() {
            let a = value(u, &w);
            let b = value(u, &v);
            *u = u.sub(&v.scale_elem(&a)).add(&w.scale_elem(&b));
        }
        out.push((v, w));
    }
    Ok(out)
}

/// The symmetric form `⟨N x, x'⟩` on `Δ^{−, N=0, f∼1}`, with `x`, `x'` any lifts.
#[derive(Clone, Debug)]
pub struct SnakeForm {
    /// Basis of the space in the coordinates of `Δ⁻`.
    pub basis: Matrix,
    pub gram: Matrix,
    /// Frobenius restricted to the space.
    pub frobenius: Matrix,
}

impl SnakeForm {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

pub fn snake_pairing(pairing: &SympPairing, split: &LagrangianSplit) -> Result<SnakeForm> {
    require_pure(pairing.rep(), -1)?;
    let f = pairing.field();
    let minus = split.minus();
    let dm = minus.dim();
    let one = f.one_elem();
    let generalized = minus.frobenius().shift(&one).generalized_kernel();
    let basis = subspace::intersection(&minus.monodromy().kernel(), &generalized);
    if basis.cols() == 0 {
        return Ok(SnakeForm {
            basis: Matrix::zeros(f, dm, 0),
            gram: Matrix::zeros(f, 0, 0),
            frobenius: Matrix::zeros(f, 0, 0),
        });
    }
    let lifts = split.minus_basis().mul(&basis);
    let gram = snake_gram(pairing, &lifts);
    let frobenius =
        subspace::restrict(minus.frobenius(), &basis).expect("space is Frobenius-stable");
    Ok(SnakeForm {
        basis,
        gram,
        frobenius,
    })
}

pub(crate) fn snake_gram(pairing: &SympPairing, lifts: &Matrix) -> Matrix {
    pairing.pair(&pairing.rep().monodromy().mul(lifts), lifts)
}

/// For a nondegenerate symmetric form preserved by `frob`, checks that the
/// exact and generalized eigenvalue-1 spaces of `frob` have equal parity.
pub fn parity_congruence_check(gram: &Matrix, frob: &Matrix) -> Result<bool> {
    let n = gram.rows();
    if gram.transpose() != *gram {
        return Err(Error::Precondition("form is not symmetric".into()));
    }
    if n > 0 && gram.inverse().is_none() {
        return Err(Error::Precondition("form is degenerate".into()));
    }
    if frob.transpose().mul(gram).mul(frob) != *gram {
        return Err(Error::Precondition("operator is not orthogonal".into()));
    }
    let one = gram.field().one_elem();
    let exact = frob.shift(&one).kernel().cols();
    let generalized = frob.shift(&one).generalized_kernel().cols();
    Ok((exact + generalized).is_multiple_of(2))
}

/// A Lagrangian stable under Frobenius, monodromy and inertia, found by
/// splitting along self- and anti-self-adjoint elements of the commutant.
pub fn find_stable_lagrangian(pairing: &SympPairing) -> Result<Matrix> {
    let rep = pairing.rep();
    let mut ops = vec![rep.frobenius().clone()];
    if !rep.monodromy().is_zero() {
        ops.push(rep.monodromy().clone());
    }
    for g in rep.inertia_group() {
        if !g.is_identity() {
            ops.push(g);
        }
    }
    let mut state = 0x2545_f491_4f6c_dd1d_u64;
    let hint = rep.eigen_spaces().ok().map(|spaces| EigenHint {
        op: 0,
        eig: spaces.iter().map(|(l, k, _)| (l.clone(), *k)).collect(),
        spaces: Some(spaces.into_iter().map(|(_, _, s)| s).collect()),
    });
    lagrangian_in(&ops, pairing.gram(), &mut state, 0, hint)
}

/// Known eigenvalues (and optionally generalized eigenspaces) of `ops[op]`.
struct EigenHint {
    op: usize,
    eig: Vec<(Elem, usize)>,
    spaces: Option<Vec<Matrix>>,
}

const SPLIT_ATTEMPTS: usize = 24;
const MAX_DEPTH: usize = 64;

fn lagrangian_in(
    ops: &[Matrix],
    gram: &Matrix,
    state: &mut u64,
    depth: usize,
    hint: Option<EigenHint>,
) -> Result<Matrix> {
    let f = gram.field().clone();
    let d = gram.rows();
    if d == 0 {
        return Ok(Matrix::zeros(&f, 0, 0));
    }
    if depth > MAX_DEPTH {
        return Err(Error::NoStableLagrangian("splitting did not terminate"));
    }
    if ops.iter().all(|o| o.scalar_value().is_some()) {
        return Ok(half_symplectic_basis(gram));
    }
    // a monodromy-type operator has stable isotropic images of its powers
    if let Some(nil) = ops
        .iter()
        .find(|o| !o.is_zero() && o.is_nilpotent() && adjoint_for(gram, o) == o.neg())
    {
        return reduce_isotropic(ops, gram, &nilpotent_isotropic(nil), state, depth);
    }
    if let Some(found) = similitude_split(ops, gram, state, depth, hint) {
        return found;
    }
    let pairs: Vec<(&Matrix, &Matrix)> = ops.iter().map(|o| (o, o)).collect();
    let commutant = intertwiners(&pairs).unwrap_or_default();
    if commutant.len() <= 1 {
        return Err(Error::NoStableLagrangian(
            "irreducible symplectic constituent",
        ));
    }
    for attempt in 0..SPLIT_ATTEMPTS {
        let x = if attempt < commutant.len() {
            commutant[attempt].clone()
        } else {
            let mut acc = Matrix::zeros(&f, d, d);
            for m in &commutant {
                *state ^= *state << 13;
                *state ^= *state >> 7;
                *state ^= *state << 17;
                let c = (*state % 11) as i64 - 5;
                acc = acc.add(&m.scale_elem(&f.int_elem(c)));
            }
            acc
        };
        if x.scalar_value().is_some() {
            continue;
        }
        let adj = adjoint_for(gram, &x);
        let sym = x.add(&adj);
        let anti = x.sub(&adj);
        if sym.scalar_value().is_none() {
            let Ok(eig) = roots::eigenvalues(&sym, "commutant element") else {
                continue;
            };
            if eig.len() >= 2 {
                // eigenspaces of a self-adjoint element are orthogonal
                let mut out = Matrix::zeros(&f, d, 0);
                for (lambda, _) in &eig {
                    let space = sym.shift(lambda).generalized_kernel();
                    let sub_ops: Vec<Matrix> = ops
                        .iter()
                        .map(|o| {
                            subspace::restrict(o, &space).expect("commutant eigenspaces are stable")
                        })
                        .collect();
                    let sub_gram = space.transpose().mul(gram).mul(&space);
                    let inner = lagrangian_in(&sub_ops, &sub_gram, state, depth + 1, None)?;
                    out = out.hstack(&space.mul(&inner));
                }
                return Ok(out);
            }
            let nil = sym.shift(&eig[0].0);
            return reduce_isotropic(ops, gram, &nilpotent_isotropic(&nil), state, depth);
        }
        if !anti.is_zero() {
            let Ok(eig) = roots::eigenvalues(&anti, "commutant element") else {
                continue;
            };
            if let Some((lambda, _)) = eig.iter().find(|(l, _)| !CycloWeilField::is_zero_elem(l)) {
                // J(E_λ, E_μ) = 0 unless λ + μ = 0
                let space = anti.shift(lambda).generalized_kernel();
                return reduce_isotropic(ops, gram, &space, state, depth);
            }
            return reduce_isotropic(ops, gram, &nilpotent_isotropic(&anti), state, depth);
        }
    }
    Err(Error::NoStableLagrangian(
        "commutant elements do not split over the field",
    ))
}

/// Splits along the eigenspaces of an operator `X` that commutes with every
/// other operator and scales the form by `c`. Then `E_λ ⊥ E_μ` unless
/// `λμ = c`, so eigenvalue classes `{λ, c/λ}` give an orthogonal sum, and a
/// single class with `λ² ≠ c` makes `E_λ` a stable Lagrangian candidate.
fn similitude_split(
    ops: &[Matrix],
    gram: &Matrix,
    state: &mut u64,
    depth: usize,
    hint: Option<EigenHint>,
) -> Option<Result<Matrix>> {
    let f = gram.field().clone();
    let d = gram.rows();
    let mut hint = hint;
    for (idx, x) in ops.iter().enumerate() {
        if x.scalar_value().is_some() || ops.iter().any(|o| o.mul(x) != x.mul(o)) {
            continue;
        }
        let Some(c) = adjoint_for(gram, x).mul(x).scalar_value() else {
            continue;
        };
        let (eig, known_spaces) = match hint.take() {
            Some(h) if h.op == idx => (h.eig, h.spaces),
            other => {
                hint = other;
                let Ok(eig) = roots::eigenvalues(x, "similitude") else {
                    continue;
                };
                (eig, None)
            }
        };
        if eig.iter().map(|(_, k)| k).sum::<usize>() != d {
            continue;
        }
        let partner = |l: &Elem| f.mul_elem(&c, &f.inv_elem(l).expect("eigenvalue of invertible"));
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for (i, (l, _)) in eig.iter().enumerate() {
            if classes.iter().any(|cl| cl.contains(&i)) {
                continue;
            }
            let p = partner(l);
            let mut class = vec![i];
            if let Some(j) = eig.iter().position(|(m, _)| *m == p && m != l) {
                class.push(j);
            }
            classes.push(class);
        }
        let space_of = |i: usize| match &known_spaces {
            Some(spaces) => spaces[i].clone(),
            None => x.shift(&eig[i].0).generalized_kernel(),
        };
        if classes.len() >= 2 {
            let mut out = Matrix::zeros(&f, d, 0);
            for class in &classes {
                let mut space = space_of(class[0]);
                if let Some(&j) = class.get(1) {
                    space = space.hstack(&space_of(j));
                }
                let sub_ops: Vec<Matrix> = ops
                    .iter()
                    .map(|o| {
                        subspace::restrict(o, &space).expect("commuting eigenspaces are stable")
                    })
                    .collect();
                let sub_gram = space.transpose().mul(gram).mul(&space);
                let sub_hint = EigenHint {
                    op: idx,
                    eig: class.iter().map(|&i| eig[i].clone()).collect(),
                    spaces: None,
                };
                match lagrangian_in(&sub_ops, &sub_gram, state, depth + 1, Some(sub_hint)) {
                    Ok(inner) => out = out.hstack(&space.mul(&inner)),
                    Err(e) => return Some(Err(e)),
                }
            }
            return Some(Ok(out));
        }
        if classes[0].len() == 2 {
            let space = space_of(classes[0][0]);
            return Some(reduce_isotropic(ops, gram, &space, state, depth));
        }
    }
    None
}

/// `im M^{⌈e/2⌉}` for a nonzero nilpotent, (anti-)self-adjoint `M` with
/// `M^e = 0`; isotropic because `2⌈e/2⌉ ≥ e`.
fn nilpotent_isotropic(m: &Matrix) -> Matrix {
    let mut e = 1u32;
    while !m.pow(e).is_zero() {
        e += 1;
    }
    m.pow(e.div_ceil(2)).image()
}

/// Given a stable isotropic `W`, solves on `W^⊥/W` and lifts back.
fn reduce_isotropic(
    ops: &[Matrix],
    gram: &Matrix,
    w: &Matrix,
    state: &mut u64,
    depth: usize,
) -> Result<Matrix> {
    let perp = w.transpose().mul(gram).kernel();
    let comp = subspace::relative_complement(w, &perp);
    let sub_ops: Vec<Matrix> = ops
        .iter()
        .map(|o| subspace::quotient_operator(o, w, &comp))
        .collect();
    let sub_gram = comp.transpose().mul(gram).mul(&comp);
    let inner = lagrangian_in(&sub_ops, &sub_gram, state, depth + 1, None)?;
    Ok(w.hstack(&comp.mul(&inner)))
}

/// First halves of a symplectic basis of a nondegenerate skew form.
fn half_symplectic_basis(gram: &Matrix) -> Matrix {
    let f = gram.field();
    let id = Matrix::identity(f, gram.rows());
    let form = |a: &Matrix, b: &Matrix| a.transpose().mul(gram).mul(b);
    let pairs = symplectic_basis(&id, &form).expect("nondegenerate skew form");
    let mut out = Matrix::zeros(f, gram.rows(), 0);
    for (v, _) in pairs {
        out = out.hstack(&v);
    }
    out
}
