//! Weil-Deligne representations with finite inertia image.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use once_cell::race::OnceBox;

use crate::error::{Error, Result};
use crate::field::{weil_weight_elem, CwScalar, CycloWeilField, Elem};
use crate::matrix::{subspace, Matrix};
use crate::roots;

/// Default upper bound on the number of distinct inertia elements.
pub const DEFAULT_INERTIA_BOUND: usize = 10_000;

/// A Weil-Deligne representation `(F, N, I, artm1)`.
///
/// `F` is the matrix of geometric Frobenius, `N` the monodromy operator and
/// `I` an explicit list of matrices closed under products (as a set). The
/// list order matters when two representations with nontrivial inertia are
/// combined: entries are paired by position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WdRep {
    frob: Matrix,
    mono: Matrix,
    inertia: Vec<Matrix>,
    artm1: usize,
    eigen: EigenCache,
}

/// Frobenius eigenvalues and generalized eigenspaces, computed on first use
/// and shared by clones. Ignored by equality.
#[derive(Clone, Default)]
struct EigenCache(Arc<EigenData>);

type EigenSpaces = Vec<(Elem, usize, Matrix)>;

#[derive(Default)]
struct EigenData {
    values: OnceBox<Result<Vec<(Elem, usize)>>>,
    spaces: OnceBox<Result<EigenSpaces>>,
}

impl EigenCache {
    fn known(values: Option<Vec<(Elem, usize)>>, spaces: Option<EigenSpaces>) -> Self {
        let data = EigenData::default();
        if let Some(v) = values {
            let _ = data.values.set(Box::new(Ok(v)));
        }
        if let Some(s) = spaces {
            let _ = data.spaces.set(Box::new(Ok(s)));
        }
        EigenCache(Arc::new(data))
    }

    fn values(&self) -> Option<&Vec<(Elem, usize)>> {
        self.0.values.get().and_then(|r| r.as_ref().ok())
    }

    fn spaces(&self) -> Option<&EigenSpaces> {
        self.0.spaces.get().and_then(|r| r.as_ref().ok())
    }

    /// Cache for `inv · X · basis`: same eigenvalues, spaces moved by `inv`.
    fn conjugate_of(&self, inv: &Matrix) -> Self {
        let spaces = self.spaces().map(|s| {
            s.iter()
                .map(|(l, k, space)| (l.clone(), *k, inv.mul(space)))
                .collect()
        });
        Self::known(self.values().cloned(), spaces)
    }

    /// Cache for `c · F`.
    fn scaled(&self, field: &CycloWeilField, c: &Elem) -> Self {
        let scale = |l: &Elem| field.mul_elem(l, c);
        let values = self
            .values()
            .map(|v| v.iter().map(|(l, k)| (scale(l), *k)).collect());
        let spaces = self.spaces().map(|s| {
            s.iter()
                .map(|(l, k, space)| (scale(l), *k, space.clone()))
                .collect()
        });
        Self::known(values, spaces)
    }

    /// Cache for `F⁻ᵀ`: inverted eigenvalues, spaces unknown.
    fn inverted(&self, field: &CycloWeilField) -> Self {
        let values = self.values().map(|v| {
            v.iter()
                .map(|(l, k)| (field.inv_elem(l).expect("eigenvalue of invertible"), *k))
                .collect()
        });
        Self::known(values, None)
    }

    /// Cache for a block diagonal sum of representations of dimensions
    /// `da` and `db`.
    fn block_sum(a: &Self, da: usize, b: &Self, db: usize, field: &CycloWeilField) -> Self {
        let values = match (a.values(), b.values()) {
            (Some(va), Some(vb)) => {
                let mut out = va.clone();
                for (l, k) in vb {
                    match out.iter_mut().find(|(m, _)| m == l) {
                        Some(slot) => slot.1 += k,
                        None => out.push((l.clone(), *k)),
                    }
                }
                Some(out)
            }
            _ => None,
        };
        let spaces = match (a.spaces(), b.spaces(), &values) {
            (Some(sa), Some(sb), Some(values)) => {
                let upper = |m: &Matrix| m.vstack(&Matrix::zeros(field, db, m.cols()));
                let lower = |m: &Matrix| Matrix::zeros(field, da, m.cols()).vstack(m);
                let pick = |s: &EigenSpaces, l: &Elem| {
                    s.iter()
                        .find(|(m, _, _)| m == l)
                        .map(|(_, _, sp)| sp.clone())
                };
                Some(
                    values
                        .iter()
                        .map(|(l, k)| {
                            let top =
                                pick(sa, l).map_or(Matrix::zeros(field, da + db, 0), |m| upper(&m));
                            let bottom =
                                pick(sb, l).map_or(Matrix::zeros(field, da + db, 0), |m| lower(&m));
                            (l.clone(), *k, top.hstack(&bottom))
                        })
                        .collect(),
                )
            }
            _ => None,
        };
        Self::known(values, spaces)
    }
}

impl PartialEq for EigenCache {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for EigenCache {}

impl core::fmt::Debug for EigenCache {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(if self.0.values.get().is_some() {
            "cached"
        } else {
            "empty"
        })
    }
}

/// Which semisimplification to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemisimpleKind {
    Frobenius,
    Monodromy,
}

/// Outcome of a purity test, with the failing condition when impure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Purity {
    Pure,
    /// The Frobenius characteristic polynomial does not split over the field.
    NonSplit,
    /// An eigenvalue whose absolute values are not a power of √q.
    NotWeilNumber(CwScalar),
    /// `N^i` fails to map the weight `w + i` piece isomorphically onto the
    /// weight `w − i` piece.
    MonodromyMismatch {
        offset: i64,
    },
}

impl Purity {
    pub fn holds(&self) -> bool {
        matches!(self, Purity::Pure)
    }
}

/// The decomposition `V = V^I ⊕ V'` with bases in the ambient space.
#[derive(Clone, Debug)]
pub struct InertiaSplit {
    pub invariant: WdRep,
    pub complement: WdRep,
    pub invariant_basis: Matrix,
    pub complement_basis: Matrix,
}

fn distinct(list: &[Matrix]) -> Vec<Matrix> {
    let mut out: Vec<Matrix> = Vec::new();
    for g in list {
        if !out.contains(g) {
            out.push(g.clone());
        }
    }
    out
}

impl WdRep {
    /// Validates and builds a representation with the default inertia bound.
    pub fn new(frob: Matrix, mono: Matrix, inertia: Vec<Matrix>, artm1: usize) -> Result<Self> {
        Self::with_bound(frob, mono, inertia, artm1, DEFAULT_INERTIA_BOUND)
    }

    pub fn with_bound(
        frob: Matrix,
        mono: Matrix,
        inertia: Vec<Matrix>,
        artm1: usize,
        bound: usize,
    ) -> Result<Self> {
        let rep = WdRep {
            frob,
            mono,
            inertia,
            artm1,
            eigen: EigenCache::default(),
        };
        rep.validate(bound)?;
        Ok(rep)
    }

    /// Representation with trivial inertia.
    pub fn unramified(frob: Matrix, mono: Matrix) -> Result<Self> {
        let id = Matrix::identity(frob.field(), frob.rows());
        Self::new(frob, mono, vec![id], 0)
    }

    fn validate(&self, bound: usize) -> Result<()> {
        let field = self.frob.field();
        let d = self.frob.rows();
        if !self.frob.is_square() {
            return Err(Error::InvalidRep("Frobenius matrix is not square"));
        }
        for m in core::iter::once(&self.mono).chain(&self.inertia) {
            if m.field() != field {
                return Err(Error::MixedFields(
                    alloc::string::ToString::to_string(field),
                    alloc::string::ToString::to_string(m.field()),
                ));
            }
            if m.rows() != d || m.cols() != d {
                return Err(Error::DimensionMismatch {
                    what: "representation matrix",
                    expected: d,
                    found: m.rows().max(m.cols()),
                });
            }
        }
        if self.frob.inverse().is_none() {
            return Err(Error::InvalidRep("Frobenius is not invertible"));
        }
        if !self.mono.is_nilpotent() {
            return Err(Error::InvalidRep("monodromy is not nilpotent"));
        }
        let qinv = field.q_pow_elem(-1);
        if self.frob.mul(&self.mono) != self.mono.mul(&self.frob).scale_elem(&qinv) {
            return Err(Error::InvalidRep("F N F^-1 differs from q^-1 N"));
        }
        if self.inertia.is_empty() || self.artm1 >= self.inertia.len() {
            return Err(Error::InvalidRep("artm1 index outside the inertia list"));
        }
        let set = distinct(&self.inertia);
        if set.len() > bound {
            return Err(Error::InertiaTooLarge {
                found: set.len(),
                bound,
            });
        }
        if !set.iter().any(Matrix::is_identity) {
            return Err(Error::InvalidRep("inertia list lacks the identity"));
        }
        let finv = self.frob.inverse().expect("checked above");
        for g in &set {
            if g.inverse().is_none() {
                return Err(Error::InvalidRep("inertia element is not invertible"));
            }
            if g.mul(&self.mono) != self.mono.mul(g) {
                return Err(Error::InvalidRep("inertia does not commute with N"));
            }
            if !set.contains(&self.frob.mul(g).mul(&finv)) {
                return Err(Error::InvalidRep("Frobenius does not normalize inertia"));
            }
            for h in &set {
                if !set.contains(&g.mul(h)) {
                    return Err(Error::InvalidRep("inertia is not closed under products"));
                }
            }
        }
        Ok(())
    }

    /// `unr(α)`: the one-dimensional representation with Frobenius `α`.
    pub fn make_unr(alpha: &CwScalar) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let f = alpha.field();
        Self::unramified(
            Matrix::diagonal(f, core::slice::from_ref(alpha)),
            Matrix::zeros(f, 1, 1),
        )
    }

    /// `sp(m)`: Frobenius `diag(1, q⁻¹, …, q^{1−m})`, `N e_j = e_{j+1}`.
    pub fn make_sp(field: &CycloWeilField, m: i64) -> Result<Self> {
        if m <= 0 {
            return Err(Error::Precondition(alloc::format!(
                "sp(m) needs m >= 1, got {m}"
            )));
        }
        let m = m as usize;
        let frob = Matrix::diagonal_elems(
            field,
            (0..m).map(|j| field.q_pow_elem(-(j as i64))).collect(),
        );
        let mut mono = Matrix::zeros(field, m, m);
        for j in 0..m.saturating_sub(1) {
            mono.set(j + 1, j, field.one_elem());
        }
        Self::unramified(frob, mono)
    }

    pub fn field(&self) -> &CycloWeilField {
        self.frob.field()
    }

    pub fn dim(&self) -> usize {
        self.frob.rows()
    }

    pub fn frobenius(&self) -> &Matrix {
        &self.frob
    }

    pub fn monodromy(&self) -> &Matrix {
        &self.mono
    }

    pub fn inertia(&self) -> &[Matrix] {
        &self.inertia
    }

    pub fn artm1_index(&self) -> usize {
        self.artm1
    }

    /// Matrix of the image of Art(−1).
    pub fn artm1(&self) -> &Matrix {
        &self.inertia[self.artm1]
    }

    /// Distinct inertia elements.
    pub fn inertia_group(&self) -> Vec<Matrix> {
        distinct(&self.inertia)
    }

    pub fn inertia_is_trivial(&self) -> bool {
        self.inertia.iter().all(Matrix::is_identity)
    }

    /// Nontrivial inertia or nonzero monodromy.
    pub fn is_ramified(&self) -> bool {
        !self.inertia_is_trivial() || !self.mono.is_zero()
    }

    fn same_field(&self, other: &WdRep) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::MixedFields(
                alloc::string::ToString::to_string(self.field()),
                alloc::string::ToString::to_string(other.field()),
            ))
        }
    }

    /// Pairs inertia lists for a combination; `combine` builds the matrix
    /// acting on the combined space from one element of each side.
    fn combined_inertia(
        &self,
        other: &WdRep,
        combine: impl Fn(&Matrix, &Matrix) -> Matrix,
    ) -> Result<(Vec<Matrix>, usize)> {
        let id_a = Matrix::identity(self.field(), self.dim());
        let id_b = Matrix::identity(other.field(), other.dim());
        if other.inertia_is_trivial() {
            let list = self.inertia.iter().map(|g| combine(g, &id_b)).collect();
            return Ok((list, self.artm1));
        }
        if self.inertia_is_trivial() {
            let list = other.inertia.iter().map(|h| combine(&id_a, h)).collect();
            return Ok((list, other.artm1));
        }
        if self.inertia.len() != other.inertia.len() {
            return Err(Error::IncompatibleInertia("lists of different lengths"));
        }
        if self.artm1 != other.artm1 {
            return Err(Error::IncompatibleInertia("artm1 at different positions"));
        }
        let list = self
            .inertia
            .iter()
            .zip(&other.inertia)
            .map(|(g, h)| combine(g, h))
            .collect();
        Ok((list, self.artm1))
    }

    pub fn direct_sum(&self, other: &WdRep) -> Result<WdRep> {
        self.same_field(other)?;
        let (inertia, artm1) = self.combined_inertia(other, |g, h| g.block_diag(h))?;
        // summands are usually much smaller, so their eigendata is cheap
        let _ = (self.eigen_spaces(), other.eigen_spaces());
        let mut rep = WdRep::new(
            self.frob.block_diag(&other.frob),
            self.mono.block_diag(&other.mono),
            inertia,
            artm1,
        )?;
        rep.eigen = EigenCache::block_sum(
            &self.eigen,
            self.dim(),
            &other.eigen,
            other.dim(),
            self.field(),
        );
        Ok(rep)
    }

    pub fn tensor(&self, other: &WdRep) -> Result<WdRep> {
        self.same_field(other)?;
        let (inertia, artm1) = self.combined_inertia(other, |g, h| g.kron(h))?;
        let id_a = Matrix::identity(self.field(), self.dim());
        let id_b = Matrix::identity(other.field(), other.dim());
        let mono = self.mono.kron(&id_b).add(&id_a.kron(&other.mono));
        WdRep::new(self.frob.kron(&other.frob), mono, inertia, artm1)
    }

    /// Contragredient: `F⁻ᵀ`, `−Nᵀ`, `g⁻ᵀ`.
    pub fn dual(&self) -> WdRep {
        let inv_t = |m: &Matrix| m.inverse().expect("validated invertible").transpose();
        WdRep {
            frob: inv_t(&self.frob),
            mono: self.mono.transpose().neg(),
            inertia: self.inertia.iter().map(inv_t).collect(),
            artm1: self.artm1,
            eigen: self.eigen.inverted(self.field()),
        }
    }

    /// Tensor with `unr(q⁻¹)^{⊗n}`.
    pub fn twist(&self, n: i64) -> WdRep {
        let c = self.field().q_pow_elem(-n);
        WdRep {
            frob: self.frob.scale_elem(&c),
            mono: self.mono.clone(),
            inertia: self.inertia.clone(),
            artm1: self.artm1,
            eigen: self.eigen.scaled(self.field(), &c),
        }
    }

    /// `V^*(1)`.
    pub fn dual_twist1(&self) -> WdRep {
        self.dual().twist(1)
    }

    /// Expresses the representation in the basis given by the columns of
    /// `basis`: every operator `X` becomes `basis⁻¹ X basis`.
    pub fn change_basis(&self, basis: &Matrix) -> Result<WdRep> {
        let inv = basis
            .inverse()
            .ok_or(Error::NotInvertible("change of basis"))?;
        let conj = |m: &Matrix| inv.mul(m).mul(basis);
        Ok(WdRep {
            frob: conj(&self.frob),
            mono: conj(&self.mono),
            inertia: self.inertia.iter().map(conj).collect(),
            artm1: self.artm1,
            eigen: self.eigen.conjugate_of(&inv),
        })
    }

    /// True when the subspace spanned by `basis` is stable under F, N and I.
    pub fn is_stable(&self, basis: &Matrix) -> bool {
        subspace::is_stable(&self.frob, basis)
            && subspace::is_stable(&self.mono, basis)
            && self
                .inertia_group()
                .iter()
                .all(|g| subspace::is_stable(g, basis))
    }

    /// Subrepresentation on a stable subspace, in the given basis.
    pub fn subrep(&self, basis: &Matrix) -> Result<WdRep> {
        if !self.is_stable(basis) {
            return Err(Error::InvalidRep("subspace is not stable"));
        }
        let restrict = |m: &Matrix| subspace::restrict(m, basis).expect("stable subspace");
        Ok(WdRep {
            frob: restrict(&self.frob),
            mono: restrict(&self.mono),
            inertia: self.inertia.iter().map(restrict).collect(),
            artm1: self.artm1,
            eigen: EigenCache::default(),
        })
    }

    /// Quotient by a stable subspace, presented on a complement basis.
    pub fn quotient(&self, sub: &Matrix) -> Result<(WdRep, Matrix)> {
        if !self.is_stable(sub) {
            return Err(Error::InvalidRep("subspace is not stable"));
        }
        let comp = subspace::complement(sub);
        let induced = |m: &Matrix| subspace::quotient_operator(m, sub, &comp);
        let rep = WdRep {
            frob: induced(&self.frob),
            mono: induced(&self.mono),
            inertia: self.inertia.iter().map(induced).collect(),
            artm1: self.artm1,
            eigen: EigenCache::default(),
        };
        Ok((rep, comp))
    }

    /// Inertia invariants and the unique stable complement without
    /// invariants (image of `1 − e` for the averaging idempotent `e`).
    pub fn inertia_split(&self) -> InertiaSplit {
        let f = self.field();
        let d = self.dim();
        let group = self.inertia_group();
        let mut fixed = subspace::whole(f, d);
        let mut avg = Matrix::zeros(f, d, d);
        for g in &group {
            let ker = g.sub(&Matrix::identity(f, d)).kernel();
            fixed = subspace::intersection(&fixed, &ker);
            avg = avg.add(g);
        }
        let inv_order = BigRational::new(BigInt::from(1), BigInt::from(group.len()));
        let e = avg.scale_rational(&inv_order);
        let moving = Matrix::identity(f, d).sub(&e).image();
        let moving = if moving.cols() == 0 {
            subspace::zero(f, d)
        } else {
            moving
        };
        InertiaSplit {
            invariant: self.subrep(&fixed).expect("invariants are stable"),
            complement: self.subrep(&moving).expect("complement is stable"),
            invariant_basis: fixed,
            complement_basis: moving,
        }
    }

    /// Eigenvalues of Frobenius with algebraic multiplicity.
    pub fn frobenius_eigenvalues(&self) -> Result<Vec<(CwScalar, usize)>> {
        Ok(self
            .frob_eigen_elems()?
            .into_iter()
            .map(|(e, k)| (self.field().wrap(e), k))
            .collect())
    }

    pub(crate) fn frob_eigen_elems(&self) -> Result<Vec<(Elem, usize)>> {
        self.eigen
            .0
            .values
            .get_or_init(|| Box::new(roots::eigenvalues(&self.frob, "Frobenius")))
            .clone()
    }

    /// Eigenvalues with multiplicity and generalized eigenspace bases.
    pub(crate) fn eigen_spaces(&self) -> Result<EigenSpaces> {
        self.eigen
            .0
            .spaces
            .get_or_init(|| {
                Box::new(self.frob_eigen_elems().map(|eig| {
                    eig.into_iter()
                        .map(|(l, k)| {
                            let space = self.gen_eigenspace_mult(&l, k);
                            (l, k, space)
                        })
                        .collect()
                }))
            })
            .clone()
    }

    /// Generalized eigenspace `ker (F − λ)^d`.
    pub fn generalized_eigenspace(&self, lambda: &CwScalar) -> Matrix {
        if let Ok(spaces) = self.eigen_spaces() {
            if let Some((_, _, space)) = spaces.iter().find(|(l, _, _)| l == lambda.elem()) {
                return space.clone();
            }
        }
        self.gen_eigenspace_elem(lambda.elem())
    }

    pub(crate) fn gen_eigenspace_elem(&self, lambda: &Elem) -> Matrix {
        self.frob.shift(lambda).generalized_kernel()
    }

    /// `ker (F − λ)^j` for the first `j` reaching the algebraic multiplicity.
    pub(crate) fn gen_eigenspace_mult(&self, lambda: &Elem, mult: usize) -> Matrix {
        let shifted = self.frob.shift(lambda);
        let mut power = shifted.clone();
        loop {
            let space = power.kernel();
            if space.cols() >= mult {
                return space;
            }
            power = power.mul(&shifted);
        }
    }

    /// Exact eigenspace `ker (F − λ)`.
    pub(crate) fn eigenspace_elem(&self, lambda: &Elem) -> Matrix {
        let shifted = self.frob.shift(lambda);
        // a cached generalized eigenspace killed by F − λ is the eigenspace
        if let Some(Ok(spaces)) = self.eigen.0.spaces.get() {
            if let Some((_, _, space)) = spaces.iter().find(|(l, _, _)| l == lambda) {
                if shifted.mul(space).is_zero() {
                    return space.clone();
                }
            }
        }
        shifted.kernel()
    }

    /// The same representation with `N = 0`.
    pub fn without_monodromy(&self) -> WdRep {
        let d = self.dim();
        WdRep {
            frob: self.frob.clone(),
            mono: Matrix::zeros(self.field(), d, d),
            inertia: self.inertia.clone(),
            artm1: self.artm1,
            eigen: self.eigen.clone(),
        }
    }

    pub fn semisimplify(&self, kind: SemisimpleKind) -> Result<WdRep> {
        match kind {
            SemisimpleKind::Frobenius => self.frobenius_semisimplification(),
            SemisimpleKind::Monodromy => Ok(self.monodromy_semisimplification()),
        }
    }

    fn frobenius_semisimplification(&self) -> Result<WdRep> {
        let f = self.field();
        let spaces = self.eigen_spaces()?;
        if spaces
            .iter()
            .all(|(lambda, _, space)| self.frob.shift(lambda).mul(space).is_zero())
        {
            return Ok(self.clone());
        }
        let mut basis = Matrix::zeros(f, self.dim(), 0);
        let mut diag = Vec::new();
        for (lambda, _, space) in spaces {
            for _ in 0..space.cols() {
                diag.push(lambda.clone());
            }
            basis = basis.hstack(&space);
        }
        let inv = basis.inverse().expect("generalized eigenspaces span");
        let semisimple = basis.mul(&Matrix::diagonal_elems(f, diag)).mul(&inv);
        // the semisimple part of a valid representation is valid again and
        // has the same generalized eigenspaces
        Ok(WdRep {
            frob: semisimple,
            mono: self.mono.clone(),
            inertia: self.inertia.clone(),
            artm1: self.artm1,
            eigen: self.eigen.clone(),
        })
    }

    fn monodromy_semisimplification(&self) -> WdRep {
        let filt = crate::filtration::MonodromyFiltration::compute(&self.mono);
        let f = self.field();
        let mut frob = Matrix::zeros(f, 0, 0);
        let mut inertia: Vec<Matrix> = vec![Matrix::zeros(f, 0, 0); self.inertia.len()];
        for (lower, upper) in filt.graded_pairs() {
            let comp = subspace::relative_complement(&lower, &upper);
            if comp.cols() == 0 {
                continue;
            }
            frob = frob.block_diag(&subspace::quotient_operator(&self.frob, &lower, &comp));
            for (slot, g) in inertia.iter_mut().zip(&self.inertia) {
                *slot = slot.block_diag(&subspace::quotient_operator(g, &lower, &comp));
            }
        }
        let d = self.dim();
        WdRep {
            frob,
            mono: Matrix::zeros(f, d, d),
            inertia,
            artm1: self.artm1,
            eigen: EigenCache::default(),
        }
    }

    /// Generalized eigenspaces of F grouped by Weil weight of the eigenvalue.
    pub fn weight_pieces(&self) -> Result<WeightPieces> {
        let f = self.field();
        let eig = self.frob_eigen_elems()?;
        for (lambda, _) in &eig {
            if weil_weight_elem(f, lambda).is_none() {
                return Err(Error::NotWeilNumber(alloc::string::ToString::to_string(
                    &f.wrap(lambda.clone()),
                )));
            }
        }
        let mut pieces: BTreeMap<i64, Matrix> = BTreeMap::new();
        for (lambda, _, space) in self.eigen_spaces()? {
            let w = weil_weight_elem(f, &lambda).expect("checked above");
            let entry = pieces
                .entry(w)
                .or_insert_with(|| subspace::zero(f, self.dim()));
            *entry = entry.hstack(&space);
        }
        Ok(WeightPieces { pieces })
    }

    /// Tests purity of weight `w`.
    pub fn is_pure(&self, w: i64) -> Purity {
        let Ok(eig) = self.frob_eigen_elems() else {
            return Purity::NonSplit;
        };
        let pieces = match self.weight_pieces() {
            Ok(p) => p,
            Err(_) => {
                let f = self.field();
                let bad = eig
                    .iter()
                    .find(|(l, _)| weil_weight_elem(f, l).is_none())
                    .expect("some eigenvalue failed the weight test");
                return Purity::NotWeilNumber(f.wrap(bad.0.clone()));
            }
        };
        let max_offset = pieces
            .pieces
            .keys()
            .map(|k| (k - w).abs())
            .max()
            .unwrap_or(0);
        for i in 1..=max_offset {
            let upper = pieces.get(w + i);
            let lower = pieces.get(w - i);
            if upper.cols() != lower.cols() {
                return Purity::MonodromyMismatch { offset: i };
            }
            if upper.cols() == 0 {
                continue;
            }
            let image = self.mono.pow(i as u32).mul(&upper);
            if image.rank() != upper.cols() {
                return Purity::MonodromyMismatch { offset: i };
            }
        }
        Purity::Pure
    }

    /// Decides isomorphism by solving for an intertwiner of (F, N, I).
    pub fn is_isomorphic(&self, other: &WdRep) -> bool {
        if self.field() != other.field() || self.dim() != other.dim() {
            return false;
        }
        let pairs: Vec<(&Matrix, &Matrix)> = if self.inertia.len() == other.inertia.len() {
            self.inertia.iter().zip(&other.inertia).collect()
        } else if self.inertia_is_trivial() && other.inertia_is_trivial() {
            Vec::new()
        } else {
            return false;
        };
        let mut ops = vec![(&self.frob, &other.frob), (&self.mono, &other.mono)];
        ops.extend(pairs);
        match intertwiners(&ops) {
            Some(space) => find_invertible(&space).is_some(),
            None => false,
        }
    }

    /// An invertible `X` with `X·self = other·X` on every operator, if any.
    pub fn isomorphism_to(&self, other: &WdRep) -> Option<Matrix> {
        if self.field() != other.field() || self.dim() != other.dim() {
            return None;
        }
        let mut ops = vec![(&self.frob, &other.frob), (&self.mono, &other.mono)];
        if self.inertia.len() == other.inertia.len() {
            ops.extend(self.inertia.iter().zip(&other.inertia));
        } else if !(self.inertia_is_trivial() && other.inertia_is_trivial()) {
            return None;
        }
        find_invertible(&intertwiners(&ops)?)
    }
}

/// Basis of `{X : X A = B X for all (A, B)}` as a list of matrices.
pub(crate) fn intertwiners(ops: &[(&Matrix, &Matrix)]) -> Option<Vec<Matrix>> {
    let (a0, b0) = ops.first()?;
    let f = a0.field();
    let d = a0.rows();
    let e = b0.rows();
    let unknowns = e * d;
    let mut rows: Vec<Elem> = Vec::new();
    let mut nrows = 0;
    for (a, b) in ops {
        // (X A)_{ij} − (B X)_{ij} = Σ_k X_{ik} A_{kj} − Σ_k B_{ik} X_{kj}
        for i in 0..e {
            for j in 0..d {
                let mut row = vec![f.zero_elem(); unknowns];
                for k in 0..d {
                    let v = &mut row[i * d + k];
                    *v = f.add_elem(v, a.at(k, j));
                }
                for k in 0..e {
                    let v = &mut row[k * d + j];
                    *v = f.sub_elem(v, b.at(i, k));
                }
                rows.extend(row);
                nrows += 1;
            }
        }
    }
    let system = Matrix::from_elems(f, nrows, unknowns, rows);
    let ker = system.kernel();
    Some(
        (0..ker.cols())
            .map(|c| {
                let data = (0..unknowns).map(|r| ker.at(r, c).clone()).collect();
                Matrix::from_elems(f, e, d, data)
            })
            .collect(),
    )
}

/// Tries a deterministic sequence of small integer combinations.
pub(crate) fn find_invertible(space: &[Matrix]) -> Option<Matrix> {
    let first = space.first()?;
    let f = first.field().clone();
    if !first.is_square() {
        return None;
    }
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    for attempt in 0..12 {
        let mut acc = Matrix::zeros(&f, first.rows(), first.cols());
        for (idx, m) in space.iter().enumerate() {
            let c = if attempt == 0 {
                1 + idx as i64
            } else {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state % 41) as i64 - 20
            };
            acc = acc.add(&m.scale_elem(&f.int_elem(c)));
        }
        if acc.inverse().is_some() {
            return Some(acc);
        }
    }
    None
}

/// Generalized eigenspaces of Frobenius indexed by eigenvalue weight.
#[derive(Clone, Debug)]
pub struct WeightPieces {
    pieces: BTreeMap<i64, Matrix>,
}

impl WeightPieces {
    /// Subspace of eigenvalue weight `w` (possibly zero-dimensional).
    pub fn get(&self, w: i64) -> Matrix {
        match self.pieces.get(&w) {
            Some(m) => m.clone(),
            None => {
                let any = self
                    .pieces
                    .values()
                    .next()
                    .expect("nonempty representation");
                subspace::zero(any.field(), any.rows())
            }
        }
    }

    /// Dimensions keyed by eigenvalue weight.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.pieces.iter().map(|(k, v)| (*k, v.cols())).collect()
    }

    /// Dimensions re-indexed by `weight − w`, so that purity of weight `w`
    /// puts the middle piece at index 0.
    pub fn centered_dims(&self, w: i64) -> BTreeMap<i64, usize> {
        self.pieces
            .iter()
            .map(|(k, v)| (*k - w, v.cols()))
            .collect()
    }

    pub fn weights(&self) -> impl Iterator<Item = i64> + '_ {
        self.pieces.keys().copied()
    }
}
