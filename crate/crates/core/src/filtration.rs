//! The monodromy filtration of a nilpotent operator.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::matrix::{subspace, Matrix};

/// Increasing filtration `M_i` with `N M_i ⊆ M_{i−2}` and
/// `N^i : gr_i ≅ gr_{−i}`.
#[derive(Clone, Debug)]
pub struct MonodromyFiltration {
    /// `M_i` for `|i| < d`; below is zero, above is everything.
    steps: BTreeMap<i64, Matrix>,
    ambient: usize,
    zero: Matrix,
    whole: Matrix,
}

impl MonodromyFiltration {
    /// `M_i = Σ_{a − b = i} ker N^{a+1} ∩ im N^b`.
    pub fn compute(mono: &Matrix) -> Self {
        let f = mono.field();
        let d = mono.rows();
        let zero = subspace::zero(f, d);
        let whole = subspace::whole(f, d);
        if d == 0 {
            return MonodromyFiltration {
                steps: BTreeMap::new(),
                ambient: 0,
                zero,
                whole,
            };
        }
        let powers: Vec<Matrix> = (0..=d as u32).map(|k| mono.pow(k)).collect();
        let kernels: Vec<Matrix> = powers.iter().map(Matrix::kernel).collect();
        let images: Vec<Matrix> = powers
            .iter()
            .map(|p| {
                let im = p.image();
                if im.cols() == 0 {
                    subspace::zero(f, d)
                } else {
                    im
                }
            })
            .collect();
        let top = d as i64 - 1;
        let mut steps = BTreeMap::new();
        for i in -top..=top {
            let mut acc = subspace::zero(f, d);
            for b in 0..d as i64 {
                let a = b + i;
                if a < 0 {
                    continue;
                }
                let ker = &kernels[((a + 1) as usize).min(d)];
                let piece = subspace::intersection(ker, &images[b as usize]);
                if piece.cols() > 0 {
                    acc = subspace::sum(&acc, &piece);
                }
            }
            steps.insert(i, acc);
        }
        MonodromyFiltration {
            steps,
            ambient: d,
            zero,
            whole,
        }
    }

    /// `M_i` as a column basis.
    pub fn get(&self, i: i64) -> Matrix {
        match (self.steps.keys().next(), self.steps.keys().next_back()) {
            (Some(&lo), Some(&hi)) => {
                if i < lo {
                    self.zero.clone()
                } else if i > hi {
                    self.whole.clone()
                } else {
                    self.steps[&i].clone()
                }
            }
            _ => self.zero.clone(),
        }
    }

    /// Smallest index with `M_i ≠ 0`.
    pub fn lowest(&self) -> Option<i64> {
        self.steps
            .iter()
            .find(|(_, m)| m.cols() > 0)
            .map(|(k, _)| *k)
    }

    /// Smallest index with `M_i` the whole space.
    pub fn highest(&self) -> Option<i64> {
        self.steps
            .iter()
            .find(|(_, m)| m.cols() == self.ambient)
            .map(|(k, _)| *k)
    }

    /// `dim gr_i` for every index with a nonzero graded piece.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        let (Some(lo), Some(hi)) = (self.lowest(), self.highest()) else {
            return out;
        };
        for i in lo..=hi {
            let g = self.get(i).cols() - self.get(i - 1).cols();
            if g > 0 {
                out.insert(i, g);
            }
        }
        out
    }

    /// `(M_{i−1}, M_i)` for each index with a nonzero graded piece, in
    /// increasing order of `i`.
    pub fn graded_pairs(&self) -> Vec<(Matrix, Matrix)> {
        self.graded_dims()
            .keys()
            .map(|&i| (self.get(i - 1), self.get(i)))
            .collect()
    }

    /// Checks `N M_i ⊆ M_{i−2}` and `N^i : gr_i ≅ gr_{−i}` for all `i ≥ 0`.
    pub fn verify(&self, mono: &Matrix) -> bool {
        let (Some(lo), Some(hi)) = (self.lowest(), self.highest()) else {
            return self.ambient == 0;
        };
        for i in lo - 1..=hi + 1 {
            let m = self.get(i);
            if m.cols() > 0 && !subspace::contains(&self.get(i - 2), &mono.mul(&m)) {
                return false;
            }
        }
        let span = lo.abs().max(hi.abs());
        for i in 0..=span {
            let upper = self.get(i);
            let upper_prev = self.get(i - 1);
            let lower = self.get(-i);
            let lower_prev = self.get(-i - 1);
            let gi = upper.cols() - upper_prev.cols();
            let gmi = lower.cols() - lower_prev.cols();
            if gi != gmi {
                return false;
            }
            if gi == 0 {
                continue;
            }
            let ni = mono.pow(i as u32);
            // N^i maps M_i into M_{−i}, and the preimage of M_{−i−1} is M_{i−1}
            if !subspace::contains(&lower, &ni.mul(&upper)) {
                return false;
            }
            let pre = if lower_prev.cols() == 0 {
                ni.mul(&upper).kernel()
            } else {
                ni.mul(&upper).hstack(&lower_prev.neg()).kernel()
            };
            let rows: Vec<usize> = (0..upper.cols()).collect();
            let pre_space = upper.mul(&pre.select_rows(&rows));
            let pre_dim = if pre_space.cols() == 0 {
                0
            } else {
                pre_space.rank()
            };
            if pre_dim != upper_prev.cols() {
                return false;
            }
        }
        true
    }

    /// True when every `M_i` is stable under `op`.
    pub fn is_stable_under(&self, op: &Matrix) -> bool {
        self.steps.values().all(|m| subspace::is_stable(op, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CycloWeilField;
    use crate::wd::WdRep;

    #[test]
    fn special_representations() {
        let f = CycloWeilField::new(1, 5).unwrap();
        let sp2 = WdRep::make_sp(&f, 2).unwrap();
        let filt = MonodromyFiltration::compute(sp2.monodromy());
        assert!(filt.verify(sp2.monodromy()));
        assert_eq!(filt.graded_dims(), BTreeMap::from([(-1, 1), (1, 1)]));
        assert!(subspace::equal(&filt.get(-1), &sp2.monodromy().image()));
        assert_eq!(filt.get(1).cols(), 2);
        let sp3 = WdRep::make_sp(&f, 3).unwrap();
        let filt3 = MonodromyFiltration::compute(sp3.monodromy());
        assert_eq!(
            filt3.graded_dims(),
            BTreeMap::from([(-2, 1), (0, 1), (2, 1)])
        );
        let sp4 = WdRep::make_sp(&f, 4).unwrap();
        let filt4 = MonodromyFiltration::compute(sp4.monodromy());
        assert_eq!(
            filt4.graded_dims(),
            BTreeMap::from([(-3, 1), (-1, 1), (1, 1), (3, 1)])
        );
        assert!(filt4.verify(sp4.monodromy()));
        assert!(filt4.is_stable_under(sp4.frobenius()));
    }

    #[test]
    fn zero_monodromy() {
        let f = CycloWeilField::new(1, 5).unwrap();
        let z = Matrix::zeros(&f, 3, 3);
        let filt = MonodromyFiltration::compute(&z);
        assert_eq!(filt.graded_dims(), BTreeMap::from([(0, 3)]));
        assert!(filt.verify(&z));
    }

    #[test]
    fn wrong_filtration_is_rejected() {
        // the filtration of N = 0 does not fit the monodromy of sp(3)
        let f = CycloWeilField::new(1, 5).unwrap();
        let sp3 = WdRep::make_sp(&f, 3).unwrap();
        let n = sp3.monodromy().clone();
        let filt = MonodromyFiltration::compute(&Matrix::zeros(&f, 3, 3));
        assert!(!filt.verify(&n));
    }
}
