//! ADE root lattices, symbolic direct sums and exact vector enumeration.
//!
//! Lattices here are positive-definite with the pairing stored as an exact
//! Gram matrix. Enumeration of vectors of a prescribed norm uses the LDL^T
//! decomposition to derive exact per-coordinate bounds; there is no floating
//! point anywhere.

use crate::error::{Error, Result};
use crate::rational::rat;
use crate::{Rational, RationalMatrix};
use num_traits::{Signed, Zero};
use std::ops::ControlFlow;

/// One summand of a [`LatticeExpr`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeBlock {
    /// Root lattice A_n, n >= 1.
    A(usize),
    /// Root lattice D_n, n >= 4.
    D(usize),
    /// Root lattice E_n, n in {6, 7, 8}.
    E(usize),
    /// Dual of a block (inverse Gram).
    DualOf(Box<LatticeBlock>),
    /// Rank-1 lattice `<q>`, q > 0.
    Scaled(Rational),
    /// Explicit symmetric Gram matrix.
    ExplicitGram(RationalMatrix),
}

/// Symbolic direct sum of lattice blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeExpr {
    pub summands: Vec<LatticeBlock>,
}

impl LatticeExpr {
    pub fn new(summands: Vec<LatticeBlock>) -> Self {
        LatticeExpr { summands }
    }

    pub fn rank(&self) -> usize {
        self.summands.iter().map(LatticeBlock::rank).sum()
    }
}

impl LatticeBlock {
    pub fn rank(&self) -> usize {
        match self {
            LatticeBlock::A(n) => *n,
            LatticeBlock::D(n) => *n,
            LatticeBlock::E(n) => *n,
            LatticeBlock::DualOf(b) => b.rank(),
            LatticeBlock::Scaled(_) => 1,
            LatticeBlock::ExplicitGram(m) => m.rows(),
        }
    }

    /// Gram matrix of the block in the positive-definite convention.
    pub fn gram(&self) -> Result<RationalMatrix> {
        match self {
            LatticeBlock::A(n) => {
                if *n < 1 {
                    return Err(Error::domain("A(n) needs n >= 1"));
                }
                Ok(ade_gram(*n, |i, j| i + 1 == j))
            }
            LatticeBlock::D(n) => {
                if *n < 4 {
                    return Err(Error::domain("D(n) needs n >= 4"));
                }
                // edges i-(i+1) for i+1 < n, plus (n-2)-n, in 1-based labels
                Ok(ade_gram(*n, |i, j| {
                    (i + 1 == j && j < *n) || (i == *n - 2 && j == *n)
                }))
            }
            LatticeBlock::E(n) => {
                if !matches!(*n, 6..=8) {
                    return Err(Error::domain("E(n) needs n in {6,7,8}"));
                }
                Ok(ade_gram(*n, |i, j| {
                    (i + 1 == j && j < *n) || (i == 3 && j == *n)
                }))
            }
            LatticeBlock::DualOf(b) => b.gram()?.inverse(),
            LatticeBlock::Scaled(q) => {
                if !q.is_positive() {
                    return Err(Error::domain("Scaled(q) needs q > 0"));
                }
                RationalMatrix::new(1, 1, vec![q.clone()])
            }
            LatticeBlock::ExplicitGram(m) => {
                if !m.is_symmetric() {
                    return Err(Error::domain("explicit Gram must be symmetric"));
                }
                Ok(m.clone())
            }
        }
    }
}

/// Adjacency rule -> Gram with 2 on the diagonal and -1 on edges.
/// Indices are 1-based as in the usual Dynkin diagram labelling.
fn ade_gram(n: usize, edge: impl Fn(usize, usize) -> bool) -> RationalMatrix {
    let mut g = RationalMatrix::zero(n, n);
    for i in 1..=n {
        g[(i - 1, i - 1)] = rat(2, 1);
        for j in i + 1..=n {
            if edge(i, j) {
                g[(i - 1, j - 1)] = rat(-1, 1);
                g[(j - 1, i - 1)] = rat(-1, 1);
            }
        }
    }
    g
}

/// A realized positive-definite lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: RationalMatrix,
    /// Unit lower-triangular L and positive pivots D with G = L D L^T.
    ldlt_l: RationalMatrix,
    ldlt_d: Vec<Rational>,
}

/// Assemble the block-diagonal Gram of `expr` and check positive-definiteness.
pub fn realize(expr: &LatticeExpr) -> Result<Lattice> {
    let blocks: Result<Vec<_>> = expr.summands.iter().map(LatticeBlock::gram).collect();
    Lattice::from_gram(RationalMatrix::block_diag(&blocks?))
}

impl Lattice {
    pub fn from_gram(gram: RationalMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::domain("lattice Gram must be symmetric"));
        }
        let (l, d) = ldlt(&gram)?;
        Ok(Lattice {
            gram,
            ldlt_l: l,
            ldlt_d: d,
        })
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    /// Exact determinant (product of LDL^T pivots).
    pub fn determinant(&self) -> Rational {
        let mut det = rat(1, 1);
        for d in &self.ldlt_d {
            det *= d.clone();
        }
        det
    }

    /// Norm x^T G x of an integer coordinate vector.
    pub fn norm_of(&self, x: &[i64]) -> Rational {
        let n = self.rank();
        assert_eq!(x.len(), n);
        let mut total = Rational::zero();
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            let xi = rat(x[i], 1);
            for j in 0..n {
                if x[j] == 0 {
                    continue;
                }
                total += xi.clone() * rat(x[j], 1) * self.gram[(i, j)].clone();
            }
        }
        total
    }

    /// All x in Z^r with x^T G x = m. For m = 0 the zero vector is the unique
    /// solution by definiteness.
    pub fn vectors_of_norm(
        &self,
        m: &Rational,
        coord_bound_hint: Option<u64>,
    ) -> Result<Vec<Vec<i64>>> {
        let mut out = Vec::new();
        self.enumerate(m, coord_bound_hint, &mut |x| {
            out.push(x.to_vec());
            ControlFlow::<()>::Continue(())
        })?;
        Ok(out)
    }

    /// True iff some nonzero-or-zero x represents m.
    pub fn represents(&self, m: &Rational) -> Result<bool> {
        Ok(self.find_vector_of_norm(m)?.is_some())
    }

    /// First vector of norm m found, if any.
    pub fn find_vector_of_norm(&self, m: &Rational) -> Result<Option<Vec<i64>>> {
        let mut found = None;
        self.enumerate(m, None, &mut |x| {
            found = Some(x.to_vec());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    /// Minimum of x^T G x over nonzero integer vectors, by bounded
    /// enumeration: the smallest diagonal entry is an upper bound for the
    /// minimum, so it suffices to scan norms up to it.
    pub fn minimal_norm(&self) -> Result<Rational> {
        if self.rank() == 0 {
            return Err(Error::domain("minimal norm of rank-0 lattice"));
        }
        let ceiling = (0..self.rank())
            .map(|i| self.gram[(i, i)].clone())
            .min()
            .expect("nonempty diagonal");
        let mut best: Option<Rational> = None;
        self.enumerate_up_to(&ceiling, &mut |x, norm| {
            if x.iter().any(|&c| c != 0) {
                match &best {
                    Some(b) if b <= norm => {}
                    _ => best = Some(norm.clone()),
                }
            }
            ControlFlow::<()>::Continue(())
        })?;
        best.ok_or_else(|| Error::domain("empty enumeration on positive-definite lattice"))
    }

    /// Visit every x with x^T G x = m.
    pub fn enumerate<B>(
        &self,
        m: &Rational,
        coord_bound_hint: Option<u64>,
        visit: &mut impl FnMut(&[i64]) -> ControlFlow<B>,
    ) -> Result<Option<B>> {
        if m.is_negative() {
            return Err(Error::domain("vectors_of_norm needs m >= 0"));
        }
        let mut adapted = |x: &[i64], norm: &Rational| {
            if norm == m {
                visit(x)
            } else {
                ControlFlow::Continue(())
            }
        };
        self.enumerate_bounded(m, coord_bound_hint, &mut adapted)
    }

    /// Visit every x with 0 <= x^T G x <= ceiling (each with its exact norm).
    pub fn enumerate_up_to<B>(
        &self,
        ceiling: &Rational,
        visit: &mut impl FnMut(&[i64], &Rational) -> ControlFlow<B>,
    ) -> Result<Option<B>> {
        if ceiling.is_negative() {
            return Err(Error::domain("enumeration ceiling must be >= 0"));
        }
        self.enumerate_bounded(ceiling, None, visit)
    }

    /// Fincke-Pohst style backtracking over x^T G x = sum_i d_i y_i^2 with
    /// y = L^T x; bounds on each y_i are exact rational comparisons.
    fn enumerate_bounded<B>(
        &self,
        budget: &Rational,
        coord_bound_hint: Option<u64>,
        visit: &mut impl FnMut(&[i64], &Rational) -> ControlFlow<B>,
    ) -> Result<Option<B>> {
        let n = self.rank();
        if n == 0 {
            let zero_norm = Rational::zero();
            if let ControlFlow::Break(b) = visit(&[], &zero_norm) {
                return Ok(Some(b));
            }
            return Ok(None);
        }
        let mut x = vec![0i64; n];
        // partial[i] = sum over j > i of L[j][i] * x[j]
        let mut partial = vec![Rational::zero(); n];
        let state = EnumState {
            lat: self,
            hint: coord_bound_hint,
            budget: budget.clone(),
        };
        Ok(state.descend(n - 1, budget.clone(), &mut x, &mut partial, visit))
    }
}

struct EnumState<'a> {
    lat: &'a Lattice,
    hint: Option<u64>,
    budget: Rational,
}

impl EnumState<'_> {
    /// Fix x[level], descending from the last coordinate to the first.
    fn descend<B>(
        &self,
        level: usize,
        remaining: Rational,
        x: &mut Vec<i64>,
        partial: &mut Vec<Rational>,
        visit: &mut impl FnMut(&[i64], &Rational) -> ControlFlow<B>,
    ) -> Option<B> {
        let d = &self.lat.ldlt_d[level];
        let c = partial[level].clone();
        // admissible t: d * (t + c)^2 <= remaining
        let bound = remaining.clone() / d.clone();
        let center = (-c.clone()).floor().to_integer();
        let mut center: i64 = i64::try_from(&center).unwrap_or(0);
        if let Some(h) = self.hint {
            let h = i64::try_from(h).unwrap_or(i64::MAX);
            center = center.clamp(-h, h);
        }
        let fits = |t: i64| {
            let y = rat(t, 1) + c.clone();
            let ok = y.clone() * y <= bound;
            ok && self.hint.is_none_or(|h| t.unsigned_abs() <= h)
        };
        let mut lo = center;
        while fits(lo - 1) {
            lo -= 1;
        }
        if !fits(lo) {
            lo += 1;
        }
        let mut t = lo;
        while fits(t) {
            x[level] = t;
            let y = rat(t, 1) + c.clone();
            let used = d.clone() * y.clone() * y.clone();
            let rest = remaining.clone() - used;
            if level == 0 {
                let norm = self.budget.clone() - rest;
                if let ControlFlow::Break(b) = visit(x, &norm) {
                    return Some(b);
                }
            } else {
                for k in 0..level {
                    partial[k] += self.lat.ldlt_l[(level, k)].clone() * rat(t, 1);
                }
                if let Some(b) = self.descend(level - 1, rest, x, partial, visit) {
                    return Some(b);
                }
                for k in 0..level {
                    partial[k] -= self.lat.ldlt_l[(level, k)].clone() * rat(t, 1);
                }
            }
            t += 1;
        }
        x[level] = 0;
        None
    }
}

/// Exact LDL^T of a symmetric matrix; errors if any pivot is non-positive
/// (the lattice convention here is positive-definite).
pub fn ldlt(g: &RationalMatrix) -> Result<(RationalMatrix, Vec<Rational>)> {
    let n = g.rows();
    let mut l = RationalMatrix::identity(n);
    let mut d = vec![Rational::zero(); n];
    for j in 0..n {
        let mut dj = g[(j, j)].clone();
        for k in 0..j {
            dj -= l[(j, k)].clone() * l[(j, k)].clone() * d[k].clone();
        }
        if !dj.is_positive() {
            return Err(Error::domain(format!(
                "Gram matrix is not positive-definite (pivot {j} = {dj})"
            )));
        }
        d[j] = dj;
        for i in j + 1..n {
            let mut v = g[(i, j)].clone();
            for k in 0..j {
                v -= l[(i, k)].clone() * l[(j, k)].clone() * d[k].clone();
            }
            l[(i, j)] = v / d[j].clone();
        }
    }
    Ok((l, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use LatticeBlock::{DualOf, Scaled, A, D, E};

    fn lat(blocks: Vec<LatticeBlock>) -> Lattice {
        realize(&LatticeExpr::new(blocks)).unwrap()
    }

    #[test]
    fn ade_grams() {
        assert_eq!(
            lat(vec![A(1)]).gram(),
            &RationalMatrix::new(1, 1, vec![rat(2, 1)]).unwrap()
        );
        let a2 = lat(vec![A(2)]);
        assert_eq!(
            a2.gram(),
            &RationalMatrix::from_rows(vec![
                vec![rat(2, 1), rat(-1, 1)],
                vec![rat(-1, 1), rat(2, 1)],
            ])
            .unwrap()
        );
        assert_eq!(a2.determinant(), rat(3, 1));
    }

    #[test]
    fn ade_determinants() {
        for n in 1..=8 {
            assert_eq!(lat(vec![A(n)]).determinant(), rat(n as i64 + 1, 1));
        }
        for n in 4..=8 {
            assert_eq!(lat(vec![D(n)]).determinant(), rat(4, 1));
        }
        assert_eq!(lat(vec![E(6)]).determinant(), rat(3, 1));
        assert_eq!(lat(vec![E(7)]).determinant(), rat(2, 1));
        assert_eq!(lat(vec![E(8)]).determinant(), rat(1, 1));
        assert_eq!(lat(vec![Scaled(rat(1, 6))]).determinant(), rat(1, 6));
    }

    #[test]
    fn dual_is_inverse_gram() {
        assert_eq!(
            lat(vec![DualOf(Box::new(A(1)))]).gram(),
            &RationalMatrix::new(1, 1, vec![rat(1, 2)]).unwrap()
        );
        for block in [A(3), D(4), E(6), E(8)] {
            let l = lat(vec![block.clone()]);
            let dual = lat(vec![DualOf(Box::new(block.clone()))]);
            assert_eq!(dual.gram(), &l.gram().inverse().unwrap());
            let double = lat(vec![DualOf(Box::new(DualOf(Box::new(block))))]);
            assert_eq!(double.gram(), l.gram());
        }
    }

    #[test]
    fn det_multiplicative_over_sums() {
        let l1 = lat(vec![A(2)]);
        let l2 = lat(vec![D(4), Scaled(rat(3, 7))]);
        let sum = lat(vec![A(2), D(4), Scaled(rat(3, 7))]);
        assert_eq!(sum.determinant(), l1.determinant() * l2.determinant());
    }

    #[test]
    fn scaled_must_be_positive() {
        assert!(realize(&LatticeExpr::new(vec![Scaled(rat(-1, 2))])).is_err());
        assert!(realize(&LatticeExpr::new(vec![Scaled(rat(0, 1))])).is_err());
    }

    #[test]
    fn vectors_of_norm_examples() {
        let a1 = lat(vec![A(1)]);
        let mut roots = a1.vectors_of_norm(&rat(2, 1), None).unwrap();
        roots.sort();
        assert_eq!(roots, vec![vec![-1], vec![1]]);
        assert!(a1.vectors_of_norm(&rat(3, 1), None).unwrap().is_empty());

        let a2 = lat(vec![A(2)]);
        assert_eq!(a2.vectors_of_norm(&rat(2, 1), None).unwrap().len(), 6);

        // m = 0: the zero vector is the unique solution
        assert_eq!(
            a2.vectors_of_norm(&rat(0, 1), None).unwrap(),
            vec![vec![0, 0]]
        );
        assert!(a1.vectors_of_norm(&rat(-1, 1), None).is_err());
    }

    #[test]
    fn represents_examples() {
        let four_a1 = lat(vec![A(1), A(1), A(1), A(1)]);
        for l in 1..=20 {
            assert!(four_a1.represents(&rat(2 * l, 1)).unwrap(), "2*{l}");
        }
        let a4 = lat(vec![A(4)]);
        assert!(a4.represents(&rat(4, 1)).unwrap());
        assert_eq!(a4.norm_of(&[1, 0, 1, 0]), rat(4, 1));
        let sixth = lat(vec![Scaled(rat(1, 6))]);
        assert!(!sixth.represents(&rat(1, 5)).unwrap());
    }

    #[test]
    fn e8_root_count() {
        let e8 = lat(vec![E(8)]);
        assert_eq!(e8.vectors_of_norm(&rat(2, 1), None).unwrap().len(), 240);
    }

    #[test]
    fn minimal_norms() {
        assert_eq!(
            lat(vec![Scaled(rat(1, 20))]).minimal_norm().unwrap(),
            rat(1, 20)
        );
        assert_eq!(lat(vec![E(8)]).minimal_norm().unwrap(), rat(2, 1));
        assert_eq!(
            lat(vec![DualOf(Box::new(A(2))), Scaled(rat(1, 6))])
                .minimal_norm()
                .unwrap(),
            rat(1, 6)
        );
    }

    #[test]
    fn coord_bound_hint_clamps() {
        let a2 = lat(vec![A(2)]);
        // hint smaller than the true support loses vectors, as documented
        let all = a2.vectors_of_norm(&rat(6, 1), None).unwrap();
        let hinted = a2.vectors_of_norm(&rat(6, 1), Some(1)).unwrap();
        assert!(hinted.len() <= all.len());
        assert!(hinted.iter().all(|v| v.iter().all(|c| c.abs() <= 1)));
    }

    #[test]
    fn ldlt_rejects_indefinite() {
        let g =
            RationalMatrix::from_rows(vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(1, 1)]])
                .unwrap();
        assert!(Lattice::from_gram(g).is_err());
    }
}
