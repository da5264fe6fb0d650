//! Dense polynomials over the exact rationals, ascending degree in `t`.

use crate::error::{Error, Result};
use crate::rational::rat;
use crate::Rational;
use num_traits::Zero;
use std::ops::{Add, Mul, Neg, Sub};

/// Polynomial in one variable with rational coefficients. The coefficient
/// list carries no trailing zeros; the zero polynomial is the empty list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyQ {
    coeffs: Vec<Rational>,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyQ { coeffs }
    }

    pub fn zero() -> Self {
        PolyQ { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_ints(ints: &[i64]) -> Self {
        Self::new(ints.iter().map(|&c| rat(c, 1)).collect())
    }

    /// The variable `t`.
    pub fn var() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> PolyQ {
        if self.coeffs.len() <= 1 {
            return PolyQ::zero();
        }
        PolyQ::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * rat(i as i64 + 1, 1))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rational) -> PolyQ {
        PolyQ::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Euclidean division; the divisor must be nonzero.
    pub fn div_rem(&self, div: &PolyQ) -> Result<(PolyQ, PolyQ)> {
        if div.is_zero() {
            return Err(Error::domain("polynomial division by zero"));
        }
        let dlead = div.leading().expect("nonzero").clone();
        let ddeg = div.degree().expect("nonzero");
        let mut rem = self.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(ddeg)];
        while let Some(rdeg) = rem.degree() {
            if rdeg < ddeg {
                break;
            }
            let factor = rem.leading().expect("nonzero").clone() / dlead.clone();
            let shift = rdeg - ddeg;
            quot[shift] = factor.clone();
            let mut sub = vec![Rational::zero(); shift];
            sub.extend(div.coeffs.iter().map(|c| c.clone() * factor.clone()));
            rem = rem.clone() - PolyQ::new(sub);
        }
        Ok((PolyQ::new(quot), rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &PolyQ) -> PolyQ {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        match a.leading() {
            Some(l) => {
                let inv = rat(1, 1) / l.clone();
                a.scale(&inv)
            }
            None => a,
        }
    }

    /// Order of vanishing at `t = c`; `None` encodes infinity (zero poly).
    pub fn valuation_at(&self, c: &Rational) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let linear = PolyQ::new(vec![-c.clone(), rat(1, 1)]);
        let mut v = 0;
        let mut p = self.clone();
        loop {
            if !p.eval(c).is_zero() {
                return Some(v);
            }
            let (q, r) = p.div_rem(&linear).expect("nonzero divisor");
            debug_assert!(r.is_zero());
            p = q;
            v += 1;
        }
    }

    /// Coefficient reversal within a degree cap: `t^cap * p(1/t)`.
    /// This is the chart at infinity of a homogeneous degree-`cap` form.
    pub fn flip(&self, cap: usize) -> Result<PolyQ> {
        if self.degree().is_some_and(|d| d > cap) {
            return Err(Error::domain(format!(
                "degree {} exceeds homogeneous cap {cap}",
                self.degree().unwrap()
            )));
        }
        let mut coeffs = vec![Rational::zero(); cap + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[cap - i] = c.clone();
        }
        Ok(PolyQ::new(coeffs))
    }

    pub fn pow(&self, mut e: usize) -> PolyQ {
        let mut base = self.clone();
        let mut acc = PolyQ::constant(rat(1, 1));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base.clone();
            e >>= 1;
        }
        acc
    }
}

impl Add for PolyQ {
    type Output = PolyQ;
    fn add(self, rhs: PolyQ) -> PolyQ {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        PolyQ::new(coeffs)
    }
}

impl Sub for PolyQ {
    type Output = PolyQ;
    fn sub(self, rhs: PolyQ) -> PolyQ {
        self + (-rhs)
    }
}

impl Neg for PolyQ {
    type Output = PolyQ;
    fn neg(self) -> PolyQ {
        PolyQ::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Mul for PolyQ {
    type Output = PolyQ;
    fn mul(self, rhs: PolyQ) -> PolyQ {
        if self.is_zero() || rhs.is_zero() {
            return PolyQ::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a.clone() * b.clone();
            }
        }
        PolyQ::new(coeffs)
    }
}
