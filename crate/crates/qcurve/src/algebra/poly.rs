use std::fmt;

use super::field::{Field, Q};
use crate::Error;

/// Dense univariate polynomial; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F: Field> {
    c: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }
    pub fn one() -> Self {
        Poly::constant(F::one())
    }
    pub fn x() -> Self {
        Poly::new(vec![F::zero(), F::one()])
    }
    pub fn constant(a: F) -> Self {
        Poly::new(vec![a])
    }
    pub fn monomial(a: F, k: usize) -> Self {
        let mut c = vec![F::zero(); k];
        c.push(a);
        Poly::new(c)
    }
    /// `x − a`.
    pub fn linear(a: F) -> Self {
        Poly::new(vec![a.negate(), F::one()])
    }
    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&n| F::from_int(n)).collect())
    }
    pub fn coeffs(&self) -> &[F] {
        &self.c
    }
    pub fn coeff(&self, k: usize) -> F {
        self.c.get(k).cloned().unwrap_or_else(F::zero)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    /// Degree with the zero polynomial mapped to −1.
    pub fn deg_i(&self) -> i64 {
        self.c.len() as i64 - 1
    }
    pub fn lc(&self) -> F {
        self.c.last().cloned().unwrap_or_else(F::zero)
    }
    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.c.iter().map(f).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i).plus(&o.coeff(i))).collect())
    }
    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| self.coeff(i).minus(&o.coeff(i))).collect())
    }
    pub fn neg(&self) -> Self {
        Poly::new(self.c.iter().map(|x| x.negate()).collect())
    }
    pub fn scale(&self, a: &F) -> Self {
        Poly::new(self.c.iter().map(|x| x.times(a)).collect())
    }
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut r = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] = r[i + j].plus(&a.times(b));
            }
        }
        Poly::new(r)
    }
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![F::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly::new(c)
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self), Error> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dl = d.lc().inv().expect("nonzero leading coefficient");
        let dd = d.c.len() - 1;
        let mut r = self.c.clone();
        if r.len() < d.c.len() {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut qv = vec![F::zero(); r.len() - dd];
        for k in (0..qv.len()).rev() {
            let t = r[k + dd].times(&dl);
            if !t.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    r[k + j] = r[k + j].minus(&t.times(dc));
                }
            }
            qv[k] = t;
        }
        r.truncate(dd);
        Ok((Poly::new(qv), Poly::new(r)))
    }
    /// Exact division; panics in debug builds if the remainder is nonzero.
    pub fn div_exact(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d).expect("division by zero polynomial");
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }
    pub fn monic(&self) -> Self {
        match self.lc().inv() {
            Some(i) => self.scale(&i),
            None => Poly::zero(),
        }
    }
    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }
    pub fn derivative(&self) -> Self {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a.times(&F::from_int(i as i64)))
                .collect(),
        )
    }
    pub fn eval(&self, x: &F) -> F {
        self.c.iter().rev().fold(F::zero(), |acc, a| acc.times(x).plus(a))
    }
    /// The composition `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        self.c
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, a| acc.mul(g).add(&Poly::constant(a.clone())))
    }
    /// Taylor shift `p(x + a)`.
    pub fn taylor_shift(&self, a: &F) -> Self {
        let mut c = self.c.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = c[j + 1].times(a);
                c[j] = c[j].plus(&t);
            }
        }
        Poly::new(c)
    }
    /// Coefficients reversed with respect to degree `n`, i.e. `x^n p(1/x)`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut c = vec![F::zero(); n + 1];
        for (i, a) in self.c.iter().enumerate() {
            c[n - i] = a.clone();
        }
        Poly::new(c)
    }
    /// Largest `k` with `x^k` dividing `self` (0 for the zero polynomial).
    pub fn x_valuation(&self) -> usize {
        self.c.iter().position(|a| !a.is_zero()).unwrap_or(0)
    }
}

impl Poly<Q> {
    /// Multiplies through by the lcm of denominators and removes the content,
    /// giving a primitive integer polynomial with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<num_bigint::BigInt> {
        use num_integer::Integer;
        use num_traits::{One, Signed, Zero};
        let mut l = num_bigint::BigInt::one();
        for a in &self.c {
            l = l.lcm(a.denom());
        }
        let mut v: Vec<num_bigint::BigInt> = self
            .c
            .iter()
            .map(|a| (a * Q::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = num_bigint::BigInt::zero();
        for a in &v {
            g = g.gcd(a);
        }
        if !g.is_zero() {
            for a in v.iter_mut() {
                *a = &*a / &g;
            }
        }
        if v.last().is_some_and(|a| a.is_negative()) {
            for a in v.iter_mut() {
                *a = -&*a;
            }
        }
        v
    }
}

impl<F: Field + fmt::Display> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", a)?,
                1 => write!(f, "({})x", a)?,
                _ => write!(f, "({})x^{}", a, i)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly<Q> {
        Poly::from_ints(c)
    }

    #[test]
    fn gcd_of_shared_root() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[1, -2, 1])), p(&[-1, 1]));
    }

    #[test]
    fn derivative_of_cube() {
        assert_eq!(p(&[0, 0, 0, 1]).derivative(), p(&[0, 0, 3]));
    }

    #[test]
    fn divrem_by_x() {
        let (q, r) = p(&[1, 0, 1]).divrem(&p(&[0, 1])).unwrap();
        assert_eq!((q, r), (p(&[0, 1]), p(&[1])));
        assert!(p(&[1]).divrem(&Poly::zero()).is_err());
    }

    #[test]
    fn shift_and_compose_agree() {
        let f = p(&[3, -1, 0, 2]);
        let a = Q::from_int(2);
        assert_eq!(f.taylor_shift(&a), f.compose(&p(&[2, 1])));
    }
}
