use std::fmt;

use super::field::{Field, Q};
use super::poly::Poly;
use crate::Error;

/// A reduced quotient of polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::from_poly(Poly::zero()));
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_exact(&g), den.div_exact(&g));
        let l = d.lc().inv().expect("nonzero");
        n = n.scale(&l);
        d = d.scale(&l);
        Ok(RatFunc { num: n, den: d })
    }
    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }
    pub fn constant(a: F) -> Self {
        RatFunc::from_poly(Poly::constant(a))
    }
    pub fn x() -> Self {
        RatFunc::from_poly(Poly::x())
    }
    pub fn num(&self) -> &Poly<F> {
        &self.num
    }
    pub fn den(&self) -> &Poly<F> {
        &self.den
    }
    pub fn is_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> RatFunc<G> {
        RatFunc::new(self.num.map(f), self.den.map(f)).expect("denominator stays nonzero")
    }
    /// `deg num − deg den`; the zero function reports `i64::MIN`.
    pub fn degree(&self) -> i64 {
        if self.num.is_zero() {
            i64::MIN
        } else {
            self.num.deg_i() - self.den.deg_i()
        }
    }
    pub fn add(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den)).expect("nonzero")
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    pub fn mul(&self, o: &Self) -> Self {
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero")
    }
    pub fn scale(&self, a: &F) -> Self {
        self.mul(&RatFunc::constant(a.clone()))
    }
    pub fn recip(&self) -> Result<Self, Error> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }
    pub fn divide(&self, o: &Self) -> Result<Self, Error> {
        Ok(self.mul(&o.recip()?))
    }
    pub fn pow(&self, k: i32) -> Result<Self, Error> {
        let b = if k < 0 { self.recip()? } else { self.clone() };
        let e = k.unsigned_abs();
        Ok(RatFunc {
            num: b.num.pow(e),
            den: b.den.pow(e),
        })
    }
    pub fn derivative(&self) -> Self {
        RatFunc::new(
            self.num
                .derivative()
                .mul(&self.den)
                .sub(&self.num.mul(&self.den.derivative())),
            self.den.mul(&self.den),
        )
        .expect("nonzero")
    }
    pub fn eval(&self, x: &F) -> Result<F, Error> {
        let d = self.den.eval(x);
        self.num.eval(x).div(&d).ok_or(Error::DivisionByZero)
    }
    /// The composition `self(g)`.
    pub fn compose(&self, g: &Self) -> Result<Self, Error> {
        let horner = |p: &Poly<F>| -> Self {
            p.coeffs()
                .iter()
                .rev()
                .fold(RatFunc::from_poly(Poly::zero()), |acc, a| {
                    acc.mul(g).add(&RatFunc::constant(a.clone()))
                })
        };
        horner(&self.num).divide(&horner(&self.den))
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }
    fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn minus(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn inv(&self) -> Option<Self> {
        self.recip().ok()
    }
    fn from_q(q: &Q) -> Self {
        RatFunc::constant(F::from_q(q))
    }
    fn sqrt(&self) -> Option<Self> {
        Some(RatFunc {
            num: poly_sqrt(&self.num)?,
            den: poly_sqrt(&self.den)?.monic(),
        })
    }
}

/// Exact polynomial square root, if one exists over `F`.
pub fn poly_sqrt<F: Field>(p: &Poly<F>) -> Option<Poly<F>> {
    if p.is_zero() {
        return Some(Poly::zero());
    }
    let d = p.degree()?;
    if d % 2 == 1 {
        return None;
    }
    let h = d / 2;
    // Work from the top coefficient down: r(x) = x^h s(1/x).
    let rev: Vec<F> = p.coeffs().iter().rev().cloned().collect();
    let r0 = rev[0].sqrt()?;
    let two_r0 = r0.plus(&r0).inv()?;
    let mut r = vec![r0];
    for n in 1..=h {
        let mut acc = rev[n].clone();
        for i in 1..n {
            acc = acc.minus(&r[i].times(&r[n - i]));
        }
        r.push(acc.times(&two_r0));
    }
    r.reverse();
    let cand = Poly::new(r);
    if cand.mul(&cand) == *p {
        Some(cand)
    } else {
        None
    }
}

impl<F: Field + fmt::Display> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[i64], d: &[i64]) -> RatFunc<Q> {
        RatFunc::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    #[test]
    fn reduced_and_monic() {
        let f = rf(&[-2, 0, 2], &[-2, 2]);
        assert_eq!(f, rf(&[1, 1], &[1]));
        assert!(RatFunc::<Q>::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn square_roots() {
        let f = rf(&[1, 2, 1], &[0, 0, 4]);
        let s = Field::sqrt(&f).unwrap();
        assert_eq!(s.mul(&s), f);
        assert!(Field::sqrt(&rf(&[3, 0, 1], &[1])).is_none());
    }
}
