use super::field::{Field, Q};
use crate::Error;

/// An element `a + b·s` of a quadratic extension `F(s)`, `s² = d`.
///
/// Elements with `b = 0` lie in the base field and carry no radicand, so the
/// field constants `0` and `1` are shared across every extension of `F`.
/// Combining two elements that both involve `s` requires equal radicands.
#[derive(Clone, Debug)]
pub struct Quad<F: Field> {
    pub a: F,
    pub b: F,
    d: Option<F>,
}

impl<F: Field> PartialEq for Quad<F> {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b && (self.b.is_zero() || self.d == o.d)
    }
}

/// A validated quadratic extension of `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadTower<F: Field> {
    d: F,
}

impl<F: Field> QuadTower<F> {
    /// Rejects radicands that are already squares in `F`.
    pub fn new(d: F) -> Result<Self, Error> {
        if d.is_zero() || d.sqrt().is_some() {
            return Err(Error::SquareRadicand(format!("{:?}", d)));
        }
        Ok(QuadTower { d })
    }
    pub fn radicand(&self) -> &F {
        &self.d
    }
    pub fn elem(&self, a: F, b: F) -> Quad<F> {
        Quad::new(a, b, Some(self.d.clone()))
    }
    /// The generator `s` with `s² = d`.
    pub fn gen(&self) -> Quad<F> {
        self.elem(F::zero(), F::one())
    }
    pub fn base(&self, a: F) -> Quad<F> {
        Quad::new(a, F::zero(), None)
    }
}

impl<F: Field> Quad<F> {
    pub(crate) fn new(a: F, b: F, d: Option<F>) -> Self {
        let d = if b.is_zero() { None } else { d };
        Quad { a, b, d }
    }
    pub fn radicand(&self) -> Option<&F> {
        self.d.as_ref()
    }
    /// Applies `f` to both components and to the radicand.
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Quad<G> {
        Quad::new(f(&self.a), f(&self.b), self.d.as_ref().map(&f))
    }
    /// The Galois conjugate `a − b·s`.
    pub fn conj(&self) -> Self {
        Quad::new(self.a.clone(), self.b.negate(), self.d.clone())
    }
    /// The norm `a² − d·b²`, an element of the base field.
    pub fn norm(&self) -> F {
        match &self.d {
            None => self.a.times(&self.a),
            Some(d) => self.a.times(&self.a).minus(&d.times(&self.b).times(&self.b)),
        }
    }
    /// Returns the base-field value when the `s`-part vanishes.
    pub fn descend(&self) -> Option<F> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }
    fn join(&self, o: &Self) -> Option<F> {
        match (&self.d, &o.d) {
            (Some(x), Some(y)) => {
                assert_eq!(x, y, "mixing elements of different quadratic extensions");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }
}

impl<F: Field> Field for Quad<F> {
    fn zero() -> Self {
        Quad::new(F::zero(), F::zero(), None)
    }
    fn one() -> Self {
        Quad::new(F::one(), F::zero(), None)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        Quad::new(self.a.plus(&o.a), self.b.plus(&o.b), self.join(o))
    }
    fn minus(&self, o: &Self) -> Self {
        Quad::new(self.a.minus(&o.a), self.b.minus(&o.b), self.join(o))
    }
    fn times(&self, o: &Self) -> Self {
        let d = self.join(o);
        let mut a = self.a.times(&o.a);
        if let Some(dd) = &d {
            if !self.b.is_zero() && !o.b.is_zero() {
                a = a.plus(&dd.times(&self.b).times(&o.b));
            }
        }
        let b = self.a.times(&o.b).plus(&self.b.times(&o.a));
        Quad::new(a, b, d)
    }
    fn negate(&self) -> Self {
        Quad::new(self.a.negate(), self.b.negate(), self.d.clone())
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm().inv()?;
        let c = self.conj();
        Some(Quad::new(c.a.times(&n), c.b.times(&n), c.d))
    }
    fn from_q(q: &Q) -> Self {
        Quad::new(F::from_q(q), F::zero(), None)
    }
    fn sqrt(&self) -> Option<Self> {
        if self.b.is_zero() {
            if let Some(r) = self.a.sqrt() {
                return Some(Quad::new(r, F::zero(), None));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::q;

    #[test]
    fn sqrt3_arithmetic() {
        let t = QuadTower::new(q(3, 1)).unwrap();
        let s = t.gen();
        assert_eq!(s.times(&s), Quad::from_q(&q(3, 1)));
        let x = t.elem(q(1, 1), q(2, 1));
        let y = x.inv().unwrap();
        assert!(x.times(&y).is_one());
        assert_eq!(x.times(&x.conj()).descend(), Some(q(-11, 1)));
    }

    #[test]
    fn square_radicand_rejected() {
        assert!(QuadTower::new(q(9, 4)).is_err());
        assert!(QuadTower::new(q(0, 1)).is_err());
    }
}
