use std::fmt;

use super::field::Field;
use crate::Error;

/// A truncated Laurent/Puiseux series `Σ_{v ≤ k < N} c_k τ^k + O(τ^N)`.
///
/// `τ^e` is the uniformizer of the expansion place (`e ∈ {1, 2}`), so with
/// `e = 2` the integer exponents in `τ` encode half-integer exponents in the
/// uniformizer. Every operation returns the largest precision `N` that its
/// inputs guarantee; nothing is padded with invented zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<F: Field> {
    e: u8,
    val: i64,
    c: Vec<F>,
    prec: i64,
}

impl<F: Field> TruncSeries<F> {
    /// Coefficients `c[i]` of `τ^{start+i}`, known up to `O(τ^prec)`.
    pub fn new(e: u8, start: i64, c: Vec<F>, prec: i64) -> Self {
        assert!(e == 1 || e == 2, "ramification index must be 1 or 2");
        let mut c = c;
        let keep = (prec - start).max(0) as usize;
        c.truncate(keep);
        c.resize(keep, F::zero());
        let lead = c.iter().position(|a| !a.is_zero());
        match lead {
            None => TruncSeries {
                e,
                val: prec,
                c: Vec::new(),
                prec,
            },
            Some(i) => TruncSeries {
                e,
                val: start + i as i64,
                c: c.split_off(i),
                prec,
            },
        }
    }
    pub fn zero(e: u8, prec: i64) -> Self {
        TruncSeries::new(e, prec, Vec::new(), prec)
    }
    pub fn constant(e: u8, a: F, prec: i64) -> Self {
        TruncSeries::new(e, 0, vec![a], prec)
    }
    /// The monomial `a τ^k`, exact up to `prec`.
    pub fn monomial(e: u8, a: F, k: i64, prec: i64) -> Self {
        TruncSeries::new(e, k, vec![a], prec)
    }
    pub fn e(&self) -> u8 {
        self.e
    }
    /// Index of the first nonzero coefficient (equals `prec` for zero).
    pub fn valuation(&self) -> i64 {
        self.val
    }
    pub fn prec(&self) -> i64 {
        self.prec
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn leading(&self) -> Option<&F> {
        self.c.first()
    }
    /// Coefficient of `τ^k`; `None` beyond the known precision.
    pub fn coeff(&self, k: i64) -> Option<F> {
        if k >= self.prec {
            None
        } else if k < self.val {
            Some(F::zero())
        } else {
            Some(self.c[(k - self.val) as usize].clone())
        }
    }
    /// `(exponent, coefficient)` pairs of the nonzero known terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> {
        let v = self.val;
        self.c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(move |(i, a)| (v + i as i64, a))
    }
    pub fn truncate(&self, prec: i64) -> Self {
        let p = prec.min(self.prec);
        TruncSeries::new(self.e, self.val, self.c.clone(), p)
    }
    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> TruncSeries<G> {
        TruncSeries::new(self.e, self.val, self.c.iter().map(f).collect(), self.prec)
    }
    fn same_chart(&self, o: &Self) {
        assert_eq!(self.e, o.e, "series in different ramified charts");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_chart(o);
        let prec = self.prec.min(o.prec);
        let start = self.val.min(o.val).min(prec);
        let n = (prec - start).max(0) as usize;
        let c = (0..n)
            .map(|i| {
                let k = start + i as i64;
                self.coeff(k).unwrap().plus(&o.coeff(k).unwrap())
            })
            .collect();
        TruncSeries::new(self.e, start, c, prec)
    }
    pub fn neg(&self) -> Self {
        TruncSeries::new(self.e, self.val, self.c.iter().map(|a| a.negate()).collect(), self.prec)
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn scale(&self, a: &F) -> Self {
        if a.is_zero() {
            return TruncSeries::zero(self.e, self.prec);
        }
        TruncSeries::new(self.e, self.val, self.c.iter().map(|x| x.times(a)).collect(), self.prec)
    }
    /// Multiplies by `τ^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries::new(self.e, self.val + k, self.c.clone(), self.prec + k)
    }
    pub fn mul(&self, o: &Self) -> Self {
        self.same_chart(o);
        let prec = (self.prec + o.val).min(o.prec + self.val);
        if self.is_zero() || o.is_zero() {
            return TruncSeries::zero(self.e, prec);
        }
        let val = self.val + o.val;
        let n = (prec - val).max(0) as usize;
        let mut c = vec![F::zero(); n];
        for (i, a) in self.c.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(n - i) {
                c[i + j] = c[i + j].plus(&a.times(b));
            }
        }
        TruncSeries::new(self.e, val, c, prec)
    }
    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.c.len();
        let a0 = self.c[0].inv().expect("nonzero leading");
        let mut r: Vec<F> = Vec::with_capacity(n);
        r.push(a0.clone());
        for k in 1..n {
            let mut acc = F::zero();
            for j in 1..=k {
                acc = acc.plus(&self.c[j].times(&r[k - j]));
            }
            r.push(acc.times(&a0).negate());
        }
        Ok(TruncSeries::new(self.e, -self.val, r, -self.val + n as i64))
    }
    pub fn div(&self, o: &Self) -> Result<Self, Error> {
        Ok(self.mul(&o.inv()?))
    }
    pub fn pow(&self, k: i64) -> Result<Self, Error> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = TruncSeries::constant(self.e, F::one(), i64::MAX / 4);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
    /// Derivative with respect to `τ`.
    pub fn deriv(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(i, a)| a.times(&F::from_int(self.val + i as i64)))
            .collect();
        TruncSeries::new(self.e, self.val - 1, c, self.prec - 1)
    }
    /// Antiderivative in `τ` with zero constant term.
    ///
    /// Fails if the `τ^{-1}` coefficient is nonzero; see [`LogSeries`].
    pub fn integrate(&self) -> Result<Self, Error> {
        if let Some(a) = self.coeff(-1) {
            if !a.is_zero() {
                return Err(Error::LogObstruction);
            }
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let k = self.val + i as i64;
                if k == -1 {
                    F::zero()
                } else {
                    a.times(&F::from_int(k + 1).inv().unwrap())
                }
            })
            .collect();
        Ok(TruncSeries::new(self.e, self.val + 1, c, self.prec + 1))
    }
    /// `self(g(τ))` for `g` of positive valuation.
    pub fn compose(&self, g: &Self) -> Result<Self, Error> {
        if g.val < 1 {
            return Err(Error::Precondition("inner series must vanish at the centre".into()));
        }
        let cap = self.prec.saturating_mul(g.val);
        let mut acc = TruncSeries::zero(g.e, cap);
        if self.is_zero() {
            return Ok(acc);
        }
        let ginv = if self.val < 0 { Some(g.inv()?) } else { None };
        let mut power = if self.val < 0 {
            ginv.as_ref().unwrap().pow(-self.val)?
        } else {
            g.pow(self.val)?
        };
        for a in &self.c {
            acc = acc.add(&power.scale(a));
            power = power.mul(g);
        }
        Ok(acc.truncate(cap))
    }
    /// Square root with a caller-supplied root of the leading coefficient.
    pub fn sqrt(&self, root: &F) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::Precondition("square root of a zero series".into()));
        }
        if self.val % 2 != 0 {
            return Err(Error::OddValuation(self.val));
        }
        if root.times(root) != self.c[0] {
            return Err(Error::WrongRoot);
        }
        let n = self.c.len();
        let inv2 = root.plus(root).inv().expect("characteristic zero");
        let mut r = vec![root.clone()];
        for k in 1..n {
            let mut acc = self.c[k].clone();
            for i in 1..k {
                acc = acc.minus(&r[i].times(&r[k - i]));
            }
            r.push(acc.times(&inv2));
        }
        Ok(TruncSeries::new(self.e, self.val / 2, r, self.val / 2 + n as i64))
    }
    /// `log(s)` for `s = 1 + O(τ)`.
    pub fn log(&self) -> Result<Self, Error> {
        if self.val != 0 || !self.c[0].is_one() {
            return Err(Error::Precondition("log needs leading term 1 at valuation 0".into()));
        }
        let d = self.deriv().div(self)?;
        d.integrate()
    }
    /// `exp(s)` for `s` of positive valuation.
    pub fn exp(&self) -> Result<Self, Error> {
        if self.val < 1 {
            return Err(Error::Precondition("exp needs positive valuation".into()));
        }
        let n = self.prec.max(0) as usize;
        let mut r = vec![F::one()];
        for k in 1..n {
            let mut acc = F::zero();
            for j in 1..=k {
                let sj = self.coeff(j as i64).unwrap();
                if !sj.is_zero() {
                    acc = acc.plus(&sj.times(&F::from_int(j as i64)).times(&r[k - j]));
                }
            }
            r.push(acc.times(&F::from_int(k as i64).inv().unwrap()));
        }
        Ok(TruncSeries::new(self.e, 0, r, self.prec))
    }
    /// Compositional inverse.
    ///
    /// A simple zero is inverted directly. A simple pole `s` is inverted as a
    /// function of `ξ = 1/s`, i.e. the result `r` satisfies `1/s(r(ξ)) = ξ`.
    pub fn reversion(&self) -> Result<Self, Error> {
        let s = match self.val {
            1 => self.clone(),
            -1 => self.inv()?,
            v => return Err(Error::NotInvertible(v)),
        };
        // Lagrange inversion: [ξ^n] r = (1/n) [w^{n-1}] (w/s(w))^n.
        let n = (s.prec - 1).max(0);
        let q = s.shift(-1).inv()?;
        let mut c = Vec::with_capacity(n as usize);
        let mut qp = TruncSeries::constant(s.e, F::one(), q.prec);
        for k in 1..=n {
            qp = qp.mul(&q);
            let a = qp.coeff(k - 1).ok_or(Error::TruncationExhausted)?;
            c.push(a.times(&F::from_int(k).inv().unwrap()));
        }
        Ok(TruncSeries::new(s.e, 1, c, n + 1))
    }
}

impl<F: Field + fmt::Display> fmt::Display for TruncSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})τ^{}", a, k)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(τ^{})", self.prec)
    }
}

/// `λ·log(τ^e) + body`: a series carrying an explicit logarithm of the
/// uniformizer.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries<F: Field> {
    pub lambda: F,
    pub body: TruncSeries<F>,
}

impl<F: Field> LogSeries<F> {
    pub fn new(lambda: F, body: TruncSeries<F>) -> Self {
        LogSeries { lambda, body }
    }
    pub fn from_series(body: TruncSeries<F>) -> Self {
        LogSeries {
            lambda: F::zero(),
            body,
        }
    }
    pub fn add(&self, o: &Self) -> Self {
        LogSeries::new(self.lambda.plus(&o.lambda), self.body.add(&o.body))
    }
    pub fn scale(&self, a: &F) -> Self {
        LogSeries::new(self.lambda.times(a), self.body.scale(a))
    }
    /// Derivative in `τ`; the logarithm contributes `λe/τ`.
    pub fn deriv(&self) -> TruncSeries<F> {
        let e = self.body.e();
        let log_part = TruncSeries::monomial(e, self.lambda.times(&F::from_int(e as i64)), -1, self.body.prec() - 1);
        self.body.deriv().add(&log_part)
    }
    /// Antiderivative in `τ` that absorbs a `τ^{-1}` term into the logarithm.
    pub fn integrate(s: &TruncSeries<F>) -> Self {
        let e = s.e();
        let r = s.coeff(-1).unwrap_or_else(F::zero);
        let rest = s.sub(&TruncSeries::monomial(e, r.clone(), -1, s.prec()));
        let body = rest.integrate().expect("residue removed");
        LogSeries::new(r.times(&F::from_int(e as i64).inv().unwrap()), body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{q, Q};

    fn s(start: i64, c: &[(i64, i64)], prec: i64) -> TruncSeries<Q> {
        TruncSeries::new(1, start, c.iter().map(|&(n, d)| q(n, d)).collect(), prec)
    }

    #[test]
    fn binomial_sqrt() {
        let one_plus = s(0, &[(1, 1), (1, 1)], 3);
        let r = one_plus.sqrt(&q(1, 1)).unwrap();
        assert_eq!(r, s(0, &[(1, 1), (1, 2), (-1, 8)], 3));
        let t2 = s(2, &[(1, 1)], 6);
        assert_eq!(t2.sqrt(&q(1, 1)).unwrap(), s(1, &[(1, 1)], 5));
        assert!(s(1, &[(1, 1)], 4).sqrt(&q(1, 1)).is_err());
        assert!(one_plus.sqrt(&q(2, 1)).is_err());
    }

    #[test]
    fn log_exp() {
        let l = s(0, &[(1, 1), (1, 1)], 5).log().unwrap();
        assert_eq!(l, s(1, &[(1, 1), (-1, 2), (1, 3), (-1, 4)], 5));
        let e = s(1, &[(1, 1)], 4).exp().unwrap();
        assert_eq!(e, s(0, &[(1, 1), (1, 1), (1, 2), (1, 6)], 4));
        let p = s(0, &[(1, 1), (1, 1), (1, 1)], 8);
        assert_eq!(p.log().unwrap().exp().unwrap(), p);
    }

    #[test]
    fn reversion_basic() {
        let two = s(1, &[(2, 1)], 6);
        assert_eq!(two.reversion().unwrap(), s(1, &[(1, 2)], 6));
        let id = s(1, &[(1, 1)], 6);
        assert_eq!(id.reversion().unwrap(), id);
        assert!(s(2, &[(1, 1)], 6).reversion().is_err());
    }

    #[test]
    fn precision_is_tracked() {
        let a = s(-1, &[(1, 1), (1, 1)], 3);
        let b = s(0, &[(1, 1), (2, 1)], 2);
        let p = a.mul(&b);
        assert_eq!(p.prec(), 1);
        assert_eq!(p.valuation(), -1);
    }
}
