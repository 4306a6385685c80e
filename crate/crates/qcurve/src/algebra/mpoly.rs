use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::field::{Field, Q};
use crate::{Error, Result};

/// Multivariate Laurent polynomial over ℚ in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Q>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }
    pub fn monomial(c: Q, exps: Vec<i32>) -> Self {
        let mut p = MPoly::zero(exps.len());
        p.add_term(exps, c);
        p
    }
    pub fn constant(nvars: usize, c: Q) -> Self {
        MPoly::monomial(c, vec![0; nvars])
    }
    pub fn nvars(&self) -> usize {
        self.nvars
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Q)> {
        self.terms.iter()
    }
    pub fn coeff(&self, exps: &[i32]) -> Q {
        self.terms.get(exps).cloned().unwrap_or_else(<Q as Field>::zero)
    }
    pub fn add_term(&mut self, exps: Vec<i32>, c: Q) {
        assert_eq!(exps.len(), self.nvars, "arity mismatch");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().plus(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, v) in &o.terms {
            r.add_term(k.clone(), v.clone());
        }
        r
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Q::from_int(-1)))
    }
    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.times(c))).collect(),
        }
    }
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars, "arity mismatch");
        let mut r = MPoly::zero(self.nvars);
        for (k1, v1) in &self.terms {
            for (k2, v2) in &o.terms {
                let k: Vec<i32> = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                r.add_term(k, v1.times(v2));
            }
        }
        r
    }
    /// Tensor product: variables of `o` are appended after those of `self`.
    pub fn tensor(&self, o: &Self) -> Self {
        let mut r = MPoly::zero(self.nvars + o.nvars);
        for (k1, v1) in &self.terms {
            for (k2, v2) in &o.terms {
                let mut k = k1.clone();
                k.extend_from_slice(k2);
                r.add_term(k, v1.times(v2));
            }
        }
        r
    }
    /// Reorders variables: variable `i` of the result is variable `perm[i]`
    /// of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut r = MPoly::zero(self.nvars);
        for (k, v) in &self.terms {
            r.add_term(perm.iter().map(|&p| k[p]).collect(), v.clone());
        }
        r
    }
    /// Partial derivative in variable `i`.
    pub fn deriv(&self, i: usize) -> Self {
        let mut r = MPoly::zero(self.nvars);
        for (k, v) in &self.terms {
            if k[i] != 0 {
                let mut e = k.clone();
                e[i] -= 1;
                r.add_term(e, v.times(&Q::from_int(k[i] as i64)));
            }
        }
        r
    }
    /// Antiderivative in variable `i` with no constant; fails on `1/t_i`.
    pub fn integrate(&self, i: usize) -> Result<Self> {
        let mut r = MPoly::zero(self.nvars);
        for (k, v) in &self.terms {
            if k[i] == -1 {
                return Err(Error::LogObstruction);
            }
            let mut e = k.clone();
            e[i] += 1;
            r.add_term(e, v.times(&Q::from_int((k[i] + 1) as i64).inv().unwrap()));
        }
        Ok(r)
    }
    /// Evaluates at a point with nonzero coordinates where needed.
    pub fn eval(&self, pt: &[Q]) -> Result<Q> {
        let mut acc = <Q as Field>::zero();
        for (k, v) in &self.terms {
            let mut t = v.clone();
            for (x, &e) in pt.iter().zip(k) {
                if e < 0 {
                    t = t.times(&Field::pow(&x.inv().ok_or(Error::DivisionByZero)?, (-e) as u32));
                } else {
                    t = t.times(&Field::pow(x, e as u32));
                }
            }
            acc = acc.plus(&t);
        }
        Ok(acc)
    }
    /// Removes the variables in `fix` by evaluating them, keeping the rest.
    pub fn specialize(&self, fix: &[(usize, Q)]) -> Result<Self> {
        let keep: Vec<usize> = (0..self.nvars).filter(|i| !fix.iter().any(|(j, _)| j == i)).collect();
        let mut r = MPoly::zero(keep.len());
        for (k, v) in &self.terms {
            let mut t = v.clone();
            for (j, x) in fix {
                let e = k[*j];
                let p = if e < 0 {
                    Field::pow(&x.inv().ok_or(Error::DivisionByZero)?, (-e) as u32)
                } else {
                    Field::pow(x, e as u32)
                };
                t = t.times(&p);
            }
            r.add_term(keep.iter().map(|&i| k[i]).collect(), t);
        }
        Ok(r)
    }
    /// Evaluates variable `i` at `x`, keeping it as a variable of degree 0.
    pub fn substitute(&self, i: usize, x: &Q) -> Result<Self> {
        let mut r = MPoly::zero(self.nvars);
        for (k, v) in &self.terms {
            let e = k[i];
            let p = if e < 0 {
                Field::pow(&x.inv().ok_or(Error::DivisionByZero)?, (-e) as u32)
            } else {
                Field::pow(x, e as u32)
            };
            let mut kk = k.clone();
            kk[i] = 0;
            r.add_term(kk, v.times(&p));
        }
        Ok(r)
    }
    /// Restriction to the diagonal: every variable set to a single `t`.
    pub fn diagonal(&self) -> MPoly {
        let mut r = MPoly::zero(1);
        for (k, v) in &self.terms {
            r.add_term(vec![k.iter().sum()], v.clone());
        }
        r
    }
    /// Range of exponents of variable `i`.
    pub fn exponent_range(&self, i: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|k| k[i]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::q;

    #[test]
    fn arithmetic_and_permutation() {
        let a = MPoly::monomial(q(1, 1), vec![1, 0]).add(&MPoly::monomial(q(2, 1), vec![0, 1]));
        let b = a.permute(&[1, 0]);
        assert_eq!(b.coeff(&[1, 0]), q(2, 1));
        let sq = a.mul(&a);
        assert_eq!(sq.coeff(&[1, 1]), q(4, 1));
        let c = a.sub(&a);
        assert!(c.is_zero());
    }

    #[test]
    fn calculus() {
        let a = MPoly::monomial(q(3, 1), vec![2, -2]);
        assert_eq!(a.deriv(1), MPoly::monomial(q(-6, 1), vec![2, -3]));
        assert_eq!(a.integrate(0).unwrap(), MPoly::monomial(q(1, 1), vec![3, -2]));
        assert!(MPoly::monomial(q(1, 1), vec![-1, 0]).integrate(0).is_err());
        assert_eq!(a.eval(&[q(1, 1), q(2, 1)]).unwrap(), q(3, 4));
    }
}
