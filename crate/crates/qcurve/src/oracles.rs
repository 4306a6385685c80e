//! Independent ground truth: ψ-class intersection numbers, brute-force
//! cellular graph counts and closed-form special-function series.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::algebra::{q, Field, MPoly, Poly, Quad, RatFunc, Q};
use crate::{Error, Result};

/// `(2k − 1)!!` style double factorial with `(−1)!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::from(1);
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

fn dfq(n: i64) -> Q {
    Q::from_integer(double_factorial(n))
}

/// Memoized Witten–Kontsevich correlators `⟨τ_{d₁}⋯τ_{d_n}⟩_g` from the
/// DVV (Virasoro) recursion.
#[derive(Default)]
pub struct Dvv {
    memo: HashMap<(i64, Vec<i64>), Q>,
}

impl Dvv {
    pub fn new() -> Self {
        Self::default()
    }

    /// The correlator; zero whenever `Σd ≠ 3g − 3 + n`.
    pub fn corr(&mut self, g: i64, ds: &[i64]) -> Q {
        let n = ds.len() as i64;
        if g < 0 || n == 0 || ds.iter().any(|&d| d < 0) || ds.iter().sum::<i64>() != 3 * g - 3 + n {
            return <Q as Field>::zero();
        }
        let mut key = ds.to_vec();
        key.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(v) = self.memo.get(&(g, key.clone())) {
            return v.clone();
        }
        let v = self.compute(g, &key);
        self.memo.insert((g, key), v.clone());
        v
    }

    fn compute(&mut self, g: i64, ds: &[i64]) -> Q {
        if ds[0] == 0 {
            // only ⟨τ₀³⟩₀ survives the dimension constraint
            return Q::from_int(1);
        }
        if g == 1 && ds == [1] {
            return q(1, 24);
        }
        let k = ds[0] - 1;
        let rest = &ds[1..];
        let mut acc = <Q as Field>::zero();
        for (j, &dj) in rest.iter().enumerate() {
            let mut s: Vec<i64> = rest.to_vec();
            s[j] = dj + k;
            let c = dfq(2 * k + 2 * dj + 1) / dfq(2 * dj - 1);
            acc = acc.plus(&c.times(&self.corr(g, &s)));
        }
        let half = q(1, 2);
        for a in 0..k {
            let b = k - 1 - a;
            let w = dfq(2 * a + 1).times(&dfq(2 * b + 1)).times(&half);
            let mut inner = <Q as Field>::zero();
            let mut s = vec![a, b];
            s.extend_from_slice(rest);
            inner = inner.plus(&self.corr(g - 1, &s));
            let m = rest.len();
            for mask in 0..(1u32 << m) {
                let (mut i_part, mut j_part) = (vec![a], vec![b]);
                for (i, &d) in rest.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        i_part.push(d);
                    } else {
                        j_part.push(d);
                    }
                }
                for g1 in 0..=g {
                    let l = self.corr(g1, &i_part);
                    if l.is_zero() {
                        continue;
                    }
                    inner = inner.plus(&l.times(&self.corr(g - g1, &j_part)));
                }
            }
            acc = acc.plus(&w.times(&inner));
        }
        acc / dfq(2 * k + 3)
    }
}

/// One-shot correlator with a fresh table.
pub fn dvv_intersection(g: i64, ds: &[i64]) -> Q {
    Dvv::new().corr(g, ds)
}

pub const CELLULAR_GUARD: usize = 12;

/// Number of connected arrowed cellular graphs of genus `g` with labelled
/// vertices of degrees `mu`, by enumerating all pairings of half-edges.
pub fn enumerate_cellular(g: i64, mu: &[usize]) -> Result<u64> {
    let total: usize = mu.iter().sum();
    if mu.is_empty() || mu.contains(&0) {
        return Err(Error::Precondition("vertex degrees must be positive".into()));
    }
    if total > CELLULAR_GUARD {
        return Err(Error::Precondition(format!(
            "total degree {total} exceeds {CELLULAR_GUARD}"
        )));
    }
    if total % 2 == 1 {
        return Ok(0);
    }
    let mut sigma = vec![0usize; total];
    let mut vertex = vec![0usize; total];
    let mut start = 0;
    for (v, &m) in mu.iter().enumerate() {
        for i in 0..m {
            sigma[start + i] = start + (i + 1) % m;
            vertex[start + i] = v;
        }
        start += m;
    }
    let mut alpha = vec![usize::MAX; total];
    let mut count = 0u64;
    let ctx = Cellular {
        sigma: &sigma,
        vertex: &vertex,
        n: mu.len(),
        g,
    };
    ctx.pair(&mut alpha, &mut count);
    Ok(count)
}

struct Cellular<'a> {
    sigma: &'a [usize],
    vertex: &'a [usize],
    n: usize,
    g: i64,
}

impl Cellular<'_> {
    fn pair(&self, alpha: &mut [usize], count: &mut u64) {
        let Some(h) = alpha.iter().position(|&a| a == usize::MAX) else {
            if self.accept(alpha) {
                *count += 1;
            }
            return;
        };
        for k in h + 1..alpha.len() {
            if alpha[k] == usize::MAX {
                alpha[h] = k;
                alpha[k] = h;
                self.pair(alpha, count);
                alpha[h] = usize::MAX;
                alpha[k] = usize::MAX;
            }
        }
    }

    fn accept(&self, alpha: &[usize]) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (h, &a) in alpha.iter().enumerate() {
            let (u, v) = (find(&mut parent, self.vertex[h]), find(&mut parent, self.vertex[a]));
            parent[u] = v;
        }
        let root = find(&mut parent, 0);
        if (0..self.n).any(|v| find(&mut parent, v) != root) {
            return false;
        }
        let mut seen = vec![false; alpha.len()];
        let mut faces = 0i64;
        for s in 0..alpha.len() {
            if seen[s] {
                continue;
            }
            faces += 1;
            let mut h = s;
            while !seen[h] {
                seen[h] = true;
                h = self.sigma[alpha[h]];
            }
        }
        let chi = self.n as i64 - alpha.len() as i64 / 2 + faces;
        chi == 2 - 2 * self.g
    }
}

/// `(a)_n` with `a` in any field.
pub fn pochhammer<F: Field>(a: &F, n: usize) -> F {
    let mut acc = F::one();
    for j in 0..n {
        acc = acc.times(&a.plus(&F::from_int(j as i64)));
    }
    acc
}

fn hbar_poly(c: &[Q]) -> RatFunc<Q> {
    RatFunc::from_poly(Poly::new(c.to_vec()))
}

/// Coefficient of `x^{-2n}` in `x^{1/ℏ} Ψ`: `ℏⁿ (1/ℏ)_{2n} / (2n)!!`.
pub fn catalan_closed_form(n: usize) -> RatFunc<Q> {
    let inv_h = RatFunc::x().recip().expect("ℏ ≠ 0");
    let h_n = RatFunc::x().pow(n as i32).expect("nonnegative power");
    pochhammer(&inv_h, 2 * n)
        .mul(&h_n)
        .scale(&dfq(2 * n as i64).inv().unwrap())
}

/// Coefficients `x⁰ … x^order` of `₂F₁(A, B; c/ℏ; x)`, with `A, B` the
/// conjugate pair `(a+b+1)/(2ℏ) − 1/2 ∓ √((a+b+1−ℏ)² − 4ab)/(2ℏ)`.
///
/// The products are formed in `ℚ(ℏ)(√p)` and each coefficient must descend
/// to `ℚ(ℏ)`.
pub fn gauss_2f1_series(a: &Q, b: &Q, c: &Q, order: usize) -> Result<Vec<RatFunc<Q>>> {
    let s = a.plus(b).plus(&Q::from_int(1));
    // p(ℏ) = (s − ℏ)² − 4ab
    let p = Poly::new(vec![
        s.times(&s).minus(&Q::from_int(4).times(a).times(b)),
        s.times(&Q::from_int(-2)),
        Q::from_int(1),
    ]);
    let inv_2h = RatFunc::x().scale(&Q::from_int(2)).recip()?;
    let base = RatFunc::constant(s.clone())
        .mul(&inv_2h)
        .sub(&RatFunc::constant(q(1, 2)));
    let cc = RatFunc::constant(c.clone()).mul(&RatFunc::x().recip()?);
    let mut out = Vec::with_capacity(order + 1);
    match crate::algebra::ratfunc::poly_sqrt(&p) {
        Some(r) => {
            let rr = RatFunc::from_poly(r).mul(&inv_2h);
            let (aa, bb) = (base.sub(&rr), base.add(&rr));
            for n in 0..=order {
                let num = pochhammer(&aa, n).mul(&pochhammer(&bb, n));
                let den = pochhammer(&cc, n).scale(&Q::from_integer(factorial(n)));
                out.push(num.divide(&den)?);
            }
        }
        None => {
            let tower = crate::algebra::QuadTower::new(RatFunc::from_poly(p))?;
            let rr = tower.elem(RatFunc::zero(), inv_2h.clone());
            let bq = tower.base(base.clone());
            let (aa, bb) = (bq.minus(&rr), bq.plus(&rr));
            for n in 0..=order {
                let num: Quad<RatFunc<Q>> = pochhammer(&aa, n).times(&pochhammer(&bb, n));
                let num = num
                    .descend()
                    .ok_or_else(|| Error::Precondition(format!("coefficient {n} does not descend to Q(hbar)")))?;
                let den = pochhammer(&cc, n).scale(&Q::from_integer(factorial(n)));
                out.push(num.divide(&den)?);
            }
        }
    }
    Ok(out)
}

/// The product formula for `a = b = 1/2, c = 1`:
/// `(1/(4ⁿn!)) Π_{m=1}^n (1 + 8(m−1)ℏ + 4(m−1)(m−2)ℏ²)/(1 + (m−1)ℏ) · ℏ^{−n}`.
pub fn gauss_product_formula(n: usize) -> RatFunc<Q> {
    let mut acc = RatFunc::constant(Q::from_int(1));
    for m in 1..=n as i64 {
        let num = hbar_poly(&[
            Q::from_int(1),
            Q::from_int(8 * (m - 1)),
            Q::from_int(4 * (m - 1) * (m - 2)),
        ]);
        let den = hbar_poly(&[Q::from_int(1), Q::from_int(m - 1)]);
        acc = acc.mul(&num.divide(&den).expect("nonzero"));
    }
    let scale = Q::from_integer(BigInt::from(4).pow(n as u32) * factorial(n))
        .inv()
        .unwrap();
    acc.scale(&scale).mul(&RatFunc::x().pow(-(n as i32)).expect("ℏ ≠ 0"))
}

/// Standard `₂F₁(a, b; c; x)` coefficients.
pub fn hypergeometric_2f1(a: &Q, b: &Q, c: &Q, order: usize) -> Vec<Q> {
    (0..=order)
        .map(|n| pochhammer(a, n).times(&pochhammer(b, n)) / pochhammer(c, n).times(&Q::from_integer(factorial(n))))
        .collect()
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

/// The Airy free energy as a polynomial in `u_i = x_i^{−1/2}`:
/// `(−1)ⁿ/2^{2g−2+n} Σ ⟨τ_d⟩ Π (2d_i − 1)!! u_i^{2d_i+1}`.
pub fn airy_closed_free_energy(dvv: &mut Dvv, g: i64, n: usize) -> MPoly {
    let mut out = MPoly::zero(n);
    let dim = 3 * g - 3 + n as i64;
    if dim < 0 || 2 * g - 2 + n as i64 <= 0 {
        return out;
    }
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    let pref = q(sign, 1) / Field::pow(&q(2, 1), (2 * g - 2 + n as i64) as u32);
    for ds in compositions(dim, n) {
        let c = dvv.corr(g, &ds);
        if c.is_zero() {
            continue;
        }
        let w = ds.iter().fold(c, |acc, &d| acc.times(&dfq(2 * d - 1)));
        out.add_term(ds.iter().map(|&d| (2 * d + 1) as i32).collect(), w.times(&pref));
    }
    out
}

/// All vectors of `n` nonnegative integers summing to `total`.
pub fn compositions(total: i64, n: usize) -> Vec<Vec<i64>> {
    if n == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, n - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dvv_base_values() {
        let mut d = Dvv::new();
        assert_eq!(d.corr(0, &[0, 0, 0]), q(1, 1));
        assert_eq!(d.corr(1, &[1]), q(1, 24));
        assert_eq!(d.corr(0, &[1, 0, 0, 0]), q(1, 1));
        assert_eq!(d.corr(2, &[4]), q(1, 1152));
        assert_eq!(d.corr(2, &[2, 3]), q(29, 5760));
        assert_eq!(d.corr(1, &[2]), q(0, 1));
    }

    #[test]
    fn cellular_small() {
        assert_eq!(enumerate_cellular(0, &[2]).unwrap(), 1);
        assert_eq!(enumerate_cellular(0, &[4]).unwrap(), 2);
        assert_eq!(enumerate_cellular(1, &[4]).unwrap(), 1);
        assert_eq!(enumerate_cellular(0, &[1, 1]).unwrap(), 1);
        assert_eq!(enumerate_cellular(0, &[3]).unwrap(), 0);
        assert_eq!(enumerate_cellular(0, &[6]).unwrap(), 5);
        assert!(enumerate_cellular(0, &[7, 7]).is_err());
    }

    #[test]
    fn catalan_first_coefficients() {
        assert_eq!(catalan_closed_form(0), RatFunc::constant(q(1, 1)));
        let one_plus_h = RatFunc::from_poly(Poly::new(vec![q(1, 1), q(1, 1)]));
        let expected = one_plus_h.divide(&RatFunc::x().scale(&q(2, 1))).unwrap();
        assert_eq!(catalan_closed_form(1), expected);
    }

    #[test]
    fn gauss_parameters_descend() {
        let h = q(1, 2);
        let s = gauss_2f1_series(&h, &h, &q(1, 1), 4).unwrap();
        for (n, c) in s.iter().enumerate() {
            assert_eq!(*c, gauss_product_formula(n), "coefficient {n}");
        }
    }
}
