//! Squarefree decomposition and factorization of rational polynomials.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{Field, Q};
use super::poly::Poly;

/// Yun's squarefree decomposition: monic, pairwise coprime, nonconstant
/// factors `p_i` with `p = c · Π p_i^{m_i}`.
pub fn squarefree<F: Field>(p: &Poly<F>) -> Vec<(Poly<F>, u32)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = p.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0);
    let mut c = df.div_exact(&a0).sub(&b.derivative());
    let mut i = 1u32;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&c);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_exact(&a);
        c = c.div_exact(&a).sub(&b.derivative());
        i += 1;
    }
    out
}

/// Irreducible factors of a rational polynomial with multiplicities.
///
/// `complete` is false only when the Kronecker search exceeded its budget,
/// in which case the leftover factor is reported as if irreducible.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub factors: Vec<(Poly<Q>, u32)>,
    pub complete: bool,
}

const KRONECKER_BUDGET: usize = 200_000;

pub fn factor_q(p: &Poly<Q>) -> Factorization {
    let mut factors = Vec::new();
    let mut complete = true;
    for (s, m) in squarefree(p) {
        let (fs, ok) = factor_squarefree(&s);
        complete &= ok;
        factors.extend(fs.into_iter().map(|f| (f, m)));
    }
    factors.sort_by(|a, b| {
        (a.0.degree(), format!("{:?}", a.0.coeffs())).cmp(&(b.0.degree(), format!("{:?}", b.0.coeffs())))
    });
    Factorization { factors, complete }
}

/// Rational roots of `p`, without multiplicity.
pub fn rational_roots(p: &Poly<Q>) -> Vec<Q> {
    let mut roots = Vec::new();
    if p.is_zero() {
        return roots;
    }
    let mut cur = p.clone();
    if cur.x_valuation() > 0 {
        roots.push(<Q as Field>::zero());
        cur = Poly::new(cur.coeffs()[cur.x_valuation()..].to_vec());
    }
    if cur.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let z = cur.primitive_integer();
    let a0 = z[0].abs();
    let an = z.last().unwrap().abs();
    for num in divisors(&a0) {
        for den in divisors(&an) {
            for s in [1i64, -1] {
                let r = Q::new(&num * BigInt::from(s), den.clone());
                if !roots.contains(&r) && Field::is_zero(&cur.eval(&r)) {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    if let Some(m) = n.to_u64() {
        let mut d = 1u64;
        while d <= m / d && d <= 10_000_000 {
            if m % d == 0 {
                out.push(BigInt::from(d));
                if m / d != d {
                    out.push(BigInt::from(m / d));
                }
            }
            d += 1;
        }
        out.sort();
        return out;
    }
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
        if d > BigInt::from(10_000_000u64) {
            break;
        }
    }
    out.sort();
    out
}

fn factor_squarefree(p: &Poly<Q>) -> (Vec<Poly<Q>>, bool) {
    let mut out = Vec::new();
    let mut rest = p.monic();
    for r in rational_roots(&rest) {
        let l = Poly::linear(r);
        rest = rest.div_exact(&l);
        out.push(l);
    }
    let mut ok = true;
    let mut stack = vec![rest];
    while let Some(f) = stack.pop() {
        let d = f.degree().unwrap_or(0);
        if d == 0 {
            continue;
        }
        if d <= 3 {
            out.push(f);
            continue;
        }
        match kronecker_split(&f) {
            Split::Found(g) => {
                let h = f.div_exact(&g);
                stack.push(g);
                stack.push(h);
            }
            Split::Irreducible => out.push(f),
            Split::GaveUp => {
                ok = false;
                out.push(f);
            }
        }
    }
    (out, ok)
}

enum Split {
    Found(Poly<Q>),
    Irreducible,
    GaveUp,
}

/// Searches for a factor of degree `2..=deg/2` of a monic polynomial with
/// no rational roots by interpolating integer divisor values.
fn kronecker_split(f: &Poly<Q>) -> Split {
    let zf: Vec<BigInt> = f.primitive_integer();
    let fi = Poly::new(zf.iter().map(|c| Q::from_integer(c.clone())).collect());
    let d = f.degree().unwrap();
    let mut samples: Vec<(i64, BigInt)> = (-12i64..=12)
        .map(|x| (x, fi.eval(&Q::from_integer(x.into())).to_integer()))
        .collect();
    samples.sort_by_key(|(x, v)| (divisors(&v.abs()).len(), x.abs()));
    for k in 2..=d / 2 {
        let pts = &samples[..=k];
        let divs: Vec<Vec<BigInt>> = pts.iter().map(|(_, v)| divisors(&v.abs())).collect();
        let mut total: usize = 1;
        for dv in &divs {
            total = total.saturating_mul(2 * dv.len());
        }
        if total > KRONECKER_BUDGET {
            return Split::GaveUp;
        }
        let mut idx = vec![0usize; k + 1];
        loop {
            let vals: Vec<Q> = (0..=k)
                .map(|i| {
                    let n = divs[i].len();
                    let (j, s) = (idx[i] % n, idx[i] / n);
                    let v = Q::from_integer(divs[i][j].clone());
                    if s == 1 && i > 0 {
                        -v
                    } else {
                        v
                    }
                })
                .collect();
            let g = interpolate(
                &pts.iter()
                    .map(|(x, _)| Q::from_integer((*x).into()))
                    .collect::<Vec<_>>(),
                &vals,
            );
            if g.degree() == Some(k) && g.coeffs().iter().all(|c| c.is_integer()) {
                let gm = g.monic();
                let (_, r) = f.divrem(&gm).unwrap();
                if r.is_zero() {
                    return Split::Found(gm);
                }
            }
            let mut i = 0;
            loop {
                if i > k {
                    break;
                }
                idx[i] += 1;
                let lim = if i == 0 { divs[0].len() } else { 2 * divs[i].len() };
                if idx[i] < lim {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i > k {
                break;
            }
        }
    }
    Split::Irreducible
}

fn interpolate(xs: &[Q], ys: &[Q]) -> Poly<Q> {
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut term = Poly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                let inv = (xi - xj).recip();
                term = term.mul(&Poly::linear(xj.clone())).scale(&inv);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::q;

    fn p(c: &[i64]) -> Poly<Q> {
        Poly::from_ints(c)
    }

    #[test]
    fn yun_multiplicities() {
        // x²(x−1)³(x+2)
        let f = p(&[0, 1]).pow(2).mul(&p(&[-1, 1]).pow(3)).mul(&p(&[2, 1]));
        let s = squarefree(&f);
        assert_eq!(s, vec![(p(&[2, 1]), 1), (p(&[0, 1]), 2), (p(&[-1, 1]), 3)]);
    }

    #[test]
    fn rational_roots_found() {
        let f = p(&[-1, 0, 4]);
        let mut r = rational_roots(&f);
        r.sort();
        assert_eq!(r, vec![q(-1, 2), q(1, 2)]);
    }

    #[test]
    fn quartic_in_x_squared_is_irreducible() {
        let fz = factor_q(&p(&[-1, 0, 1, 0, 1]));
        assert!(fz.complete);
        assert_eq!(fz.factors, vec![(p(&[-1, 0, 1, 0, 1]), 1)]);
    }

    #[test]
    fn quartic_product_of_quadratics() {
        let f = p(&[2, 0, 1]).mul(&p(&[3, 1, 1]));
        let fz = factor_q(&f);
        assert!(fz.complete);
        assert_eq!(fz.factors.len(), 2);
        let back = fz.factors.iter().fold(Poly::one(), |a, (g, m)| a.mul(&g.pow(*m)));
        assert_eq!(back, f);
    }

    #[test]
    fn gauss_discriminant_zeros() {
        let fz = factor_q(&p(&[1, -3, 3]));
        assert_eq!(fz.factors, vec![(p(&[1, -3, 3]).monic(), 1)]);
    }
}
