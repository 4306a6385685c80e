//! Local expansions, residues and partial fractions of rational functions.

use super::factor;
use super::field::{Field, Q};
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::series::TruncSeries;
use crate::Error;

/// A point of the projective line over `F`.
#[derive(Clone, Debug, PartialEq)]
pub enum Point<F: Field> {
    Finite(F),
    Infinity,
}

/// Laurent expansion of `f` at `place` in `τ`, `τ^e` being the uniformizer
/// `x − a` or `1/x`, with all coefficients through `τ^order`.
pub fn series_expand<F: Field>(f: &RatFunc<F>, place: &Point<F>, order: i64, e: u8) -> TruncSeries<F> {
    let ee = e as i64;
    let order_u = order.div_euclid(ee);
    let (num, den, offset) = match place {
        Point::Finite(a) => (f.num().taylor_shift(a), f.den().taylor_shift(a), 0i64),
        Point::Infinity => {
            let dn = f.num().deg_i().max(0) as usize;
            let dd = f.den().deg_i() as usize;
            (f.num().reversed(dn), f.den().reversed(dd), dd as i64 - dn as i64)
        }
    };
    let su = if num.is_zero() {
        TruncSeries::zero(1, order_u + 1)
    } else {
        let vn = num.x_valuation() as i64;
        let vd = den.x_valuation() as i64;
        let val = vn - vd + offset;
        if order_u < val {
            TruncSeries::zero(1, order_u + 1)
        } else {
            let len = order_u - val + 1;
            let ns = TruncSeries::new(1, 0, num.coeffs().to_vec(), vn + len);
            let ds = TruncSeries::new(1, 0, den.coeffs().to_vec(), vd + len);
            ns.div(&ds).expect("nonzero denominator").shift(offset)
        }
    };
    ramify(&su, e).truncate(order + 1)
}

/// Rewrites a series in `u` as a series in `τ` with `u = τ^e`.
pub fn ramify<F: Field>(s: &TruncSeries<F>, e: u8) -> TruncSeries<F> {
    if e == 1 {
        return s.clone();
    }
    let ee = e as i64;
    let mut c = Vec::new();
    for k in s.valuation()..s.prec() {
        c.push(s.coeff(k).unwrap());
        for _ in 1..ee {
            c.push(F::zero());
        }
    }
    TruncSeries::new(e, s.valuation() * ee, c, s.prec() * ee)
}

/// Residue of the differential `f(t) dt` at `place`.
pub fn residue_at<F: Field>(f: &RatFunc<F>, place: &Point<F>) -> F {
    match place {
        Point::Finite(_) => series_expand(f, place, -1, 1).coeff(-1).unwrap(),
        Point::Infinity => series_expand(f, place, 1, 1).coeff(1).unwrap().negate(),
    }
}

/// One irreducible denominator factor `P` with the numerators `c_j` of
/// `c_j / P^j`, `deg c_j < deg P`, for `j = 1..=mult`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolePart<F: Field> {
    pub factor: Poly<F>,
    pub numerators: Vec<Poly<F>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions<F: Field> {
    pub poly_part: Poly<F>,
    pub parts: Vec<PolePart<F>>,
}

impl<F: Field> PartialFractions<F> {
    /// Reassembles the rational function.
    pub fn sum(&self) -> RatFunc<F> {
        let mut acc = RatFunc::from_poly(self.poly_part.clone());
        for part in &self.parts {
            for (j, c) in part.numerators.iter().enumerate() {
                let t = RatFunc::new(c.clone(), part.factor.pow(j as u32 + 1)).expect("nonzero");
                acc = acc.add(&t);
            }
        }
        acc
    }
}

/// Extended Euclid: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
pub fn ext_gcd<F: Field>(a: &Poly<F>, b: &Poly<F>) -> (Poly<F>, Poly<F>, Poly<F>) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (qq, r) = r0.divrem(&r1).expect("nonzero");
        r0 = std::mem::replace(&mut r1, r);
        let s = s0.sub(&qq.mul(&s1));
        s0 = std::mem::replace(&mut s1, s);
        let t = t0.sub(&qq.mul(&t1));
        t0 = std::mem::replace(&mut t1, t);
    }
    let l = r0.lc().inv().unwrap_or_else(F::one);
    (r0.scale(&l), s0.scale(&l), t0.scale(&l))
}

/// Partial fractions against a caller-supplied factorization of the
/// denominator into pairwise coprime monic factors with multiplicities.
pub fn partial_fractions_with<F: Field>(
    f: &RatFunc<F>,
    factors: &[(Poly<F>, u32)],
) -> Result<PartialFractions<F>, Error> {
    let den = f.den();
    let check = factors.iter().fold(Poly::one(), |acc, (p, m)| acc.mul(&p.pow(*m)));
    if check.monic() != den.monic() {
        return Err(Error::Precondition(
            "factorization does not match the denominator".into(),
        ));
    }
    let (poly_part, rem) = f.num().divrem(den)?;
    let mut parts = Vec::new();
    for (p, m) in factors {
        let qi = p.pow(*m);
        let rest = den.div_exact(&qi);
        let (g, s, _) = ext_gcd(&rest, &qi);
        if g.degree() != Some(0) {
            return Err(Error::Precondition("factors are not coprime".into()));
        }
        let (_, mut ni) = rem.mul(&s).divrem(&qi)?;
        let mut digits = Vec::new();
        for _ in 0..*m {
            let (qq, r) = ni.divrem(p)?;
            digits.push(r);
            ni = qq;
        }
        // ni/P^m = Σ_j digits[j] P^{j-m}, so c_{m-j} = digits[j].
        digits.reverse();
        parts.push(PolePart {
            factor: p.clone(),
            numerators: digits,
        });
    }
    Ok(PartialFractions { poly_part, parts })
}

/// Partial fractions over ℚ with the denominator factored into irreducibles.
pub fn partial_fractions(f: &RatFunc<Q>) -> PartialFractions<Q> {
    let factors = factor::factor_q(f.den()).factors;
    partial_fractions_with(f, &factors).expect("complete factorization")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::q;

    fn rf(n: &[i64], d: &[i64]) -> RatFunc<Q> {
        RatFunc::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    #[test]
    fn geometric_at_infinity() {
        let s = series_expand(&rf(&[1], &[1, 1]), &Point::Infinity, 3, 1);
        assert_eq!(s, TruncSeries::new(1, 1, vec![q(1, 1), q(-1, 1), q(1, 1)], 4));
    }

    #[test]
    fn identity_at_zero() {
        let s = series_expand(&rf(&[0, 1], &[1]), &Point::Finite(q(0, 1)), 4, 1);
        assert_eq!(s.valuation(), 1);
        assert_eq!(s.coeff(1), Some(q(1, 1)));
    }

    #[test]
    fn gauss_discriminant_valuation() {
        // (3x²−3x+1)/(4x²(x−1)²)
        let f = rf(&[1, -3, 3], &[0, 0, 4, -8, 4]);
        let s = series_expand(&f, &Point::Infinity, 4, 1);
        assert_eq!(s.valuation(), 2);
        assert_eq!(s.coeff(2), Some(q(3, 4)));
        // As a quadratic differential, (dx)² = ξ⁻⁴(dξ)² shifts this to −2.
        assert_eq!(s.shift(-4).valuation(), -2);
    }

    #[test]
    fn ramified_expansion() {
        let s = series_expand(&rf(&[0, 1], &[1]), &Point::Infinity, 3, 2);
        assert_eq!(s.valuation(), -2);
        assert_eq!(s.e(), 2);
    }

    #[test]
    fn residues() {
        assert_eq!(residue_at(&rf(&[1], &[0, 1]), &Point::Finite(q(0, 1))), q(1, 1));
        let f = rf(&[3], &[-2, 1]).add(&rf(&[1], &[0, 0, 1]));
        assert_eq!(residue_at(&f, &Point::Finite(q(2, 1))), q(3, 1));
        assert_eq!(residue_at(&rf(&[1], &[0, 1]), &Point::Infinity), q(-1, 1));
    }

    #[test]
    fn partial_fraction_examples() {
        let pf = partial_fractions(&rf(&[1], &[-1, 0, 1]));
        assert_eq!(pf.poly_part, Poly::zero());
        let mut got: Vec<(Poly<Q>, Poly<Q>)> = pf
            .parts
            .iter()
            .map(|p| (p.factor.clone(), p.numerators[0].clone()))
            .collect();
        got.sort_by_key(|(f, _)| format!("{:?}", f));
        assert!(got.contains(&(Poly::from_ints(&[-1, 1]), Poly::constant(q(1, 2)))));
        assert!(got.contains(&(Poly::from_ints(&[1, 1]), Poly::constant(q(-1, 2)))));

        let pf = partial_fractions(&rf(&[1, 0, 1], &[0, 1]));
        assert_eq!(pf.poly_part, Poly::from_ints(&[0, 1]));
        assert_eq!(pf.parts[0].numerators, vec![Poly::constant(q(1, 1))]);

        let f = rf(&[3], &[-2, 1]).add(&rf(&[1], &[0, 0, 1]));
        let pf = partial_fractions(&f);
        assert_eq!(pf.sum(), f);
        let again: Vec<_> = pf
            .parts
            .iter()
            .map(|p| {
                partial_fractions(
                    &PartialFractions {
                        poly_part: Poly::zero(),
                        parts: vec![p.clone()],
                    }
                    .sum(),
                )
            })
            .collect();
        for (p, a) in pf.parts.iter().zip(again) {
            assert_eq!(a.parts, vec![p.clone()]);
        }
    }
}
