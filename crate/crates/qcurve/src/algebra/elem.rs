use std::fmt;

use super::field::{q_str, Field, Q};
use super::poly::Poly;
use super::quad::Quad;
use super::ratfunc::RatFunc;

/// A run-time tagged element of one of the supported coefficient fields:
/// ℚ, ℚ(√d), ℚ(ℏ) and ℚ(ℏ)(√p(ℏ)).
///
/// Binary operations promote both operands to the smallest common tower
/// level and results are demoted back whenever they lie in a smaller field.
#[derive(Clone, Debug)]
pub enum FieldElement {
    Q(Q),
    Sqrt(Quad<Q>),
    Hbar(RatFunc<Q>),
    HbarSqrt(Quad<RatFunc<Q>>),
}

impl FieldElement {
    /// The generator ℏ of ℚ(ℏ).
    pub fn hbar() -> Self {
        FieldElement::Hbar(RatFunc::x())
    }

    fn lift_hbar(q: &Q) -> RatFunc<Q> {
        RatFunc::constant(q.clone())
    }

    fn to_hbar_sqrt(&self) -> Quad<RatFunc<Q>> {
        match self {
            FieldElement::Q(a) => Quad::new(Self::lift_hbar(a), RatFunc::zero(), None),
            FieldElement::Sqrt(x) => x.map(Self::lift_hbar),
            FieldElement::Hbar(r) => Quad::new(r.clone(), RatFunc::zero(), None),
            FieldElement::HbarSqrt(x) => x.clone(),
        }
    }

    fn to_hbar(&self) -> Option<RatFunc<Q>> {
        match self {
            FieldElement::Q(a) => Some(Self::lift_hbar(a)),
            FieldElement::Hbar(r) => Some(r.clone()),
            _ => None,
        }
    }

    fn to_sqrt(&self) -> Option<Quad<Q>> {
        match self {
            FieldElement::Q(a) => Some(Quad::new(a.clone(), <Q as Field>::zero(), None)),
            FieldElement::Sqrt(x) => Some(x.clone()),
            _ => None,
        }
    }

    /// Demotes to the smallest tower level containing the value.
    pub fn normalize(self) -> Self {
        match self {
            FieldElement::HbarSqrt(x) => match x.descend() {
                Some(r) => FieldElement::Hbar(r).normalize(),
                None => {
                    let constant = |r: &RatFunc<Q>| r.is_poly() && r.num().deg_i() <= 0;
                    if constant(&x.a) && constant(&x.b) && x.radicand().is_some_and(constant) {
                        FieldElement::Sqrt(x.map(|r| r.num().coeff(0))).normalize()
                    } else {
                        FieldElement::HbarSqrt(x)
                    }
                }
            },
            FieldElement::Hbar(r) => {
                if r.is_poly() && r.num().deg_i() <= 0 {
                    FieldElement::Q(r.num().coeff(0))
                } else {
                    FieldElement::Hbar(r)
                }
            }
            FieldElement::Sqrt(x) => match x.descend() {
                Some(a) => FieldElement::Q(a),
                None => FieldElement::Sqrt(x),
            },
            e => e,
        }
    }

    fn binary(
        &self,
        o: &Self,
        fq: impl Fn(&Q, &Q) -> Q,
        fs: impl Fn(&Quad<Q>, &Quad<Q>) -> Quad<Q>,
        fh: impl Fn(&RatFunc<Q>, &RatFunc<Q>) -> RatFunc<Q>,
        fhs: impl Fn(&Quad<RatFunc<Q>>, &Quad<RatFunc<Q>>) -> Quad<RatFunc<Q>>,
    ) -> Self {
        use FieldElement as E;
        let r = match (self, o) {
            (E::Q(a), E::Q(b)) => E::Q(fq(a, b)),
            _ => {
                if let (Some(a), Some(b)) = (self.to_sqrt(), o.to_sqrt()) {
                    E::Sqrt(fs(&a, &b))
                } else if let (Some(a), Some(b)) = (self.to_hbar(), o.to_hbar()) {
                    E::Hbar(fh(&a, &b))
                } else {
                    E::HbarSqrt(fhs(&self.to_hbar_sqrt(), &o.to_hbar_sqrt()))
                }
            }
        };
        r.normalize()
    }

    /// Evaluates ℏ at a rational value; `None` at a pole or when the value
    /// involves an irrational square root.
    pub fn eval_hbar(&self, h: &Q) -> Option<Q> {
        match self {
            FieldElement::Q(a) => Some(a.clone()),
            FieldElement::Hbar(r) => r.eval(h).ok(),
            FieldElement::Sqrt(x) => x.descend(),
            FieldElement::HbarSqrt(x) => x.descend().and_then(|r| r.eval(h).ok()),
        }
    }

    /// Rational value, if the element lies in ℚ.
    pub fn as_q(&self) -> Option<&Q> {
        match self {
            FieldElement::Q(a) => Some(a),
            _ => None,
        }
    }

    /// Value in ℚ(ℏ), if the element lies there.
    pub fn as_hbar(&self) -> Option<RatFunc<Q>> {
        self.to_hbar()
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, o: &Self) -> bool {
        self.minus(o).is_zero()
    }
}

impl From<Q> for FieldElement {
    fn from(q: Q) -> Self {
        FieldElement::Q(q)
    }
}

impl From<RatFunc<Q>> for FieldElement {
    fn from(r: RatFunc<Q>) -> Self {
        FieldElement::Hbar(r).normalize()
    }
}

impl Field for FieldElement {
    fn zero() -> Self {
        FieldElement::Q(<Q as Field>::zero())
    }
    fn one() -> Self {
        FieldElement::Q(<Q as Field>::one())
    }
    fn is_zero(&self) -> bool {
        match self {
            FieldElement::Q(a) => Field::is_zero(a),
            FieldElement::Sqrt(x) => x.is_zero(),
            FieldElement::Hbar(r) => r.is_zero(),
            FieldElement::HbarSqrt(x) => x.is_zero(),
        }
    }
    fn plus(&self, o: &Self) -> Self {
        self.binary(o, |a, b| a + b, |a, b| a.plus(b), |a, b| a.plus(b), |a, b| a.plus(b))
    }
    fn minus(&self, o: &Self) -> Self {
        self.binary(o, |a, b| a - b, |a, b| a.minus(b), |a, b| a.minus(b), |a, b| a.minus(b))
    }
    fn times(&self, o: &Self) -> Self {
        self.binary(o, |a, b| a * b, |a, b| a.times(b), |a, b| a.times(b), |a, b| a.times(b))
    }
    fn negate(&self) -> Self {
        match self {
            FieldElement::Q(a) => FieldElement::Q(-a),
            FieldElement::Sqrt(x) => FieldElement::Sqrt(x.negate()),
            FieldElement::Hbar(r) => FieldElement::Hbar(r.negate()),
            FieldElement::HbarSqrt(x) => FieldElement::HbarSqrt(x.negate()),
        }
    }
    fn inv(&self) -> Option<Self> {
        let r = match self {
            FieldElement::Q(a) => FieldElement::Q(Field::inv(a)?),
            FieldElement::Sqrt(x) => FieldElement::Sqrt(x.inv()?),
            FieldElement::Hbar(r) => FieldElement::Hbar(r.inv()?),
            FieldElement::HbarSqrt(x) => FieldElement::HbarSqrt(x.inv()?),
        };
        Some(r.normalize())
    }
    fn from_q(q: &Q) -> Self {
        FieldElement::Q(q.clone())
    }
    fn sqrt(&self) -> Option<Self> {
        match self {
            FieldElement::Q(a) => Field::sqrt(a).map(FieldElement::Q),
            FieldElement::Sqrt(x) => x.sqrt().map(FieldElement::Sqrt),
            FieldElement::Hbar(r) => r.sqrt().map(|s| FieldElement::Hbar(s).normalize()),
            FieldElement::HbarSqrt(x) => x.sqrt().map(|s| FieldElement::HbarSqrt(s).normalize()),
        }
    }
}

/// Formats an element of ℚ(ℏ) with `h` as the variable name.
pub fn hbar_str(r: &RatFunc<Q>) -> String {
    let poly = |p: &Poly<Q>| {
        let mut parts = Vec::new();
        for (i, c) in p.coeffs().iter().enumerate() {
            if Field::is_zero(c) {
                continue;
            }
            parts.push(match i {
                0 => q_str(c),
                1 => format!("{}*h", q_str(c)),
                _ => format!("{}*h^{}", q_str(c), i),
            });
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    };
    if r.is_poly() {
        poly(r.num())
    } else {
        format!("({})/({})", poly(r.num()), poly(r.den()))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Q(a) => write!(f, "{}", q_str(a)),
            FieldElement::Sqrt(x) => write!(
                f,
                "{} + {}*sqrt({})",
                q_str(&x.a),
                q_str(&x.b),
                q_str(x.radicand().expect("irrational part"))
            ),
            FieldElement::Hbar(r) => write!(f, "{}", hbar_str(r)),
            FieldElement::HbarSqrt(x) => write!(
                f,
                "{} + ({})*sqrt({})",
                hbar_str(&x.a),
                hbar_str(&x.b),
                hbar_str(x.radicand().expect("irrational part"))
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::q;
    use crate::algebra::quad::QuadTower;

    #[test]
    fn promotion_and_demotion() {
        let t = QuadTower::new(q(3, 1)).unwrap();
        let s = FieldElement::Sqrt(t.gen());
        let three = s.times(&s);
        assert!(matches!(three, FieldElement::Q(_)));
        assert_eq!(three, FieldElement::Q(q(3, 1)));
        let h = FieldElement::hbar();
        let mixed = s.times(&h);
        assert!(matches!(mixed, FieldElement::HbarSqrt(_)));
        let back = mixed.times(&h.inv().unwrap());
        assert!(matches!(back, FieldElement::Sqrt(_)));
        assert_eq!(back, s);
    }

    #[test]
    fn hbar_sqrt_descends() {
        // p(ℏ) = (1−ℏ)(3−ℏ)
        let p = RatFunc::from_poly(Poly::from_ints(&[3, -4, 1]));
        let t = QuadTower::new(p.clone()).unwrap();
        let s = FieldElement::HbarSqrt(t.gen());
        assert_eq!(s.times(&s), FieldElement::Hbar(p));
    }
}
