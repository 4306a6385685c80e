//! Invariants of the spectral curve `y² + a₁y + a₂ = 0` on the projective
//! line: discriminant divisor, genera, Newton data at poles, blow-up counts
//! and the singularity type of the quantum curve.

use std::fmt;

use crate::algebra::factor::{factor_q, squarefree};
use crate::algebra::{q, q_str, Field, Poly, RatFunc, Q};
use crate::{Error, Result};

/// The section `f(x)(dx)^weight` of `K^{⊗weight}` on the line.
#[derive(Clone, Debug, PartialEq)]
pub struct KSection {
    pub f: RatFunc<Q>,
    pub weight: i64,
}

/// A place of ℙ¹ over ℚ: a monic irreducible polynomial or ∞.
#[derive(Clone, Debug, PartialEq)]
pub enum Place {
    Finite(Poly<Q>),
    Infinity,
}

impl Place {
    pub fn at(x0: Q) -> Self {
        Place::Finite(Poly::linear(x0))
    }
    pub fn degree(&self) -> i64 {
        match self {
            Place::Finite(p) => p.deg_i(),
            Place::Infinity => 1,
        }
    }
    /// The coordinate of a rational place.
    pub fn rational_point(&self) -> Option<Q> {
        match self {
            Place::Finite(p) if p.degree() == Some(1) => Some(p.coeff(0).negate()),
            _ => None,
        }
    }
    fn sort_key(&self) -> (u8, i64, Option<Q>, String) {
        match self {
            Place::Infinity => (1, 0, None, String::new()),
            Place::Finite(p) => (0, p.deg_i(), self.rational_point(), poly_str(p, "x")),
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self, self.rational_point()) {
            (Place::Infinity, _) => write!(f, "inf"),
            (_, Some(a)) => write!(f, "{}", q_str(&a)),
            (Place::Finite(p), None) => write!(f, "root of {}", poly_str(p, "x")),
        }
    }
}

/// Human-readable polynomial with rational coefficients, highest degree first.
pub fn poly_str(p: &Poly<Q>, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = *c < Q::zero();
        let a = if neg { c.negate() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let coef = if a.is_one() && i > 0 { String::new() } else { q_str(&a) };
        let mon = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{}^{}", var, i),
        };
        if !coef.is_empty() && !mon.is_empty() {
            out.push_str(&format!("{}*{}", coef, mon));
        } else {
            out.push_str(&coef);
            out.push_str(&mon);
        }
    }
    out
}

/// Multiplicity of the irreducible `p` in the nonzero polynomial `f`.
fn poly_mult(f: &Poly<Q>, p: &Poly<Q>) -> i64 {
    let mut k = 0;
    let mut cur = f.clone();
    loop {
        let (qq, r) = cur.divrem(p).expect("nonzero");
        if !r.is_zero() {
            return k;
        }
        cur = qq;
        k += 1;
    }
}

/// Order of vanishing of a rational function at a place (`ξ = 1/x` at ∞).
pub fn order_at(f: &RatFunc<Q>, place: &Place) -> i64 {
    match place {
        Place::Finite(p) => poly_mult(f.num(), p) - poly_mult(f.den(), p),
        Place::Infinity => f.den().deg_i() - f.num().deg_i(),
    }
}

impl KSection {
    pub fn new(f: RatFunc<Q>, weight: i64) -> Self {
        KSection { f, weight }
    }
    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }
    /// Order of the section at a place, including the twist at ∞.
    pub fn order_at(&self, place: &Place) -> i64 {
        let o = order_at(&self.f, place);
        match place {
            Place::Infinity => o - 2 * self.weight,
            _ => o,
        }
    }
    /// Pole order, `None` when the section is zero or regular at the place.
    pub fn pole_order(&self, place: &Place) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let p = -self.order_at(place);
        (p > 0).then_some(p)
    }
}

/// A divisor on ℙ¹ with degree-weighted places.
#[derive(Clone, Debug, PartialEq)]
pub struct Divisor {
    pub entries: Vec<(Place, i64)>,
}

impl Divisor {
    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|(p, m)| p.degree() * m).sum()
    }
    pub fn zeros(&self) -> impl Iterator<Item = &(Place, i64)> {
        self.entries.iter().filter(|(_, m)| *m > 0)
    }
    pub fn poles(&self) -> impl Iterator<Item = &(Place, i64)> {
        self.entries.iter().filter(|(_, m)| *m < 0)
    }
    pub fn multiplicity(&self, place: &Place) -> i64 {
        self.entries.iter().find(|(p, _)| p == place).map_or(0, |(_, m)| *m)
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(p, m)| format!("{}[{}]", m, p)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn sort_places<T>(v: &mut [(Place, T)]) {
    v.sort_by_key(|a| a.0.sort_key());
}

/// Divisor of a nonzero section.
pub fn divisor_of(s: &KSection) -> Divisor {
    let mut entries = Vec::new();
    for (p, m) in factor_q(s.f.num()).factors {
        entries.push((Place::Finite(p), m as i64));
    }
    for (p, m) in factor_q(s.f.den()).factors {
        entries.push((Place::Finite(p), -(m as i64)));
    }
    let inf = s.order_at(&Place::Infinity);
    if inf != 0 {
        entries.push((Place::Infinity, inf));
    }
    sort_places(&mut entries);
    Divisor { entries }
}

/// Divisor of a nonzero section with finite places grouped by multiplicity
/// through squarefree decomposition instead of full factorization. Degree
/// and `δ` agree with [`divisor_of`].
pub fn coarse_divisor_of(s: &KSection) -> Divisor {
    let mut entries = Vec::new();
    for (p, m) in squarefree(s.f.num()) {
        entries.push((Place::Finite(p), m as i64));
    }
    for (p, m) in squarefree(s.f.den()) {
        entries.push((Place::Finite(p), -(m as i64)));
    }
    let inf = s.order_at(&Place::Infinity);
    if inf != 0 {
        entries.push((Place::Infinity, inf));
    }
    sort_places(&mut entries);
    Divisor { entries }
}

/// The pair `(a₁, a₂)` of a rank-2 spectral curve, optionally with the Higgs
/// matrix it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    pub a1: KSection,
    pub a2: KSection,
    pub higgs: Option<[[RatFunc<Q>; 2]; 2]>,
}

impl SpectralData {
    /// Validates that the characteristic polynomial is irreducible.
    pub fn new(a1: RatFunc<Q>, a2: RatFunc<Q>) -> Result<Self> {
        let sd = SpectralData {
            a1: KSection::new(a1, 1),
            a2: KSection::new(a2, 2),
            higgs: None,
        };
        let d = sd.discriminant_fn();
        if d.is_zero() || d.sqrt().is_some() {
            return Err(Error::Precondition("spectral curve is reducible".into()));
        }
        Ok(sd)
    }
    /// `a₁ = −tr φ`, `a₂ = det φ` for `φ = [[e11, e12], [e21, e22]] dx`.
    pub fn from_higgs(m: [[RatFunc<Q>; 2]; 2]) -> Result<Self> {
        let a1 = m[0][0].add(&m[1][1]).neg();
        let a2 = m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]));
        let mut sd = SpectralData::new(a1, a2)?;
        sd.higgs = Some(m);
        Ok(sd)
    }
    fn discriminant_fn(&self) -> RatFunc<Q> {
        self.a1.f.mul(&self.a1.f).scale(&q(1, 4)).sub(&self.a2.f)
    }
    /// Places where `a₁` or `a₂` has a pole.
    pub fn pole_places(&self) -> Vec<Place> {
        let mut out: Vec<(Place, ())> = Vec::new();
        for s in [&self.a1, &self.a2] {
            if s.is_zero() {
                continue;
            }
            for (p, m) in divisor_of(s).entries {
                if m < 0 && !out.iter().any(|(o, _)| *o == p) {
                    out.push((p, ()));
                }
            }
        }
        sort_places(&mut out);
        out.into_iter().map(|(p, _)| p).collect()
    }
}

/// `a₁²/4 − a₂` as a section of `K²`.
pub fn discriminant(sd: &SpectralData) -> Result<KSection> {
    let d = sd.discriminant_fn();
    if d.is_zero() {
        return Err(Error::Precondition("identically zero discriminant".into()));
    }
    Ok(KSection::new(d, 2))
}

/// Degree-weighted count of odd-multiplicity places.
pub fn delta_invariant(d: &Divisor) -> i64 {
    d.entries
        .iter()
        .filter(|(_, m)| m % 2 != 0)
        .map(|(p, _)| p.degree())
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub enum QuantumClass {
    Regular,
    /// Irregular singular point of the given class `r − 1`.
    Irregular(Q),
}

impl fmt::Display for QuantumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantumClass::Regular => write!(f, "regular"),
            QuantumClass::Irregular(c) => write!(f, "irregular {}", q_str(c)),
        }
    }
}

/// Newton data of the spectral curve at a pole place.
#[derive(Clone, Debug, PartialEq)]
pub struct PoleProfile {
    pub place: Place,
    pub k: Option<i64>,
    pub l: Option<i64>,
    /// Pole order of the discriminant (0 if it is regular there).
    pub n: i64,
    pub r: Q,
    pub blowups_min: i64,
    pub blowups_full: i64,
    pub quantum_class: QuantumClass,
}

pub fn pole_profile(sd: &SpectralData, p: &Place) -> Result<PoleProfile> {
    let k = sd.a1.pole_order(p);
    let l = sd.a2.pole_order(p);
    if k.is_none() && l.is_none() {
        return Err(Error::Precondition(format!("{} is not a pole of a1 or a2", p)));
    }
    let n = discriminant(sd)?.pole_order(p).unwrap_or(0);
    let r = match (k, l) {
        (Some(k), Some(l)) if 2 * k < l => q(l, 2),
        (Some(k), _) => q(k, 1),
        (None, Some(l)) => q(l, 2),
        (None, None) => unreachable!(),
    };
    let blowups_min = match (k, l) {
        (None, _) => n / 2,
        (Some(k), Some(l)) if l >= 2 * k => n / 2,
        (Some(k), Some(l)) if 2 * l > 2 * k && 2 * k > l => l - k,
        _ => 0,
    };
    let blowups_full = {
        let (num, den) = (r.numer().clone(), r.denom().clone());
        num_integer::Integer::div_ceil(&num, &den).try_into().expect("small")
    };
    let quantum_class = if r <= q(1, 1) {
        QuantumClass::Regular
    } else {
        QuantumClass::Irregular(r.clone() - q(1, 1))
    };
    Ok(PoleProfile {
        place: p.clone(),
        k,
        l,
        n,
        r,
        blowups_min,
        blowups_full,
        quantum_class,
    })
}

/// A plane curve `c₀(u) + c₁(u)w + c₂(u)w² = 0` in the chart at ∞.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartEquation {
    pub c: [Poly<Q>; 3],
}

impl ChartEquation {
    pub fn from_ints(c0: &[i64], c1: &[i64], c2: &[i64]) -> Self {
        ChartEquation {
            c: [Poly::from_ints(c0), Poly::from_ints(c1), Poly::from_ints(c2)],
        }
    }
    /// Whether the origin is a singular point of the curve.
    pub fn singular_at_origin(&self) -> bool {
        let on = self.c[0].coeff(0).is_zero();
        on && self.c[0].coeff(1).is_zero() && self.c[1].coeff(0).is_zero()
    }
}

impl fmt::Display for ChartEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let w = match i {
                0 => String::new(),
                1 => "*w".into(),
                _ => "*w^2".into(),
            };
            parts.push(format!("({}){}", poly_str(c, "u"), w));
        }
        write!(f, "{} = 0", parts.join(" + "))
    }
}

/// Clears denominators of `Σ cᵢ·Yⁱ` and scales to coprime integer
/// coefficients with the top coefficient's leading term positive.
fn clear_equation(c: [RatFunc<Q>; 3]) -> [Poly<Q>; 3] {
    use num_integer::Integer;
    let mut l = Poly::one();
    for r in &c {
        let g = l.gcd(r.den());
        l = l.mul(r.den()).div_exact(&g);
    }
    let mut p: Vec<Poly<Q>> = c.iter().map(|r| r.num().mul(&l.div_exact(r.den()))).collect();
    let mut g = Poly::zero();
    for x in &p {
        g = g.gcd(x);
    }
    for x in p.iter_mut() {
        *x = x.div_exact(&g);
    }
    let coeffs: Vec<Q> = p.iter().flat_map(|x| x.coeffs().to_vec()).collect();
    let mut den = num_bigint::BigInt::from(1);
    for a in &coeffs {
        den = den.lcm(a.denom());
    }
    let mut cont = num_bigint::BigInt::from(0);
    for a in &coeffs {
        cont = cont.gcd(&(a * Q::from_integer(den.clone())).to_integer());
    }
    let mut scale = Q::new(den, cont);
    if p[2].lc() < Q::zero() {
        scale = scale.negate();
    }
    [p[0].scale(&scale), p[1].scale(&scale), p[2].scale(&scale)]
}

impl SpectralData {
    /// The curve in the chart `x = 1/u`, `y = −u²/w` around `C_∞` over ∞.
    pub fn chart_at_infinity(&self) -> ChartEquation {
        let inv_u = RatFunc::new(Poly::one(), Poly::x()).expect("nonzero");
        let a1 = self.a1.f.compose(&inv_u).expect("nonzero");
        let a2 = self.a2.f.compose(&inv_u).expect("nonzero");
        let u2 = RatFunc::from_poly(Poly::monomial(Q::one(), 2));
        let c0 = RatFunc::from_poly(Poly::monomial(Q::one(), 4));
        let c1 = u2.mul(&a1).neg();
        ChartEquation {
            c: clear_equation([c0, c1, a2]),
        }
    }
    /// The affine equation `c₂(x)y² + c₁(x)y + c₀(x) = 0` with polynomial
    /// coefficients, listed as `[c₀, c₁, c₂]`.
    pub fn affine_equation(&self) -> [Poly<Q>; 3] {
        clear_equation([self.a2.f.clone(), self.a1.f.clone(), RatFunc::one()])
    }
}

/// The computed invariants of a spectral curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveReport {
    pub base_genus: i64,
    pub discriminant: Divisor,
    pub delta: i64,
    pub a: i64,
    pub p_a: i64,
    pub p_g: i64,
    /// `(2, a)` for the class `2C₀ + aF`.
    pub ns_class: (i64, i64),
    pub profiles: Vec<PoleProfile>,
    pub affine_equation: [Poly<Q>; 3],
    pub chart: ChartEquation,
    pub chart_singular: bool,
}

impl CurveReport {
    pub fn ns_class_str(&self) -> String {
        format!("{}C0+{}F", self.ns_class.0, self.ns_class.1)
    }
    pub fn profile(&self, place: &Place) -> Option<&PoleProfile> {
        self.profiles.iter().find(|p| p.place == *place)
    }
}

pub fn genus_report(sd: &SpectralData, g: i64) -> Result<CurveReport> {
    if g < 0 {
        return Err(Error::Precondition("negative base genus".into()));
    }
    let disc = divisor_of(&discriminant(sd)?);
    let delta = delta_invariant(&disc);
    let profiles = sd
        .pole_places()
        .iter()
        .map(|p| pole_profile(sd, p))
        .collect::<Result<Vec<_>>>()?;
    let a = profiles
        .iter()
        .map(|p| p.place.degree() * p.k.unwrap_or(0).max(p.l.unwrap_or(0)))
        .sum();
    let chart = sd.chart_at_infinity();
    Ok(CurveReport {
        base_genus: g,
        delta,
        a,
        p_a: 4 * g - 3 + a,
        p_g: 2 * g - 1 + delta / 2,
        ns_class: (2, a),
        chart_singular: chart.singular_at_origin(),
        chart,
        affine_equation: sd.affine_equation(),
        discriminant: disc,
        profiles,
    })
}

/// Coefficients of `(ℏ d/dx)² + a₁(ℏ d/dx) + a₂`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumOperator {
    pub a1: RatFunc<Q>,
    pub a2: RatFunc<Q>,
}

impl fmt::Display for QuantumOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(h d/dx)^2")?;
        if !self.a1.is_zero() {
            write!(f, " + ({})(h d/dx)", rat_str(&self.a1))?;
        }
        if !self.a2.is_zero() {
            write!(f, " + ({})", rat_str(&self.a2))?;
        }
        Ok(())
    }
}

pub fn rat_str(r: &RatFunc<Q>) -> String {
    if r.is_poly() {
        poly_str(r.num(), "x")
    } else {
        format!("({})/({})", poly_str(r.num(), "x"), poly_str(r.den(), "x"))
    }
}

pub fn quantum_operator(sd: &SpectralData) -> QuantumOperator {
    QuantumOperator {
        a1: sd.a1.f.clone(),
        a2: sd.a2.f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &[i64], d: &[i64]) -> RatFunc<Q> {
        RatFunc::new(Poly::from_ints(n), Poly::from_ints(d)).unwrap()
    }

    #[test]
    fn canonical_divisor_of_line() {
        let dx = KSection::new(RatFunc::one(), 1);
        let d = divisor_of(&dx);
        assert_eq!(d.entries, vec![(Place::Infinity, -2)]);
        assert_eq!(d.degree(), -2);
    }

    #[test]
    fn airy_discriminant() {
        let sd = SpectralData::new(RatFunc::zero(), rf(&[0, -1], &[1])).unwrap();
        let d = divisor_of(&discriminant(&sd).unwrap());
        assert_eq!(d.entries, vec![(Place::at(q(0, 1)), 1), (Place::Infinity, -5)]);
        assert_eq!(d.degree(), -4);
    }

    #[test]
    fn reducible_rejected() {
        // y² − 1 = 0
        assert!(SpectralData::new(RatFunc::zero(), rf(&[-1], &[1])).is_err());
    }

    #[test]
    fn poly_printing() {
        assert_eq!(poly_str(&Poly::from_ints(&[-1, 0, 1, 0, 1]), "x"), "x^4 + x^2 - 1");
        assert_eq!(poly_str(&Poly::from_ints(&[0, -2]), "u"), "-2*u");
    }
}
