//! The WKB hierarchy of the quantum curve
//! `((ℏ d/dx)² + a₁ (ℏ d/dx) + a₂) Ψ = 0` solved as exact truncated series.
//!
//! Everything is expanded in a local uniformizer `τ` with `τ^e = x − a` or
//! `τ^e = 1/x`; `x`-derivatives go through the chain rule with `dx/dτ`.

use std::fmt;

use crate::algebra::{series_expand, Field, FieldElement, LogSeries, Point, QuadTower, RatFunc, TruncSeries, Q};
use crate::{Error, Result};

type Fe = FieldElement;
type Series = TruncSeries<Fe>;

/// Sign in front of the square root of the discriminant. The root itself is
/// normalized by its leading coefficient: the positive rational root, or the
/// generator of `ℚ(√c)` when `c` is not a square.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl std::str::FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Branch::Plus),
            "minus" | "-" => Ok(Branch::Minus),
            _ => Err(Error::Precondition(format!("unknown branch {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WkbConfig {
    pub a1: RatFunc<Q>,
    pub a2: RatFunc<Q>,
    pub place: Point<Q>,
    pub e: u8,
    pub branch: Branch,
    /// Every `S_m` is returned exactly through `τ^order`.
    pub order: i64,
    /// Highest index `M` of `S_0 … S_M`.
    pub depth: usize,
}

impl WkbConfig {
    pub fn new(a1: RatFunc<Q>, a2: RatFunc<Q>, place: Point<Q>, branch: Branch, order: i64, depth: usize) -> Self {
        let mut cfg = WkbConfig {
            a1,
            a2,
            place,
            e: 1,
            branch,
            order,
            depth,
        };
        cfg.e = cfg.natural_ramification();
        cfg
    }

    /// `2` when the discriminant has odd order at the place, else `1`.
    pub fn natural_ramification(&self) -> u8 {
        let d = self.a1.mul(&self.a1).sub(&self.a2.scale(&Q::from_int(4)));
        let s = series_expand(&d, &self.place, 64, 1);
        if !s.is_zero() && s.valuation() % 2 != 0 {
            2
        } else {
            1
        }
    }

    /// `x` as a series in `τ`.
    pub fn x_series(&self, prec: i64) -> Series {
        let e = self.e as i64;
        match &self.place {
            Point::Finite(a) => {
                Series::constant(self.e, Fe::Q(a.clone()), prec).add(&Series::monomial(self.e, Fe::one(), e, prec))
            }
            Point::Infinity => Series::monomial(self.e, Fe::one(), -e, prec),
        }
    }

    /// `dx/dτ`, exact to a large precision.
    pub fn dx_dtau(&self, prec: i64) -> Series {
        let e = self.e as i64;
        match &self.place {
            Point::Finite(_) => Series::monomial(self.e, Fe::from_int(e), e - 1, prec),
            Point::Infinity => Series::monomial(self.e, Fe::from_int(-e), -e - 1, prec),
        }
    }

    fn expand(&self, f: &RatFunc<Q>, order: i64) -> Series {
        series_expand(f, &self.place, order, self.e).map(|c| Fe::Q(c.clone()))
    }

    /// Name of the uniformizer `τ^e` used for exponent labels.
    pub fn uniformizer(&self) -> String {
        match &self.place {
            Point::Finite(a) if Field::is_zero(a) => "x".to_string(),
            Point::Finite(a) => format!("(x - {})", crate::algebra::q_str(a)),
            Point::Infinity => "(1/x)".to_string(),
        }
    }
}

/// `S_0 … S_M` with their `x`-derivatives.
#[derive(Clone, Debug)]
pub struct WkbState {
    pub e: u8,
    pub s: Vec<LogSeries<Fe>>,
    /// `dS_m/dx` as series in `τ`.
    pub ds: Vec<Series>,
    pub dx_dtau: Series,
    /// `a₁` and `a₂` at the working precision, kept for residual checks.
    pub a1: Series,
    pub a2: Series,
    /// `2S₀′ + a₁`, the divisor of every step beyond the first.
    denom: Series,
}

fn d_dx(f: &Series, dx_dtau: &Series) -> Result<Series> {
    f.deriv().div(dx_dtau)
}

/// Root of the leading coefficient of the discriminant series.
fn principal_root(c: &Fe) -> Result<Fe> {
    if let Some(r) = c.as_q() {
        if let Some(s) = Field::sqrt(r) {
            return Ok(Fe::Q(if s < <Q as Field>::zero() { -s } else { s }));
        }
        let tower = QuadTower::new(r.clone())?;
        return Ok(Fe::Sqrt(tower.gen()));
    }
    c.sqrt()
        .ok_or_else(|| Error::Precondition(format!("no square root of {c} available")))
}

/// `S₀′ = (−a₁ ± √(a₁² − 4a₂))/2` and its antiderivative.
pub fn semiclassical_root(cfg: &WkbConfig, prec: i64) -> Result<WkbState> {
    let a1 = cfg.expand(&cfg.a1, prec);
    let a2 = cfg.expand(&cfg.a2, prec);
    let disc = a1.mul(&a1).sub(&a2.scale(&Fe::from_int(4)));
    if disc.is_zero() {
        return Err(Error::Precondition("discriminant vanishes identically".into()));
    }
    if disc.valuation() % 2 != 0 {
        return Err(Error::OddValuation(disc.valuation()));
    }
    let mut root = principal_root(disc.leading().expect("nonzero"))?;
    if cfg.branch == Branch::Minus {
        root = root.negate();
    }
    let sq = disc.sqrt(&root)?;
    let half = Fe::Q(crate::algebra::q(1, 2));
    let y0 = sq.sub(&a1).scale(&half);
    let dx = cfg.dx_dtau(prec + 64);
    let s0 = LogSeries::integrate(&y0.mul(&dx));
    Ok(WkbState {
        e: cfg.e,
        s: vec![s0],
        ds: vec![y0],
        dx_dtau: dx,
        a1,
        a2,
        denom: sq,
    })
}

/// `S₁′ = −S₀″/(2S₀′ + a₁)`.
pub fn consistency_s1(state: &mut WkbState) -> Result<()> {
    if state.denom.is_zero() {
        return Err(Error::Precondition("2S0' + a1 vanishes".into()));
    }
    let y1 = d_dx(&state.ds[0], &state.dx_dtau)?.div(&state.denom)?.neg();
    state.s.truncate(1);
    state.ds.truncate(1);
    state.s.push(LogSeries::integrate(&y1.mul(&state.dx_dtau)));
    state.ds.push(y1);
    Ok(())
}

/// Extends the state to `S_0 … S_depth` by the order-`(m+1)` recursion.
pub fn wkb_extend(state: &mut WkbState, depth: usize) -> Result<()> {
    if state.ds.len() < 2 {
        return Err(Error::Precondition("S0 and S1 must be present".into()));
    }
    while state.ds.len() <= depth {
        let m = state.ds.len() - 1;
        let mut acc = d_dx(&state.ds[m], &state.dx_dtau)?;
        for a in 1..=m {
            let b = m + 1 - a;
            if b >= 1 && b <= m {
                acc = acc.add(&state.ds[a].mul(&state.ds[b]));
            }
        }
        let y = acc.div(&state.denom)?.neg();
        state.s.push(LogSeries::integrate(&y.mul(&state.dx_dtau)));
        state.ds.push(y);
    }
    Ok(())
}

impl WkbState {
    pub fn depth(&self) -> usize {
        self.s.len() - 1
    }
    /// Largest `k` such that every `S_m` is exact through `τ^k`.
    pub fn guaranteed_order(&self) -> i64 {
        self.s.iter().map(|s| s.body.prec() - 1).min().unwrap_or(i64::MAX)
    }
    /// Truncates every `S_m` to `τ^order`.
    pub fn truncate(&mut self, order: i64) {
        for s in &mut self.s {
            s.body = s.body.truncate(order + 1);
        }
    }

    /// The `ℏ^k` coefficient of the hierarchy for `k = 0 … depth`:
    /// `S_{k−1}″ + Σ_{a+b=k} S_a′S_b′ + a₁S_k′ + δ_{k0} a₂`.
    pub fn residuals(&self) -> Result<Vec<Series>> {
        let mut out = Vec::new();
        for k in 0..=self.depth() {
            let mut r = self.a1.mul(&self.ds[k]);
            if k == 0 {
                r = r.add(&self.a2);
            } else {
                r = r.add(&d_dx(&self.ds[k - 1], &self.dx_dtau)?);
            }
            for a in 0..=k {
                r = r.add(&self.ds[a].mul(&self.ds[k - a]));
            }
            out.push(r);
        }
        Ok(out)
    }
}

/// Solves `S_0 … S_depth` exactly through `τ^order`, raising the working
/// precision until the truncation is guaranteed.
pub fn solve(cfg: &WkbConfig) -> Result<WkbState> {
    let mut margin = 8 + 4 * cfg.depth as i64;
    for _ in 0..6 {
        let mut st = semiclassical_root(cfg, cfg.order + margin)?;
        if cfg.depth >= 1 {
            consistency_s1(&mut st)?;
            wkb_extend(&mut st, cfg.depth)?;
        }
        if st.guaranteed_order() >= cfg.order {
            st.truncate(cfg.order);
            return Ok(st);
        }
        margin *= 2;
    }
    Err(Error::TruncationExhausted)
}

/// `u^{λ} · exp(principal) · body` with `u = τ^e`, representing
/// `exp(Σ_m ℏ^{m−1} S_m)`.
#[derive(Clone, Debug)]
pub struct WaveExpansion {
    pub e: u8,
    /// Exponent of the uniformizer `u = τ^e`, an element of `ℚ + ℚℏ^{-1}`.
    pub log_exponent: Fe,
    /// Negative-valuation part of the exponent, left unexpanded.
    pub principal: Series,
    /// `exp` of the remaining part, coefficients in `ℚ(ℏ)`.
    pub body: Series,
    pub order_h: usize,
}

/// Exponentiates `Σ_{m ≤ order_h + 1} ℏ^{m−1} S_m` through `τ^order_x`.
pub fn assemble_wavefunction(state: &WkbState, order_x: i64, order_h: usize) -> Result<WaveExpansion> {
    if state.depth() < order_h + 1 && !(order_h == 0 && state.depth() == 0) {
        return Err(Error::Precondition(format!(
            "state depth {} is below {}",
            state.depth(),
            order_h + 1
        )));
    }
    let e = state.e;
    let h = Fe::hbar();
    let hinv = h.inv().expect("ℏ ≠ 0");
    let top = state.depth().min(order_h + 1);
    let mut lambda = Fe::zero();
    let mut total = Series::zero(e, order_x + 1);
    for m in 0..=top {
        let w = if m == 0 { hinv.clone() } else { h.pow(m as u32 - 1) };
        lambda = lambda.plus(&state.s[m].lambda.times(&w));
        total = total.add(&state.s[m].body.scale(&w));
    }
    if total.prec() <= order_x {
        return Err(Error::Precondition("inconsistent truncations".into()));
    }
    let lo = total.valuation().min(0);
    let principal_c: Vec<Fe> = (lo..0).map(|k| total.coeff(k).unwrap()).collect();
    let principal = Series::new(e, lo, principal_c, total.prec());
    let rest_c: Vec<Fe> = (1..total.prec()).map(|k| total.coeff(k).unwrap()).collect();
    let rest = Series::new(e, 1, rest_c, total.prec());
    if !total.coeff(0).unwrap().is_zero() {
        return Err(Error::Precondition("exponent has a nonzero constant term".into()));
    }
    let body = if rest.is_zero() {
        Series::constant(e, Fe::one(), rest.prec())
    } else {
        rest.exp()?
    };
    Ok(WaveExpansion {
        e,
        log_exponent: lambda,
        principal,
        body: body.truncate(order_x + 1),
        order_h,
    })
}

/// Outcome of substituting `F = log Ψ` into
/// `ℏ²F″ + ℏ²F′² + a₁ℏF′ + a₂ = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    /// Smallest `ℏ`-order among the nonzero residual coefficients, `None`
    /// when the residual vanishes through `order`.
    pub hbar_valuation: Option<i64>,
    /// `ℏ`-order the truncated expansion must reach.
    pub expected: i64,
    /// Exponent of `τ` through which the residual is known.
    pub order: i64,
    pub passed: bool,
}

fn hbar_valuation(c: &Fe) -> Option<i64> {
    if c.is_zero() {
        return None;
    }
    let r = c.as_hbar()?;
    Some(r.num().x_valuation() as i64 - r.den().x_valuation() as i64)
}

/// Checks that the operator annihilates `w` through `ℏ^{order_h + 1}`.
pub fn verify_operator(cfg: &WkbConfig, w: &WaveExpansion) -> Result<Residual> {
    let prec = w.body.prec();
    let dx = cfg.dx_dtau(prec + 64);
    let e = w.e as i64;
    // dF/dτ
    let log_part = Series::monomial(w.e, w.log_exponent.times(&Fe::from_int(e)), -1, prec + 64);
    let fp_tau = w.principal.deriv().add(&w.body.log()?.deriv()).add(&log_part);
    let fp = fp_tau.div(&dx)?;
    let fpp = d_dx(&fp, &dx)?;
    let h = Fe::hbar();
    let h2 = h.times(&h);
    let a1 = cfg.expand(&cfg.a1, prec + 8);
    let a2 = cfg.expand(&cfg.a2, prec + 8);
    let r = fpp.add(&fp.mul(&fp)).scale(&h2).add(&a1.mul(&fp).scale(&h)).add(&a2);
    let expected = w.order_h as i64 + 2;
    let mut val: Option<i64> = None;
    for (_, c) in r.terms() {
        match hbar_valuation(c) {
            Some(v) => val = Some(val.map_or(v, |x: i64| x.min(v))),
            None if !c.is_zero() => return Err(Error::Precondition("residual left ℚ(ℏ)".into())),
            None => {}
        }
    }
    let passed = val.is_none_or(|v| v >= expected);
    Ok(Residual {
        hbar_valuation: val,
        expected,
        order: r.prec() - 1,
        passed,
    })
}

impl fmt::Display for WaveExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "u^({}) * exp({}) * ({})",
            self.log_exponent, self.principal, self.body
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;
    use crate::curves::rf;

    fn fq(n: i64, d: i64) -> Fe {
        Fe::Q(q(n, d))
    }

    #[test]
    fn airy_first_terms() {
        let cfg = WkbConfig::new(rf(&[0], &[1]), rf(&[0, -1], &[1]), Point::Infinity, Branch::Minus, 6, 2);
        assert_eq!(cfg.e, 2);
        let st = solve(&cfg).unwrap();
        assert_eq!(st.s[0].body.coeff(-3).unwrap(), fq(-2, 3));
        assert_eq!(st.s[1].lambda, fq(1, 4));
        assert!(st.s[1].body.is_zero());
        assert_eq!(st.s[2].body.coeff(3).unwrap(), fq(-5, 48));
        assert_eq!(st.s[2].body.terms().count(), 1);
    }

    #[test]
    fn vieta_for_branches() {
        let (a1, a2) = (rf(&[0, 1], &[1]), rf(&[1], &[1]));
        let p = semiclassical_root(
            &WkbConfig::new(a1.clone(), a2.clone(), Point::Infinity, Branch::Plus, 8, 0),
            8,
        )
        .unwrap();
        let m = semiclassical_root(&WkbConfig::new(a1, a2, Point::Infinity, Branch::Minus, 8, 0), 8).unwrap();
        let sum = p.ds[0].add(&m.ds[0]).add(&p.a1);
        assert!(sum.is_zero());
        let prod = p.ds[0].mul(&m.ds[0]).sub(&p.a2);
        assert!(prod.is_zero());
    }

    #[test]
    fn s0_only_residual_is_consistency_term() {
        let cfg = WkbConfig::new(rf(&[0, 1], &[1]), rf(&[1], &[1]), Point::Infinity, Branch::Plus, 8, 0);
        let st = solve(&cfg).unwrap();
        let w = assemble_wavefunction(&st, 8, 0).unwrap();
        let r = verify_operator(&cfg, &w).unwrap();
        assert_eq!(r.hbar_valuation, Some(1));
    }
}
