//! Topological recursion on a genus-zero curve with a rational
//! parametrization `t ↦ (x(t), y(t))` and the deck involution `t ↦ −t`.
//!
//! A stable `W_{g,n}` is stored as the Laurent polynomial `w` with
//! `W_{g,n} = w(t₁, …, t_n) dt₁⋯dt_n`: negative powers are the pole basis at
//! `t = 0` and nonnegative powers the pole basis at `t = ∞`, the two fixed
//! points of `σ`. Residues there are read off Laurent expansions in the
//! integration variable. The remaining points of `supp(Ω)` are handled by
//! exact specialization and partial fractions, where their contribution must
//! vanish.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::factor::{factor_q, rational_roots};
use crate::algebra::{
    partial_fractions, q, residue_at, series_expand, Field, MPoly, Point, Poly, RatFunc, TruncSeries, Q,
};
use crate::par::Exec;
use crate::spectral::{Place, SpectralData};
use crate::wkb::WkbState;
use crate::{Error, Result};

/// The normalized spectral curve with its initial data.
#[derive(Clone, Debug)]
pub struct ParamCurve {
    pub x: RatFunc<Q>,
    pub y: RatFunc<Q>,
    pub sigma: RatFunc<Q>,
    /// `W₀,₁ = w01 dt`.
    pub w01: RatFunc<Q>,
    /// `Ω = σ*W₀,₁ − W₀,₁ = omega dt`.
    pub omega: RatFunc<Q>,
    /// Zeros and poles of `Ω`.
    pub support: Vec<Place>,
    /// Fixed points of `σ` where `dx` vanishes.
    pub ramification: Vec<Place>,
    /// Point at which every free energy vanishes in each variable.
    pub normalization: Q,
}

/// Order at `∞` of the differential `f dt`.
fn order_at_infinity_dt(f: &RatFunc<Q>) -> i64 {
    f.den().deg_i() - f.num().deg_i() - 2
}

pub fn build_curve(x: RatFunc<Q>, y: RatFunc<Q>, sigma: RatFunc<Q>, normalization: Q) -> Result<ParamCurve> {
    let t = RatFunc::x();
    if sigma.compose(&sigma)? != t {
        return Err(Error::Precondition("sigma is not an involution".into()));
    }
    if x.compose(&sigma)? != x {
        return Err(Error::Precondition("x is not sigma-invariant".into()));
    }
    let y_conj = y.compose(&sigma)?;
    if y_conj == y {
        return Err(Error::Precondition("y is sigma-invariant".into()));
    }
    if sigma != t.neg() {
        return Err(Error::Precondition("only the involution t -> -t is supported".into()));
    }
    let dx = x.derivative();
    let w01 = y.mul(&dx);
    let omega = y_conj.sub(&y).mul(&dx);
    let mut support = Vec::new();
    for p in [omega.num(), omega.den()] {
        for (f, _) in factor_q(p).factors {
            if f.deg_i() > 0 {
                support.push(Place::Finite(f.monic()));
            }
        }
    }
    if order_at_infinity_dt(&omega) != 0 {
        support.push(Place::Infinity);
    }
    let mut ramification = Vec::new();
    if dx.num().x_valuation() > 0 {
        ramification.push(Place::at(q(0, 1)));
    }
    if order_at_infinity_dt(&dx) > 0 {
        ramification.push(Place::Infinity);
    }
    if x.eval(&normalization).is_ok() && y.eval(&normalization).is_err() {
        return Err(Error::Precondition("y has a pole at the normalization point".into()));
    }
    Ok(ParamCurve {
        x,
        y,
        sigma,
        w01,
        omega,
        support,
        ramification,
        normalization,
    })
}

impl ParamCurve {
    /// Whether `y(t)` and `y(σ(t))` both solve `y² + a₁(x)y + a₂(x) = 0`.
    pub fn solves(&self, sd: &SpectralData) -> Result<bool> {
        let a1 = sd.a1.f.compose(&self.x)?;
        let a2 = sd.a2.f.compose(&self.x)?;
        for y in [self.y.clone(), self.y.compose(&self.sigma)?] {
            if !y.mul(&y).add(&a1.mul(&y)).add(&a2).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn in_support(&self, p: &Place) -> bool {
        self.support.contains(p)
    }

    fn omega_inv(&self) -> RatFunc<Q> {
        self.omega.recip().expect("Omega is nonzero")
    }

    /// Rational points where the curve data degenerate.
    fn special_points(&self) -> Vec<Q> {
        let mut v = vec![<Q as Field>::zero()];
        for p in [self.omega.num(), self.omega.den(), self.x.den(), self.y.den()] {
            for r in rational_roots(p) {
                v.push(r.clone());
                v.push(-r);
            }
        }
        v
    }
}

/// `x = 4/t²`, `y = −2/t`, normalized at `t = 0`.
pub fn airy_curve() -> ParamCurve {
    let x = RatFunc::new(Poly::from_ints(&[4]), Poly::from_ints(&[0, 0, 1])).unwrap();
    let y = RatFunc::new(Poly::from_ints(&[-2]), Poly::from_ints(&[0, 1])).unwrap();
    build_curve(x, y, RatFunc::x().neg(), q(0, 1)).expect("valid curve")
}

/// `x = 2 + 4/(t² − 1)`, `y = −(t + 1)/(t − 1)`, normalized at `t = −1`
/// where `x = ∞` and `y = 0`.
pub fn catalan_curve() -> ParamCurve {
    let x = RatFunc::new(Poly::from_ints(&[2, 0, 2]), Poly::from_ints(&[-1, 0, 1])).unwrap();
    let y = RatFunc::new(Poly::from_ints(&[-1, -1]), Poly::from_ints(&[-1, 1])).unwrap();
    build_curve(x, y, RatFunc::x().neg(), q(-1, 1)).expect("valid curve")
}

/// Built-in parametrized curves by name.
pub fn param_curve(name: &str) -> Option<ParamCurve> {
    match name {
        "airy" | "airy-param" => Some(airy_curve()),
        "hermite" | "catalan" | "catalan-param" => Some(catalan_curve()),
        _ => None,
    }
}

/// Coefficient of `dt₁dt₂` in `W₀,₂ = dt₁dt₂/(t₁ − t₂)²` at a point.
pub fn w02(t1: &Q, t2: &Q) -> Result<Q> {
    let d = t1 - t2;
    Field::inv(&(&d * &d)).ok_or(Error::DivisionByZero)
}

pub type Table = BTreeMap<(usize, usize), MPoly>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Zero,
    Infinity,
}

/// One factor of a bracket term as a function of the integration variable
/// `z` and the spectators `z₂ … z_n`, held in slots `0 … n−2`.
enum Factor<'a> {
    /// A stable `w` whose listed variables are set to `z`, or to `σ(z) = −z`
    /// when flagged, with the others sent to slots.
    Stable {
        w: &'a MPoly,
        zvars: Vec<(usize, bool)>,
        slots: Vec<(usize, usize)>,
    },
    /// `1/(z − z_s)²`, or `1/(σ(z) − z_s)²` when flagged.
    Cauchy { slot: usize, conj: bool },
    /// `1/(z − σ(z))² = 1/(4z²)`.
    Diagonal,
    /// `1/ω(z)` with `Ω = ω dz`.
    OmegaInv(&'a RatFunc<Q>),
}

type ZSeries = BTreeMap<i32, MPoly>;

impl Factor<'_> {
    /// Smallest and largest exponent of `z` in the expansion at `side`;
    /// `None` when unbounded.
    fn range(&self, side: Side) -> (Option<i32>, Option<i32>) {
        match self {
            Factor::Stable { w, zvars, .. } => {
                let mut it = w.terms().map(|(k, _)| zvars.iter().map(|&(v, _)| k[v]).sum::<i32>());
                let first = it.next();
                let (lo, hi) = it.fold((first, first), |(lo, hi), e| (lo.min(Some(e)), hi.max(Some(e))));
                (lo, hi)
            }
            Factor::Cauchy { .. } => match side {
                Side::Zero => (Some(0), None),
                Side::Infinity => (None, Some(-2)),
            },
            Factor::Diagonal => (Some(-2), Some(-2)),
            Factor::OmegaInv(f) => match side {
                Side::Zero => (Some(f.num().x_valuation() as i32 - f.den().x_valuation() as i32), None),
                Side::Infinity => (None, Some((f.num().deg_i() - f.den().deg_i()) as i32)),
            },
        }
    }

    /// Coefficients of `z^e` for `lo ≤ e ≤ hi` in the expansion at `side`.
    fn series(&self, side: Side, m: usize, lo: i32, hi: i32) -> ZSeries {
        let mut out = ZSeries::new();
        if lo > hi {
            return out;
        }
        let mut put = |e: i32, exps: Vec<i32>, c: Q| {
            out.entry(e).or_insert_with(|| MPoly::zero(m)).add_term(exps, c);
        };
        match self {
            Factor::Stable { w, zvars, slots } => {
                for (k, c) in w.terms() {
                    let e: i32 = zvars.iter().map(|&(v, _)| k[v]).sum();
                    if e < lo || e > hi {
                        continue;
                    }
                    let odd: i32 = zvars.iter().filter(|&&(_, conj)| conj).map(|&(v, _)| k[v]).sum();
                    let mut exps = vec![0; m];
                    for &(v, s) in slots {
                        exps[s] = k[v];
                    }
                    put(e, exps, if odd % 2 != 0 { -c.clone() } else { c.clone() });
                }
            }
            Factor::Cauchy { slot, conj } => {
                // at 0: Σ (k+1) (±z)^k z_s^{−k−2}; at ∞: Σ (k+1) (±z_s)^k z^{−k−2}
                let (from, to) = match side {
                    Side::Zero => (lo.max(0), hi),
                    Side::Infinity => (lo, hi.min(-2)),
                };
                for e in from..=to {
                    let k = if side == Side::Zero { e } else { -e - 2 };
                    let mut c = Q::from_int(k as i64 + 1);
                    if *conj && k % 2 == 1 {
                        c = -c;
                    }
                    let mut exps = vec![0; m];
                    exps[*slot] = -e - 2;
                    put(e, exps, c);
                }
            }
            Factor::Diagonal => {
                if lo <= -2 && -2 <= hi {
                    put(-2, vec![0; m], q(1, 4));
                }
            }
            Factor::OmegaInv(f) => match side {
                Side::Zero => {
                    let s = series_expand(f, &Point::Finite(q(0, 1)), hi as i64, 1);
                    for (k, c) in s.terms() {
                        if k >= lo as i64 && k <= hi as i64 {
                            put(k as i32, vec![0; m], c.clone());
                        }
                    }
                }
                Side::Infinity => {
                    let s = series_expand(f, &Point::Infinity, -(lo as i64), 1);
                    for (k, c) in s.terms() {
                        let e = -(k as i32);
                        if e >= lo && e <= hi {
                            put(e, vec![0; m], c.clone());
                        }
                    }
                }
            },
        }
        out
    }

    /// The factor at a numeric point `(z, spectators)` as a rational
    /// function of `z`.
    fn specialize(&self, others: &[Q]) -> Result<Frac> {
        Ok(match self {
            Factor::Stable { w, zvars, slots } => {
                let mut coeffs: BTreeMap<i32, Q> = BTreeMap::new();
                for (k, c) in w.terms() {
                    let mut coef = c.clone();
                    for &(v, s) in slots {
                        coef = coef.times(&int_pow(&others[s], k[v])?);
                    }
                    let mut e = 0;
                    let mut odd = 0;
                    for &(v, conj) in zvars {
                        e += k[v];
                        if conj {
                            odd += k[v];
                        }
                    }
                    if odd % 2 != 0 {
                        coef = -coef;
                    }
                    let slot = coeffs.entry(e).or_insert_with(<Q as Field>::zero);
                    *slot = slot.plus(&coef);
                }
                let shift = coeffs.keys().next().copied().unwrap_or(0);
                let mut c = vec![<Q as Field>::zero(); coeffs.keys().last().map_or(0, |&h| (h - shift) as usize + 1)];
                for (e, v) in coeffs {
                    c[(e - shift) as usize] = v;
                }
                Frac {
                    num: Poly::new(c),
                    shift,
                    poles: Vec::new(),
                }
            }
            Factor::Cauchy { slot, conj } => {
                // 1/(−z − s)² = 1/(z + s)²
                let r = if *conj {
                    -others[*slot].clone()
                } else {
                    others[*slot].clone()
                };
                Frac {
                    num: Poly::one(),
                    shift: 0,
                    poles: vec![r],
                }
            }
            Factor::Diagonal => Frac {
                num: Poly::new(vec![q(1, 4)]),
                shift: -2,
                poles: Vec::new(),
            },
            Factor::OmegaInv(_) => unreachable!("Omega enters through the kernel"),
        })
    }
}

/// `num · z^shift / Π (z − r)²` over the listed poles.
struct Frac {
    num: Poly<Q>,
    shift: i32,
    poles: Vec<Q>,
}

impl Frac {
    fn mul(mut self, o: Frac) -> Frac {
        self.num = self.num.mul(&o.num);
        self.shift += o.shift;
        self.poles.extend(o.poles);
        self
    }
}

/// Sums fractions over the common denominator `z^k Π (z − r)²` without
/// intermediate gcds.
fn sum_fracs(terms: Vec<Frac>) -> Result<RatFunc<Q>> {
    let mut poles: Vec<Q> = Vec::new();
    for t in &terms {
        for r in &t.poles {
            if !poles.contains(r) {
                poles.push(r.clone());
            }
        }
    }
    let low = terms.iter().map(|t| t.shift).min().unwrap_or(0).min(0);
    let square = |r: &Q| {
        let l = Poly::new(vec![-r.clone(), q(1, 1)]);
        l.mul(&l)
    };
    let mut num = Poly::zero();
    for t in terms {
        let mut p = t.num.shift_up((t.shift - low) as usize);
        for r in poles.iter().filter(|r| !t.poles.contains(r)) {
            p = p.mul(&square(r));
        }
        num = num.add(&p);
    }
    let mut den = Poly::one().shift_up((-low) as usize);
    for r in &poles {
        den = den.mul(&square(r));
    }
    RatFunc::new(num, den)
}

fn int_pow(x: &Q, e: i32) -> Result<Q> {
    if e < 0 {
        Ok(Field::pow(&Field::inv(x).ok_or(Error::DivisionByZero)?, (-e) as u32))
    } else {
        Ok(Field::pow(x, e as u32))
    }
}

fn zmul(a: &ZSeries, b: &ZSeries, keep: impl Fn(i32) -> bool, m: usize) -> ZSeries {
    let mut out = ZSeries::new();
    for (ea, pa) in a {
        for (eb, pb) in b {
            let e = ea + eb;
            if keep(e) {
                let prod = pa.mul(pb);
                let slot = out.entry(e).or_insert_with(|| MPoly::zero(m));
                *slot = slot.add(&prod);
            }
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// The bracket terms of the recursion for `(g, n)`, each a product of
/// factors whose sum is `W_{g−1,n+1}(z, σz, ·) + Σ' W(z, ·)W(σz, ·)`.
fn bracket_terms(table: &Table, g: usize, n: usize) -> Result<Vec<Vec<Factor<'_>>>> {
    let m = n - 1;
    let get = |g: usize, n: usize| {
        table
            .get(&(g, n))
            .ok_or_else(|| Error::Precondition(format!("W_{{{g},{n}}} is missing")))
    };
    let mut terms = Vec::new();
    if g >= 1 {
        if (g - 1, n + 1) == (0, 2) {
            terms.push(vec![Factor::Diagonal]);
        } else {
            terms.push(vec![Factor::Stable {
                w: get(g - 1, n + 1)?,
                zvars: vec![(0, false), (1, true)],
                slots: (0..m).map(|s| (s + 2, s)).collect(),
            }]);
        }
    }
    let piece = |gi: usize, set: &[usize], conj: bool| -> Result<Factor<'_>> {
        if gi == 0 && set.len() == 1 {
            return Ok(Factor::Cauchy { slot: set[0], conj });
        }
        Ok(Factor::Stable {
            w: get(gi, set.len() + 1)?,
            zvars: vec![(0, conj)],
            slots: set.iter().enumerate().map(|(k, &s)| (k + 1, s)).collect(),
        })
    };
    for mask in 0u32..(1 << m) {
        let i: Vec<usize> = (0..m).filter(|s| mask & (1 << s) != 0).collect();
        let j: Vec<usize> = (0..m).filter(|s| mask & (1 << s) == 0).collect();
        for g1 in 0..=g {
            let g2 = g - g1;
            if (g1 == 0 && i.is_empty()) || (g2 == 0 && j.is_empty()) {
                continue;
            }
            terms.push(vec![piece(g1, &i, false)?, piece(g2, &j, true)?]);
        }
    }
    Ok(terms)
}

/// Even part of `(1/ω)·bracket` inside the residue window at `side`, with
/// the `z` exponent placed in the first variable.
fn side_residue(factors: &[Factor], side: Side, n: usize) -> MPoly {
    let m = n - 1;
    let mut w = MPoly::zero(n);
    let ranges: Vec<_> = factors.iter().map(|f| f.range(side)).collect();
    if ranges.iter().any(|r| r.0.is_none() && r.1.is_none()) {
        return w;
    }
    let mut series = Vec::with_capacity(factors.len());
    match side {
        Side::Zero => {
            let mins: Vec<i32> = ranges.iter().map(|r| r.0.expect("bounded below at 0")).collect();
            let total: i32 = mins.iter().sum();
            if total > -2 {
                return w;
            }
            for (f, (r, &mn)) in factors.iter().zip(ranges.iter().zip(&mins)) {
                let hi = (-2 - (total - mn)).min(r.1.unwrap_or(i32::MAX));
                series.push(f.series(side, m, mn, hi));
            }
            let mut acc = series[0].clone();
            let mut rest: i32 = mins[1..].iter().sum();
            for (s, &mn) in series[1..].iter().zip(&mins[1..]) {
                rest -= mn;
                acc = zmul(&acc, s, |e| e + rest <= -2, m);
            }
            for (e, p) in acc {
                if e <= -2 && e % 2 == 0 {
                    w = w.add(&lift(&p, e));
                }
            }
        }
        Side::Infinity => {
            let maxs: Vec<i32> = ranges.iter().map(|r| r.1.expect("bounded above at infinity")).collect();
            let total: i32 = maxs.iter().sum();
            if total < 0 {
                return w;
            }
            for (f, (r, &mx)) in factors.iter().zip(ranges.iter().zip(&maxs)) {
                let lo = (-(total - mx)).max(r.0.unwrap_or(i32::MIN));
                series.push(f.series(side, m, lo, mx));
            }
            let mut acc = series[0].clone();
            let mut rest: i32 = maxs[1..].iter().sum();
            for (s, &mx) in series[1..].iter().zip(&maxs[1..]) {
                rest -= mx;
                acc = zmul(&acc, s, |e| e + rest >= 0, m);
            }
            for (e, p) in acc {
                if e >= 0 && e % 2 == 0 {
                    w = w.add(&lift(&p, e));
                }
            }
        }
    }
    w
}

/// `z₁^e · p(z₂, …)`.
fn lift(p: &MPoly, e: i32) -> MPoly {
    let mut out = MPoly::zero(p.nvars() + 1);
    for (k, c) in p.terms() {
        let mut exps = Vec::with_capacity(k.len() + 1);
        exps.push(e);
        exps.extend_from_slice(k);
        out.add_term(exps, c.clone());
    }
    out
}

/// One step of the recursion: `W_{g,n}` from the lower entries of `table`.
///
/// Only the residues at `0` and `∞` are taken here. Contributions from the
/// other points of `supp(Ω)` are confirmed to vanish by
/// [`check_residues`].
pub fn toprec_step(c: &ParamCurve, table: &Table, g: usize, n: usize, exec: Exec) -> Result<MPoly> {
    if n == 0 || 2 * g + n < 3 {
        return Err(Error::Precondition(format!("({g},{n}) is not stable")));
    }
    let oinv = c.omega_inv();
    let mut sides = Vec::new();
    if c.in_support(&Place::at(q(0, 1))) {
        sides.push(Side::Zero);
    }
    if c.in_support(&Place::Infinity) {
        sides.push(Side::Infinity);
    }
    let mut terms = bracket_terms(table, g, n)?;
    for t in &mut terms {
        t.insert(0, Factor::OmegaInv(&oinv));
    }
    let parts = exec.map(&terms, |t| {
        let mut acc = MPoly::zero(n);
        for &s in &sides {
            acc = acc.add(&side_residue(t, s, n));
        }
        acc
    });
    let mut w = MPoly::zero(n);
    for p in parts {
        w = w.add(&p);
    }
    for (k, _) in w.terms() {
        if k[0] == -1 {
            return Err(Error::LogObstruction);
        }
    }
    Ok(w)
}

/// Invariance under the transposition `(0 1)` and the cyclic shift, which
/// together generate all slot permutations.
pub fn is_symmetric(w: &MPoly) -> bool {
    let n = w.nvars();
    if n < 2 {
        return true;
    }
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    w.permute(&swap) == *w && w.permute(&cycle) == *w
}

/// Poles only at ramification points and no first-order poles.
pub fn has_local_poles(c: &ParamCurve, w: &MPoly) -> bool {
    let zero_ram = c.ramification.contains(&Place::at(q(0, 1)));
    let inf_ram = c.ramification.contains(&Place::Infinity);
    w.terms().all(|(k, _)| {
        k.iter()
            .all(|&e| e != -1 && (zero_ram || e >= 0) && (inf_ram || e <= -2))
    })
}

/// Slotwise antiderivative normalized to vanish at `p` in every variable.
pub fn free_energy(w: &MPoly, p: &Q) -> Result<MPoly> {
    let mut f = w.clone();
    for i in 0..w.nvars() {
        f = f.integrate(i)?;
    }
    for i in 0..w.nvars() {
        let at_p = f.substitute(i, p)?;
        f = f.sub(&at_p);
    }
    Ok(f)
}

/// All stable `W_{g,n}` and `F_{g,n}` with `2g − 2 + n ≤ max_level`.
#[derive(Clone, Debug)]
pub struct TrTable {
    pub curve: ParamCurve,
    pub max_level: usize,
    pub w: Table,
    pub f: Table,
}

/// The stable `(g, n)` with `2g − 2 + n = level`, `n ≥ 1`.
pub fn level_entries(level: usize) -> Vec<(usize, usize)> {
    (0..=level.div_ceil(2))
        .filter(|&g| level + 2 > 2 * g)
        .map(|g| (g, level + 2 - 2 * g))
        .collect()
}

pub fn build_table(c: &ParamCurve, max_level: usize, exec: Exec) -> Result<TrTable> {
    let mut w = Table::new();
    let mut f = Table::new();
    for level in 1..=max_level {
        let entries = level_entries(level);
        let results = exec.map(&entries, |&(g, n)| toprec_step(c, &w, g, n, exec));
        for (&(g, n), r) in entries.iter().zip(results) {
            let wgn = r?;
            f.insert((g, n), free_energy(&wgn, &c.normalization)?);
            w.insert((g, n), wgn);
        }
    }
    Ok(TrTable {
        curve: c.clone(),
        max_level,
        w,
        f,
    })
}

/// Random nonzero rationals with pairwise distinct squares that avoid
/// `avoid` and its negatives.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize, avoid: &[Q]) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::with_capacity(n);
    while out.len() < n {
        let num: i64 = rng.gen_range(1..=60) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let den: i64 = rng.gen_range(1..=9);
        let v = q(num, den);
        let sq = &v * &v;
        if avoid.iter().any(|a| (a * a) == sq) || out.iter().any(|o| (o * o) == sq) {
            continue;
        }
        out.push(v);
    }
    out
}

/// Outcome of the exact residue check at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueCheck {
    /// Sum of residues at the points of `supp(Ω)` other than `0` and `∞`.
    pub others: Q,
    /// Whether the residues at `0` and `∞` reproduce the symbolic `W_{g,n}`.
    pub matches: bool,
}

/// Evaluates the recursion integrand at `(z₁, spectators)` as a rational
/// function of `z` and sums its residues over `supp(Ω)` with partial
/// fractions, separating the fixed points of `σ` from the rest.
pub fn check_residues(c: &ParamCurve, table: &Table, g: usize, n: usize, point: &[Q]) -> Result<ResidueCheck> {
    let w = table
        .get(&(g, n))
        .ok_or_else(|| Error::Precondition("entry missing".into()))?;
    let z1 = &point[0];
    let others = &point[1..];
    let oinv = c.omega_inv();
    let z = RatFunc::x();
    let zc1 = RatFunc::constant(z1.clone());
    // −½ (1/(z₁ + z) − 1/(z₁ − z)) / ω(z), the sign coming from dz·d(σz)
    let kernel = zc1
        .add(&z)
        .recip()?
        .sub(&zc1.sub(&z).recip()?)
        .scale(&q(-1, 2))
        .mul(&oinv);
    let mut fracs = Vec::new();
    for term in bracket_terms(table, g, n)? {
        let mut p = Frac {
            num: Poly::one(),
            shift: 0,
            poles: Vec::new(),
        };
        for f in &term {
            p = p.mul(f.specialize(others)?);
        }
        fracs.push(p);
    }
    let bracket = sum_fracs(fracs)?;
    let integrand = kernel.mul(&bracket);
    let mut pf = None;
    let mut residue_sum = |place: &Place| -> Q {
        match place {
            Place::Infinity => residue_at(&integrand, &Point::Infinity),
            Place::Finite(p) if p.deg_i() == 1 => residue_at(&integrand, &Point::Finite(-p.coeff(0))),
            Place::Finite(p) => {
                let d = p.deg_i() as usize;
                pf.get_or_insert_with(|| partial_fractions(&integrand))
                    .parts
                    .iter()
                    .find(|part| part.factor.monic() == *p)
                    .map(|part| {
                        part.numerators[0]
                            .coeff(d - 1)
                            .times(&Field::inv(&part.factor.lc()).unwrap())
                    })
                    .unwrap_or_else(<Q as Field>::zero)
            }
        }
    };
    let fixed = [Place::at(q(0, 1)), Place::Infinity];
    let mut at_fixed = <Q as Field>::zero();
    let mut rest = <Q as Field>::zero();
    for p in &c.support {
        let r = residue_sum(p);
        if fixed.contains(p) {
            at_fixed = at_fixed.plus(&r);
        } else {
            rest = rest.plus(&r);
        }
    }
    Ok(ResidueCheck {
        others: rest,
        matches: at_fixed == w.eval(point)?,
    })
}

/// Random points suitable for evaluating the recursion on `c`.
pub fn curve_points(c: &ParamCurve, rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    random_points(rng, n, &c.special_points())
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Both sides of the differential recursion at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffCheck {
    /// `∂₁F_{g,n}` from the integral recursion.
    pub lhs: Q,
    /// The right side with the kernel `ω^{z_j − σ(z_j)}(z₁)` as written.
    pub literal: Q,
    /// The right side with `ω^{z_j − σ(z_j)}(z₁) − ω^{p − σ(p)}(z₁)` in the
    /// first sum, `p` the normalization point. Both agree when `σ(p) = p`.
    pub normalized: Q,
}

impl DiffCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.normalized
    }
}

fn cauchy_pair(z1: &Q, a: &Q) -> Result<Q> {
    let d1 = Field::inv(&(z1 - a)).ok_or(Error::DivisionByZero)?;
    let d2 = Field::inv(&(z1 + a)).ok_or(Error::DivisionByZero)?;
    Ok(d1.minus(&d2))
}

/// Evaluates `∂₁F_{g,n}` and the right side of the differential recursion
/// at a point.
pub fn diff_recursion_check(t: &TrTable, g: usize, n: usize, point: &[Q]) -> Result<DiffCheck> {
    if 2 * g + n < 4 || n == 0 {
        return Err(Error::Precondition(format!(
            "the differential recursion needs 2g-2+n >= 2, got ({g},{n})"
        )));
    }
    let get = |g: usize, n: usize| {
        t.f.get(&(g, n))
            .ok_or_else(|| Error::Precondition(format!("F_{{{g},{n}}} is missing")))
    };
    let inv_o = |z: &Q| -> Result<Q> { Field::inv(&t.curve.omega.eval(z)?).ok_or(Error::DivisionByZero) };
    let z1 = &point[0];
    let p = &t.curve.normalization;
    let omega_p = if Field::is_zero(p) {
        <Q as Field>::zero()
    } else {
        cauchy_pair(z1, p)?
    };
    let lhs = get(g, n)?.deriv(0).eval(point)?;
    let mut first = <Q as Field>::zero();
    let mut first_p = <Q as Field>::zero();
    let mut second = <Q as Field>::zero();
    if n >= 2 {
        let fm = get(g, n - 1)?;
        let d_first = fm.deriv(0);
        for j in 1..n {
            let omega_j = cauchy_pair(z1, &point[j])?;
            let without_j: Vec<Q> = point
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, v)| v.clone())
                .collect();
            let a = d_first.eval(&without_j)?.times(&inv_o(z1)?);
            let b = fm.deriv(j - 1).eval(&point[1..])?.times(&inv_o(&point[j])?);
            first = first.plus(&omega_j.times(&a));
            first_p = first_p.plus(&omega_p.times(&a));
            second = second.plus(&omega_j.times(&b));
        }
    }
    let rest = &point[1..];
    let mut quad = <Q as Field>::zero();
    if g >= 1 {
        let mut pt = vec![z1.clone(), z1.clone()];
        pt.extend_from_slice(rest);
        quad = quad.plus(&get(g - 1, n + 1)?.deriv(0).deriv(1).eval(&pt)?);
    }
    let m = n - 1;
    for mask in 0u32..(1 << m) {
        let i: Vec<Q> = (0..m)
            .filter(|s| mask & (1 << s) != 0)
            .map(|s| rest[s].clone())
            .collect();
        let j: Vec<Q> = (0..m)
            .filter(|s| mask & (1 << s) == 0)
            .map(|s| rest[s].clone())
            .collect();
        for g1 in 0..=g {
            let g2 = g - g1;
            if 2 * g1 + i.len() < 2 || 2 * g2 + j.len() < 2 {
                continue;
            }
            let p1: Vec<Q> = std::iter::once(z1.clone()).chain(i.iter().cloned()).collect();
            let p2: Vec<Q> = std::iter::once(z1.clone()).chain(j.iter().cloned()).collect();
            let a = get(g1, i.len() + 1)?.deriv(0).eval(&p1)?;
            let b = get(g2, j.len() + 1)?.deriv(0).eval(&p2)?;
            quad = quad.plus(&a.times(&b));
        }
    }
    let quad = quad.times(&inv_o(z1)?);
    let literal = first.minus(&second).plus(&quad);
    let normalized = literal.minus(&first_p);
    Ok(DiffCheck {
        lhs,
        literal,
        normalized,
    })
}

/// The local coordinate `t(τ)` near the normalization point, where `τ^e` is
/// `x − a` (or `1/x` at `∞`) and `sign` picks the square root when `e = 2`.
pub fn local_inverse(c: &ParamCurve, place: &Point<Q>, e: u8, sign: i64, prec: i64) -> Result<TruncSeries<Q>> {
    let p = &c.normalization;
    let u = match place {
        Point::Infinity => c.x.recip()?,
        Point::Finite(a) => c.x.sub(&RatFunc::constant(a.clone())),
    };
    let us = series_expand(&u, &Point::Finite(p.clone()), prec + e as i64 + 1, 1);
    if us.valuation() != e as i64 || us.is_zero() {
        return Err(Error::Precondition(format!(
            "x has local degree {} at the normalization point, expected {e}",
            us.valuation()
        )));
    }
    let v = match e {
        1 => us,
        2 => {
            let lead = us.leading().unwrap();
            let r = crate::algebra::field::rational_sqrt(lead)
                .ok_or_else(|| Error::Precondition("irrational local square root".into()))?;
            us.sqrt(&if sign < 0 { -r } else { r })?
        }
        _ => return Err(Error::Precondition("ramification index above 2".into())),
    };
    let s = v.reversion()?;
    Ok(s.add(&TruncSeries::constant(1, p.clone(), s.prec())).truncate(prec + 1))
}

fn poly_at_series(p: &Poly<Q>, s: &TruncSeries<Q>) -> TruncSeries<Q> {
    let mut acc = TruncSeries::zero(s.e(), s.prec());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(s).add(&TruncSeries::constant(s.e(), c.clone(), s.prec()));
    }
    acc
}

/// `f(t(τ))` for a rational function `f`.
pub fn ratfunc_at_series(f: &RatFunc<Q>, s: &TruncSeries<Q>) -> Result<TruncSeries<Q>> {
    poly_at_series(f.num(), s).div(&poly_at_series(f.den(), s))
}

/// `y(t(τ))`, comparable with the WKB `S₀′`.
pub fn y_along(c: &ParamCurve, t_of_tau: &TruncSeries<Q>) -> Result<TruncSeries<Q>> {
    ratfunc_at_series(&c.y, t_of_tau)
}

/// The local inverse whose branch matches the WKB state, checked on
/// `S₀′ = y` through `τ^prec`.
pub fn matching_inverse(c: &ParamCurve, st: &WkbState, place: &Point<Q>, prec: i64) -> Result<TruncSeries<Q>> {
    let signs: &[i64] = if st.e == 2 { &[1, -1] } else { &[1] };
    for &sign in signs {
        let t = local_inverse(c, place, st.e, sign, prec)?;
        let y = y_along(c, &t)?;
        let lo = y.valuation().min(st.ds[0].valuation());
        let hi = prec.min(st.ds[0].prec() - 1).min(y.prec() - 1);
        let agree = (lo..=hi).all(|k| {
            let a = st.ds[0].coeff(k).unwrap();
            a.as_q().is_some_and(|a| Some(a.clone()) == y.coeff(k))
        });
        if agree {
            return Ok(t);
        }
    }
    Err(Error::Precondition(
        "no branch of the parametrization matches the WKB state".into(),
    ))
}

/// Evaluates a one-variable Laurent polynomial at a series.
pub fn eval_at_series(p: &MPoly, s: &TruncSeries<Q>) -> Result<TruncSeries<Q>> {
    let prec = s.prec();
    let mut acc = TruncSeries::zero(s.e(), prec);
    let (lo, hi) = match p.exponent_range(0) {
        Some(r) => r,
        None => return Ok(acc),
    };
    let mut pos = TruncSeries::constant(s.e(), q(1, 1), prec);
    let mut powers = BTreeMap::new();
    powers.insert(0, pos.clone());
    for k in 1..=hi.max(0) {
        pos = pos.mul(s);
        powers.insert(k, pos.clone());
    }
    if lo < 0 {
        let inv = s.inv()?;
        let mut neg = TruncSeries::constant(s.e(), q(1, 1), prec);
        for k in 1..=-lo {
            neg = neg.mul(&inv);
            powers.insert(-k, neg.clone());
        }
    }
    for (k, c) in p.terms() {
        acc = acc.add(&powers[&k[0]].scale(c));
    }
    Ok(acc)
}

/// `Σ_{2g−2+n = m−1} F_{g,n}(t, …, t)/n!` along `t = t(τ)`.
pub fn principal_specialize(t: &TrTable, m: usize, t_of_tau: &TruncSeries<Q>) -> Result<TruncSeries<Q>> {
    if m < 2 {
        return Err(Error::Precondition("S_0 and S_1 come from the WKB side".into()));
    }
    if m - 1 > t.max_level {
        return Err(Error::Precondition(format!("table stops at level {}", t.max_level)));
    }
    let mut diag = MPoly::zero(1);
    for (g, n) in level_entries(m - 1) {
        let f =
            t.f.get(&(g, n))
                .ok_or_else(|| Error::Precondition(format!("F_{{{g},{n}}} is missing")))?;
        let fact = crate::oracles::factorial(n);
        diag = diag.add(&f.diagonal().scale(&Field::inv(&Q::from_integer(fact)).unwrap()));
    }
    eval_at_series(&diag, t_of_tau)
}

/// Coefficients of `Π ξ_i^{μ_i}` with `Σμ ≤ max_total` in the expansion of
/// `f(t(ξ₁), …, t(ξ_n))`, where `t(ξ)` has valuation zero.
pub fn expand_multi(f: &MPoly, t_of_xi: &TruncSeries<Q>, max_total: usize) -> Result<BTreeMap<Vec<usize>, Q>> {
    let n = f.nvars();
    let mut cache: BTreeMap<i32, Vec<Q>> = BTreeMap::new();
    for (k, _) in f.terms() {
        for &e in k {
            if let std::collections::btree_map::Entry::Vacant(v) = cache.entry(e) {
                let mono = MPoly::monomial(q(1, 1), vec![e]);
                let s = eval_at_series(&mono, t_of_xi)?;
                if s.valuation() < 0 || s.prec() <= max_total as i64 {
                    return Err(Error::TruncationExhausted);
                }
                v.insert((0..=max_total as i64).map(|j| s.coeff(j).unwrap()).collect());
            }
        }
    }
    let mut out = BTreeMap::new();
    for (k, c) in f.terms() {
        let mut partial: Vec<(Vec<usize>, Q)> = vec![(Vec::new(), c.clone())];
        for i in 0..n {
            let ser = &cache[&k[i]];
            let mut next = Vec::new();
            for (mu, v) in &partial {
                let used: usize = mu.iter().sum();
                for (j, a) in ser.iter().enumerate().take(max_total - used + 1) {
                    if !Field::is_zero(a) {
                        let mut mu2 = mu.clone();
                        mu2.push(j);
                        next.push((mu2, v.times(a)));
                    }
                }
            }
            partial = next;
        }
        for (mu, v) in partial {
            let e = out.entry(mu).or_insert_with(<Q as Field>::zero);
            *e = Field::plus(e, &v);
        }
    }
    out.retain(|_, v| !Field::is_zero(v));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn airy_initial_data() {
        let c = airy_curve();
        assert_eq!(
            c.w01,
            RatFunc::new(Poly::from_ints(&[16]), Poly::monomial(q(1, 1), 4)).unwrap()
        );
        assert_eq!(
            c.omega,
            RatFunc::new(Poly::from_ints(&[-32]), Poly::monomial(q(1, 1), 4)).unwrap()
        );
        assert_eq!(c.ramification, vec![Place::Infinity]);
        assert!(c.in_support(&Place::at(q(0, 1))));
    }

    #[test]
    fn rejects_non_involution() {
        let x = RatFunc::x().mul(&RatFunc::x());
        let y = RatFunc::x();
        let sigma = RatFunc::x().scale(&q(2, 1));
        assert!(build_curve(x.clone(), y.clone(), sigma, q(0, 1)).is_err());
        assert!(build_curve(RatFunc::x(), y, RatFunc::x().neg(), q(0, 1)).is_err());
    }

    #[test]
    fn w02_is_symmetric() {
        assert_eq!(w02(&q(1, 2), &q(3, 1)).unwrap(), w02(&q(3, 1), &q(1, 2)).unwrap());
        assert!(w02(&q(1, 1), &q(1, 1)).is_err());
    }

    #[test]
    fn level_one_entries() {
        assert_eq!(level_entries(1), vec![(0, 3), (1, 1)]);
        assert_eq!(level_entries(2), vec![(0, 4), (1, 2)]);
        assert_eq!(level_entries(3), vec![(0, 5), (1, 3), (2, 1)]);
    }
}
