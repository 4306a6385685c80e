//! The JSON report. Every exact number is a decimal or `p/q` string.

use std::collections::BTreeMap;

use qcurve::algebra::{q_str, FieldElement, MPoly, Poly, RatFunc, TruncSeries, Q};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub curve: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Analysis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wkb: Option<WkbReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toprec: Option<ToprecReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verification: Vec<SuiteReport>,
    pub passed: bool,
    /// Wall time in milliseconds, present only when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

/// A ratio of polynomials in ℏ, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HbarRat {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

/// An element of ℚ, ℚ(√d), ℚ(ℏ) or ℚ(ℏ)(√d(ℏ)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Elem {
    Rational(String),
    /// `a + b√d` as `["a", "b", "d"]`.
    Quadratic([String; 3]),
    Hbar(HbarRat),
    HbarQuadratic {
        a: HbarRat,
        b: HbarRat,
        d: HbarRat,
    },
}

pub fn poly_strings(p: &Poly<Q>) -> Vec<String> {
    if p.is_zero() {
        return vec!["0".into()];
    }
    p.coeffs().iter().map(q_str).collect()
}

fn hbar_rat(r: &RatFunc<Q>) -> HbarRat {
    HbarRat {
        num: poly_strings(r.num()),
        den: poly_strings(r.den()),
    }
}

impl From<&FieldElement> for Elem {
    fn from(x: &FieldElement) -> Self {
        match x {
            FieldElement::Q(a) => Elem::Rational(q_str(a)),
            FieldElement::Sqrt(s) => Elem::Quadratic([
                q_str(&s.a),
                q_str(&s.b),
                q_str(s.radicand().expect("irrational element")),
            ]),
            FieldElement::Hbar(r) => Elem::Hbar(hbar_rat(r)),
            FieldElement::HbarSqrt(s) => Elem::HbarQuadratic {
                a: hbar_rat(&s.a),
                b: hbar_rat(&s.b),
                d: hbar_rat(s.radicand().expect("irrational element")),
            },
        }
    }
}

/// Nonzero coefficients by exponent of the local uniformizer.
pub fn series_map(s: &TruncSeries<FieldElement>) -> BTreeMap<i64, Elem> {
    s.terms().map(|(k, c)| (k, Elem::from(c))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub place: String,
    pub degree: i64,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub place: String,
    pub k: Option<i64>,
    pub l: Option<i64>,
    pub n: i64,
    pub r: String,
    pub class: String,
    pub blowups_min: i64,
    pub blowups_full: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analysis {
    pub a1: String,
    pub a2: String,
    pub quantum_curve: String,
    /// `[c₀, c₁, c₂]` of `c₂y² + c₁y + c₀ = 0`, integer content cleared.
    pub affine_equation: [Vec<String>; 3],
    pub discriminant: Vec<DivisorEntry>,
    pub delta: i64,
    pub a: i64,
    pub ns_class: String,
    pub p_a: i64,
    pub p_g: i64,
    /// `[c₀, c₁, c₂]` of the local equation at `C_∞` in the chart `(u, w)`.
    pub chart: [Vec<String>; 3],
    pub chart_singular: bool,
    pub profiles: Vec<ProfileReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub adjunction_genus: i64,
    pub count_genus: i64,
    pub count_a: i64,
    pub n0: i64,
    pub n_infinity: i64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogSeriesReport {
    pub m: usize,
    /// Coefficient of `log τ`.
    pub log: Elem,
    pub series: BTreeMap<i64, Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveReport {
    pub hbar_order: usize,
    /// Exponent of the uniformizer in the prefactor.
    pub log_exponent: Elem,
    /// Terms of negative valuation kept in the exponential.
    pub principal: BTreeMap<i64, Elem>,
    /// Coefficients of the expanded exponential.
    pub body: BTreeMap<i64, Elem>,
    pub residual_passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WkbReport {
    pub place: String,
    pub branch: String,
    /// `τ` with `x − x₀ = τ^e` or `1/x = τ^e`.
    pub ramification: u8,
    pub order: i64,
    pub depth: usize,
    pub s: Vec<LogSeriesReport>,
    pub residual_zero: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavefunction: Option<WaveReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialReport {
    pub exponents: Vec<i32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryReport {
    pub g: usize,
    pub n: usize,
    pub terms: Vec<MonomialReport>,
}

pub fn entry(g: usize, n: usize, p: &MPoly) -> EntryReport {
    EntryReport {
        g,
        n,
        terms: p
            .terms()
            .map(|(k, c)| MonomialReport {
                exponents: k.clone(),
                coeff: q_str(c),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToprecReport {
    pub x: String,
    pub y: String,
    pub sigma: String,
    pub normalization: String,
    pub max_level: usize,
    /// `W_{g,n} = w dt₁⋯dt_n` as Laurent polynomials in `t₁ … t_n`.
    pub w: Vec<EntryReport>,
    pub f: Vec<EntryReport>,
    pub symmetric: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}
