//! Curve specifications: JSON ingestion, validation and the built-in registry.

use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use qcurve::algebra::{parse_q, Field, Point, Poly, QuadTower, RatFunc, Q};
use qcurve::curves::{higgs_matrix, BUILTINS};
use qcurve::spectral::SpectralData;
use qcurve::toprec::{build_curve, param_curve, ParamCurve};
use qcurve::wkb::Branch;
use serde::{Deserialize, Serialize};

/// A rational function `num/den` with integer coefficients as decimal
/// strings, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatSpec {
    pub num: Vec<String>,
    #[serde(default = "one_poly")]
    pub den: Vec<String>,
}

fn one_poly() -> Vec<String> {
    vec!["1".into()]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    pub x: RatSpec,
    pub y: RatSpec,
    pub sigma: RatSpec,
    /// Rational point where the free energies vanish.
    pub normalization: String,
}

/// Defaults for the `wkb` and `verify` subcommands; flags override them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub place: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
}

/// The on-disk curve format. Exactly one of `higgs` or the pair `a1`, `a2`
/// must be present.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub higgs: Option<[[RatSpec; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a1: Option<RatSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a2: Option<RatSpec>,
    /// Radicands `d` of declared extensions `ℚ(√d)`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extensions: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parametrization: Option<ParamSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expansion: Option<ExpansionSpec>,
}

/// A validated specification with its spectral data.
#[derive(Clone, Debug)]
pub struct Curve {
    pub spec: CurveSpec,
    pub data: SpectralData,
    pub param: Option<ParamCurve>,
}

fn parse_int(s: &str, field: &str) -> Result<Q> {
    let n = BigInt::from_str(s.trim()).map_err(|_| anyhow!("{field}: {s:?} is not an integer"))?;
    Ok(Q::from_integer(n))
}

fn parse_poly(c: &[String], field: &str) -> Result<Poly<Q>> {
    let coeffs = c
        .iter()
        .enumerate()
        .map(|(i, s)| parse_int(s, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Poly::new(coeffs))
}

impl RatSpec {
    pub fn to_ratfunc(&self, field: &str) -> Result<RatFunc<Q>> {
        if self.num.is_empty() || self.den.is_empty() {
            bail!("{field}: coefficient arrays must be nonempty");
        }
        let n = parse_poly(&self.num, &format!("{field}.num"))?;
        let d = parse_poly(&self.den, &format!("{field}.den"))?;
        if d.is_zero() {
            bail!("{field}: zero denominator");
        }
        Ok(RatFunc::new(n, d)?)
    }

    /// Integer form of `f` with coprime, content-free coefficient arrays.
    pub fn from_ratfunc(f: &RatFunc<Q>) -> Self {
        let mut l = BigInt::one();
        for c in f.num().coeffs().iter().chain(f.den().coeffs()) {
            l = l.lcm(c.denom());
        }
        let ints = |p: &Poly<Q>| -> Vec<BigInt> {
            p.coeffs()
                .iter()
                .map(|c| (c * Q::from_integer(l.clone())).to_integer())
                .collect()
        };
        let (mut n, mut d) = (ints(f.num()), ints(f.den()));
        let mut g = BigInt::zero();
        for c in n.iter().chain(&d) {
            g = g.gcd(c);
        }
        if d.last().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        if !g.is_zero() {
            n.iter_mut().for_each(|c| *c = &*c / &g);
            d.iter_mut().for_each(|c| *c = &*c / &g);
        }
        if n.is_empty() {
            n.push(BigInt::zero());
        }
        let s = |v: Vec<BigInt>| v.into_iter().map(|c| c.to_string()).collect();
        RatSpec { num: s(n), den: s(d) }
    }
}

pub fn parse_curve_spec(text: &str) -> Result<Curve> {
    let spec: CurveSpec = serde_json::from_str(text).context("malformed curve spec")?;
    validate(spec)
}

pub fn validate(spec: CurveSpec) -> Result<Curve> {
    let data = match (&spec.higgs, &spec.a1, &spec.a2) {
        (Some(m), None, None) => {
            let e = |i: usize, j: usize| m[i][j].to_ratfunc(&format!("higgs[{i}][{j}]"));
            SpectralData::from_higgs([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])?
        }
        (None, Some(a1), Some(a2)) => SpectralData::new(a1.to_ratfunc("a1")?, a2.to_ratfunc("a2")?)?,
        (Some(_), _, _) => bail!("give either higgs or a1/a2, not both"),
        _ => bail!("missing coefficients: give higgs, or both a1 and a2"),
    };
    for (i, d) in spec.extensions.iter().enumerate() {
        let v = parse_q(d).ok_or_else(|| anyhow!("extensions[{i}]: {d:?} is not a rational"))?;
        QuadTower::new(v).with_context(|| format!("extensions[{i}]"))?;
    }
    let param = match &spec.parametrization {
        None => None,
        Some(p) => {
            let norm = parse_q(&p.normalization)
                .ok_or_else(|| anyhow!("parametrization.normalization: {:?} is not a rational", p.normalization))?;
            let c = build_curve(
                p.x.to_ratfunc("parametrization.x")?,
                p.y.to_ratfunc("parametrization.y")?,
                p.sigma.to_ratfunc("parametrization.sigma")?,
                norm,
            )
            .context("parametrization")?;
            if !c.solves(&data)? {
                bail!("parametrization: (x(t), y(t)) does not lie on the spectral curve");
            }
            Some(c)
        }
    };
    if let Some(e) = &spec.expansion {
        if let Some(p) = &e.place {
            parse_place(p).context("expansion.place")?;
        }
        if let Some(b) = &e.branch {
            Branch::from_str(b).context("expansion.branch")?;
        }
    }
    Ok(Curve { spec, data, param })
}

pub fn parse_place(s: &str) -> Result<Point<Q>> {
    match s.trim() {
        "inf" | "infinity" => Ok(Point::Infinity),
        t => parse_q(t)
            .map(Point::Finite)
            .ok_or_else(|| anyhow!("place {s:?} is neither a rational nor inf")),
    }
}

fn default_expansion(name: &str) -> ExpansionSpec {
    let (place, branch) = match name {
        "airy" | "airy-param" => ("inf", "minus"),
        "gauss" => ("0", "plus"),
        _ => ("inf", "plus"),
    };
    ExpansionSpec {
        place: Some(place.into()),
        branch: Some(branch.into()),
        order: None,
        depth: None,
    }
}

/// The registry entry for a built-in name.
pub fn builtin_spec(name: &str) -> Option<CurveSpec> {
    let m = higgs_matrix(name)?;
    let entry = |i: usize, j: usize| RatSpec::from_ratfunc(&m[i][j]);
    let parametrization = param_curve(name).map(|c| ParamSpec {
        x: RatSpec::from_ratfunc(&c.x),
        y: RatSpec::from_ratfunc(&c.y),
        sigma: RatSpec::from_ratfunc(&c.sigma),
        normalization: qcurve::algebra::q_str(&c.normalization),
    });
    Some(CurveSpec {
        name: name.to_string(),
        higgs: Some([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]),
        a1: None,
        a2: None,
        extensions: if name == "gauss" { vec!["3".into()] } else { Vec::new() },
        parametrization,
        expansion: Some(default_expansion(name)),
    })
}

/// A built-in name or a path to a JSON spec file.
pub fn load_curve(arg: &str) -> Result<Curve> {
    if let Some(spec) = builtin_spec(arg) {
        return validate(spec);
    }
    let text = std::fs::read_to_string(arg).with_context(|| {
        format!(
            "{arg:?} is neither a built-in curve ({}) nor a readable file",
            BUILTINS.join(", ")
        )
    })?;
    parse_curve_spec(&text).with_context(|| format!("in {arg}"))
}

/// `a₁² / 4 − a₂` evaluated at `x`, or `None` at a pole.
pub fn discriminant_at(data: &SpectralData, x: &Q) -> Option<(Q, Q)> {
    let a1 = data.a1.f.eval(x).ok()?;
    let a2 = data.a2.f.eval(x).ok()?;
    let d = a1.times(&a1).times(&Q::new(1.into(), 4.into())).minus(&a2);
    Some((a1, d))
}
