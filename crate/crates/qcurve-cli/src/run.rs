//! Subcommand implementations producing reports.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use qcurve::algebra::{q_str, Point, RatFunc, Q};
use qcurve::checks::{self, CheckResult, SuiteResult};
use qcurve::lattice::{adjunction_genus, count_check, lattice_for, sigma_min_class};
use qcurve::par::Exec;
use qcurve::spectral::{genus_report, poly_str, quantum_operator, rat_str};
use qcurve::toprec::{self, is_symmetric};
use qcurve::wkb::{assemble_wavefunction, solve, verify_operator, Branch, WkbConfig};

use crate::report::*;
use crate::spec::{builtin_spec, discriminant_at, parse_place, validate, Curve};

pub const MAX_ORDER: i64 = 64;
pub const MAX_DEPTH: usize = 10;
pub const MAX_LEVEL: usize = 6;

/// Flags shared by the subcommands; `None` falls back to the spec.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub order: Option<i64>,
    pub depth: Option<usize>,
    pub branch: Option<String>,
    pub place: Option<String>,
    pub exec: Exec,
}

fn report(command: &str, curve: &str) -> Report {
    Report {
        command: command.into(),
        curve: curve.into(),
        analysis: None,
        lattice: None,
        wkb: None,
        toprec: None,
        verification: Vec::new(),
        passed: true,
        millis: None,
    }
}

pub fn run_analyze(c: &Curve) -> Result<Report> {
    let r = genus_report(&c.data, 0)?;
    let l = lattice_for(&c.data, &r);
    let s = sigma_min_class(&l, r.a);
    let cc = count_check(&l, &s);
    let adj = adjunction_genus(&l, &s);
    let lattice = LatticeReport {
        adjunction_genus: adj,
        count_genus: cc.genus,
        count_a: cc.a,
        n0: cc.n0,
        n_infinity: cc.n_infinity,
        passed: adj == r.p_g && cc.genus == r.p_g && cc.a == r.a,
    };
    let analysis = Analysis {
        a1: rat_str(&c.data.a1.f),
        a2: rat_str(&c.data.a2.f),
        quantum_curve: quantum_operator(&c.data).to_string(),
        affine_equation: r.affine_equation.clone().map(|p| poly_strings(&p)),
        discriminant: r
            .discriminant
            .entries
            .iter()
            .map(|(p, m)| DivisorEntry {
                place: p.to_string(),
                degree: p.degree(),
                multiplicity: *m,
            })
            .collect(),
        delta: r.delta,
        a: r.a,
        ns_class: r.ns_class_str(),
        p_a: r.p_a,
        p_g: r.p_g,
        chart: r.chart.c.clone().map(|p| poly_strings(&p)),
        chart_singular: r.chart_singular,
        profiles: r
            .profiles
            .iter()
            .map(|p| ProfileReport {
                place: p.place.to_string(),
                k: p.k,
                l: p.l,
                n: p.n,
                r: q_str(&p.r),
                class: p.quantum_class.to_string(),
                blowups_min: p.blowups_min,
                blowups_full: p.blowups_full,
            })
            .collect(),
    };
    let mut out = report("analyze", &c.spec.name);
    out.passed = lattice.passed && r.delta % 2 == 0 && r.p_g <= r.p_a;
    out.analysis = Some(analysis);
    out.lattice = Some(lattice);
    Ok(out)
}

struct WkbRequest {
    place: Point<Q>,
    place_str: String,
    branch: Branch,
    order: i64,
    depth: usize,
}

fn wkb_request(c: &Curve, o: &Options) -> Result<WkbRequest> {
    let e = c.spec.expansion.clone().unwrap_or_default();
    let place_str = o.place.clone().or(e.place).unwrap_or_else(|| "inf".into());
    let branch_str = o.branch.clone().or(e.branch).unwrap_or_else(|| "plus".into());
    let order = o.order.or(e.order).unwrap_or(8);
    let depth = o.depth.or(e.depth).unwrap_or(2);
    if !(0..=MAX_ORDER).contains(&order) {
        bail!("--order must lie in 0..={MAX_ORDER}, got {order}");
    }
    if depth > MAX_DEPTH {
        bail!("--depth must be at most {MAX_DEPTH}, got {depth}");
    }
    Ok(WkbRequest {
        place: parse_place(&place_str)?,
        place_str,
        branch: Branch::from_str(&branch_str)?,
        order,
        depth,
    })
}

pub fn run_wkb(c: &Curve, o: &Options) -> Result<Report> {
    let req = wkb_request(c, o)?;
    let cfg = WkbConfig::new(
        c.data.a1.f.clone(),
        c.data.a2.f.clone(),
        req.place.clone(),
        req.branch,
        req.order,
        req.depth,
    );
    let st = solve(&cfg).context("WKB recursion")?;
    let residual_zero = st.residuals()?.iter().all(|r| r.is_zero());
    let s =
        st.s.iter()
            .enumerate()
            .map(|(m, ls)| LogSeriesReport {
                m,
                log: Elem::from(&ls.lambda),
                series: series_map(&ls.body.truncate(req.order + 1)),
            })
            .collect();
    let wavefunction = if req.depth >= 1 {
        let w = assemble_wavefunction(&st, req.order, req.depth - 1)?;
        let r = verify_operator(&cfg, &w)?;
        Some(WaveReport {
            hbar_order: w.order_h,
            log_exponent: Elem::from(&w.log_exponent),
            principal: series_map(&w.principal),
            body: series_map(&w.body),
            residual_passed: r.passed,
        })
    } else {
        None
    };
    let mut out = report("wkb", &c.spec.name);
    out.passed = residual_zero && wavefunction.as_ref().is_none_or(|w| w.residual_passed);
    out.wkb = Some(WkbReport {
        place: req.place_str,
        branch: format!("{:?}", req.branch).to_lowercase(),
        ramification: cfg.e,
        order: req.order,
        depth: req.depth,
        s,
        residual_zero,
        wavefunction,
    });
    Ok(out)
}

/// `--depth` is the largest `2g − 2 + n` computed.
pub fn run_toprec(c: &Curve, o: &Options) -> Result<Report> {
    let Some(curve) = &c.param else {
        bail!("curve {:?} has no parametrization block", c.spec.name);
    };
    let level = o.depth.unwrap_or(3);
    if level == 0 || level > MAX_LEVEL {
        bail!("--depth must lie in 1..={MAX_LEVEL} for toprec, got {level}");
    }
    let t = toprec::build_table(curve, level, o.exec)?;
    let symmetric = t.w.values().all(is_symmetric);
    let mut out = report("toprec", &c.spec.name);
    out.passed = symmetric;
    out.toprec = Some(ToprecReport {
        x: t_str(&curve.x),
        y: t_str(&curve.y),
        sigma: t_str(&curve.sigma),
        normalization: q_str(&curve.normalization),
        max_level: level,
        w: t.w.iter().map(|(&(g, n), p)| entry(g, n, p)).collect(),
        f: t.f.iter().map(|(&(g, n), p)| entry(g, n, p)).collect(),
        symmetric,
    });
    Ok(out)
}

fn t_str(r: &RatFunc<Q>) -> String {
    if r.is_poly() {
        poly_str(r.num(), "t")
    } else {
        format!("({})/({})", poly_str(r.num(), "t"), poly_str(r.den(), "t"))
    }
}

fn suite_report(s: SuiteResult, timing: bool) -> SuiteReport {
    SuiteReport {
        name: s.name.clone(),
        passed: s.passed(),
        checks: s
            .checks
            .into_iter()
            .map(|c: CheckResult| CheckReport {
                name: c.name,
                passed: c.passed,
                detail: c.detail,
            })
            .collect(),
        millis: timing.then(|| (s.seconds * 1000.0).round() as u64),
    }
}

fn cross_suites(curve: Option<&Curve>, o: &Options) -> Result<Vec<SuiteResult>> {
    let depth = o.depth.unwrap_or(6);
    if !(2..=MAX_LEVEL + 1).contains(&depth) {
        bail!(
            "--depth must lie in 2..={} for the cross suite, got {depth}",
            MAX_LEVEL + 1
        );
    }
    let order = o.order.unwrap_or(16);
    if !(0..=MAX_ORDER).contains(&order) {
        bail!("--order must lie in 0..={MAX_ORDER}, got {order}");
    }
    let curves = match curve {
        Some(c) => vec![c.clone()],
        None => vec![
            validate(builtin_spec("airy").expect("built-in"))?,
            validate(builtin_spec("hermite").expect("built-in"))?,
        ],
    };
    let mut checks = Vec::new();
    for c in &curves {
        let Some(param) = &c.param else {
            bail!("curve {:?} has no parametrization block", c.spec.name);
        };
        let branch = wkb_request(c, o)?.branch;
        checks.extend(checks::cross_suite_for(
            &c.spec.name,
            param,
            &c.data,
            branch,
            depth - 1,
            order,
            o.exec,
        ));
    }
    Ok(vec![SuiteResult {
        name: "cross".into(),
        checks,
        seconds: 0.0,
    }])
}

/// Runs a named suite: `table1`, `cross`, `oracles` or `all`.
pub fn run_verify(suite: &str, curve: Option<&Curve>, o: &Options, timing: bool) -> Result<Report> {
    let exec = o.exec;
    let table1 = || {
        vec![
            checks::timed("table1", checks::table1_suite),
            checks::timed("blowups", checks::blowup_suite),
            checks::timed("lattice", || checks::lattice_suite(3, 50)),
        ]
    };
    let cross = || -> Result<Vec<SuiteResult>> {
        let start = Instant::now();
        let mut v = cross_suites(curve, o)?;
        v[0].seconds = start.elapsed().as_secs_f64();
        Ok(v)
    };
    let oracles = || {
        vec![
            checks::timed("wkb", checks::wkb_suite),
            checks::timed("oracles", || checks::oracle_suite(exec)),
            checks::timed("gauss", checks::gauss_suite),
        ]
    };
    let suites = match suite {
        "table1" => table1(),
        "cross" => cross()?,
        "oracles" => oracles(),
        "all" => {
            let mut v = table1();
            v.extend(cross()?);
            v.extend(oracles());
            v.push(checks::timed("properties", || checks::property_suite(5, 500, exec)));
            v
        }
        other => bail!("unknown suite {other:?}; expected table1, cross, oracles or all"),
    };
    let mut out = report("verify", curve.map_or("builtin", |c| c.spec.name.as_str()));
    out.verification = suites.into_iter().map(|s| suite_report(s, timing)).collect();
    out.passed = out.verification.iter().all(|s| s.passed);
    Ok(out)
}

/// CSV `x,y,branch` of the real points of `y² + a₁y + a₂ = 0` on a grid.
pub fn emit_plotdata(c: &Curve, xmin: f64, xmax: f64, samples: usize) -> Result<String> {
    if !(xmin.is_finite() && xmax.is_finite()) || xmin >= xmax {
        bail!("need finite xmin < xmax");
    }
    if samples < 2 {
        bail!("need at least 2 samples");
    }
    let mut out = String::from("x,y,branch\n");
    for i in 0..samples {
        let x = xmin + (xmax - xmin) * i as f64 / (samples - 1) as f64;
        let Some(xq) = Q::from_float(x) else { continue };
        let Some((a1, d)) = discriminant_at(&c.data, &xq) else {
            continue;
        };
        let (a1, d) = (to_f64(&a1), to_f64(&d));
        if d < 0.0 {
            continue;
        }
        let r = d.sqrt();
        for (y, label) in [(-a1 / 2.0 + r, "plus"), (-a1 / 2.0 - r, "minus")] {
            writeln!(out, "{x},{y},{label}").expect("writing to a string");
        }
    }
    Ok(out)
}

fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
