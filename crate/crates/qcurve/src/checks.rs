//! Verification suites shared by the acceptance runner and the CLI.
//!
//! Every check is exact: a failure carries the first mismatching value.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    partial_fractions, q, residue_at, series_expand, Field, FieldElement, Point, Poly, Quad, QuadTower, RatFunc,
    TruncSeries, Q,
};
use crate::curves::{spectral_data, TABLE1};
use crate::lattice::{adjunction_genus, build_lattice, count_check, lattice_for, sigma_min_class, Chain};
use crate::oracles::{
    airy_closed_free_energy, catalan_closed_form, compositions, enumerate_cellular, gauss_product_formula, Dvv,
};
use crate::par::Exec;
use crate::spectral::{
    coarse_divisor_of, delta_invariant, discriminant, genus_report, ChartEquation, Place, QuantumClass, SpectralData,
};
use crate::toprec::{self, TrTable};
use crate::wkb::{assemble_wavefunction, solve, verify_operator, Branch, WkbConfig, WkbState};
use crate::Result;

type Fe = FieldElement;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
    fn from_result(name: impl Into<String>, r: Result<Option<String>>) -> Self {
        match r {
            Ok(None) => CheckResult::new(name, true, "ok"),
            Ok(Some(why)) => CheckResult::new(name, false, why),
            Err(e) => CheckResult::new(name, false, format!("error: {e}")),
        }
    }
}

/// A suite of checks with its wall time.
#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: String,
    pub checks: Vec<CheckResult>,
    pub seconds: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn timed(name: &str, f: impl FnOnce() -> Vec<CheckResult>) -> SuiteResult {
    let t = Instant::now();
    let checks = f();
    SuiteResult {
        name: name.to_string(),
        checks,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn mismatch<T: std::fmt::Debug + PartialEq>(what: &str, got: &T, want: &T) -> Option<String> {
    (got != want).then(|| format!("{what}: got {got:?}, expected {want:?}"))
}

fn first_failure(items: impl IntoIterator<Item = Option<String>>) -> Option<String> {
    items.into_iter().flatten().next()
}

fn polys(c: [&[i64]; 3]) -> [Poly<Q>; 3] {
    [Poly::from_ints(c[0]), Poly::from_ints(c[1]), Poly::from_ints(c[2])]
}

/// A pole place (`None` for infinity) with `None` for regular or `Some((p, q))`
/// for irregular class `p/q`.
pub type PlaceClass = (Option<i64>, Option<(i64, i64)>);

/// The expected content of one row of the standard example table.
pub struct Table1Row {
    pub name: &'static str,
    /// `[c₀, c₁, c₂]` of `c₂y² + c₁y + c₀ = 0`.
    pub affine: [&'static [i64]; 3],
    /// Chart equation at `C_∞`, or `None` when the row only states smoothness.
    pub chart: Option<[&'static [i64]; 3]>,
    pub singular: bool,
    pub a: i64,
    pub p_a: i64,
    pub p_g: i64,
    pub classes: &'static [PlaceClass],
}

pub const TABLE1_ROWS: [Table1Row; 5] = [
    Table1Row {
        name: "airy",
        affine: [&[0, -1], &[], &[1]],
        chart: Some([&[0, 0, 0, 0, 0, -1], &[], &[1]]),
        singular: true,
        a: 5,
        p_a: 2,
        p_g: 0,
        classes: &[(None, Some((3, 2)))],
    },
    Table1Row {
        name: "hermite",
        affine: [&[1], &[0, 1], &[1]],
        chart: Some([&[0, 0, 0, 0, 1], &[0, -1], &[1]]),
        singular: true,
        a: 4,
        p_a: 1,
        p_g: 0,
        classes: &[(None, Some((2, 1)))],
    },
    Table1Row {
        name: "gauss",
        affine: [&[1], &[-4, 8], &[0, -4, 4]],
        chart: Some([&[0, 0, 4, -4], &[0, -8, 4], &[1]]),
        singular: true,
        a: 4,
        p_a: 1,
        p_g: 0,
        classes: &[(Some(0), None), (Some(1), None), (None, None)],
    },
    Table1Row {
        name: "row4",
        affine: [&[1], &[1, 1], &[1, 1]],
        chart: Some([&[0, 0, 0, 1, 1], &[0, -1, -1], &[1]]),
        singular: true,
        a: 4,
        p_a: 1,
        p_g: 0,
        classes: &[(Some(-1), None), (None, Some((1, 1)))],
    },
    Table1Row {
        name: "row5",
        affine: [&[-1], &[0, 0, 2], &[-1, 0, 1]],
        chart: None,
        singular: false,
        a: 4,
        p_a: 1,
        p_g: 1,
        classes: &[(Some(-1), None), (Some(1), None), (None, Some((1, 1)))],
    },
];

fn check_row(row: &Table1Row) -> Result<Option<String>> {
    let sd = spectral_data(row.name).expect("built-in");
    let r = genus_report(&sd, 0)?;
    let classes: Vec<(Place, QuantumClass)> = row
        .classes
        .iter()
        .map(|(p, c)| {
            let place = p.map_or(Place::Infinity, |x| Place::at(q(x, 1)));
            let class = c.map_or(QuantumClass::Regular, |(a, b)| QuantumClass::Irregular(q(a, b)));
            (place, class)
        })
        .collect();
    let got: Vec<(Place, QuantumClass)> = r
        .profiles
        .iter()
        .map(|p| (p.place.clone(), p.quantum_class.clone()))
        .collect();
    Ok(first_failure([
        mismatch("affine equation", &r.affine_equation, &polys(row.affine)),
        row.chart
            .and_then(|c| mismatch("chart equation", &r.chart, &ChartEquation { c: polys(c) })),
        mismatch("singular local model", &r.chart_singular, &row.singular),
        mismatch("NS class", &r.ns_class, &(2, row.a)),
        mismatch("p_a", &r.p_a, &row.p_a),
        mismatch("p_g", &r.p_g, &row.p_g),
        mismatch("singularity classes", &got, &classes),
    ]))
}

/// Curve equations, NS classes, genera and quantum singularity classes of
/// the five example Higgs fields.
pub fn table1_suite() -> Vec<CheckResult> {
    TABLE1_ROWS
        .iter()
        .map(|row| CheckResult::from_result(format!("table1 {}", row.name), check_row(row)))
        .collect()
}

/// Blow-up counts at the poles of the Airy, Hermite and Gauss curves.
pub fn blowup_suite() -> Vec<CheckResult> {
    let cases: [(&str, Option<i64>, Option<i64>, i64); 5] = [
        ("airy", None, None, 3),
        ("hermite", None, Some(1), 3),
        ("gauss", Some(0), None, 1),
        ("gauss", Some(1), None, 1),
        ("gauss", None, None, 1),
    ];
    cases
        .iter()
        .map(|&(name, at, min, full)| {
            let place = at.map_or(Place::Infinity, |x| Place::at(q(x, 1)));
            let label = format!("blowups {name} at {place}");
            let r = (|| -> Result<Option<String>> {
                let sd = spectral_data(name).expect("built-in");
                let rep = genus_report(&sd, 0)?;
                let p = rep.profile(&place).expect("pole place");
                Ok(first_failure([
                    min.and_then(|m| mismatch("minimal", &p.blowups_min, &m)),
                    mismatch("full", &p.blowups_full, &full),
                ]))
            })();
            CheckResult::from_result(label, r)
        })
        .collect()
}

/// Adjunction genus of `Σ_min` against the genus and `a` count formulas, on
/// the examples and on random chain configurations with nonnegative
/// intersection numbers.
pub fn lattice_suite(seed: u64, random_cases: usize) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for name in TABLE1 {
        let r = (|| -> Result<Option<String>> {
            let sd = spectral_data(name).expect("built-in");
            let rep = genus_report(&sd, 0)?;
            let l = lattice_for(&sd, &rep);
            let s = sigma_min_class(&l, rep.a);
            let c = count_check(&l, &s);
            Ok(first_failure([
                mismatch("adjunction genus", &adjunction_genus(&l, &s), &rep.p_g),
                mismatch("count genus", &c.genus, &rep.p_g),
                mismatch("count a", &c.a, &rep.a),
            ]))
        })();
        out.push(CheckResult::from_result(format!("lattice {name}"), r));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut bad = None;
    while done < random_cases {
        let g = rng.gen_range(0..3);
        let on: Vec<i64> = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(1..4)).collect();
        let off: Vec<Chain> = (0..rng.gen_range(0..4))
            .map(|_| Chain {
                len: rng.gen_range(1..4),
                on_c_infinity: rng.gen_bool(0.5),
            })
            .collect();
        let a = rng.gen_range(1..12);
        let l = build_lattice(g, &on, &off);
        let s = sigma_min_class(&l, a);
        let (n0, ninf) = (l.pair(&s, &l.c0()), l.pair(&s, &l.c_infinity()));
        if n0 < 0 || ninf < 0 || (n0 + ninf) % 2 != 0 {
            continue;
        }
        let c = count_check(&l, &s);
        let adj = adjunction_genus(&l, &s);
        if adj != c.genus || c.a != a {
            bad.get_or_insert(format!(
                "g={g} on={on:?} off={off:?} a={a}: adjunction {adj}, counts {c:?}"
            ));
        }
        done += 1;
    }
    out.push(CheckResult::new(
        format!("lattice {random_cases} random configurations"),
        bad.is_none(),
        bad.unwrap_or_else(|| "ok".into()),
    ));
    out
}

fn config(name: &str, place: Point<Q>, branch: Branch, order: i64, depth: usize) -> WkbConfig {
    let sd = spectral_data(name).expect("built-in");
    WkbConfig::new(sd.a1.f.clone(), sd.a2.f.clone(), place, branch, order, depth)
}

fn fq(n: i64, d: i64) -> Fe {
    Fe::Q(q(n, d))
}

fn series_terms(s: &TruncSeries<Fe>) -> Vec<(i64, Fe)> {
    s.terms().map(|(k, c)| (k, c.clone())).collect()
}

fn compare_coeffs(what: &str, s: &TruncSeries<Fe>, from: i64, want: &[Fe]) -> Option<String> {
    for (i, w) in want.iter().enumerate() {
        let k = from + i as i64;
        let got = s.coeff(k);
        if got.as_ref() != Some(w) {
            return Some(format!("{what} at degree {k}: got {got:?}, expected {w}"));
        }
    }
    None
}

/// `Σ C_m ξ^{2m+1}`, the branch `z(ξ)` of the Catalan curve at `x = ∞`.
fn catalan_z(order: i64) -> TruncSeries<Q> {
    let mut c = vec![q(0, 1); order as usize + 1];
    let mut cat = q(1, 1);
    let mut m = 0i64;
    while 2 * m < order {
        c[(2 * m + 1) as usize] = cat.clone();
        cat *= q(2 * (2 * m + 1), m + 2);
        m += 1;
    }
    TruncSeries::new(1, 0, c, order + 1)
}

fn wkb_airy() -> Result<Option<String>> {
    let st = solve(&config("airy", Point::Infinity, Branch::Minus, 9, 2))?;
    // τ² = 1/x
    Ok(first_failure([
        mismatch("S0", &series_terms(&st.s[0].body), &vec![(-3, fq(-2, 3))]),
        mismatch("S0 log", &st.s[0].lambda, &Fe::zero()),
        mismatch("S1 log", &st.s[1].lambda, &fq(1, 4)),
        mismatch("S1 body", &series_terms(&st.s[1].body), &vec![]),
        mismatch("S2", &series_terms(&st.s[2].body), &vec![(3, fq(-5, 48))]),
    ]))
}

fn wkb_catalan() -> Result<Option<String>> {
    let n = 14;
    let st = solve(&config("hermite", Point::Infinity, Branch::Plus, n, 1))?;
    let z = catalan_z(n + 2);
    let zr = z.shift(-1);
    let s0 = z.mul(&z).scale(&q(-1, 2)).add(&zr.log()?);
    let one = TruncSeries::constant(1, q(1, 1), n + 3);
    let s1 = one.sub(&z.mul(&z)).log()?.scale(&q(-1, 2));
    let want0: Vec<Fe> = (0..=n).map(|k| Fe::Q(s0.coeff(k).unwrap())).collect();
    let want1: Vec<Fe> = (0..=n).map(|k| Fe::Q(s1.coeff(k).unwrap())).collect();
    Ok(first_failure([
        mismatch("S0 log", &st.s[0].lambda, &fq(1, 1)),
        compare_coeffs("S0", &st.s[0].body, 0, &want0),
        mismatch("S1 log", &st.s[1].lambda, &Fe::zero()),
        compare_coeffs("S1", &st.s[1].body, 0, &want1),
    ]))
}

fn wkb_gauss() -> Result<Option<String>> {
    let st = solve(&config("gauss", Point::Finite(q(0, 1)), Branch::Plus, 7, 2))?;
    let s1 = [
        (0, 1),
        (0, 1),
        (-7, 32),
        (-53, 96),
        (-1075, 1024),
        (-4319, 2560),
        (-28319, 12288),
        (-72109, 28672),
    ];
    let s2 = [
        (0, 1),
        (0, 1),
        (7, 32),
        (113, 96),
        (1821, 512),
        (1269, 160),
        (56151, 4096),
        (487323, 28672),
    ];
    let want1: Vec<Fe> = s1.iter().map(|&(a, b)| fq(a, b)).collect();
    let want2: Vec<Fe> = s2.iter().map(|&(a, b)| fq(a, b)).collect();
    // S₀ in the ℚ(√3) form (a + b√3)·c / (32·(2√3 − 3)^k)
    let t = QuadTower::new(q(3, 1))?;
    let base = t.elem(q(-3, 1), q(2, 1));
    let forms: [(i64, i64, i64, i64, i64); 6] = [
        (2, -21, -7, 4, 32),
        (3, 23, -45, 26, 32),
        (4, -2547, -97, 56, 1024),
        (5, 7281, -627, 362, 2560),
        (6, -38115, -1351, 780, 4096),
        (7, 265869, -8733, 5042, 28672),
    ];
    let mut want0 = vec![Fe::zero(), fq(1, 4)];
    for (k, c, a, b, d) in forms {
        let num: Quad<Q> = t.elem(q(a, 1), q(b, 1)).times(&t.base(q(c, 1)));
        let den = base.pow(k as u32).times(&t.base(q(d, 1)));
        let v = num.times(&den.inv().expect("nonzero")).descend();
        match v {
            Some(v) => want0.push(Fe::Q(v)),
            None => return Ok(Some(format!("S0 coefficient of x^{k} does not descend to Q"))),
        }
    }
    Ok(first_failure([
        compare_coeffs("S0", &st.s[0].body, 0, &want0),
        compare_coeffs("S1", &st.s[1].body, 0, &want1),
        compare_coeffs("S2", &st.s[2].body, 0, &want2),
    ]))
}

/// Golden WKB series for Airy, Catalan and Gauss.
pub fn wkb_suite() -> Vec<CheckResult> {
    vec![
        CheckResult::from_result("wkb airy S0 S1 S2", wkb_airy()),
        CheckResult::from_result("wkb catalan S0 S1", wkb_catalan()),
        CheckResult::from_result("wkb gauss S0 S1 S2 through x^7", wkb_gauss()),
    ]
}

/// WKB configuration paired with each parametrized curve.
pub fn wkb_partner(name: &str) -> Option<(&'static str, Branch)> {
    match name {
        "airy" | "airy-param" => Some(("airy", Branch::Minus)),
        "hermite" | "catalan" | "catalan-param" => Some(("hermite", Branch::Plus)),
        _ => None,
    }
}

/// Principal specialization of the free energies against `S_2 … S_{level+1}`
/// through `τ^order`.
pub fn central_identity(table: &TrTable, st: &WkbState, order: i64) -> Result<Option<String>> {
    let tt = toprec::matching_inverse(&table.curve, st, &Point::Infinity, order + 4)?;
    for m in 2..=(table.max_level + 1).min(st.depth()) {
        if !Field::is_zero(&st.s[m].lambda) {
            return Ok(Some(format!("S_{m} has a logarithmic term")));
        }
        let p = toprec::principal_specialize(table, m, &tt)?;
        for k in st.s[m].body.valuation().min(p.valuation())..=order {
            let a = st.s[m].body.coeff(k);
            let b = p.coeff(k).map(Fe::Q);
            if a != b {
                return Ok(Some(format!("S_{m} at tau^{k}: wkb {a:?}, recursion {b:?}")));
            }
        }
    }
    Ok(None)
}

fn central_for(name: &str, level: usize, order: i64, exec: Exec) -> Result<Option<String>> {
    let c = toprec::param_curve(name).expect("built-in");
    let (wkb, branch) = wkb_partner(name).expect("partner");
    let table = toprec::build_table(&c, level, exec)?;
    let st = solve(&config(wkb, Point::Infinity, branch, order, level + 1))?;
    central_identity(&table, &st, order)
}

/// Differential against integral recursion at seeded random points for
/// every entry with `2g − 2 + n ∈ {2, 3}`.
pub fn diff_recursion_suite(name: &str, table: &TrTable, seed: u64, points: usize) -> CheckResult {
    let mut rng = toprec::seeded_rng(seed);
    let keys: Vec<(usize, usize)> = table
        .w
        .keys()
        .cloned()
        .filter(|&(g, n)| matches!(2 * g + n, 4 | 5))
        .collect();
    let mut bad = None;
    for &(g, n) in &keys {
        for _ in 0..points {
            let pt = toprec::curve_points(&table.curve, &mut rng, n);
            match toprec::diff_recursion_check(table, g, n, &pt) {
                Ok(d) if d.holds() => {}
                Ok(d) => {
                    bad.get_or_insert(format!("({g},{n}) at {pt:?}: {d:?}"));
                }
                Err(e) => {
                    bad.get_or_insert(format!("({g},{n}): {e}"));
                }
            }
        }
    }
    CheckResult::new(
        format!(
            "{name} differential = integral recursion ({} entries x {points} points)",
            keys.len()
        ),
        bad.is_none() && !keys.is_empty(),
        bad.unwrap_or_else(|| {
            if keys.is_empty() {
                "no entries".into()
            } else {
                "ok".into()
            }
        }),
    )
}

/// Central identity and differential recursion for one parametrized curve
/// against the WKB state of `sd` at infinity on `branch`.
pub fn cross_suite_for(
    name: &str,
    curve: &toprec::ParamCurve,
    sd: &SpectralData,
    branch: Branch,
    level: usize,
    order: i64,
    exec: Exec,
) -> Vec<CheckResult> {
    let r = (|| -> Result<(TrTable, Option<String>)> {
        if !curve.solves(sd)? {
            return Err(crate::Error::Precondition(
                "the parametrization does not solve the spectral curve".into(),
            ));
        }
        let table = toprec::build_table(curve, level, exec)?;
        let cfg = WkbConfig::new(
            sd.a1.f.clone(),
            sd.a2.f.clone(),
            Point::Infinity,
            branch,
            order,
            level + 1,
        );
        let st = solve(&cfg)?;
        let verdict = central_identity(&table, &st, order)?;
        Ok((table, verdict))
    })();
    let label = format!("{name} S_m = principal specialization, m <= {}", level + 1);
    match r {
        Ok((table, verdict)) => vec![
            CheckResult::from_result(label, Ok(verdict)),
            diff_recursion_suite(name, &table, 11, 4),
        ],
        Err(e) => vec![CheckResult::new(label, false, format!("error: {e}"))],
    }
}

/// `S_m` from WKB equals the principal specialization for `m ≤ level + 1`.
pub fn central_suite(level: usize, exec: Exec) -> Vec<CheckResult> {
    vec![
        CheckResult::from_result(
            format!("airy S_m = principal specialization, m <= {}", level + 1),
            central_for("airy", level, 20, exec),
        ),
        CheckResult::from_result(
            format!("catalan S_m = principal specialization, m <= {}", level + 1),
            central_for("catalan", level, 16, exec),
        ),
    ]
}

fn airy_dvv(level: usize, exec: Exec) -> Result<Option<String>> {
    let t = toprec::build_table(&toprec::airy_curve(), level, exec)?;
    let mut dvv = Dvv::new();
    for (&(g, n), f) in &t.f {
        let closed = airy_closed_free_energy(&mut dvv, g as i64, n);
        // u = x^{-1/2} = t/2
        let mut in_t = crate::algebra::MPoly::zero(n);
        for (k, v) in closed.terms() {
            let deg: i32 = k.iter().sum();
            in_t.add_term(k.clone(), v.times(&Field::pow(&q(1, 2), deg as u32)));
        }
        if *f != in_t {
            return Ok(Some(format!("F_{g},{n} differs from the intersection-number formula")));
        }
    }
    Ok(first_failure([
        mismatch("<tau_0^3>", &dvv.corr(0, &[0, 0, 0]), &q(1, 1)),
        mismatch("<tau_1>_1", &dvv.corr(1, &[1]), &q(1, 24)),
        mismatch("<tau_1 tau_0^3>", &dvv.corr(0, &[1, 0, 0, 0]), &q(1, 1)),
    ]))
}

fn catalan_cellular(level: usize, max_total: usize, exec: Exec) -> Result<Option<String>> {
    let c = toprec::catalan_curve();
    let t = toprec::build_table(&c, level, exec)?;
    let txi = toprec::local_inverse(&c, &Point::Infinity, 1, 1, max_total as i64 + 4)?;
    for (&(g, n), f) in &t.f {
        if n > max_total {
            continue;
        }
        let ex = toprec::expand_multi(f, &txi, max_total)?;
        if let Some(mu) = ex.keys().find(|mu| mu.contains(&0)) {
            return Ok(Some(format!("F_{g},{n} has a term {mu:?} with a zero exponent")));
        }
        for total in n..=max_total {
            for mu in compositions((total - n) as i64, n) {
                let mu: Vec<usize> = mu.iter().map(|&m| m as usize + 1).collect();
                let count = enumerate_cellular(g as i64, &mu)?;
                let prod: usize = mu.iter().product();
                let want = q(count as i64, prod as i64);
                let got = ex.get(&mu).cloned().unwrap_or_else(<Q as Field>::zero);
                if got != want {
                    return Ok(Some(format!("F_{g},{n} at mu={mu:?}: {got}, expected {want}")));
                }
            }
        }
    }
    Ok(None)
}

fn catalan_wavefunction() -> Result<Option<String>> {
    let cfg = config("hermite", Point::Infinity, Branch::Plus, 10, 5);
    let st = solve(&cfg)?;
    let w = assemble_wavefunction(&st, 10, 4)?;
    let mut want = Vec::new();
    for k in 0..=10usize {
        want.push(if k % 2 == 1 {
            Fe::zero()
        } else {
            Fe::from(catalan_closed_form(k / 2))
        });
    }
    let at_one: Vec<Option<Q>> = (0..=4)
        .map(|n| w.body.coeff(2 * n).and_then(|c| c.eval_hbar(&q(1, 1))))
        .collect();
    let expected: Vec<Option<Q>> = [1, 1, 3, 15, 105].iter().map(|&v| Some(q(v, 1))).collect();
    let r = verify_operator(&cfg, &w)?;
    Ok(first_failure([
        mismatch("log exponent", &w.log_exponent, &Fe::hbar().inv().expect("nonzero")),
        compare_coeffs("Psi", &w.body, 0, &want),
        mismatch("values at hbar = 1", &at_one, &expected),
        (!r.passed).then(|| format!("operator residual {r:?}")),
    ]))
}

/// Airy free energies against intersection numbers, Catalan free energies
/// against cellular graph counts and the Catalan wavefunction against its
/// closed form.
pub fn oracle_suite(exec: Exec) -> Vec<CheckResult> {
    vec![
        CheckResult::from_result("airy F_{g,n} = DVV formula, 2g-2+n <= 4", airy_dvv(4, exec)),
        CheckResult::from_result(
            "catalan F_{g,n} = cellular counts, sum mu <= 8",
            catalan_cellular(4, 8, exec),
        ),
        CheckResult::from_result("catalan wavefunction closed form through x^-10", catalan_wavefunction()),
    ]
}

/// `ℏ^k · r(ℏ)` as a power series in `ℏ` through `ℏ^order`.
fn hbar_numerator(r: &RatFunc<Q>, k: usize, order: i64) -> TruncSeries<Q> {
    let shifted = r.mul(&RatFunc::from_poly(Poly::monomial(q(1, 1), k)));
    series_expand(&shifted, &Point::Finite(q(0, 1)), order, 1)
}

fn gauss_wavefunction() -> Result<Option<String>> {
    let cfg = config("gauss", Point::Finite(q(0, 1)), Branch::Plus, 5, 2);
    let st = solve(&cfg)?;
    let w = assemble_wavefunction(&st, 5, 1)?;
    let denominators = [1i64, 4, 32, 384, 6144, 122880];
    for (k, &den) in denominators.iter().enumerate().skip(1) {
        let c = w
            .body
            .coeff(k as i64)
            .and_then(|c| c.as_hbar())
            .expect("coefficient in Q(hbar)");
        let a = hbar_numerator(&c, k, 3);
        let b = hbar_numerator(&gauss_product_formula(k), k, 3);
        for j in 0..=3 {
            if a.coeff(j) != b.coeff(j) {
                return Ok(Some(format!(
                    "x^{k} numerator at hbar^{j}: wkb {:?}, product {:?}",
                    a.coeff(j),
                    b.coeff(j)
                )));
            }
        }
        if a.coeff(0) != Some(q(1, den)) {
            return Ok(Some(format!("x^{k} leading numerator {:?}", a.coeff(0))));
        }
    }
    // displayed numerators, scaled by their denominators
    let shown: [(usize, [i64; 4]); 4] = [
        (2, [1, 7, -7, 7]),
        (3, [1, 21, 71, -191]),
        (4, [1, 42, 473, 598]),
        (5, [1, 70, 1585, 11410]),
    ];
    for (k, coeffs) in shown {
        let c = w
            .body
            .coeff(k as i64)
            .and_then(|c| c.as_hbar())
            .expect("coefficient in Q(hbar)");
        let a = hbar_numerator(&c, k, 3);
        for (j, &v) in coeffs.iter().enumerate() {
            if a.coeff(j as i64) != Some(q(v, denominators[k])) {
                return Ok(Some(format!("displayed x^{k} numerator differs at hbar^{j}")));
            }
        }
    }
    // the x² term is exactly (1 + 7ℏ − 7ℏ² + 7ℏ³)/(32ℏ²)
    let h = Fe::hbar();
    let num = fq(1, 1)
        .plus(&h.times(&fq(7, 1)))
        .minus(&h.pow(2).times(&fq(7, 1)))
        .plus(&h.pow(3).times(&fq(7, 1)));
    let x2 = num.times(&h.pow(2).times(&fq(32, 1)).inv().expect("nonzero"));
    // the product formula carries ℏ² in the x² denominator, not ℏ
    let hr = RatFunc::from_poly(Poly::x());
    let one = RatFunc::constant(q(1, 1));
    let plus = |a: i64| one.add(&hr.scale(&q(a, 1)));
    let correct = plus(8).divide(&hr.mul(&hr).mul(&plus(1)).scale(&q(32, 1)))?;
    let printed = plus(8).divide(&hr.mul(&plus(1)).scale(&q(32, 1)))?;
    let pi2 = gauss_product_formula(2);
    let r = verify_operator(&cfg, &w)?;
    Ok(first_failure([
        mismatch("x^2 coefficient", &w.body.coeff(2), &Some(x2)),
        mismatch("product formula x^2", &pi2, &correct),
        (pi2 == printed).then(|| "product formula matches the printed hbar power".to_string()),
        (!r.passed).then(|| format!("operator residual {r:?}")),
    ]))
}

/// The Gauss wavefunction against the hypergeometric product formula.
pub fn gauss_suite() -> Vec<CheckResult> {
    vec![CheckResult::from_result(
        "gauss wavefunction = product formula through x^5, hbar^3",
        gauss_wavefunction(),
    )]
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize, nonzero: bool) -> Poly<Q> {
    loop {
        let d = rng.gen_range(0..=max_deg);
        let c: Vec<Q> = (0..=d)
            .map(|_| q(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
            .collect();
        let p = Poly::new(c);
        if !nonzero || !p.is_zero() {
            return p;
        }
    }
}

fn random_ratfunc(rng: &mut ChaCha8Rng) -> RatFunc<Q> {
    let n = random_poly(rng, 3, false);
    let d = random_poly(rng, 2, true);
    RatFunc::new(n, d).expect("nonzero denominator")
}

fn random_spectral(rng: &mut ChaCha8Rng) -> SpectralData {
    loop {
        if let Ok(sd) = SpectralData::new(random_ratfunc(rng), random_ratfunc(rng)) {
            return sd;
        }
    }
}

/// Sum of residues of `f dx` over all places of the line.
pub fn residue_sum(f: &RatFunc<Q>) -> Q {
    let pf = partial_fractions(f);
    let mut total = residue_at(f, &Point::Infinity);
    for part in &pf.parts {
        let d = part.factor.deg_i() as usize;
        let c = part.numerators[0]
            .coeff(d - 1)
            .times(&Field::inv(&part.factor.lc()).expect("nonzero"));
        total = total.plus(&c);
    }
    total
}

/// Randomized properties across all modules; `cases` draws per property.
pub fn property_suite(seed: u64, cases: usize, exec: Exec) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut deg_bad = None;
    let mut delta_bad = None;
    let mut res_bad = None;
    for _ in 0..cases {
        let sd = random_spectral(&mut rng);
        match discriminant(&sd) {
            Ok(d) => {
                let div = coarse_divisor_of(&d);
                if div.degree() != -4 {
                    deg_bad.get_or_insert(format!("{sd:?}: degree {}", div.degree()));
                }
                if delta_invariant(&div) % 2 != 0 {
                    delta_bad.get_or_insert(format!("{sd:?}: delta {}", delta_invariant(&div)));
                }
            }
            Err(e) => {
                deg_bad.get_or_insert(format!("error {e}"));
            }
        }
        let f = random_ratfunc(&mut rng);
        let s = residue_sum(&f);
        if !Field::is_zero(&s) {
            res_bad.get_or_insert(format!("{f}: residue sum {s}"));
        }
    }
    let verdict = |name: &str, bad: Option<String>| {
        CheckResult::new(
            format!("{name} ({cases} cases)"),
            bad.is_none(),
            bad.unwrap_or_else(|| "ok".into()),
        )
    };
    out.push(verdict("discriminant degree = -4", deg_bad));
    out.push(verdict("delta even", delta_bad));
    out.push(verdict("residue sum zero", res_bad));

    let tables: Vec<(String, TrTable)> = ["airy", "catalan"]
        .iter()
        .filter_map(|n| {
            let c = toprec::param_curve(n)?;
            toprec::build_table(&c, 3, exec).ok().map(|t| (n.to_string(), t))
        })
        .collect();
    if tables.len() < 2 {
        out.push(CheckResult::new("recursion tables", false, "table construction failed"));
        return out;
    }
    let mut sym_bad = None;
    let mut pole_bad = None;
    for (name, t) in &tables {
        for (&(g, n), w) in &t.w {
            if !toprec::is_symmetric(w) {
                sym_bad.get_or_insert(format!("{name} W_{g},{n}"));
            }
            if !toprec::has_local_poles(&t.curve, w) {
                pole_bad.get_or_insert(format!("{name} W_{g},{n}"));
            }
        }
    }
    out.push(CheckResult::new(
        "W_{g,n} permutation symmetry",
        sym_bad.is_none(),
        sym_bad.unwrap_or_else(|| "ok".into()),
    ));
    out.push(CheckResult::new(
        "pole locality",
        pole_bad.is_none(),
        pole_bad.unwrap_or_else(|| "ok".into()),
    ));

    let mut resid_bad = None;
    let mut diff_bad = None;
    for i in 0..cases {
        let (name, t) = &tables[i % 2];
        let keys: Vec<(usize, usize)> = t.w.keys().cloned().collect();
        let (g, n) = keys[rng.gen_range(0..keys.len())];
        let pt = toprec::curve_points(&t.curve, &mut rng, n);
        match toprec::check_residues(&t.curve, &t.w, g, n, &pt) {
            Ok(r) if Field::is_zero(&r.others) && r.matches => {}
            Ok(r) => {
                resid_bad.get_or_insert(format!("{name} ({g},{n}) at {pt:?}: {r:?}"));
            }
            Err(e) => {
                resid_bad.get_or_insert(format!("{name} ({g},{n}): {e}"));
            }
        }
        let stable2: Vec<(usize, usize)> = keys
            .iter()
            .cloned()
            .filter(|&(g, n)| matches!(2 * g + n, 4 | 5))
            .collect();
        let (g, n) = stable2[rng.gen_range(0..stable2.len())];
        let pt = toprec::curve_points(&t.curve, &mut rng, n);
        match toprec::diff_recursion_check(t, g, n, &pt) {
            Ok(d) if d.holds() => {}
            Ok(d) => {
                diff_bad.get_or_insert(format!("{name} ({g},{n}) at {pt:?}: {d:?}"));
            }
            Err(e) => {
                diff_bad.get_or_insert(format!("{name} ({g},{n}): {e}"));
            }
        }
    }
    out.push(verdict("vanishing residues off ramification", resid_bad));
    out.push(verdict("differential = integral recursion, 2g-2+n in {2,3}", diff_bad));

    let mut op_bad = None;
    let wkb_cases = (cases / 10).max(1);
    for _ in 0..wkb_cases {
        let idx = rng.gen_range(0..TABLE1.len());
        let name = TABLE1[idx];
        let sd = spectral_data(name).expect("built-in");
        let place = if rng.gen_bool(0.5) {
            Point::Infinity
        } else {
            Point::Finite(q(rng.gen_range(2..9), rng.gen_range(1..4)) + q(1, 7))
        };
        let branch = if rng.gen_bool(0.5) { Branch::Plus } else { Branch::Minus };
        let depth = rng.gen_range(1..4);
        let cfg = WkbConfig::new(sd.a1.f.clone(), sd.a2.f.clone(), place.clone(), branch, 6, depth);
        match solve(&cfg).and_then(|st| st.residuals()) {
            Ok(rs) => {
                if let Some(k) = rs.iter().position(|r| !r.is_zero()) {
                    op_bad.get_or_insert(format!("{name} at {place:?} {branch:?}: hbar^{k} residual nonzero"));
                }
            }
            Err(e) => {
                op_bad.get_or_insert(format!("{name} at {place:?}: {e}"));
            }
        }
    }
    out.push(CheckResult::new(
        format!("operator annihilation residual ({wkb_cases} WKB states)"),
        op_bad.is_none(),
        op_bad.unwrap_or_else(|| "ok".into()),
    ));
    out
}
