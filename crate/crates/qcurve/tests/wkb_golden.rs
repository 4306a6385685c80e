use qcurve::algebra::{q, Field, FieldElement, Point, Quad, QuadTower, TruncSeries, Q};
use qcurve::curves::spectral_data;
use qcurve::oracles::{catalan_closed_form, gauss_product_formula};
use qcurve::wkb::{assemble_wavefunction, solve, verify_operator, Branch, WkbConfig};

type Fe = FieldElement;

fn fq(n: i64, d: i64) -> Fe {
    Fe::Q(q(n, d))
}

fn config(name: &str, place: Point<Q>, branch: Branch, order: i64, depth: usize) -> WkbConfig {
    let sd = spectral_data(name).unwrap();
    WkbConfig::new(sd.a1.f.clone(), sd.a2.f.clone(), place, branch, order, depth)
}

fn catalan_z(order: i64) -> TruncSeries<Q> {
    // z = Σ C_m ξ^{2m+1}
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

#[test]
fn airy_s0_s1_s2() {
    let cfg = config("airy", Point::Infinity, Branch::Minus, 9, 2);
    let st = solve(&cfg).unwrap();
    // τ² = 1/x, so x^{3/2} = τ^{-3}
    let s0: Vec<_> = st.s[0].body.terms().map(|(k, c)| (k, c.clone())).collect();
    assert_eq!(s0, vec![(-3, fq(-2, 3))]);
    assert!(st.s[0].lambda.is_zero());
    assert_eq!(st.s[1].lambda, fq(1, 4));
    assert!(st.s[1].body.is_zero());
    let s2: Vec<_> = st.s[2].body.terms().map(|(k, c)| (k, c.clone())).collect();
    assert_eq!(s2, vec![(3, fq(-5, 48))]);
}

#[test]
fn catalan_s0_s1() {
    let n = 14;
    let cfg = config("hermite", Point::Infinity, Branch::Plus, n, 1);
    let st = solve(&cfg).unwrap();
    let z = catalan_z(n + 2);
    // S₀′ = −z
    let y0: Vec<Q> = (0..=n)
        .map(|k| st.ds[0].coeff(k).unwrap().as_q().unwrap().clone())
        .collect();
    for k in 0..=n {
        assert_eq!(y0[k as usize], -z.coeff(k).unwrap(), "S0' at xi^{k}");
    }
    // S₀ = −z²/2 + log z = log ξ + (−z²/2 + log(z/ξ))
    assert_eq!(st.s[0].lambda, fq(1, 1));
    let zr = z.shift(-1);
    let expected0 = z.mul(&z).scale(&q(-1, 2)).add(&zr.log().unwrap());
    // S₁ = −½ log(1 − z²)
    let one = TruncSeries::constant(1, q(1, 1), n + 3);
    let expected1 = one.sub(&z.mul(&z)).log().unwrap().scale(&q(-1, 2));
    assert!(st.s[1].lambda.is_zero());
    for k in 0..=n {
        assert_eq!(
            st.s[0].body.coeff(k).unwrap(),
            Fe::Q(expected0.coeff(k).unwrap()),
            "S0 at xi^{k}"
        );
        assert_eq!(
            st.s[1].body.coeff(k).unwrap(),
            Fe::Q(expected1.coeff(k).unwrap()),
            "S1 at xi^{k}"
        );
    }
}

fn coeffs(s: &TruncSeries<Fe>, from: i64, to: i64) -> Vec<Fe> {
    (from..=to).map(|k| s.coeff(k).unwrap()).collect()
}

#[test]
fn gauss_s1_s2_through_x7() {
    let cfg = config("gauss", Point::Finite(q(0, 1)), Branch::Plus, 7, 2);
    assert_eq!(cfg.e, 1);
    let st = solve(&cfg).unwrap();
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
    assert_eq!(
        coeffs(&st.s[1].body, 0, 7),
        s1.iter().map(|&(a, b)| fq(a, b)).collect::<Vec<_>>()
    );
    assert_eq!(
        coeffs(&st.s[2].body, 0, 7),
        s2.iter().map(|&(a, b)| fq(a, b)).collect::<Vec<_>>()
    );
    assert!(st.s[1].lambda.is_zero() && st.s[2].lambda.is_zero());
}

#[test]
fn gauss_s0_matches_sqrt3_forms() {
    // The displayed S₀ coefficients live in ℚ(√3) and must collapse to ℚ.
    let t = QuadTower::new(q(3, 1)).unwrap();
    let r = |a: i64, b: i64| t.elem(q(a, 1), q(b, 1));
    let base = r(-3, 2); // 2√3 − 3
    type Form = (i64, i64, (i64, i64), i64, i64);
    let forms: [Form; 6] = [
        (2, -21, (-7, 4), 32, 2),
        (3, 23, (-45, 26), 32, 3),
        (4, -2547, (-97, 56), 1024, 4),
        (5, 7281, (-627, 362), 2560, 5),
        (6, -38115, (-1351, 780), 4096, 6),
        (7, 265869, (-8733, 5042), 28672, 7),
    ];
    let cfg = config("gauss", Point::Finite(q(0, 1)), Branch::Plus, 7, 0);
    let st = solve(&cfg).unwrap();
    assert_eq!(st.s[0].body.coeff(1).unwrap(), fq(1, 4));
    for (k, c, (a, b), d, p) in forms {
        let num: Quad<Q> = r(a, b).times(&t.base(q(c, 1)));
        let den = base.pow(p as u32).times(&t.base(q(d, 1)));
        let v = num.times(&den.inv().unwrap()).descend().expect("rational");
        assert_eq!(st.s[0].body.coeff(k).unwrap(), Fe::Q(v), "S0 at x^{k}");
    }
}

#[test]
fn gauss_wavefunction_x2_numerator() {
    let cfg = config("gauss", Point::Finite(q(0, 1)), Branch::Plus, 5, 2);
    let st = solve(&cfg).unwrap();
    let w = assemble_wavefunction(&st, 5, 1).unwrap();
    let h = Fe::hbar();
    assert_eq!(w.body.coeff(1).unwrap(), fq(1, 4).times(&h.inv().unwrap()));
    // (1 + 7ℏ − 7ℏ² + 7ℏ³)/(32ℏ²)
    let num = fq(1, 1)
        .plus(&h.times(&fq(7, 1)))
        .minus(&h.pow(2).times(&fq(7, 1)))
        .plus(&h.pow(3).times(&fq(7, 1)));
    assert_eq!(
        w.body.coeff(2).unwrap(),
        num.times(&h.pow(2).times(&fq(32, 1)).inv().unwrap())
    );
    let r = verify_operator(&cfg, &w).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(gauss_product_formula(1), w.body.coeff(1).unwrap().as_hbar().unwrap());
}

#[test]
fn catalan_wavefunction_closed_form() {
    let cfg = config("hermite", Point::Infinity, Branch::Plus, 10, 5);
    let st = solve(&cfg).unwrap();
    let w = assemble_wavefunction(&st, 10, 4).unwrap();
    assert_eq!(w.log_exponent, Fe::hbar().inv().unwrap());
    for k in 0..=10i64 {
        let c = w.body.coeff(k).unwrap();
        if k % 2 == 1 {
            assert!(c.is_zero());
        } else {
            assert_eq!(c, Fe::from(catalan_closed_form(k as usize / 2)), "xi^{k}");
        }
    }
    let at_one: Vec<Q> = (0..=4)
        .map(|n| w.body.coeff(2 * n).unwrap().eval_hbar(&q(1, 1)).unwrap())
        .collect();
    assert_eq!(at_one, vec![q(1, 1), q(1, 1), q(3, 1), q(15, 1), q(105, 1)]);
    let r = verify_operator(&cfg, &w).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn airy_residual_depth_four() {
    let cfg = config("airy", Point::Infinity, Branch::Minus, 12, 4);
    let st = solve(&cfg).unwrap();
    for (k, r) in st.residuals().unwrap().iter().enumerate() {
        assert!(r.is_zero(), "hbar^{k} residual");
    }
    // S_m is homogeneous of degree −3(m−1)/2 in x
    for m in 2..=4usize {
        let ks: Vec<i64> = st.s[m].body.terms().map(|(k, _)| k).collect();
        assert_eq!(ks, vec![3 * (m as i64 - 1)], "S_{m}");
    }
}
