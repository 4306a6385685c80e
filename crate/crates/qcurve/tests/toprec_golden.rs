use qcurve::algebra::{q, Field, MPoly, Point, Poly, RatFunc, Q};
use qcurve::curves::spectral_data;
use qcurve::oracles::{airy_closed_free_energy, compositions, enumerate_cellular, Dvv};
use qcurve::par::Exec;
use qcurve::toprec::*;
use qcurve::wkb::{solve, Branch, WkbConfig};
use qcurve::Error;

#[test]
fn airy_low_entries() {
    let c = airy_curve();
    let t = build_table(&c, 1, Exec::Sequential).unwrap();
    assert_eq!(t.w[&(1, 1)], MPoly::monomial(q(-1, 128), vec![2]));
    assert_eq!(t.w[&(0, 3)], MPoly::constant(3, q(-1, 16)));
    assert_eq!(t.f[&(1, 1)], MPoly::monomial(q(-1, 384), vec![3]));
    assert_eq!(t.f[&(0, 3)], MPoly::monomial(q(-1, 16), vec![1, 1, 1]));
}

#[test]
fn curves_solve_their_spectral_equations() {
    assert!(airy_curve().solves(&spectral_data("airy").unwrap()).unwrap());
    assert!(catalan_curve().solves(&spectral_data("hermite").unwrap()).unwrap());
}

#[test]
fn printed_catalan_denominator_fails() {
    // x = 2 + 4/(t² + 1) is not compatible with y = −(t+1)/(t−1)
    let x = RatFunc::new(Poly::from_ints(&[6, 0, 2]), Poly::from_ints(&[1, 0, 1])).unwrap();
    let y = RatFunc::new(Poly::from_ints(&[-1, -1]), Poly::from_ints(&[-1, 1])).unwrap();
    let c = build_curve(x, y, RatFunc::x().neg(), q(-1, 1)).unwrap();
    assert!(!c.solves(&spectral_data("hermite").unwrap()).unwrap());
}

#[test]
fn airy_free_energies_match_intersection_numbers() {
    let c = airy_curve();
    let t = build_table(&c, 4, Exec::default()).unwrap();
    let mut dvv = Dvv::new();
    // u = x^{-1/2} = t/2
    for (&(g, n), f) in &t.f {
        let closed = airy_closed_free_energy(&mut dvv, g as i64, n);
        let mut in_t = MPoly::zero(n);
        for (k, v) in closed.terms() {
            let deg: i32 = k.iter().sum();
            in_t.add_term(k.clone(), v.times(&Field::pow(&q(1, 2), deg as u32)));
        }
        assert_eq!(*f, in_t, "F_{g},{n}");
    }
    assert_eq!(dvv.corr(0, &[0, 0, 0]), q(1, 1));
    assert_eq!(dvv.corr(1, &[1]), q(1, 24));
    assert_eq!(dvv.corr(0, &[1, 0, 0, 0]), q(1, 1));
}

fn central_identity(name: &str, wkb: &str, branch: Branch, level: usize, order: i64) {
    let c = param_curve(name).unwrap();
    let t = build_table(&c, level, Exec::default()).unwrap();
    let sd = spectral_data(wkb).unwrap();
    let cfg = WkbConfig::new(
        sd.a1.f.clone(),
        sd.a2.f.clone(),
        Point::Infinity,
        branch,
        order,
        level + 1,
    );
    let st = solve(&cfg).unwrap();
    let tt = matching_inverse(&c, &st, &Point::Infinity, order + 4).unwrap();
    for m in 2..=level + 1 {
        assert!(Field::is_zero(&st.s[m].lambda));
        let p = principal_specialize(&t, m, &tt).unwrap();
        for k in 0..=order {
            let a = st.s[m].body.coeff(k).unwrap();
            assert_eq!(a.as_q(), Some(&p.coeff(k).unwrap()), "{name} S_{m} at tau^{k}");
        }
    }
}

#[test]
fn airy_principal_specialization_equals_wkb() {
    central_identity("airy", "airy", Branch::Minus, 5, 20);
}

#[test]
fn catalan_principal_specialization_equals_wkb() {
    central_identity("catalan", "hermite", Branch::Plus, 5, 16);
}

#[test]
fn airy_s2_from_table() {
    let c = airy_curve();
    let t = build_table(&c, 1, Exec::Sequential).unwrap();
    let tt = local_inverse(&c, &Point::Infinity, 2, 1, 8).unwrap();
    assert_eq!(tt.coeff(1), Some(q(2, 1)));
    let s2 = principal_specialize(&t, 2, &tt).unwrap();
    assert_eq!(s2.coeff(3), Some(q(-5, 48)));
    assert!(matches!(principal_specialize(&t, 1, &tt), Err(Error::Precondition(_))));
    assert!(matches!(principal_specialize(&t, 3, &tt), Err(Error::Precondition(_))));
}

#[test]
fn catalan_free_energies_count_cellular_graphs() {
    let c = catalan_curve();
    let t = build_table(&c, 4, Exec::default()).unwrap();
    let txi = local_inverse(&c, &Point::Infinity, 1, 1, 12).unwrap();
    let mut checked = 0;
    for (&(g, n), f) in &t.f {
        let ex = expand_multi(f, &txi, 8).unwrap();
        assert!(
            ex.keys().all(|mu| mu.iter().all(|&m| m > 0)),
            "F_{g},{n} has a zero exponent"
        );
        for total in n..=8 {
            for mu in compositions((total - n) as i64, n) {
                let mu: Vec<usize> = mu.iter().map(|&m| m as usize + 1).collect();
                let count = enumerate_cellular(g as i64, &mu).unwrap();
                let prod: usize = mu.iter().product();
                let expected = q(count as i64, prod as i64);
                let got = ex.get(&mu).cloned().unwrap_or_else(<Q as Field>::zero);
                assert_eq!(got, expected, "C_{g},{n}{mu:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 200);
}

#[test]
fn residues_and_differential_recursion() {
    for name in ["airy", "catalan"] {
        let c = param_curve(name).unwrap();
        let t = build_table(&c, 3, Exec::default()).unwrap();
        let mut rng = seeded_rng(11);
        for (&(g, n), w) in &t.w {
            assert!(is_symmetric(w), "{name} W_{g},{n} symmetry");
            assert!(has_local_poles(&c, w), "{name} W_{g},{n} poles");
            let pt = curve_points(&c, &mut rng, n);
            let r = check_residues(&c, &t.w, g, n, &pt).unwrap();
            assert!(Field::is_zero(&r.others) && r.matches, "{name} W_{g},{n} residues");
            if 2 * g + n >= 4 {
                let d = diff_recursion_check(&t, g, n, &pt).unwrap();
                assert!(d.holds(), "{name} ({g},{n}) differential recursion");
                if name == "airy" || n == 1 {
                    assert_eq!(d.lhs, d.literal);
                }
            }
        }
        assert!(matches!(
            diff_recursion_check(&t, 1, 1, &[q(3, 1)]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            diff_recursion_check(&t, 0, 3, &[q(3, 1), q(5, 1), q(7, 1)]),
            Err(Error::Precondition(_))
        ));
    }
}

#[test]
fn airy_residue_at_zero_vanishes() {
    let c = airy_curve();
    let t = build_table(&c, 2, Exec::Sequential).unwrap();
    // t = 0 lies in supp(Ω) but W_{g,n} has no pole there
    for w in t.w.values() {
        for (k, _) in w.terms() {
            assert!(k.iter().all(|&e| e >= 0));
        }
    }
}

#[test]
fn sequential_and_parallel_tables_agree() {
    let c = catalan_curve();
    let a = build_table(&c, 3, Exec::Sequential).unwrap();
    let b = build_table(&c, 3, Exec::Parallel).unwrap();
    assert_eq!(a.w, b.w);
    assert_eq!(a.f, b.f);
}
