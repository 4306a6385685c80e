use std::sync::OnceLock;

use proptest::prelude::*;
use qcurve::algebra::{q, Field, Point, Poly, RatFunc, TruncSeries, Q};
use qcurve::checks::residue_sum;
use qcurve::curves::{spectral_data, TABLE1};
use qcurve::spectral::{coarse_divisor_of, delta_invariant, discriminant, SpectralData};
use qcurve::toprec::{self, TrTable};
use qcurve::wkb::{solve, Branch, WkbConfig};

fn rational() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly<Q>> {
    prop::collection::vec(rational(), 1..=max_deg + 1).prop_map(Poly::new)
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly<Q>> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc<Q>> {
    (poly(3), nonzero_poly(2)).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
}

fn nonzero_point() -> impl Strategy<Value = Q> {
    (1i64..=40, 1i64..=7, any::<bool>()).prop_map(|(n, d, s)| q(if s { n } else { -n }, d))
}

fn tables() -> &'static [TrTable; 2] {
    static T: OnceLock<[TrTable; 2]> = OnceLock::new();
    T.get_or_init(|| {
        let build = |n| toprec::build_table(&toprec::param_curve(n).unwrap(), 3, Default::default()).unwrap();
        [build("airy"), build("catalan")]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn residues_sum_to_zero(f in ratfunc()) {
        prop_assert!(residue_sum(&f).is_zero());
    }

    #[test]
    fn discriminant_degree_and_delta(a1 in ratfunc(), a2 in ratfunc()) {
        if let Ok(sd) = SpectralData::new(a1, a2) {
            let d = coarse_divisor_of(&discriminant(&sd).unwrap());
            prop_assert_eq!(d.degree(), -4);
            prop_assert_eq!(delta_invariant(&d) % 2, 0);
        }
    }

    #[test]
    fn polynomial_division(a in poly(6), b in nonzero_poly(3)) {
        let (qt, r) = a.divrem(&b).unwrap();
        prop_assert_eq!(qt.mul(&b).add(&r), a);
        prop_assert!(r.is_zero() || r.degree() < b.degree());
    }

    #[test]
    fn series_inverse_and_square_root(c in prop::collection::vec(rational(), 1..6)) {
        let mut c = c;
        c[0] = q(1, 1);
        let s = TruncSeries::new(1, 0, c, 8);
        let one = TruncSeries::constant(1, q(1, 1), 8);
        prop_assert_eq!(s.mul(&s.inv().unwrap()), one);
        let r = s.sqrt(&q(1, 1)).unwrap();
        prop_assert_eq!(r.mul(&r), s);
    }

    #[test]
    fn recursion_symmetry_and_residues(which in 0usize..2, pick in 0usize..64, seed in any::<u64>()) {
        let t = &tables()[which];
        let keys: Vec<_> = t.w.keys().cloned().collect();
        let (g, n) = keys[pick % keys.len()];
        prop_assert!(toprec::is_symmetric(&t.w[&(g, n)]));
        prop_assert!(toprec::has_local_poles(&t.curve, &t.w[&(g, n)]));
        let mut rng = toprec::seeded_rng(seed);
        let pt = toprec::curve_points(&t.curve, &mut rng, n);
        let r = toprec::check_residues(&t.curve, &t.w, g, n, &pt).unwrap();
        prop_assert!(r.others.is_zero() && r.matches, "({},{}) at {:?}: {:?}", g, n, pt, r);
    }

    #[test]
    fn differential_recursion(which in 0usize..2, pick in 0usize..16, seed in any::<u64>()) {
        let t = &tables()[which];
        let keys: Vec<_> = t.w.keys().cloned().filter(|&(g, n)| matches!(2 * g + n, 4 | 5)).collect();
        let (g, n) = keys[pick % keys.len()];
        let mut rng = toprec::seeded_rng(seed);
        let pt = toprec::curve_points(&t.curve, &mut rng, n);
        let d = toprec::diff_recursion_check(t, g, n, &pt).unwrap();
        prop_assert!(d.holds(), "({},{}) at {:?}: {:?}", g, n, pt, d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wkb_states_annihilated(idx in 0usize..5, at in prop::option::of(nonzero_point()), plus in any::<bool>(), depth in 1usize..4) {
        let sd = spectral_data(TABLE1[idx]).unwrap();
        let place = match at {
            Some(a) => Point::Finite(a + q(1, 7)),
            None => Point::Infinity,
        };
        let branch = if plus { Branch::Plus } else { Branch::Minus };
        let cfg = WkbConfig::new(sd.a1.f.clone(), sd.a2.f.clone(), place, branch, 6, depth);
        if let Ok(st) = solve(&cfg) {
            for (k, r) in st.residuals().unwrap().iter().enumerate() {
                prop_assert!(r.is_zero(), "hbar^{} residual", k);
            }
        }
    }
}
