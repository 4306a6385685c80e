use qcurve::algebra::{q, Poly};
use qcurve::checks::{blowup_suite, lattice_suite, table1_suite, TABLE1_ROWS};
use qcurve::curves::{rf, spectral_data};
use qcurve::lattice::{adjunction_genus, lattice_for, sigma_min_class};
use qcurve::spectral::{genus_report, Place, SpectralData};

fn assert_all(results: Vec<qcurve::checks::CheckResult>) {
    for r in results {
        assert!(r.passed, "{}: {}", r.name, r.detail);
    }
}

#[test]
fn table_rows_match() {
    assert_all(table1_suite());
}

#[test]
fn blowup_counts() {
    assert_all(blowup_suite());
}

#[test]
fn lattice_genus_agrees() {
    assert_all(lattice_suite(17, 50));
}

#[test]
fn gauss_discriminant_places() {
    let sd = spectral_data("gauss").unwrap();
    let r = genus_report(&sd, 0).unwrap();
    // 3x² − 3x + 1 has no rational root and counts with degree 2
    let quad = Place::Finite(Poly::from_ints(&[1, -3, 3]).monic());
    assert_eq!(r.discriminant.multiplicity(&quad), 1);
    assert_eq!(r.discriminant.degree(), -4);
    assert_eq!(r.delta % 2, 0);
}

#[test]
fn row5_is_smooth_with_genus_one() {
    let row = TABLE1_ROWS.iter().find(|r| r.name == "row5").unwrap();
    assert!(!row.singular);
    let r = genus_report(&spectral_data("row5").unwrap(), 0).unwrap();
    assert_eq!((r.p_a, r.p_g), (1, 1));
    assert!(r.profiles.iter().any(|p| p.place == Place::at(q(1, 1))));
}

// At x = 1 the leading terms of a₁² and 4a₂ cancel (k = 1, ℓ = 2k), so the
// discriminant pole drops to order 1 and the minimal blow-up rule asks for no
// blow-up although Σ is singular there. The lattice check must expose this.
#[test]
fn cancelling_pole_is_flagged_by_lattice() {
    let sd = SpectralData::new(rf(&[-1, 2], &[0, -1, 1]), rf(&[1], &[0, 4, -8, 4])).unwrap();
    let r = genus_report(&sd, 0).unwrap();
    assert_eq!((r.a, r.p_a, r.p_g), (4, 1, 0));
    let p1 = r.profiles.iter().find(|p| p.place == Place::at(q(1, 1))).unwrap();
    assert_eq!((p1.k, p1.l, p1.n, p1.blowups_min), (Some(1), Some(2), 1, 0));
    let l = lattice_for(&sd, &r);
    assert_ne!(adjunction_genus(&l, &sigma_min_class(&l, r.a)), r.p_g);
}
