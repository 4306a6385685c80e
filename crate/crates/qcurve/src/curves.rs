//! Built-in spectral curves: the five Higgs fields of the standard example
//! table and two rational parametrizations used by the recursion.

use crate::algebra::{Poly, RatFunc, Q};
use crate::spectral::SpectralData;

pub const TABLE1: [&str; 5] = ["airy", "hermite", "gauss", "row4", "row5"];
pub const BUILTINS: [&str; 7] = [
    "airy",
    "hermite",
    "gauss",
    "row4",
    "row5",
    "airy-param",
    "catalan-param",
];

/// `n(x)/d(x)` from integer coefficient lists, lowest degree first.
pub fn rf(n: &[i64], d: &[i64]) -> RatFunc<Q> {
    RatFunc::new(Poly::from_ints(n), Poly::from_ints(d)).expect("nonzero denominator")
}

/// Higgs matrix entries `[[e11, e12], [e21, e22]]` of a built-in curve.
pub fn higgs_matrix(name: &str) -> Option<[[RatFunc<Q>; 2]; 2]> {
    let zero = || rf(&[0], &[1]);
    let one = || rf(&[1], &[1]);
    Some(match name {
        "airy" | "airy-param" => [[zero(), one()], [rf(&[0, 1], &[1]), zero()]],
        "hermite" | "catalan-param" => [[zero(), one()], [rf(&[-1], &[1]), rf(&[0, -1], &[1])]],
        "gauss" => [
            [zero(), rf(&[1], &[0, 1])],
            [rf(&[1], &[4, -4]), rf(&[-1, 2], &[0, 1, -1])],
        ],
        "row4" => [[zero(), one()], [rf(&[-1], &[1, 1]), rf(&[-1], &[1])]],
        "row5" => [[zero(), one()], [rf(&[1], &[-1, 0, 1]), rf(&[0, 0, -2], &[-1, 0, 1])]],
        _ => return None,
    })
}

pub fn spectral_data(name: &str) -> Option<SpectralData> {
    higgs_matrix(name).map(|m| SpectralData::from_higgs(m).expect("built-in curves are irreducible"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    #[test]
    fn airy_and_hermite_coefficients() {
        let a = spectral_data("airy").unwrap();
        assert!(a.a1.f.is_zero());
        assert_eq!(a.a2.f, rf(&[0, -1], &[1]));
        let h = spectral_data("hermite").unwrap();
        assert_eq!(h.a1.f, rf(&[0, 1], &[1]));
        assert_eq!(h.a2.f, rf(&[1], &[1]));
    }
}
