//! Néron–Severi lattice of the blown-up compactified cotangent bundle of the
//! line (or of a base curve of genus `g`, tracked by degrees only).

use std::fmt;

use crate::algebra::Field;
use crate::spectral::{CurveReport, Place, SpectralData};

/// A chain of exceptional curves from iterated blow-ups at one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Chain {
    pub len: i64,
    /// Chains centred off `C₀` may meet `C_∞`.
    pub on_c_infinity: bool,
}

/// Basis `C₀, F, G-chains (on C₀), E-chains (off C₀)` with the pairing of
/// the iterated blow-up.
#[derive(Clone, Debug, PartialEq)]
pub struct PicLattice {
    pub g: i64,
    pub on_c0: Vec<i64>,
    pub off_c0: Vec<Chain>,
    offsets_g: Vec<usize>,
    offsets_e: Vec<usize>,
    rank: usize,
}

/// Integer coefficients over the basis of a [`PicLattice`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    pub coeffs: Vec<i64>,
}

pub fn build_lattice(g: i64, on_c0: &[i64], off_c0: &[Chain]) -> PicLattice {
    assert!(on_c0.iter().all(|&m| m >= 1), "chain lengths must be positive");
    assert!(off_c0.iter().all(|c| c.len >= 1), "chain lengths must be positive");
    let mut next = 2usize;
    let mut offsets_g = Vec::new();
    for &m in on_c0 {
        offsets_g.push(next);
        next += m as usize;
    }
    let mut offsets_e = Vec::new();
    for c in off_c0 {
        offsets_e.push(next);
        next += c.len as usize;
    }
    PicLattice {
        g,
        on_c0: on_c0.to_vec(),
        off_c0: off_c0.to_vec(),
        offsets_g,
        offsets_e,
        rank: next,
    }
}

impl PicLattice {
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn zero(&self) -> DivisorClass {
        DivisorClass {
            coeffs: vec![0; self.rank],
        }
    }
    pub fn c0(&self) -> DivisorClass {
        self.unit(0)
    }
    pub fn f(&self) -> DivisorClass {
        self.unit(1)
    }
    /// `G_j` of the `k`-th chain on `C₀`, `j` starting at 1.
    pub fn g_curve(&self, k: usize, j: i64) -> DivisorClass {
        self.unit(self.offsets_g[k] + j as usize - 1)
    }
    /// `E_j` of the `k`-th chain off `C₀`, `j` starting at 1.
    pub fn e_curve(&self, k: usize, j: i64) -> DivisorClass {
        self.unit(self.offsets_e[k] + j as usize - 1)
    }
    fn unit(&self, i: usize) -> DivisorClass {
        let mut d = self.zero();
        d.coeffs[i] = 1;
        d
    }

    /// Pairing of two basis elements.
    fn basis_pair(&self, i: usize, j: usize) -> i64 {
        let (i, j) = (i.min(j), i.max(j));
        let sum_m: i64 = self.on_c0.iter().sum();
        match (i, j) {
            (0, 0) => 2 * self.g - 2 - sum_m,
            (0, 1) => 1,
            (1, 1) => 0,
            (1, _) => 0,
            (0, j) => {
                // C₀ meets the last curve of each chain on it.
                for (k, &off) in self.offsets_g.iter().enumerate() {
                    if j == off + self.on_c0[k] as usize - 1 {
                        return 1;
                    }
                }
                0
            }
            _ => {
                let chains = self
                    .offsets_g
                    .iter()
                    .zip(&self.on_c0)
                    .map(|(&o, &m)| (o, m))
                    .chain(self.offsets_e.iter().zip(&self.off_c0).map(|(&o, c)| (o, c.len)));
                for (o, len) in chains {
                    let end = o + len as usize;
                    if i >= o && j < end {
                        return match j - i {
                            0 if j == end - 1 => -1,
                            0 => -2,
                            1 => 1,
                            _ => 0,
                        };
                    }
                }
                0
            }
        }
    }

    pub fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> i64 {
        let mut s = 0;
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y != 0 {
                    s += x * y * self.basis_pair(i, j);
                }
            }
        }
        s
    }

    /// `Σ_j j·X_j` over the chain starting at basis index `o`.
    fn weighted_chain(&self, o: usize, len: i64) -> DivisorClass {
        let mut d = self.zero();
        for j in 1..=len {
            d.coeffs[o + j as usize - 1] = j;
        }
        d
    }

    /// Proper transform of `C_∞ ~ C₀ + (2 − 2g)F`.
    pub fn c_infinity(&self) -> DivisorClass {
        let mut d = self.c0().add(&self.f().scale(2 - 2 * self.g));
        for (k, &m) in self.on_c0.iter().enumerate() {
            d = d.add(&self.weighted_chain(self.offsets_g[k], m));
        }
        for (k, c) in self.off_c0.iter().enumerate() {
            if c.on_c_infinity {
                d = d.sub(&self.weighted_chain(self.offsets_e[k], c.len));
            }
        }
        d
    }
}

impl DivisorClass {
    pub fn add(&self, o: &Self) -> Self {
        DivisorClass {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }
    pub fn scale(&self, k: i64) -> Self {
        DivisorClass {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = match i {
                0 => "C0".to_string(),
                1 => "F".to_string(),
                _ => format!("X{}", i - 1),
            };
            parts.push(format!("{}{}", c, name));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `−2C₀ + (4g − 4)F + Σ iE_i − Σ iG_i`.
pub fn canonical_class(l: &PicLattice) -> DivisorClass {
    let mut d = l.c0().scale(-2).add(&l.f().scale(4 * l.g - 4));
    for (k, &m) in l.on_c0.iter().enumerate() {
        d = d.sub(&l.weighted_chain(l.offsets_g[k], m));
    }
    for (k, c) in l.off_c0.iter().enumerate() {
        d = d.add(&l.weighted_chain(l.offsets_e[k], c.len));
    }
    d
}

/// `2C₀ + aF − 2 Σ jE_j`.
pub fn sigma_min_class(l: &PicLattice, a: i64) -> DivisorClass {
    let mut d = l.c0().scale(2).add(&l.f().scale(a));
    for (k, c) in l.off_c0.iter().enumerate() {
        d = d.sub(&l.weighted_chain(l.offsets_e[k], c.len).scale(2));
    }
    d
}

/// Arithmetic genus `D·(D + K)/2 + 1`.
pub fn adjunction_genus(l: &PicLattice, d: &DivisorClass) -> i64 {
    let s = l.pair(d, &d.add(&canonical_class(l)));
    assert!(s % 2 == 0, "adjunction pairing must be even");
    s / 2 + 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountCheck {
    pub n0: i64,
    pub n_infinity: i64,
    /// `N_∞ + 2 Σ_{on C_∞} n_k`.
    pub a: i64,
    /// `2g − 1 + (N₀ + N_∞)/2 − Σ_{off C₀ and C_∞} n_k`.
    pub genus: i64,
}

pub fn count_check(l: &PicLattice, sigma_min: &DivisorClass) -> CountCheck {
    let n0 = l.pair(sigma_min, &l.c0());
    let n_infinity = l.pair(sigma_min, &l.c_infinity());
    let on_inf: i64 = l.off_c0.iter().filter(|c| c.on_c_infinity).map(|c| c.len).sum();
    let off_both: i64 = l.off_c0.iter().filter(|c| !c.on_c_infinity).map(|c| c.len).sum();
    assert!((n0 + n_infinity) % 2 == 0, "N0 + N_inf must be even");
    CountCheck {
        n0,
        n_infinity,
        a: n_infinity + 2 * on_inf,
        genus: 2 * l.g - 1 + (n0 + n_infinity) / 2 - off_both,
    }
}

/// The minimal-resolution lattice of a spectral curve: one chain per
/// singular point of `Σ`, with `⌊m/2⌋` blow-ups over discriminant zeros of
/// multiplicity `m` and the minimal count at pole places.
pub fn lattice_for(sd: &SpectralData, report: &CurveReport) -> PicLattice {
    let mut on_c0 = Vec::new();
    let mut off_c0 = Vec::new();
    for (place, m) in report.discriminant.zeros() {
        let len = m / 2;
        if len == 0 {
            continue;
        }
        let on_zero_section = match place {
            Place::Finite(p) => {
                let (_, r) = sd.a1.f.num().divrem(p).expect("nonzero");
                sd.a1.f.is_zero() || r.is_zero()
            }
            Place::Infinity => sd.a1.pole_order(place).is_none() && sd.a1.order_at(place) > 0,
        };
        for _ in 0..place.degree() {
            if on_zero_section {
                on_c0.push(len);
            } else {
                off_c0.push(Chain {
                    len,
                    on_c_infinity: false,
                });
            }
        }
    }
    for p in &report.profiles {
        if p.blowups_min > 0 {
            for _ in 0..p.place.degree() {
                off_c0.push(Chain {
                    len: p.blowups_min,
                    on_c_infinity: true,
                });
            }
        }
    }
    build_lattice(report.base_genus, &on_c0, &off_c0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hirzebruch_table() {
        let l = build_lattice(0, &[], &[]);
        assert_eq!(l.pair(&l.c0(), &l.c0()), -2);
        assert_eq!(l.pair(&l.f(), &l.f()), 0);
        assert_eq!(l.pair(&l.c0(), &l.f()), 1);
    }

    #[test]
    fn off_chain_table() {
        let l = build_lattice(
            0,
            &[],
            &[Chain {
                len: 2,
                on_c_infinity: false,
            }],
        );
        let (e1, e2) = (l.e_curve(0, 1), l.e_curve(0, 2));
        assert_eq!(l.pair(&e1, &e1), -2);
        assert_eq!(l.pair(&e2, &e2), -1);
        assert_eq!(l.pair(&e1, &e2), 1);
    }

    #[test]
    fn on_chain_table() {
        let l = build_lattice(1, &[1], &[]);
        assert_eq!(l.pair(&l.c0(), &l.c0()), 2 - 2 - 1);
        assert_eq!(l.pair(&l.c0(), &l.g_curve(0, 1)), 1);
    }

    #[test]
    fn c_infinity_meets_chain_end_once() {
        let l = build_lattice(
            0,
            &[2],
            &[Chain {
                len: 3,
                on_c_infinity: true,
            }],
        );
        let ci = l.c_infinity();
        assert_eq!(l.pair(&ci, &l.e_curve(0, 3)), 1);
        assert_eq!(l.pair(&ci, &l.e_curve(0, 1)), 0);
        assert_eq!(l.pair(&ci, &l.c0()), 0);
        assert_eq!(l.pair(&ci, &l.f()), 1);
    }
}
