//! Haar data on finite groups.
//!
//! Left Haar measures on a finite group are multiples of counting measure,
//! so `λ_G` and `λ_N` are a single weight each. The quotient weight is
//! forced by Weil's formula
//! `Σ_{xN} w · Σ_{s∈N} v f(xs) = Σ_x u f(x)`, i.e. `w = u / v`.
//!
//! The modular functions, `σ_N` and the Haar modulus are evaluated through
//! their defining integral quotients rather than returned as constants; the
//! ax+b model in [`crate::axb`] uses the same quotients with quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CosetDecomposition, FiniteGroup, Subgroup};

/// Weights of `λ_G`, `λ_N` and the Weil-normalized `λ_{G/N}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HaarData {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl HaarData {
    pub fn counting() -> Self {
        Self {
            u: 1.0,
            v: 1.0,
            w: 1.0,
        }
    }

    /// `λ_N` a probability measure on `N`.
    pub fn probability(u: f64, subgroup_order: usize) -> Result<Self> {
        weil_normalize(u, 1.0 / subgroup_order as f64)
    }
}

impl Default for HaarData {
    fn default() -> Self {
        Self::counting()
    }
}

/// How to choose weights for each normal subgroup in a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightPolicy {
    Fixed {
        u: f64,
        v: f64,
    },
    /// `v = 1/|N|`.
    Probability {
        u: f64,
    },
}

impl WeightPolicy {
    pub fn resolve(&self, subgroup_order: usize) -> Result<HaarData> {
        match *self {
            WeightPolicy::Fixed { u, v } => weil_normalize(u, v),
            WeightPolicy::Probability { u } => HaarData::probability(u, subgroup_order),
        }
    }
}

impl Default for WeightPolicy {
    fn default() -> Self {
        WeightPolicy::Fixed { u: 1.0, v: 1.0 }
    }
}

pub fn weil_normalize(u: f64, v: f64) -> Result<HaarData> {
    for (name, value) in [("u", u), ("v", v)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveWeight { name, value });
        }
    }
    Ok(HaarData { u, v, w: u / v })
}

/// Fixed positive test function on `0..n`, not invariant under any
/// nontrivial permutation.
fn probe(n: usize) -> impl Fn(usize) -> f64 {
    move |i| 1.0 + (i as f64 + 1.0) / n as f64
}

/// `Δ_G(x) = ∫ f dλ_G / ∫ R_x f dλ_G` with a fixed probe `f`.
pub fn modular_function(g: &FiniteGroup, weight: f64, x: usize) -> Result<f64> {
    g.check_index(x)?;
    let f = probe(g.order());
    let plain: f64 = (0..g.order()).map(|y| weight * f(y)).sum();
    let shifted: f64 = (0..g.order()).map(|y| weight * f(g.mul(y, x))).sum();
    Ok(plain / shifted)
}

/// `σ_N(x)` from `∫_N φ(s) dλ_N(x⁻¹sx) = σ_N(x) ∫_N φ dλ_N`.
///
/// The left side integrates against the image of `λ_N` under
/// `t ↦ x t x⁻¹`, i.e. it equals `v Σ_t φ(x t x⁻¹)`.
pub fn sigma_n(g: &FiniteGroup, n: &Subgroup, v: f64, x: usize) -> Result<f64> {
    g.check_index(x)?;
    n.require_normal(g)?;
    let phi = probe(n.len());
    let at = |s: usize| {
        phi(n
            .position(s)
            .expect("normal subgroup is conjugation stable"))
    };
    let plain: f64 = n.members().iter().map(|&s| v * at(s)).sum();
    let pushed: f64 = n
        .members()
        .iter()
        .map(|&t| v * at(g.mul(g.mul(x, t), g.inv(x))))
        .sum();
    Ok(pushed / plain)
}

/// `Δ_N(t)` for `t ∈ N`, computed on `N` as a group with weight `v`.
pub fn subgroup_modular_function(g: &FiniteGroup, n: &Subgroup, v: f64, t: usize) -> Result<f64> {
    let pos = n.position(t).ok_or(Error::NotInDomain(t))?;
    modular_function(&n.as_group(g), v, pos)
}

/// `Δ_{G/N}(xN)` with the quotient weight `w`.
pub fn quotient_modular_function(cosets: &CosetDecomposition, w: f64, x: usize) -> Result<f64> {
    modular_function(cosets.quotient(), w, cosets.coset_of(x))
}

/// `σ_G(α) = ∫ f dλ_G / ∫ f∘α dλ_G` for an automorphism given as an element permutation.
pub fn haar_modulus(g: &FiniteGroup, weight: f64, alpha: &[usize]) -> Result<f64> {
    g.check_automorphism(alpha)?;
    let f = probe(g.order());
    let plain: f64 = (0..g.order()).map(|y| weight * f(y)).sum();
    let composed: f64 = (0..g.order()).map(|y| weight * f(alpha[y])).sum();
    Ok(plain / composed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{builtin_by_name, enumerate_normal_subgroups};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn weil_weights() {
        assert_eq!(weil_normalize(1.0, 1.0).unwrap().w, 1.0);
        assert_eq!(weil_normalize(2.0, 1.0).unwrap().w, 2.0);
        let p = HaarData::probability(1.5, 4).unwrap();
        assert_eq!(p.v, 0.25);
        assert_eq!(p.w, 6.0);
        assert!(matches!(
            weil_normalize(0.0, 1.0),
            Err(Error::NonPositiveWeight { name: "u", .. })
        ));
        assert!(matches!(
            weil_normalize(1.0, -2.0),
            Err(Error::NonPositiveWeight { name: "v", .. })
        ));
        assert!(matches!(
            weil_normalize(1.0, f64::NAN),
            Err(Error::NonPositiveWeight { .. })
        ));
    }

    #[test]
    fn weil_weight_from_delta_substitution() {
        // f = δ_e: Σ_cosets w T_N(δ_e) = w v, Σ_G u δ_e = u.
        for (u, v) in [(1.0, 1.0), (2.0, 1.0), (1.0, 1.0 / 3.0)] {
            let h = weil_normalize(u, v).unwrap();
            assert!((h.w * h.v - u).abs() < 1e-15);
        }
    }

    #[test]
    fn finite_weil_formula_random_rational() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for name in ["Z6", "S3", "D4", "Q8", "Heis3"] {
            let g = builtin_by_name(name).unwrap();
            for n in enumerate_normal_subgroups(&g).unwrap() {
                let cd = CosetDecomposition::new(&g, &n).unwrap();
                for policy in [
                    WeightPolicy::Fixed { u: 1.0, v: 1.0 },
                    WeightPolicy::Fixed { u: 3.0, v: 2.0 },
                    WeightPolicy::Probability { u: 1.0 },
                ] {
                    let h = policy.resolve(n.len()).unwrap();
                    for _ in 0..100 {
                        let f: Vec<f64> = (0..g.order())
                            .map(|_| f64::from(rng.gen_range(-16i32..=16)) / 16.0)
                            .collect();
                        let lhs: f64 = cd
                            .representatives()
                            .iter()
                            .map(|&x| {
                                h.w * n
                                    .members()
                                    .iter()
                                    .map(|&s| h.v * f[g.mul(x, s)])
                                    .sum::<f64>()
                            })
                            .sum();
                        let rhs: f64 = f.iter().map(|y| h.u * y).sum();
                        assert!((lhs - rhs).abs() < 1e-12, "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn finite_sigma_and_modular_are_one() {
        for name in ["S3", "D4", "Q8", "Heis3"] {
            let g = builtin_by_name(name).unwrap();
            for n in enumerate_normal_subgroups(&g).unwrap() {
                for x in 0..g.order() {
                    assert!((sigma_n(&g, &n, 1.0, x).unwrap() - 1.0).abs() < 1e-15);
                    assert!((modular_function(&g, 2.0, x).unwrap() - 1.0).abs() < 1e-15);
                }
                for &t in n.members() {
                    let d = subgroup_modular_function(&g, &n, 0.5, t).unwrap();
                    assert!((d - sigma_n(&g, &n, 0.5, t).unwrap()).abs() < 1e-14);
                }
                for x in 0..g.order() {
                    for y in 0..g.order() {
                        let lhs = sigma_n(&g, &n, 1.0, g.mul(x, y)).unwrap();
                        let rhs =
                            sigma_n(&g, &n, 1.0, x).unwrap() * sigma_n(&g, &n, 1.0, y).unwrap();
                        assert!((lhs - rhs).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_requires_normal() {
        let g = builtin_by_name("S3").unwrap();
        let t = (0..6).find(|&x| g.label(x) == "(12)").unwrap();
        let h = Subgroup::new(&g, &[0, t]).unwrap();
        assert!(matches!(
            sigma_n(&g, &h, 1.0, 1),
            Err(Error::NotNormal { .. })
        ));
    }

    #[test]
    fn haar_modulus_of_inner_and_identity() {
        let g = builtin_by_name("D4").unwrap();
        let id: Vec<usize> = (0..g.order()).collect();
        assert_eq!(haar_modulus(&g, 1.0, &id).unwrap(), 1.0);
        for x in 0..g.order() {
            let inner: Vec<usize> = (0..g.order()).map(|s| g.conj(x, s)).collect();
            assert!((haar_modulus(&g, 1.0, &inner).unwrap() - 1.0).abs() < 1e-15);
        }
        let mut swap = id.clone();
        swap.swap(1, 2);
        assert!(matches!(
            haar_modulus(&g, 1.0, &swap),
            Err(Error::NotAnAutomorphism(_))
        ));
    }

    #[test]
    fn haar_modulus_multiplicative_under_composition() {
        let g = builtin_by_name("Q8").unwrap();
        for x in 0..8 {
            for y in 0..8 {
                let a: Vec<usize> = (0..8).map(|s| g.conj(x, s)).collect();
                let b: Vec<usize> = (0..8).map(|s| g.conj(y, s)).collect();
                let ab: Vec<usize> = (0..8).map(|s| a[b[s]]).collect();
                let lhs = haar_modulus(&g, 1.0, &ab).unwrap();
                let rhs = haar_modulus(&g, 1.0, &a).unwrap() * haar_modulus(&g, 1.0, &b).unwrap();
                assert!((lhs - rhs).abs() < 1e-14);
            }
        }
    }
}
