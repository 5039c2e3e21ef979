//! Characters of finite subgroups, stored as exact exponents of a
//! primitive root of unity.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CosetDecomposition, FiniteGroup, Subgroup};

/// Largest subgroup accepted by [`enumerate_characters`].
pub const CHARACTER_LIMIT: usize = 512;

/// A homomorphism `N → T`, `ξ(s) = ζ_m^{k(s)}` with `ζ_m = exp(2πi/m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    domain: Subgroup,
    modulus: u32,
    /// Aligned with `domain.members()`.
    exponents: Vec<u32>,
}

/// JSON form: `{"modulus": m, "exponents": {element_index: k, ...}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterDocument {
    pub modulus: u32,
    pub exponents: BTreeMap<usize, u32>,
}

impl Character {
    /// Builds a character and verifies the homomorphism law exactly.
    pub fn new(
        g: &FiniteGroup,
        domain: &Subgroup,
        modulus: u32,
        exponents: Vec<u32>,
    ) -> Result<Self> {
        domain.require_parent(g)?;
        if modulus == 0 {
            return Err(Error::InvalidArgument(
                "character modulus must be positive".into(),
            ));
        }
        if exponents.len() != domain.len() {
            return Err(Error::DomainMismatch(format!(
                "{} exponents for a subgroup of order {}",
                exponents.len(),
                domain.len()
            )));
        }
        let xi = Character {
            domain: domain.clone(),
            modulus,
            exponents: exponents.into_iter().map(|k| k % modulus).collect(),
        };
        xi.check_homomorphism(g)?;
        Ok(xi)
    }

    fn check_homomorphism(&self, g: &FiniteGroup) -> Result<()> {
        let m = self.modulus;
        let e = self
            .domain
            .position(g.identity())
            .expect("subgroup holds identity");
        if self.exponents[e] != 0 {
            return Err(Error::NotAHomomorphism("identity does not map to 1".into()));
        }
        for (i, &s) in self.domain.members().iter().enumerate() {
            for (j, &t) in self.domain.members().iter().enumerate() {
                let st = self.domain.position(g.mul(s, t)).expect("closed");
                if self.exponents[st] != (self.exponents[i] + self.exponents[j]) % m {
                    return Err(Error::NotAHomomorphism(format!(
                        "exponent of {s}*{t} is {} but {} + {} (mod {m})",
                        self.exponents[st], self.exponents[i], self.exponents[j]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn trivial(domain: &Subgroup) -> Self {
        Character {
            domain: domain.clone(),
            modulus: 1,
            exponents: vec![0; domain.len()],
        }
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Exponents aligned with `domain().members()`.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.iter().all(|&k| k == 0)
    }

    /// The exact exponent `k` with `ξ(s) = ζ_m^k`.
    pub fn exponent(&self, s: usize) -> Result<u32> {
        self.domain
            .position(s)
            .map(|i| self.exponents[i])
            .ok_or(Error::NotInDomain(s))
    }

    /// `ξ(s) = exp(2πi k(s)/m)`.
    pub fn evaluate(&self, s: usize) -> Result<Complex64> {
        Ok(root_of_unity(self.exponent(s)?, self.modulus))
    }

    /// Values aligned with `domain().members()`.
    pub fn values(&self) -> Vec<Complex64> {
        self.exponents
            .iter()
            .map(|&k| root_of_unity(k, self.modulus))
            .collect()
    }

    /// The conjugated character `s ↦ ξ(x⁻¹ s x)`.
    pub fn conjugate(&self, g: &FiniteGroup, x: usize) -> Result<Self> {
        g.check_index(x)?;
        self.domain.require_normal(g)?;
        let exponents = self
            .domain
            .members()
            .iter()
            .map(|&s| self.exponents[self.domain.position(g.conj(x, s)).expect("normal")])
            .collect();
        Character::new(g, &self.domain, self.modulus, exponents)
    }

    pub fn to_document(&self) -> CharacterDocument {
        CharacterDocument {
            modulus: self.modulus,
            exponents: self
                .domain
                .members()
                .iter()
                .copied()
                .zip(self.exponents.iter().copied())
                .collect(),
        }
    }

    /// Negates the exponent at member position `pos` without re-validating.
    /// Only meant for mutation testing of the theorem suite.
    #[doc(hidden)]
    pub fn with_corrupted_exponent(&self, pos: usize) -> Self {
        let mut out = self.clone();
        let m = out.modulus.max(2);
        out.modulus = m;
        out.exponents[pos] = (m - out.exponents[pos] % m) % m;
        if out.exponents[pos] == self.exponents[pos] % m {
            out.exponents[pos] = (out.exponents[pos] + 1) % m;
        }
        out
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} [", self.modulus)?;
        for (i, k) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "]")
    }
}

pub fn root_of_unity(k: u32, m: u32) -> Complex64 {
    let k = k % m;
    match (k, m) {
        (0, _) => Complex64::new(1.0, 0.0),
        _ if 2 * k == m => Complex64::new(-1.0, 0.0),
        _ if 4 * k == m => Complex64::new(0.0, 1.0),
        _ if 4 * k == 3 * m => Complex64::new(0.0, -1.0),
        _ => {
            let (s, c) = (TAU * f64::from(k) / f64::from(m)).sin_cos();
            Complex64::new(c, s)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Sorted members of the commutator subgroup `[G, G]`.
pub fn commutator_subgroup(g: &FiniteGroup) -> Vec<usize> {
    let mut comms: Vec<usize> = Vec::new();
    for a in 0..g.order() {
        for b in 0..g.order() {
            comms.push(g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b)));
        }
    }
    comms.sort_unstable();
    comms.dedup();
    g.generate(&comms)
}

/// Every character of `n`, trivial character first.
///
/// Characters factor through the abelianization `A = N/[N,N]`. `A` is built
/// up along a chain `1 = A_0 < A_1 < … = A` where each step adjoins an
/// element of maximal order modulo the previous step; every character of
/// `A_{i-1}` has exactly `[A_i : A_{i-1}]` extensions to `A_i`.
pub fn enumerate_characters(g: &FiniteGroup, n: &Subgroup) -> Result<Vec<Character>> {
    n.require_parent(g)?;
    if n.len() > CHARACTER_LIMIT {
        return Err(Error::TooLarge {
            what: "subgroup",
            size: n.len(),
            limit: CHARACTER_LIMIT,
        });
    }
    let h = n.as_group(g);
    let derived = Subgroup::new(&h, &commutator_subgroup(&h))?;
    let ab = CosetDecomposition::new(&h, &derived)?;
    let a = ab.quotient();
    let modulus = (0..a.order()).fold(1u64, |acc, x| lcm(acc, a.element_order(x) as u64)) as u32;

    // chars[c][x] = exponent on element x of A, defined where `inside[x]`.
    let mut inside = vec![false; a.order()];
    inside[a.identity()] = true;
    let mut span = vec![a.identity()];
    let mut chars: Vec<Vec<u32>> = vec![vec![0; a.order()]];
    while span.len() < a.order() {
        let relative_order = |x: usize| {
            let mut k = 1;
            let mut y = x;
            while !inside[y] {
                y = a.mul(y, x);
                k += 1;
            }
            (k, y)
        };
        let (gen, step, power) = (0..a.order())
            .filter(|&x| !inside[x])
            .map(|x| {
                let (k, y) = relative_order(x);
                (x, k, y)
            })
            .max_by(|l, r| l.1.cmp(&r.1).then(r.0.cmp(&l.0)))
            .expect("span is proper");
        // new span = { gen^j * s : 0 ≤ j < step, s ∈ span }
        let mut powers = vec![a.identity()];
        for j in 1..step {
            powers.push(a.mul(powers[j - 1], gen));
        }
        let mut next = Vec::with_capacity(chars.len() * step);
        for chi in &chars {
            let c = chi[power];
            debug_assert_eq!(c as usize % step, 0, "character extends");
            let base = c / step as u32;
            for k in 0..step as u32 {
                let e = (base + k * (modulus / step as u32)) % modulus;
                let mut ext = chi.clone();
                for (j, &pj) in powers.iter().enumerate().skip(1) {
                    for &s in &span {
                        ext[a.mul(pj, s)] = (j as u32 * e + chi[s]) % modulus;
                    }
                }
                next.push(ext);
            }
        }
        let mut grown = Vec::with_capacity(span.len() * step);
        for &pj in &powers {
            for &s in &span {
                grown.push(a.mul(pj, s));
            }
        }
        for &x in &grown {
            inside[x] = true;
        }
        span = grown;
        chars = next;
    }

    chars
        .into_iter()
        .map(|chi| {
            let exponents = (0..n.len()).map(|i| chi[ab.coset_of(i)]).collect();
            Character::new(g, n, modulus, exponents)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{builtin_by_name, enumerate_normal_subgroups};

    fn brute_force_count(g: &FiniteGroup, n: &Subgroup) -> usize {
        // all maps N → Z_m for m = |N| that are homomorphisms
        let m = n.len() as u32;
        let k = n.len();
        let mut count = 0;
        let mut exps = vec![0u32; k];
        loop {
            if Character::new(g, n, m, exps.clone()).is_ok() {
                count += 1;
            }
            let mut i = 0;
            loop {
                if i == k {
                    return count;
                }
                exps[i] += 1;
                if exps[i] < m {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    }

    #[test]
    fn cyclic_three() {
        let g = builtin_by_name("Z3").unwrap();
        let n = Subgroup::whole(&g);
        let chars = enumerate_characters(&g, &n).unwrap();
        assert_eq!(chars.len(), 3);
        assert!(chars[0].is_trivial());
        let gens: Vec<u32> = chars.iter().map(|c| c.exponent(1).unwrap()).collect();
        let mut sorted = gens.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
        assert!(chars.iter().all(|c| c.modulus() == 3));
        let z = chars.iter().find(|c| c.exponent(1).unwrap() == 1).unwrap();
        let v = z.evaluate(1).unwrap();
        assert!((v - Complex64::from_polar(1.0, TAU / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn s3_has_trivial_and_sign() {
        let g = builtin_by_name("S3").unwrap();
        let chars = enumerate_characters(&g, &Subgroup::whole(&g)).unwrap();
        assert_eq!(chars.len(), 2);
        assert_eq!(commutator_subgroup(&g).len(), 3);
        let sign = &chars[1];
        for x in 0..6 {
            let expected = if commutator_subgroup(&g).contains(&x) {
                0
            } else {
                1
            };
            assert_eq!(sign.exponent(x).unwrap(), expected);
        }
    }

    #[test]
    fn trivial_domain_has_one_character() {
        let g = builtin_by_name("S3").unwrap();
        let chars = enumerate_characters(&g, &Subgroup::trivial(&g)).unwrap();
        assert_eq!(chars.len(), 1);
        assert!(chars[0].is_trivial());
    }

    #[test]
    fn counts_match_abelianization_and_brute_force() {
        for name in [
            "Z4", "Z6", "Z2xZ2", "S3", "D4", "Q8", "Heis3", "Z2xZ4", "D5",
        ] {
            let g = builtin_by_name(name).unwrap();
            for n in enumerate_normal_subgroups(&g).unwrap() {
                let chars = enumerate_characters(&g, &n).unwrap();
                let h = n.as_group(&g);
                let derived = commutator_subgroup(&h).len();
                assert_eq!(chars.len(), n.len() / derived, "{name} {:?}", n.members());
                if n.len() <= 8 {
                    assert_eq!(chars.len(), brute_force_count(&g, &n));
                }
                for c in &chars {
                    assert!(c.modulus() as usize <= n.len());
                }
                let mut distinct = chars
                    .iter()
                    .map(|c| c.exponents().to_vec())
                    .collect::<Vec<_>>();
                distinct.sort();
                distinct.dedup();
                assert_eq!(distinct.len(), chars.len());
            }
        }
    }

    #[test]
    fn orthogonality() {
        for name in ["Z6", "Q8", "Heis3", "D4"] {
            let g = builtin_by_name(name).unwrap();
            for n in enumerate_normal_subgroups(&g).unwrap() {
                let chars = enumerate_characters(&g, &n).unwrap();
                for (i, a) in chars.iter().enumerate() {
                    for (j, b) in chars.iter().enumerate() {
                        // exact: sum of ζ^{k_a - k_b} vanishes iff the difference character is nontrivial
                        let m = a.modulus();
                        let diffs: Vec<u32> = a
                            .exponents()
                            .iter()
                            .zip(b.exponents())
                            .map(|(x, y)| (x + m - y) % m)
                            .collect();
                        let exact_len = diffs.iter().filter(|&&d| d == 0).count();
                        let sum: Complex64 = a
                            .values()
                            .iter()
                            .zip(b.values())
                            .map(|(x, y)| x * y.conj())
                            .sum();
                        if i == j {
                            assert_eq!(exact_len, n.len());
                            assert!((sum - n.len() as f64).norm() < 1e-12);
                        } else {
                            assert!(sum.norm() < 1e-12, "{name}: {sum}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn evaluate_properties_and_errors() {
        let g = builtin_by_name("Z6").unwrap();
        let n = Subgroup::new(&g, &[0, 2, 4]).unwrap();
        let chars = enumerate_characters(&g, &n).unwrap();
        for c in &chars {
            for &s in n.members() {
                let prod = c.evaluate(s).unwrap() * c.evaluate(g.inv(s)).unwrap();
                assert!((prod - 1.0).norm() < 1e-15);
            }
        }
        assert_eq!(chars[0].evaluate(2).unwrap(), Complex64::new(1.0, 0.0));
        assert!(matches!(chars[1].evaluate(1), Err(Error::NotInDomain(1))));
    }

    #[test]
    fn corrupted_character_rejected() {
        let g = builtin_by_name("Z3").unwrap();
        let n = Subgroup::whole(&g);
        assert!(matches!(
            Character::new(&g, &n, 3, vec![0, 1, 1]),
            Err(Error::NotAHomomorphism(_))
        ));
        assert!(matches!(
            Character::new(&g, &n, 3, vec![1, 2, 0]),
            Err(Error::NotAHomomorphism(_))
        ));
    }

    #[test]
    fn conjugated_character_on_a3() {
        let g = builtin_by_name("S3").unwrap();
        let label = |l: &str| (0..6).find(|&x| g.label(x) == l).unwrap();
        let (c, c2, t) = (label("(123)"), label("(132)"), label("(12)"));
        let a3 = Subgroup::new(&g, &[0, c, c2]).unwrap();
        let chars = enumerate_characters(&g, &a3).unwrap();
        let xi = chars.iter().find(|x| x.exponent(c).unwrap() == 1).unwrap();
        let conj = xi.conjugate(&g, t).unwrap();
        assert_eq!(conj.exponent(c).unwrap(), 2);
        // conjugation by an element of the abelian domain is trivial
        assert_eq!(&xi.conjugate(&g, c).unwrap(), xi);
        assert!(chars[0].conjugate(&g, t).unwrap().is_trivial());

        let not_normal = Subgroup::new(&g, &[0, t]).unwrap();
        let sgn = enumerate_characters(&g, &not_normal).unwrap();
        assert!(matches!(
            sgn[1].conjugate(&g, c),
            Err(Error::NotNormal { .. })
        ));
    }

    #[test]
    fn conjugation_round_trip() {
        for name in ["S3", "D4", "Q8", "Heis3"] {
            let g = builtin_by_name(name).unwrap();
            for n in enumerate_normal_subgroups(&g).unwrap() {
                for xi in enumerate_characters(&g, &n).unwrap() {
                    for x in 0..g.order() {
                        let back = xi
                            .conjugate(&g, x)
                            .unwrap()
                            .conjugate(&g, g.inv(x))
                            .unwrap();
                        assert_eq!(back, xi);
                    }
                }
            }
        }
    }

    #[test]
    fn document_shape() {
        let g = builtin_by_name("Z4").unwrap();
        let n = Subgroup::new(&g, &[0, 2]).unwrap();
        let chars = enumerate_characters(&g, &n).unwrap();
        let json = serde_json::to_string(&chars[1].to_document()).unwrap();
        assert_eq!(json, r#"{"modulus":2,"exponents":{"0":0,"2":1}}"#);
    }
}
