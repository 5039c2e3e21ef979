//! The theorem suite: every identity of the covariant-function theory,
//! checked on random inputs for each (group, normal subgroup, character)
//! triple, with structured JSON reports.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::{enumerate_characters, Character};
use crate::covariant::{
    annihilator_basis, translate, CovariantSpace, Direction, GroupFunction, SubspaceBasis,
};
use crate::error::{Error, Result};
use crate::group::{enumerate_normal_subgroups, FiniteGroup, Subgroup};
use crate::haar::{self, HaarData, WeightPolicy};

pub const SUITE_VERSION: &str = "1.0";
pub const FINITE_TOLERANCE: f64 = 1e-9;
pub const CONTINUOUS_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "intertwine_R")]
    IntertwineR,
    #[serde(rename = "intertwine_L")]
    IntertwineL,
    #[serde(rename = "normal_formula")]
    NormalFormula,
    #[serde(rename = "left_char_formula")]
    LeftCharFormula,
    #[serde(rename = "adjointness")]
    Adjointness,
    #[serde(rename = "compact_norm")]
    CompactNorm,
    #[serde(rename = "contraction")]
    Contraction,
    #[serde(rename = "infimum")]
    Infimum,
    #[serde(rename = "quotient_isometry")]
    QuotientIsometry,
    #[serde(rename = "kernel_closure")]
    KernelClosure,
    #[serde(rename = "duality")]
    Duality,
    #[serde(rename = "surjectivity")]
    Surjectivity,
    #[serde(rename = "weil")]
    Weil,
    #[serde(rename = "sigma_relation")]
    SigmaRelation,
}

impl TheoremId {
    pub const ALL: [TheoremId; 14] = [
        TheoremId::IntertwineR,
        TheoremId::IntertwineL,
        TheoremId::NormalFormula,
        TheoremId::LeftCharFormula,
        TheoremId::Adjointness,
        TheoremId::CompactNorm,
        TheoremId::Contraction,
        TheoremId::Infimum,
        TheoremId::QuotientIsometry,
        TheoremId::KernelClosure,
        TheoremId::Duality,
        TheoremId::Surjectivity,
        TheoremId::Weil,
        TheoremId::SigmaRelation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::IntertwineR => "intertwine_R",
            TheoremId::IntertwineL => "intertwine_L",
            TheoremId::NormalFormula => "normal_formula",
            TheoremId::LeftCharFormula => "left_char_formula",
            TheoremId::Adjointness => "adjointness",
            TheoremId::CompactNorm => "compact_norm",
            TheoremId::Contraction => "contraction",
            TheoremId::Infimum => "infimum",
            TheoremId::QuotientIsometry => "quotient_isometry",
            TheoremId::KernelClosure => "kernel_closure",
            TheoremId::Duality => "duality",
            TheoremId::Surjectivity => "surjectivity",
            TheoremId::Weil => "weil",
            TheoremId::SigmaRelation => "sigma_relation",
        }
    }

    fn index(self) -> u64 {
        TheoremId::ALL
            .iter()
            .position(|&t| t == self)
            .expect("listed") as u64
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownTheorem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CharacterKey {
    pub modulus: u32,
    pub exponents: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CaseKey {
    pub group: String,
    pub subgroup: Vec<usize>,
    pub character: CharacterKey,
}

impl CaseKey {
    pub fn new(g: &FiniteGroup, xi: &Character) -> Self {
        CaseKey {
            group: g.name().to_string(),
            subgroup: xi.domain().members().to_vec(),
            character: CharacterKey {
                modulus: xi.modulus(),
                exponents: xi.exponents().to_vec(),
            },
        }
    }

    /// Stable 64-bit digest used to derive the per-case random stream.
    fn digest(&self) -> u64 {
        let text = serde_json::to_string(self).expect("plain data");
        // FNV-1a
        text.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
        })
    }
}

impl fmt::Display for CaseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} N={:?} xi=(m={}, {:?})",
            self.group, self.subgroup, self.character.modulus, self.character.exponents
        )
    }
}

/// One check result, as it appears in the report document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub id: String,
    pub status: Status,
    #[serde(with = "residual_serde")]
    pub residual: f64,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckEntry {
    pub fn from_residual(
        id: impl Into<String>,
        residual: f64,
        tolerance: f64,
        samples: usize,
    ) -> Self {
        let pass = residual <= tolerance;
        CheckEntry {
            id: id.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            residual,
            samples,
            detail: (!pass)
                .then(|| format!("residual {residual:e} exceeds tolerance {tolerance:e}")),
        }
    }

    pub fn from_error(id: impl Into<String>, err: &Error) -> Self {
        CheckEntry {
            id: id.into(),
            status: Status::Fail,
            residual: f64::INFINITY,
            samples: 0,
            detail: Some(err.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Non-finite residuals (from checks that raised an error) become `null`.
mod residual_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &f64, s: S) -> Result<S::Ok, S::Error> {
        if r.is_finite() {
            s.serialize_f64(*r)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub case_key: CaseKey,
    pub weights: HaarData,
    pub theorem_id: TheoremId,
    pub status: Status,
    pub residual: f64,
    pub samples: usize,
    pub detail: Option<String>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn entry(&self) -> CheckEntry {
        CheckEntry {
            id: self.theorem_id.as_str().to_string(),
            status: self.status,
            residual: self.residual,
            samples: self.samples,
            detail: self.detail.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Snap random values to multiples of 1/16.
    pub snap: bool,
    pub weights: WeightPolicy,
    /// Descent restarts per sampled covariant function in the infimum check.
    pub descent_restarts: usize,
    pub descent_steps: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            trials: 100,
            seed: 7,
            tolerance: FINITE_TOLERANCE,
            snap: true,
            weights: WeightPolicy::default(),
            descent_restarts: 2,
            descent_steps: 40,
        }
    }
}

impl SuiteConfig {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "tolerance {} must be positive",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Everything a check needs about one (G, N, ξ) triple.
struct Case<'g> {
    space: CovariantSpace<'g>,
    kernel: SubspaceBasis,
    /// `σ_N(x)` for every `x ∈ G`.
    sigma: Vec<f64>,
    config: SuiteConfig,
    digest: u64,
}

impl<'g> Case<'g> {
    fn new(
        g: &'g FiniteGroup,
        xi: &Character,
        haar: HaarData,
        config: SuiteConfig,
    ) -> Result<Self> {
        let space = CovariantSpace::new(g, xi.clone(), haar)?;
        let kernel = space.kernel_basis();
        let sigma = (0..g.order())
            .map(|x| haar::sigma_n(g, xi.domain(), haar.v, x))
            .collect::<Result<_>>()?;
        Ok(Case {
            space,
            kernel,
            sigma,
            config,
            digest: CaseKey::new(g, xi).digest(),
        })
    }

    fn rng(&self, theorem: TheoremId) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed ^ self.digest);
        rng.set_stream(theorem.index());
        rng
    }

    fn g(&self) -> &'g FiniteGroup {
        self.space.group()
    }

    fn n(&self) -> &Subgroup {
        self.space.character().domain()
    }

    fn xi(&self, s: usize) -> Complex64 {
        self.space.character().evaluate(s).expect("s in N")
    }

    fn random(&self, rng: &mut ChaCha8Rng) -> GroupFunction {
        GroupFunction::random(self.g().order(), rng, self.config.snap)
    }

    fn t(&self, f: &GroupFunction) -> GroupFunction {
        self.space.t_xi_raw(f).expect("orders match")
    }

    /// Runs one check, returning `(residual, samples)`.
    fn check(&self, id: TheoremId) -> Result<(f64, usize)> {
        let mut rng = self.rng(id);
        let trials = self.config.trials;
        let g = self.g();
        let mut worst: f64 = 0.0;
        let mut samples = 0;
        match id {
            TheoremId::IntertwineR => {
                for _ in 0..trials {
                    let f = self.random(&mut rng);
                    let tf = self.t(&f);
                    for (pos, &k) in self.n().members().iter().enumerate() {
                        let lhs = self.t(&translate(g, &f, Direction::Right, k)?);
                        let rhs = tf.scaled(self.xi(k) * self.space.delta_n_inv(pos));
                        worst = worst.max(lhs.max_diff(&rhs));
                        samples += 1;
                    }
                }
            }
            TheoremId::IntertwineL => {
                for _ in 0..trials {
                    let f = self.random(&mut rng);
                    let tf = self.t(&f);
                    for y in 0..g.order() {
                        let lhs = self.t(&translate(g, &f, Direction::Left, y)?);
                        let rhs = translate(g, &tf, Direction::Left, y)?;
                        worst = worst.max(lhs.max_diff(&rhs));
                        samples += 1;
                    }
                }
            }
            TheoremId::NormalFormula => {
                let v = self.space.haar().v;
                for _ in 0..trials {
                    let f = self.random(&mut rng);
                    let tf = self.t(&f);
                    for x in 0..g.order() {
                        let sum: Complex64 = self
                            .n()
                            .members()
                            .iter()
                            .map(|&s| f.at(g.mul(s, x)) * self.xi(g.conj(x, s)).conj())
                            .sum();
                        worst = worst.max((tf.at(x) - self.sigma[x] * v * sum).norm());
                    }
                    samples += 1;
                }
            }
            TheoremId::LeftCharFormula => {
                for _ in 0..trials {
                    let f = self.random(&mut rng);
                    let tf = self.t(&f);
                    for &k in self.n().members() {
                        let lhs = self.t(&translate(g, &f, Direction::Left, k)?);
                        for x in 0..g.order() {
                            let rhs = self.xi(g.conj(x, k)).conj() * tf.at(x);
                            worst = worst.max((lhs.at(x) - rhs).norm());
                        }
                        samples += 1;
                    }
                }
            }
            TheoremId::Adjointness => {
                for _ in 0..trials {
                    let f = self.random(&mut rng);
                    let h = self.random(&mut rng);
                    let lhs = self.space.pairing(&self.t(&f), &h)?;
                    let rhs = self.space.pairing(&f, &self.t(&h))?;
                    worst = worst.max((lhs - rhs).norm());
                    samples += 1;
                }
            }
            TheoremId::CompactNorm => {
                let haar = self.space.haar();
                let mass = haar.v * self.n().len() as f64;
                for i in 0..trials {
                    // alternate between free covariant samples and images of T_ξ
                    let psi = if i % 2 == 0 {
                        self.space.random_covariant(&mut rng, self.config.snap)?
                    } else {
                        self.space.t_xi(&self.random(&mut rng))?
                    };
                    let l1 = self.space.l1_norm(psi.function());
                    worst = worst.max((l1 - mass * self.space.norm_one(&psi)).abs());
                    samples += 1;
                }
            }
            TheoremId::Contraction => {
                let zero = GroupFunction::zeros(g.order());
                let mut fs = vec![zero];
                fs.extend((0..trials).map(|_| self.random(&mut rng)));
                for f in &fs {
                    let lhs = self.space.norm_one_unchecked(&self.t(f));
                    worst = worst.max(lhs - self.space.l1_norm(f));
                    samples += 1;
                }
            }
            TheoremId::Infimum => {
                for _ in 0..trials {
                    let psi = self.space.random_covariant(&mut rng, self.config.snap)?;
                    let target = self.space.norm_one(&psi);
                    let lift = self.space.minimal_lift(&psi);
                    worst = worst.max(self.t(&lift).max_diff(psi.function()));
                    worst = worst.max((self.space.l1_norm(&lift) - target).abs());
                    let found = self.space.kernel_descent(
                        &lift,
                        &self.kernel,
                        self.config.descent_restarts,
                        self.config.descent_steps,
                        &mut rng,
                    );
                    worst = worst.max(target - found);
                    samples += 1;
                }
            }
            TheoremId::QuotientIsometry => {
                for _ in 0..trials {
                    let f = self.random(&mut rng);
                    let psi = self.space.t_xi(&f)?;
                    let claimed = self.space.quotient_norm(&f)?;
                    let lift = self.space.minimal_lift(&psi);
                    // the lift lies in f + N_ξ and attains the claimed value
                    worst = worst.max(self.t(&f.sub(&lift)).sup_norm());
                    worst = worst.max((self.space.l1_norm(&lift) - claimed).abs());
                    // no other point of the coset goes below it
                    let k = self.kernel.random_element(g.order(), &mut rng, 1.0);
                    let other = f.add_scaled(Complex64::new(1.0, 0.0), &k);
                    worst = worst.max(claimed - self.space.l1_norm(&other));
                    worst = worst.max(claimed - self.space.l1_norm(&f));
                    samples += 1;
                }
            }
            TheoremId::KernelClosure => {
                let full = self.space.l1_kernel_basis();
                worst = worst.max(full.distance(&self.kernel));
                let span = self.space.span_translates_basis()?;
                worst = worst.max(span.containment_residual);
                worst = worst.max(self.kernel.gram_deviation(self.space.haar()));
                samples = 1;
            }
            TheoremId::Duality => {
                let haar = *self.space.haar();
                let linf = self.space.linfty_xi_basis();
                let ann = annihilator_basis(&self.kernel, g.order(), &haar);
                worst = worst.max(ann.distance(&linf));
                let reps = self.space.cosets().representatives().to_vec();
                for _ in 0..trials {
                    let h = linf.random_element(g.order(), &mut rng, 1.0);
                    let f = self.random(&mut rng);
                    // Λ_h(f) = ∫_{G/N} T_ξ f · conj(h) dλ_{G/N}
                    let tf = self.t(&f);
                    let through_quotient: Complex64 = reps
                        .iter()
                        .map(|&r| haar.w * tf.at(r) * h.at(r).conj())
                        .sum();
                    worst = worst.max((self.space.pairing(&f, &h)? - through_quotient).norm());
                    // ‖Λ_h‖ = ‖h‖_∞, attained on a single-coset function
                    let mut best: f64 = 0.0;
                    for c in 0..reps.len() {
                        let psi = self.space.coset_indicator(c)?;
                        let lift = self.space.minimal_lift(&psi);
                        best = best
                            .max(self.space.pairing(&lift, &h)?.norm() / self.space.norm_one(&psi));
                    }
                    worst = worst.max((best - h.sup_norm()).abs());
                    let ratio = self.space.pairing(&f, &h)?.norm()
                        - h.sup_norm() * self.space.norm_one_unchecked(&tf);
                    worst = worst.max(ratio);
                    samples += 1;
                }
            }
            TheoremId::Surjectivity => {
                let expected = g.order() - self.space.cosets().num_cosets();
                worst = worst.max((self.kernel.dimension as f64 - expected as f64).abs());
                for _ in 0..trials {
                    let psi = self.space.random_covariant(&mut rng, self.config.snap)?;
                    let lift = self.space.minimal_lift(&psi);
                    worst = worst.max(self.t(&lift).max_diff(psi.function()));
                    samples += 1;
                }
            }
            TheoremId::Weil => {
                let haar = self.space.haar();
                for _ in 0..trials {
                    let f = self.random(&mut rng);
                    let lhs: Complex64 = self.space.t_n(&f)?.iter().map(|z| z * haar.w).sum();
                    let rhs: Complex64 = f.values().iter().map(|z| z * haar.u).sum();
                    worst = worst.max((lhs - rhs).norm());
                    samples += 1;
                }
            }
            TheoremId::SigmaRelation => {
                let haar = self.space.haar();
                for x in 0..g.order() {
                    let delta_g = haar::modular_function(g, haar.u, x)?;
                    let delta_q = haar::quotient_modular_function(self.space.cosets(), haar.w, x)?;
                    worst = worst.max((delta_g - self.sigma[x] * delta_q).abs());
                    for y in 0..g.order() {
                        worst = worst
                            .max((self.sigma[g.mul(x, y)] - self.sigma[x] * self.sigma[y]).abs());
                    }
                    samples += 1;
                }
            }
        }
        Ok((worst.max(0.0), samples))
    }

    fn report(&self, id: TheoremId, key: &CaseKey) -> TheoremReport {
        let entry = match self.check(id) {
            Ok((residual, samples)) => {
                CheckEntry::from_residual(id.as_str(), residual, self.config.tolerance, samples)
            }
            Err(e) => CheckEntry::from_error(id.as_str(), &e),
        };
        TheoremReport {
            case_key: key.clone(),
            weights: *self.space.haar(),
            theorem_id: id,
            status: entry.status,
            residual: entry.residual,
            samples: entry.samples,
            detail: entry.detail,
        }
    }
}

/// Runs all fourteen checks on one triple. The character is used as given,
/// so a corrupted one produces failures instead of an error.
pub fn run_case(
    g: &FiniteGroup,
    xi: &Character,
    haar: HaarData,
    config: &SuiteConfig,
) -> Result<Vec<TheoremReport>> {
    config.validate()?;
    let case = Case::new(g, xi, haar, *config)?;
    let key = CaseKey::new(g, xi);
    Ok(TheoremId::ALL
        .iter()
        .map(|&id| case.report(id, &key))
        .collect())
}

/// Every normal subgroup, every character, every theorem.
pub fn run_suite(g: &FiniteGroup, config: &SuiteConfig) -> Result<Vec<TheoremReport>> {
    config.validate()?;
    let mut cases = Vec::new();
    for n in enumerate_normal_subgroups(g)? {
        let haar = config.weights.resolve(n.len())?;
        for xi in enumerate_characters(g, &n)? {
            cases.push((xi, haar));
        }
    }
    let mut reports: Vec<TheoremReport> = cases
        .par_iter()
        .map(|(xi, haar)| run_case(g, xi, *haar, config))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    reports.sort_by(|a, b| (&a.case_key, a.theorem_id).cmp(&(&b.case_key, b.theorem_id)));
    Ok(reports)
}

/// Runs exactly one check.
pub fn verify_theorem(
    theorem: &str,
    g: &FiniteGroup,
    n: &Subgroup,
    xi: &Character,
    haar: HaarData,
    config: &SuiteConfig,
) -> Result<TheoremReport> {
    let id = TheoremId::from_str(theorem)?;
    config.validate()?;
    n.require_parent(g)?;
    n.require_normal(g)?;
    if xi.domain() != n {
        return Err(Error::DomainMismatch(
            "character is not defined on the given subgroup".into(),
        ));
    }
    let case = Case::new(g, xi, haar, *config)?;
    Ok(case.report(id, &CaseKey::new(g, xi)))
}

/// Outcome of the infimum falsification run on one case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfimumWitness {
    pub samples: usize,
    /// `max |‖minimal_lift(ψ)‖₁ − ‖ψ‖₍₁₎|`.
    pub lift_residual: f64,
    /// Largest amount by which descent went below `‖ψ‖₍₁₎` (0 if never).
    pub max_improvement: f64,
    pub total_restarts: usize,
}

/// Draws `samples` random covariant functions and tries to beat each
/// minimal lift by descending over the kernel.
pub fn infimum_witness(
    g: &FiniteGroup,
    xi: &Character,
    haar: HaarData,
    samples: usize,
    restarts_per_sample: usize,
    steps: usize,
    seed: u64,
) -> Result<InfimumWitness> {
    let space = CovariantSpace::new(g, xi.clone(), haar)?;
    let kernel = space.kernel_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ CaseKey::new(g, xi).digest());
    let mut out = InfimumWitness {
        samples,
        lift_residual: 0.0,
        max_improvement: 0.0,
        total_restarts: samples * restarts_per_sample,
    };
    for _ in 0..samples {
        let psi = space.random_covariant(&mut rng, false)?;
        let target = space.norm_one(&psi);
        let lift = space.minimal_lift(&psi);
        out.lift_residual = out.lift_residual.max((space.l1_norm(&lift) - target).abs());
        let found = space.kernel_descent(&lift, &kernel, restarts_per_sample, steps, &mut rng);
        out.max_improvement = out.max_improvement.max(target - found);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case_key: CaseKey,
    pub weights: HaarData,
    pub theorems: Vec<CheckEntry>,
}

/// Continuous-model results carried alongside the finite cases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousReport {
    pub model: String,
    pub omega: f64,
    pub nodes: usize,
    pub checks: Vec<CheckEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite_version: String,
    pub seed: u64,
    pub cases: Vec<CaseReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub continuous: Vec<ContinuousReport>,
}

impl SuiteReport {
    /// Groups sorted reports by case.
    pub fn new(seed: u64, reports: &[TheoremReport]) -> Self {
        let mut cases: Vec<CaseReport> = Vec::new();
        for r in reports {
            match cases.last_mut() {
                Some(c) if c.case_key == r.case_key && c.weights == r.weights => {
                    c.theorems.push(r.entry())
                }
                _ => cases.push(CaseReport {
                    case_key: r.case_key.clone(),
                    weights: r.weights,
                    theorems: vec![r.entry()],
                }),
            }
        }
        SuiteReport {
            suite_version: SUITE_VERSION.to_string(),
            seed,
            cases,
            continuous: Vec::new(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &CheckEntry> {
        self.cases
            .iter()
            .flat_map(|c| c.theorems.iter())
            .chain(self.continuous.iter().flat_map(|c| c.checks.iter()))
    }

    pub fn all_pass(&self) -> bool {
        self.entries().all(CheckEntry::passed)
    }

    pub fn num_failures(&self) -> usize {
        self.entries().filter(|e| !e.passed()).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }

    /// Human-readable summary table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            out.push_str(&format!(
                "{}  (u={}, v={}, w={})\n",
                c.case_key, c.weights.u, c.weights.v, c.weights.w
            ));
            for t in &c.theorems {
                push_entry(&mut out, t);
            }
        }
        for c in &self.continuous {
            out.push_str(&format!(
                "{} omega={} nodes={}\n",
                c.model, c.omega, c.nodes
            ));
            for t in &c.checks {
                push_entry(&mut out, t);
            }
        }
        let total = self.entries().count();
        out.push_str(&format!(
            "{} checks, {} passed, {} failed\n",
            total,
            total - self.num_failures(),
            self.num_failures()
        ));
        out
    }
}

fn push_entry(out: &mut String, t: &CheckEntry) {
    let status = if t.passed() { "pass" } else { "FAIL" };
    out.push_str(&format!(
        "  {:<18} {:<4} {:>10.3e} n={}",
        t.id, status, t.residual, t.samples
    ));
    if let Some(d) = &t.detail {
        out.push_str(&format!("  {d}"));
    }
    out.push('\n');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin_by_name;

    fn quick() -> SuiteConfig {
        SuiteConfig {
            trials: 10,
            ..SuiteConfig::default()
        }
    }

    fn a3_case() -> (FiniteGroup, Subgroup) {
        let g = builtin_by_name("S3").unwrap();
        let n = enumerate_normal_subgroups(&g)
            .unwrap()
            .into_iter()
            .find(|n| n.len() == 3)
            .unwrap();
        (g, n)
    }

    #[test]
    fn theorem_ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.as_str()));
        }
        assert!(matches!(
            "nope".parse::<TheoremId>(),
            Err(Error::UnknownTheorem(_))
        ));
    }

    #[test]
    fn non_invariant_characters_pass_on_heisenberg() {
        let g = builtin_by_name("Heis3").unwrap();
        let config = SuiteConfig {
            trials: 5,
            ..quick()
        };
        let reports = run_suite(&g, &config).unwrap();
        let failed: Vec<_> = reports
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.theorem_id)
            .collect();
        assert!(failed.is_empty(), "{failed:?}");
    }

    #[test]
    fn s3_suite_has_84_passing_reports() {
        let g = builtin_by_name("S3").unwrap();
        let reports = run_suite(&g, &quick()).unwrap();
        assert_eq!(reports.len(), 84);
        for r in &reports {
            assert!(
                r.passed(),
                "{} {} {:e} {:?}",
                r.case_key,
                r.theorem_id,
                r.residual,
                r.detail
            );
        }
        let mut sorted = reports.clone();
        sorted.sort_by(|a, b| (&a.case_key, a.theorem_id).cmp(&(&b.case_key, b.theorem_id)));
        assert_eq!(sorted, reports);
    }

    #[test]
    fn trivial_group_residuals_vanish() {
        let g = builtin_by_name("trivial").unwrap();
        let reports = run_suite(&g, &quick()).unwrap();
        assert_eq!(reports.len(), 14);
        for r in reports {
            assert!(r.passed());
            assert!(r.residual < 1e-15, "{} {:e}", r.theorem_id, r.residual);
        }
    }

    #[test]
    fn single_theorem_examples() {
        let (g, n) = a3_case();
        let xi = enumerate_characters(&g, &n).unwrap()[1].clone();
        let config = SuiteConfig {
            trials: 100,
            seed: 7,
            ..SuiteConfig::default()
        };
        let r = verify_theorem("adjointness", &g, &n, &xi, HaarData::counting(), &config).unwrap();
        assert!(r.passed() && r.residual <= 1e-12);

        let z4 = builtin_by_name("Z4").unwrap();
        let n = crate::group::Subgroup::new(&z4, &[0, 2]).unwrap();
        let r = verify_theorem(
            "duality",
            &z4,
            &n,
            &Character::trivial(&n),
            HaarData::counting(),
            &config,
        )
        .unwrap();
        assert!(r.passed() && r.residual <= 1e-12, "{:e}", r.residual);

        assert!(matches!(
            verify_theorem(
                "bogus",
                &z4,
                &n,
                &Character::trivial(&n),
                HaarData::counting(),
                &config
            ),
            Err(Error::UnknownTheorem(_))
        ));
        let (g, _) = a3_case();
        let t = (0..6).find(|&x| g.label(x) == "(12)").unwrap();
        let h = Subgroup::new(&g, &[0, t]).unwrap();
        assert!(matches!(
            verify_theorem(
                "weil",
                &g,
                &h,
                &Character::trivial(&h),
                HaarData::counting(),
                &config
            ),
            Err(Error::NotNormal { .. })
        ));
    }

    #[test]
    fn reports_are_deterministic() {
        let g = builtin_by_name("D4").unwrap();
        let a = SuiteReport::new(7, &run_suite(&g, &quick()).unwrap()).to_json();
        let b = SuiteReport::new(7, &run_suite(&g, &quick()).unwrap()).to_json();
        assert_eq!(a, b);
        let c = SuiteReport::new(
            8,
            &run_suite(&g, &SuiteConfig { seed: 8, ..quick() }).unwrap(),
        )
        .to_json();
        assert_ne!(a, c);
    }

    #[test]
    fn corrupted_character_is_detected() {
        let (g, n) = a3_case();
        let xi = enumerate_characters(&g, &n).unwrap()[1].clone();
        let pos = n.position(n.members()[1]).unwrap();
        let bad = xi.with_corrupted_exponent(pos);
        let reports = run_case(&g, &bad, HaarData::counting(), &quick()).unwrap();
        let failed: Vec<TheoremId> = reports
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.theorem_id)
            .collect();
        assert!(failed.contains(&TheoremId::Adjointness), "{failed:?}");
        assert!(failed.contains(&TheoremId::IntertwineR), "{failed:?}");
    }

    #[test]
    fn report_json_shape() {
        let g = builtin_by_name("Z2").unwrap();
        let report = SuiteReport::new(7, &run_suite(&g, &quick()).unwrap());
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(v["suite_version"], SUITE_VERSION);
        assert_eq!(v["seed"], 7);
        let cases = v["cases"].as_array().unwrap();
        assert_eq!(cases.len(), 3);
        let first = &cases[0];
        assert!(first["case_key"]["group"].is_string());
        assert!(first["case_key"]["subgroup"].is_array());
        assert!(first["case_key"]["character"]["exponents"].is_array());
        let theorems = first["theorems"].as_array().unwrap();
        assert_eq!(theorems.len(), 14);
        assert_eq!(theorems[0]["id"], "intertwine_R");
        assert_eq!(theorems[0]["status"], "pass");
        let back: SuiteReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
        assert!(report.all_pass());
        assert!(report.to_text().contains("42 checks, 42 passed, 0 failed"));
    }

    #[test]
    fn infimum_witness_on_d4() {
        let g = builtin_by_name("D4").unwrap();
        for n in enumerate_normal_subgroups(&g).unwrap() {
            for xi in enumerate_characters(&g, &n).unwrap() {
                let w = infimum_witness(&g, &xi, HaarData::counting(), 5, 4, 40, 1).unwrap();
                assert!(w.lift_residual <= 1e-12);
                assert!(w.max_improvement <= 1e-6);
            }
        }
    }
}
