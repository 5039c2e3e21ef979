//! The affine group of the line, `(a, b)·(a′, b′) = (a·a′, b + a·b′)` with
//! `a > 0`, and its closed normal subgroup `N = {(1, b)}`.
//!
//! Left Haar measure has density `a⁻² da db`, `λ_N = db` and
//! `λ_{G/N} = da/a`; these satisfy Weil's formula. All integrals are tensor
//! Gauss–Legendre sums over a truncated box, with the `a` axis mapped through
//! `log a`. Characters of `N` are `ξ_ω(1, s) = exp(iωs)` and `T_ξ` integrates
//! against `conj(ξ_ω(s)) = exp(−iωs)`; the opposite sign convention only
//! relabels `ω ↦ −ω`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verifier::{CheckEntry, ContinuousReport, CONTINUOUS_TOLERANCE};

/// Largest `|f|` tolerated on the boundary of the truncation box.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;
/// Tolerance for adjointness and intertwining under quadrature.
pub const PAIRING_TOLERANCE: f64 = 1e-5;
/// Required error reduction when node counts double.
pub const REFINEMENT_FACTOR: f64 = 4.0;
/// Residuals below this are treated as converged in refinement studies.
pub const REFINEMENT_FLOOR: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxbPoint {
    pub a: f64,
    pub b: f64,
}

impl AxbPoint {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0 && b.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "({a}, {b}) is not a point of the ax+b group"
            )));
        }
        Ok(AxbPoint { a, b })
    }

    pub const IDENTITY: AxbPoint = AxbPoint { a: 1.0, b: 0.0 };

    pub fn inv(self) -> AxbPoint {
        AxbPoint {
            a: 1.0 / self.a,
            b: -self.b / self.a,
        }
    }

    /// The subgroup element `(1, t)`.
    pub fn translation(t: f64) -> AxbPoint {
        AxbPoint { a: 1.0, b: t }
    }
}

impl std::ops::Mul for AxbPoint {
    type Output = AxbPoint;

    fn mul(self, other: AxbPoint) -> AxbPoint {
        AxbPoint {
            a: self.a * other.a,
            b: self.b + self.a * other.b,
        }
    }
}

/// Box and node counts for a [`QuadratureGrid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub a_min: f64,
    pub a_max: f64,
    pub b_max: f64,
    pub a_nodes: usize,
    pub b_nodes: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            a_min: 0.125,
            a_max: 8.0,
            b_max: 16.0,
            a_nodes: 128,
            b_nodes: 128,
        }
    }
}

impl GridSpec {
    pub fn with_nodes(nodes: usize) -> Self {
        GridSpec {
            a_nodes: nodes,
            b_nodes: nodes,
            ..GridSpec::default()
        }
    }

    pub fn doubled(self) -> Self {
        GridSpec {
            a_nodes: 2 * self.a_nodes,
            b_nodes: 2 * self.b_nodes,
            ..self
        }
    }
}

/// Tensor Gauss–Legendre rule on `[a_min, a_max] × [−B, B]`.
///
/// `a_weights` integrate against `da/a` (Gauss–Legendre in `log a`);
/// `b_weights` integrate against `db`. The `b` rule doubles as the rule for
/// the subgroup variable `s` in `T_ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    spec: GridSpec,
    pub a_nodes: Vec<f64>,
    pub a_weights: Vec<f64>,
    pub b_nodes: Vec<f64>,
    pub b_weights: Vec<f64>,
}

fn legendre(n: usize, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = NonZeroUsize::new(n)
        .ok_or_else(|| Error::GridTooCoarse("node count must be positive".into()))?;
    let rule = GaussLegendre::new(n);
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    Ok(rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .unzip())
}

impl QuadratureGrid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        if !(spec.a_min > 0.0 && spec.a_max > spec.a_min && spec.a_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dilation range [{}, {}] must satisfy 0 < a_min < a_max",
                spec.a_min, spec.a_max
            )));
        }
        if !(spec.b_max > 0.0 && spec.b_max.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "translation half-width {} must be positive",
                spec.b_max
            )));
        }
        let (logs, a_weights) = legendre(spec.a_nodes, spec.a_min.ln(), spec.a_max.ln())?;
        let (b_nodes, b_weights) = legendre(spec.b_nodes, -spec.b_max, spec.b_max)?;
        Ok(QuadratureGrid {
            spec,
            a_nodes: logs.into_iter().map(f64::exp).collect(),
            a_weights,
            b_nodes,
            b_weights,
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    /// `λ_G` of the box, `2B (1/a_min − 1/a_max)`.
    pub fn box_measure(&self) -> f64 {
        2.0 * self.spec.b_max * (1.0 / self.spec.a_min - 1.0 / self.spec.a_max)
    }

    /// Largest gap between consecutive subgroup-variable nodes.
    pub fn max_s_spacing(&self) -> f64 {
        self.b_nodes
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Errors unless every oscillation of `exp(−iωs)` gets at least eight
    /// nodes: `max spacing ≤ π / (4|ω|)`.
    pub fn require_resolves(&self, omega: f64) -> Result<()> {
        let spacing = self.max_s_spacing();
        if spacing * omega.abs() > FRAC_PI_4 {
            return Err(Error::GridTooCoarse(format!(
                "node spacing {spacing:.4} exceeds pi/(4|omega|) = {:.4} for omega = {omega}",
                FRAC_PI_4 / omega.abs()
            )));
        }
        Ok(())
    }

    /// `∫_G f dλ_G = ∬ f(a, b) a⁻² da db`.
    pub fn integrate(&self, f: impl Fn(f64, f64) -> Complex64 + Sync) -> Complex64 {
        self.a_nodes
            .par_iter()
            .zip(&self.a_weights)
            .map(|(&a, &wa)| {
                let row: Complex64 = self
                    .b_nodes
                    .iter()
                    .zip(&self.b_weights)
                    .map(|(&b, &wb)| f(a, b) * wb)
                    .sum();
                row * (wa / a)
            })
            .sum()
    }

    /// `∫_{G/N} φ dλ_{G/N} = ∫ φ(a) da/a`.
    pub fn integrate_quotient(&self, phi: impl Fn(f64) -> Complex64) -> Complex64 {
        self.a_nodes
            .iter()
            .zip(&self.a_weights)
            .map(|(&a, &w)| phi(a) * w)
            .sum()
    }

    /// `∫_N φ dλ_N = ∫ φ(t) dt`.
    pub fn integrate_subgroup(&self, phi: impl Fn(f64) -> Complex64) -> Complex64 {
        self.b_nodes
            .iter()
            .zip(&self.b_weights)
            .map(|(&t, &w)| phi(t) * w)
            .sum()
    }
}

/// Gaussian in `log a` times a modulated Gaussian in `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump {
    pub log_center: f64,
    pub log_width: f64,
    pub b_center: f64,
    pub b_width: f64,
    pub frequency: f64,
    pub amplitude: Complex64,
}

impl Default for Bump {
    fn default() -> Self {
        Bump {
            log_center: 0.0,
            log_width: 0.15,
            b_center: 0.0,
            b_width: 1.0,
            frequency: 0.0,
            amplitude: Complex64::new(1.0, 0.0),
        }
    }
}

impl Bump {
    /// A random member of the smooth test family, centred well inside the
    /// default box.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Bump {
            log_center: rng.gen_range(-0.3..=0.3),
            log_width: rng.gen_range(0.12..=0.18),
            b_center: rng.gen_range(-2.0..=2.0),
            b_width: rng.gen_range(0.7..=1.3),
            frequency: rng.gen_range(-1.0..=1.0),
            amplitude: Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)),
        }
    }

    /// `φ(a) = exp(−(log a − μ)² / 2σ²)`.
    pub fn dilation_profile(&self, a: f64) -> f64 {
        let z = (a.ln() - self.log_center) / self.log_width;
        (-0.5 * z * z).exp()
    }

    pub fn eval(&self, a: f64, b: f64) -> Complex64 {
        let y = (b - self.b_center) / self.b_width;
        let envelope = self.dilation_profile(a) * (-0.5 * y * y).exp();
        self.amplitude * Complex64::from_polar(envelope, self.frequency * b)
    }
}

/// A function on the ax+b group, effectively supported inside a box.
#[derive(Clone)]
pub struct AxbFunction {
    eval: Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>,
    bound: f64,
}

impl fmt::Debug for AxbFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AxbFunction")
            .field("bound", &self.bound)
            .finish_non_exhaustive()
    }
}

impl AxbFunction {
    /// `bound` is a declared upper bound for `|f|`.
    pub fn new(bound: f64, f: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static) -> Self {
        AxbFunction {
            eval: Arc::new(f),
            bound,
        }
    }

    pub fn zero() -> Self {
        AxbFunction::new(0.0, |_, _| Complex64::new(0.0, 0.0))
    }

    pub fn bump(bump: Bump) -> Self {
        AxbFunction::new(bump.amplitude.norm(), move |a, b| bump.eval(a, b))
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    #[inline]
    pub fn at(&self, a: f64, b: f64) -> Complex64 {
        (self.eval)(a, b)
    }

    pub fn eval(&self, x: AxbPoint) -> Complex64 {
        self.at(x.a, x.b)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let f = self.clone();
        AxbFunction::new(self.bound * c.norm(), move |a, b| f.at(a, b) * c)
    }

    /// `L_y f(x) = f(y⁻¹x)`.
    pub fn left_translate(&self, y: AxbPoint) -> Self {
        let f = self.clone();
        let yi = y.inv();
        AxbFunction::new(self.bound, move |a, b| f.eval(yi * AxbPoint { a, b }))
    }

    /// `R_y f(x) = f(xy)`.
    pub fn right_translate(&self, y: AxbPoint) -> Self {
        let f = self.clone();
        AxbFunction::new(self.bound, move |a, b| f.eval(AxbPoint { a, b } * y))
    }

    /// Largest `|f|` sampled along the four edges of the box; errors if it
    /// exceeds [`BOUNDARY_TOLERANCE`] or if an interior node exceeds the
    /// declared bound.
    pub fn check_hygiene(&self, grid: &QuadratureGrid) -> Result<f64> {
        let spec = grid.spec();
        let mut edge: f64 = 0.0;
        for &b in &grid.b_nodes {
            edge = edge
                .max(self.at(spec.a_min, b).norm())
                .max(self.at(spec.a_max, b).norm());
        }
        for &a in &grid.a_nodes {
            edge = edge
                .max(self.at(a, -spec.b_max).norm())
                .max(self.at(a, spec.b_max).norm());
        }
        if edge > BOUNDARY_TOLERANCE {
            return Err(Error::InvalidArgument(format!(
                "function reaches {edge:e} on the truncation boundary"
            )));
        }
        let peak = grid
            .a_nodes
            .iter()
            .flat_map(|&a| grid.b_nodes.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.at(a, b).norm())
            .fold(0.0, f64::max);
        if peak > self.bound * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument(format!(
                "function reaches {peak} above its declared bound {}",
                self.bound
            )));
        }
        Ok(edge)
    }
}

/// `T_ξ f(x) = ∫ f(a, b + a·s) exp(−iωs) ds`, by quadrature in `s`.
pub fn t_xi_axb(
    f: &AxbFunction,
    omega: f64,
    x: AxbPoint,
    grid: &QuadratureGrid,
) -> Result<Complex64> {
    grid.require_resolves(omega)?;
    Ok(t_xi_unchecked(f, omega, x, grid))
}

fn t_xi_unchecked(f: &AxbFunction, omega: f64, x: AxbPoint, grid: &QuadratureGrid) -> Complex64 {
    grid.b_nodes
        .iter()
        .zip(&grid.b_weights)
        .map(|(&s, &w)| f.at(x.a, x.b + x.a * s) * Complex64::from_polar(w, -omega * s))
        .sum()
}

/// `T_ξ f` at every node of the grid, indexed `[i * b_nodes + j]`.
pub fn t_xi_on_grid(f: &AxbFunction, omega: f64, grid: &QuadratureGrid) -> Result<Vec<Complex64>> {
    grid.require_resolves(omega)?;
    Ok(grid
        .a_nodes
        .par_iter()
        .flat_map_iter(|&a| {
            grid.b_nodes
                .iter()
                .map(move |&b| t_xi_unchecked(f, omega, AxbPoint { a, b }, grid))
        })
        .collect())
}

/// `T_ξ f` for `f = φ(a)·exp(−b²/2)`.
pub fn gaussian_t_xi(phi_a: f64, omega: f64, x: AxbPoint) -> Complex64 {
    let modulus = phi_a * (2.0 * PI).sqrt() / x.a * (-omega * omega / (2.0 * x.a * x.a)).exp();
    Complex64::from_polar(modulus, omega * x.b / x.a)
}

/// `|∫_{G/N} T_N f dλ_{G/N} − ∫_G f dλ_G|`.
///
/// The left side evaluates `T_N f(aN) = ∫ f(a, a·s) ds` with the subgroup
/// rule; the right side is the direct tensor sum, so the two are independent
/// discretizations of the same double integral.
pub fn weil_check_axb(f: &AxbFunction, grid: &QuadratureGrid) -> Result<f64> {
    f.check_hygiene(grid)?;
    let lhs = grid.integrate_quotient(|a| t_xi_unchecked(f, 0.0, AxbPoint { a, b: 0.0 }, grid));
    let rhs = grid.integrate(|a, b| f.at(a, b));
    Ok((lhs - rhs).norm())
}

/// Measured `σ_N`, `Δ_G` and `Δ_{G/N}` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaCheck {
    pub sigma: f64,
    /// `|σ_N(x) − 1/a|`.
    pub residual: f64,
    pub modular: f64,
    pub quotient_modular: f64,
    /// `|Δ_G(x) − σ_N(x)·Δ_{G/N}(xN)|`.
    pub relation_residual: f64,
    /// `|Δ_G(x) − 1/a|`.
    pub modular_residual: f64,
}

fn subgroup_probe(t: f64) -> Complex64 {
    Complex64::new((-0.5 * t * t).exp(), 0.0)
}

/// Probe for `λ_G` quotients, centred at `log_center` in `log a`.
fn group_probe(log_center: f64) -> Bump {
    Bump {
        log_center,
        log_width: 0.15,
        ..Bump::default()
    }
}

/// `σ_N(x) = ∫_N φ(x t x⁻¹) dλ_N(t) / ∫_N φ dλ_N` for a fixed bump `φ`.
pub fn sigma_n_axb(x: AxbPoint, grid: &QuadratureGrid) -> Result<f64> {
    let x = AxbPoint::new(x.a, x.b)?;
    let plain = grid.integrate_subgroup(subgroup_probe);
    let pushed =
        grid.integrate_subgroup(|t| subgroup_probe((x * AxbPoint::translation(t) * x.inv()).b));
    Ok((pushed / plain).re)
}

/// `Δ_G(x) = ∫ f dλ_G / ∫ R_x f dλ_G`, measured by quadrature.
pub fn modular_function_axb(x: AxbPoint, grid: &QuadratureGrid) -> Result<f64> {
    let x = AxbPoint::new(x.a, x.b)?;
    // centred so that f and R_x f sit symmetrically inside the box
    let f = AxbFunction::bump(group_probe(0.5 * x.a.ln()));
    f.check_hygiene(grid)?;
    let shifted = f.right_translate(x);
    shifted.check_hygiene(grid)?;
    Ok((grid.integrate(|a, b| f.at(a, b)) / grid.integrate(|a, b| shifted.at(a, b))).re)
}

/// `Δ_{G/N}(aN)` from the same quotient on `(0, ∞)` with `da/a`.
pub fn quotient_modular_function_axb(x: AxbPoint, grid: &QuadratureGrid) -> Result<f64> {
    let x = AxbPoint::new(x.a, x.b)?;
    let probe = group_probe(0.5 * x.a.ln());
    let phi = |a: f64| Complex64::new(probe.dilation_profile(a), 0.0);
    Ok((grid.integrate_quotient(phi) / grid.integrate_quotient(|a| phi(a * x.a))).re)
}

/// Measures `σ_N`, `Δ_G` and `Δ_{G/N}` at `x` and compares them with
/// `σ_N = 1/a` and `Δ_G = σ_N·Δ_{G/N}`.
pub fn sigma_check_axb(x: AxbPoint, grid: &QuadratureGrid) -> Result<SigmaCheck> {
    let sigma = sigma_n_axb(x, grid)?;
    let modular = modular_function_axb(x, grid)?;
    let quotient_modular = quotient_modular_function_axb(x, grid)?;
    let expected = 1.0 / x.a;
    Ok(SigmaCheck {
        sigma,
        residual: (sigma - expected).abs(),
        modular,
        quotient_modular,
        relation_residual: (modular - sigma * quotient_modular).abs(),
        modular_residual: (modular - expected).abs(),
    })
}

/// `σ_G(α)` for `α(a, b) = (a, c·b)`: `∫ f dλ_G / ∫ f∘α dλ_G`.
pub fn haar_modulus_axb(c: f64, grid: &QuadratureGrid) -> Result<f64> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scaling {c} must be positive"
        )));
    }
    let f = AxbFunction::bump(group_probe(0.0));
    f.check_hygiene(grid)?;
    let composed = {
        let f = f.clone();
        AxbFunction::new(f.bound(), move |a, b| f.at(a, c * b))
    };
    composed.check_hygiene(grid)?;
    Ok((grid.integrate(|a, b| f.at(a, b)) / grid.integrate(|a, b| composed.at(a, b))).re)
}

/// `⟨f, g⟩ = ∫ f·conj(g) dλ_G`, with `f` given by its grid values.
fn pair_with_values(values: &[Complex64], g: &AxbFunction, grid: &QuadratureGrid) -> Complex64 {
    let nb = grid.b_nodes.len();
    grid.a_nodes
        .iter()
        .zip(&grid.a_weights)
        .enumerate()
        .map(|(i, (&a, &wa))| {
            let row: Complex64 = grid
                .b_nodes
                .iter()
                .zip(&grid.b_weights)
                .enumerate()
                .map(|(j, (&b, &wb))| values[i * nb + j] * g.at(a, b).conj() * wb)
                .sum();
            row * (wa / a)
        })
        .sum()
}

/// `|⟨T_ξ f, g⟩ − ⟨f, T_ξ g⟩|`.
pub fn adjointness_axb(
    f: &AxbFunction,
    g: &AxbFunction,
    omega: f64,
    grid: &QuadratureGrid,
) -> Result<f64> {
    let tf = t_xi_on_grid(f, omega, grid)?;
    let tg = t_xi_on_grid(g, omega, grid)?;
    let lhs = pair_with_values(&tf, g, grid);
    let rhs = pair_with_values(&tg, f, grid).conj();
    Ok((lhs - rhs).norm())
}

/// `(‖T_ξ f‖₍₁₎, ‖f‖_{L¹(G)})`; `|T_ξ f|` is constant on cosets so the
/// covariant norm integrates `|T_ξ f(a, 0)|` against `da/a`.
pub fn contraction_axb(f: &AxbFunction, omega: f64, grid: &QuadratureGrid) -> Result<(f64, f64)> {
    grid.require_resolves(omega)?;
    let norm_one = grid
        .integrate_quotient(|a| {
            Complex64::new(
                t_xi_unchecked(f, omega, AxbPoint { a, b: 0.0 }, grid).norm(),
                0.0,
            )
        })
        .re;
    let l1 = grid
        .integrate(|a, b| Complex64::new(f.at(a, b).norm(), 0.0))
        .re;
    Ok((norm_one, l1))
}

/// Interior sample points used for pointwise identities.
pub fn probe_points() -> Vec<AxbPoint> {
    let mut pts = Vec::new();
    for &a in &[0.7, 0.85, 1.0, 1.2, 1.4] {
        for &b in &[-2.0, -1.0, 0.0, 0.5, 1.5] {
            pts.push(AxbPoint { a, b });
        }
    }
    pts
}

/// `max |T_ξ(L_y f)(x) − T_ξ f(y⁻¹x)|` over the probe points.
pub fn intertwining_axb(
    f: &AxbFunction,
    y: AxbPoint,
    omega: f64,
    grid: &QuadratureGrid,
) -> Result<f64> {
    let shifted = f.left_translate(y);
    let mut worst: f64 = 0.0;
    for x in probe_points() {
        let lhs = t_xi_axb(&shifted, omega, x, grid)?;
        let rhs = t_xi_axb(f, omega, y.inv() * x, grid)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// `max |T_ξ f(x·(1,t)) − exp(iωt)·T_ξ f(x)|` over the probe points.
pub fn covariance_axb(f: &AxbFunction, omega: f64, grid: &QuadratureGrid) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in probe_points() {
        let base = t_xi_axb(f, omega, x, grid)?;
        for &t in &[-1.0, 0.3, 2.0] {
            let moved = t_xi_axb(f, omega, x * AxbPoint::translation(t), grid)?;
            worst = worst.max((moved - Complex64::from_polar(1.0, omega * t) * base).norm());
        }
    }
    Ok(worst)
}

/// `max |T_ξ f(x) − closed form|` for `f = φ(a)·exp(−b²/2)`.
pub fn closed_form_axb(omega: f64, grid: &QuadratureGrid) -> Result<f64> {
    let bump = Bump::default();
    let f = AxbFunction::bump(bump);
    let mut worst: f64 = 0.0;
    for x in probe_points() {
        let got = t_xi_axb(&f, omega, x, grid)?;
        let want = gaussian_t_xi(bump.dilation_profile(x.a), omega, x);
        worst = worst.max((got - want).norm());
    }
    Ok(worst)
}

/// Residuals whose exact value is zero, used by the refinement study.
pub fn convergence_residuals(
    omega: f64,
    grid: &QuadratureGrid,
) -> Result<Vec<(&'static str, f64)>> {
    let f = AxbFunction::bump(Bump::default());
    let sigma = [0.5, 2.0, 3.0]
        .iter()
        .map(|&a| sigma_check_axb(AxbPoint { a, b: 0.0 }, grid))
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![
        ("weil", weil_check_axb(&f, grid)?),
        (
            "sigma",
            sigma.iter().map(|s| s.residual).fold(0.0, f64::max),
        ),
        (
            "modular",
            sigma.iter().map(|s| s.modular_residual).fold(0.0, f64::max),
        ),
        ("closed_form", closed_form_axb(omega, grid)?),
    ])
}

/// One row of a refinement study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Refinement {
    pub name: &'static str,
    pub coarse: f64,
    pub fine: f64,
}

impl Refinement {
    /// Error reduces by [`REFINEMENT_FACTOR`], or both levels already sit at
    /// the rounding floor.
    pub fn converges(&self) -> bool {
        self.fine * REFINEMENT_FACTOR <= self.coarse
            || self.coarse.max(self.fine) <= REFINEMENT_FLOOR
    }
}

pub fn refinement_study(omega: f64, coarse: GridSpec) -> Result<Vec<Refinement>> {
    let lo = convergence_residuals(omega, &QuadratureGrid::new(coarse)?)?;
    let hi = convergence_residuals(omega, &QuadratureGrid::new(coarse.doubled())?)?;
    Ok(lo
        .into_iter()
        .zip(hi)
        .map(|((name, c), (_, f))| Refinement {
            name,
            coarse: c,
            fine: f,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxbSuiteConfig {
    pub omega: f64,
    pub nodes: usize,
    pub seed: u64,
    /// Random bump pairs for adjointness, contraction and intertwining.
    pub pairs: usize,
    /// Node count of the coarse level in the refinement study.
    pub refinement_nodes: usize,
}

impl Default for AxbSuiteConfig {
    fn default() -> Self {
        AxbSuiteConfig {
            omega: 1.0,
            nodes: 128,
            seed: 7,
            pairs: 10,
            refinement_nodes: 64,
        }
    }
}

fn entry(id: &str, r: Result<(f64, usize)>, tol: f64) -> CheckEntry {
    match r {
        Ok((residual, samples)) => CheckEntry::from_residual(id, residual, tol, samples),
        Err(e) => CheckEntry::from_error(id, &e),
    }
}

type Trial = (AxbFunction, AxbFunction, AxbPoint);

/// All continuous-model checks at one `ω`.
pub fn run_axb_suite(config: &AxbSuiteConfig) -> Result<ContinuousReport> {
    if config.pairs == 0 {
        return Err(Error::InvalidArgument(
            "at least one random pair is required".into(),
        ));
    }
    let grid = QuadratureGrid::new(GridSpec::with_nodes(config.nodes))?;
    let omega = config.omega;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let bumps: Vec<Trial> = (0..config.pairs)
        .map(|_| {
            let y = AxbPoint {
                a: rng.gen_range(0.8..=1.25),
                b: rng.gen_range(-1.0..=1.0),
            };
            (
                AxbFunction::bump(Bump::random(&mut rng)),
                AxbFunction::bump(Bump::random(&mut rng)),
                y,
            )
        })
        .collect();

    let max_over = |check: &dyn Fn(&Trial) -> Result<f64>| -> Result<(f64, usize)> {
        let mut worst: f64 = 0.0;
        for item in &bumps {
            worst = worst.max(check(item)?);
        }
        Ok((worst, bumps.len()))
    };

    let mut checks = vec![
        entry(
            "axb_box_measure",
            Ok((
                (grid.integrate(|_, _| Complex64::new(1.0, 0.0)).re - grid.box_measure()).abs(),
                1,
            )),
            1e-10,
        ),
        entry(
            "axb_weil",
            max_over(&|(f, g, _)| Ok(weil_check_axb(f, &grid)?.max(weil_check_axb(g, &grid)?)))
                .and_then(|(r, n)| {
                    Ok((
                        r.max(weil_check_axb(&AxbFunction::bump(Bump::default()), &grid)?),
                        2 * n + 1,
                    ))
                }),
            CONTINUOUS_TOLERANCE,
        ),
    ];

    let sigma_points = [0.5, 2.0, 3.0].map(|a| AxbPoint { a, b: 0.0 });
    let sigma: Result<Vec<SigmaCheck>> = sigma_points
        .iter()
        .map(|&x| sigma_check_axb(x, &grid))
        .collect();
    let sigma_mult = (|| -> Result<f64> {
        let s = |a: f64| sigma_n_axb(AxbPoint { a, b: 0.0 }, &grid);
        Ok((s(1.5)? - s(0.5)? * s(3.0)?)
            .abs()
            .max((s(1.0)? - s(2.0)? * s(0.5)?).abs()))
    })();
    checks.push(entry(
        "axb_sigma",
        sigma.clone().and_then(|v| {
            let r = v.iter().map(|c| c.residual).fold(0.0, f64::max);
            Ok((r.max(sigma_mult?), v.len() + 1))
        }),
        CONTINUOUS_TOLERANCE,
    ));
    checks.push(entry(
        "axb_sigma_relation",
        sigma.map(|v| {
            let r = v
                .iter()
                .map(|c| {
                    c.relation_residual
                        .max(c.modular_residual)
                        .max((c.quotient_modular - 1.0).abs())
                })
                .fold(0.0, f64::max);
            (r, v.len())
        }),
        CONTINUOUS_TOLERANCE,
    ));
    checks.push(entry(
        "axb_haar_modulus",
        [0.5, 2.0]
            .iter()
            .map(|&c| haar_modulus_axb(c, &grid).map(|m| (m - c).abs()))
            .collect::<Result<Vec<_>>>()
            .map(|v| (v.iter().copied().fold(0.0, f64::max), v.len())),
        CONTINUOUS_TOLERANCE,
    ));
    checks.push(entry(
        "axb_closed_form",
        closed_form_axb(omega, &grid).map(|r| (r, probe_points().len())),
        CONTINUOUS_TOLERANCE,
    ));
    checks.push(entry(
        "axb_covariance",
        max_over(&|(f, _, _)| covariance_axb(f, omega, &grid)),
        PAIRING_TOLERANCE,
    ));
    checks.push(entry(
        "axb_adjointness",
        max_over(&|(f, g, _)| adjointness_axb(f, g, omega, &grid)),
        PAIRING_TOLERANCE,
    ));
    checks.push(entry(
        "axb_contraction",
        max_over(&|(f, _, _)| contraction_axb(f, omega, &grid).map(|(n1, l1)| (n1 - l1).max(0.0))),
        CONTINUOUS_TOLERANCE,
    ));
    checks.push(entry(
        "axb_intertwine_L",
        max_over(&|(f, _, y)| intertwining_axb(f, *y, omega, &grid)),
        PAIRING_TOLERANCE,
    ));
    let refinement = refinement_study(omega, GridSpec::with_nodes(config.refinement_nodes));
    checks.push(match refinement {
        Ok(rows) => {
            // residual: worst fine/coarse ratio among rows above the floor
            let worst = rows
                .iter()
                .filter(|r| r.coarse.max(r.fine) > REFINEMENT_FLOOR)
                .map(|r| r.fine / r.coarse)
                .fold(0.0, f64::max);
            let mut e = CheckEntry::from_residual(
                "axb_refinement",
                worst,
                1.0 / REFINEMENT_FACTOR,
                rows.len(),
            );
            if !rows.iter().all(Refinement::converges) {
                e.detail = Some(
                    rows.iter()
                        .map(|r| format!("{}: {:.2e} -> {:.2e}", r.name, r.coarse, r.fine))
                        .collect::<Vec<_>>()
                        .join(", "),
                );
            }
            e
        }
        Err(e) => CheckEntry::from_error("axb_refinement", &e),
    });

    Ok(ContinuousReport {
        model: "ax+b".into(),
        omega,
        nodes: config.nodes,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> QuadratureGrid {
        QuadratureGrid::new(GridSpec::default()).unwrap()
    }

    #[test]
    fn group_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut draw = || AxbPoint {
            a: rng.gen_range(0.1..10.0),
            b: rng.gen_range(-5.0..5.0),
        };
        for _ in 0..100 {
            let (x, y, z) = (draw(), draw(), draw());
            let l = x * y * z;
            let r = x * (y * z);
            assert!(
                (l.a - r.a).abs() < 1e-12 * l.a && (l.b - r.b).abs() < 1e-12 * (1.0 + l.b.abs())
            );
            let e = x * x.inv();
            assert!((e.a - 1.0).abs() < 1e-15 && e.b.abs() < 1e-14);
            assert_eq!(x * AxbPoint::IDENTITY, x);
        }
        assert!(AxbPoint::new(0.0, 1.0).is_err());
        assert!(AxbPoint::new(-1.0, 1.0).is_err());
    }

    #[test]
    fn conjugation_scales_translations() {
        let x = AxbPoint { a: 2.5, b: -1.0 };
        let c = x * AxbPoint::translation(0.4) * x.inv();
        assert!((c.a - 1.0).abs() < 1e-15);
        assert!((c.b - 1.0).abs() < 1e-14);
    }

    #[test]
    fn grid_integrates_box_measure() {
        let g = grid();
        assert!(g.a_weights.iter().chain(&g.b_weights).all(|&w| w > 0.0));
        let total = g.integrate(|_, _| Complex64::new(1.0, 0.0)).re;
        assert!((total - 2.0 * 16.0 * (8.0 - 0.125)).abs() < 1e-10);
        assert!((total - g.box_measure()).abs() < 1e-10);
        assert!(QuadratureGrid::new(GridSpec {
            a_nodes: 0,
            ..GridSpec::default()
        })
        .is_err());
        assert!(QuadratureGrid::new(GridSpec {
            a_min: 9.0,
            ..GridSpec::default()
        })
        .is_err());
    }

    #[test]
    fn t_xi_examples() {
        let g = grid();
        let f = AxbFunction::bump(Bump::default());
        for x in probe_points() {
            // ω = 0 is T_N, which the substitution t = b + a·s turns into a
            // b-integral on the grid's own nodes
            let tn = t_xi_axb(&f, 0.0, x, &g).unwrap();
            let direct = g.integrate_subgroup(|t| f.at(x.a, t)) / x.a;
            assert!((tn - direct).norm() < 1e-10);
            assert_eq!(
                t_xi_axb(&AxbFunction::zero(), 1.0, x, &g).unwrap(),
                Complex64::new(0.0, 0.0)
            );
        }
        assert!(closed_form_axb(1.0, &g).unwrap() < 1e-6);
        assert!(closed_form_axb(0.0, &g).unwrap() < 1e-6);
        assert!(closed_form_axb(-2.0, &g).unwrap() < 1e-6);
    }

    #[test]
    fn closed_form_matches_trapezoid_oracle() {
        // independent oracle: the trapezoid rule on a fine uniform s-grid is
        // spectrally accurate for Gaussian integrands
        let bump = Bump::default();
        for &(a, b, omega) in &[(1.0, 0.0, 1.0), (0.8, 1.5, -0.7), (1.3, -2.0, 2.0)] {
            let h = 1e-3;
            let mut sum = Complex64::new(0.0, 0.0);
            let mut s = -40.0;
            while s <= 40.0 {
                sum += bump.eval(a, b + a * s) * Complex64::from_polar(h, -omega * s);
                s += h;
            }
            let closed = gaussian_t_xi(bump.dilation_profile(a), omega, AxbPoint { a, b });
            assert!((sum - closed).norm() < 1e-9, "{sum} vs {closed}");
        }
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let coarse = QuadratureGrid::new(GridSpec::with_nodes(16)).unwrap();
        let f = AxbFunction::bump(Bump::default());
        assert!(matches!(
            t_xi_axb(&f, 4.0, AxbPoint::IDENTITY, &coarse),
            Err(Error::GridTooCoarse(_))
        ));
        assert!(t_xi_axb(&f, 0.0, AxbPoint::IDENTITY, &coarse).is_ok());
    }

    #[test]
    fn weil_examples() {
        let g = grid();
        let f = AxbFunction::bump(Bump::default());
        let r = weil_check_axb(&f, &g).unwrap();
        assert!(r <= 1e-6);
        assert_eq!(weil_check_axb(&AxbFunction::zero(), &g).unwrap(), 0.0);
        let r2 = weil_check_axb(&f.scaled(Complex64::new(2.0, 0.0)), &g).unwrap();
        assert!(r2 <= 2.0 * r + 1e-15);
        let wide = AxbFunction::new(1.0, |_, _| Complex64::new(1.0, 0.0));
        assert!(weil_check_axb(&wide, &g).is_err());
    }

    #[test]
    fn sigma_examples() {
        let g = grid();
        let s = sigma_check_axb(AxbPoint { a: 2.0, b: 0.0 }, &g).unwrap();
        assert!((s.sigma - 0.5).abs() < 1e-6);
        assert!(s.relation_residual < 1e-6 && s.modular_residual < 1e-6);
        let s = sigma_n_axb(AxbPoint { a: 1.0, b: 5.0 }, &g).unwrap();
        assert!((s - 1.0).abs() < 1e-12);
        // σ(6) needs a finer subgroup rule than the default grid provides
        let fine = QuadratureGrid::new(GridSpec::with_nodes(256)).unwrap();
        let s6 = sigma_n_axb(AxbPoint { a: 6.0, b: 0.0 }, &fine).unwrap();
        let s2 = sigma_n_axb(AxbPoint { a: 2.0, b: 0.0 }, &fine).unwrap();
        let s3 = sigma_n_axb(AxbPoint { a: 3.0, b: 0.0 }, &fine).unwrap();
        assert!((s6 - 1.0 / 6.0).abs() < 1e-6);
        assert!((s6 - s2 * s3).abs() < 1e-6);
    }

    #[test]
    fn haar_modulus_of_translation_scaling() {
        let g = grid();
        for c in [0.5, 2.0] {
            assert!((haar_modulus_axb(c, &g).unwrap() - c).abs() < 1e-8);
        }
        assert!(haar_modulus_axb(-1.0, &g).is_err());
    }

    #[test]
    fn pairing_identities() {
        let g = grid();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..3 {
            let f = AxbFunction::bump(Bump::random(&mut rng));
            let h = AxbFunction::bump(Bump::random(&mut rng));
            assert!(adjointness_axb(&f, &h, 1.0, &g).unwrap() < 1e-5);
            let (n1, l1) = contraction_axb(&f, 1.0, &g).unwrap();
            assert!(n1 <= l1 + 1e-6);
            let y = AxbPoint { a: 1.1, b: 0.4 };
            assert!(intertwining_axb(&f, y, 1.0, &g).unwrap() < 1e-5);
            assert!(covariance_axb(&f, 1.0, &g).unwrap() < 1e-5);
        }
    }

    #[test]
    fn hygiene_detects_boundary_mass() {
        let g = grid();
        let f = AxbFunction::bump(Bump {
            b_center: 15.0,
            ..Bump::default()
        });
        assert!(f.check_hygiene(&g).is_err());
        let liar = AxbFunction::new(0.5, |a, b| Bump::default().eval(a, b));
        assert!(liar.check_hygiene(&g).is_err());
        assert!(
            AxbFunction::bump(Bump::default())
                .check_hygiene(&g)
                .unwrap()
                < 1e-12
        );
    }

    #[test]
    fn refinement_study_converges() {
        let rows = refinement_study(1.0, GridSpec::with_nodes(64)).unwrap();
        assert_eq!(rows.len(), 4);
        for row in rows {
            assert!(row.converges(), "{row:?}");
        }
        // the ω = 1 oscillation guard rejects 32 nodes
        assert!(refinement_study(1.0, GridSpec::with_nodes(32)).is_err());
    }

    #[test]
    fn suite_passes_on_default_grid() {
        let report = run_axb_suite(&AxbSuiteConfig {
            pairs: 3,
            ..AxbSuiteConfig::default()
        })
        .unwrap();
        for c in &report.checks {
            assert!(c.passed(), "{c:?}");
        }
    }
}
