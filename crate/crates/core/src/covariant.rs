//! Functions on a finite group, the averaging operator `T_ξ`, the covariant
//! norm and the kernel / annihilator subspaces.
//!
//! On a finite group every function is continuous with compact support, so
//! `C_ξ(G,N)`, `L¹_ξ(G,N)` and `L^∞_ξ(G,N)` coincide as sets and the
//! completion of `C_ξ(G,N)` under `‖·‖₍₁₎` adds nothing. Kernels, spans and
//! annihilators are computed as finite-dimensional subspaces.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::characters::Character;
use crate::error::{Error, Result};
use crate::group::{CosetDecomposition, FiniteGroup};
use crate::haar::{self, HaarData};
use crate::linalg::{self, CMatrix, CVector};

/// Covariance residual accepted by [`CovariantFunction`] constructors.
pub const COVARIANCE_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A complex-valued function on `G`, `f(x) = values[x]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionDocument", into = "FunctionDocument")]
pub struct GroupFunction {
    values: Vec<Complex64>,
}

/// JSON form `{"re": [...], "im": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionDocument {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<GroupFunction> for FunctionDocument {
    fn from(f: GroupFunction) -> Self {
        FunctionDocument {
            re: f.values.iter().map(|z| z.re).collect(),
            im: f.values.iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<FunctionDocument> for GroupFunction {
    type Error = Error;

    fn try_from(doc: FunctionDocument) -> Result<Self> {
        if doc.re.len() != doc.im.len() {
            return Err(Error::DomainMismatch(format!(
                "{} real parts but {} imaginary parts",
                doc.re.len(),
                doc.im.len()
            )));
        }
        GroupFunction::new(
            doc.re
                .into_iter()
                .zip(doc.im)
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl GroupFunction {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if let Some(i) = values
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::InvalidArgument(format!(
                "value at element {i} is not finite"
            )));
        }
        Ok(GroupFunction { values })
    }

    pub fn zeros(order: usize) -> Self {
        GroupFunction {
            values: vec![ZERO; order],
        }
    }

    pub fn delta(order: usize, x: usize) -> Self {
        let mut f = Self::zeros(order);
        f.values[x] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        GroupFunction {
            values: (0..order).map(f).collect(),
        }
    }

    /// Independent real and imaginary parts uniform on `[-1, 1]`, optionally
    /// snapped to multiples of `1/16`.
    pub fn random<R: Rng + ?Sized>(order: usize, rng: &mut R, snap: bool) -> Self {
        let mut draw = || {
            if snap {
                f64::from(rng.gen_range(-16i32..=16)) / 16.0
            } else {
                rng.gen_range(-1.0..=1.0)
            }
        };
        GroupFunction::from_fn(order, |_| Complex64::new(draw(), draw()))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, x: usize) -> Complex64 {
        self.values[x]
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        GroupFunction {
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }

    /// `self + c · other`.
    pub fn add_scaled(&self, c: Complex64, other: &GroupFunction) -> Self {
        GroupFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &GroupFunction) -> Self {
        self.add_scaled(Complex64::new(-1.0, 0.0), other)
    }

    /// `max_x |f(x) − g(x)|`.
    pub fn max_diff(&self, other: &GroupFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn to_vector(&self) -> CVector {
        CVector::from_column_slice(&self.values)
    }

    pub fn from_vector(v: &CVector) -> Self {
        GroupFunction {
            values: v.iter().copied().collect(),
        }
    }

    fn require_order(&self, g: &FiniteGroup) -> Result<()> {
        if self.len() != g.order() {
            return Err(Error::DomainMismatch(format!(
                "function has {} values, group has order {}",
                self.len(),
                g.order()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Left,
    Right,
}

/// `L_y f(z) = f(y⁻¹z)` or `R_y f(z) = f(zy)`.
pub fn translate(
    g: &FiniteGroup,
    f: &GroupFunction,
    direction: Direction,
    y: usize,
) -> Result<GroupFunction> {
    g.check_index(y)?;
    f.require_order(g)?;
    Ok(match direction {
        Direction::Left => {
            let yi = g.inv(y);
            GroupFunction::from_fn(g.order(), |z| f.at(g.mul(yi, z)))
        }
        Direction::Right => GroupFunction::from_fn(g.order(), |z| f.at(g.mul(z, y))),
    })
}

/// `‖f‖_{L¹(G)} = Σ_x u |f(x)|`.
pub fn l1_norm(f: &GroupFunction, haar: &HaarData) -> f64 {
    haar.u * f.values.iter().map(|z| z.norm()).sum::<f64>()
}

/// `⟨f, g⟩ = Σ_x u f(x) conj(g(x))`.
pub fn pairing(f: &GroupFunction, g: &GroupFunction, haar: &HaarData) -> Result<Complex64> {
    if f.len() != g.len() {
        return Err(Error::DomainMismatch(format!(
            "pairing functions of length {} and {}",
            f.len(),
            g.len()
        )));
    }
    Ok(haar.u
        * f.values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>())
}

/// A function with `ψ(xk) = ξ(k) ψ(x)` for all `x ∈ G`, `k ∈ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariantFunction {
    underlying: GroupFunction,
    character: Character,
    covariance_residual: f64,
}

impl CovariantFunction {
    pub fn function(&self) -> &GroupFunction {
        &self.underlying
    }

    pub fn into_function(self) -> GroupFunction {
        self.underlying
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    pub fn covariance_residual(&self) -> f64 {
        self.covariance_residual
    }
}

/// An orthonormal basis (for the `λ_G`-weighted inner product) of a subspace
/// of functions on `G`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceBasis {
    pub dimension: usize,
    pub vectors: Vec<GroupFunction>,
    #[serde(skip)]
    weight: f64,
}

impl SubspaceBasis {
    /// From a Euclidean-orthonormal set, rescaled by `1/√u`.
    pub fn from_euclidean(vectors: Vec<CVector>, u: f64) -> Self {
        let scale = Complex64::new(1.0 / u.sqrt(), 0.0);
        SubspaceBasis {
            dimension: vectors.len(),
            vectors: vectors
                .iter()
                .map(|v| GroupFunction::from_vector(&(v * scale)))
                .collect(),
            weight: u,
        }
    }

    pub fn euclidean(&self) -> Vec<CVector> {
        let scale = Complex64::new(self.weight.sqrt(), 0.0);
        self.vectors.iter().map(|f| f.to_vector() * scale).collect()
    }

    /// Largest entry of `|Gram − I|` under the weighted inner product.
    pub fn gram_deviation(&self, haar: &HaarData) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                let p = pairing(a, b, haar).expect("same length");
                worst = worst.max((p - target).norm());
            }
        }
        worst
    }

    /// Subspace distance to `other`, infinite when dimensions differ.
    pub fn distance(&self, other: &SubspaceBasis) -> f64 {
        linalg::subspace_distance(&self.euclidean(), &other.euclidean())
    }

    /// Euclidean distance from `f` to the subspace.
    pub fn residual(&self, f: &GroupFunction) -> f64 {
        linalg::projection_residual(&f.to_vector(), &self.euclidean())
    }

    /// A random element with coefficients uniform in the unit square, times `scale`.
    pub fn random_element<R: Rng + ?Sized>(
        &self,
        order: usize,
        rng: &mut R,
        scale: f64,
    ) -> GroupFunction {
        let mut out = GroupFunction::zeros(order);
        for b in &self.vectors {
            let c = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)) * scale;
            out = out.add_scaled(c, b);
        }
        out
    }
}

/// The span of translation differences `R_k f − Δ_N(k⁻¹) ξ(k) f`.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslateSpan {
    pub basis: SubspaceBasis,
    /// Largest `‖T_ξ(generator)‖_∞`; zero up to rounding since the span sits in the kernel.
    pub containment_residual: f64,
    /// Whether the span fills the whole kernel. Reported, not asserted.
    pub equals_kernel: bool,
}

/// `(G, N, ξ, Haar weights)` with the coset data needed by every operation.
#[derive(Debug, Clone)]
pub struct CovariantSpace<'g> {
    group: &'g FiniteGroup,
    cosets: CosetDecomposition,
    xi: Character,
    haar: HaarData,
    /// `conj(ξ(s))` aligned with `N`'s members.
    xi_conj: Vec<Complex64>,
    /// `Δ_N(k⁻¹)` aligned with `N`'s members.
    delta_n_inv: Vec<f64>,
}

impl<'g> CovariantSpace<'g> {
    pub fn new(group: &'g FiniteGroup, xi: Character, haar: HaarData) -> Result<Self> {
        let n = xi.domain().clone();
        let cosets = CosetDecomposition::new(group, &n)?;
        let xi_conj = xi.values().iter().map(|z| z.conj()).collect();
        let delta_n_inv = n
            .members()
            .iter()
            .map(|&k| haar::subgroup_modular_function(group, &n, haar.v, group.inv(k)))
            .collect::<Result<_>>()?;
        Ok(CovariantSpace {
            group,
            cosets,
            xi,
            haar,
            xi_conj,
            delta_n_inv,
        })
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn cosets(&self) -> &CosetDecomposition {
        &self.cosets
    }

    pub fn character(&self) -> &Character {
        &self.xi
    }

    pub fn haar(&self) -> &HaarData {
        &self.haar
    }

    fn members(&self) -> &[usize] {
        self.xi.domain().members()
    }

    /// `Δ_N(k⁻¹)` for `k ∈ N` given by member position.
    pub fn delta_n_inv(&self, pos: usize) -> f64 {
        self.delta_n_inv[pos]
    }

    /// `T_ξ(f)(x) = v Σ_{s∈N} f(xs) conj(ξ(s))`, without the covariance check.
    pub fn t_xi_raw(&self, f: &GroupFunction) -> Result<GroupFunction> {
        f.require_order(self.group)?;
        let g = self.group;
        let v = self.haar.v;
        Ok(GroupFunction::from_fn(g.order(), |x| {
            let sum: Complex64 = self
                .members()
                .iter()
                .zip(&self.xi_conj)
                .map(|(&s, c)| f.at(g.mul(x, s)) * c)
                .sum();
            sum * v
        }))
    }

    /// `T_ξ(f)`, validated as a covariant function.
    pub fn t_xi(&self, f: &GroupFunction) -> Result<CovariantFunction> {
        self.covariant(self.t_xi_raw(f)?)
    }

    /// `T_N(f)(xN) = v Σ_{s∈N} f(xs)`, indexed by coset.
    pub fn t_n(&self, f: &GroupFunction) -> Result<Vec<Complex64>> {
        f.require_order(self.group)?;
        let g = self.group;
        Ok(self
            .cosets
            .representatives()
            .iter()
            .map(|&r| {
                self.haar.v
                    * self
                        .members()
                        .iter()
                        .map(|&s| f.at(g.mul(r, s)))
                        .sum::<Complex64>()
            })
            .collect())
    }

    /// `max_{x,k} |ψ(xk) − ξ(k) ψ(x)|`.
    pub fn covariance_residual(&self, f: &GroupFunction) -> f64 {
        let g = self.group;
        let mut worst: f64 = 0.0;
        for x in 0..g.order() {
            for (&k, c) in self.members().iter().zip(&self.xi_conj) {
                worst = worst.max((f.at(g.mul(x, k)) - c.conj() * f.at(x)).norm());
            }
        }
        worst
    }

    /// Wraps `f` as a covariant function if the covariance law holds and
    /// `|f|` is constant on cosets.
    pub fn covariant(&self, f: GroupFunction) -> Result<CovariantFunction> {
        f.require_order(self.group)?;
        let residual = self.covariance_residual(&f);
        let modulus_spread = (0..self.group.order())
            .map(|x| {
                let r = self.cosets.representatives()[self.cosets.coset_of(x)];
                (f.at(x).norm() - f.at(r).norm()).abs()
            })
            .fold(0.0, f64::max);
        let worst = residual.max(modulus_spread);
        if worst > COVARIANCE_TOLERANCE {
            return Err(Error::NotCovariant {
                residual: worst,
                tolerance: COVARIANCE_TOLERANCE,
            });
        }
        Ok(CovariantFunction {
            underlying: f,
            character: self.xi.clone(),
            covariance_residual: residual,
        })
    }

    /// The covariant function with prescribed values on the coset
    /// representatives: `ψ(r s) = ξ(s) ψ(r)`.
    pub fn covariant_from_cosets(&self, rep_values: &[Complex64]) -> Result<CovariantFunction> {
        if rep_values.len() != self.cosets.num_cosets() {
            return Err(Error::DomainMismatch(format!(
                "{} coset values for {} cosets",
                rep_values.len(),
                self.cosets.num_cosets()
            )));
        }
        let g = self.group;
        let mut values = vec![ZERO; g.order()];
        for (&r, &value) in self.cosets.representatives().iter().zip(rep_values) {
            for (&s, c) in self.members().iter().zip(&self.xi_conj) {
                values[g.mul(r, s)] = c.conj() * value;
            }
        }
        self.covariant(GroupFunction::new(values)?)
    }

    /// A random covariant function (random coset values, unit-square parts).
    /// Fails only if the character itself violates the homomorphism law.
    pub fn random_covariant<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        snap: bool,
    ) -> Result<CovariantFunction> {
        let reps = GroupFunction::random(self.cosets.num_cosets(), rng, snap);
        self.covariant_from_cosets(reps.values())
    }

    /// `‖ψ‖₍₁₎ = Σ_{cosets} w |ψ(rep)|`.
    pub fn norm_one(&self, psi: &CovariantFunction) -> f64 {
        self.norm_one_unchecked(psi.function())
    }

    /// The `‖·‖₍₁₎` formula applied to any function, read off at the coset
    /// representatives.
    pub fn norm_one_unchecked(&self, f: &GroupFunction) -> f64 {
        self.haar.w
            * self
                .cosets
                .representatives()
                .iter()
                .map(|&r| f.at(r).norm())
                .sum::<f64>()
    }

    /// `ψ·h` with `h = (1/v)·1_{representatives}`, so `T_N(h) ≡ 1`.
    pub fn minimal_lift(&self, psi: &CovariantFunction) -> GroupFunction {
        let inv_v = 1.0 / self.haar.v;
        GroupFunction::from_fn(self.group.order(), |x| {
            if self.cosets.is_representative(x) {
                psi.function().at(x) * inv_v
            } else {
                ZERO
            }
        })
    }

    /// `‖f + N_ξ‖ = ‖T_ξ f‖₍₁₎`.
    pub fn quotient_norm(&self, f: &GroupFunction) -> Result<f64> {
        Ok(self.norm_one(&self.t_xi(f)?))
    }

    pub fn l1_norm(&self, f: &GroupFunction) -> f64 {
        l1_norm(f, &self.haar)
    }

    pub fn pairing(&self, f: &GroupFunction, g: &GroupFunction) -> Result<Complex64> {
        pairing(f, g, &self.haar)
    }

    /// Matrix of `T_ξ` restricted to the given output rows.
    fn t_xi_matrix(&self, rows: &[usize]) -> CMatrix {
        let g = self.group;
        let mut m = CMatrix::zeros(rows.len(), g.order());
        for (i, &x) in rows.iter().enumerate() {
            for (&s, c) in self.members().iter().zip(&self.xi_conj) {
                m[(i, g.mul(x, s))] += c * self.haar.v;
            }
        }
        m
    }

    /// `N_ξ(G,N) = ker T_ξ`, from the rows at coset representatives.
    pub fn kernel_basis(&self) -> SubspaceBasis {
        let m = self.t_xi_matrix(self.cosets.representatives());
        SubspaceBasis::from_euclidean(linalg::nullspace(&m), self.haar.u)
    }

    /// `N¹_ξ(G,N)`: kernel of the full `|G| × |G|` matrix of `T_ξ` on `L¹(G)`.
    pub fn l1_kernel_basis(&self) -> SubspaceBasis {
        let rows: Vec<usize> = (0..self.group.order()).collect();
        SubspaceBasis::from_euclidean(linalg::nullspace(&self.t_xi_matrix(&rows)), self.haar.u)
    }

    /// Span of `R_k δ_x − Δ_N(k⁻¹) ξ(k) δ_x` over `k ∈ N`, `x ∈ G`.
    pub fn span_translates_basis(&self) -> Result<TranslateSpan> {
        let g = self.group;
        let mut generators = Vec::with_capacity(g.order() * self.members().len());
        let mut containment: f64 = 0.0;
        for x in 0..g.order() {
            let delta = GroupFunction::delta(g.order(), x);
            for (pos, &k) in self.members().iter().enumerate() {
                let shifted = translate(g, &delta, Direction::Right, k)?;
                let coeff = self.xi_conj[pos].conj() * self.delta_n_inv[pos];
                let gen = shifted.add_scaled(-coeff, &delta);
                containment = containment.max(self.t_xi_raw(&gen)?.sup_norm());
                generators.push(gen.to_vector());
            }
        }
        let basis = SubspaceBasis::from_euclidean(
            linalg::orthonormal_span(&generators, g.order()),
            self.haar.u,
        );
        let kernel = self.kernel_basis();
        let equals_kernel = basis.distance(&kernel) <= COVARIANCE_TOLERANCE;
        Ok(TranslateSpan {
            basis,
            containment_residual: containment,
            equals_kernel,
        })
    }

    /// `L^∞_ξ(G,N) = {ψ : R_k ψ = ξ(k) ψ for k ∈ N}`.
    pub fn linfty_xi_basis(&self) -> SubspaceBasis {
        let g = self.group;
        let n = g.order();
        let mut m = CMatrix::zeros(self.members().len() * n, n);
        for (pos, &k) in self.members().iter().enumerate() {
            let xi_k = self.xi_conj[pos].conj();
            for z in 0..n {
                let row = pos * n + z;
                m[(row, g.mul(z, k))] += Complex64::new(1.0, 0.0);
                m[(row, z)] -= xi_k;
            }
        }
        SubspaceBasis::from_euclidean(linalg::nullspace(&m), self.haar.u)
    }

    /// Unit-norm covariant function supported on one coset.
    pub fn coset_indicator(&self, coset: usize) -> Result<CovariantFunction> {
        if coset >= self.cosets.num_cosets() {
            return Err(Error::IndexOutOfRange {
                index: coset,
                order: self.cosets.num_cosets(),
            });
        }
        let mut reps = vec![ZERO; self.cosets.num_cosets()];
        reps[coset] = Complex64::new(1.0 / self.haar.w, 0.0);
        self.covariant_from_cosets(&reps)
    }

    /// Projected subgradient descent for `min_{k ∈ kernel} ‖witness + k‖₁`.
    ///
    /// A falsifier only: any value it returns is an upper bound on the true
    /// minimum, so a value below `norm_one(T_ξ witness)` exposes a bug.
    pub fn kernel_descent<R: Rng + ?Sized>(
        &self,
        witness: &GroupFunction,
        kernel: &SubspaceBasis,
        restarts: usize,
        steps: usize,
        rng: &mut R,
    ) -> f64 {
        let mut best = self.l1_norm(witness);
        if kernel.dimension == 0 {
            return best;
        }
        let scale = witness.sup_norm().max(1.0);
        let order = self.group.order();
        for restart in 0..restarts {
            let mut r = if restart == 0 {
                witness.clone()
            } else {
                witness.add_scaled(
                    Complex64::new(1.0, 0.0),
                    &kernel.random_element(order, rng, scale),
                )
            };
            for t in 0..steps {
                best = best.min(self.l1_norm(&r));
                let sign = GroupFunction::from_fn(order, |x| {
                    let z = r.at(x);
                    let a = z.norm();
                    if a > 0.0 {
                        z / a
                    } else {
                        ZERO
                    }
                });
                // weighted projection of the subgradient onto the kernel
                let mut step = GroupFunction::zeros(order);
                for b in &kernel.vectors {
                    let c = self.pairing(&sign, b).expect("same length");
                    step = step.add_scaled(c, b);
                }
                let eta = 0.5 * scale / (self.haar.u * ((t + 1) as f64).sqrt());
                r = r.add_scaled(Complex64::new(-eta, 0.0), &step);
            }
            best = best.min(self.l1_norm(&r));
        }
        best
    }
}

/// `{g : ⟨f, g⟩ = 0 for all f in kernel}`.
pub fn annihilator_basis(kernel: &SubspaceBasis, order: usize, haar: &HaarData) -> SubspaceBasis {
    let mut m = CMatrix::zeros(kernel.dimension, order);
    for (i, f) in kernel.vectors.iter().enumerate() {
        for x in 0..order {
            m[(i, x)] = f.at(x).conj();
        }
    }
    SubspaceBasis::from_euclidean(linalg::nullspace(&m), haar.u)
}
