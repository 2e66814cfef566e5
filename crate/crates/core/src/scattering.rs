//! Scattering functions with limit and the mass-carrying kernel.
//!
//! Every representable scattering function is a finite sinh-Blaschke product
//!
//! ```text
//! S(ζ) = ε · ∏_k (sinh ζ - sinh b_k) / (sinh ζ + sinh b_k)
//! ```
//!
//! with `ε = ±1` and zeros `b_k` in the half-strip `0 < Im b <= π/2`, closed
//! under `b -> -conj(b)`. This family is exhaustive for scattering functions
//! possessing limits at `θ -> ±∞`, which is exactly what the scaling-limit
//! analysis requires, and the closed form gives exact strip continuation.

use crate::{Cx, Error, Real, Result};
use serde::{Deserialize, Serialize};

/// Tolerance below which `|sinh ζ + sinh b_k|` counts as a pole hit.
const POLE_TOL: f64 = 1e-14;

/// A scattering function with limit: sign `ε` and finite zero set in the
/// half-strip.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringFunction<T> {
    epsilon: i8,
    zeros: Vec<Cx<T>>,
}

impl<T: Real> ScatteringFunction<T> {
    /// The free function `S ≡ 1`.
    pub fn free() -> Self {
        ScatteringFunction {
            epsilon: 1,
            zeros: Vec::new(),
        }
    }

    /// The Ising function `S ≡ -1`.
    pub fn ising() -> Self {
        ScatteringFunction {
            epsilon: -1,
            zeros: Vec::new(),
        }
    }

    /// Sinh-Gordon scattering function with coupling `g`:
    /// a single zero at `i·a`, `a = πg²/(4π + g²)`.
    pub fn sinh_gordon(g: T) -> Self {
        let pi = T::PI();
        let a = pi * g * g / (T::of(4.0) * pi + g * g);
        ScatteringFunction {
            epsilon: 1,
            zeros: vec![Cx::new(T::zero(), a)],
        }
    }

    /// Validated constructor. Each zero must satisfy `0 < Im b <= π/2`.
    ///
    /// With `auto_complete`, zeros whose reflection partner `-conj(b)` is
    /// missing get the partner added; otherwise a non-closed set is an error.
    pub fn new(epsilon: i8, zeros: Vec<Cx<T>>, auto_complete: bool) -> Result<Self> {
        assert!(epsilon == 1 || epsilon == -1, "epsilon must be ±1");
        let half_pi = T::PI() * T::of(0.5);
        let slack = T::of(1e-12);
        for b in &zeros {
            if b.im <= T::zero() || b.im > half_pi + slack {
                return Err(Error::ZeroOutOfStrip(format!("{} + {}i", b.re, b.im)));
            }
        }
        let mut all = zeros;
        let tol = T::of(1e-9);
        let mut used = vec![false; all.len()];
        let mut to_add = Vec::new();
        for i in 0..all.len() {
            if used[i] {
                continue;
            }
            let partner = Cx::new(-all[i].re, all[i].im); // -conj(b)
            if (partner - all[i]).norm() <= tol {
                used[i] = true; // purely imaginary zero pairs with itself
                continue;
            }
            let found = (i + 1..all.len()).find(|&j| !used[j] && (all[j] - partner).norm() <= tol);
            match found {
                Some(j) => {
                    used[i] = true;
                    used[j] = true;
                }
                None if auto_complete => {
                    used[i] = true;
                    to_add.push(partner);
                }
                None => return Err(Error::NonClosedUnderReflection),
            }
        }
        all.extend(to_add);
        Ok(ScatteringFunction {
            epsilon,
            zeros: all,
        })
    }

    pub fn epsilon(&self) -> i8 {
        self.epsilon
    }

    pub fn zeros(&self) -> &[Cx<T>] {
        &self.zeros
    }

    /// `ε = lim_{θ→±∞} S(θ)`, identical in both directions.
    pub fn limit_value(&self) -> Cx<T> {
        Cx::new(T::of(self.epsilon as f64), T::zero())
    }

    /// Evaluate the Blaschke product at a point of the closed strip
    /// `0 <= Im ζ <= π`.
    pub fn eval_strip(&self, zeta: Cx<T>) -> Result<Cx<T>> {
        let sz = zeta.sinh();
        let mut result = Cx::new(T::of(self.epsilon as f64), T::zero());
        for b in &self.zeros {
            let sb = b.sinh();
            let den = sz + sb;
            if den.norm() < T::of(POLE_TOL) {
                return Err(Error::PoleHit);
            }
            result = result * ((sz - sb) / den);
        }
        Ok(result)
    }

    /// Evaluate at a real rapidity. Real-line evaluation never hits a pole
    /// (all poles have nonzero imaginary part).
    pub fn eval(&self, theta: T) -> Cx<T> {
        self.eval_strip(Cx::new(theta, T::zero()))
            .expect("no poles on the real line")
    }

    /// Max residual of the four defining relations
    /// `conj(S(θ)) = S(θ)^{-1} = S(θ+iπ) = S(-θ)` over the given samples.
    pub fn relation_residual(&self, thetas: &[T]) -> T {
        let mut worst = T::zero();
        for &t in thetas {
            let s = self.eval(t);
            let s_neg = self.eval(-t);
            let s_shift = self
                .eval_strip(Cx::new(t, T::PI()))
                .expect("upper boundary is pole-free for half-strip zeros");
            let one = Cx::new(T::one(), T::zero());
            let unitarity = (s.conj() * s - one).norm();
            let crossing = (s_shift - s_neg).norm();
            let parity = (s_neg * s - one).norm();
            let hermitian = (s.conj() - s_shift).norm();
            worst = worst
                .max(unitarity)
                .max(crossing)
                .max(parity)
                .max(hermitian);
        }
        worst
    }
}

/// JSON description of a scattering function.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScatteringSpec {
    Free,
    Ising,
    SinhGordon { g: f64 },
    Blaschke { epsilon: i8, zeros: Vec<[f64; 2]> },
}

impl ScatteringSpec {
    pub fn build<T: Real>(&self) -> Result<ScatteringFunction<T>> {
        match self {
            ScatteringSpec::Free => Ok(ScatteringFunction::free()),
            ScatteringSpec::Ising => Ok(ScatteringFunction::ising()),
            ScatteringSpec::SinhGordon { g } => Ok(ScatteringFunction::sinh_gordon(T::of(*g))),
            ScatteringSpec::Blaschke { epsilon, zeros } => {
                let zs = zeros
                    .iter()
                    .map(|z| Cx::new(T::of(z[0]), T::of(z[1])))
                    .collect();
                ScatteringFunction::new(*epsilon, zs, true)
            }
        }
    }
}

/// A scattering function paired with a mass `m >= 0`, evaluating `S_m(p, q)`
/// (or the piecewise massless limit `S_0` when `m = 0`).
#[derive(Debug, Clone)]
pub struct MassKernel<T> {
    pub base: ScatteringFunction<T>,
    pub mass: T,
}

impl<T: Real> MassKernel<T> {
    pub fn new(base: ScatteringFunction<T>, mass: T) -> Self {
        assert!(mass >= T::zero(), "mass must be non-negative");
        MassKernel { base, mass }
    }

    /// `S_m(p,q) = S(asinh((p·ω_q - q·ω_p)/m²))`, `m > 0`, principal branch.
    pub fn massive_eval(&self, p: T, q: T) -> Cx<T> {
        let m = self.mass;
        assert!(m > T::zero(), "massive_eval requires m > 0");
        let omega_p = (p * p + m * m).sqrt();
        let omega_q = (q * q + m * m).sqrt();
        // For p·q > 0 the numerator p·ω_q - q·ω_p cancels catastrophically as
        // m -> 0; rationalizing gives the exact equivalent
        // m²(p² - q²)/(p·ω_q + q·ω_p), whose denominator is then cancellation-free.
        let theta = if p * q > T::zero() {
            ((p * p - q * q) / (p * omega_q + q * omega_p)).asinh()
        } else {
            ((p * omega_q - q * omega_p) / (m * m)).asinh()
        };
        self.base.eval(theta)
    }

    /// The piecewise limit `S_0(p,q)`.
    pub fn massless_eval(&self, p: T, q: T) -> Cx<T> {
        let zero = T::zero();
        if p > zero && q > zero {
            self.base.eval(p.ln() - q.ln())
        } else if p < zero && q < zero {
            self.base.eval((-q).ln() - (-p).ln())
        } else if p == zero && q == zero {
            self.base.eval(zero)
        } else {
            self.base.limit_value()
        }
    }

    /// Dispatch on the stored mass.
    pub fn eval(&self, p: T, q: T) -> Cx<T> {
        if self.mass > T::zero() {
            self.massive_eval(p, q)
        } else {
            self.massless_eval(p, q)
        }
    }

    /// Energy `ω_p^m = sqrt(p² + m²)`.
    pub fn omega(&self, p: T) -> T {
        (p * p + self.mass * self.mass).sqrt()
    }
}

/// One row of the massless-limit convergence table.
#[derive(Debug, Clone)]
pub struct ScalingRow<T> {
    pub lambda: T,
    pub p: T,
    pub q: T,
    pub abs_diff: T,
}

/// `|S_{λm}(p,q) - S_0(p,q)|` over a descending λ grid.
pub fn scaling_convergence_table<T: Real>(
    s: &ScatteringFunction<T>,
    m: T,
    points: &[(T, T)],
    lambdas: &[T],
) -> Vec<ScalingRow<T>> {
    let massless = MassKernel::new(s.clone(), T::zero());
    let mut rows = Vec::new();
    for &(p, q) in points {
        let limit = massless.massless_eval(p, q);
        for &lambda in lambdas {
            let scaled = MassKernel::new(s.clone(), lambda * m);
            rows.push(ScalingRow {
                lambda,
                p,
                q,
                abs_diff: (scaled.massive_eval(p, q) - limit).norm(),
            });
        }
    }
    rows
}
