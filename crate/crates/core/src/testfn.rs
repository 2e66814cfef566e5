//! Test functions and their transforms.
//!
//! Two concrete families cover every downstream use: Gaussian packets
//! (polynomial × Gaussian × phase, all transforms in closed form) and
//! compactly supported bumps `exp(-s/(1-t²))` rescaled to an interval
//! (transforms by compact-support quadrature, which also gives exact strip
//! continuation since the transform of a compactly supported function is
//! entire). On top of these sit check transforms, affine pushes, and the
//! convolution/correlation kinds produced by chiral decomposition of 2D
//! functions.
//!
//! Conventions used throughout:
//!
//! ```text
//! f~(q)   = (1/√(2π)) ∫ f(ξ) e^{iqξ} dξ
//! f^±(β)  = ±i e^β f~(±e^β)                       (hat transform)
//! (φ̌^±)~(q) = ∓i θ(±q) φ(log|q|) / |q|            (check transform)
//! f^{ξ,λ}(ξ′) = f(e^{−λ}(ξ′−ξ))                   (affine push)
//! f^j(ξ)  = conj(f(−ξ))                           (reflection)
//! ```

use crate::numerics::{integrate_interval, QuadratureConfig};
use crate::{Cx, Error, Real, Result};
use serde::{Deserialize, Serialize};

/// Branch sign for hat/check transforms and mass-shell restrictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn val<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Declared support of a 1D test function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support<T> {
    All,
    Interval(T, T),
}

impl<T: Real> Support<T> {
    fn hull(self, other: Support<T>) -> Support<T> {
        match (self, other) {
            (Support::Interval(a, b), Support::Interval(c, d)) => {
                Support::Interval(a.min(c), b.max(d))
            }
            _ => Support::All,
        }
    }

    /// Image under `ξ′ = ξ + e^λ · ξ_old`.
    fn affine(self, xi: T, lambda: T) -> Support<T> {
        match self {
            Support::All => Support::All,
            Support::Interval(a, b) => {
                Support::Interval(xi + lambda.exp() * a, xi + lambda.exp() * b)
            }
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, Support::Interval(_, _))
    }

    /// Strictly disjoint (used by locality preconditions).
    pub fn disjoint_from(&self, other: &Support<T>) -> bool {
        match (self, other) {
            (Support::Interval(a, b), Support::Interval(c, d)) => *b < *c || *d < *a,
            _ => false,
        }
    }
}

// --- small complex-polynomial helpers (ascending coefficients) ---

fn poly_eval<T: Real>(p: &[Cx<T>], x: Cx<T>) -> Cx<T> {
    let mut acc = Cx::new(T::zero(), T::zero());
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn poly_diff<T: Real>(p: &[Cx<T>]) -> Vec<Cx<T>> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| c * Cx::new(T::of(n as f64), T::zero()))
        .collect()
}

fn poly_mul_x<T: Real>(p: &[Cx<T>]) -> Vec<Cx<T>> {
    let mut out = vec![Cx::new(T::zero(), T::zero())];
    out.extend_from_slice(p);
    out
}

fn poly_add<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> Vec<Cx<T>> {
    let n = a.len().max(b.len());
    let zero = Cx::new(T::zero(), T::zero());
    (0..n)
        .map(|i| *a.get(i).unwrap_or(&zero) + *b.get(i).unwrap_or(&zero))
        .collect()
}

fn poly_scale<T: Real>(p: &[Cx<T>], c: Cx<T>) -> Vec<Cx<T>> {
    p.iter().map(|&x| x * c).collect()
}

/// `Q_n` with `(1/√(2π)) ∫ u^n e^{-u²/2} e^{isu} du = Q_n(s) e^{-s²/2}`,
/// via `Q_0 = 1`, `Q_{n+1} = -i (Q_n' - s Q_n)`.
fn gauss_moment_polys<T: Real>(n_max: usize) -> Vec<Vec<Cx<T>>> {
    let mi = Cx::new(T::zero(), -T::one());
    let mut out = vec![vec![Cx::new(T::one(), T::zero())]];
    for n in 0..n_max {
        let q = &out[n];
        let next = poly_scale(&poly_add(&poly_diff(q), &poly_scale(&poly_mul_x(q), mi * mi)), mi);
        // note: -s·Q contributes with coefficient -1 = (-i)·... spelled out:
        // Q_{n+1} = -i·Q' + i·s·Q; mi*mi = -1 folds the s·Q sign, then mi
        // multiplies the whole bracket.
        out.push(next);
    }
    out
}

/// One concrete shape a term can take.
#[derive(Debug, Clone)]
pub enum Kind1D<T> {
    /// `P(u) e^{-u²/2} e^{iκ(ξ-c)}` with `u = (ξ-c)/w`.
    Gaussian {
        center: T,
        width: T,
        modulation: T,
        poly: Vec<Cx<T>>,
    },
    /// `exp(-s/(1-t²))` on `(a,b)` with `t = (2ξ-a-b)/(b-a)`, zero outside.
    Bump { a: T, b: T, shape: T },
    /// `φ̌^±` for a compactly supported φ.
    Check { phi: Box<TestFunction1D<T>>, sign: Sign },
    /// `inner(e^{-λ}(ξ-ξ₀))`.
    Affine {
        inner: Box<TestFunction1D<T>>,
        xi: T,
        lambda: T,
    },
    /// `(a * b)(ξ) = ∫ a(ξ-u) b(u) du` (left chiral component of `a ⊗ b`).
    Convolve(Box<TestFunction1D<T>>, Box<TestFunction1D<T>>),
    /// `∫ a(ξ+u) b(u) du` (right chiral component of `a ⊗ b`).
    Correlate(Box<TestFunction1D<T>>, Box<TestFunction1D<T>>),
}

#[derive(Debug, Clone)]
pub struct Term1D<T> {
    pub coeff: Cx<T>,
    /// Order of d/dξ applied on top of `kind`.
    pub deriv: u8,
    pub kind: Kind1D<T>,
}

/// A 1D test function: finite linear combination of derivatives of kinds.
#[derive(Debug, Clone)]
pub struct TestFunction1D<T> {
    pub terms: Vec<Term1D<T>>,
}

fn czero<T: Real>() -> Cx<T> {
    Cx::new(T::zero(), T::zero())
}

fn cone<T: Real>() -> Cx<T> {
    Cx::new(T::one(), T::zero())
}

impl<T: Real> Kind1D<T> {
    fn support(&self) -> Support<T> {
        match self {
            Kind1D::Gaussian { .. } | Kind1D::Check { .. } => Support::All,
            Kind1D::Bump { a, b, .. } => Support::Interval(*a, *b),
            Kind1D::Affine { inner, xi, lambda } => inner.support().affine(*xi, *lambda),
            Kind1D::Convolve(a, b) => match (a.support(), b.support()) {
                (Support::Interval(x, y), Support::Interval(u, v)) => {
                    Support::Interval(x + u, y + v)
                }
                _ => Support::All,
            },
            Kind1D::Correlate(a, b) => match (a.support(), b.support()) {
                (Support::Interval(x, y), Support::Interval(u, v)) => {
                    Support::Interval(x - v, y - u)
                }
                _ => Support::All,
            },
        }
    }

    /// Pointwise value of the `deriv`-th derivative.
    fn eval(&self, deriv: u8, xi: T, cfg: &QuadratureConfig<T>) -> Cx<T> {
        match self {
            Kind1D::Gaussian {
                center,
                width,
                modulation,
                poly,
            } => {
                if deriv > 0 {
                    return gaussian_derivative(*center, *width, *modulation, poly)
                        .eval(deriv - 1, xi, cfg);
                }
                let u = (xi - *center) / *width;
                let gauss = (-u * u * T::of(0.5)).exp();
                let phase = Cx::new(T::zero(), *modulation * (xi - *center)).exp();
                poly_eval(poly, Cx::new(u, T::zero())) * gauss * phase
            }
            Kind1D::Bump { a, b, shape } => {
                if xi <= *a || xi >= *b {
                    return czero();
                }
                let t = (T::of(2.0) * xi - *a - *b) / (*b - *a);
                let one_mt2 = T::one() - t * t;
                let base = (-*shape / one_mt2).exp();
                match deriv {
                    0 => Cx::new(base, T::zero()),
                    1 => {
                        // d/dξ = (2/(b-a)) d/dt;  d/dt[-s/(1-t²)] = -2st/(1-t²)²
                        let dt = T::of(2.0) / (*b - *a);
                        let wprime = -T::of(2.0) * *shape * t / (one_mt2 * one_mt2);
                        Cx::new(base * wprime * dt, T::zero())
                    }
                    _ => panic!("pointwise bump derivatives above first order are not supported; work in the Fourier domain"),
                }
            }
            Kind1D::Check { phi, sign } => {
                // f(ξ) = (1/√(2π)) ∫ f~(q) (-iq)^deriv e^{-iqξ} dq over the
                // compact q-support dictated by supp φ.
                let (lo, hi) = match phi.support() {
                    Support::Interval(lo, hi) => (lo, hi),
                    Support::All => panic!("check transform requires compactly supported φ"),
                };
                let (qa, qb) = match sign {
                    Sign::Plus => (lo.exp(), hi.exp()),
                    Sign::Minus => (-hi.exp(), -lo.exp()),
                };
                let norm = (T::of(2.0) * T::PI()).sqrt();
                let q = integrate_interval(
                    |q: T| {
                        let ft = check_fourier(phi, *sign, q, cfg);
                        let miq = Cx::new(T::zero(), -q);
                        ft * miq.powu(deriv as u32) * Cx::new(T::zero(), -q * xi).exp()
                    },
                    qa,
                    qb,
                    cfg,
                )
                .expect("check-transform inverse quadrature failed");
                q.value / norm
            }
            Kind1D::Affine { inner, xi: x0, lambda } => {
                let scale = (-*lambda * T::of(deriv as f64)).exp();
                inner.eval_deriv((xi - *x0) * (-*lambda).exp(), deriv, cfg) * Cx::new(scale, T::zero())
            }
            Kind1D::Convolve(a, b) => {
                let (lo, hi) = integration_window(b, cfg);
                integrate_interval(
                    |u: T| a.eval_deriv(xi - u, deriv, cfg) * b.eval_with(u, cfg),
                    lo,
                    hi,
                    cfg,
                )
                .expect("convolution quadrature failed")
                .value
            }
            Kind1D::Correlate(a, b) => {
                let (lo, hi) = integration_window(b, cfg);
                integrate_interval(
                    |u: T| a.eval_deriv(xi + u, deriv, cfg) * b.eval_with(u, cfg),
                    lo,
                    hi,
                    cfg,
                )
                .expect("correlation quadrature failed")
                .value
            }
        }
    }

    /// `kind~(q)` at a (possibly complex) frequency, without the derivative
    /// factor (handled at the term level as `(-iq)^deriv`).
    fn fourier(&self, q: Cx<T>, cfg: &QuadratureConfig<T>) -> Result<Cx<T>> {
        match self {
            Kind1D::Gaussian {
                center,
                width,
                modulation,
                poly,
            } => {
                let s = (q + Cx::new(*modulation, T::zero())) * *width;
                let polys = gauss_moment_polys::<T>(poly.len().saturating_sub(1));
                let mut sum = czero::<T>();
                for (n, p) in poly.iter().enumerate() {
                    sum = sum + *p * poly_eval(&polys[n], s);
                }
                let phase = (q * Cx::new(T::zero(), *center)).exp();
                let gauss = (-s * s * T::of(0.5)).exp();
                Ok(sum * gauss * phase * *width)
            }
            Kind1D::Bump { a, b, .. } => {
                let norm = (T::of(2.0) * T::PI()).sqrt();
                let quad = integrate_interval(
                    |xi: T| {
                        self.eval(0, xi, cfg) * (q * Cx::new(T::zero(), xi)).exp()
                    },
                    *a,
                    *b,
                    cfg,
                )?;
                Ok(quad.value / norm)
            }
            Kind1D::Check { phi, sign } => {
                if q.im != T::zero() {
                    return Err(Error::NonAnalyticInput);
                }
                Ok(check_fourier(phi, *sign, q.re, cfg))
            }
            Kind1D::Affine { inner, xi, lambda } => {
                let el = lambda.exp();
                let phase = (q * Cx::new(T::zero(), *xi)).exp();
                Ok(inner.fourier_at(q * el, cfg)? * phase * el)
            }
            Kind1D::Convolve(a, b) => {
                let norm = (T::of(2.0) * T::PI()).sqrt();
                Ok(a.fourier_at(q, cfg)? * b.fourier_at(q, cfg)? * norm)
            }
            Kind1D::Correlate(a, b) => {
                let norm = (T::of(2.0) * T::PI()).sqrt();
                Ok(a.fourier_at(q, cfg)? * b.fourier_at(-q, cfg)? * norm)
            }
        }
    }

    fn reflect(&self) -> Kind1D<T> {
        match self {
            Kind1D::Gaussian {
                center,
                width,
                modulation,
                poly,
            } => {
                let flipped = poly
                    .iter()
                    .enumerate()
                    .map(|(n, c)| {
                        let sgn = if n % 2 == 0 { T::one() } else { -T::one() };
                        c.conj() * Cx::new(sgn, T::zero())
                    })
                    .collect();
                Kind1D::Gaussian {
                    center: -*center,
                    width: *width,
                    modulation: *modulation,
                    poly: flipped,
                }
            }
            Kind1D::Bump { a, b, shape } => Kind1D::Bump {
                a: -*b,
                b: -*a,
                shape: *shape,
            },
            Kind1D::Affine { inner, xi, lambda } => Kind1D::Affine {
                inner: Box::new(inner.reflect()),
                xi: -*xi,
                lambda: *lambda,
            },
            Kind1D::Convolve(a, b) => {
                Kind1D::Convolve(Box::new(a.reflect()), Box::new(b.reflect()))
            }
            Kind1D::Correlate(a, b) => {
                Kind1D::Correlate(Box::new(a.reflect()), Box::new(b.reflect()))
            }
            other => panic!("reflection not implemented for {other:?}"),
        }
    }

    /// Pointwise complex conjugate, `conj(f)(ξ) = conj(f(ξ))`; on the check
    /// transform it acts as `conj(φ̌^±) = (conj φ)̌^∓`.
    fn conjugate(&self) -> Kind1D<T> {
        match self {
            Kind1D::Gaussian {
                center,
                width,
                modulation,
                poly,
            } => Kind1D::Gaussian {
                center: *center,
                width: *width,
                modulation: -*modulation,
                poly: poly.iter().map(|c| c.conj()).collect(),
            },
            Kind1D::Bump { .. } => self.clone(),
            Kind1D::Check { phi, sign } => Kind1D::Check {
                phi: Box::new(phi.conjugate()),
                sign: sign.flip(),
            },
            Kind1D::Affine { inner, xi, lambda } => Kind1D::Affine {
                inner: Box::new(inner.conjugate()),
                xi: *xi,
                lambda: *lambda,
            },
            Kind1D::Convolve(a, b) => {
                Kind1D::Convolve(Box::new(a.conjugate()), Box::new(b.conjugate()))
            }
            Kind1D::Correlate(a, b) => {
                Kind1D::Correlate(Box::new(a.conjugate()), Box::new(b.conjugate()))
            }
        }
    }
}

/// `(φ̌^±)~(q) = ∓i θ(±q) φ(log|q|)/|q|` at real `q`.
fn check_fourier<T: Real>(
    phi: &TestFunction1D<T>,
    sign: Sign,
    q: T,
    cfg: &QuadratureConfig<T>,
) -> Cx<T> {
    let s: T = sign.val();
    if q * s <= T::zero() {
        return czero();
    }
    let absq = q.abs();
    let mi_s = Cx::new(T::zero(), -s); // ∓i
    mi_s * phi.eval_with(absq.ln(), cfg) / absq
}

/// Integration window for a factor: its compact support, or the quadrature
/// cutoff for whole-line (rapidly decaying) factors.
fn integration_window<T: Real>(f: &TestFunction1D<T>, cfg: &QuadratureConfig<T>) -> (T, T) {
    match f.support() {
        Support::Interval(a, b) => (a, b),
        Support::All => (-cfg.cutoff, cfg.cutoff),
    }
}

/// Closed-form derivative of a Gaussian packet, as a new Gaussian kind:
/// `d/dξ [P(u) e^{-u²/2} e^{iκ(ξ-c)}] = [(P'-uP)/w + iκP](u) e^{-u²/2} e^{iκ(ξ-c)}`.
fn gaussian_derivative<T: Real>(center: T, width: T, modulation: T, poly: &[Cx<T>]) -> Kind1D<T> {
    let inv_w = Cx::new(T::one() / width, T::zero());
    let ik = Cx::new(T::zero(), modulation);
    let core = poly_add(&poly_diff(poly), &poly_scale(&poly_mul_x(poly), -cone::<T>()));
    let new_poly = poly_add(&poly_scale(&core, inv_w), &poly_scale(poly, ik));
    Kind1D::Gaussian {
        center,
        width,
        modulation,
        poly: new_poly,
    }
}

impl<T: Real> TestFunction1D<T> {
    pub fn zero() -> Self {
        TestFunction1D { terms: Vec::new() }
    }

    /// Plain Gaussian packet `P(u) e^{-u²/2} e^{iκ(ξ-c)}`, `u = (ξ-c)/w`.
    pub fn gaussian(center: T, width: T, modulation: T, poly: Vec<Cx<T>>) -> Self {
        assert!(width > T::zero(), "width must be positive");
        TestFunction1D {
            terms: vec![Term1D {
                coeff: cone(),
                deriv: 0,
                kind: Kind1D::Gaussian {
                    center,
                    width,
                    modulation,
                    poly,
                },
            }],
        }
    }

    /// Standard normalized-width Gaussian without polynomial or modulation.
    pub fn simple_gaussian(center: T, width: T) -> Self {
        Self::gaussian(center, width, T::zero(), vec![cone()])
    }

    pub fn bump(a: T, b: T, shape: T) -> Self {
        assert!(a < b, "bump interval must be nonempty");
        assert!(shape > T::zero(), "bump shape exponent must be positive");
        TestFunction1D {
            terms: vec![Term1D {
                coeff: cone(),
                deriv: 0,
                kind: Kind1D::Bump { a, b, shape },
            }],
        }
    }

    /// `φ̌^±`. Requires compactly supported φ.
    pub fn check_transform(phi: &TestFunction1D<T>, sign: Sign) -> Self {
        assert!(
            phi.support().is_compact(),
            "check transform requires compactly supported input"
        );
        TestFunction1D {
            terms: vec![Term1D {
                coeff: cone(),
                deriv: 0,
                kind: Kind1D::Check {
                    phi: Box::new(phi.clone()),
                    sign,
                },
            }],
        }
    }

    pub fn support(&self) -> Support<T> {
        let mut it = self.terms.iter().map(|t| t.kind.support());
        match it.next() {
            None => Support::Interval(T::zero(), T::zero()),
            Some(first) => it.fold(first, Support::hull),
        }
    }

    pub fn is_derivative(&self) -> bool {
        !self.terms.is_empty() && self.terms.iter().all(|t| t.deriv >= 1)
    }

    pub fn eval_with(&self, xi: T, cfg: &QuadratureConfig<T>) -> Cx<T> {
        self.eval_deriv(xi, 0, cfg)
    }

    pub fn eval(&self, xi: T) -> Cx<T> {
        self.eval_with(xi, &QuadratureConfig::default())
    }

    /// Value of the `extra`-th derivative of this function.
    pub fn eval_deriv(&self, xi: T, extra: u8, cfg: &QuadratureConfig<T>) -> Cx<T> {
        self.terms
            .iter()
            .map(|t| t.coeff * t.kind.eval(t.deriv + extra, xi, cfg))
            .fold(czero(), |a, b| a + b)
    }

    /// `f~` at a complex frequency (entire for compact support; closed form
    /// for Gaussians; errors for check transforms off the real line).
    pub fn fourier_at(&self, q: Cx<T>, cfg: &QuadratureConfig<T>) -> Result<Cx<T>> {
        let mut acc = czero();
        for t in &self.terms {
            let miq = Cx::new(T::zero(), -T::one()) * q;
            acc = acc + t.coeff * miq.powu(t.deriv as u32) * t.kind.fourier(q, cfg)?;
        }
        Ok(acc)
    }

    /// `f~(q)` at real frequency.
    pub fn fourier(&self, q: T) -> Cx<T> {
        self.fourier_at(Cx::new(q, T::zero()), &QuadratureConfig::default())
            .expect("real-line Fourier transform failed")
    }

    /// `f̂^±(β) = ±i e^β f~(±e^β)` at real β.
    pub fn hat(&self, sign: Sign, beta: T) -> Cx<T> {
        self.hat_strip(sign, Cx::new(beta, T::zero()))
            .expect("real-line hat transform failed")
    }

    /// Strip continuation `f̂^±(ζ) = ±i e^ζ f~(±e^ζ)`.
    pub fn hat_strip(&self, sign: Sign, zeta: Cx<T>) -> Result<Cx<T>> {
        self.hat_strip_with(sign, zeta, &QuadratureConfig::default())
    }

    pub fn hat_strip_with(
        &self,
        sign: Sign,
        zeta: Cx<T>,
        cfg: &QuadratureConfig<T>,
    ) -> Result<Cx<T>> {
        let s: T = sign.val();
        let e = zeta.exp();
        let pref = Cx::new(T::zero(), s) * e;
        Ok(pref * self.fourier_at(e * s, cfg)?)
    }

    /// `f^{ξ,λ}(ξ′) = f(e^{-λ}(ξ′-ξ))`, normalized eagerly for the closed-form
    /// kinds.
    pub fn affine_push(&self, xi: T, lambda: T) -> Self {
        let el = lambda.exp();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                // chain rule: D^k of the pushed kind picks up e^{-kλ}
                let coeff = t.coeff * Cx::new((lambda * T::of(t.deriv as f64)).exp(), T::zero());
                let kind = match &t.kind {
                    Kind1D::Gaussian {
                        center,
                        width,
                        modulation,
                        poly,
                    } => Kind1D::Gaussian {
                        center: xi + el * *center,
                        width: el * *width,
                        modulation: *modulation / el,
                        poly: poly.clone(),
                    },
                    Kind1D::Bump { a, b, shape } => Kind1D::Bump {
                        a: xi + el * *a,
                        b: xi + el * *b,
                        shape: *shape,
                    },
                    other => Kind1D::Affine {
                        inner: Box::new(TestFunction1D {
                            terms: vec![Term1D {
                                coeff: cone(),
                                deriv: 0,
                                kind: other.clone(),
                            }],
                        }),
                        xi,
                        lambda,
                    },
                };
                Term1D {
                    coeff,
                    deriv: t.deriv,
                    kind,
                }
            })
            .collect();
        TestFunction1D { terms }
    }

    /// `f′` (exact at transform level; pointwise via closed forms).
    pub fn derivative(&self) -> Self {
        TestFunction1D {
            terms: self
                .terms
                .iter()
                .map(|t| Term1D {
                    coeff: t.coeff,
                    deriv: t.deriv + 1,
                    kind: t.kind.clone(),
                })
                .collect(),
        }
    }

    /// `f^j(ξ) = conj(f(-ξ))`.
    pub fn reflect(&self) -> Self {
        TestFunction1D {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let sgn = if t.deriv % 2 == 0 { T::one() } else { -T::one() };
                    Term1D {
                        coeff: t.coeff.conj() * Cx::new(sgn, T::zero()),
                        deriv: t.deriv,
                        kind: t.kind.reflect(),
                    }
                })
                .collect(),
        }
    }

    /// Pointwise complex conjugate (derivatives commute with conjugation).
    pub fn conjugate(&self) -> Self {
        TestFunction1D {
            terms: self
                .terms
                .iter()
                .map(|t| Term1D {
                    coeff: t.coeff.conj(),
                    deriv: t.deriv,
                    kind: t.kind.conjugate(),
                })
                .collect(),
        }
    }

    pub fn scaled_by(&self, c: Cx<T>) -> Self {
        TestFunction1D {
            terms: self
                .terms
                .iter()
                .map(|t| Term1D {
                    coeff: t.coeff * c,
                    deriv: t.deriv,
                    kind: t.kind.clone(),
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TestFunction1D { terms }
    }
}

/// A 2D test function: `f = ∂g/∂x_k` (or `g` itself) for a finite tensor sum
/// `g(x₀,x₁) = Σ c_i a_i(x₀) b_i(x₁)`.
#[derive(Debug, Clone)]
pub struct TestFunction2D<T> {
    /// Tensor terms of the parent `g`.
    pub terms: Vec<(Cx<T>, TestFunction1D<T>, TestFunction1D<T>)>,
    /// `Some(k)`: this function is `∂g/∂x_k`, `k ∈ {0,1}`.
    pub derivative_index: Option<usize>,
}

impl<T: Real> TestFunction2D<T> {
    pub fn tensor(a: TestFunction1D<T>, b: TestFunction1D<T>) -> Self {
        TestFunction2D {
            terms: vec![(cone(), a, b)],
            derivative_index: None,
        }
    }

    /// Mark as `∂g/∂x_k` of the stored parent.
    pub fn derivative(mut self, k: usize) -> Self {
        assert!(k <= 1, "derivative index must be 0 or 1");
        assert!(
            self.derivative_index.is_none(),
            "only first-order derivatives are supported"
        );
        self.derivative_index = Some(k);
        self
    }

    /// The stored parent `g` (identity when no derivative is marked).
    pub fn parent(&self) -> Self {
        TestFunction2D {
            terms: self.terms.clone(),
            derivative_index: None,
        }
    }

    pub fn eval_with(&self, x0: T, x1: T, cfg: &QuadratureConfig<T>) -> Cx<T> {
        let mut acc = czero();
        for (c, a, b) in &self.terms {
            let v = match self.derivative_index {
                None => a.eval_with(x0, cfg) * b.eval_with(x1, cfg),
                Some(0) => a.eval_deriv(x0, 1, cfg) * b.eval_with(x1, cfg),
                Some(_) => a.eval_with(x0, cfg) * b.eval_deriv(x1, 1, cfg),
            };
            acc = acc + *c * v;
        }
        acc
    }

    pub fn eval(&self, x0: T, x1: T) -> Cx<T> {
        self.eval_with(x0, x1, &QuadratureConfig::default())
    }

    /// Mass-shell restriction `f^{m±}(p) = (1/2π) ∫ f(x) e^{±i(ω_p x⁰ - p x¹)} d²x`,
    /// computed factor-wise: `f^{m±}(p) = Σ c_i · mult_k · ã_i(±ω_p) b̃_i(∓p)`
    /// with `mult = 1, ∓iω_p, ±ip` for no derivative, k=0, k=1.
    pub fn mass_shell(&self, m: T, sign: Sign, p: T) -> Result<Cx<T>> {
        self.mass_shell_with(m, sign, p, &QuadratureConfig::default())
    }

    pub fn mass_shell_with(
        &self,
        m: T,
        sign: Sign,
        p: T,
        cfg: &QuadratureConfig<T>,
    ) -> Result<Cx<T>> {
        if m == T::zero() && self.derivative_index.is_none() {
            return Err(Error::MasslessInfraredDivergent);
        }
        let s: T = sign.val();
        let omega = (p * p + m * m).sqrt();
        let mult = match self.derivative_index {
            None => cone(),
            Some(0) => Cx::new(T::zero(), -s * omega),
            Some(_) => Cx::new(T::zero(), s * p),
        };
        let mut acc = czero::<T>();
        for (c, a, b) in &self.terms {
            let av = a.fourier_at(Cx::new(s * omega, T::zero()), cfg)?;
            let bv = b.fourier_at(Cx::new(-s * p, T::zero()), cfg)?;
            acc = acc + *c * av * bv;
        }
        Ok(acc * mult)
    }

    /// `f_λ(x) = λ^{-2} f(x/λ)`, satisfying `f_λ^{m±}(p) = f^{λm±}(λp)`.
    pub fn scale(&self, lambda: T) -> Self {
        assert!(lambda > T::zero());
        let lnl = lambda.ln();
        // derivative of the parent eats one power of λ
        let pow = if self.derivative_index.is_some() {
            T::one() / lambda
        } else {
            T::one() / (lambda * lambda)
        };
        TestFunction2D {
            terms: self
                .terms
                .iter()
                .map(|(c, a, b)| {
                    (
                        *c * Cx::new(pow, T::zero()),
                        a.affine_push(T::zero(), lnl),
                        b.affine_push(T::zero(), lnl),
                    )
                })
                .collect(),
            derivative_index: self.derivative_index,
        }
    }

    /// Chiral components on the light rays `x_l = x⁰+x¹`, `x_r = x⁰-x¹`:
    /// `f_l(ξ) = ½ ∫ f((ξ+ξ′)/2, (ξ-ξ′)/2) dξ′` and the mirror for `f_r`.
    /// For a tensor term these are the convolution `a*b` and the correlation
    /// `∫a(ξ+u)b(u)du`; a marked derivative gives `f_l = g_l′`,
    /// `f_r = (-1)^k g_r′`.
    pub fn chiral_components(&self) -> (TestFunction1D<T>, TestFunction1D<T>) {
        let mut left = TestFunction1D::zero();
        let mut right = TestFunction1D::zero();
        for (c, a, b) in &self.terms {
            left.terms.push(Term1D {
                coeff: *c,
                deriv: 0,
                kind: Kind1D::Convolve(Box::new(a.clone()), Box::new(b.clone())),
            });
            right.terms.push(Term1D {
                coeff: *c,
                deriv: 0,
                kind: Kind1D::Correlate(Box::new(a.clone()), Box::new(b.clone())),
            });
        }
        match self.derivative_index {
            None => (left, right),
            Some(k) => {
                let sgn = if k % 2 == 0 { T::one() } else { -T::one() };
                (
                    left.derivative(),
                    right.derivative().scaled_by(Cx::new(sgn, T::zero())),
                )
            }
        }
    }

    /// Pointwise conjugate `f*(x) = conj(f(x))`.
    pub fn conjugate(&self) -> Self {
        TestFunction2D {
            terms: self
                .terms
                .iter()
                .map(|(c, a, b)| (c.conj(), a.conjugate(), b.conjugate()))
                .collect(),
            derivative_index: self.derivative_index,
        }
    }

    /// `f^j(x) = conj(f(-x))`. For `f = ∂g/∂x_k` this is `-∂(g^j)/∂x_k`.
    pub fn reflect(&self) -> Self {
        let sgn = if self.derivative_index.is_some() {
            -T::one()
        } else {
            T::one()
        };
        TestFunction2D {
            terms: self
                .terms
                .iter()
                .map(|(c, a, b)| {
                    (
                        c.conj() * Cx::new(sgn, T::zero()),
                        a.reflect(),
                        b.reflect(),
                    )
                })
                .collect(),
            derivative_index: self.derivative_index,
        }
    }

    /// Shift by a spacetime vector: `f_a(x) = f(x⁰-a⁰, x¹-a¹)`.
    pub fn translate(&self, a0: T, a1: T) -> Self {
        TestFunction2D {
            terms: self
                .terms
                .iter()
                .map(|(c, a, b)| {
                    (
                        *c,
                        a.affine_push(a0, T::zero()),
                        b.affine_push(a1, T::zero()),
                    )
                })
                .collect(),
            derivative_index: self.derivative_index,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            self.derivative_index, other.derivative_index,
            "can only add functions with the same derivative structure"
        );
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TestFunction2D {
            terms,
            derivative_index: self.derivative_index,
        }
    }
}

// --- JSON descriptions ---

fn default_poly() -> Vec<[f64; 2]> {
    vec![[1.0, 0.0]]
}

fn default_shape() -> f64 {
    1.0
}

fn default_coeff() -> [f64; 2] {
    [1.0, 0.0]
}

/// JSON description of a 1D test function.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TestFn1DSpec {
    Gaussian {
        center: f64,
        width: f64,
        #[serde(default)]
        modulation: f64,
        #[serde(default = "default_poly")]
        poly: Vec<[f64; 2]>,
    },
    Bump {
        support: [f64; 2],
        #[serde(default = "default_shape")]
        shape: f64,
    },
}

impl TestFn1DSpec {
    pub fn build<T: Real>(&self) -> TestFunction1D<T> {
        match self {
            TestFn1DSpec::Gaussian {
                center,
                width,
                modulation,
                poly,
            } => TestFunction1D::gaussian(
                T::of(*center),
                T::of(*width),
                T::of(*modulation),
                poly.iter().map(|c| Cx::new(T::of(c[0]), T::of(c[1]))).collect(),
            ),
            TestFn1DSpec::Bump { support, shape } => {
                TestFunction1D::bump(T::of(support[0]), T::of(support[1]), T::of(*shape))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorTermSpec {
    #[serde(default = "default_coeff")]
    pub coeff: [f64; 2],
    pub a: TestFn1DSpec,
    pub b: TestFn1DSpec,
}

/// JSON description of a 2D test function.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestFn2DSpec {
    pub tensor2d: Vec<TensorTermSpec>,
    #[serde(default)]
    pub derivative_index: Option<usize>,
}

impl TestFn2DSpec {
    pub fn build<T: Real>(&self) -> TestFunction2D<T> {
        let terms = self
            .tensor2d
            .iter()
            .map(|t| {
                (
                    Cx::new(T::of(t.coeff[0]), T::of(t.coeff[1])),
                    t.a.build(),
                    t.b.build(),
                )
            })
            .collect();
        TestFunction2D {
            terms,
            derivative_index: self.derivative_index,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_nd;
    use crate::C64;

    type F1 = TestFunction1D<f64>;
    type F2 = TestFunction2D<f64>;

    const SQRT_2PI: f64 = 2.5066282746310002;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    /// Quadrature oracle for f~(q) at real q.
    fn fourier_oracle(f: &F1, q: f64) -> C64 {
        let (lo, hi) = integration_window(f, &cfg());
        integrate_interval(
            |x: f64| f.eval(x) * C64::new(0.0, q * x).exp(),
            lo,
            hi,
            &cfg(),
        )
        .unwrap()
        .value
            / SQRT_2PI
    }

    fn fancy_gaussian() -> F1 {
        F1::gaussian(
            0.4,
            0.8,
            1.3,
            vec![C64::new(1.0, 0.5), C64::new(-0.3, 0.0), C64::new(0.0, 0.2)],
        )
    }

    #[test]
    fn bump_vanishes_outside_support() {
        let f = F1::bump(1.0, 2.0, 1.5);
        for x in [-3.0, 0.999999, 1.0, 2.0, 2.0000001, 50.0] {
            assert_eq!(f.eval(x), C64::new(0.0, 0.0));
        }
        assert!(f.eval(1.5).re > 0.0);
        assert_eq!(f.support(), Support::Interval(1.0, 2.0));
    }

    #[test]
    fn gaussian_transform_matches_quadrature() {
        let f = fancy_gaussian();
        for q in grid(9, -4.0, 4.0) {
            let closed = f.fourier(q);
            let oracle = fourier_oracle(&f, q);
            assert!((closed - oracle).norm() < 1e-10, "q={q}: {closed} vs {oracle}");
        }
    }

    #[test]
    fn derivative_transform_rule() {
        // (f')~ = -iq f~, closed form vs the quadrature oracle of f'
        let f = fancy_gaussian().derivative();
        for q in grid(7, -3.0, 3.0) {
            let oracle = fourier_oracle(&f, q);
            assert!((f.fourier(q) - oracle).norm() < 1e-10);
        }
        assert_eq!(f.fourier(0.0), C64::new(0.0, 0.0));
        let db = F1::bump(-1.0, 1.0, 2.0).derivative();
        assert!(db.fourier(0.0).norm() < 1e-13);
        assert!(db.is_derivative());
    }

    #[test]
    fn bump_derivative_pointwise_matches_difference_quotient() {
        let f = F1::bump(0.0, 2.0, 1.0);
        let df = f.derivative();
        let h = 1e-6;
        for x in grid(11, 0.1, 1.9) {
            let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
            assert!((df.eval(x) - fd).norm() < 1e-6);
        }
    }

    #[test]
    fn hat_boundary_values() {
        // f̂^+(β+iπ) = f̂^-(β) for compactly supported f
        let f = F1::bump(1.0, 2.0, 1.0);
        for beta in grid(100, -2.0, 2.0) {
            let plus = f
                .hat_strip(Sign::Plus, C64::new(beta, std::f64::consts::PI))
                .unwrap();
            let minus = f.hat(Sign::Minus, beta);
            assert!((plus - minus).norm() < 1e-8, "beta={beta}");
        }
    }

    #[test]
    fn reflection_covariance() {
        // (f^j)^±(β) = -conj(f̂^±(β))
        for f in [fancy_gaussian(), F1::bump(0.5, 1.5, 1.0).derivative()] {
            let fj = f.reflect();
            for beta in grid(20, -1.5, 1.5) {
                for sign in [Sign::Plus, Sign::Minus] {
                    let lhs = fj.hat(sign, beta);
                    let rhs = -f.hat(sign, beta).conj();
                    assert!((lhs - rhs).norm() < 1e-9, "beta={beta}");
                }
            }
            // also pointwise: f^j(ξ) = conj(f(-ξ))
            for x in grid(9, -2.0, 2.0) {
                assert!((fj.eval(x) - f.eval(-x).conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn right_support_strip_decay_bound() {
        // f supported in (1, ∞): |f̂^+(β+iλ)| ≤ (e^β/√(2π)) ‖f‖₁ e^{-e^β sin λ}
        let f = F1::bump(1.0, 2.0, 1.0);
        let l1 = integrate_interval(|x: f64| f.eval(x), 1.0, 2.0, &cfg())
            .unwrap()
            .value
            .re;
        for beta in grid(7, -1.0, 2.0) {
            for lam in [0.3, 1.0, 1.5, std::f64::consts::PI - 0.3] {
                let v = f.hat_strip(Sign::Plus, C64::new(beta, lam)).unwrap().norm();
                let bound = beta.exp() / SQRT_2PI * l1 * (-beta.exp() * lam.sin()).exp();
                assert!(v <= bound * (1.0 + 1e-10), "β={beta} λ={lam}: {v} > {bound}");
            }
        }
    }

    #[test]
    fn hat_exponential_decay_bound() {
        // fit c on a coarse grid, verify |f̂^±(β)| ≤ c e^{-|β|} on a finer one
        let f = fancy_gaussian();
        for sign in [Sign::Plus, Sign::Minus] {
            let fit: f64 = grid(601, -30.0, 30.0)
                .iter()
                .map(|&b| f.hat(sign, b).norm() * b.abs().exp())
                .fold(0.0, f64::max);
            assert!(fit.is_finite() && fit > 0.0);
            for beta in grid(587, -30.0, 30.0) {
                assert!(f.hat(sign, beta).norm() <= 1.5 * fit * (-beta.abs()).exp() + 1e-300);
            }
        }
    }

    #[test]
    fn check_hat_round_trips() {
        // five bump shapes; 200-point grid; sup error < 1e-8
        let shapes = [(-1.0, 1.0, 1.0), (-0.5, 0.7, 2.0), (0.0, 2.0, 0.7), (-2.0, -0.5, 1.3), (-0.3, 0.3, 1.0)];
        for (a, b, s) in shapes {
            let phi = F1::bump(a, b, s);
            for sign in [Sign::Plus, Sign::Minus] {
                let f = F1::check_transform(&phi, sign);
                let mut sup_same = 0.0_f64;
                let mut sup_cross = 0.0_f64;
                for beta in grid(200, a - 0.5, b + 0.5) {
                    sup_same = sup_same.max((f.hat(sign, beta) - phi.eval(beta)).norm());
                    sup_cross = sup_cross.max(f.hat(sign.flip(), beta).norm());
                }
                assert!(sup_same < 1e-8, "({a},{b},{s}): {sup_same}");
                assert!(sup_cross < 1e-8);
            }
        }
        // φ ≡ 0 → zero function
        let z = F1::check_transform(&F1::bump(-1.0, 1.0, 1.0).scaled_by(C64::new(0.0, 0.0)), Sign::Plus);
        assert_eq!(z.eval(0.3), C64::new(0.0, 0.0));
    }

    #[test]
    fn check_transform_pointwise_consistency() {
        // hat of check evaluated from the pointwise values must agree with
        // the closed transform on a modest β window (ties eval to fourier)
        let phi = F1::bump(-0.5, 0.5, 1.0);
        let f = F1::check_transform(&phi, Sign::Plus);
        // f~ is supported in q ∈ (e^{-1/2}, e^{1/2}); invert on that window
        let q0 = 1.1_f64;
        let direct = f.fourier(q0);
        assert!((direct - C64::new(0.0, -1.0) * phi.eval(q0.ln()) / q0).norm() < 1e-14);
        // pointwise value at 0: (1/√(2π)) ∫ f~(q) dq
        let by_quadrature = integrate_interval(
            |q: f64| C64::new(0.0, -1.0) * phi.eval(q.ln()) / q,
            (-0.5_f64).exp(),
            (0.5_f64).exp(),
            &cfg(),
        )
        .unwrap()
        .value
            / SQRT_2PI;
        assert!((f.eval(0.0) - by_quadrature).norm() < 1e-10);
    }

    #[test]
    fn affine_push_basics() {
        let f = F1::bump(1.0, 2.0, 1.0);
        // identity at (0,0)
        let id = f.affine_push(0.0, 0.0);
        for x in grid(11, 0.5, 2.5) {
            assert_eq!(id.eval(x), f.eval(x));
        }
        // support translation
        assert_eq!(f.affine_push(3.0, 0.0).support(), Support::Interval(4.0, 5.0));
    }

    #[test]
    fn affine_push_transform_identity() {
        // (f^{ξ,λ})^±(β) = e^{±iξe^β} f̂^±(β+λ) at (ξ,λ) = (1, 0.7)
        let (xi, lam) = (1.0, 0.7);
        for f in [fancy_gaussian(), F1::bump(-0.5, 0.5, 1.0)] {
            let g = f.affine_push(xi, lam);
            for beta in grid(100, -2.0, 2.0) {
                for sign in [Sign::Plus, Sign::Minus] {
                    let s: f64 = sign.val();
                    let lhs = g.hat(sign, beta);
                    let rhs = C64::new(0.0, s * xi * beta.exp()).exp() * f.hat(sign, beta + lam);
                    assert!((lhs - rhs).norm() < 1e-10, "beta={beta}");
                }
            }
        }
    }

    #[test]
    fn affine_push_of_derivative() {
        // push and derivative interact through the chain rule
        let f = fancy_gaussian().derivative();
        let g = f.affine_push(0.3, -0.4);
        for x in grid(7, -1.0, 1.0) {
            let direct = f.eval((0.4_f64).exp() * (x - 0.3));
            assert!((g.eval(x) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn mass_shell_scaling_identity() {
        // f_λ^{m±}(p) = f^{λm±}(λp) at (λ,p) = (0.5, 1.3), within 1e-12
        let g = F2::tensor(fancy_gaussian(), F1::simple_gaussian(-0.2, 1.1));
        let f = g.derivative(0);
        let (lam, p, m) = (0.5, 1.3, 1.0);
        let fl = f.scale(lam);
        for sign in [Sign::Plus, Sign::Minus] {
            let lhs = fl.mass_shell(m, sign, p).unwrap();
            let rhs = f.mass_shell(lam * m, sign, lam * p).unwrap();
            assert!((lhs - rhs).norm() < 1e-12, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn mass_shell_against_2d_quadrature() {
        // f Gaussian tensor, m = 1: factorized f^{m+} vs direct 2D quadrature
        let f = F2::tensor(F1::simple_gaussian(0.3, 0.9), F1::simple_gaussian(-0.1, 1.2));
        let m = 1.0;
        for p in [0.0_f64, 0.7, -1.4] {
            let omega = (p * p + m * m).sqrt();
            let direct = integrate_nd(
                |x: &[f64]| {
                    f.eval(x[0], x[1]) * C64::new(0.0, omega * x[0] - p * x[1]).exp()
                },
                2,
                &cfg(),
            )
            .unwrap()
            .value
                / (2.0 * std::f64::consts::PI);
            let fast = f.mass_shell(m, Sign::Plus, p).unwrap();
            assert!(
                (fast - direct).norm() / direct.norm().max(1e-30) < 1e-8,
                "p={p}: {fast} vs {direct}"
            );
        }
    }

    #[test]
    fn massless_requires_derivative() {
        let f = F2::tensor(F1::simple_gaussian(0.0, 1.0), F1::simple_gaussian(0.0, 1.0));
        assert!(matches!(
            f.mass_shell(0.0, Sign::Plus, 1.0),
            Err(Error::MasslessInfraredDivergent)
        ));
        // derivative kills the zero mode: f^{0±}(0) = 0
        let fd = f.derivative(0);
        for sign in [Sign::Plus, Sign::Minus] {
            assert_eq!(fd.mass_shell(0.0, sign, 0.0).unwrap(), C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn chiral_component_of_lightcone_tensor() {
        // f(x₀,x₁) = a(x₀+x₁)·b(x₀-x₁) with unit-width Gaussians a, b is the
        // separable function exp(-(x₀-½)² - (x₁+½)² - ½); its left component
        // must be proportional to a.
        let g1 = F1::gaussian(0.5, (0.5_f64).sqrt(), 0.0, vec![C64::new(1.0, 0.0)]);
        let g2 = F1::gaussian(-0.5, (0.5_f64).sqrt(), 0.0, vec![C64::new(1.0, 0.0)]);
        let f = TestFunction2D {
            terms: vec![(C64::new((-0.5_f64).exp(), 0.0), g1, g2)],
            derivative_index: None,
        };
        let (fl, _) = f.chiral_components();
        let a = |xi: f64| (-(xi * xi) / 2.0).exp(); // a(ξ) = e^{-ξ²/2}
        let ratio = fl.eval(0.0).re / a(0.0);
        for xi in grid(9, -2.0, 2.0) {
            assert!((fl.eval(xi).re - ratio * a(xi)).abs() < 1e-9, "xi={xi}");
        }
        // oracle for the defining integral at one point
        let oracle = integrate_interval(
            |xp: f64| f.eval((0.7 + xp) / 2.0, (0.7 - xp) / 2.0) * 0.5,
            -40.0,
            40.0,
            &cfg(),
        )
        .unwrap()
        .value;
        assert!((fl.eval(0.7) - oracle).norm() < 1e-10);
    }

    #[test]
    fn even_function_has_equal_components() {
        // b even in x₁ → f_l = f_r
        let f = F2::tensor(fancy_gaussian(), F1::simple_gaussian(0.0, 0.7));
        let (fl, fr) = f.chiral_components();
        for xi in grid(9, -2.0, 2.0) {
            assert!((fl.eval(xi) - fr.eval(xi)).norm() < 1e-10);
        }
    }

    #[test]
    fn chiral_fourier_identity() {
        // f = ∂g/∂x_k:  f^{0±}(-e^β) = -(1/√(2π)) ĝ_l^±(β)
        //               f^{0±}(+e^β) = -(1/√(2π)) (-1)^k ĝ_r^±(β)
        let beta = 0.3_f64;
        let p = beta.exp();
        for k in [0usize, 1] {
            let g = F2::tensor(fancy_gaussian(), F1::simple_gaussian(-0.2, 1.1));
            let f = g.clone().derivative(k);
            let (gl, gr) = g.chiral_components();
            let sgn_k = if k % 2 == 0 { 1.0 } else { -1.0 };
            for sign in [Sign::Plus, Sign::Minus] {
                let left = f.mass_shell(0.0, sign, -p).unwrap();
                let left_ref = -gl.hat(sign, beta) / SQRT_2PI;
                assert!(
                    (left - left_ref).norm() / left_ref.norm() < 1e-8,
                    "k={k}: {left} vs {left_ref}"
                );
                let right = f.mass_shell(0.0, sign, p).unwrap();
                let right_ref = -gr.hat(sign, beta) / SQRT_2PI * sgn_k;
                assert!(
                    (right - right_ref).norm() / right_ref.norm() < 1e-8,
                    "k={k}: {right} vs {right_ref}"
                );
            }
        }
    }

    #[test]
    fn chiral_components_of_derivative() {
        // f_l = g_l′ and f_r = (-1)^k g_r′, checked pointwise
        let g = F2::tensor(F1::simple_gaussian(0.2, 0.8), F1::simple_gaussian(-0.3, 1.1));
        for k in [0usize, 1] {
            let f = g.clone().derivative(k);
            let (fl, fr) = f.chiral_components();
            let (gl, gr) = g.chiral_components();
            let sgn = if k == 0 { 1.0 } else { -1.0 };
            for xi in grid(5, -1.0, 1.0) {
                assert!((fl.eval(xi) - gl.eval_deriv(xi, 1, &cfg())).norm() < 1e-10);
                assert!((fr.eval(xi) - gr.eval_deriv(xi, 1, &cfg()) * sgn).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn json_specs() {
        let f: F1 = serde_json::from_str::<TestFn1DSpec>(
            r#"{"family":"bump","support":[1.0,2.0],"shape":1.5}"#,
        )
        .unwrap()
        .build();
        assert_eq!(f.support(), Support::Interval(1.0, 2.0));
        let f: F1 = serde_json::from_str::<TestFn1DSpec>(
            r#"{"family":"gaussian","center":0.0,"width":1.0}"#,
        )
        .unwrap()
        .build();
        assert!((f.eval(0.0) - C64::new(1.0, 0.0)).norm() < 1e-15);
        let f2: F2 = serde_json::from_str::<TestFn2DSpec>(
            r#"{"tensor2d":[{"a":{"family":"gaussian","center":0,"width":1},
                             "b":{"family":"gaussian","center":0,"width":1}}],
                "derivative_index":1}"#,
        )
        .unwrap()
        .build();
        assert_eq!(f2.derivative_index, Some(1));
        assert!(f2.mass_shell(0.0, Sign::Plus, 1.0).is_ok());
    }

    #[test]
    fn conjugate_pointwise() {
        let f = F1::gaussian(0.3, 0.9, 1.4, vec![C64::new(1.0, 0.5), C64::new(0.0, -0.2)])
            .derivative()
            .add(&F1::bump(-1.0, 1.0, 1.2));
        for xi in grid(7, -1.5, 1.5) {
            assert!((f.conjugate().eval(xi) - f.eval(xi).conj()).norm() < 1e-12);
        }
        let g = F2::tensor(
            F1::gaussian(0.1, 1.0, 0.7, vec![C64::new(1.0, 0.0)]),
            F1::gaussian(-0.2, 0.8, -0.3, vec![C64::new(0.0, 1.0)]),
        )
        .derivative(1);
        for x in grid(4, -1.0, 1.0) {
            assert!((g.conjugate().eval(x, 0.4) - g.eval(x, 0.4).conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn reflect_and_translate_2d() {
        let g = F2::tensor(
            F1::gaussian(0.1, 1.0, 0.7, vec![C64::new(1.0, -0.3)]),
            F1::simple_gaussian(-0.4, 0.9),
        );
        for k in [0usize, 1] {
            let f = g.clone().derivative(k);
            for (x0, x1) in [(0.3, -0.5), (-0.8, 0.2), (0.0, 1.1)] {
                let lhs = f.reflect().eval(x0, x1);
                let rhs = f.eval(-x0, -x1).conj();
                assert!((lhs - rhs).norm() < 1e-12, "reflect k={k}: {lhs} vs {rhs}");
                let t = f.translate(0.7, -0.2);
                assert!((t.eval(x0, x1) - f.eval(x0 - 0.7, x1 + 0.2)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn correlate_reflect() {
        // (∫a(ξ+u)b(u)du)^j = ∫a^j(ξ+u)b^j(u)du, checked pointwise
        let a = F1::gaussian(0.2, 1.0, 0.5, vec![C64::new(1.0, 0.2)]);
        let b = F1::bump(-1.0, 0.5, 1.0);
        let f = F1 {
            terms: vec![Term1D {
                coeff: C64::new(0.7, -0.1),
                deriv: 0,
                kind: Kind1D::Correlate(Box::new(a), Box::new(b)),
            }],
        };
        for xi in grid(5, -1.0, 1.0) {
            assert!((f.reflect().eval(xi) - f.eval(-xi).conj()).norm() < 1e-10);
        }
    }
}
