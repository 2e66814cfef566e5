//! The S = −1 chiral sector: canonical anticommutation structure, the Fermi
//! field ψ, the energy density T, the translation-generator identity ∫T = H,
//! and the central-charge extraction.
//!
//! With S ≡ −1 the rapidity ladder operators satisfy canonical
//! anticommutation relations, so n-particle creation-word states are Slater
//! determinants and every few-body matrix element reduces to a small
//! determinant of one-dimensional overlap integrals. All operations in this
//! module exploit that structure.

use crate::chiral::{arg_refs, boxed, rapidity_word_inner_product, word_closures, word_wavefn};
use crate::fock::{CMatrix, TruncatedFock};
use crate::numerics::{integrate_1d, integrate_interval, integrate_nd, QuadratureConfig};
use crate::scattering::{MassKernel, ScatteringFunction};
use crate::testfn::{Sign, TestFunction1D};
use crate::zf::{evaluate_vacuum_expectation, normal_order, ArgFn, Generator, Mode};
use crate::{Cx, Error, Real, Result};

fn czero<T: Real>() -> Cx<T> {
    Cx::new(T::zero(), T::zero())
}

fn cone<T: Real>() -> Cx<T> {
    Cx::new(T::one(), T::zero())
}

fn re<T: Real>(x: T) -> Cx<T> {
    Cx::new(x, T::zero())
}

/// `√i = e^{iπ/4}`, the fixed branch used throughout this module.
pub fn sqrt_i<T: Real>() -> Cx<T> {
    let r = T::FRAC_1_SQRT_2();
    Cx::new(r, r)
}

/// The Fermi field element `ψ(f) = y†(k₊) + y(k₋)` with expansion
/// coefficients `k±(β) = i^{∓1/2} e^{−β/2} f̂^±(β)`.
#[derive(Debug, Clone)]
pub struct FermiFieldElement<T: Real> {
    pub f: TestFunction1D<T>,
}

impl<T: Real> FermiFieldElement<T> {
    pub fn new(f: TestFunction1D<T>) -> Self {
        FermiFieldElement { f }
    }

    /// `k±(β)`.
    pub fn coeff(&self, sign: Sign, beta: T) -> Cx<T> {
        let root = match sign {
            Sign::Plus => sqrt_i::<T>().conj(),
            Sign::Minus => sqrt_i::<T>(),
        };
        root * re((-beta * T::of(0.5)).exp()) * self.f.hat(sign, beta)
    }
}

// --- determinant calculus for S = −1 word states ---

/// Determinant of a small complex matrix by partial-pivot elimination;
/// the empty matrix has determinant one.
fn det<T: Real>(mut m: Vec<Vec<Cx<T>>>) -> Cx<T> {
    let n = m.len();
    let mut out: Cx<T> = cone();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r][col].norm_sqr() > m[piv][col].norm_sqr() {
                piv = r;
            }
        }
        if m[piv][col].norm_sqr() == T::zero() {
            return czero();
        }
        if piv != col {
            m.swap(piv, col);
            out = -out;
        }
        let d = m[col][col];
        out = out * d;
        for r in col + 1..n {
            let f = m[r][col] / d;
            for c in col..n {
                let v = m[col][c];
                m[r][c] = m[r][c] - f * v;
            }
        }
    }
    out
}

/// Overlap matrix `G[i][j] = ⟨b_i, k_j⟩ = ∫ conj(b_i) k_j dβ`.
fn gram<T: Real>(
    bra: &[ArgFn<'_, T>],
    ket: &[ArgFn<'_, T>],
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<Vec<Cx<T>>>> {
    bra.iter()
        .map(|b| {
            ket.iter()
                .map(|k| Ok(integrate_1d(|x: T| b(x).conj() * k(x), cfg)?.value))
                .collect()
        })
        .collect()
}

/// `⟨bra, y†(β)y†(γ) ket⟩` for `|bra| = |ket| + 2`: a Slater determinant
/// with two point-evaluation columns in front of the overlap columns.
fn me_cre_cre<T: Real>(
    bra: &[ArgFn<'_, T>],
    g: &[Vec<Cx<T>>],
    beta: T,
    gamma: T,
) -> Cx<T> {
    let m = bra.len();
    let mat: Vec<Vec<Cx<T>>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(m);
            row.push(bra[i](beta).conj());
            row.push(bra[i](gamma).conj());
            row.extend(g[i].iter().copied());
            row
        })
        .collect();
    det(mat)
}

/// `⟨bra, y(β)y(γ) ket⟩` for `|ket| = |bra| + 2`, by conjugating the
/// reversed creation element.
fn me_ann_ann<T: Real>(
    bra: &[ArgFn<'_, T>],
    ket: &[ArgFn<'_, T>],
    g: &[Vec<Cx<T>>],
    beta: T,
    gamma: T,
) -> Cx<T> {
    let n = ket.len();
    let m = bra.len();
    let mat: Vec<Vec<Cx<T>>> = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(n);
            row.push(ket[i](gamma).conj());
            row.push(ket[i](beta).conj());
            for j in 0..m {
                row.push(g[j][i].conj());
            }
            row
        })
        .collect();
    det(mat).conj()
}

/// `⟨bra, y†(β)y(γ) ket⟩` for `|bra| = |ket|`: the annihilator pulls out
/// each ket function with an alternating sign.
fn me_cre_ann<T: Real>(
    bra: &[ArgFn<'_, T>],
    ket: &[ArgFn<'_, T>],
    g: &[Vec<Cx<T>>],
    beta: T,
    gamma: T,
) -> Cx<T> {
    let m = bra.len();
    let mut total: Cx<T> = czero();
    let mut sign = T::one();
    for j in 0..m {
        let mat: Vec<Vec<Cx<T>>> = (0..m)
            .map(|i| {
                let mut row = Vec::with_capacity(m);
                row.push(bra[i](beta).conj());
                for l in 0..m {
                    if l != j {
                        row.push(g[i][l]);
                    }
                }
                row
            })
            .collect();
        total = total + re(sign) * ket[j](gamma) * det(mat);
        sign = -sign;
    }
    total
}

/// The energy density element `T(h)`: smearing function plus the four
/// double-rapidity kernel blocks.
#[derive(Debug, Clone)]
pub struct EnergyDensityElement<T: Real> {
    pub h: TestFunction1D<T>,
}

impl<T: Real> EnergyDensityElement<T> {
    pub fn new(h: TestFunction1D<T>) -> Self {
        EnergyDensityElement { h }
    }

    pub fn matrix_element(
        &self,
        bra: &[ArgFn<'_, T>],
        ket: &[ArgFn<'_, T>],
        cfg: &QuadratureConfig<T>,
    ) -> Result<(Cx<T>, bool)> {
        energy_density_matrix_element(&self.h, bra, ket, cfg)
    }
}

/// Radius of the effective frequency support of `h~`, estimated on a
/// geometric ladder of sample points. Used to rescale the frequency variable
/// of the creator/annihilator blocks so that very wide smearings (whose
/// transforms are narrow spikes) stay resolvable by the adaptive quadrature.
fn fourier_window<T: Real>(h: &TestFunction1D<T>, cfg: &QuadratureConfig<T>) -> T {
    let mut peak = h.fourier(T::zero()).norm();
    let mut samples: Vec<(T, T)> = Vec::new();
    let mut k = cfg.cutoff;
    for _ in 0..60 {
        for s in [k, -k] {
            let v = h.fourier(s).norm();
            samples.push((s.abs(), v));
            peak = peak.max(v);
        }
        k = k * T::of(0.5);
        if k < cfg.cutoff * T::of(1e-8) {
            break;
        }
    }
    if peak == T::zero() {
        return cfg.cutoff;
    }
    let thr = peak * T::of(1e-18);
    let mut kmax = T::zero();
    for (ka, v) in samples {
        if v >= thr {
            kmax = kmax.max(ka);
        }
    }
    (kmax * T::of(4.0))
        .min(cfg.cutoff)
        .max(cfg.cutoff * T::of(1e-6))
}

/// Matrix element of the smeared energy density `T(h)` between creation-word
/// states. The boolean flag reports whether the particle numbers satisfy the
/// selection rule (difference 0 or ±2); outside of it the element is an exact
/// zero and the flag is `false`.
///
/// The creator/annihilator blocks use the frequency substitution
/// `k = e^β ∓ e^γ` so that the smearing transform `h~(k)` is evaluated on a
/// variable centred at its peak; this keeps wide (flat-top) smearings
/// resolvable by the adaptive quadrature.
pub fn energy_density_matrix_element<T: Real>(
    h: &TestFunction1D<T>,
    bra: &[ArgFn<'_, T>],
    ket: &[ArgFn<'_, T>],
    cfg: &QuadratureConfig<T>,
) -> Result<(Cx<T>, bool)> {
    let m = bra.len();
    let n = ket.len();
    let diff = n as isize - m as isize;
    if diff.abs() > 2 || diff.rem_euclid(2) == 1 {
        return Ok((czero(), false));
    }
    let half = T::of(0.5);
    let c0 = T::one() / (T::of(2.0) * (T::of(2.0) * T::PI()).sqrt());
    let g = gram(bra, ket, cfg)?;
    let i_unit: Cx<T> = Cx::new(T::zero(), T::one());

    let value = match diff {
        -2 => {
            // y†y† block: kernel −i c₀ e^{(β+3γ)/2} h~(e^β+e^γ)
            integrate_nd(
                |x: &[T]| {
                    let (b, ga) = (x[0], x[1]);
                    let e = b.exp() + ga.exp();
                    let ker = -i_unit * re(c0 * ((b + T::of(3.0) * ga) * half).exp())
                        * h.fourier(e);
                    if ker.norm_sqr() == T::zero() {
                        return czero();
                    }
                    ker * me_cre_cre(bra, &g, b, ga)
                },
                2,
                cfg,
            )?
            .value
        }
        2 => {
            // yy block: kernel −i c₀ e^{(β+3γ)/2} h~(−e^β−e^γ)
            integrate_nd(
                |x: &[T]| {
                    let (b, ga) = (x[0], x[1]);
                    let e = b.exp() + ga.exp();
                    let ker = -i_unit * re(c0 * ((b + T::of(3.0) * ga) * half).exp())
                        * h.fourier(-e);
                    if ker.norm_sqr() == T::zero() {
                        return czero();
                    }
                    ker * me_ann_ann(bra, ket, &g, b, ga)
                },
                2,
                cfg,
            )?
            .value
        }
        _ => {
            if m == 0 {
                return Ok((czero(), true));
            }
            // the frequency variable is rescaled so that h~ occupies an O(1)
            // fraction of the integration window
            let scale = fourier_window(h, cfg) / cfg.cutoff;
            // y†(β)y(γ) block, k = e^β − e^γ:
            let ca = integrate_nd(
                |x: &[T]| {
                    let (b, k) = (x[0], x[1] * scale);
                    let rem = b.exp() - k;
                    if rem <= T::zero() {
                        return czero();
                    }
                    let ker = re(scale * c0 * (b * half).exp() * rem.sqrt()) * h.fourier(k);
                    if ker.norm_sqr() == T::zero() {
                        return czero();
                    }
                    ker * me_cre_ann(bra, ket, &g, b, rem.ln())
                },
                2,
                cfg,
            )?
            .value;
            // y†(γ)y(β) block, k = e^γ − e^β, parametrized by (β, k):
            let car = integrate_nd(
                |x: &[T]| {
                    let (b, k) = (x[0], x[1] * scale);
                    let sum = b.exp() + k;
                    if sum <= T::zero() {
                        return czero();
                    }
                    let ker = re(scale * c0 * (b * half).exp() * sum.sqrt()) * h.fourier(k);
                    if ker.norm_sqr() == T::zero() {
                        return czero();
                    }
                    ker * me_cre_ann(bra, ket, &g, sum.ln(), b)
                },
                2,
                cfg,
            )?
            .value;
            ca + car
        }
    };
    Ok((value, true))
}

// --- CAR checks on the grid oracle ---

/// Smeared discrete ladder operator `Σ_j w_j ψ_j · M_j` over the grid of a
/// truncated Fock oracle.
fn smeared<T: Real>(
    tf: &TruncatedFock<T>,
    psi: &[Cx<T>],
    pick: impl Fn(usize) -> CMatrix<T>,
) -> CMatrix<T> {
    let dim = tf.dim;
    let mut out = CMatrix::zeros(dim);
    for (j, (&w, &p)) in tf.weights.iter().zip(psi.iter()).enumerate() {
        let c = re(w) * p;
        if c.norm_sqr() == T::zero() {
            continue;
        }
        let mj = pick(j);
        for (o, v) in out.a.iter_mut().zip(mj.a.iter()) {
            *o = *o + c * *v;
        }
    }
    out
}

/// Verifies the CAR norm equality `‖y†(ψ)‖ = ‖ψ‖` on the grid oracle.
/// Returns `(operator norm, grid norm of ψ)`; the operator norm is the
/// largest singular value of the smeared creator with respect to the
/// weighted inner product.
pub fn car_norm_check<T: Real>(psi: &[Cx<T>], tf: &TruncatedFock<T>) -> (T, T) {
    assert_eq!(psi.len(), tf.grid.len());
    let grid_norm = psi
        .iter()
        .zip(tf.weights.iter())
        .fold(T::zero(), |acc, (p, &w)| acc + w * p.norm_sqr())
        .sqrt();
    let a = smeared(tf, psi, |j| tf.creator(j).clone());
    let astar = a.weighted_adjoint(&tf.basis_weight);
    let b = astar.mul(&a);
    // power iteration; the CAR structure makes the top eigenspace exact
    let dim = tf.dim;
    let mut v: Vec<Cx<T>> = (0..dim)
        .map(|i| Cx::new(T::of(1.0 / (1.0 + i as f64)), T::of(0.3 / (2.0 + i as f64))))
        .collect();
    let mut lambda = T::zero();
    for _ in 0..200 {
        let bv = b.apply(&v);
        let num = tf.inner(&v, &bv);
        let den = tf.inner(&v, &v);
        if den.re <= T::zero() {
            return (T::zero(), grid_norm);
        }
        lambda = (num / den).re;
        let scale = bv.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr()).sqrt();
        if scale == T::zero() {
            return (T::zero(), grid_norm);
        }
        v = bv.iter().map(|x| *x / re(scale)).collect();
    }
    (lambda.max(T::zero()).sqrt(), grid_norm)
}

/// Sup over the given states of
/// `|⟨bra, {ψ(f),ψ(g)} ket⟩ − (∫fg)·⟨bra,ket⟩|`.
pub fn anticommutator_check<T: Real>(
    f: &TestFunction1D<T>,
    g: &TestFunction1D<T>,
    states: &[(Vec<TestFunction1D<T>>, Vec<TestFunction1D<T>>)],
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    let base = ScatteringFunction::<T>::ising();
    let kernel = MassKernel::new(base.clone(), T::one());
    let ff = FermiFieldElement::new(f.clone());
    let fg = FermiFieldElement::new(g.clone());
    let coeffs = |field: &'_ FermiFieldElement<T>| {
        let p = field.clone();
        let q = field.clone();
        (
            boxed(move |b: T| p.coeff(Sign::Plus, b)),
            boxed(move |b: T| q.coeff(Sign::Minus, b)),
        )
    };
    let (fp, fm) = coeffs(&ff);
    let (gp, gm) = coeffs(&fg);
    let overlap_fg = integrate_1d(|x: T| f.eval(x) * g.eval(x), cfg)?.value;

    let mut worst = T::zero();
    for (bw, kw) in states {
        let bc = word_closures(bw);
        let kc = word_closures(kw);
        let bra_conj: Vec<_> = bw.iter().rev().map(|w| w.conjugate()).collect();
        let bcc = word_closures(&bra_conj);

        // ⟨bra, ψ(a)ψ(b) ket⟩ summed over the four ladder expansions
        let product = |first: [ArgFn<'_, T>; 2], second: [ArgFn<'_, T>; 2]| -> Result<Cx<T>> {
            let mut total: Cx<T> = czero();
            for a in 0..2 {
                for b in 0..2 {
                    let mut word = Vec::new();
                    let mut args: Vec<ArgFn<'_, T>> = Vec::new();
                    let mut var = 0usize;
                    for w in &bcc {
                        word.push(Generator::annihilate(var));
                        args.push(&**w);
                        var += 1;
                    }
                    word.push(if a == 0 {
                        Generator::create(var)
                    } else {
                        Generator::annihilate(var)
                    });
                    args.push(first[a]);
                    var += 1;
                    word.push(if b == 0 {
                        Generator::create(var)
                    } else {
                        Generator::annihilate(var)
                    });
                    args.push(second[b]);
                    var += 1;
                    for w in &kc {
                        word.push(Generator::create(var));
                        args.push(&**w);
                        var += 1;
                    }
                    let nf = normal_order(&word, Mode::Rapidity)?.vacuum_part();
                    if nf.terms.is_empty() {
                        continue;
                    }
                    total = total + evaluate_vacuum_expectation(&nf, &kernel, &args, cfg)?;
                }
            }
            Ok(total)
        };
        let val = product([&*fp, &*fm], [&*gp, &*gm])? + product([&*gp, &*gm], [&*fp, &*fm])?;
        let overlap = rapidity_word_inner_product(&base, &arg_refs(&bc), &arg_refs(&kc), cfg)?;
        worst = worst.max((val - overlap_fg * overlap).norm());
    }
    Ok(worst)
}

// --- ∫ T = H ---

/// Compares `⟨Φ, (∫dξ T(ξ)) Ψ⟩`, realized as the h → 1 limit of widening
/// Gaussian smearings with Richardson extrapolation in the width, against
/// `⟨Φ, H Ψ⟩` evaluated by direct n-dimensional quadrature with the energy
/// weight `Σ e^{β_i}`. Returns the largest relative residual over the states.
pub fn integral_t_equals_h<T: Real>(
    states: &[(Vec<TestFunction1D<T>>, Vec<TestFunction1D<T>>)],
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    let base = ScatteringFunction::<T>::ising();
    let widths = [T::of(16.0), T::of(32.0), T::of(64.0)];
    let mut worst = T::zero();
    for (bw, kw) in states {
        let bc = word_closures(bw);
        let kc = word_closures(kw);
        let bra = arg_refs(&bc);
        let ket = arg_refs(&kc);
        let mut vals = Vec::with_capacity(3);
        for &w in &widths {
            let h = TestFunction1D::simple_gaussian(T::zero(), w);
            vals.push(energy_density_matrix_element(&h, &bra, &ket, cfg)?.0);
        }
        // error expands in inverse even powers of the width; eliminate the
        // w⁻² and w⁻⁴ terms
        let four = re(T::of(4.0));
        let r1a = (vals[1] * four - vals[0]) / re(T::of(3.0));
        let r1b = (vals[2] * four - vals[1]) / re(T::of(3.0));
        let lhs = (r1b * re(T::of(16.0)) - r1a) / re(T::of(15.0));

        let n = kw.len();
        let rhs = if n == 0 || bw.len() != n {
            czero()
        } else {
            integrate_nd(
                |x: &[T]| {
                    let energy = x.iter().fold(T::zero(), |acc, &b| acc + b.exp());
                    word_wavefn(&base, &bra, x).conj() * word_wavefn(&base, &ket, x) * re(energy)
                },
                n,
                cfg,
            )?
            .value
        };
        let denom = rhs.norm().max(T::of(1e-12));
        worst = worst.max((lhs - rhs).norm() / denom);
    }
    Ok(worst)
}

// --- vacuum two-point function of T and the central charge ---

/// `⟨Ω, T(h₁)T(h₂) Ω⟩` by the four-fold rapidity integral of the concrete
/// kernel representation, collapsed to two dimensions by the CAR pair
/// contractions.
pub fn tt_vacuum_two_point<T: Real>(
    h1: &TestFunction1D<T>,
    h2: &TestFunction1D<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<Cx<T>> {
    let half = T::of(0.5);
    let pref = T::one() / (T::of(8.0) * T::PI());
    Ok(integrate_nd(
        |x: &[T]| {
            let (b, ga) = (x[0], x[1]);
            let e = b.exp() + ga.exp();
            let a1 = ((b + T::of(3.0) * ga) * half).exp();
            let a2 = ((ga + T::of(3.0) * b) * half).exp();
            let f = h1.fourier(-e) * h2.fourier(e);
            if f.norm_sqr() == T::zero() {
                return czero();
            }
            re(pref * a1 * (a1 - a2)) * f
        },
        2,
        cfg,
    )?
    .value)
}

/// The closed-form counterpart of [`tt_vacuum_two_point`]:
/// `(1/48π) ∫₀^∞ dk k³ h₁~(−k) h₂~(k)`, with the central charge `c = 1/2`
/// already read off.
pub fn tt_closed_form<T: Real>(
    h1: &TestFunction1D<T>,
    h2: &TestFunction1D<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<Cx<T>> {
    let pref = T::one() / (T::of(48.0) * T::PI());
    Ok(integrate_interval(
        |k: T| re(pref * k * k * k) * h1.fourier(-k) * h2.fourier(k),
        T::zero(),
        cfg.cutoff,
        cfg,
    )?
    .value)
}

/// Vacuum expectation of `i[T(h₁), T(h₂)]` from the antisymmetrized
/// two-point kernel, evaluated as a single two-dimensional quadrature.
pub fn tt_commutator_vacuum<T: Real>(
    h1: &TestFunction1D<T>,
    h2: &TestFunction1D<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<Cx<T>> {
    let half = T::of(0.5);
    let pref = T::one() / (T::of(8.0) * T::PI());
    let i_unit: Cx<T> = Cx::new(T::zero(), T::one());
    Ok(integrate_nd(
        |x: &[T]| {
            let (b, ga) = (x[0], x[1]);
            let e = b.exp() + ga.exp();
            let f = h1.fourier(-e) * h2.fourier(e) - h2.fourier(-e) * h1.fourier(e);
            if f.norm_sqr() == T::zero() {
                return czero();
            }
            let a1 = ((b + T::of(3.0) * ga) * half).exp();
            let a2 = ((ga + T::of(3.0) * b) * half).exp();
            i_unit * re(pref * a1 * (a1 - a2)) * f
        },
        2,
        cfg,
    )?
    .value)
}

/// `(1/24π) ∫ h₁ h₂'''`, the smeared δ''' basis element of the
/// Lüscher–Mack right side.
fn delta_triple_basis<T: Real>(
    h1: &TestFunction1D<T>,
    h2: &TestFunction1D<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    let h2ppp = h2.derivative().derivative().derivative();
    let v = integrate_1d(|x: T| h1.eval(x) * h2ppp.eval(x), cfg)?.value;
    Ok(v.re / (T::of(24.0) * T::PI()))
}

/// Residual of the vacuum Lüscher–Mack relation:
/// `⟨Ω, i[T(h₁),T(h₂)] Ω⟩` versus `(c/24π) ∫ h₁ h₂'''` with `c = 1/2`
/// (the `δ'(T+T)` term has vanishing vacuum expectation).
pub fn luscher_mack_residual<T: Real>(
    h1: &TestFunction1D<T>,
    h2: &TestFunction1D<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    let lhs = tt_commutator_vacuum(h1, h2, cfg)?;
    let rhs = re(T::of(0.5) * delta_triple_basis(h1, h2, cfg)?);
    Ok((lhs - rhs).norm())
}

/// The two central-charge routes.
#[derive(Debug, Clone, Copy)]
pub struct CentralCharge<T> {
    /// From the ratio of the four-fold rapidity integral to the bare
    /// `∫₀^∞ k³` spectral integral.
    pub closed_form: T,
    /// From the least-squares δ'''-coefficient fit over a family of
    /// smearing pairs.
    pub fitted: T,
}

/// Least-squares fit (through the origin) of the δ''' coefficient over the
/// given smearing pairs; returns the fitted central charge.
pub fn central_charge_fit<T: Real>(
    pairs: &[(TestFunction1D<T>, TestFunction1D<T>)],
    cfg: &QuadratureConfig<T>,
) -> Result<T> {
    let mut num = T::zero();
    let mut den = T::zero();
    for (h1, h2) in pairs {
        let lhs = tt_commutator_vacuum(h1, h2, cfg)?.re;
        let r = delta_triple_basis(h1, h2, cfg)?;
        num = num + lhs * r;
        den = den + r * r;
    }
    if den < T::of(1e-20) {
        return Err(Error::FitIllConditioned(
            "all smearing pairs have a vanishing delta''' overlap".into(),
        ));
    }
    Ok(num / den)
}

/// Extracts the central charge along both routes with a default family of
/// Gaussian smearings.
pub fn central_charge_extract<T: Real>(cfg: &QuadratureConfig<T>) -> Result<CentralCharge<T>> {
    let h1 = TestFunction1D::simple_gaussian(T::zero(), T::of(0.7));
    let h2 = TestFunction1D::simple_gaussian(T::of(0.9), T::of(0.5));
    let v4 = tt_vacuum_two_point(&h1, &h2, cfg)?;
    let kint = integrate_interval(
        |k: T| re(k * k * k) * h1.fourier(-k) * h2.fourier(k),
        T::zero(),
        cfg.cutoff,
        cfg,
    )?
    .value;
    if kint.norm_sqr() == T::zero() {
        return Err(Error::FitIllConditioned(
            "vanishing spectral integral for the chosen smearings".into(),
        ));
    }
    let closed_form = (v4 * re(T::of(24.0) * T::PI()) / kint).re;

    let g = |c: f64, w: f64| TestFunction1D::simple_gaussian(T::of(c), T::of(w));
    let pairs = vec![
        (g(0.0, 0.5), g(0.4, 0.5)),
        (g(0.0, 0.7), g(0.8, 0.6)),
        (g(-0.3, 0.5), g(0.7, 0.5)),
    ];
    let fitted = central_charge_fit(&pairs, cfg)?;
    Ok(CentralCharge {
        closed_form,
        fitted,
    })
}

/// Central-charge sweep over `(width1, width2, separation)` rows, rendered as
/// a deterministic CSV table with one single-pair fit per row.
pub fn central_charge_sweep<T: Real>(
    rows: &[(T, T, T)],
    cfg: &QuadratureConfig<T>,
) -> Result<String> {
    let mut out = String::from("width1,width2,separation,c_fit\n");
    for &(w1, w2, sep) in rows {
        let h1 = TestFunction1D::simple_gaussian(T::zero(), w1);
        let h2 = TestFunction1D::simple_gaussian(sep, w2);
        let c = central_charge_fit(&[(h1, h2)], cfg)?;
        out.push_str(&format!("{w1},{w2},{sep},{c}\n"));
    }
    Ok(out)
}
