//! S-symmetric Fock-space numerics and the truncated-grid oracle.
//!
//! The continuum side provides the transposition unitaries `D_n(τ_j)`, the
//! projector `P_n`, and inner products of creation-word states. The discrete
//! side ([`TruncatedFock`]) is an exact finite model of the ZF algebra on a
//! momentum/rapidity grid: deltas become `δ_ij/w_i`, the relations close
//! exactly as matrices, and vacuum expectations computed by dense matrix
//! products serve as a brute-force oracle for the symbolic engine.

use crate::numerics::{integrate_nd, QuadratureConfig};
use crate::scattering::MassKernel;
use crate::zf::{ArgFn, GenKind, Generator, Mode};
use crate::{Cx, Error, Real, Result};
use itertools::Itertools;
use std::collections::HashMap;

/// Two-argument S-kernel: `S(u,v)` in momentum mode, `S(u-v)` bound by the
/// caller in rapidity mode.
pub type SKernel<'a, T> = &'a (dyn Fn(T, T) -> Cx<T> + Sync);

/// n-point wavefunction by values.
pub type WaveFn<'a, T> = &'a (dyn Fn(&[T]) -> Cx<T> + Sync);

fn cone<T: Real>() -> Cx<T> {
    Cx::new(T::one(), T::zero())
}

/// `S^π(x) = ∏_{l<r, π(l)>π(r)} S(x_{π(l)}, x_{π(r)})` (0-based π).
pub fn s_pi_factor<T: Real>(s: SKernel<'_, T>, x: &[T], perm: &[usize]) -> Cx<T> {
    let mut v = cone();
    for l in 0..perm.len() {
        for r in l + 1..perm.len() {
            if perm[l] > perm[r] {
                v = v * s(x[perm[l]], x[perm[r]]);
            }
        }
    }
    v
}

/// `(P_n Ψ)(x) = (1/n!) Σ_π S^π(x) Ψ(x∘π)` evaluated at one sample tuple.
pub fn project_eval<T: Real>(s: SKernel<'_, T>, psi: WaveFn<'_, T>, x: &[T]) -> Cx<T> {
    let n = x.len();
    let mut acc = Cx::new(T::zero(), T::zero());
    let mut count = 0usize;
    for perm in (0..n).permutations(n) {
        let permuted: Vec<T> = perm.iter().map(|&i| x[i]).collect();
        acc = acc + s_pi_factor(s, x, &perm) * psi(&permuted);
        count += 1;
    }
    acc / T::of(count as f64)
}

/// `D_n(τ_j)` applied to a wavefunction given by values; `j` is 1-based,
/// `1 ≤ j ≤ n-1`: `(D_n(τ_j)Ψ)(x) = S(x_{j+1}, x_j) · Ψ(x with slots j, j+1 swapped)`.
pub fn apply_transposition<'a, T: Real>(
    s: SKernel<'a, T>,
    j: usize,
    psi: Box<dyn Fn(&[T]) -> Cx<T> + Sync + 'a>,
) -> Box<dyn Fn(&[T]) -> Cx<T> + Sync + 'a> {
    assert!(j >= 1, "transposition index is 1-based");
    Box::new(move |x: &[T]| {
        assert!(j < x.len(), "transposition index out of range");
        let mut y = x.to_vec();
        y.swap(j - 1, j);
        s(x[j], x[j - 1]) * psi(&y)
    })
}

/// An S-symmetric n-particle wavefunction `P_n(ψ₁⊗…⊗ψ_n)`.
pub struct SymmetrizedWavefunction<'a, T> {
    pub n: usize,
    s: SKernel<'a, T>,
    base: Vec<ArgFn<'a, T>>,
}

impl<'a, T: Real> SymmetrizedWavefunction<'a, T> {
    pub fn eval(&self, x: &[T]) -> Cx<T> {
        assert_eq!(x.len(), self.n);
        let tensor = |y: &[T]| -> Cx<T> {
            let mut v = cone();
            for (f, &yi) in self.base.iter().zip(y) {
                v = v * f(yi);
            }
            v
        };
        project_eval(self.s, &tensor, x)
    }
}

/// `P_n` applied to a tensor product of one-particle functions.
pub fn project_symmetric<'a, T: Real>(
    s: SKernel<'a, T>,
    tensor: Vec<ArgFn<'a, T>>,
) -> Result<SymmetrizedWavefunction<'a, T>> {
    let n = tensor.len();
    if n > 4 {
        return Err(Error::ParticleCapExceeded(n, 4));
    }
    Ok(SymmetrizedWavefunction { n, s, base: tensor })
}

/// `⟨z†(ψ₁)…z†(ψ_k)Ω, z†(φ₁)…z†(φ_k)Ω⟩ =
///  Σ_π ∫ ∏_j dμ(x_j) conj(ψ_j(x_j)) S^π(x) ∏_j φ_j(x_{π(j)})`
/// with `dμ = dp/ω_p` (momentum) or `dβ` (rapidity).
pub fn creation_word_inner_product<T: Real>(
    kernel: &MassKernel<T>,
    mode: Mode,
    psi: &[ArgFn<'_, T>],
    phi: &[ArgFn<'_, T>],
    cfg: &QuadratureConfig<T>,
) -> Result<Cx<T>> {
    if psi.len() != phi.len() {
        return Ok(Cx::new(T::zero(), T::zero()));
    }
    let k = psi.len();
    if k > 4 {
        return Err(Error::ParticleCapExceeded(k, 4));
    }
    if k == 0 {
        return Ok(cone());
    }
    let s_fun = |u: T, v: T| -> Cx<T> {
        match mode {
            Mode::Momentum => kernel.eval(u, v),
            Mode::Rapidity => kernel.base.eval(u - v),
        }
    };
    let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
    let integrand = |x: &[T]| -> Cx<T> {
        let mut bra = cone();
        for (j, f) in psi.iter().enumerate() {
            bra = bra * f(x[j]).conj();
            if mode == Mode::Momentum {
                bra = bra / kernel.omega(x[j]);
            }
        }
        let mut sum = Cx::new(T::zero(), T::zero());
        for perm in &perms {
            let mut ket = s_pi_factor(&s_fun, x, perm);
            for (j, g) in phi.iter().enumerate() {
                ket = ket * g(x[perm[j]]);
            }
            sum = sum + ket;
        }
        bra * sum
    };
    Ok(integrate_nd(integrand, k, cfg)?.value)
}

// --- dense complex matrices (small, hand-rolled) ---

/// Row-major dense complex matrix.
#[derive(Debug, Clone)]
pub struct CMatrix<T> {
    pub n: usize,
    pub a: Vec<Cx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            a: vec![Cx::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = cone();
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> Cx<T> {
        self.a[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Cx<T>) {
        self.a[r * self.n + c] = v;
    }

    pub fn mul(&self, other: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let v = self.a[r * n + k];
                if v.norm_sqr() == T::zero() {
                    continue;
                }
                for c in 0..n {
                    out.a[r * n + c] = out.a[r * n + c] + v * other.a[k * n + c];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &CMatrix<T>) -> CMatrix<T> {
        assert_eq!(self.n, other.n);
        CMatrix {
            n: self.n,
            a: self
                .a
                .iter()
                .zip(&other.a)
                .map(|(x, y)| *x - *y)
                .collect(),
        }
    }

    pub fn scale(&self, c: Cx<T>) -> CMatrix<T> {
        CMatrix {
            n: self.n,
            a: self.a.iter().map(|x| *x * c).collect(),
        }
    }

    pub fn frobenius(&self) -> T {
        self.a
            .iter()
            .fold(T::zero(), |acc, x| acc + x.norm_sqr())
            .sqrt()
    }

    pub fn apply(&self, v: &[Cx<T>]) -> Vec<Cx<T>> {
        let n = self.n;
        (0..n)
            .map(|r| {
                let mut acc = Cx::new(T::zero(), T::zero());
                for c in 0..n {
                    acc = acc + self.a[r * n + c] * v[c];
                }
                acc
            })
            .collect()
    }

    /// Adjoint with respect to the weighted inner product `⟨u,v⟩ = Σ g_i conj(u_i) v_i`.
    pub fn weighted_adjoint(&self, g: &[T]) -> CMatrix<T> {
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.a[r * n + c] = self.a[c * n + r].conj() * (g[c] / g[r]);
            }
        }
        out
    }
}

/// Exact finite ZF model on a grid.
pub struct TruncatedFock<T> {
    pub grid: Vec<T>,
    pub weights: Vec<T>,
    pub n_max: usize,
    /// Total dimension `Σ_{n≤n_max} M^n`.
    pub dim: usize,
    /// Basis words: grid-index tuples, grouped by particle number.
    pub basis: Vec<Vec<usize>>,
    /// Weight of each basis word: product of its grid weights.
    pub basis_weight: Vec<T>,
    /// Lookup from basis word to basis position (kept for callers building
    /// states by word).
    pub index: HashMap<Vec<usize>, usize>,
    creators: Vec<CMatrix<T>>,
    annihilators: Vec<CMatrix<T>>,
    /// Block-diagonal symmetrizer `Π = ⊕ P_n` (the oracle's state space).
    pub symmetrizer: CMatrix<T>,
    s_table: Vec<Vec<Cx<T>>>,
}

impl<T: Real> TruncatedFock<T> {
    pub fn new(
        s: SKernel<'_, T>,
        grid: &[T],
        weights: &[T],
        n_max: usize,
    ) -> Result<TruncatedFock<T>> {
        let m = grid.len();
        assert_eq!(m, weights.len());
        let mut dim = 0usize;
        let mut block = 1usize;
        for _ in 0..=n_max {
            dim += block;
            block *= m;
        }
        if dim > 10_000 {
            return Err(Error::FockDimensionTooLarge(dim));
        }

        // basis enumeration: by particle number, lexicographic within
        let mut basis: Vec<Vec<usize>> = Vec::with_capacity(dim);
        for n in 0..=n_max {
            let mut word = vec![0usize; n];
            loop {
                basis.push(word.clone());
                // lexicographic odometer
                let mut k = n;
                while k > 0 {
                    word[k - 1] += 1;
                    if word[k - 1] < m {
                        break;
                    }
                    word[k - 1] = 0;
                    k -= 1;
                }
                if k == 0 {
                    break;
                }
            }
        }
        let index: HashMap<Vec<usize>, usize> =
            basis.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let basis_weight: Vec<T> = basis
            .iter()
            .map(|w| w.iter().fold(T::one(), |acc, &i| acc * weights[i]))
            .collect();
        let s_table: Vec<Vec<Cx<T>>> = grid
            .iter()
            .map(|&u| grid.iter().map(|&v| s(u, v)).collect())
            .collect();

        // symmetrizer Π = ⊕_n P_n
        let mut symmetrizer = CMatrix::zeros(dim);
        for (col, word) in basis.iter().enumerate() {
            let n = word.len();
            let fact: usize = (1..=n.max(1)).product();
            for perm in (0..n).permutations(n) {
                // target row word y with y∘π = word, i.e. y[π[k]] = word[k]
                let mut y = vec![0usize; n];
                for (k, &pk) in perm.iter().enumerate() {
                    y[pk] = word[k];
                }
                let row = index[&y];
                // S^π evaluated at the row arguments
                let yv: Vec<T> = y.iter().map(|&i| grid[i]).collect();
                let mut sfac = cone();
                for l in 0..n {
                    for r in l + 1..n {
                        if perm[l] > perm[r] {
                            sfac = sfac * s_table_lookup(&s_table, grid, yv[perm[l]], yv[perm[r]]);
                        }
                    }
                }
                let prev = symmetrizer.get(row, col);
                symmetrizer.set(row, col, prev + sfac / T::of(fact as f64));
            }
        }

        // creators: C_j = √(n+1) P_{n+1} (ê_j ⊗ ·), ê_j = δ_{·,j}/w_j
        let mut creators = Vec::with_capacity(m);
        for j in 0..m {
            let mut c = CMatrix::zeros(dim);
            for (col, word) in basis.iter().enumerate() {
                let n = word.len();
                if n == n_max {
                    continue; // truncation
                }
                let mut raw = word.clone();
                raw.insert(0, j);
                // column = √(n+1) · P_{n+1} applied to (1/w_j)·indicator(raw)
                let raw_col = index[&raw];
                let norm = T::of(((n + 1) as f64).sqrt()) / weights[j];
                for row in 0..dim {
                    let pv = symmetrizer.get(row, raw_col);
                    if pv.norm_sqr() != T::zero() {
                        c.set(row, col, pv * norm);
                    }
                }
            }
            creators.push(c);
        }
        let annihilators: Vec<CMatrix<T>> = creators
            .iter()
            .map(|c| c.weighted_adjoint(&basis_weight))
            .collect();

        Ok(TruncatedFock {
            grid: grid.to_vec(),
            weights: weights.to_vec(),
            n_max,
            dim,
            basis,
            basis_weight,
            index,
            creators,
            annihilators,
            symmetrizer,
            s_table,
        })
    }

    pub fn creator(&self, j: usize) -> &CMatrix<T> {
        &self.creators[j]
    }

    pub fn annihilator(&self, j: usize) -> &CMatrix<T> {
        &self.annihilators[j]
    }

    pub fn s_at(&self, i: usize, j: usize) -> Cx<T> {
        self.s_table[i][j]
    }

    /// Vacuum state vector.
    pub fn vacuum(&self) -> Vec<Cx<T>> {
        let mut v = vec![Cx::new(T::zero(), T::zero()); self.dim];
        v[0] = cone();
        v
    }

    /// Weighted inner product on state vectors.
    pub fn inner(&self, u: &[Cx<T>], v: &[Cx<T>]) -> Cx<T> {
        let mut acc = Cx::new(T::zero(), T::zero());
        for i in 0..self.dim {
            acc = acc + u[i].conj() * v[i] * Cx::new(self.basis_weight[i], T::zero());
        }
        acc
    }

    /// Block projector onto symmetric states with particle number `< n_top`.
    fn symmetrizer_below(&self, n_top: usize) -> CMatrix<T> {
        let mut p = self.symmetrizer.clone();
        for (i, w) in self.basis.iter().enumerate() {
            if w.len() >= n_top {
                for c in 0..self.dim {
                    p.set(i, c, Cx::new(T::zero(), T::zero()));
                    p.set(c, i, Cx::new(T::zero(), T::zero()));
                }
            }
        }
        p
    }

    /// Max Frobenius residual of
    /// `a(i)a†(j) - S(x_j,x_i) a†(j)a(i) - δ_ij/w_i` over all grid pairs,
    /// on symmetric states below the truncation level (where the relation
    /// is exact).
    pub fn relation_residual(&self) -> T {
        let proj = self.symmetrizer_below(self.n_max);
        let mut worst = T::zero();
        for i in 0..self.grid.len() {
            for j in 0..self.grid.len() {
                let ac = self.annihilators[i].mul(&self.creators[j]);
                let ca = self.creators[j].mul(&self.annihilators[i]);
                let mut lhs = ac.sub(&ca.scale(self.s_table[j][i]));
                if i == j {
                    let idm = CMatrix::identity(self.dim)
                        .scale(Cx::new(T::one() / self.weights[i], T::zero()));
                    lhs = lhs.sub(&idm);
                }
                worst = worst.max(lhs.mul(&proj).frobenius());
            }
        }
        worst
    }

    /// Vacuum matrix element of a generator word under an assignment of
    /// variables to grid points.
    pub fn oracle_expectation(&self, word: &[Generator], assign: &[usize]) -> Cx<T> {
        assert!(word.len() <= 6, "oracle words capped at length 6");
        let mut v = self.vacuum();
        for g in word.iter().rev() {
            let m = match g.kind {
                GenKind::Create => &self.creators[assign[g.var]],
                GenKind::Annihilate => &self.annihilators[assign[g.var]],
            };
            v = m.apply(&v);
        }
        v[0]
    }
}

fn s_table_lookup<T: Real>(table: &[Vec<Cx<T>>], grid: &[T], u: T, v: T) -> Cx<T> {
    let iu = grid.iter().position(|&g| g == u).expect("grid value");
    let iv = grid.iter().position(|&g| g == v).expect("grid value");
    table[iu][iv]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate_1d;
    use crate::scattering::ScatteringFunction;
    use crate::zf::{evaluate_vacuum_discrete, normal_order};
    use crate::C64;

    fn shg() -> ScatteringFunction<f64> {
        ScatteringFunction::sinh_gordon((4.0 * std::f64::consts::PI / 5.0).sqrt())
    }

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    /// Deterministic pseudo-random stream in (-2, 2).
    struct Lcg(u64);
    impl Lcg {
        fn next(&mut self) -> f64 {
            self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((self.0 >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 4.0
        }
    }

    fn gauss(c: f64, w: f64) -> impl Fn(f64) -> C64 + Sync {
        move |p: f64| C64::new((-(p - c) * (p - c) / (2.0 * w * w)).exp(), 0.0)
    }

    #[test]
    fn transposition_involutive_and_braid() {
        let base = shg();
        let s = move |u: f64, v: f64| base.eval(u - v);
        let psi = |x: &[f64]| C64::new(x[0] * x[0] - 0.3 * x[1], x.get(2).copied().unwrap_or(0.0));
        let mut rng = Lcg(7);
        // involution on 2-point samples
        let d1 = apply_transposition(&s, 1, Box::new(psi));
        let d11 = apply_transposition(&s, 1, d1);
        for _ in 0..20 {
            let x = [rng.next(), rng.next()];
            assert!((d11(&x) - psi(&x)).norm() < 1e-12);
        }
        // braid on 3-point samples: D(τ₁)D(τ₂)D(τ₁) = D(τ₂)D(τ₁)D(τ₂)
        let lhs = apply_transposition(
            &s,
            1,
            apply_transposition(&s, 2, apply_transposition(&s, 1, Box::new(psi))),
        );
        let rhs = apply_transposition(
            &s,
            2,
            apply_transposition(&s, 1, apply_transposition(&s, 2, Box::new(psi))),
        );
        for _ in 0..50 {
            let x = [rng.next(), rng.next(), rng.next()];
            let (a, b) = (lhs(&x), rhs(&x));
            assert!((a - b).norm() < 1e-10 * a.norm().max(1.0), "{a} vs {b}");
        }
        // S = 1: pure transposition
        let one = |_: f64, _: f64| C64::new(1.0, 0.0);
        let d = apply_transposition(&one, 1, Box::new(psi));
        let x = [0.4, -1.2];
        assert_eq!(d(&x), psi(&[-1.2, 0.4]));
    }

    #[test]
    fn projector_basics_and_idempotence() {
        let kernel = MassKernel::new(shg(), 1.0);
        let s = move |u: f64, v: f64| kernel.eval(u, v);
        // n = 1: identity
        let f = gauss(0.0, 1.0);
        let wf = project_symmetric(&s, vec![&f]).unwrap();
        assert!((wf.eval(&[0.7]) - f(0.7)).norm() < 1e-15);
        // S = 1, n = 2: ordinary symmetrization
        let one_s = |_: f64, _: f64| C64::new(1.0, 0.0);
        let (a, b) = (gauss(0.0, 1.0), gauss(0.5, 0.7));
        let wf = project_symmetric(&one_s, vec![&a, &b]).unwrap();
        let x = [0.3, -0.9];
        let expect = (a(0.3) * b(-0.9) + a(-0.9) * b(0.3)) * 0.5;
        assert!((wf.eval(&x) - expect).norm() < 1e-14);
        // idempotence, n = 3, S_ShG, 1000 random tuples
        let (f1, f2, f3) = (gauss(0.0, 1.0), gauss(0.4, 0.8), gauss(-0.6, 1.2));
        let wf = project_symmetric(&s, vec![&f1, &f2, &f3]).unwrap();
        let wf_eval = |x: &[f64]| wf.eval(x);
        let mut rng = Lcg(99);
        for _ in 0..1000 {
            let x = [rng.next(), rng.next(), rng.next()];
            let once = wf.eval(&x);
            let twice = project_eval(&s, &wf_eval, &x);
            assert!((once - twice).norm() < 1e-10 * once.norm().max(1.0));
        }
        // cap
        let f4 = gauss(1.0, 1.0);
        assert!(matches!(
            project_symmetric(&s, vec![&f1, &f2, &f3, &f4, &f4]),
            Err(Error::ParticleCapExceeded(5, 4))
        ));
    }

    #[test]
    fn inner_product_one_particle() {
        let kernel = MassKernel::new(shg(), 1.0);
        let (f, g) = (gauss(0.2, 1.0), gauss(-0.1, 0.8));
        let v = creation_word_inner_product(
            &kernel,
            Mode::Momentum,
            &[&f],
            &[&g],
            &cfg(),
        )
        .unwrap();
        let oracle = integrate_1d(
            |p: f64| f(p).conj() * g(p) / C64::new((p * p + 1.0).sqrt(), 0.0),
            &cfg(),
        )
        .unwrap()
        .value;
        assert!((v - oracle).norm() < 1e-12);
    }

    #[test]
    fn inner_product_positive_definite() {
        let kernel = MassKernel::new(shg(), 1.0);
        let mut rng = Lcg(3);
        for _ in 0..5 {
            let (c1, c2) = (rng.next(), rng.next());
            let (k1, k2) = (rng.next(), rng.next());
            let f1 = move |p: f64| {
                C64::new((-(p - c1) * (p - c1) / 2.0).exp(), 0.0) * C64::new(0.0, k1 * p).exp()
            };
            let f2 = move |p: f64| {
                C64::new((-(p - c2) * (p - c2) / 1.8).exp(), 0.0) * C64::new(0.0, k2 * p).exp()
            };
            let v = creation_word_inner_product(
                &kernel,
                Mode::Momentum,
                &[&f1, &f2],
                &[&f1, &f2],
                &cfg(),
            )
            .unwrap();
            assert!(v.im.abs() < 1e-10, "imaginary part {v}");
            assert!(v.re >= -1e-10, "negative norm {v}");
        }
    }

    #[test]
    fn inner_product_matches_zf_engine() {
        let kernel = MassKernel::new(shg(), 1.0);
        let (f1, f2, g1, g2) = (gauss(0.0, 1.0), gauss(0.4, 0.9), gauss(-0.5, 1.1), gauss(0.2, 0.8));
        let direct = creation_word_inner_product(
            &kernel,
            Mode::Momentum,
            &[&f1, &f2],
            &[&g1, &g2],
            &cfg(),
        )
        .unwrap();
        // engine: ⟨z†(f₁)z†(f₂)Ω, ·⟩ = ⟨Ω, z(f̄₂)z(f̄₁) z†(g₁)z†(g₂) Ω⟩
        let word = [
            Generator::annihilate(0),
            Generator::annihilate(1),
            Generator::create(2),
            Generator::create(3),
        ];
        let nf = normal_order(&word, Mode::Momentum).unwrap().vacuum_part();
        let args: Vec<ArgFn<'_, f64>> = vec![&f2, &f1, &g1, &g2];
        let via_zf =
            crate::zf::evaluate_vacuum_expectation(&nf, &kernel, &args, &cfg()).unwrap();
        assert!(
            (direct - via_zf).norm() / via_zf.norm() < 1e-8,
            "{direct} vs {via_zf}"
        );
    }

    fn sample_fock(s_base: ScatteringFunction<f64>, n_max: usize) -> TruncatedFock<f64> {
        let kernel = MassKernel::new(s_base, 1.0);
        let s = move |u: f64, v: f64| kernel.eval(u, v);
        TruncatedFock::new(&s, &[-0.5, 0.3, 1.1], &[0.4, 0.7, 0.5], n_max).unwrap()
    }

    #[test]
    fn discrete_relations_close() {
        for base in [ScatteringFunction::free(), ScatteringFunction::ising(), shg()] {
            let tf = sample_fock(base, 3);
            assert_eq!(tf.dim, 40);
            assert!(tf.relation_residual() < 1e-12);
            // vacuum killed by all annihilators
            for i in 0..3 {
                let v = tf.annihilator(i).apply(&tf.vacuum());
                assert!(v.iter().all(|c| c.norm() < 1e-15));
            }
        }
    }

    #[test]
    fn fermionic_nilpotence() {
        let ising = MassKernel::new(ScatteringFunction::ising(), 1.0);
        let s = move |u: f64, v: f64| ising.eval(u, v);
        let tf = TruncatedFock::new(&s, &[0.2, 0.9], &[0.6, 0.8], 2).unwrap();
        for j in 0..2 {
            let sq = tf.creator(j).mul(tf.creator(j));
            assert!(sq.frobenius() < 1e-13, "a†({j})² not nilpotent");
        }
    }

    #[test]
    fn bosonic_single_point_ladder() {
        // S = 1, one grid point: a a† - a†a = 1/w on states below truncation
        let free = MassKernel::new(ScatteringFunction::free(), 1.0);
        let s = move |u: f64, v: f64| free.eval(u, v);
        let w = 0.7;
        let tf = TruncatedFock::new(&s, &[0.4], &[w], 4).unwrap();
        assert!(tf.relation_residual() < 1e-12);
        // ⟨Ω a a† Ω⟩ = 1/w
        let v = tf.oracle_expectation(
            &[Generator::annihilate(0), Generator::create(1)],
            &[0, 0],
        );
        assert!((v - C64::new(1.0 / w, 0.0)).norm() < 1e-13);
        // n-particle norms follow the bosonic pattern ‖(a†)ⁿΩ‖² = n!/wⁿ
        let mut state = tf.vacuum();
        for n in 1..=3usize {
            state = tf.creator(0).apply(&state);
            let fact: usize = (1..=n).product();
            let expect = fact as f64 / w.powi(n as i32);
            let norm = tf.inner(&state, &state).re;
            assert!((norm - expect).abs() < 1e-10 * expect, "n={n}: {norm} vs {expect}");
        }
    }

    #[test]
    fn oracle_basics() {
        let tf = sample_fock(shg(), 3);
        // ⟨Ω a(i)a†(j) Ω⟩ = δ_ij/w_i
        for i in 0..3 {
            for j in 0..3 {
                let v = tf.oracle_expectation(
                    &[Generator::annihilate(0), Generator::create(1)],
                    &[i, j],
                );
                let expect = if i == j {
                    C64::new(1.0 / tf.weights[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
                assert!((v - expect).norm() < 1e-12, "i={i} j={j}: {v}");
            }
        }
        // odd word → 0 exactly
        let odd = tf.oracle_expectation(
            &[
                Generator::annihilate(0),
                Generator::create(1),
                Generator::create(2),
            ],
            &[0, 1, 2],
        );
        assert_eq!(odd, C64::new(0.0, 0.0));
    }

    #[test]
    fn oracle_matches_symbolic_discrete() {
        let kernel = MassKernel::new(shg(), 1.0);
        let kc = kernel.clone();
        let s = move |u: f64, v: f64| kc.eval(u, v);
        let grid = [-0.5, 0.3, 1.1];
        let weights = [0.4, 0.7, 0.5];
        let tf = TruncatedFock::new(&s, &grid, &weights, 3).unwrap();
        // 4-generator word a(i)a(j)a†(k)a†(l) across several assignments
        let word = [
            Generator::annihilate(0),
            Generator::annihilate(1),
            Generator::create(2),
            Generator::create(3),
        ];
        let nf = normal_order(&word, Mode::Momentum).unwrap().vacuum_part();
        let weight_of = |x: f64| -> f64 {
            let i = grid.iter().position(|&g| g == x).unwrap();
            weights[i]
        };
        for assign in [[0, 1, 1, 0], [2, 2, 2, 2], [0, 1, 2, 0], [1, 0, 0, 1]] {
            let oracle = tf.oracle_expectation(&word, &assign);
            // symbolic side: ê functions for the same assignment
            let hats: Vec<Box<dyn Fn(f64) -> C64 + Sync>> = assign
                .iter()
                .map(|&gi| {
                    let (gv, gw) = (grid[gi], weights[gi]);
                    Box::new(move |x: f64| {
                        if x == gv {
                            C64::new(1.0 / gw, 0.0)
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    }) as Box<dyn Fn(f64) -> C64 + Sync>
                })
                .collect();
            let args: Vec<ArgFn<'_, f64>> = hats.iter().map(|b| &**b as ArgFn<'_, f64>).collect();
            let symbolic = evaluate_vacuum_discrete(&nf, &grid, &weight_of, &s, &args);
            let scale = oracle.norm().max(1.0);
            assert!(
                (oracle - symbolic).norm() / scale < 1e-10,
                "{assign:?}: {oracle} vs {symbolic}"
            );
        }
    }

    #[test]
    fn symmetrizer_is_projection() {
        let tf = sample_fock(shg(), 3);
        let p = &tf.symmetrizer;
        // idempotent
        assert!(p.mul(p).sub(p).frobenius() < 1e-12);
        // self-adjoint for the weighted inner product
        assert!(p.weighted_adjoint(&tf.basis_weight).sub(p).frobenius() < 1e-12);
    }

    #[test]
    fn dimension_cap() {
        let free = MassKernel::new(ScatteringFunction::free(), 1.0);
        let s = move |u: f64, v: f64| free.eval(u, v);
        let grid: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
        let w = vec![0.1; 10];
        assert!(matches!(
            TruncatedFock::new(&s, &grid, &w, 4),
            Err(Error::FockDimensionTooLarge(_))
        ));
    }
}
