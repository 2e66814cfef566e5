//! Symbolic Zamolodchikov–Faddeev normal ordering.
//!
//! Words in creators/annihilators are rewritten with
//!
//! ```text
//! z(p) z†(q) = S(q,p) z†(q) z(p) + w(p) δ(p-q)
//! ```
//!
//! until normal-ordered (creators left of annihilators). S-factors stay
//! symbolic as ordered variable pairs and are only bound to a kernel at
//! evaluation time, so the same engine serves the massive momentum mode
//! (`S_m(q,p)`, weight `ω_p δ`), the massless momentum mode (`S_0`), and the
//! rapidity mode (`S(β₂-β₁)`, plain `δ`). The weight convention is the one
//! place the two modes differ — it is carried explicitly on every
//! contraction through [`Mode`].

use crate::numerics::{integrate_nd, QuadratureConfig};
use crate::scattering::MassKernel;
use crate::{Cx, Error, Real, Result};
use serde::Serialize;
use std::collections::VecDeque;

/// Term-explosion cap on input word length.
pub const MAX_WORD_LEN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    Create,
    Annihilate,
}

/// One generator with a symbolic variable index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub kind: GenKind,
    pub var: usize,
}

impl Generator {
    pub fn create(var: usize) -> Self {
        Generator {
            kind: GenKind::Create,
            var,
        }
    }

    pub fn annihilate(var: usize) -> Self {
        Generator {
            kind: GenKind::Annihilate,
            var,
        }
    }
}

/// Measure convention bound to a normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Smearing `dp/ω_p`, contraction weight `ω_p δ(p-q)`, `S`-pair `(u,v) ↦ S_m(u,v)`.
    Momentum,
    /// Smearing `dβ`, contraction weight `δ(β-β′)`, `S`-pair `(u,v) ↦ S(u-v)`.
    Rapidity,
}

/// One normal-ordered term.
#[derive(Debug, Clone, Serialize)]
pub struct NormalTerm {
    /// Ordered pairs `(u,v)`: factor `S(u,v)` (momentum) or `S(u-v)` (rapidity).
    pub s_factors: Vec<(usize, usize)>,
    /// Pairs (annihilator var, creator var), each carrying the mode's weight.
    pub contractions: Vec<(usize, usize)>,
    /// Normal-ordered residual word.
    pub word: Vec<Generator>,
}

impl NormalTerm {
    fn redex(&self) -> Option<usize> {
        self.word
            .windows(2)
            .position(|w| w[0].kind == GenKind::Annihilate && w[1].kind == GenKind::Create)
    }
}

/// Finite sum of normal-ordered terms.
#[derive(Debug, Clone, Serialize)]
pub struct ZFNormalForm {
    pub mode: Mode,
    pub terms: Vec<NormalTerm>,
}

/// Rewrite a word into normal form (leftmost-innermost, breadth-first over
/// terms; deterministic).
pub fn normal_order(word: &[Generator], mode: Mode) -> Result<ZFNormalForm> {
    if word.len() > MAX_WORD_LEN {
        return Err(Error::WordTooLong(word.len()));
    }
    for (i, g) in word.iter().enumerate() {
        assert!(
            word[..i].iter().all(|h| h.var != g.var),
            "variable indices must be unique within a word"
        );
    }
    let mut pending = VecDeque::new();
    pending.push_back(NormalTerm {
        s_factors: Vec::new(),
        contractions: Vec::new(),
        word: word.to_vec(),
    });
    let mut done = Vec::new();
    while let Some(term) = pending.pop_front() {
        match term.redex() {
            None => done.push(term),
            Some(i) => {
                let p = term.word[i].var; // annihilator
                let q = term.word[i + 1].var; // creator
                // exchange branch: S(q,p) z†(q) z(p)
                let mut swapped = term.clone();
                swapped.word.swap(i, i + 1);
                swapped.s_factors.push((q, p));
                pending.push_back(swapped);
                // contraction branch: weight δ(p-q)
                let mut contracted = term;
                contracted.word.drain(i..=i + 1);
                contracted.contractions.push((p, q));
                pending.push_back(contracted);
            }
        }
    }
    Ok(ZFNormalForm { mode, terms: done })
}

/// One application of the pure-exchange relation `x(p)x(q) = S(p,q) x(q)x(p)`
/// to the same-kind adjacent pair at position `i`.
pub fn exchange_once(word: &[Generator], i: usize) -> (Vec<(usize, usize)>, Vec<Generator>) {
    assert!(
        word[i].kind == word[i + 1].kind,
        "exchange applies to same-kind pairs"
    );
    let mut out = word.to_vec();
    out.swap(i, i + 1);
    (vec![(word[i].var, word[i + 1].var)], out)
}

impl ZFNormalForm {
    /// Keep only fully contracted terms (empty residual word).
    pub fn vacuum_part(&self) -> ZFNormalForm {
        ZFNormalForm {
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .filter(|t| t.word.is_empty())
                .cloned()
                .collect(),
        }
    }

    /// Multiply every term by an extra symbolic `S(u,v)` factor.
    pub fn multiply_s(&self, pair: (usize, usize)) -> ZFNormalForm {
        ZFNormalForm {
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut t = t.clone();
                    t.s_factors.push(pair);
                    t
                })
                .collect(),
        }
    }

    /// Debug dump (term list with contraction pairs and S-factor pairs).
    pub fn to_debug_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("normal form serializes")
    }
}

/// One-particle function bound to a variable.
pub type ArgFn<'a, T> = &'a (dyn Fn(T) -> Cx<T> + Sync);

/// Evaluate a fully contracted normal form against a kernel. Each
/// contraction collapses to one integration variable; the smearing measure
/// and the contraction weight combine to `dp/ω_p` (momentum) or `dβ`
/// (rapidity) per variable.
pub fn evaluate_vacuum_expectation<T: Real>(
    nf: &ZFNormalForm,
    kernel: &MassKernel<T>,
    args: &[ArgFn<'_, T>],
    cfg: &QuadratureConfig<T>,
) -> Result<Cx<T>> {
    let mut total = Cx::new(T::zero(), T::zero());
    for term in &nf.terms {
        if !term.word.is_empty() {
            return Err(Error::Config(
                "evaluate_vacuum_expectation requires a fully contracted normal form".into(),
            ));
        }
        let dim = term.contractions.len();
        if dim == 0 {
            total = total + Cx::new(T::one(), T::zero());
            continue;
        }
        // slot assignment: contraction i binds both its vars to x[i]
        let mut slot_of = std::collections::HashMap::new();
        for (i, (a, c)) in term.contractions.iter().enumerate() {
            slot_of.insert(*a, i);
            slot_of.insert(*c, i);
        }
        let integrand = |x: &[T]| -> Cx<T> {
            let mut v = Cx::new(T::one(), T::zero());
            for (i, (a, c)) in term.contractions.iter().enumerate() {
                let xi = x[i];
                v = v * args[*a](xi) * args[*c](xi);
                if nf.mode == Mode::Momentum {
                    v = v / kernel.omega(xi);
                }
            }
            for (u, w) in &term.s_factors {
                let xu = x[slot_of[u]];
                let xw = x[slot_of[w]];
                v = v * match nf.mode {
                    Mode::Momentum => kernel.eval(xu, xw),
                    Mode::Rapidity => kernel.base.eval(xu - xw),
                };
            }
            v
        };
        total = total + integrate_nd(integrand, dim, cfg)?.value;
    }
    Ok(total)
}

/// Massless (`m = 0`) evaluation of a fully contracted momentum-mode normal
/// form. The measure `dp/|p|` is split into the two half-lines and rewritten
/// with `p = ±e^β`, which removes the `1/|p|` singularity exactly: each
/// contraction variable becomes a rapidity integral `dβ` summed over the two
/// branch signs, and `S`-factors go through the piecewise massless kernel.
pub fn evaluate_vacuum_expectation_massless<T: Real>(
    nf: &ZFNormalForm,
    kernel: &MassKernel<T>,
    args: &[ArgFn<'_, T>],
    cfg: &QuadratureConfig<T>,
) -> Result<Cx<T>> {
    assert!(
        kernel.mass == T::zero(),
        "massless evaluator requires a zero-mass kernel"
    );
    assert!(
        nf.mode == Mode::Momentum,
        "massless evaluator works in momentum mode"
    );
    let mut total = Cx::new(T::zero(), T::zero());
    for term in &nf.terms {
        if !term.word.is_empty() {
            return Err(Error::Config(
                "evaluate_vacuum_expectation_massless requires a fully contracted normal form"
                    .into(),
            ));
        }
        let dim = term.contractions.len();
        if dim == 0 {
            total = total + Cx::new(T::one(), T::zero());
            continue;
        }
        let mut slot_of = std::collections::HashMap::new();
        for (i, (a, c)) in term.contractions.iter().enumerate() {
            slot_of.insert(*a, i);
            slot_of.insert(*c, i);
        }
        for branch in 0..(1usize << dim) {
            let sgn: Vec<T> = (0..dim)
                .map(|i| {
                    if branch & (1 << i) == 0 {
                        T::one()
                    } else {
                        -T::one()
                    }
                })
                .collect();
            let integrand = |beta: &[T]| -> Cx<T> {
                let mut v = Cx::new(T::one(), T::zero());
                for (i, (a, c)) in term.contractions.iter().enumerate() {
                    let p = sgn[i] * beta[i].exp();
                    v = v * args[*a](p) * args[*c](p);
                }
                for (u, w) in &term.s_factors {
                    let pu = sgn[slot_of[u]] * beta[slot_of[u]].exp();
                    let pw = sgn[slot_of[w]] * beta[slot_of[w]].exp();
                    v = v * kernel.eval(pu, pw);
                }
                v
            };
            total = total + integrate_nd(integrand, dim, cfg)?.value;
        }
    }
    Ok(total)
}

/// Discrete-grid evaluation of a fully contracted normal form: deltas become
/// Kronecker deltas on `grid`, each contraction summed with `weight`, and
/// `S`-pairs bound through `s`. Cross-checks the truncated-grid oracle.
pub fn evaluate_vacuum_discrete<T: Real>(
    nf: &ZFNormalForm,
    grid: &[T],
    weight: &dyn Fn(T) -> T,
    s: &dyn Fn(T, T) -> Cx<T>,
    args: &[ArgFn<'_, T>],
) -> Cx<T> {
    let mut total = Cx::new(T::zero(), T::zero());
    for term in &nf.terms {
        assert!(term.word.is_empty(), "normal form must be fully contracted");
        let dim = term.contractions.len();
        let mut slot_of = std::collections::HashMap::new();
        for (i, (a, c)) in term.contractions.iter().enumerate() {
            slot_of.insert(*a, i);
            slot_of.insert(*c, i);
        }
        let mut idx = vec![0usize; dim];
        loop {
            let mut v = Cx::new(T::one(), T::zero());
            for (i, (a, c)) in term.contractions.iter().enumerate() {
                let xi = grid[idx[i]];
                v = v * args[*a](xi) * args[*c](xi) * Cx::new(weight(xi), T::zero());
            }
            for (u, w) in &term.s_factors {
                v = v * s(grid[idx[slot_of[u]]], grid[idx[slot_of[w]]]);
            }
            total = total + v;
            // odometer over grid^dim
            let mut k = 0;
            loop {
                if k == dim {
                    break;
                }
                idx[k] += 1;
                if idx[k] < grid.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == dim {
                break;
            }
        }
    }
    total
}
