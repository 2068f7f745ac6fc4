//! Exhaustive search for elements `u` with `u·χ = ψ`.
//!
//! The candidates are the `p^m` coefficient vectors `(a_1, ..., a_m)` of
//! `u(t) = t (1 + a_1 t + ... + a_m t^m)`, ordered lexicographically with `a_1`
//! most significant. Both strategies return the smallest matching vector,
//! whatever the thread count.
//!
//! [`Strategy::Pruned`] walks the candidates depth first: the coefficient of
//! `u·χ` at `j` only reads `a_1..a_{m-j}`, and `χ(u/t) mod p` only reads
//! `a_1..a_l`, so every prefix can be tested before it is extended.
//! [`Strategy::Exhaustive`] tests every candidate in full and serves as the
//! reference.

use crate::characters::{image_coeff, ActionScratch, Character};
use crate::error::{Error, Result};
use crate::prime::Prime;
use crate::reduction::verify_witness;
use crate::series::NottinghamElt;

/// Default cap on `p^m`.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Pruned,
    Exhaustive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest search space `p^m` that will be attempted.
    pub budget: u64,
    /// Use the rayon pool; ignored without the `parallel` feature.
    pub parallel: bool,
    pub strategy: Strategy,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            parallel: true,
            strategy: Strategy::Pruned,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(budget: u64) -> Self {
        SearchConfig {
            budget,
            ..Self::default()
        }
    }

    pub fn sequential(self) -> Self {
        SearchConfig {
            parallel: false,
            ..self
        }
    }

    pub fn exhaustive(self) -> Self {
        SearchConfig {
            strategy: Strategy::Exhaustive,
            ..self
        }
    }

    /// `p^m`, refused when above the budget.
    pub fn admit(&self, prime: Prime, m: usize) -> Result<u64> {
        let cost = prime.power(m as u32);
        if cost > self.budget as u128 {
            return Err(Error::Budget {
                cost,
                budget: self.budget,
            });
        }
        Ok(cost as u64)
    }
}

/// Whether the kernel condition `χ(u/t) ≡ 0 mod p` is imposed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Strict,
    Weak,
}

/// The smallest `u` (precision `m`) with `u·χ = ψ`, plus the kernel
/// condition under [`Relation::Strict`]. Both characters must share the
/// bound `m`, which the caller has already admitted against the budget.
pub(crate) fn find_element(
    chi: &Character,
    psi: &Character,
    relation: Relation,
    cfg: &SearchConfig,
) -> Option<NottinghamElt> {
    debug_assert_eq!(chi.bound(), psi.bound());
    match cfg.strategy {
        Strategy::Pruned => Pruned::new(chi, psi, relation).run(cfg.parallel),
        Strategy::Exhaustive => exhaustive(chi, psi, relation, cfg.parallel),
    }
}

fn exhaustive(
    chi: &Character,
    psi: &Character,
    relation: Relation,
    parallel: bool,
) -> Option<NottinghamElt> {
    let prime = chi.prime();
    let m = chi.bound();
    let total = prime.power(m as u32) as u64;
    first_match(
        total,
        parallel,
        || vec![0u8; m],
        |digits, idx| {
            fill_digits(idx, prime.get(), digits);
            let u = NottinghamElt::from_reduced(prime, digits);
            let ok = match relation {
                Relation::Strict => verify_witness(chi, psi, &u).is_valid(),
                Relation::Weak => chi.act(&u).is_ok_and(|a| a == *psi),
            };
            ok.then_some(u)
        },
    )
}

/// Base-`p` digits of `idx`, most significant first.
pub(crate) fn fill_digits(mut idx: u64, p: u32, digits: &mut [u8]) {
    for d in digits.iter_mut().rev() {
        *d = (idx % p as u64) as u8;
        idx /= p as u64;
    }
}

struct Pruned<'a> {
    prime: Prime,
    m: usize,
    chi: &'a [u16],
    psi: &'a [u16],
    /// `checks[d]`: basis index whose image is fixed once `a_1..a_d` are.
    checks: Vec<Option<usize>>,
    /// Depth at which `χ(u/t) mod p` is decided, under the strict relation.
    kernel_depth: Option<usize>,
}

struct Frame {
    /// `unit[0] = 1`, `unit[k] = a_k`; unassigned entries stay zero.
    unit: Vec<u8>,
    scratch: ActionScratch,
    residual: Vec<u8>,
}

impl<'a> Pruned<'a> {
    fn new(chi: &'a Character, psi: &'a Character, relation: Relation) -> Self {
        let prime = chi.prime();
        let m = chi.bound();
        let checks = (0..m)
            .map(|d| {
                let j = m - d;
                (!prime.divides(j as u32)).then_some(j)
            })
            .collect();
        let kernel_depth = match relation {
            Relation::Strict => Some(chi.unit_index().unwrap_or(m)),
            Relation::Weak => None,
        };
        Pruned {
            prime,
            m,
            chi: chi.dense(),
            psi: psi.dense(),
            checks,
            kernel_depth,
        }
    }

    fn frame(&self) -> Frame {
        let mut unit = vec![0u8; self.m + 1];
        unit[0] = 1;
        Frame {
            unit,
            scratch: ActionScratch::new(self.m),
            residual: vec![0u8; self.m + 1],
        }
    }

    /// Every condition that becomes decidable at `depth` holds.
    fn passes(&self, depth: usize, fr: &mut Frame) -> bool {
        if let Some(Some(j)) = self.checks.get(depth) {
            let c = image_coeff(self.chi, &fr.unit, *j, self.prime, &mut fr.scratch);
            if c != self.psi[*j] as u32 {
                return false;
            }
        }
        if self.kernel_depth == Some(depth) {
            fr.residual.copy_from_slice(&fr.unit);
            let v = crate::characters::eval_residual(self.chi, &mut fr.residual, self.prime);
            if !v.is_multiple_of(self.prime.get()) {
                return false;
            }
        }
        true
    }

    fn dfs(&self, depth: usize, fr: &mut Frame) -> bool {
        if depth == self.m {
            return true;
        }
        let slot = depth + 1;
        for v in 0..self.prime.get() as u8 {
            fr.unit[slot] = v;
            if self.passes(slot, fr) && self.dfs(slot, fr) {
                return true;
            }
        }
        fr.unit[slot] = 0;
        false
    }

    fn run(&self, parallel: bool) -> Option<NottinghamElt> {
        let mut root = self.frame();
        if !self.passes(0, &mut root) {
            return None;
        }
        let p = self.prime.get();
        // split on a short prefix so the pool has work to steal
        let split = (0..=self.m)
            .find(|&k| self.prime.power(k as u32) >= 64)
            .unwrap_or(self.m);
        let prefixes = self.prime.power(split as u32) as u64;
        first_match(
            prefixes,
            parallel,
            || (self.frame(), vec![0u8; split]),
            |(fr, digits), idx| {
                fill_digits(idx, p, digits);
                fr.unit.fill(0);
                fr.unit[0] = 1;
                for (k, &d) in digits.iter().enumerate() {
                    fr.unit[k + 1] = d;
                    if !self.passes(k + 1, fr) {
                        return None;
                    }
                }
                self.dfs(split, fr)
                    .then(|| NottinghamElt::from_reduced(self.prime, &fr.unit[1..]))
            },
        )
    }
}

/// The first `idx in 0..n` (in index order) for which `f` returns `Some`.
pub(crate) fn first_match<S, T, I, F>(n: u64, parallel: bool, init: I, f: F) -> Option<T>
where
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64) -> Option<T> + Sync + Send,
    T: Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return (0..n)
            .into_par_iter()
            .map_init(&init, |s, i| f(s, i))
            .find_first(Option::is_some)
            .flatten();
    }
    let _ = parallel;
    let mut state = init();
    (0..n).find_map(|i| f(&mut state, i))
}

/// `f` over `items`, results in input order.
pub(crate) fn map_ordered<X, T, F>(items: &[X], parallel: bool, f: F) -> Vec<T>
where
    X: Sync,
    T: Send,
    F: Fn(&X) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

/// Every character `u·χ` over all `p^m` candidates `u` (kernel-filtered
/// under the strict relation), sorted and deduplicated.
pub(crate) fn orbit(chi: &Character, relation: Relation, parallel: bool) -> Vec<Character> {
    let prime = chi.prime();
    let m = chi.bound();
    let total = prime.power(m as u32) as u64;
    let image = |digits: &mut Vec<u8>, idx: u64| -> Option<Character> {
        fill_digits(idx, prime.get(), digits);
        let u = NottinghamElt::from_reduced(prime, digits);
        if relation == Relation::Strict {
            let v = chi.eval(u.unit()).expect("precision m");
            if !v.is_multiple_of(prime.get()) {
                return None;
            }
        }
        Some(chi.act(&u).expect("precision m"))
    };
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        let mut out: Vec<Character> = (0..total)
            .into_par_iter()
            .map_init(|| vec![0u8; m], image)
            .flatten()
            .fold(Vec::new, |mut acc, c| {
                acc.push(c);
                if acc.len() > 4096 {
                    acc.sort_unstable();
                    acc.dedup();
                }
                acc
            })
            .reduce(Vec::new, |mut a, b| {
                a.extend(b);
                a.sort_unstable();
                a.dedup();
                a
            });
        out.sort_unstable();
        out.dedup();
        return out;
    }
    let _ = parallel;
    let mut digits = vec![0u8; m];
    let mut out: Vec<Character> = (0..total).filter_map(|i| image(&mut digits, i)).collect();
    out.sort_unstable();
    out.dedup();
    out
}
