//! Strict and weak equivalence by exhaustive search, class counting and the
//! closed-form counts the searches are checked against.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::characters::{
    characters_of_type, enumerate_reduced_forms, validate_type, Character, ReducedForm, TypeLM,
};
use crate::error::{domain, usage, Result};
use crate::prime::Prime;
use crate::reduction::{reduce, Witness};
use crate::search::{self, find_element, map_ordered, Relation, SearchConfig};
use crate::series::NottinghamElt;

/// Shared precondition of the searches: the type both characters have, or
/// `None` when they differ.
fn common_type(chi: &Character, psi: &Character) -> Result<Option<TypeLM>> {
    if chi.prime() != psi.prime() {
        return Err(usage(format!(
            "characters over different primes ({} and {})",
            chi.prime(),
            psi.prime()
        )));
    }
    let a = chi.break_sequence()?;
    let b = psi.break_sequence()?;
    Ok((a == b).then_some(a))
}

/// Smallest `u` with `ψ = u·χ` and `χ(u/t) ≡ 0 mod p`.
pub fn strict_equiv_search(
    chi: &Character,
    psi: &Character,
    cfg: &SearchConfig,
) -> Result<Option<Witness>> {
    let Some(ty) = common_type(chi, psi)? else {
        return Ok(None);
    };
    cfg.admit(chi.prime(), ty.m)?;
    find_element(chi, psi, Relation::Strict, cfg)
        .map(|u| Witness::for_element(chi, u))
        .transpose()
}

/// Smallest `u` with `ψ = u·χ`.
pub fn weak_equiv_search(
    chi: &Character,
    psi: &Character,
    cfg: &SearchConfig,
) -> Result<Option<NottinghamElt>> {
    let Some(ty) = common_type(chi, psi)? else {
        return Ok(None);
    };
    cfg.admit(chi.prime(), ty.m)?;
    Ok(find_element(chi, psi, Relation::Weak, cfg))
}

/// `B(p, l, m) = p^k (p-1)^ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundB {
    pub value: u64,
    /// Number of `j` in `[m-l, m-1]` prime to `p`.
    pub k: u32,
    /// 1 when `p | m`, else 2.
    pub epsilon: u32,
}

pub fn bound_b(prime: Prime, l: usize, m: usize) -> Result<BoundB> {
    if !validate_type(prime, l, m) {
        return Err(domain(format!("<{l},{m}> is not a valid type for p = {prime}")));
    }
    let k = (m - l..m).filter(|&j| !prime.divides(j as u32)).count() as u32;
    let epsilon = if prime.divides(m as u32) { 1 } else { 2 };
    let p = prime.get() as u64;
    Ok(BoundB {
        value: p.pow(k) * (p - 1).pow(epsilon),
        k,
        epsilon,
    })
}

/// Previously known class counts, specialised to the prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegacyCount {
    /// Order `p` elements of type `<m>`.
    Dm,
    /// Order `p^2`, type `<1, m>`.
    D1m,
    /// Weak classes of type `<2, m>`.
    D2mWeak,
}

impl FromStr for LegacyCount {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "d_m" => Ok(LegacyCount::Dm),
            "d_1m" => Ok(LegacyCount::D1m),
            "d_2m_weak" => Ok(LegacyCount::D2mWeak),
            _ => Err(usage(format!("unknown count {s:?}"))),
        }
    }
}

pub fn legacy_count(prime: Prime, m: usize, which: LegacyCount) -> u64 {
    let p = prime.get() as u64;
    let r = m as u64 % p;
    match which {
        LegacyCount::Dm => p - 1,
        LegacyCount::D1m | LegacyCount::D2mWeak => match r {
            0 => p * (p - 1),
            1 => (p - 1) * (p - 1),
            _ => p * (p - 1) * (p - 1),
        },
    }
}

/// Whether an order `p^2` element of type `<l, m>` is conjugate to its
/// `n`-th power, assuming the two differ.
pub fn power_conjugacy_predicate(prime: Prime, l: usize, m: usize, n: i64) -> Result<bool> {
    TypeLM::new(prime, l, m)?;
    let exceptional = prime.get() == 2 && m == 2 * l;
    Ok(prime.mod_p(n) == 1 && !exceptional)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerConjugacy {
    /// `n·χ`, the character attached to the `n`-th power.
    pub power: Character,
    pub witness: Option<Witness>,
}

impl PowerConjugacy {
    pub fn conjugate(&self) -> bool {
        self.witness.is_some()
    }
}

/// Decide by search whether `χ ≃ n·χ`.
pub fn power_conjugacy_oracle(
    chi: &Character,
    n: i64,
    cfg: &SearchConfig,
) -> Result<PowerConjugacy> {
    chi.break_sequence()?;
    let prime = chi.prime();
    if prime.mod_p(n) == 0 {
        return Err(domain(format!("n = {n} is divisible by p = {prime}")));
    }
    let power = chi.scalar_mul(n);
    if power == *chi {
        return Err(domain(format!("n = {n} fixes the character")));
    }
    let witness = strict_equiv_search(chi, &power, cfg)?;
    Ok(PowerConjugacy { power, witness })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    /// Reduce every character of the type; a complete invariant for `l < p`.
    CanonicalReduce,
    /// Merge reduced forms by pairwise strict search.
    OraclePartition,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::CanonicalReduce => "canonical-reduce",
            CountMethod::OraclePartition => "oracle-partition",
        })
    }
}

impl FromStr for CountMethod {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical-reduce" => Ok(CountMethod::CanonicalReduce),
            "oracle-partition" => Ok(CountMethod::OraclePartition),
            _ => Err(usage(format!("unknown method {s:?}"))),
        }
    }
}

/// A strict equivalence found between two members of a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLink {
    pub from: Character,
    pub to: Character,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEntry {
    /// Lexicographically smallest member.
    pub representative: Character,
    pub members: Vec<ReducedForm>,
    /// A spanning set of links: every member is reachable from the
    /// representative.
    pub links: Vec<ClassLink>,
}

#[derive(Clone, Debug)]
pub struct ClassReport {
    pub prime: Prime,
    pub ty: TypeLM,
    pub bound: BoundB,
    pub method: CountMethod,
    pub classes: Vec<ClassEntry>,
    /// Candidates per search (`p^m`) for the partition; characters reduced
    /// for the canonical count.
    pub search_space_size: u64,
    pub elapsed: Duration,
}

impl ClassReport {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub const CSV_HEADER: &'static str = "p,l,m,B,d,method,runtime_ms";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.prime,
            self.ty.l,
            self.ty.m,
            self.bound.value,
            self.class_count(),
            self.method,
            self.elapsed.as_millis()
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        let classes: Vec<_> = self
            .classes
            .iter()
            .map(|c| {
                serde_json::json!({
                    "representative": c.representative.literal(),
                    "members": c.members.iter().map(|f| f.to_character().literal()).collect::<Vec<_>>(),
                    "witnesses": c.links.iter().map(|w| serde_json::json!({
                        "from": w.from.literal(),
                        "to": w.to.literal(),
                        "u": w.witness.u.product_form(),
                        "kernel_value": w.witness.kernel_value,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "p": self.prime.get(),
            "l": self.ty.l,
            "m": self.ty.m,
            "bound": self.bound,
            "class_count": self.class_count(),
            "method": self.method,
            "search_space_size": self.search_space_size,
            "search_complete": true,
            "classes": classes,
        })
    }
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "p = {}, type {}: {} classes (B = {}), method {}",
            self.prime,
            self.ty,
            self.class_count(),
            self.bound.value,
            self.method
        )?;
        match self.method {
            CountMethod::OraclePartition => writeln!(
                f,
                "each search covers all {} elements t(1 + a_1 t + ... + a_m t^m)",
                self.search_space_size
            )?,
            CountMethod::CanonicalReduce => {
                writeln!(f, "{} characters reduced", self.search_space_size)?
            }
        }
        for (i, c) in self.classes.iter().enumerate() {
            writeln!(f, "class {}: {}", i + 1, c.representative.literal())?;
            for link in &c.links {
                writeln!(
                    f,
                    "  {} ~ {} via {}",
                    link.from.literal(),
                    link.to.literal(),
                    link.witness
                )?;
            }
        }
        Ok(())
    }
}

/// Strict classes among the reduced forms of type `<l, m>`.
pub fn partition_reduced_forms(
    prime: Prime,
    l: usize,
    m: usize,
    cfg: &SearchConfig,
) -> Result<ClassReport> {
    let start = Instant::now();
    let bound = bound_b(prime, l, m)?;
    let cost = cfg.admit(prime, m)?;
    let forms = enumerate_reduced_forms(prime, l, m)?;
    let chars: Vec<Character> = forms.iter().map(ReducedForm::to_character).collect();
    let mut sets = UnionFind::<usize>::new(forms.len());
    let mut links = Vec::new();
    for i in 0..chars.len() {
        for j in i + 1..chars.len() {
            if sets.equiv(i, j) {
                continue;
            }
            if let Some(witness) = strict_equiv_search(&chars[i], &chars[j], cfg)? {
                sets.union(i, j);
                links.push((i, ClassLink {
                    from: chars[i].clone(),
                    to: chars[j].clone(),
                    witness,
                }));
            }
        }
    }
    // forms are sorted, so the first index of each class is its smallest member
    let mut classes: Vec<ClassEntry> = Vec::new();
    let mut slot = vec![usize::MAX; forms.len()];
    for (i, form) in forms.iter().enumerate() {
        let root = sets.find(i);
        if slot[root] == usize::MAX {
            slot[root] = classes.len();
            classes.push(ClassEntry {
                representative: chars[i].clone(),
                members: Vec::new(),
                links: Vec::new(),
            });
        }
        classes[slot[root]].members.push(form.clone());
    }
    for (i, link) in links {
        classes[slot[sets.find(i)]].links.push(link);
    }
    Ok(ClassReport {
        prime,
        ty: TypeLM { l, m },
        bound,
        method: CountMethod::OraclePartition,
        classes,
        search_space_size: cost,
        elapsed: start.elapsed(),
    })
}

/// Distinct reduced forms over every character of the type. Only a class
/// count when `l < p`.
pub fn canonical_classes(prime: Prime, l: usize, m: usize, parallel: bool) -> Result<ClassReport> {
    let start = Instant::now();
    let bound = bound_b(prime, l, m)?;
    if l >= prime.get() as usize {
        return Err(domain(format!(
            "reduced forms are not canonical for l = {l} >= p = {prime}"
        )));
    }
    let all: Vec<Character> = characters_of_type(prime, l, m)?.collect();
    let reduced = map_ordered(&all, parallel, |chi| reduce(chi).map(|(f, _)| f));
    let forms: BTreeSet<ReducedForm> = reduced.into_iter().collect::<Result<_>>()?;
    let mut forms: Vec<ReducedForm> = forms.into_iter().collect();
    forms.sort_by_key(ReducedForm::to_character);
    let classes = forms
        .into_iter()
        .map(|f| ClassEntry {
            representative: f.to_character(),
            members: vec![f],
            links: Vec::new(),
        })
        .collect();
    Ok(ClassReport {
        prime,
        ty: TypeLM { l, m },
        bound,
        method: CountMethod::CanonicalReduce,
        classes,
        search_space_size: all.len() as u64,
        elapsed: start.elapsed(),
    })
}

pub fn classify(
    prime: Prime,
    l: usize,
    m: usize,
    method: CountMethod,
    cfg: &SearchConfig,
) -> Result<ClassReport> {
    match method {
        CountMethod::CanonicalReduce => canonical_classes(prime, l, m, cfg.parallel),
        CountMethod::OraclePartition => partition_reduced_forms(prime, l, m, cfg),
    }
}

pub fn count_classes(
    prime: Prime,
    l: usize,
    m: usize,
    method: CountMethod,
    cfg: &SearchConfig,
) -> Result<usize> {
    Ok(classify(prime, l, m, method, cfg)?.class_count())
}

/// Number of classes over every character of type `<l, m>`, found by
/// sweeping whole orbits. Independent of the reduced forms; costs
/// `p^m` actions per class.
pub fn count_orbits(
    prime: Prime,
    l: usize,
    m: usize,
    relation: Relation,
    cfg: &SearchConfig,
) -> Result<usize> {
    TypeLM::new(prime, l, m)?;
    cfg.admit(prime, m)?;
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for chi in characters_of_type(prime, l, m)? {
        if seen.contains(&chi) {
            continue;
        }
        count += 1;
        seen.extend(search::orbit(&chi, relation, cfg.parallel));
    }
    Ok(count)
}
