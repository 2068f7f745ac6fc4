//! Characters `U_1 -> Z/p^2` stored as coefficient vectors on the dual basis
//! `Z_j` of `E_j = 1 + t^j`, `p ∤ j`.
//!
//! A [`Character`] keeps only its coefficients; its bound is derived as
//! `max(largest nonzero index, p * largest unit index)`, the smallest `m` for
//! which the character is trivial on `U_{m+1}`. For surjective characters
//! this is the upper break `m` of the type `<l, m>`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, usage, Error, Result};
use crate::prime::Prime;
use crate::series::{self, NottinghamElt, UnitSeries};

/// A continuous character `U_1 -> Z/p^2 Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    prime: Prime,
    /// Indexed by `j`, length `bound + 1`, zero wherever `p | j`.
    coeffs: Vec<u16>,
}

/// A break sequence `<l, m>` satisfying the structural conditions
/// `p ∤ l`, `m >= p l`, and `p ∤ m` whenever `m > p l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeLM {
    pub l: usize,
    pub m: usize,
}

impl TypeLM {
    pub fn new(prime: Prime, l: usize, m: usize) -> Result<Self> {
        if validate_type(prime, l, m) {
            Ok(TypeLM { l, m })
        } else {
            Err(domain(format!("<{l},{m}> is not a valid type for p = {prime}")))
        }
    }

    /// `m = p l`; then `E_m = E_l^p` is not a basis element.
    pub fn is_degenerate(&self, prime: Prime) -> bool {
        self.m == prime.get() as usize * self.l
    }
}

impl fmt::Display for TypeLM {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.l, self.m)
    }
}

/// Whether `<l, m>` is the break sequence of some surjective character.
pub fn validate_type(prime: Prime, l: usize, m: usize) -> bool {
    let p = prime.get() as usize;
    l >= 1 && !l.is_multiple_of(p) && m >= p * l && (m == p * l || !m.is_multiple_of(p))
}

/// The `p`-coprime indices `1..=m`.
pub fn basis_indices(prime: Prime, m: usize) -> impl Iterator<Item = usize> {
    let p = prime.get() as usize;
    (1..=m).filter(move |j| j % p != 0)
}

impl Character {
    /// The zero character.
    pub fn zero(prime: Prime) -> Self {
        Character {
            prime,
            coeffs: vec![0],
        }
    }

    /// Build from `(j, c_j)` pairs. Values are reduced mod `p^2`; repeated
    /// indices accumulate. Rejects `j == 0` and `p | j`.
    pub fn new(prime: Prime, pairs: impl IntoIterator<Item = (usize, i64)>) -> Result<Self> {
        let mut coeffs: Vec<u16> = vec![0];
        for (j, c) in pairs {
            if j == 0 || prime.divides(j as u32) {
                return Err(usage(format!("index {j} is not a p-coprime positive index")));
            }
            if coeffs.len() <= j {
                coeffs.resize(j + 1, 0);
            }
            coeffs[j] = prime.mod_psq(coeffs[j] as i64 + c) as u16;
        }
        Ok(Self::from_dense(prime, coeffs))
    }

    /// Normalise a dense coefficient vector to the natural bound.
    pub(crate) fn from_dense(prime: Prime, mut coeffs: Vec<u16>) -> Self {
        let p = prime.get();
        let max_support = coeffs.iter().rposition(|&c| c != 0).unwrap_or(0);
        let unit = coeffs
            .iter()
            .rposition(|&c| !(c as u32).is_multiple_of(p))
            .unwrap_or(0);
        let bound = max_support.max(unit * p as usize);
        coeffs.resize(bound + 1, 0);
        Character { prime, coeffs }
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Smallest `m` with the character trivial on `U_{m+1}`.
    #[inline]
    pub fn bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c_j = χ(E_j)`; zero outside the support.
    #[inline]
    pub fn coeff(&self, j: usize) -> u32 {
        self.coeffs.get(j).map_or(0, |&c| c as u32)
    }

    pub(crate) fn dense(&self) -> &[u16] {
        &self.coeffs
    }

    /// Nonzero coefficients in increasing index order.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(j, &c)| (j, c as u32))
    }

    /// Largest index whose coefficient is a unit mod `p`.
    pub fn unit_index(&self) -> Option<usize> {
        let p = self.prime.get();
        self.coeffs.iter().rposition(|&c| !(c as u32).is_multiple_of(p))
    }

    /// Surjective onto `Z/p^2` iff some coefficient is a unit.
    pub fn is_surjective(&self) -> bool {
        self.unit_index().is_some()
    }

    /// `χ(f)`: decompose `f` in the `E_j` basis and pair with the coefficients.
    pub fn eval(&self, f: &UnitSeries) -> Result<u32> {
        if f.prime() != self.prime {
            return Err(usage(format!(
                "prime mismatch: {} vs {}",
                f.prime(),
                self.prime
            )));
        }
        let m = self.bound();
        if f.precision() < m {
            return Err(usage(format!(
                "series precision {} is below the character bound {m}",
                f.precision()
            )));
        }
        let mut residual = f.coeffs()[..=m].to_vec();
        Ok(eval_residual(&self.coeffs, &mut residual, self.prime))
    }

    /// The character `f ↦ χ(f ∘ u)`.
    pub fn act(&self, u: &NottinghamElt) -> Result<Character> {
        if u.prime() != self.prime {
            return Err(usage(format!(
                "prime mismatch: {} vs {}",
                u.prime(),
                self.prime
            )));
        }
        let m = self.bound();
        if u.precision() < m {
            return Err(usage(format!(
                "element precision {} is below the character bound {m}",
                u.precision()
            )));
        }
        let mut scratch = ActionScratch::new(m);
        let unit = &u.unit().coeffs()[..=m];
        let mut out = vec![0u16; m + 1];
        for j in basis_indices(self.prime, m) {
            out[j] = image_coeff(&self.coeffs, unit, j, self.prime, &mut scratch) as u16;
        }
        Ok(Character::from_dense(self.prime, out))
    }

    /// The break sequence `<l, m>`.
    pub fn break_sequence(&self) -> Result<TypeLM> {
        let l = self
            .unit_index()
            .ok_or_else(|| domain(format!("character {self} is not surjective")))?;
        Ok(TypeLM { l, m: self.bound() })
    }

    /// Digit split against the character's own type.
    pub fn standard_expansion(&self) -> Result<StandardExpansion> {
        let ty = self.break_sequence()?;
        self.standard_expansion_for(ty)
    }

    /// Digit split `c_i = x_i + p a_i` (`i <= l`), `c_j = p a_j` (`j > l`)
    /// against a claimed type.
    pub fn standard_expansion_for(&self, ty: TypeLM) -> Result<StandardExpansion> {
        let p = self.prime.get();
        if self.bound() > ty.m {
            return Err(Error::Inconsistent(format!(
                "{self} is nontrivial beyond the claimed break m = {}",
                ty.m
            )));
        }
        if self.coeff(ty.l).is_multiple_of(p) {
            return Err(Error::Inconsistent(format!(
                "coefficient at l = {} is not a unit",
                ty.l
            )));
        }
        let mut x = BTreeMap::new();
        let mut a = BTreeMap::new();
        for (j, c) in self.support() {
            if j > ty.l && c % p != 0 {
                return Err(Error::Inconsistent(format!(
                    "unit coefficient {c} at index {j} above l = {}",
                    ty.l
                )));
            }
            if c % p != 0 {
                x.insert(j, c % p);
            }
            if c / p != 0 {
                a.insert(j, c / p);
            }
        }
        Ok(StandardExpansion { ty, x, a })
    }

    /// Whether the character has the shape `x_l Z_l + sum_{m-l <= j <= m} b_j p Z_j`.
    pub fn is_reduced(&self) -> bool {
        let Ok(ty) = self.break_sequence() else {
            return false;
        };
        let p = self.prime.get();
        let (l, m) = (ty.l, ty.m);
        let window = m - l;
        for (j, c) in self.support() {
            if j == l {
                // the p-part at l is only allowed when l sits in the window
                if c >= p && j < window {
                    return false;
                }
            } else if j < window {
                return false;
            }
        }
        m % p as usize == 0 || self.coeff(m) != 0
    }

    /// `n χ`.
    pub fn scalar_mul(&self, n: i64) -> Character {
        let n = self.prime.mod_psq(n);
        let psq = self.prime.square();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| (c as u32 * n % psq) as u16)
            .collect();
        Character::from_dense(self.prime, coeffs)
    }

    /// `5:1,15:2`.
    pub fn literal(&self) -> String {
        self.support()
            .map(|(j, c)| format!("{j}:{c}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parse the `index:value` list of a character literal for a known prime.
    pub fn parse_literal(s: &str, prime: Prime) -> Result<Self> {
        parse_pairs(s, 0, prime)
    }
}

impl fmt::Display for Character {
    /// `p=2; 5:1,15:2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}; {}", self.prime, self.literal())
    }
}

impl FromStr for Character {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let Some(semi) = s.find(';') else {
            return Err(Error::Parse {
                offset: s.len(),
                message: "expected `p=<prime>; <pairs>`".into(),
            });
        };
        let head = &s[..semi];
        let lead = head.len() - head.trim_start().len();
        let head_t = head.trim();
        let Some(pstr) = head_t.strip_prefix("p=") else {
            return Err(Error::Parse {
                offset: lead,
                message: "expected `p=` header".into(),
            });
        };
        let p: u32 = pstr.trim().parse().map_err(|_| Error::Parse {
            offset: lead + 2,
            message: format!("invalid prime `{}`", pstr.trim()),
        })?;
        let prime = Prime::new(p).map_err(|e| Error::Parse {
            offset: lead + 2,
            message: e.to_string(),
        })?;
        parse_pairs(&s[semi + 1..], semi + 1, prime)
    }
}

fn parse_pairs(s: &str, base: usize, prime: Prime) -> Result<Character> {
    let psq = prime.square() as u64;
    let mut pairs = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    if s.trim().is_empty() {
        return Ok(Character::zero(prime));
    }
    let mut offset = base;
    for item in s.split(',') {
        let item_off = offset + (item.len() - item.trim_start().len());
        offset += item.len() + 1;
        let item = item.trim();
        let err = |at: usize, message: String| Error::Parse {
            offset: at,
            message,
        };
        let Some(colon) = item.find(':') else {
            return Err(err(item_off, format!("expected `index:value`, got `{item}`")));
        };
        let (js, vs) = (item[..colon].trim(), item[colon + 1..].trim());
        let v_off = item_off + colon + 1 + (item[colon + 1..].len() - item[colon + 1..].trim_start().len());
        let j: usize = js
            .parse()
            .map_err(|_| err(item_off, format!("invalid index `{js}`")))?;
        let v: u64 = vs
            .parse()
            .map_err(|_| err(v_off, format!("invalid value `{vs}`")))?;
        if j == 0 || prime.divides(j as u32) {
            return Err(err(item_off, format!("index {j} is divisible by p = {prime}")));
        }
        if v >= psq {
            return Err(err(v_off, format!("value {v} is not below p^2 = {psq}")));
        }
        if !seen.insert(j) {
            return Err(err(item_off, format!("index {j} repeated")));
        }
        pairs.push((j, v as i64));
    }
    Character::new(prime, pairs)
}

/// JSON mirror `{"p":2,"coeffs":{"5":1,"15":2}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterJson {
    pub p: u32,
    pub coeffs: BTreeMap<String, u32>,
}

impl From<&Character> for CharacterJson {
    fn from(c: &Character) -> Self {
        CharacterJson {
            p: c.prime.get(),
            coeffs: c.support().map(|(j, v)| (j.to_string(), v)).collect(),
        }
    }
}

impl TryFrom<CharacterJson> for Character {
    type Error = Error;

    fn try_from(j: CharacterJson) -> Result<Self> {
        let prime = Prime::new(j.p)?;
        let mut pairs = Vec::new();
        for (k, v) in j.coeffs {
            let idx: usize = k
                .parse()
                .map_err(|_| usage(format!("invalid index key `{k}`")))?;
            if v >= prime.square() {
                return Err(usage(format!("value {v} is not below p^2")));
            }
            pairs.push((idx, v as i64));
        }
        Character::new(prime, pairs)
    }
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CharacterJson::deserialize(d)?;
        Character::try_from(j).map_err(serde::de::Error::custom)
    }
}

/// The digit split of a surjective character of type `<l, m>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardExpansion {
    pub ty: TypeLM,
    /// Unit digits `x_i`, `i <= l`; only nonzero entries.
    pub x: BTreeMap<usize, u32>,
    /// `p`-digits `a_j`, `j <= m`; only nonzero entries.
    pub a: BTreeMap<usize, u32>,
}

impl StandardExpansion {
    pub fn to_character(&self, prime: Prime) -> Result<Character> {
        let p = prime.get() as i64;
        let pairs = self
            .x
            .iter()
            .map(|(&j, &x)| (j, x as i64))
            .chain(self.a.iter().map(|(&j, &a)| (j, p * a as i64)));
        Character::new(prime, pairs)
    }
}

/// `x_l Z_l + sum_{m-l <= j <= m, p ∤ j} b_j p Z_j`, stored digitwise.
///
/// When `p = 2` and `m = 2l` the index `l` carries both `x_l` and `b_l`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedForm {
    prime: Prime,
    ty: TypeLM,
    x_l: u32,
    /// Every `p`-coprime `j` in `[m - l, m]`, increasing.
    b: Vec<(usize, u32)>,
}

impl ReducedForm {
    /// Validates digit ranges, the window, and `b_m != 0` when `p ∤ m`.
    pub fn new(
        prime: Prime,
        ty: TypeLM,
        x_l: u32,
        b: impl IntoIterator<Item = (usize, u32)>,
    ) -> Result<Self> {
        let ty = TypeLM::new(prime, ty.l, ty.m)?;
        let p = prime.get();
        if x_l == 0 || x_l >= p {
            return Err(usage(format!("x_l = {x_l} must lie in 1..{p}")));
        }
        let mut digits: BTreeMap<usize, u32> =
            window_indices(prime, ty).map(|j| (j, 0)).collect();
        for (j, v) in b {
            let Some(slot) = digits.get_mut(&j) else {
                return Err(usage(format!(
                    "index {j} is not a p-coprime index in [{}, {}]",
                    ty.m - ty.l,
                    ty.m
                )));
            };
            if v >= p {
                return Err(usage(format!("digit b_{j} = {v} must lie in 0..{p}")));
            }
            *slot = v;
        }
        if !prime.divides(ty.m as u32) && digits[&ty.m] == 0 {
            return Err(usage("b_m must be nonzero when p does not divide m"));
        }
        Ok(ReducedForm {
            prime,
            ty,
            x_l,
            b: digits.into_iter().collect(),
        })
    }

    /// Read the digits off a character for which [`Character::is_reduced`] holds.
    pub fn from_character(chi: &Character) -> Result<Self> {
        if !chi.is_reduced() {
            return Err(Error::Precondition(format!("{chi} is not in reduced form")));
        }
        let ty = chi.break_sequence()?;
        let p = chi.prime.get();
        let x_l = chi.coeff(ty.l) % p;
        let b = window_indices(chi.prime, ty).map(|j| {
            let c = chi.coeff(j) - if j == ty.l { x_l } else { 0 };
            (j, c / p)
        });
        ReducedForm::new(chi.prime, ty, x_l, b)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn ty(&self) -> TypeLM {
        self.ty
    }

    pub fn x_l(&self) -> u32 {
        self.x_l
    }

    /// `(j, b_j)` over the whole window, zeros included.
    pub fn b(&self) -> &[(usize, u32)] {
        &self.b
    }

    pub fn to_character(&self) -> Character {
        let p = self.prime.get() as i64;
        let pairs = std::iter::once((self.ty.l, self.x_l as i64))
            .chain(self.b.iter().map(|&(j, v)| (j, p * v as i64)));
        Character::new(self.prime, pairs).expect("window indices are p-coprime")
    }
}

impl fmt::Display for ReducedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_character().literal())
    }
}

/// The `p`-coprime indices of the reduced-form window `[m - l, m]`.
pub fn window_indices(prime: Prime, ty: TypeLM) -> impl Iterator<Item = usize> {
    let p = prime.get() as usize;
    (ty.m - ty.l..=ty.m).filter(move |j| *j >= 1 && j % p != 0)
}

/// All reduced forms of type `<l, m>`, ordered by their characters.
pub fn enumerate_reduced_forms(prime: Prime, l: usize, m: usize) -> Result<Vec<ReducedForm>> {
    let ty = TypeLM::new(prime, l, m)?;
    let p = prime.get();
    let window: Vec<usize> = window_indices(prime, ty).collect();
    let free: Vec<usize> = window.iter().copied().filter(|&j| j != m).collect();
    let top: Vec<u32> = if prime.divides(m as u32) {
        vec![]
    } else {
        (1..p).collect()
    };
    let mut out = Vec::new();
    let mut digits = vec![0u32; free.len()];
    for x_l in 1..p {
        loop {
            let base = free.iter().copied().zip(digits.iter().copied());
            if top.is_empty() {
                out.push(ReducedForm::new(prime, ty, x_l, base)?);
            } else {
                for &bm in &top {
                    let b = base.clone().chain(std::iter::once((m, bm)));
                    out.push(ReducedForm::new(prime, ty, x_l, b)?);
                }
            }
            if !odometer_step(&mut digits, p) {
                break;
            }
        }
    }
    out.sort_by_key(|a| a.to_character());
    Ok(out)
}

fn odometer_step(digits: &mut [u32], radix: u32) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Iterator over all characters of exact type `<l, m>`, lexicographic in
/// `(c_1, ..., c_m)`.
pub struct CharacterIter {
    prime: Prime,
    positions: Vec<usize>,
    choices: Vec<Vec<u16>>,
    state: Vec<usize>,
    dense: Vec<u16>,
    done: bool,
}

impl Iterator for CharacterIter {
    type Item = Character;

    fn next(&mut self) -> Option<Character> {
        if self.done {
            return None;
        }
        for (k, &j) in self.positions.iter().enumerate() {
            self.dense[j] = self.choices[k][self.state[k]];
        }
        let out = Character {
            prime: self.prime,
            coeffs: self.dense.clone(),
        };
        // advance, last position least significant
        self.done = true;
        for k in (0..self.state.len()).rev() {
            self.state[k] += 1;
            if self.state[k] < self.choices[k].len() {
                self.done = false;
                break;
            }
            self.state[k] = 0;
        }
        Some(out)
    }
}

/// Lazy enumeration of every surjective character of exact type `<l, m>`.
pub fn characters_of_type(prime: Prime, l: usize, m: usize) -> Result<CharacterIter> {
    let ty = TypeLM::new(prime, l, m)?;
    let p = prime.get() as u16;
    let psq = prime.square() as u16;
    let mut positions = Vec::new();
    let mut choices = Vec::new();
    for j in basis_indices(prime, m) {
        let opts: Vec<u16> = if j < l {
            (0..psq).collect()
        } else if j == l {
            (0..psq).filter(|c| c % p != 0).collect()
        } else if j == m && !ty.is_degenerate(prime) {
            (1..p).map(|a| a * p).collect()
        } else {
            (0..p).map(|a| a * p).collect()
        };
        positions.push(j);
        choices.push(opts);
    }
    let state = vec![0; positions.len()];
    Ok(CharacterIter {
        prime,
        positions,
        choices,
        state,
        dense: vec![0; m + 1],
        done: false,
    })
}

/// [`characters_of_type`] collected.
pub fn enumerate_characters(prime: Prime, l: usize, m: usize) -> Result<Vec<Character>> {
    Ok(characters_of_type(prime, l, m)?.collect())
}

// Evaluation kernels shared with the search.

/// Pair the `E_j` decomposition of `residual` (consumed) with `coeffs`.
#[inline]
pub(crate) fn eval_residual(coeffs: &[u16], residual: &mut [u8], prime: Prime) -> u32 {
    let psq = prime.square();
    let mut acc = 0u32;
    series::strip(residual, prime, |j, inc| {
        if let Some(&c) = coeffs.get(j) {
            acc = (acc + inc * c as u32) % psq;
        }
    });
    acc
}

pub(crate) struct ActionScratch {
    power: Vec<u8>,
    buf: Vec<u8>,
}

impl ActionScratch {
    pub(crate) fn new(m: usize) -> Self {
        ActionScratch {
            power: vec![0; m + 1],
            buf: vec![0; m + 1],
        }
    }
}

/// `χ(1 + u(t)^j)` where `unit = u/t` through degree `m = coeffs.len() - 1`.
/// Only `unit[..=m - j]` is read.
#[inline]
pub(crate) fn image_coeff(
    coeffs: &[u16],
    unit: &[u8],
    j: usize,
    prime: Prime,
    scratch: &mut ActionScratch,
) -> u32 {
    let m = coeffs.len() - 1;
    debug_assert!(j >= 1 && j <= m);
    let keep = m - j + 1;
    let power = &mut scratch.power[..keep];
    series::pow_into(&unit[..keep], j as u64, power, prime.get());
    let buf = &mut scratch.buf;
    buf.fill(0);
    buf[0] = 1;
    buf[j..=m].copy_from_slice(power);
    eval_residual(coeffs, buf, prime)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    fn ch(p: u32, pairs: &[(usize, i64)]) -> Character {
        Character::new(pr(p), pairs.iter().copied()).unwrap()
    }

    fn merging_chi() -> Character {
        ch(2, &[(5, 1), (15, 2)])
    }

    #[test]
    fn eval_examples() {
        let chi = merging_chi();
        let p = pr(2);
        assert_eq!(chi.eval(&UnitSeries::basis(p, 5, 15)).unwrap(), 1);
        assert_eq!(chi.eval(&UnitSeries::basis(p, 10, 15)).unwrap(), 2);
        // (1+t^5)^3 = 1+t^5+t^10+t^15 over F_2 ...
        let cube = UnitSeries::basis(p, 5, 15).pow(3);
        assert_eq!(chi.eval(&cube).unwrap(), 3);
        // ... so 1+t^5+t^10 = E_5^3 E_15^{-1} modulo U_16.
        let mut tail = vec![0i64; 15];
        tail[4] = 1;
        tail[9] = 1;
        let f = UnitSeries::from_coeffs(p, &tail);
        let d = f.decompose(15).unwrap();
        assert_eq!(d.iter().collect::<Vec<_>>(), vec![(5, 3), (15, 1)]);
        assert_eq!(chi.eval(&f).unwrap(), 1);
        assert!(chi.eval(&UnitSeries::one(p, 14)).is_err());
    }

    #[test]
    fn act_identity_and_coefficient_at_11() {
        let chi = merging_chi();
        let p = pr(2);
        assert_eq!(chi.act(&NottinghamElt::identity(p, 15)).unwrap(), chi);
        for e in 0..2 {
            let mut tail = vec![0i64; 15];
            tail[2] = 1;
            tail[3] = 1;
            let base = NottinghamElt::from_coeffs(p, &tail);
            let fifteen = NottinghamElt::from_factors(p, 15, &[(15, e)]);
            let w = NottinghamElt::from_unit(base.unit().mul(fifteen.unit()).unwrap());
            let acted = chi.act(&w).unwrap();
            assert_eq!(acted.coeff(11), 2, "e = {e}");
            // p ∤ m: the top coefficient is fixed by every element
            assert_eq!(acted.coeff(15), 2);
        }
    }

    #[test]
    fn act_rejects_low_precision() {
        let chi = merging_chi();
        assert!(chi.act(&NottinghamElt::identity(pr(2), 14)).is_err());
        assert!(chi.act(&NottinghamElt::identity(pr(3), 15)).is_err());
    }

    #[test]
    fn break_sequence_examples() {
        assert_eq!(merging_chi().break_sequence().unwrap(), TypeLM { l: 5, m: 15 });
        assert_eq!(ch(3, &[(1, 1)]).break_sequence().unwrap(), TypeLM { l: 1, m: 3 });
        assert_eq!(
            ch(3, &[(1, 4), (2, 3)]).break_sequence().unwrap(),
            TypeLM { l: 1, m: 3 }
        );
        assert!(ch(3, &[(2, 3)]).break_sequence().is_err());
        assert!(Character::zero(pr(5)).break_sequence().is_err());
    }

    #[test]
    fn degenerate_evaluation() {
        // E_{lp} = E_l^p, so χ(E_m) = p c_l when m = lp
        let chi = ch(3, &[(1, 4), (2, 3)]);
        let v = chi.eval(&UnitSeries::basis(pr(3), 3, 3)).unwrap();
        assert_eq!(v, 3 * 4 % 9);
    }

    #[test]
    fn standard_expansion_examples() {
        let se = ch(3, &[(1, 1), (2, 3), (4, 3)]).standard_expansion().unwrap();
        assert_eq!(se.ty, TypeLM { l: 1, m: 4 });
        assert_eq!(se.x, BTreeMap::from([(1, 1)]));
        assert_eq!(se.a, BTreeMap::from([(2, 1), (4, 1)]));
        let se = merging_chi().standard_expansion().unwrap();
        assert_eq!(se.x, BTreeMap::from([(5, 1)]));
        assert_eq!(se.a, BTreeMap::from([(15, 1)]));
        let chi = ch(2, &[(5, 3), (15, 2)]);
        let se = chi.standard_expansion().unwrap();
        assert_eq!(se.x, BTreeMap::from([(5, 1)]));
        assert_eq!(se.a, BTreeMap::from([(5, 1), (15, 1)]));
        assert_eq!(se.to_character(pr(2)).unwrap(), chi);
    }

    #[test]
    fn standard_expansion_rejects_claimed_type() {
        let chi = ch(3, &[(1, 1), (2, 1), (7, 3)]);
        let err = chi.standard_expansion_for(TypeLM { l: 1, m: 7 }).unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)));
        assert!(chi.standard_expansion_for(TypeLM { l: 2, m: 5 }).is_err());
    }

    #[test]
    fn validate_type_examples() {
        assert!(validate_type(pr(2), 5, 15));
        assert!(!validate_type(pr(2), 5, 12));
        assert!(validate_type(pr(3), 1, 3));
        assert!(!validate_type(pr(3), 3, 9));
        assert!(!validate_type(pr(3), 1, 2));
        assert!(!validate_type(pr(3), 1, 6));
        assert!(!validate_type(pr(2), 0, 4));
    }

    #[test]
    fn is_reduced_examples() {
        assert!(merging_chi().is_reduced());
        assert!(ch(2, &[(5, 1), (11, 2), (15, 2)]).is_reduced());
        assert!(!ch(2, &[(5, 1), (7, 2), (15, 2)]).is_reduced());
        // p-part at l outside the window
        assert!(!ch(3, &[(1, 4), (4, 3)]).is_reduced());
        // overlap window p = 2, m = 2l
        assert!(ch(2, &[(3, 3), (5, 2)]).is_reduced());
        assert!(!ch(2, &[(1, 1), (3, 1)]).is_reduced());
    }

    #[test]
    fn scalar_mul_examples() {
        let chi = merging_chi();
        assert_eq!(chi.scalar_mul(1), chi);
        assert_eq!(chi.scalar_mul(3), ch(2, &[(5, 3), (15, 2)]));
        let twice = chi.scalar_mul(2);
        assert!(!twice.is_surjective());
        assert_eq!(twice, ch(2, &[(5, 2)]));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(characters_of_type(pr(2), 5, 15).unwrap().count(), 512);
        assert_eq!(characters_of_type(pr(3), 2, 7).unwrap().count(), 972);
        assert!(characters_of_type(pr(2), 5, 12).is_err());
        let all = enumerate_characters(pr(3), 1, 4).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for chi in &all {
            assert_eq!(chi.break_sequence().unwrap(), TypeLM { l: 1, m: 4 });
        }
    }

    #[test]
    fn reduced_form_counts() {
        assert_eq!(enumerate_reduced_forms(pr(2), 5, 15).unwrap().len(), 4);
        assert_eq!(enumerate_reduced_forms(pr(3), 1, 4).unwrap().len(), 4);
        let forms = enumerate_reduced_forms(pr(2), 3, 6).unwrap();
        assert_eq!(forms.len(), 4);
        for f in &forms {
            let chi = f.to_character();
            assert!(chi.is_reduced(), "{chi}");
            assert_eq!(ReducedForm::from_character(&chi).unwrap(), *f);
            assert!(chi.support().all(|(j, _)| j == 3 || j == 5));
        }
    }

    #[test]
    fn reduced_form_validation() {
        let p = pr(3);
        let ty = TypeLM { l: 1, m: 4 };
        assert!(ReducedForm::new(p, ty, 0, [(4, 1)]).is_err());
        assert!(ReducedForm::new(p, ty, 1, [(4, 0)]).is_err());
        assert!(ReducedForm::new(p, ty, 1, [(2, 1), (4, 1)]).is_err());
        assert!(ReducedForm::new(p, ty, 1, [(4, 3)]).is_err());
        assert!(ReducedForm::new(p, ty, 2, [(4, 2)]).is_ok());
    }

    #[test]
    fn literal_parsing() {
        let p = pr(2);
        assert_eq!(Character::parse_literal("5:1,15:2", p).unwrap(), merging_chi());
        match Character::parse_literal("4:1", p) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("{other:?}"),
        }
        match Character::parse_literal("5:1, 7:4", p) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 7),
            other => panic!("{other:?}"),
        }
        assert!(Character::parse_literal("5:1,5:2", p).is_err());
        assert!(Character::parse_literal("5-1", p).is_err());
        assert_eq!(Character::parse_literal("", p).unwrap(), Character::zero(p));
    }

    #[test]
    fn text_and_json_formats() {
        let chi = merging_chi();
        assert_eq!(chi.to_string(), "p=2; 5:1,15:2");
        assert_eq!("p=2; 5:1,15:2".parse::<Character>().unwrap(), chi);
        assert!("p=4; 1:1".parse::<Character>().is_err());
        assert!("5:1".parse::<Character>().is_err());
        let json = serde_json::to_string(&chi).unwrap();
        assert_eq!(json, r#"{"p":2,"coeffs":{"15":2,"5":1}}"#);
        let back: Character = serde_json::from_str(r#"{"p":2,"coeffs":{"5":1,"15":2}}"#).unwrap();
        assert_eq!(back, chi);
        assert!(serde_json::from_str::<Character>(r#"{"p":2,"coeffs":{"4":1}}"#).is_err());
    }
}
