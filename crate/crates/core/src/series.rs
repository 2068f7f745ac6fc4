//! Truncated power series over `F_p`.
//!
//! A [`UnitSeries`] of precision `N` is a principal unit `1 + a_1 t + ... +
//! a_N t^N` known modulo `t^(N+1)`. A [`NottinghamElt`] of precision `N` is
//! `u(t) = t * unit(t)` with a unit of precision `N`, so `u` itself is known
//! through total degree `N + 1`. With these conventions composition,
//! inversion and substitution are all well defined at fixed precision.
//!
//! Principal units decompose uniquely (modulo `U_{m+1}`) in the basis
//! `E_j = 1 + t^j`, `p ∤ j`, with `Z_p` exponents; an [`ExponentVector`]
//! keeps those exponents modulo `p^2`.

use std::fmt;

use crate::error::{usage, Result};
use crate::prime::Prime;

/// A principal unit `1 + a_1 t + ... + a_N t^N` modulo `t^(N+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitSeries {
    prime: Prime,
    /// `coeffs[0] == 1`; `coeffs[k]` is the coefficient of `t^k`.
    coeffs: Vec<u8>,
}

impl UnitSeries {
    /// The unit `1` at precision `n`.
    pub fn one(prime: Prime, precision: usize) -> Self {
        let mut coeffs = vec![0u8; precision + 1];
        coeffs[0] = 1;
        UnitSeries { prime, coeffs }
    }

    /// Build from the coefficients `a_1, ..., a_N` (reduced mod p).
    pub fn from_coeffs(prime: Prime, tail: &[i64]) -> Self {
        let mut coeffs = Vec::with_capacity(tail.len() + 1);
        coeffs.push(1);
        coeffs.extend(tail.iter().map(|&a| prime.mod_p(a) as u8));
        UnitSeries { prime, coeffs }
    }

    /// Build from `a_1..a_N` already reduced into `0..p`.
    pub(crate) fn from_reduced(prime: Prime, tail: &[u8]) -> Self {
        debug_assert!(tail.iter().all(|&a| (a as u32) < prime.get()));
        let mut coeffs = Vec::with_capacity(tail.len() + 1);
        coeffs.push(1);
        coeffs.extend_from_slice(tail);
        UnitSeries { prime, coeffs }
    }

    /// `E_j = 1 + t^j` at precision `n`; equals `1` when `j > n`.
    pub fn basis(prime: Prime, j: usize, precision: usize) -> Self {
        assert!(j >= 1, "basis index must be positive");
        let mut s = Self::one(prime, precision);
        if j <= precision {
            s.coeffs[j] = 1;
        }
        s
    }

    /// `1 + c t^k` at precision `n`.
    pub fn binomial(prime: Prime, k: usize, c: i64, precision: usize) -> Self {
        assert!(k >= 1);
        let mut s = Self::one(prime, precision);
        if k <= precision {
            s.coeffs[k] = prime.mod_p(c) as u8;
        }
        s
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Highest tracked degree `N`.
    #[inline]
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `t^k`, or `None` above the precision.
    pub fn coeff(&self, k: usize) -> Option<u32> {
        self.coeffs.get(k).map(|&c| c as u32)
    }

    /// All coefficients, constant term included.
    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    /// `a_1, ..., a_N`.
    pub fn tail(&self) -> &[u8] {
        &self.coeffs[1..]
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Drop every degree above `n`.
    pub fn truncate(&self, precision: usize) -> Result<Self> {
        if precision > self.precision() {
            return Err(usage(format!(
                "cannot raise precision from {} to {precision}",
                self.precision()
            )));
        }
        Ok(UnitSeries {
            prime: self.prime,
            coeffs: self.coeffs[..=precision].to_vec(),
        })
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(usage(format!(
                "prime mismatch: {} vs {}",
                self.prime, other.prime
            )));
        }
        if self.precision() != other.precision() {
            return Err(usage(format!(
                "precision mismatch: {} vs {}",
                self.precision(),
                other.precision()
            )));
        }
        Ok(())
    }

    /// Product truncated at the common precision.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = vec![0u8; self.coeffs.len()];
        mul_into(&self.coeffs, &other.coeffs, &mut out, self.prime.get());
        Ok(UnitSeries {
            prime: self.prime,
            coeffs: out,
        })
    }

    /// Multiplicative inverse.
    pub fn inverse(&self) -> Self {
        UnitSeries {
            prime: self.prime,
            coeffs: inverse(&self.coeffs, self.prime.get()),
        }
    }

    /// `self^e` for any integer `e`.
    pub fn pow(&self, e: i64) -> Self {
        let p = self.prime.get();
        let base = if e < 0 {
            inverse(&self.coeffs, p)
        } else {
            self.coeffs.clone()
        };
        let mut out = vec![0u8; base.len()];
        pow_into(&base, e.unsigned_abs(), &mut out, p);
        UnitSeries {
            prime: self.prime,
            coeffs: out,
        }
    }

    /// `f(u(t))` truncated at the precision of `u`. Requires
    /// `self.precision() >= u.precision()`.
    pub fn subst(&self, u: &NottinghamElt) -> Result<Self> {
        if self.prime != u.prime() {
            return Err(usage(format!(
                "prime mismatch: {} vs {}",
                self.prime,
                u.prime()
            )));
        }
        let n = u.precision();
        if self.precision() < n {
            return Err(usage(format!(
                "series precision {} is below the element precision {n}",
                self.precision()
            )));
        }
        Ok(UnitSeries {
            prime: self.prime,
            coeffs: subst(&self.coeffs[..=n], u.unit.coeffs(), self.prime.get()),
        })
    }

    /// Exponents `e_j` (mod `p^2`, `p ∤ j <= m`) with
    /// `self ≡ prod E_j^{e_j}` modulo `U_{m+1}`.
    pub fn decompose(&self, m: usize) -> Result<ExponentVector> {
        if self.precision() < m {
            return Err(usage(format!(
                "cannot decompose to bound {m}: precision is {}",
                self.precision()
            )));
        }
        let mut exps = vec![0u16; m + 1];
        let mut residual = self.coeffs[..=m].to_vec();
        strip(&mut residual, self.prime, |j, inc| {
            exps[j] = ((exps[j] as u32 + inc) % self.prime.square()) as u16;
        });
        Ok(ExponentVector {
            prime: self.prime,
            exps,
        })
    }

    /// Exponents `n_k in 0..p`, `1 <= k <= N`, with
    /// `self = prod_k (1 + t^k)^{n_k}` exactly at this precision.
    pub fn factorization(&self) -> Vec<u8> {
        let p = self.prime.get();
        let mut residual = self.coeffs.clone();
        let mut out = vec![0u8; self.precision()];
        for k in 1..residual.len() {
            let c = residual[k];
            if c != 0 {
                out[k - 1] = c;
                for _ in 0..c {
                    div_binomial(&mut residual, k, p);
                }
            }
        }
        out
    }
}

impl fmt::Display for UnitSeries {
    /// Expanded form, e.g. `1+t^3+2*t^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("1")?;
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            if c != 0 {
                f.write_str("+")?;
                write_monomial(f, c as u32, k)?;
            }
        }
        Ok(())
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, c: u32, k: usize) -> fmt::Result {
    if c != 1 {
        write!(f, "{c}*")?;
    }
    if k == 1 {
        f.write_str("t")
    } else {
        write!(f, "t^{k}")
    }
}

/// An element `u(t) = t * unit(t)` of the Nottingham group, with the unit
/// known through `t^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NottinghamElt {
    unit: UnitSeries,
}

impl NottinghamElt {
    pub fn identity(prime: Prime, precision: usize) -> Self {
        NottinghamElt {
            unit: UnitSeries::one(prime, precision),
        }
    }

    /// `t * unit`.
    pub fn from_unit(unit: UnitSeries) -> Self {
        NottinghamElt { unit }
    }

    /// `t (1 + a_1 t + ... + a_N t^N)` from raw coefficients.
    pub fn from_coeffs(prime: Prime, tail: &[i64]) -> Self {
        NottinghamElt {
            unit: UnitSeries::from_coeffs(prime, tail),
        }
    }

    pub(crate) fn from_reduced(prime: Prime, tail: &[u8]) -> Self {
        NottinghamElt {
            unit: UnitSeries::from_reduced(prime, tail),
        }
    }

    /// `t * prod_k (1 + t^k)^{n_k}` at precision `n`; `factors` lists `(k, n_k)`
    /// with arbitrary integer exponents.
    pub fn from_factors(prime: Prime, precision: usize, factors: &[(usize, i64)]) -> Self {
        let mut unit = UnitSeries::one(prime, precision);
        for &(k, e) in factors {
            let f = UnitSeries::basis(prime, k, precision).pow(e);
            unit = unit.mul(&f).expect("same prime and precision");
        }
        NottinghamElt { unit }
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.unit.prime()
    }

    #[inline]
    pub fn precision(&self) -> usize {
        self.unit.precision()
    }

    /// `u(t)/t`.
    pub fn unit(&self) -> &UnitSeries {
        &self.unit
    }

    pub fn is_identity(&self) -> bool {
        self.unit.is_one()
    }

    pub fn truncate(&self, precision: usize) -> Result<Self> {
        Ok(NottinghamElt {
            unit: self.unit.truncate(precision)?,
        })
    }

    /// `w(t) = self(other(t))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.unit.check_same(&other.unit)?;
        let p = self.prime().get();
        // w/t = (v/t) * (u/t)(v(t))
        let inner = subst(&self.unit.coeffs, &other.unit.coeffs, p);
        let mut out = vec![0u8; inner.len()];
        mul_into(&other.unit.coeffs, &inner, &mut out, p);
        Ok(NottinghamElt {
            unit: UnitSeries {
                prime: self.prime(),
                coeffs: out,
            },
        })
    }

    /// Compositional inverse by degreewise back-substitution.
    pub fn inverse(&self) -> Self {
        let prime = self.prime();
        let p = prime.get();
        let n = self.precision();
        let mut w = vec![0u8; n + 1];
        w[0] = 1;
        // The coefficient of t^{k+1} in u(w(t)) is w_k plus terms in lower
        // coefficients of w, so each pass fixes one more degree.
        for k in 1..=n {
            let inner = subst(&self.unit.coeffs[..=k], &w[..=k], p);
            let mut comp = vec![0u8; k + 1];
            mul_into(&w[..=k], &inner, &mut comp, p);
            let c = comp[k] as u32;
            w[k] = ((w[k] as u32 + p - c) % p) as u8;
        }
        NottinghamElt {
            unit: UnitSeries { prime, coeffs: w },
        }
    }

    /// `n_k in 0..p` with `u(t) = t prod_k (1 + t^k)^{n_k}`.
    pub fn factorization(&self) -> Vec<u8> {
        self.unit.factorization()
    }

    /// Product form `t*(1+t^2)^1*(1+t^4)^2`, exact at this precision.
    pub fn product_form(&self) -> String {
        let mut s = String::from("t");
        for (k, &n) in self.factorization().iter().enumerate() {
            if n != 0 {
                if k == 0 {
                    s.push_str(&format!("*(1+t)^{n}"));
                } else {
                    s.push_str(&format!("*(1+t^{})^{n}", k + 1));
                }
            }
        }
        s
    }

    /// Expanded form `t*(1+t^2+2*t^4)`.
    pub fn expanded_form(&self) -> String {
        if self.is_identity() {
            "t".to_string()
        } else {
            format!("t*({})", self.unit)
        }
    }
}

impl fmt::Display for NottinghamElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.product_form())
    }
}

/// Exponents `e_j mod p^2` over the `p`-coprime indices `j <= m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    prime: Prime,
    /// Indexed by `j`, length `m + 1`; zero wherever `p | j`.
    exps: Vec<u16>,
}

impl ExponentVector {
    pub fn zero(prime: Prime, bound: usize) -> Self {
        ExponentVector {
            prime,
            exps: vec![0; bound + 1],
        }
    }

    /// Build from `(j, e_j)` pairs; rejects `p | j`, `j == 0` and `j > m`.
    pub fn from_pairs(
        prime: Prime,
        bound: usize,
        pairs: impl IntoIterator<Item = (usize, i64)>,
    ) -> Result<Self> {
        let mut v = Self::zero(prime, bound);
        for (j, e) in pairs {
            if j == 0 || j > bound || prime.divides(j as u32) {
                return Err(usage(format!(
                    "index {j} is not a p-coprime index in 1..={bound}"
                )));
            }
            v.exps[j] = prime.mod_psq(v.exps[j] as i64 + e) as u16;
        }
        Ok(v)
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn bound(&self) -> usize {
        self.exps.len() - 1
    }

    /// `e_j`; zero for absent or out-of-range indices.
    pub fn get(&self, j: usize) -> u32 {
        self.exps.get(j).map_or(0, |&e| e as u32)
    }

    /// Nonzero entries in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e != 0)
            .map(|(j, &e)| (j, e as u32))
    }

    /// `prod E_j^{e_j}` at precision `n`, exponents taken in `0..p^2`.
    pub fn recompose(&self, precision: usize) -> Result<UnitSeries> {
        if precision < self.bound() {
            return Err(usage(format!(
                "precision {precision} is below the bound {}",
                self.bound()
            )));
        }
        let mut acc = UnitSeries::one(self.prime, precision);
        for (j, e) in self.iter() {
            let f = UnitSeries::basis(self.prime, j, precision).pow(e as i64);
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }
}

// Slice kernels. All slices hold a constant term at index 0 and are truncated
// at their length; values are residues mod p.

/// `out = a * b` truncated to `out.len()`.
pub(crate) fn mul_into(a: &[u8], b: &[u8], out: &mut [u8], p: u32) {
    for (k, slot) in out.iter_mut().enumerate() {
        let mut acc = 0u32;
        let lo = k.saturating_sub(b.len() - 1);
        for i in lo..=k.min(a.len() - 1) {
            acc += a[i] as u32 * b[k - i] as u32;
        }
        *slot = (acc % p) as u8;
    }
}

/// Inverse of a series with constant term 1.
pub(crate) fn inverse(a: &[u8], p: u32) -> Vec<u8> {
    debug_assert_eq!(a[0], 1);
    let n = a.len();
    let mut b = vec![0u8; n];
    b[0] = 1;
    for k in 1..n {
        let mut acc = 0u32;
        for i in 1..=k {
            acc += a[i] as u32 * b[k - i] as u32;
        }
        b[k] = ((p - acc % p) % p) as u8;
    }
    b
}

/// `out = a^e` truncated to `out.len()` (which must not exceed `a.len()`).
///
/// In characteristic `p`, `a^(p^i)` is `a(t^(p^i))`, so the exponent is
/// consumed one base-`p` digit at a time.
pub(crate) fn pow_into(a: &[u8], mut e: u64, out: &mut [u8], p: u32) {
    let n = out.len();
    out.fill(0);
    out[0] = 1;
    let mut base = a[..n].to_vec();
    let mut tmp = vec![0u8; n];
    let mut stride = 1usize;
    while e > 0 && stride < n {
        let digit = e % p as u64;
        for _ in 0..digit {
            mul_into(out, &base, &mut tmp, p);
            out.copy_from_slice(&tmp);
        }
        e /= p as u64;
        stride = stride.saturating_mul(p as usize);
        // base <- a(t^stride)
        base.fill(0);
        for (k, &c) in a.iter().enumerate() {
            match k.checked_mul(stride) {
                Some(d) if d < n => base[d] = c,
                _ => break,
            }
        }
    }
}

/// `f(u(t))` where `f` and `u/t` are given as unit slices; truncated to
/// `u_unit.len()` (and to `f.len()`, which must be at least as long).
pub(crate) fn subst(f: &[u8], u_unit: &[u8], p: u32) -> Vec<u8> {
    let n = u_unit.len();
    let mut out = vec![0u8; n];
    out[0] = 1;
    // power = (u/t)^k, only degrees <= n-1-k are ever needed
    let mut power = u_unit.to_vec();
    let mut tmp = vec![0u8; n];
    for k in 1..n.min(f.len()) {
        if k > 1 {
            let keep = n - k;
            mul_into(&power[..keep], &u_unit[..keep], &mut tmp[..keep], p);
            power[..keep].copy_from_slice(&tmp[..keep]);
        }
        let c = f[k] as u32;
        if c != 0 {
            for d in 0..n - k {
                out[k + d] = ((out[k + d] as u32 + c * power[d] as u32) % p) as u8;
            }
        }
    }
    out
}

/// Divide in place by `1 + t^k`.
#[inline]
pub(crate) fn div_binomial(r: &mut [u8], k: usize, p: u32) {
    for i in k..r.len() {
        let v = r[i] as u32 + p - r[i - k] as u32;
        r[i] = (v % p) as u8;
    }
}

/// Greedy lowest-degree-first strip of a unit into the `E_j` basis. Calls
/// `emit(j, c * p^s)` for each degree `k = p^s j` (s < 2) with nonzero
/// residual coefficient `c`; deeper contributions vanish mod `p^2`.
pub(crate) fn strip(residual: &mut [u8], prime: Prime, mut emit: impl FnMut(usize, u32)) {
    let p = prime.get();
    for k in 1..residual.len() {
        let c = residual[k];
        if c == 0 {
            continue;
        }
        let (j, s) = split_p_power(k, p as usize);
        if s < 2 {
            emit(j, c as u32 * if s == 1 { p } else { 1 });
        }
        // E_j^{-c p^s} = (1 + t^k)^{-c}
        for _ in 0..c {
            div_binomial(residual, k, p);
        }
    }
}

/// `k = p^s * j` with `p ∤ j`.
#[inline]
pub(crate) fn split_p_power(mut k: usize, p: usize) -> (usize, u32) {
    let mut s = 0;
    while k.is_multiple_of(p) {
        k /= p;
        s += 1;
    }
    (k, s)
}
