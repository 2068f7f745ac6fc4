use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};

/// Largest supported characteristic.
pub const MAX_PRIME: u32 = 31;

/// A small prime `p` together with the cached modulus `p^2` of the character
/// values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime {
    p: u32,
    psq: u32,
}

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if !(2..=MAX_PRIME).contains(&p) {
            return Err(usage(format!("prime must lie in 2..={MAX_PRIME}, got {p}")));
        }
        if !is_prime(p) {
            return Err(usage(format!("{p} is not prime")));
        }
        Ok(Prime { p, psq: p * p })
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.p
    }

    /// The modulus `p^2` of character values.
    #[inline]
    pub fn square(self) -> u32 {
        self.psq
    }

    #[inline]
    pub fn divides(self, n: u32) -> bool {
        n.is_multiple_of(self.p)
    }

    /// Reduce an arbitrary integer into `0..p`.
    #[inline]
    pub fn mod_p(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    /// Reduce an arbitrary integer into `0..p^2`.
    #[inline]
    pub fn mod_psq(self, a: i64) -> u32 {
        a.rem_euclid(self.psq as i64) as u32
    }

    /// Inverse of `a` in `F_p`, or `None` when `p | a`.
    pub fn inv_mod_p(self, a: i64) -> Option<u32> {
        let a = self.mod_p(a);
        if a == 0 {
            return None;
        }
        // Fermat: a^(p-2).
        let mut acc = 1u32;
        let mut base = a;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Some(acc)
    }

    /// `p`-adic valuation of a positive integer.
    pub fn valuation(self, mut n: u64) -> u32 {
        debug_assert!(n > 0);
        let p = self.p as u64;
        let mut v = 0;
        while n.is_multiple_of(p) {
            n /= p;
            v += 1;
        }
        v
    }

    /// `p^e` as an exact integer; saturates at `u128::MAX`.
    pub fn power(self, e: u32) -> u128 {
        (self.p as u128).checked_pow(e).unwrap_or(u128::MAX)
    }
}

impl TryFrom<u32> for Prime {
    type Error = crate::Error;

    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.p
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.p)
    }
}

/// Deterministic trial division; the inputs here never exceed a few dozen.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
