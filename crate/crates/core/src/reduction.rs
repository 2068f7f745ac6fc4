//! Constructive reduction of a character of type `<l, m>` to reduced form.
//!
//! Stage one kills the unit digits below `l` with elements
//! `t (1 + c t^{l-i}) (1 + t^l)^f`, sweeping `i` downwards. Stage two kills
//! the `p`-digits below the window `[m - l, m]` with
//! `t (1 + t^{l+j})^d (1 + t^m)^e`. Every step is a strict equivalence with
//! respect to the character it is applied to, so the accumulated element is
//! a witness for the whole chain.

use std::fmt;

use serde::Serialize;

use crate::characters::{basis_indices, Character, ReducedForm};
use crate::error::{Error, Result};
use crate::prime::Prime;
use crate::series::{NottinghamElt, UnitSeries};

/// A group element certifying `ψ = u·χ` together with the cached kernel
/// value `χ(u(t)/t)`, which is `0 mod p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub u: NottinghamElt,
    pub kernel_value: u32,
}

impl Witness {
    pub fn identity(prime: Prime, precision: usize) -> Self {
        Witness {
            u: NottinghamElt::identity(prime, precision),
            kernel_value: 0,
        }
    }

    /// Evaluate the kernel value for `u` against `chi`.
    pub fn for_element(chi: &Character, u: NottinghamElt) -> Result<Self> {
        let kernel_value = chi.eval(u.unit())?;
        Ok(Witness { u, kernel_value })
    }

    /// Apply `self` first and then `next`: the combined element is
    /// `next(self(t))`, and the kernel values add.
    pub fn then(&self, next: &Witness, prime: Prime) -> Result<Witness> {
        Ok(Witness {
            u: next.u.compose(&self.u)?,
            kernel_value: (self.kernel_value + next.kernel_value) % prime.square(),
        })
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.u)
    }
}

/// Outcome of [`verify_witness`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum WitnessCheck {
    Valid,
    /// `u·χ` and `ψ` disagree at basis index `index`.
    ActionMismatch { index: usize, acted: u32, expected: u32 },
    /// `χ(u/t) ≢ 0 mod p`.
    KernelViolation { value: u32 },
    /// Different primes or too little precision.
    Incompatible { reason: String },
}

impl WitnessCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, WitnessCheck::Valid)
    }
}

/// Whether `u` certifies `χ ≃ ψ`: `u·χ = ψ` and `χ(u/t) ≡ 0 mod p`.
pub fn verify_witness(chi: &Character, psi: &Character, u: &NottinghamElt) -> WitnessCheck {
    if chi.prime() != psi.prime() || chi.prime() != u.prime() {
        return WitnessCheck::Incompatible {
            reason: "prime mismatch".into(),
        };
    }
    let acted = match chi.act(u) {
        Ok(a) => a,
        Err(e) => {
            return WitnessCheck::Incompatible {
                reason: e.to_string(),
            }
        }
    };
    if acted != *psi {
        let m = acted.bound().max(psi.bound());
        let index = basis_indices(chi.prime(), m)
            .find(|&j| acted.coeff(j) != psi.coeff(j))
            .unwrap_or(0);
        return WitnessCheck::ActionMismatch {
            index,
            acted: acted.coeff(index),
            expected: psi.coeff(index),
        };
    }
    let value = match chi.eval(u.unit()) {
        Ok(v) => v,
        Err(e) => {
            return WitnessCheck::Incompatible {
                reason: e.to_string(),
            }
        }
    };
    if value % chi.prime().get() != 0 {
        return WitnessCheck::KernelViolation { value };
    }
    WitnessCheck::Valid
}

/// Whether no unit digit survives below the break `l`.
pub fn is_stage_one_form(chi: &Character) -> bool {
    let Some(l) = chi.unit_index() else {
        return false;
    };
    let p = chi.prime().get();
    (1..l).all(|i| chi.coeff(i).is_multiple_of(p))
}

/// Kill the unit digits below `l`.
pub fn reduce_mod_p(chi: &Character) -> Result<(Character, Witness)> {
    let ty = chi.break_sequence()?;
    let prime = chi.prime();
    let p = prime.get() as i64;
    let (l, m) = (ty.l, ty.m);
    let x_l = (chi.coeff(l) as i64) % p;
    let inv = |a: i64| prime.inv_mod_p(a).expect("unit") as i64;

    let mut current = chi.clone();
    let mut witness = Witness::identity(prime, m);
    for i in (1..l).rev().filter(|&i| i as i64 % p != 0) {
        let x_i = current.coeff(i) as i64 % p;
        if x_i == 0 {
            continue;
        }
        // new digit at i is x_i + i c x_l mod p
        let c = prime.mod_p(-x_i * inv(i as i64 * x_l)) as i64;
        let shift = UnitSeries::binomial(prime, l - i, c, m);
        // compensate the kernel with (1 + t^l)^f
        let kappa = current.eval(&shift)? as i64;
        let f = prime.mod_p(-kappa * inv(x_l)) as i64;
        let step_unit = shift.mul(&UnitSeries::basis(prime, l, m).pow(f))?;
        let step = Witness::for_element(&current, NottinghamElt::from_unit(step_unit))?;
        debug_assert_eq!(step.kernel_value as i64 % p, 0);
        current = current.act(&step.u)?;
        debug_assert_eq!(current.coeff(i) as i64 % p, 0);
        witness = witness.then(&step, prime)?;
    }
    Ok((current, witness))
}

/// Kill the `p`-digits below the window `[m - l, m]` of a stage-one
/// character, leaving the window untouched.
pub fn clear_low_p_part(chi: &Character) -> Result<(Character, Witness)> {
    if !is_stage_one_form(chi) {
        return Err(Error::Precondition(format!(
            "{chi} has unit digits below its break"
        )));
    }
    let ty = chi.break_sequence()?;
    let prime = chi.prime();
    let p = prime.get() as i64;
    let (l, m) = (ty.l, ty.m);
    let x_l = chi.coeff(l) as i64 % p;
    let inv = |a: i64| prime.inv_mod_p(a).expect("unit") as i64;
    let e_m = UnitSeries::basis(prime, m, m);

    let mut current = chi.clone();
    let mut witness = Witness::identity(prime, m);
    for j in 1..m - l {
        let k = m - l - j;
        if k as i64 % p == 0 {
            continue;
        }
        // χ(E_m) = p b_m, also when m = lp (then b_m = x_l)
        let b_m = current.eval(&e_m)? as i64 / p;
        let c_k = current.coeff(k) as i64;
        let b_k = (c_k - if k == l { x_l } else { 0 }) / p;
        if b_k == 0 {
            continue;
        }
        let d = prime.mod_p(-b_k * inv(k as i64 * b_m)) as i64;
        let lead = UnitSeries::basis(prime, l + j, m).pow(d);
        let kappa = current.eval(&lead)? as i64;
        debug_assert_eq!(kappa % p, 0);
        let e = prime.mod_p(-(kappa / p) * inv(b_m)) as i64;
        let step_unit = lead.mul(&e_m.pow(e))?;
        let step = Witness::for_element(&current, NottinghamElt::from_unit(step_unit))?;
        debug_assert_eq!(step.kernel_value, 0);
        current = current.act(&step.u)?;
        debug_assert_eq!(current.coeff(k) as i64 - if k == l { x_l } else { 0 }, 0);
        witness = witness.then(&step, prime)?;
    }
    Ok((current, witness))
}

/// Both stages: a reduced form strictly equivalent to `chi` and its witness.
pub fn reduce(chi: &Character) -> Result<(ReducedForm, Witness)> {
    let (stage_one, w1) = reduce_mod_p(chi)?;
    let (reduced, w2) = clear_low_p_part(&stage_one)?;
    let witness = w1.then(&w2, chi.prime())?;
    Ok((ReducedForm::from_character(&reduced)?, witness))
}
