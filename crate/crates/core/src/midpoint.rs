//! Half-period structure of even-period expansions.
//!
//! When `T_D = 2L` the states at `k = L` and `k = L + 1` satisfy
//! `P_{L+1} = P_L` and `4 Q_L Q_{L+1} = 4D - a_L^2 Q_L^2` for every
//! non-square `D`. For `D = p` or `2p` the midpoint denominator is exactly 2,
//! which pins `P_L = a_L` to `{isqrt(D) - 1, isqrt(D)}` with the parity of `D`.

use std::fmt;

use crate::cf::{expand_sqrt, SqrtExpansion};
use crate::error::{Error, Result};
use crate::int::{is_prime, Int};

/// Which radicand a prime `p` stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Form {
    /// `D = p`
    P,
    /// `D = 2p`
    TwoP,
}

impl Form {
    pub const BOTH: [Form; 2] = [Form::P, Form::TwoP];

    pub fn radicand(self, p: u64) -> u64 {
        match self {
            Form::P => p,
            Form::TwoP => 2 * p,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Form::P => "p",
            Form::TwoP => "2p",
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Form {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p" => Ok(Form::P),
            "2p" => Ok(Form::TwoP),
            other => Err(Error::Precondition(format!("unknown form {other:?}"))),
        }
    }
}

/// States at the middle of an even period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MidpointData<Z> {
    pub d: Z,
    /// Half period `L = T / 2`.
    pub l: usize,
    pub p_l: Z,
    pub q_l: Z,
    pub a_l: Z,
    pub q_next: Z,
    pub floor_sqrt: Z,
}

/// Midpoint of an expansion that carries its trace; `None` for odd periods.
///
/// A failed half-period identity is reported as [`Error::Internal`].
pub fn midpoint_of<Z: Int>(exp: &SqrtExpansion<Z>) -> Result<Option<MidpointData<Z>>> {
    let t = exp.t();
    if t % 2 == 1 {
        return Ok(None);
    }
    let trace = exp.trace()?;
    let l = t / 2;
    let (at, next) = (&trace[l - 1], &trace[l]);
    if next.p != at.p {
        return Err(Error::Internal(format!(
            "sqrt({}): P_(L+1) = {} differs from P_L = {}",
            exp.d, next.p, at.p
        )));
    }
    let four = Z::of(4);
    let lhs = four.clone() * at.q.clone() * next.q.clone();
    let rhs = four * exp.d.clone() - at.a.clone() * at.a.clone() * at.q.clone() * at.q.clone();
    if lhs != rhs {
        return Err(Error::Internal(format!(
            "sqrt({}): 4 Q_L Q_(L+1) = {lhs} but 4D - a_L^2 Q_L^2 = {rhs}",
            exp.d
        )));
    }
    Ok(Some(MidpointData {
        d: exp.d.clone(),
        l,
        p_l: at.p.clone(),
        q_l: at.q.clone(),
        a_l: at.a.clone(),
        q_next: next.q.clone(),
        floor_sqrt: exp.a0.clone(),
    }))
}

pub fn midpoint_data<Z: Int>(d: &Z) -> Result<Option<MidpointData<Z>>> {
    midpoint_of(&expand_sqrt(d)?)
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{p} is not prime")))
    }
}

/// `Q_L = 2`, `P_L = a_L ∈ {isqrt(D) - 1, isqrt(D)}` and `a_L ≡ D (mod 2)`.
pub fn t2_holds(m: &MidpointData<i64>) -> bool {
    m.q_l == 2
        && m.p_l == m.a_l
        && (m.a_l == m.floor_sqrt || m.a_l == m.floor_sqrt - 1)
        && (m.a_l - m.d) % 2 == 0
}

/// Midpoint facts for `D = p` or `2p`; odd periods are a precondition error.
pub fn verify_t2(p: u64, form: Form) -> Result<bool> {
    check_prime(p)?;
    let d = form.radicand(p) as i64;
    match midpoint_data(&d)? {
        Some(m) => Ok(t2_holds(&m)),
        None => Err(Error::Precondition(format!("T_{d} is odd"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityClaims {
    pub even: bool,
    pub div4: bool,
}

/// Period-parity prediction from `p mod 8` next to the observed period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityVerdict {
    pub d: u64,
    pub t: usize,
    pub predicted: ParityClaims,
    pub observed: ParityClaims,
    pub agree: bool,
}

/// `T_p` even iff `p ≡ 3 (mod 4)`, `4 | T_p` iff `p ≡ 7 (mod 8)`.
pub fn parity_verdict(p: u64, t: usize) -> ParityVerdict {
    let predicted = ParityClaims {
        even: p % 4 == 3,
        div4: p % 8 == 7,
    };
    let observed = ParityClaims {
        even: t % 2 == 0,
        div4: t % 4 == 0,
    };
    ParityVerdict {
        d: p,
        t,
        predicted,
        observed,
        agree: predicted == observed,
    }
}

/// # Panics
/// If `p` is not an odd prime.
pub fn verify_c1_c2(p: u64) -> ParityVerdict {
    assert!(p > 2 && is_prime(p), "{p} is not an odd prime");
    let exp = crate::cf::expand_sqrt_with(&(p as i64), crate::cf::Trace::Drop)
        .expect("primes are not squares");
    parity_verdict(p, exp.t())
}

/// No trace denominator is `≡ 2 (mod 4)` over one period.
pub fn q_mod4_holds(exp: &SqrtExpansion<i64>) -> Result<bool> {
    Ok(exp.trace()?.iter().all(|s| s.q % 4 != 2))
}

pub fn q_mod4_scan(p: u64) -> Result<bool> {
    check_prime(p)?;
    if p % 4 != 1 {
        return Err(Error::Precondition(format!("{p} is not 1 mod 4")));
    }
    q_mod4_holds(&expand_sqrt(&(p as i64))?)
}
