//! Continued fraction expansion of quadratic surds `(P + sqrt(D)) / Q`.
//!
//! The automaton state is the pair `(P, Q)`; one step emits the partial
//! quotient `a = floor((P + sqrt(D)) / Q)` and moves to
//! `P' = a Q - P`, `Q' = (D - P'^2) / Q`. Everything is exact integer
//! arithmetic; `sqrt(D)` only ever enters through `isqrt(D)`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::int::{is_square, isqrt, Int};

/// The number `(p + sqrt(d)) / q` with `q | d - p^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticSurd<Z> {
    d: Z,
    p: Z,
    q: Z,
}

impl<Z: Int> QuadraticSurd<Z> {
    /// Builds a normalized surd; rejects square `d`, `q = 0` and `q ∤ d - p^2`.
    pub fn new(d: Z, p: Z, q: Z) -> Result<Self> {
        if d.is_negative() || is_square(&d) {
            return Err(Error::PerfectSquare(d.to_string()));
        }
        if !Z::radicand_fits(&d) {
            return Err(Error::RadicandTooLarge(d.to_string()));
        }
        if q.is_zero() || !(d.clone() - p.clone() * p.clone()).is_multiple_of(&q) {
            return Err(Error::NotNormalized {
                d: d.to_string(),
                p: p.to_string(),
                q: q.to_string(),
            });
        }
        Ok(Self { d, p, q })
    }

    pub fn d(&self) -> &Z {
        &self.d
    }

    pub fn p(&self) -> &Z {
        &self.p
    }

    pub fn q(&self) -> &Z {
        &self.q
    }

    /// One step of the expansion: the partial quotient and the next state.
    pub fn step(&self) -> (Z, QuadraticSurd<Z>) {
        let s = isqrt(&self.d);
        let (a, p, q) = step_raw(&self.d, &s, &self.p, &self.q);
        (
            a,
            QuadraticSurd {
                d: self.d.clone(),
                p,
                q,
            },
        )
    }
}

/// Raw state transition with `s = isqrt(d)` precomputed.
///
/// For `q > 0`, `floor((p + sqrt d)/q) = floor((p + s)/q)`. For `q < 0` the
/// irrational numerator lies strictly inside `(p + s, p + s + 1)`, which
/// gives `floor((p + s + 1)/q)`.
fn step_raw<Z: Int>(d: &Z, s: &Z, p: &Z, q: &Z) -> (Z, Z, Z) {
    let a = if q.is_positive() {
        (p.clone() + s.clone()).div_floor(q)
    } else {
        (p.clone() + s.clone() + Z::one()).div_floor(q)
    };
    let p_next = a.clone() * q.clone() - p.clone();
    let q_next = (d.clone() - p_next.clone() * p_next.clone()) / q.clone();
    (a, p_next, q_next)
}

/// One entry `(P_k, Q_k, a_k)` of the expansion trace of `sqrt(D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep<Z> {
    pub p: Z,
    pub q: Z,
    pub a: Z,
}

/// Whether [`expand_sqrt_with`] keeps the per-step trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trace {
    Keep,
    Drop,
}

/// `sqrt(D) = [a0; a_1, ..., a_T]` with the period written out once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SqrtExpansion<Z> {
    pub d: Z,
    pub a0: Z,
    /// `a_1 .. a_T`; the last letter is `2 a0`.
    pub period: Vec<Z>,
    /// `trace[k - 1] = (P_k, Q_k, a_k)` for `k = 1 ..= T`, when kept.
    pub trace: Option<Vec<TraceStep<Z>>>,
}

impl<Z: Int> SqrtExpansion<Z> {
    /// Period length `T_D`.
    pub fn t(&self) -> usize {
        self.period.len()
    }

    /// `a_k` for `k >= 0`, reading the period cyclically.
    pub fn letter(&self, k: usize) -> &Z {
        if k == 0 {
            &self.a0
        } else {
            &self.period[(k - 1) % self.period.len()]
        }
    }

    pub fn trace(&self) -> Result<&[TraceStep<Z>]> {
        self.trace
            .as_deref()
            .ok_or_else(|| Error::Precondition("expansion was computed without a trace".into()))
    }

    /// Checks the structural facts every expansion of a square root obeys.
    pub fn check_invariants(&self) -> Result<()> {
        let t = self.period.len();
        let fail = |what: &str| Err(Error::Internal(format!("sqrt({}): {what}", self.d)));
        if self.a0 != isqrt(&self.d) {
            return fail("a0 differs from isqrt(D)");
        }
        if self.period[t - 1] != self.a0.clone() * Z::of(2) {
            return fail("last letter is not 2 a0");
        }
        for j in 1..t {
            if self.period[j - 1] != self.period[t - j - 1] {
                return fail("period is not palindromic");
            }
        }
        if let Some(trace) = &self.trace {
            for (k, st) in trace.iter().enumerate() {
                let rem = self.d.clone() - st.p.clone() * st.p.clone();
                if !st.p.is_positive() || !st.q.is_positive() || !rem.is_positive() {
                    return fail("trace entry out of range");
                }
                if !rem.is_multiple_of(&st.q) {
                    return fail("Q_k does not divide D - P_k^2");
                }
                if st.q.is_one() != (k + 1 == t) {
                    return fail("Q_k = 1 before the end of the period");
                }
            }
        }
        Ok(())
    }
}

/// Expands `sqrt(D)` keeping the trace.
pub fn expand_sqrt<Z: Int>(d: &Z) -> Result<SqrtExpansion<Z>> {
    expand_sqrt_with(d, Trace::Keep)
}

/// Expands `sqrt(D)` from `(P, Q) = (0, 1)` until the first `k >= 1`
/// with `Q_k = 1`.
pub fn expand_sqrt_with<Z: Int>(d: &Z, trace: Trace) -> Result<SqrtExpansion<Z>> {
    if d < &Z::of(2) || is_square(d) {
        return Err(Error::PerfectSquare(d.to_string()));
    }
    if !Z::radicand_fits(d) {
        return Err(Error::RadicandTooLarge(d.to_string()));
    }
    let a0 = isqrt(d);
    let mut period = Vec::new();
    let mut steps = (trace == Trace::Keep).then(Vec::new);
    // Q_{k+1} = Q_{k-1} + a_k (P_k - P_{k+1}) avoids the second division.
    let mut p = a0.clone();
    let mut q = d.clone() - a0.clone() * a0.clone();
    let mut q_prev = Z::one();
    loop {
        let a = (a0.clone() + p.clone()) / q.clone();
        if let Some(steps) = steps.as_mut() {
            steps.push(TraceStep {
                p: p.clone(),
                q: q.clone(),
                a: a.clone(),
            });
        }
        let done = q.is_one();
        period.push(a.clone());
        if done {
            break;
        }
        let p_next = a.clone() * q.clone() - p.clone();
        let q_next = q_prev + a * (p - p_next.clone());
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    Ok(SqrtExpansion {
        d: d.clone(),
        a0,
        period,
        trace: steps,
    })
}

/// Continued fraction of a general surd as (preperiod, period).
///
/// The cycle is found at the first repeated `(P, Q)` state, which makes
/// the preperiod minimal.
pub fn expand_surd<Z: Int>(s: &QuadraticSurd<Z>) -> (Vec<Z>, Vec<Z>) {
    let (pre, period, _) = expand_surd_states(s);
    (pre, period)
}

/// Like [`expand_surd`], also returning the state at which the period starts.
pub fn expand_surd_states<Z: Int>(s: &QuadraticSurd<Z>) -> (Vec<Z>, Vec<Z>, QuadraticSurd<Z>) {
    let root = isqrt(&s.d);
    let mut seen: HashMap<(Z, Z), usize> = HashMap::new();
    let mut letters = Vec::new();
    let (mut p, mut q) = (s.p.clone(), s.q.clone());
    loop {
        if let Some(&start) = seen.get(&(p.clone(), q.clone())) {
            let period = letters.split_off(start);
            let state = QuadraticSurd {
                d: s.d.clone(),
                p,
                q,
            };
            return (letters, period, state);
        }
        seen.insert((p.clone(), q.clone()), letters.len());
        let (a, p_next, q_next) = step_raw(&s.d, &root, &p, &q);
        letters.push(a);
        p = p_next;
        q = q_next;
    }
}

/// Convergent `p_i / q_i = [a0; a_1, ..., a_i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub index: i64,
    pub p: BigInt,
    pub q: BigInt,
}

/// Iterator over the convergents of `sqrt(D)` starting at index -1.
#[derive(Debug, Clone)]
pub struct Convergents<'a, Z> {
    exp: &'a SqrtExpansion<Z>,
    next: i64,
    cur: (BigInt, BigInt),
    prev: (BigInt, BigInt),
}

impl<'a, Z: Int> Convergents<'a, Z> {
    pub fn new(exp: &'a SqrtExpansion<Z>) -> Self {
        Self {
            exp,
            next: -1,
            // (p_{-1}, q_{-1}) = (1, 0), (p_{-2}, q_{-2}) = (0, 1)
            cur: (BigInt::one(), BigInt::zero()),
            prev: (BigInt::zero(), BigInt::one()),
        }
    }
}

impl<Z: Int> Iterator for Convergents<'_, Z> {
    type Item = Convergent;

    fn next(&mut self) -> Option<Convergent> {
        if self.next >= 0 {
            let a = self
                .exp
                .letter(self.next as usize)
                .to_bigint()
                .expect("letters are integers");
            let p = &a * &self.cur.0 + &self.prev.0;
            let q = &a * &self.cur.1 + &self.prev.1;
            self.prev = std::mem::replace(&mut self.cur, (p, q));
        }
        let out = Convergent {
            index: self.next,
            p: self.cur.0.clone(),
            q: self.cur.1.clone(),
        };
        self.next += 1;
        Some(out)
    }
}

/// Convergents of `sqrt(D)` for indices `-1 ..= n`.
pub fn convergents<Z: Int>(d: &Z, n: usize) -> Result<Vec<Convergent>> {
    let exp = expand_sqrt_with(d, Trace::Drop)?;
    Ok(Convergents::new(&exp).take(n + 2).collect())
}

/// Number of `k` in `1..=T` with `a_k = a`.
pub fn occurrence_count<Z: Int>(exp: &SqrtExpansion<Z>, a: &Z) -> usize {
    exp.period.iter().filter(|x| *x == a).count()
}

/// Checks `p_{k-1}^2 - D q_{k-1}^2 = (-1)^k Q_k` for `k = 1 ..= T`.
pub fn norm_identity_check<Z: Int>(d: &Z) -> Result<bool> {
    let exp = expand_sqrt(d)?;
    Ok(norm_identity_holds(&exp))
}

pub(crate) fn norm_identity_holds<Z: Int>(exp: &SqrtExpansion<Z>) -> bool {
    let Some(trace) = exp.trace.as_ref() else {
        return false;
    };
    let d = exp.d.to_bigint().expect("integer");
    Convergents::new(exp)
        .skip(1)
        .zip(trace)
        .enumerate()
        .all(|(i, (c, st))| {
            let k = i + 1;
            let q = st.q.to_bigint().expect("integer");
            let rhs = if k % 2 == 0 { q } else { -q };
            &c.p * &c.p - &d * &c.q * &c.q == rhs
        })
}
