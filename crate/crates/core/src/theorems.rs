//! Predicted classifications for square roots of `p` and `2p`, checked
//! against actual expansions.
//!
//! Every check comes in two flavours: a convenience function taking the
//! radicand, and an `*_on` function taking a precomputed expansion so that
//! range scans expand each radicand once.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::cf::{expand_sqrt, expand_sqrt_with, Convergents, SqrtExpansion, Trace};
use crate::continuant::continuant_of_span;
use crate::error::{Error, Result};
use crate::int::{is_prime, is_square, isqrt_u64, primes_between};
use crate::midpoint::{midpoint_of, Form};

/// Statement identifiers used in scan output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoremId {
    Ta,
    Tb,
    Ta2,
    C2,
    T2,
    C3,
    Pell,
    Mod8,
    Pp,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::Ta,
        TheoremId::Tb,
        TheoremId::Ta2,
        TheoremId::C2,
        TheoremId::T2,
        TheoremId::C3,
        TheoremId::Pell,
        TheoremId::Mod8,
        TheoremId::Pp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Ta => "TA",
            TheoremId::Tb => "TB",
            TheoremId::Ta2 => "TA2",
            TheoremId::C2 => "C2",
            TheoremId::T2 => "T2",
            TheoremId::C3 => "C3",
            TheoremId::Pell => "PELL",
            TheoremId::Mod8 => "MOD8",
            TheoremId::Pp => "PP",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Precondition(format!("unknown theorem id {s:?}")))
    }
}

/// `Some((p, form))` when `d = p` or `d = 2p` with `p` prime.
pub fn prime_form(d: u64) -> Option<(u64, Form)> {
    if is_prime(d) {
        Some((d, Form::P))
    } else if d % 2 == 0 && is_prime(d / 2) {
        Some((d / 2, Form::TwoP))
    } else {
        None
    }
}

fn expansion_of(d: u64) -> Result<SqrtExpansion<i64>> {
    expand_sqrt(&i64::try_from(d).map_err(|_| Error::OutOfScope(d.to_string()))?)
}

// ---------------------------------------------------------------------------
// Odd occurrence counts

/// Which interval clause produced an odd-count prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaClause {
    /// odd `a`, `p ≡ 3 (mod 4)`, `a^2 < p < (a+2)^2`
    OddA,
    /// even `a`, `a^2/4 < p < (a+2)^2/4`
    EvenA,
    /// `D = 2p`, even `a`, `a^2/8 < p < (a+2)^2/8`
    TwoPEighth,
    /// `D = 2p`, even `a`, `a^2/2 < p < (a+2)^2/2` and `2 | T_{2p}`
    TwoPHalfEvenPeriod,
    /// no clause fired: even count predicted
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TaClaim {
    pub a: u64,
    pub p: u64,
    pub form: Form,
    pub predicted_odd: bool,
    pub witness: TaClause,
}

/// Strict `lo < scale * p < hi` for `lo = a^2`, `hi = (a+2)^2`.
fn inside(a: u64, p: u64, scale: u64) -> bool {
    let (a, p, scale) = (a as u128, p as u128, scale as u128);
    a * a < scale * p && scale * p < (a + 2) * (a + 2)
}

/// Prediction given the parity of `T_{2p}` on demand (only the last
/// `2p` clause consults it).
pub fn predict_ta_with(
    a: u64,
    p: u64,
    form: Form,
    two_divides_t: impl FnOnce() -> bool,
) -> TaClaim {
    let clause = match form {
        Form::P if a % 2 == 1 => {
            if p % 4 == 3 && inside(a, p, 1) {
                TaClause::OddA
            } else {
                TaClause::None
            }
        }
        Form::P => {
            if inside(a, p, 4) {
                TaClause::EvenA
            } else {
                TaClause::None
            }
        }
        Form::TwoP if a % 2 == 1 => TaClause::None,
        Form::TwoP => {
            if inside(a, p, 8) {
                TaClause::TwoPEighth
            } else if inside(a, p, 2) && two_divides_t() {
                TaClause::TwoPHalfEvenPeriod
            } else {
                TaClause::None
            }
        }
    };
    TaClaim {
        a,
        p,
        form,
        predicted_odd: clause != TaClause::None,
        witness: clause,
    }
}

/// # Errors
/// `p` not prime, `a = 0`, or a square radicand.
pub fn predict_ta(a: u64, p: u64, form: Form) -> Result<TaClaim> {
    if !is_prime(p) || a == 0 {
        return Err(Error::Precondition(format!("need prime p and a >= 1, got p={p} a={a}")));
    }
    let mut err = None;
    let claim = predict_ta_with(a, p, form, || match expansion_of(2 * p) {
        Ok(e) => e.t() % 2 == 0,
        Err(e) => {
            err = Some(e);
            false
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(claim),
    }
}

/// Predicted parity equals the observed parity of the occurrence count.
pub fn verify_ta(a: u64, p: u64, form: Form) -> Result<bool> {
    let claim = predict_ta(a, p, form)?;
    let exp = expansion_of(form.radicand(p))?;
    let count = exp.period.iter().filter(|&&x| x as u64 == a).count();
    Ok(claim.predicted_odd == (count % 2 == 1))
}

/// Result of checking every `a` up to a bound on one expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaScan {
    pub checked: u64,
    /// Letters observed an odd number of times.
    pub odd_letters: Vec<u64>,
    /// Letters whose predicted parity disagrees with the observation.
    pub mismatches: Vec<u64>,
}

/// Checks all `a` in `1..=max(max letter, 2 isqrt(2p))`; zero occurrences
/// count as even.
pub fn ta_scan_on(exp: &SqrtExpansion<i64>, p: u64, form: Form) -> TaScan {
    let max_letter = exp.period.iter().copied().max().unwrap_or(0) as u64;
    let a_max = max_letter.max(2 * isqrt_u64(2 * p));
    let mut counts = vec![0u32; a_max as usize + 1];
    for &x in &exp.period {
        counts[x as usize] += 1;
    }
    let even_t = exp.t() % 2 == 0;
    let mut odd_letters = Vec::new();
    let mut mismatches = Vec::new();
    for a in 1..=a_max {
        let observed = counts[a as usize] % 2 == 1;
        if observed {
            odd_letters.push(a);
        }
        if predict_ta_with(a, p, form, || even_t).predicted_odd != observed {
            mismatches.push(a);
        }
    }
    TaScan {
        checked: a_max,
        odd_letters,
        mismatches,
    }
}

// ---------------------------------------------------------------------------
// A one in the period when 4 | T

fn require_prime_form(d: u64) -> Result<(u64, Form)> {
    prime_form(d).ok_or_else(|| Error::Precondition(format!("{d} is neither p nor 2p")))
}

/// Index `j` (1-based) of the first partial quotient equal to 1.
///
/// # Errors
/// Precondition errors for a wrong radicand or `4 ∤ T`; [`Error::Falsified`]
/// if no 1 occurs.
pub fn verify_tb(d: u64) -> Result<usize> {
    require_prime_form(d)?;
    tb_on(&expansion_of(d)?)
}

pub fn tb_on(exp: &SqrtExpansion<i64>) -> Result<usize> {
    if exp.t() % 4 != 0 {
        return Err(Error::Precondition(format!("4 does not divide T_{}", exp.d)));
    }
    exp.period
        .iter()
        .position(|&a| a == 1)
        .map(|i| i + 1)
        .ok_or_else(|| Error::Falsified {
            theorem: "TB",
            d: exp.d.to_string(),
            detail: format!("no partial quotient 1 in a period of length {}", exp.t()),
        })
}

/// Branch of the refined statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityBranch {
    /// `isqrt(D) ≢ D (mod 2)`
    Different,
    /// `isqrt(D) ≡ D (mod 2)`
    Same,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ta2Outcome {
    pub m: usize,
    pub branch: ParityBranch,
    /// Positions `j` in `1..=2m-1` with `a_j = 1`.
    pub ones: Vec<usize>,
    /// Different branch: `a_{2m-1} = a_{2m+1} = 1`. Same branch: some 1 sits
    /// in the index set as printed.
    pub holds: bool,
    /// Same branch only: some 1 sits in [`ta2_derived_set`].
    pub holds_derived: bool,
}

/// The index set `{2, 4, ..., 2⌈m/2⌉-2, m, 2⌊m/2⌋+3, ..., 2m-5, 2m-3}`,
/// read literally: the even run, then `m`, then the odd run.
pub fn ta2_index_set(m: usize) -> Vec<usize> {
    let m = m as i64;
    let mut set: Vec<i64> = (1..)
        .map(|i| 2 * i)
        .take_while(|&j| j <= 2 * ((m + 1) / 2) - 2)
        .collect();
    set.push(m);
    let mut j = 2 * (m / 2) + 3;
    while j <= 2 * m - 3 {
        set.push(j);
        j += 2;
    }
    set.sort_unstable();
    set.dedup();
    set.into_iter()
        .filter(|&j| j >= 1 && j < 2 * m)
        .map(|j| j as usize)
        .collect()
}

/// The positions the induction over `Q_{2m-2j}` actually reaches: evens
/// `2..=m` then odds `m+1..=2m-3` for even `m`; evens below `m` then
/// `m, m+2, ..., 2m-3` for odd `m`. Differs from [`ta2_index_set`] by
/// `m + 1` when `m` is even.
pub fn ta2_derived_set(m: usize) -> Vec<usize> {
    let mut set: Vec<usize> = (2..=m).step_by(2).collect();
    let start = if m % 2 == 0 { m + 1 } else { m };
    set.extend((start..=(2 * m).saturating_sub(3)).step_by(2));
    set.retain(|&j| j >= 1 && j < 2 * m);
    if m == 1 {
        set = vec![1];
    }
    set.sort_unstable();
    set.dedup();
    set
}

pub fn ta2_on(exp: &SqrtExpansion<i64>) -> Result<Ta2Outcome> {
    let t = exp.t();
    if t % 4 != 0 {
        return Err(Error::Precondition(format!("4 does not divide T_{}", exp.d)));
    }
    let m = t / 4;
    let letter = |j: usize| exp.period[j - 1];
    let ones: Vec<usize> = (1..2 * m).filter(|&j| letter(j) == 1).collect();
    let branch = if (exp.a0 - exp.d) % 2 != 0 {
        ParityBranch::Different
    } else {
        ParityBranch::Same
    };
    let holds = match branch {
        ParityBranch::Different => letter(2 * m - 1) == 1 && letter(2 * m + 1) == 1,
        ParityBranch::Same => ta2_index_set(m).iter().any(|&j| letter(j) == 1),
    };
    let holds_derived = match branch {
        ParityBranch::Different => holds,
        ParityBranch::Same => ta2_derived_set(m).iter().any(|&j| letter(j) == 1),
    };
    Ok(Ta2Outcome {
        m,
        branch,
        ones,
        holds,
        holds_derived,
    })
}

pub fn verify_ta2(d: u64) -> Result<bool> {
    require_prime_form(d)?;
    Ok(ta2_on(&expansion_of(d)?)?.holds)
}

// ---------------------------------------------------------------------------
// Half-word continuant equality

/// `q_{L-2}(a_2..a_{L-1}) = 2 q_{L-2}(a_1..a_{L-2})` for even `T = 2L` with
/// `isqrt(D) ≡ D (mod 2)`. For `L = 1` both sides are `q_{-1} = 0`.
pub fn c3_on(exp: &SqrtExpansion<i64>) -> Result<bool> {
    let t = exp.t();
    if t % 2 == 1 || (exp.a0 - exp.d) % 2 != 0 {
        return Err(Error::Precondition(format!(
            "T_{} odd or isqrt parity differs from D",
            exp.d
        )));
    }
    let l = (t / 2) as isize;
    let shifted = continuant_of_span(&exp.period, 1, l - 2);
    let prefix = continuant_of_span(&exp.period, 0, l - 2);
    Ok(shifted == prefix * 2)
}

pub fn c3_check(d: u64) -> Result<bool> {
    require_prime_form(d)?;
    c3_on(&expansion_of(d)?)
}

// ---------------------------------------------------------------------------
// p ≡ 3 (mod 8) without a 1

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mod8Outcome {
    /// `a_L = isqrt(p)` and `isqrt(p)` is odd.
    pub holds: bool,
    /// `2 a_k = a_{L-k}` for odd `k` and `a_k = 2 a_{L-k}` for even `k`,
    /// `k ≤ (L-1)/2`. Reported, not required.
    pub doubling_pattern: bool,
}

pub fn mod8_on(exp: &SqrtExpansion<i64>) -> Result<Mod8Outcome> {
    let p = exp.d;
    if p % 8 != 3 || exp.period.contains(&1) {
        return Err(Error::Precondition(format!(
            "{p} is not 3 mod 8 or its period contains 1"
        )));
    }
    let l = exp.t() / 2;
    let a = |k: usize| exp.period[k - 1];
    let holds = exp.t() % 2 == 0 && a(l) == exp.a0 && exp.a0 % 2 == 1;
    let doubling_pattern = (1..=l.saturating_sub(1) / 2).all(|k| {
        if k % 2 == 1 {
            2 * a(k) == a(l - k)
        } else {
            a(k) == 2 * a(l - k)
        }
    });
    Ok(Mod8Outcome {
        holds,
        doubling_pattern,
    })
}

pub fn mod8_pattern_check(p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    Ok(mod8_on(&expansion_of(p)?)?.holds)
}

// ---------------------------------------------------------------------------
// Prime powers

/// For `D = p^n` or `2 p^n` (`n` odd) with even period and
/// `isqrt(D) ≢ D (mod 2)`: `a_{L+1} = 1`, and `a_{L-1} = 1` when `L ≥ 2`.
pub fn prime_power_on(exp: &SqrtExpansion<i64>) -> Result<bool> {
    let t = exp.t();
    if t % 2 == 1 || (exp.a0 - exp.d) % 2 == 0 {
        return Err(Error::Precondition(format!(
            "T_{} odd or isqrt parity equals D",
            exp.d
        )));
    }
    let l = t / 2;
    let a = |k: usize| exp.period[k - 1];
    Ok(a(l + 1) == 1 && (l < 2 || a(l - 1) == 1))
}

pub fn prime_power_radicand(p: u64, n: u32, form: Form) -> Option<u64> {
    let pn = p.checked_pow(n)?;
    match form {
        Form::P => Some(pn),
        Form::TwoP => pn.checked_mul(2),
    }
}

pub fn prime_power_midpoint(p: u64, n: u32, form: Form) -> Result<bool> {
    if !is_prime(p) || n % 2 == 0 {
        return Err(Error::Precondition(format!("need prime p and odd n, got {p}^{n}")));
    }
    let d = prime_power_radicand(p, n, form)
        .ok_or_else(|| Error::OutOfScope(format!("{p}^{n}")))?;
    if is_square(&(d as i128)) {
        return Err(Error::Precondition(format!("{d} is a square")));
    }
    prime_power_on(&expansion_of(d)?)
}

// ---------------------------------------------------------------------------
// Sets of primes by number of ones

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LSetResult {
    pub i: usize,
    pub bound: u64,
    pub members: Vec<u64>,
}

/// Number of 1s in the period of `sqrt(d)` with machine-word arithmetic.
pub fn ones_in_period(d: u64) -> usize {
    let a0 = isqrt_u64(d);
    debug_assert!(a0 * a0 != d);
    let (mut p, mut q, mut q_prev) = (a0, d - a0 * a0, 1u64);
    let mut ones = 0;
    loop {
        let a = (a0 + p) / q;
        if a == 1 {
            ones += 1;
        }
        if q == 1 {
            return ones;
        }
        let p_next = a * q - p;
        // q_prev + a (p - p_next) >= 1, evaluated without going negative
        let q_next = if p >= p_next {
            q_prev + a * (p - p_next)
        } else {
            q_prev - a * (p_next - p)
        };
        q_prev = q;
        p = p_next;
        q = q_next;
    }
}

/// For every prime `p ≤ bound`, the number of 1s in the period of `sqrt(p)`,
/// grouped by count.
pub fn ones_histogram(bound: u64) -> BTreeMap<usize, Vec<u64>> {
    let primes = primes_between(1, bound.max(2)).primes;
    let primes: Vec<u64> = primes.into_iter().filter(|&p| p <= bound).collect();
    let counts = crate::scan::map_in_blocks(&primes, crate::scan::DEFAULT_BLOCK, |&p| {
        Ok::<_, Error>(ones_in_period(p))
    })
    .expect("infallible");
    let mut out: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for (p, c) in primes.into_iter().zip(counts) {
        out.entry(c).or_default().push(p);
    }
    out
}

pub fn l_sets(i: usize, bound: u64) -> LSetResult {
    let members = ones_histogram(bound).remove(&i).unwrap_or_default();
    LSetResult { i, bound, members }
}

// ---------------------------------------------------------------------------
// x^2 - D y^2 = c for |c| ≤ 2

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellVerdict {
    pub d: u64,
    pub c: i64,
    pub solvable: bool,
    pub witness: Option<(BigInt, BigInt)>,
}

fn check_witness(d: u64, c: i64, x: &BigInt, y: &BigInt) -> Result<()> {
    if x * x - BigInt::from(d) * y * y == BigInt::from(c) {
        Ok(())
    } else {
        Err(Error::Internal(format!("({x}, {y}) does not solve x^2 - {d} y^2 = {c}")))
    }
}

/// Decides `x^2 - D y^2 = c` from the values `(-1)^k Q_k` over one period
/// (two when `T` is odd, so both signs meet every `Q_k`).
///
/// The convergent criterion is complete for `|c| < sqrt(D)`; `D = 2, 3` are
/// settled by a direct search instead.
pub fn pell_on(exp: &SqrtExpansion<i64>, c: i64) -> Result<PellVerdict> {
    if !matches!(c, -2 | -1 | 1 | 2) {
        return Err(Error::Precondition(format!("c = {c} not in {{±1, ±2}}")));
    }
    let d = exp.d as u64;
    if d <= 3 {
        return Ok(pell_small(d, c));
    }
    let trace = exp.trace()?;
    let t = exp.t();
    let steps = if t % 2 == 1 { 2 * t } else { t };
    let hit = (1..=steps).find(|&k| {
        let q = trace[(k - 1) % t].q;
        (if k % 2 == 0 { q } else { -q }) == c
    });
    let Some(k) = hit else {
        return Ok(PellVerdict {
            d,
            c,
            solvable: false,
            witness: None,
        });
    };
    let conv = Convergents::new(exp)
        .nth(k)
        .expect("convergent iterator is infinite");
    debug_assert_eq!(conv.index, k as i64 - 1);
    check_witness(d, c, &conv.p, &conv.q)?;
    Ok(PellVerdict {
        d,
        c,
        solvable: true,
        witness: Some((conv.p, conv.q)),
    })
}

fn pell_small(d: u64, c: i64) -> PellVerdict {
    // minimal solutions for D ≤ 3 have y ≤ 1; search a little further
    let witness = (0u64..=16).find_map(|y| {
        let rhs = d as i64 * (y * y) as i64 + c;
        if rhs < 0 {
            return None;
        }
        let x = isqrt_u64(rhs as u64);
        (x * x == rhs as u64).then(|| (BigInt::from(x), BigInt::from(y)))
    });
    PellVerdict {
        d,
        c,
        solvable: witness.is_some(),
        witness,
    }
}

pub fn pell_solvable(d: u64, c: i64) -> Result<PellVerdict> {
    pell_on(&expansion_of(d)?, c)
}

/// Predicted solvability for an odd prime: `-1` iff `p ≡ 1 (4)`,
/// `+2` iff `p ≡ 7 (8)`, `-2` iff `p ≡ 3 (8)`, `+1` always.
pub fn pell_law(p: u64, c: i64) -> bool {
    match c {
        -1 => p % 4 == 1,
        2 => p % 8 == 7,
        -2 => p % 8 == 3,
        _ => true,
    }
}

/// Witness formatting shared by scan rows.
pub fn format_witness(w: &Option<(BigInt, BigInt)>) -> String {
    match w {
        Some((x, y)) => format!("({x} {y})"),
        None => "-".into(),
    }
}

// ---------------------------------------------------------------------------

/// Expansion without trace, for checks that only need the period word.
pub fn word_of(d: u64) -> Result<SqrtExpansion<i64>> {
    expand_sqrt_with(
        &i64::try_from(d).map_err(|_| Error::OutOfScope(d.to_string()))?,
        Trace::Drop,
    )
}

/// Midpoint facts for a prime form, as used by scans.
pub fn t2_on(exp: &SqrtExpansion<i64>) -> Result<Option<bool>> {
    Ok(midpoint_of(exp)?.map(|m| crate::midpoint::t2_holds(&m)))
}
