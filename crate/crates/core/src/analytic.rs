//! `L(1, χ)`, units, regulators and class numbers of real quadratic fields,
//! and the period-length bound `l < (4 / log 2) sqrt(D) L(1, χ)`.
//!
//! Real numbers are carried as closed `f64` intervals whose endpoints are
//! pushed outward after every operation. Anything that decides a verdict on
//! exact integers (unit norms, the growth of `p_i + q_i sqrt(D)`) is done in
//! `BigInt`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cf::{expand_sqrt, expand_sqrt_with, expand_surd_states, Convergents, QuadraticSurd, Trace};
use crate::continuant::matrix_product;
use crate::error::{Error, Result};
use crate::int::{first_primes, is_squarefree, kronecker};

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    /// `x ± err`, widened by one ulp on each side.
    pub fn around(x: f64, err: f64) -> Self {
        Self {
            lo: (x - err).next_down(),
            hi: (x + err).next_up(),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Product of two positive intervals.
    pub fn mul_pos(self, other: Interval) -> Interval {
        debug_assert!(self.lo >= 0.0 && other.lo >= 0.0);
        Interval {
            lo: (self.lo * other.lo).next_down(),
            hi: (self.hi * other.hi).next_up(),
        }
    }

    /// Quotient of two positive intervals.
    pub fn div_pos(self, other: Interval) -> Interval {
        debug_assert!(self.lo >= 0.0 && other.lo > 0.0);
        Interval {
            lo: (self.lo / other.hi).next_down(),
            hi: (self.hi / other.lo).next_up(),
        }
    }

    pub fn sqrt_of(n: u64) -> Interval {
        let r = (n as f64).sqrt();
        Interval {
            lo: r.next_down(),
            hi: r.next_up(),
        }
    }
}

/// `Δ = D` for `D ≡ 1 (mod 4)`, else `4D`.
pub fn fundamental_discriminant(d: u64) -> Result<u64> {
    check_squarefree(d)?;
    Ok(if d % 4 == 1 { d } else { 4 * d })
}

fn check_squarefree(d: u64) -> Result<()> {
    if d < 2 || !is_squarefree(d) {
        return Err(Error::NotSquarefree(d.to_string()));
    }
    Ok(())
}

/// Largest number of terms the `L`-series summation may use.
pub const MAX_TERMS: u64 = 1 << 27;

/// Values of `χ(n) = (Δ | n)` over one period with the extreme partial sums.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    pub delta: u64,
    pub chi: Vec<i8>,
    /// `max |Σ_{n ≤ x} χ(n)|`
    pub max_a: u64,
    /// `max |Σ_{m ≤ x} Σ_{n ≤ m} χ(n)|`
    pub max_a2: u64,
}

impl CharacterTable {
    /// # Errors
    /// [`Error::Internal`] if a period sum or its running sum fails to
    /// vanish (both must for an even primitive character).
    pub fn new(delta: u64) -> Result<Self> {
        let chi: Vec<i8> = (0..delta)
            .map(|n| if n == 0 { 0 } else { kronecker(delta as i64, n) as i8 })
            .collect();
        let (mut a, mut a2, mut max_a, mut max_a2) = (0i64, 0i64, 0u64, 0u64);
        for n in 1..=delta {
            a += chi[(n % delta) as usize] as i64;
            a2 += a;
            max_a = max_a.max(a.unsigned_abs());
            max_a2 = max_a2.max(a2.unsigned_abs());
        }
        if a != 0 || a2 != 0 {
            return Err(Error::Internal(format!(
                "character mod {delta}: period sums {a}, {a2} do not vanish"
            )));
        }
        Ok(Self {
            delta,
            chi,
            max_a,
            max_a2,
        })
    }

    /// Pólya–Vinogradov in the form `|Σ χ(n)| ≤ sqrt(Δ) log Δ`.
    pub fn polya_vinogradov_holds(&self) -> bool {
        let d = self.delta as f64;
        (self.max_a as f64) <= d.sqrt() * d.ln()
    }
}

/// Encloses `L(1, χ)` summing `N = K Δ` terms.
///
/// With `N` a multiple of `Δ` the partial sums `A(N)` and `Σ_{m≤N} A(m)`
/// vanish, so two Abel summations leave a tail of absolute value at most
/// `max|A2| / ((N+1)(N+2))`; the first-order bound `max|A| / (N+1)` is used
/// if smaller.
pub fn l1_with_terms(table: &CharacterTable, k: u64) -> Interval {
    let delta = table.delta;
    let n_terms = k * delta;
    let mut sum = 0.0f64;
    let mut n = 0u64;
    for _ in 0..k {
        for r in 1..=delta {
            n += 1;
            let c = table.chi[(r % delta) as usize];
            if c != 0 {
                sum += c as f64 / n as f64;
            }
        }
    }
    let nf = n_terms as f64;
    let tail = (table.max_a2 as f64 / ((nf + 1.0) * (nf + 2.0))).min(table.max_a as f64 / (nf + 1.0));
    // recursive summation: each partial sum is within (1 + u)^N of exact, and
    // Σ 1/n ≤ ln N + 1; each term carries one more rounding
    let u = f64::EPSILON / 2.0;
    let rounding = 1.01 * (nf + 1.0) * u * (nf.ln() + 2.0);
    Interval::around(sum, (tail * 1.0001).next_up() + rounding)
}

/// Encloses `L(1, χ_Δ)` to width at most `target` by doubling the number of
/// periods summed.
///
/// # Errors
/// [`Error::Precision`] when `target` needs more than [`MAX_TERMS`] terms.
pub fn dirichlet_l1(delta: u64, target: f64) -> Result<Interval> {
    let table = CharacterTable::new(delta)?;
    dirichlet_l1_from(&table, target)
}

pub fn dirichlet_l1_from(table: &CharacterTable, target: f64) -> Result<Interval> {
    let mut k = 4u64;
    loop {
        let iv = l1_with_terms(table, k);
        if iv.width() <= target {
            return Ok(iv);
        }
        if 2 * k * table.delta > MAX_TERMS {
            return Err(Error::Precision(format!(
                "L(1, chi_{}) to width {target:e} needs more than {MAX_TERMS} terms (reached {:e})",
                table.delta,
                iv.width()
            )));
        }
        k *= 2;
    }
}

/// The unit `(x + y sqrt(Δ)) / 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    pub x: BigInt,
    pub y: BigInt,
    pub delta: u64,
}

impl Unit {
    /// `(x^2 - Δ y^2) / 4`, which is `±1` for a unit.
    pub fn norm(&self) -> BigInt {
        (&self.x * &self.x - BigInt::from(self.delta) * &self.y * &self.y) / 4
    }

    pub fn mul(&self, other: &Unit) -> Unit {
        debug_assert_eq!(self.delta, other.delta);
        let delta = BigInt::from(self.delta);
        Unit {
            x: (&self.x * &other.x + delta * &self.y * &other.y) / 2,
            y: (&self.x * &other.y + &other.x * &self.y) / 2,
            delta: self.delta,
        }
    }

    pub fn pow(&self, j: u32) -> Unit {
        let mut acc = Unit {
            x: BigInt::from(2),
            y: BigInt::zero(),
            delta: self.delta,
        };
        for _ in 0..j {
            acc = acc.mul(self);
        }
        acc
    }

    /// Encloses `log ε` from `x` and the norm `N`:
    /// `ε = (x + sqrt(x^2 - 4N)) / 2`.
    pub fn log(&self) -> Interval {
        let n = self.norm().to_f64().unwrap_or(1.0);
        let bits = self.x.bits();
        let value = if bits <= 60 {
            let x = self.x.to_f64().expect("small");
            ((x + (x * x - 4.0 * n).sqrt()) / 2.0).ln()
        } else {
            // log ε = log x - N / (ε x) and |N / (ε x)| < 2^-100
            let shift = bits - 60;
            let top = (&self.x >> shift).to_f64().expect("60 bits");
            top.ln() + shift as f64 * std::f64::consts::LN_2
        };
        Interval::around(value, 1e-12 * value.abs().max(1.0))
    }
}

fn big(x: &impl ToString) -> BigInt {
    x.to_string().parse().expect("integer")
}

/// Fundamental unit of the maximal order of `Q(sqrt(D))`.
///
/// For `D ≡ 1 (mod 4)` the purely periodic tail `θ = (P + sqrt(D)) / Q` of
/// `(1 + sqrt(D)) / 2` gives the unit `f' θ + g` from the period matrix
/// `[[e, f], [f', g]]`; otherwise it is `p_{l-1} + q_{l-1} sqrt(D)`.
pub fn fundamental_unit(d: u64) -> Result<Unit> {
    let delta = fundamental_discriminant(d)?;
    let unit = if d % 4 == 1 {
        let surd = QuadraticSurd::new(big(&d), BigInt::one(), BigInt::from(2))?;
        let (_, period, start) = expand_surd_states(&surd);
        let m = matrix_product(&period);
        let (p, q) = (start.p().clone(), start.q().clone());
        // f' (P + sqrt D) / Q + g = (f'P + gQ)/Q + (f'/Q) sqrt D
        let (x, rx) = (BigInt::from(2) * (&m.f_bot * &p + &m.g * &q)).div_rem(&q);
        let (y, ry) = (BigInt::from(2) * &m.f_bot).div_rem(&q);
        if !rx.is_zero() || !ry.is_zero() {
            return Err(Error::Internal(format!("unit of Q(sqrt {d}) is not in the maximal order")));
        }
        Unit { x, y, delta }
    } else {
        let (p, q) = last_convergent(d)?;
        Unit {
            x: p * 2,
            y: q,
            delta,
        }
    };
    if !unit.norm().abs().is_one() || (&unit.x * &unit.x - BigInt::from(delta) * &unit.y * &unit.y).abs() != BigInt::from(4) {
        return Err(Error::Internal(format!("fundamental unit of Q(sqrt {d}) has norm {}", unit.norm())));
    }
    if !unit.x.is_positive() || !unit.y.is_positive() {
        return Err(Error::Internal(format!("fundamental unit of Q(sqrt {d}) is not > 1")));
    }
    Ok(unit)
}

/// `(p_{l-1}, q_{l-1})` for `sqrt(D)`.
pub fn last_convergent(d: u64) -> Result<(BigInt, BigInt)> {
    let exp = expand_sqrt_with(&to_i64(d)?, Trace::Drop)?;
    let c = Convergents::new(&exp)
        .nth(exp.t())
        .expect("convergent iterator is infinite");
    Ok((c.p, c.q))
}

fn to_i64(d: u64) -> Result<i64> {
    i64::try_from(d).map_err(|_| Error::OutOfScope(d.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitTower {
    /// `α = p_{l-1} + q_{l-1} sqrt(D)`.
    pub alpha: (BigInt, BigInt),
    pub epsilon: Unit,
    /// `α = ε^j`.
    pub j: u32,
}

/// # Errors
/// [`Error::Internal`] when no `j ≤ 3` gives `α = ε^j`.
pub fn unit_tower(d: u64) -> Result<UnitTower> {
    let epsilon = fundamental_unit(d)?;
    let (p, q) = last_convergent(d)?;
    let target = if epsilon.delta == d {
        Unit {
            x: &p * 2,
            y: &q * 2,
            delta: d,
        }
    } else {
        Unit {
            x: &p * 2,
            y: q.clone(),
            delta: epsilon.delta,
        }
    };
    let j = (1..=3)
        .find(|&j| epsilon.pow(j) == target)
        .ok_or_else(|| Error::Internal(format!("p + q sqrt({d}) is not ε, ε^2 or ε^3")))?;
    Ok(UnitTower {
        alpha: (p, q),
        epsilon,
        j,
    })
}

/// Encloses `log ε`.
pub fn regulator(d: u64) -> Result<Interval> {
    Ok(fundamental_unit(d)?.log())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassNumber {
    pub h: u64,
    /// `sqrt(Δ) L(1, χ) / (2 log ε)`.
    pub enclosure: Interval,
    pub l1: Interval,
    pub regulator: Interval,
}

/// `h = sqrt(Δ) L(1, χ) / (2 log ε)`, tightening `L(1, χ)` until the
/// enclosure holds exactly one integer `≥ 1`.
pub fn class_number(d: u64) -> Result<u64> {
    Ok(class_number_detail(d)?.h)
}

pub fn class_number_detail(d: u64) -> Result<ClassNumber> {
    let delta = fundamental_discriminant(d)?;
    let reg = regulator(d)?;
    let table = CharacterTable::new(delta)?;
    let root = Interval::sqrt_of(delta);
    let mut target = 1e-3;
    loop {
        let l1 = dirichlet_l1_from(&table, target)?;
        let h = root.mul_pos(l1).div_pos(reg.mul_pos(Interval { lo: 2.0, hi: 2.0 }));
        let (lo, hi) = (h.lo.ceil(), h.hi.floor());
        if lo == hi && lo >= 1.0 {
            return Ok(ClassNumber {
                h: lo as u64,
                enclosure: h,
                l1,
                regulator: reg,
            });
        }
        if hi < lo.min(1.0) {
            return Err(Error::Internal(format!("class number enclosure {h:?} holds no integer >= 1")));
        }
        target /= 16.0;
    }
}

/// Sign of `X + Y sqrt(D)`.
pub fn surd_sign(x: &BigInt, y: &BigInt, d: u64) -> Ordering {
    match (x.sign(), y.sign()) {
        (num_bigint::Sign::Minus, num_bigint::Sign::Minus) => Ordering::Less,
        (num_bigint::Sign::Minus, _) | (_, num_bigint::Sign::Minus) => {
            // opposite signs (or a zero): compare X^2 with D Y^2
            let lhs = x * x;
            let rhs = BigInt::from(d) * y * y;
            let x_wins = lhs.cmp(&rhs);
            if x.is_negative() {
                x_wins.reverse()
            } else {
                x_wins
            }
        }
        (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => Ordering::Equal,
        _ => Ordering::Greater,
    }
}

/// Exact growth facts for `α_i = p_i + q_i sqrt(D)`, `α_{-1} = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaGrowth {
    /// `α_{i+1} > 2 α_{i-1}` for `0 ≤ i ≤ l - 2`.
    pub doubling: bool,
    /// `α_{l-1} > 2^{l/2}`, i.e. `α_{l-1}^2 > 2^l`.
    pub final_bound: bool,
}

pub fn alpha_growth(d: u64) -> Result<AlphaGrowth> {
    let exp = expand_sqrt_with(&to_i64(d)?, Trace::Drop)?;
    let l = exp.t();
    // indices -1 ..= l - 1
    let conv: Vec<(BigInt, BigInt)> = Convergents::new(&exp)
        .take(l + 1)
        .map(|c| (c.p, c.q))
        .collect();
    let at = |i: i64| &conv[(i + 1) as usize];
    let doubling = (0..=l as i64 - 2).all(|i| {
        let (p1, q1) = at(i + 1);
        let (p0, q0) = at(i - 1);
        surd_sign(&(p1 - p0 * 2), &(q1 - q0 * 2), d) == Ordering::Greater
    });
    let (p, q) = at(l as i64 - 1);
    // α^2 = p^2 + D q^2 + 2 p q sqrt(D)
    let x = p * p + BigInt::from(d) * q * q - (BigInt::one() << l);
    let y = p * q * 2;
    let final_bound = surd_sign(&x, &y, d) == Ordering::Greater;
    Ok(AlphaGrowth {
        doubling,
        final_bound,
    })
}

/// `4 / log 2` rounded down and up.
fn four_over_ln2() -> Interval {
    Interval::around(4.0 / std::f64::consts::LN_2, 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticReport {
    pub d: u64,
    pub delta: u64,
    pub l1: Interval,
    pub epsilon: Unit,
    pub regulator: Interval,
    pub h: u64,
    /// `sqrt(D) L(1, χ) / log ε` (midpoint), the other normalisation of the
    /// class number formula; equals `h` times `2 sqrt(D / Δ)`.
    pub h_alt: f64,
    pub t: usize,
    /// Lower end of `(4 / log 2) sqrt(D) L(1, χ)` from `L1.lo`.
    pub bound_rhs: f64,
    pub holds: bool,
    pub growth: AlphaGrowth,
    pub tower_j: u32,
}

/// Period length against the analytic bound, plus the exact growth facts
/// behind it.
pub fn period_bound_check(d: u64) -> Result<AnalyticReport> {
    period_bound_check_at(d, 1e-3)
}

/// Same with a target width for the `L(1, χ)` enclosure; the enclosure that
/// settled `h` is reused when it is already that narrow.
pub fn period_bound_check_at(d: u64, precision: f64) -> Result<AnalyticReport> {
    let delta = fundamental_discriminant(d)?;
    let t = expand_sqrt(&to_i64(d)?)?.t();
    let tower = unit_tower(d)?;
    let cn = class_number_detail(d)?;
    let l1 = if precision < cn.l1.width() {
        dirichlet_l1(delta, precision)?
    } else {
        cn.l1
    };
    let bound = four_over_ln2().mul_pos(Interval::sqrt_of(d)).mul_pos(l1);
    let h_alt = (d as f64).sqrt() * l1.mid() / cn.regulator.mid();
    Ok(AnalyticReport {
        d,
        delta,
        l1,
        epsilon: tower.epsilon.clone(),
        regulator: cn.regulator,
        h: cn.h,
        h_alt,
        t,
        bound_rhs: bound.lo,
        holds: (t as f64) < bound.lo,
        growth: alpha_growth(d)?,
        tower_j: tower.j,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Q51Row {
    pub m: usize,
    pub p: u64,
    pub t: usize,
    /// `T_{p_m} / (sqrt(m) log m)`
    pub ratio: f64,
}

impl Q51Row {
    pub fn flagged(&self) -> bool {
        self.ratio >= 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Q51Report {
    pub rows: Vec<Q51Row>,
    pub max_ratio: f64,
    pub argmax: usize,
    pub all_below_one: bool,
}

/// `T_{p_m} / (sqrt(m) log m)` for `m = 5 ..= M`.
pub fn q51_scan(max_m: usize) -> Result<Q51Report> {
    if max_m < 5 {
        return Err(Error::Precondition(format!("M = {max_m} < 5")));
    }
    let primes = first_primes(max_m);
    let ms: Vec<usize> = (5..=max_m).collect();
    let rows = crate::scan::map_in_blocks(&ms, crate::scan::DEFAULT_BLOCK, |&m| {
        let p = primes[m - 1];
        let t = expand_sqrt_with(&to_i64(p)?, Trace::Drop)?.t();
        let mf = m as f64;
        Ok(Q51Row {
            m,
            p,
            t,
            ratio: t as f64 / (mf.sqrt() * mf.ln()),
        })
    })?;
    let best = rows
        .iter()
        .fold(&rows[0], |best, r| if r.ratio > best.ratio { r } else { best });
    Ok(Q51Report {
        max_ratio: best.ratio,
        argmax: best.m,
        all_below_one: rows.iter().all(|r| !r.flagged()),
        rows,
    })
}

/// Squarefree `D` in `2 ..= max`.
pub fn squarefree_upto(max: u64) -> Vec<u64> {
    (2..=max).filter(|&d| is_squarefree(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminant_examples() {
        assert_eq!(fundamental_discriminant(5).unwrap(), 5);
        assert_eq!(fundamental_discriminant(7).unwrap(), 28);
        assert_eq!(fundamental_discriminant(6).unwrap(), 24);
        assert!(fundamental_discriminant(12).is_err());
        assert!(fundamental_discriminant(1).is_err());
    }

    #[test]
    fn l1_examples() {
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let cases = [
            (5u64, 2.0 * golden.ln() / 5f64.sqrt()),
            (8, 2.0 * (1.0 + 2f64.sqrt()).ln() / 8f64.sqrt()),
            (12, 2.0 * (2.0 + 3f64.sqrt()).ln() / 12f64.sqrt()),
        ];
        for (delta, expected) in cases {
            let iv = dirichlet_l1(delta, 1e-6).unwrap();
            assert!(iv.contains(expected), "{delta}: {iv:?} vs {expected}");
            assert!(iv.width() <= 1e-6);
        }
        assert!((dirichlet_l1(5, 1e-6).unwrap().mid() - 0.430409).abs() < 1e-6);
    }

    #[test]
    fn precision_cap() {
        assert!(matches!(dirichlet_l1(5, 1e-30), Err(Error::Precision(_))));
    }

    #[test]
    fn unit_examples() {
        let u = fundamental_unit(5).unwrap();
        assert_eq!((u.x.clone(), u.y.clone()), (BigInt::from(1), BigInt::from(1)));
        let u = fundamental_unit(2).unwrap();
        // 1 + sqrt 2 = (2 + sqrt 8) / 2
        assert_eq!((u.x.clone(), u.y.clone(), u.delta), (BigInt::from(2), BigInt::from(1), 8));
        let u = fundamental_unit(7).unwrap();
        assert_eq!((u.x.clone(), u.y.clone()), (BigInt::from(16), BigInt::from(3)));
        let u = fundamental_unit(13).unwrap();
        assert_eq!((u.x.clone(), u.y.clone()), (BigInt::from(3), BigInt::from(1)));
    }

    #[test]
    fn tower_examples() {
        assert_eq!(unit_tower(7).unwrap().j, 1);
        assert_eq!(unit_tower(5).unwrap().j, 3);
        assert_eq!(unit_tower(2).unwrap().j, 1);
        assert_eq!(unit_tower(13).unwrap().j, 3);
        assert_eq!(unit_tower(17).unwrap().j, 1);
    }

    #[test]
    fn class_number_examples() {
        assert_eq!(class_number(5).unwrap(), 1);
        assert_eq!(class_number(10).unwrap(), 2);
        assert_eq!(class_number(7).unwrap(), 1);
        assert_eq!(class_number(79).unwrap(), 3);
        assert_eq!(class_number(226).unwrap(), 8);
    }

    #[test]
    fn bound_examples() {
        let r = period_bound_check(5).unwrap();
        assert_eq!(r.t, 1);
        assert!(r.holds && (r.bound_rhs - 5.55).abs() < 0.01, "{}", r.bound_rhs);
        let r = period_bound_check(3).unwrap();
        assert_eq!(r.t, 2);
        assert!(r.holds && (r.bound_rhs - 7.60).abs() < 0.01, "{}", r.bound_rhs);
        let r = period_bound_check(34).unwrap();
        assert_eq!(r.t, 4);
        assert!(r.holds && r.growth.doubling && r.growth.final_bound);
    }

    #[test]
    fn surd_sign_cases() {
        let s = |x: i64, y: i64, d| surd_sign(&BigInt::from(x), &BigInt::from(y), d);
        assert_eq!(s(3, -1, 8), Ordering::Greater);
        assert_eq!(s(2, -1, 5), Ordering::Less);
        assert_eq!(s(-3, 1, 8), Ordering::Less);
        assert_eq!(s(-2, 1, 5), Ordering::Greater);
        assert_eq!(s(0, 0, 5), Ordering::Equal);
        assert_eq!(s(0, 1, 5), Ordering::Greater);
        assert_eq!(s(-1, 0, 5), Ordering::Less);
    }

    #[test]
    fn q51_examples() {
        let r = q51_scan(5).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!((r.rows[0].p, r.rows[0].t, r.argmax), (11, 2, 5));
        assert!((r.max_ratio - 0.5557).abs() < 1e-3, "{}", r.max_ratio);
        assert!(q51_scan(4).is_err());
    }
}
