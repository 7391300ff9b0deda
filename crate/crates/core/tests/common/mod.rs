//! Brute-force references shared by the integration tests. Nothing here
//! calls into the continued-fraction engine.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

fn isqrt(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn squarefree(n: u64) -> bool {
    let mut k = 2u64;
    while k * k <= n {
        if n % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

pub fn squarefree_upto(max: u64) -> Vec<u64> {
    (2..=max).filter(|&d| squarefree(d)).collect()
}

pub fn discriminant(d: u64) -> u64 {
    if d % 4 == 1 {
        d
    } else {
        4 * d
    }
}

/// Smallest `y ≥ 1` with `Δ y^2 ± 4` a square; returns `(x, y, norm)` for
/// `ε = (x + y sqrt(Δ)) / 2`.
pub fn unit_by_search(d: u64) -> (u128, u128, i32) {
    let delta = discriminant(d) as u128;
    for y in 1u128.. {
        let base = delta * y * y;
        // norm -1 first: x^2 = Δy^2 - 4
        for (rhs, norm) in [(base - 4, -1), (base + 4, 1)] {
            let x = isqrt(rhs);
            if x * x == rhs {
                return (x, y, norm);
            }
        }
    }
    unreachable!()
}

/// `log ε` from the searched unit.
pub fn log_unit(d: u64) -> f64 {
    let (x, y, _) = unit_by_search(d);
    let delta = discriminant(d) as f64;
    ((x as f64 + y as f64 * delta.sqrt()) / 2.0).ln()
}

type Form = (i64, i64, i64);

/// Cycles of reduced forms `(a, b, c)` of discriminant `Δ` under `ρ`; their
/// number is the narrow class number.
pub fn form_cycles(delta: u64) -> Vec<Vec<Form>> {
    let delta = delta as i64;
    let root = (delta as f64).sqrt();
    let reduced = |a: i64, b: i64| {
        let (b, a) = (b as f64, a.abs() as f64);
        0.0 < b && b < root && root - b < 2.0 * a && 2.0 * a < root + b
    };
    let mut forms = Vec::new();
    for b in 1..=root as i64 {
        if (b * b - delta) % 4 != 0 {
            continue;
        }
        let ac = (b * b - delta) / 4;
        for a in 1..=ac.abs() {
            if ac % a != 0 {
                continue;
            }
            for a in [a, -a] {
                let c = ac / a;
                if reduced(a, b) {
                    forms.push((a, b, c));
                }
            }
        }
    }
    // ρ(a, b, c) = (c, b', (b'^2 - Δ) / 4c) with b' ≡ -b (mod 2c),
    // sqrt(Δ) - 2|c| < b' < sqrt(Δ)
    let rho = |(_, b, c): (i64, i64, i64)| {
        let m = 2 * c.abs();
        let mut b2 = (-b).rem_euclid(m);
        while (b2 as f64) < root - m as f64 {
            b2 += m;
        }
        while (b2 as f64) > root {
            b2 -= m;
        }
        (c, b2, (b2 * b2 - delta) / (4 * c))
    };
    let mut seen = std::collections::HashSet::new();
    let mut cycles = Vec::new();
    for &f in &forms {
        if seen.contains(&f) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut g = f;
        while seen.insert(g) {
            cycle.push(g);
            g = rho(g);
        }
        assert_eq!(g, f, "rho left the reduced forms at discriminant {delta}");
        cycles.push(cycle);
    }
    cycles
}

pub fn narrow_class_number(delta: u64) -> usize {
    form_cycles(delta).len()
}

/// Wide class number. The fundamental unit has norm -1 exactly when the
/// principal cycle also holds a form with `a = -1`.
pub fn class_number_by_forms(d: u64) -> u64 {
    let cycles = form_cycles(discriminant(d));
    let principal = cycles
        .iter()
        .find(|c| c.iter().any(|f| f.0 == 1))
        .expect("principal form is reduced");
    let hp = cycles.len() as u64;
    if principal.iter().any(|f| f.0 == -1) {
        hp
    } else {
        hp / 2
    }
}

/// Denominator of `[0; x_1, ..., x_n]` folded in exact rationals, i.e. the
/// continuant `q_n(x_1..x_n)`.
pub fn continuant_by_fraction(seq: &[u64]) -> BigInt {
    let mut acc: Option<BigRational> = None;
    for &x in seq.iter().rev() {
        let x = BigRational::from_integer(BigInt::from(x));
        acc = Some(match acc {
            None => x,
            Some(r) => x + r.recip(),
        });
    }
    match acc {
        None => BigInt::one(),
        // [x_1; x_2, ..., x_n] = q_n / q_{n-1}(x_2..x_n) in lowest terms
        Some(r) => r.numer().clone(),
    }
}

/// Period of `sqrt(d)` by the textbook `m, d, a` recurrence, stopping at
/// the first `2 a0`.
pub fn sqrt_period_naive(d: u64) -> (u64, Vec<u64>) {
    let a0 = isqrt(d as u128) as u64;
    let (mut m, mut den, mut a) = (0u64, 1u64, a0);
    let mut period = Vec::new();
    while a != 2 * a0 {
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        period.push(a);
    }
    (a0, period)
}

/// `log ε` from the principal cycle: the product of `(b + sqrt Δ) / 2|a|`
/// over the cycle is the smallest totally positive unit, which is `ε^2`
/// when the cycle also holds a form with `a = -1`.
pub fn log_unit_by_cycle(d: u64) -> f64 {
    let delta = discriminant(d);
    let root = (delta as f64).sqrt();
    let cycles = form_cycles(delta);
    let principal = cycles
        .iter()
        .find(|c| c.iter().any(|f| f.0 == 1))
        .expect("principal form is reduced");
    let log_plus: f64 = principal
        .iter()
        .map(|&(a, b, _)| ((b as f64 + root) / (2 * a.abs()) as f64).ln())
        .sum();
    if principal.iter().any(|f| f.0 == -1) {
        log_plus / 2.0
    } else {
        log_plus
    }
}
