//! Exact integer primitives shared by the rest of the crate: integer
//! square roots, Kronecker symbols, primality, squarefreeness and a
//! segmented prime sieve.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::{BigInt, ToBigInt};
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Signed integer type the continued fraction engine can run on.
///
/// `i64` covers every desk-scale scan; `BigInt` removes the size limit.
pub trait Int:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Integer
    + Signed
    + FromPrimitive
    + ToPrimitive
    + ToBigInt
    + 'static
{
    /// Whether a radicand keeps every intermediate of the expansion in range.
    /// All state values are bounded by `2 * sqrt(d)` and `d` itself.
    fn radicand_fits(d: &Self) -> bool;

    fn of(v: u64) -> Self {
        <Self as FromPrimitive>::from_u64(v).expect("u64 value fits the integer type")
    }
}

impl Int for i64 {
    fn radicand_fits(d: &Self) -> bool {
        *d <= i64::MAX / 4
    }
}

impl Int for i128 {
    fn radicand_fits(d: &Self) -> bool {
        *d <= i128::MAX / 4
    }
}

impl Int for BigInt {
    fn radicand_fits(_: &Self) -> bool {
        true
    }
}

/// Floor of the square root of `n` by integer Newton iteration.
///
/// The iterate decreases strictly until it reaches `isqrt(n)`, so the loop
/// stops at the first non-decrease.
///
/// # Panics
/// If `n` is negative.
pub fn isqrt<Z: Int>(n: &Z) -> Z {
    assert!(!n.is_negative(), "isqrt of a negative number");
    if n < &Z::of(2) {
        return n.clone();
    }
    let two = Z::of(2);
    // Any start above the root works; use a power of two from the bit size.
    let bits = n.to_bigint().map(|b| b.bits()).unwrap_or(128);
    let mut x = num_traits::pow(two.clone(), (bits as usize).div_ceil(2));
    loop {
        let y = (x.clone() + n.clone() / x.clone()) / two.clone();
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// `isqrt` specialised to machine words, used on hot paths.
pub fn isqrt_u64(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn is_square<Z: Int>(n: &Z) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = isqrt(n);
    r.clone() * r == *n
}

/// Kronecker symbol `(a | n)` for `n >= 1`.
///
/// # Panics
/// If `n == 0`.
pub fn kronecker(a: i64, n: u64) -> i32 {
    assert!(n >= 1, "kronecker symbol needs n >= 1");
    let mut n = n;
    let mut result = 1i32;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        n >>= tz;
        // (a | 2) = 1 for a = +-1 mod 8, -1 for a = +-3 mod 8
        if tz % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            result = -result;
        }
    }
    result * jacobi(a.rem_euclid(n as i64) as u64, n)
}

/// Jacobi symbol `(a | n)` for odd `n`.
fn jacobi(mut a: u64, mut n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1i32;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Squarefree test by trial division.
///
/// Primes up to the cube root are divided out; the cofactor then has at
/// most two prime factors, so it is squarefree iff it is not a square.
pub fn is_squarefree(n: u64) -> bool {
    assert!(n >= 1, "squarefree test needs n >= 1");
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p).saturating_mul(p) <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = isqrt_u64(m);
    m == 1 || r * r != m
}

/// The primes in a closed interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
    pub primes: Vec<u64>,
}

impl PrimeRange {
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

const SEGMENT: u64 = 1 << 18;

/// Primes in `[lo, hi]` by a segmented sieve of Eratosthenes.
///
/// # Panics
/// If `lo > hi`.
pub fn primes_between(lo: u64, hi: u64) -> PrimeRange {
    assert!(lo <= hi, "empty prime range {lo} > {hi}");
    let base = small_primes(isqrt_u64(hi));
    let mut primes = Vec::new();
    let mut seg_lo = lo.max(2);
    while seg_lo <= hi {
        let seg_hi = hi.min(seg_lo.saturating_add(SEGMENT - 1));
        let mut composite = vec![false; (seg_hi - seg_lo + 1) as usize];
        for &p in &base {
            if p * p > seg_hi {
                break;
            }
            let first = (p * p).max(seg_lo.div_ceil(p) * p);
            let mut m = first;
            while m <= seg_hi {
                composite[(m - seg_lo) as usize] = true;
                m += p;
            }
        }
        primes.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| seg_lo + i as u64),
        );
        if seg_hi == u64::MAX {
            break;
        }
        seg_lo = seg_hi + 1;
    }
    PrimeRange { lo, hi, primes }
}

/// Plain sieve up to `n`, used to seed the segmented sieve.
fn small_primes(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut is_p = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if is_p[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                is_p[j] = false;
                j += i;
            }
        }
    }
    out
}

/// The first `count` primes, in order.
pub fn first_primes(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    // p_m < m (ln m + ln ln m) for m >= 6
    let m = count.max(6) as f64;
    let bound = (m * (m.ln() + m.ln().ln())).ceil() as u64 + 16;
    let mut primes = primes_between(1, bound).primes;
    primes.truncate(count);
    primes
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::pow;
    use proptest::prelude::*;

    fn trial_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(&0i64), 0);
        assert_eq!(isqrt(&34i64), 5);
        let big = pow(BigInt::from(10), 40);
        assert_eq!(isqrt(&big), pow(BigInt::from(10), 20));
        assert_eq!(isqrt(&(big.clone() - 1)), pow(BigInt::from(10), 20) - 1);
        assert_eq!(isqrt_u64(u64::MAX), u32::MAX as u64);
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(5, 11), 1);
        for a in -20..20 {
            assert_eq!(kronecker(a, 1), 1);
        }
        assert_eq!(kronecker(12, 12), 0);
        assert_eq!(kronecker(5, 2), -1);
        assert_eq!(kronecker(-1, 2), 1);
    }

    #[test]
    fn kronecker_matches_brute_legendre() {
        let primes = primes_between(3, 10_000).primes;
        for &p in primes.iter().step_by(7) {
            let mut residues = vec![false; p as usize];
            for x in 1..p {
                residues[((x * x) % p) as usize] = true;
            }
            for a in [-7i64, -3, -1, 2, 3, 5, 6, 10, 12, 31] {
                let r = a.rem_euclid(p as i64) as usize;
                let brute = if r == 0 {
                    0
                } else if residues[r] {
                    1
                } else {
                    -1
                };
                assert_eq!(kronecker(a, p), brute, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn quadratic_reciprocity_spot_checks() {
        let primes = primes_between(3, 2_000).primes;
        for (i, &p) in primes.iter().enumerate() {
            for &q in primes.iter().skip(i + 1).step_by(13) {
                let lhs = kronecker(p as i64, q) * kronecker(q as i64, p);
                let sign = if (p % 4 == 3) && (q % 4 == 3) { -1 } else { 1 };
                assert_eq!(lhs, sign, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(7));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime((1 << 61) + 1));
        // (2^61 - 1) has no factor below 10^5
        let m = (1u64 << 61) - 1;
        assert!((2..100_000u64).all(|d| m % d != 0));
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        let sieve = primes_between(1, 1_000_000).primes;
        let mut it = sieve.iter().peekable();
        for n in 0..1_000_000u64 {
            let in_sieve = it.peek() == Some(&&n);
            if in_sieve {
                it.next();
            }
            assert_eq!(is_prime(n), in_sieve, "n={n}");
            if n < 20_000 {
                assert_eq!(trial_prime(n), in_sieve, "n={n}");
            }
        }
    }

    #[test]
    fn squarefree_examples() {
        assert!(is_squarefree(34));
        assert!(!is_squarefree(8));
        assert!(is_squarefree(6));
        assert!(is_squarefree(1));
        assert!(!is_squarefree(49 * 3));
        assert!(!is_squarefree(1_000_003 * 1_000_003));
        assert!(is_squarefree(1_000_003 * 999_983));
    }

    #[test]
    fn squarefree_matches_brute() {
        for n in 1..20_000u64 {
            let brute = (2..).take_while(|d| d * d <= n).all(|d| n % (d * d) != 0);
            assert_eq!(is_squarefree(n), brute, "n={n}");
        }
    }

    #[test]
    fn sieve_examples() {
        assert_eq!(primes_between(1, 10).primes, vec![2, 3, 5, 7]);
        assert_eq!(primes_between(90, 100).primes, vec![97]);
        assert_eq!(primes_between(1, 1_000_000).len(), 78498);
        assert!(primes_between(24, 28).is_empty());
        assert_eq!(first_primes(5), vec![2, 3, 5, 7, 11]);
        assert_eq!(first_primes(10_000).last(), Some(&104_729));
    }

    #[test]
    fn segments_join_without_gaps() {
        let whole = primes_between(1, 3 * SEGMENT + 17).primes;
        let lo = primes_between(1, SEGMENT + 5).primes;
        let hi = primes_between(SEGMENT + 6, 3 * SEGMENT + 17).primes;
        assert_eq!(whole, [lo, hi].concat());
    }

    proptest! {
        #[test]
        fn isqrt_brackets(n in 0u64..1_000_000_000_000) {
            let r = isqrt(&(n as i64)) as u64;
            prop_assert!(r * r <= n && n < (r + 1) * (r + 1));
            prop_assert_eq!(isqrt_u64(n), r);
        }

        #[test]
        fn isqrt_bigint_brackets(n in any::<u128>()) {
            let b = BigInt::from(n);
            let r = isqrt(&b);
            prop_assert!(&r * &r <= b && b < (&r + 1u32) * (&r + 1u32));
        }
    }
}
