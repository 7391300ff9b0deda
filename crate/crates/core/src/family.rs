//! Quadratic families `D(t)` whose square roots share a prescribed period.
//!
//! A palindromic inner word `a_1..a_{l-1}` determines
//! `[[E, F], [F, G]] = prod [[a_i, 1], [1, 0]]`, and with it (when `F` or `G`
//! is even) a quadratic `D(t) = a t^2 + b t + c` such that
//! `sqrt(D(t)) = [a0; a_1, ..., a_{l-1}, 2 a0]` for `t ≥ t0`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::cf::expand_sqrt;
use crate::continuant::matrix_product;
use crate::error::{Error, Result};
use crate::int::{is_prime, is_square, is_squarefree, Int};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    /// `a_1 .. a_{l-1}`, possibly empty.
    pub word: Vec<u64>,
    /// Period length `l = word.len() + 1`.
    pub l: usize,
    pub e: BigInt,
    pub f: BigInt,
    pub g: BigInt,
}

impl FamilySpec {
    /// `(-1)^l`.
    pub fn sign(&self) -> i32 {
        if self.l % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// `(E, F, G)` from the matrix product. The empty word gives the identity,
/// hence `E = G = 1`, `F = 0`.
pub fn efg(word: &[u64]) -> Result<FamilySpec> {
    if word.iter().ne(word.iter().rev()) {
        return Err(Error::NotPalindromic(word.iter().map(u64::to_string).collect()));
    }
    if word.contains(&0) {
        return Err(Error::Precondition("letters must be positive".into()));
    }
    let m = matrix_product(word);
    debug_assert_eq!(m.f_top, m.f_bot);
    let spec = FamilySpec {
        word: word.to_vec(),
        l: word.len() + 1,
        e: m.e,
        f: m.f_top,
        g: m.g,
    };
    if &spec.f * &spec.f - &spec.e * &spec.g != BigInt::from(spec.sign()) {
        return Err(Error::Internal(format!("F^2 - EG != (-1)^l for {word:?}")));
    }
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyCase {
    /// `F` even (`E`, `G` odd), or `E`, `F` odd and `G` even.
    Case1,
    /// `F` odd, `E` and `G` even.
    Case2,
    /// `F` and `G` both odd.
    Infeasible,
}

impl FamilyCase {
    pub fn label(self) -> &'static str {
        match self {
            FamilyCase::Case1 => "case1",
            FamilyCase::Case2 => "case2",
            FamilyCase::Infeasible => "infeasible",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyPoly {
    pub case: FamilyCase,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub t0: BigInt,
    /// Smallest `t` with [`a0_of`]`(t) ≥ 1`. Below `t0` for many even-`l`
    /// words, above it for every odd-`l` word.
    pub t_min: BigInt,
    pub discriminant: BigInt,
}

impl FamilyPoly {
    /// First parameter value at which the family is claimed and realised.
    pub fn t_start(&self) -> BigInt {
        self.t0.clone().max(self.t_min.clone())
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        (&self.a * t + &self.b) * t + &self.c
    }
}

fn exact_div(n: BigInt, d: i64, what: &str) -> Result<BigInt> {
    let (q, r) = n.div_rem(&BigInt::from(d));
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::Internal(format!("{what} is not divisible by {d}")))
    }
}

pub fn family_case(spec: &FamilySpec) -> FamilyCase {
    let (e_even, f_even, g_even) = (spec.e.is_even(), spec.f.is_even(), spec.g.is_even());
    match (e_even, f_even, g_even) {
        (_, false, false) => FamilyCase::Infeasible,
        (false, true, false) | (false, false, true) => FamilyCase::Case1,
        (true, false, true) => FamilyCase::Case2,
        // F^2 - EG = ±1 rules the remaining patterns out
        _ => unreachable!("parity pattern excluded by F^2 - EG = ±1"),
    }
}

/// Coefficients, `t0 = floor((-1)^l F G / E) + 1` and the discriminant.
/// Infeasible words get zero coefficients.
pub fn family_poly(spec: &FamilySpec) -> Result<FamilyPoly> {
    let case = family_case(spec);
    let s = BigInt::from(spec.sign());
    let (e, f, g) = (&spec.e, &spec.f, &spec.g);
    let efg = e * f * g;
    // (F^2/4 - s) G^2 = (F^2 - 4s) G^2 / 4
    let c_num = (f * f - &s * 4) * g * g;
    let (a, b, c) = match case {
        FamilyCase::Infeasible => (BigInt::zero(), BigInt::zero(), BigInt::zero()),
        FamilyCase::Case1 => (
            e * e,
            f * 2 - &s * &efg,
            exact_div(c_num, 4, "case1 constant term")?,
        ),
        FamilyCase::Case2 => (
            exact_div(e * e, 4, "E^2")?,
            f - &s * exact_div(efg, 2, "EFG")?,
            exact_div(c_num, 4, "case2 constant term")?,
        ),
    };
    let sfg = &s * f * g;
    let t0 = sfg.div_floor(e) + 1;
    let t_min = match case {
        FamilyCase::Case2 => Integer::div_ceil(&(&sfg + 2), e),
        _ => Integer::div_ceil(&(&sfg + 2), &(e * 2)),
    };
    let discriminant = &b * &b - &a * &c * 4;
    Ok(FamilyPoly {
        case,
        a,
        b,
        c,
        t0,
        t_min,
        discriminant,
    })
}

/// `isqrt(D(t))` in closed form: `E t - (-1)^l F G / 2` in case 1 and
/// `(E t - (-1)^l F G) / 2` in case 2. Case 1 runs at half the parameter
/// scale of case 2.
pub fn a0_of(spec: &FamilySpec, t: &BigInt) -> BigInt {
    let sfg = BigInt::from(spec.sign()) * &spec.f * &spec.g;
    match family_case(spec) {
        FamilyCase::Case2 => (&spec.e * t - sfg) / 2,
        _ => &spec.e * t - sfg / 2,
    }
}

/// `D(t) = (A1 t - B1)(A2 t - B2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub e_plus: BigInt,
    pub e_minus: BigInt,
    pub g_plus: BigInt,
    pub g_minus: BigInt,
    pub left: (BigInt, BigInt),
    pub right: (BigInt, BigInt),
    /// Both linear factors are positive at `t0` (and so for all `t ≥ t0`).
    pub positive_from_t0: bool,
}

impl Factorization {
    pub fn factors_at(&self, t: &BigInt) -> (BigInt, BigInt) {
        (
            &self.left.0 * t - &self.left.1,
            &self.right.0 * t - &self.right.1,
        )
    }
}

/// Even-period split of `D(t)` into two linear factors.
///
/// # Errors
/// Odd `l` or an infeasible word; [`Error::Internal`] if the gcd split or
/// the polynomial identity fails.
pub fn factorize(spec: &FamilySpec) -> Result<Factorization> {
    if spec.l % 2 == 1 {
        return Err(Error::Precondition(format!("period length {} is odd", spec.l)));
    }
    let poly = family_poly(spec)?;
    let (e, f, g) = (&spec.e, &spec.f, &spec.g);
    let (fp, fm) = (f + 1, f - 1);
    let (k, halve) = match poly.case {
        FamilyCase::Infeasible => {
            return Err(Error::Precondition("F and G are both odd".into()));
        }
        FamilyCase::Case1 => (1, 2),
        FamilyCase::Case2 => (2, 1),
    };
    let split = |n: &BigInt, m: &BigInt| exact_div(n.gcd(m), k, "gcd");
    let e_plus = split(&fp, e)?;
    let e_minus = split(&fm, e)?;
    let g_plus = split(&fp, g)?;
    let g_minus = split(&fm, g)?;
    let kk = BigInt::from(k);
    let split_ok = fp == &kk * &e_plus * &g_plus
        && fm == &kk * &e_minus * &g_minus
        && *e == &kk * &e_minus * &e_plus
        && *g == &kk * &g_minus * &g_plus;
    if !split_ok {
        return Err(Error::Internal(format!(
            "gcd split fails for {:?}: E±={e_plus},{e_minus} G±={g_plus},{g_minus}",
            spec.word
        )));
    }
    let left = (
        &e_plus * &e_plus,
        exact_div(&g_minus * &g_minus * (f + 2), halve, "G_-^2 (F+2)")?,
    );
    let right = (
        &e_minus * &e_minus,
        exact_div(&g_plus * &g_plus * (f - 2), halve, "G_+^2 (F-2)")?,
    );
    // coefficient-wise: A1 A2, -(A1 B2 + A2 B1), B1 B2
    let identity = left.0.clone() * &right.0 == poly.a
        && -(&left.0 * &right.1 + &right.0 * &left.1) == poly.b
        && &left.1 * &right.1 == poly.c;
    if !identity {
        return Err(Error::Internal(format!(
            "factorization does not expand to D(t) for {:?}",
            spec.word
        )));
    }
    let mut fac = Factorization {
        e_plus,
        e_minus,
        g_plus,
        g_minus,
        left,
        right,
        positive_from_t0: false,
    };
    let (x, y) = fac.factors_at(&poly.t0);
    fac.positive_from_t0 = x.is_positive() && y.is_positive();
    Ok(fac)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeCandidate {
    pub label: &'static str,
    pub numerator: BigInt,
    pub denominator: BigInt,
    /// The quotient when it is an integer greater than 1.
    pub value: Option<BigInt>,
    /// Forced class `(modulus, residue)` of the value if it is prime.
    pub residue: Option<(u32, u32)>,
    /// Ruled out as a prime value by the period-parity argument.
    pub excluded: bool,
}

impl PrimeCandidate {
    pub fn residue_holds(&self) -> Option<bool> {
        let (m, r) = self.residue?;
        let v = self.value.as_ref()?;
        Some(v.mod_floor(&BigInt::from(m)) == BigInt::from(r))
    }
}

/// The two rational expressions a prime `D(t0)` can take.
pub fn prime_candidates(spec: &FamilySpec) -> Result<Vec<PrimeCandidate>> {
    let fac = factorize(spec)?;
    let (ep2, em2) = (&fac.e_plus * &fac.e_plus, &fac.e_minus * &fac.e_minus);
    let make = |label, num: BigInt, den: &BigInt, residue, excluded| {
        let (q, r) = num.div_rem(den);
        PrimeCandidate {
            label,
            value: (r.is_zero() && q > BigInt::one()).then_some(q),
            numerator: num,
            denominator: den.clone(),
            residue,
            excluded,
        }
    };
    Ok(match family_case(spec) {
        FamilyCase::Case1 => vec![
            make("(E+^2-2)/E-^2", &ep2 - 2, &em2, Some((8, 7)), false),
            make("(E-^2+2)/E+^2", &em2 + 2, &ep2, Some((8, 3)), false),
        ],
        FamilyCase::Case2 => vec![
            make("(E+^2-1)/E-^2", &ep2 - 1, &em2, None, false),
            make("(E-^2+1)/E+^2", &em2 + 1, &ep2, Some((4, 1)), true),
        ],
        FamilyCase::Infeasible => unreachable!("factorize rejects infeasible words"),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoundTrip {
    /// Observed period is the word followed by `2 a0`. `minimal` is false
    /// when the observed minimal period is a proper divisor of that word,
    /// e.g. word `(4)` at `D = 5` where the period is `(4)` alone.
    Match { d: BigInt, a0: BigInt, minimal: bool },
    Mismatch {
        d: BigInt,
        expected: Vec<BigInt>,
        observed: Vec<BigInt>,
    },
    Skipped { d: BigInt, reason: &'static str },
}

impl RoundTrip {
    pub fn d(&self) -> &BigInt {
        match self {
            RoundTrip::Match { d, .. } | RoundTrip::Mismatch { d, .. } | RoundTrip::Skipped { d, .. } => d,
        }
    }

    pub fn is_match(&self) -> bool {
        matches!(self, RoundTrip::Match { .. })
    }

    pub fn is_skipped(&self) -> bool {
        matches!(self, RoundTrip::Skipped { .. })
    }
}

fn period_of(d: &BigInt) -> Result<(BigInt, Vec<BigInt>)> {
    match d.to_i64().filter(i64::radicand_fits) {
        Some(small) => {
            let e = expand_sqrt(&small)?;
            Ok((e.a0.into(), e.period.into_iter().map(BigInt::from).collect()))
        }
        None => {
            let e = expand_sqrt(d)?;
            Ok((e.a0, e.period))
        }
    }
}

/// Expands `sqrt(D(t))` and compares its period with the word plus `2 a0`.
/// Values that are `≤ 1`, square, or not squarefree are skipped.
pub fn roundtrip_validate(spec: &FamilySpec, t: &BigInt) -> Result<RoundTrip> {
    let poly = family_poly(spec)?;
    if poly.case == FamilyCase::Infeasible {
        return Err(Error::Precondition("F and G are both odd".into()));
    }
    if *t < poly.t0 {
        return Err(Error::Precondition(format!("t = {t} is below t0 = {}", poly.t0)));
    }
    let d = poly.eval(t);
    let skip = |reason| Ok(RoundTrip::Skipped { d: d.clone(), reason });
    if d <= BigInt::one() {
        return skip("D(t) <= 1");
    }
    if is_square(&d) {
        return skip("square");
    }
    match d.to_u64() {
        Some(v) if !is_squarefree(v) => return skip("not squarefree"),
        Some(_) => {}
        None => return skip("squarefree test out of range"),
    }
    let (a0, observed) = period_of(&d)?;
    let mut expected: Vec<BigInt> = spec.word.iter().map(|&x| BigInt::from(x)).collect();
    expected.push(&a0 * 2);
    let repeats = !observed.is_empty()
        && expected.len() % observed.len() == 0
        && expected
            .iter()
            .zip(observed.iter().cycle())
            .all(|(x, y)| x == y);
    Ok(if repeats {
        RoundTrip::Match {
            d,
            a0,
            minimal: observed.len() == expected.len(),
        }
    } else {
        RoundTrip::Mismatch { d, expected, observed }
    })
}

/// The first `count` values `t ≥ max(t0, t_min)` whose `D(t)` is squarefree (and `> 1`,
/// non-square), each with its round-trip outcome. Gives up after `limit`
/// candidates of `t`.
pub fn admissible_values(
    spec: &FamilySpec,
    count: usize,
    limit: usize,
) -> Result<Vec<(BigInt, RoundTrip)>> {
    let poly = family_poly(spec)?;
    let mut out = Vec::new();
    let mut t = poly.t_start();
    for _ in 0..limit {
        if out.len() == count {
            break;
        }
        let r = roundtrip_validate(spec, &t)?;
        if !r.is_skipped() {
            out.push((t.clone(), r));
        }
        t += 1;
    }
    Ok(out)
}

/// Every palindrome of length `0..=max_len` over `1..=max_letter`, shortest
/// first, lexicographic within a length.
pub fn palindromes(max_len: usize, max_letter: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for len in 0..=max_len {
        let half = len.div_ceil(2) as u32;
        for code in 0..max_letter.pow(half) {
            // base-`max_letter` digits of `code`, most significant first
            let mut digits: Vec<u64> = (0..half)
                .rev()
                .map(|i| code / max_letter.pow(i) % max_letter + 1)
                .collect();
            let mirror: Vec<u64> = digits[..len / 2].iter().rev().copied().collect();
            digits.extend(mirror);
            out.push(digits);
        }
    }
    out
}

/// `(E t - F G) / 2`, the closed form printed with the family statement, as
/// an exact fraction `(numerator, denominator)` in lowest terms.
pub fn a0_closed_form(spec: &FamilySpec, t: &BigInt) -> (BigInt, BigInt) {
    let num = &spec.e * t - &spec.f * &spec.g;
    if num.is_even() {
        (num / 2, BigInt::one())
    } else {
        (num, BigInt::from(2))
    }
}

fn num(b: &BigInt) -> Value {
    // arbitrary_precision keeps every digit
    serde_json::from_str(&b.to_str_radix(10)).expect("integer literal")
}

fn nums(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(num).collect())
}

/// Everything the `family` subcommand prints for one word.
pub fn family_report(word: &[u64], count: usize) -> Result<Value> {
    let spec = efg(word)?;
    let poly = family_poly(&spec)?;
    let mut report = json!({
        "word": word,
        "l": spec.l,
        "E": num(&spec.e),
        "F": num(&spec.f),
        "G": num(&spec.g),
        "poly": {
            "case": poly.case.label(),
            "a": num(&poly.a),
            "b": num(&poly.b),
            "c": num(&poly.c),
            "t0": num(&poly.t0),
            "t_min": num(&poly.t_min),
            "discriminant": num(&poly.discriminant),
        },
    });
    if poly.case == FamilyCase::Infeasible {
        return Ok(report);
    }
    if spec.l % 2 == 0 {
        let fac = factorize(&spec)?;
        report["factorization"] = json!({
            "E_plus": num(&fac.e_plus),
            "E_minus": num(&fac.e_minus),
            "G_plus": num(&fac.g_plus),
            "G_minus": num(&fac.g_minus),
            "left": [num(&fac.left.0), num(&fac.left.1)],
            "right": [num(&fac.right.0), num(&fac.right.1)],
            "positive_from_t0": fac.positive_from_t0,
        });
        report["candidates"] = Value::Array(
            prime_candidates(&spec)?
                .iter()
                .map(|c| {
                    json!({
                        "form": c.label,
                        "numerator": num(&c.numerator),
                        "denominator": num(&c.denominator),
                        "value": c.value.as_ref().map(num),
                        "residue": c.residue.map(|(m, r)| format!("{r} mod {m}")),
                        "excluded": c.excluded,
                    })
                })
                .collect(),
        );
    }
    let rows: Vec<Value> = admissible_values(&spec, count, 100 * count.max(1))?
        .into_iter()
        .map(|(t, r)| {
            let (an, ad) = a0_closed_form(&spec, &t);
            let closed = if ad.is_one() {
                an.to_string()
            } else {
                format!("{an}/{ad}")
            };
            let prime = r.d().to_u64().is_some_and(is_prime);
            match r {
                RoundTrip::Match { d, a0, minimal } => json!({
                    "t": num(&t), "D": num(&d), "a0": num(&a0), "a0_closed_form": closed,
                    "a0_case_form": num(&a0_of(&spec, &t)),
                    "prime": prime, "match": true, "minimal": minimal,
                }),
                RoundTrip::Mismatch { d, expected, observed } => json!({
                    "t": num(&t), "D": num(&d), "a0_closed_form": closed, "prime": prime,
                    "match": false, "expected": nums(&expected), "observed": nums(&observed),
                }),
                RoundTrip::Skipped { .. } => unreachable!("skipped values are filtered"),
            }
        })
        .collect();
    report["roundtrip"] = Value::Array(rows);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int::isqrt;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn efg_examples() {
        let s = efg(&[1, 1, 1]).unwrap();
        assert_eq!((s.l, s.e, s.f, s.g), (4, b(3), b(2), b(1)));
        let s = efg(&[]).unwrap();
        assert_eq!((s.l, s.e, s.f, s.g), (1, b(1), b(0), b(1)));
        let s = efg(&[2]).unwrap();
        assert_eq!((s.l, s.e, s.f, s.g), (2, b(2), b(1), b(0)));
        assert!(matches!(efg(&[1, 2]), Err(Error::NotPalindromic(_))));
    }

    #[test]
    fn poly_examples() {
        let p = family_poly(&efg(&[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(p.case, FamilyCase::Case1);
        assert_eq!((p.a.clone(), p.b.clone(), p.c.clone(), p.t0.clone()), (b(9), b(-2), b(0), b(1)));
        assert_eq!(p.eval(&b(1)), b(7));
        assert_eq!(p.discriminant, b(4));

        let p = family_poly(&efg(&[2]).unwrap()).unwrap();
        assert_eq!(p.case, FamilyCase::Case2);
        assert_eq!((p.a.clone(), p.b.clone(), p.c.clone(), p.t0.clone()), (b(1), b(1), b(0), b(1)));
        assert_eq!(p.discriminant, b(1));

        let p = family_poly(&efg(&[]).unwrap()).unwrap();
        assert_eq!((p.a.clone(), p.b.clone(), p.c.clone(), p.t0.clone()), (b(1), b(0), b(1), b(1)));
        assert_eq!(p.discriminant, b(-4));

        // [[1,1],[1,0]] [[1,1],[1,0]] = [[2,1],[1,1]]: F, G odd
        let s = efg(&[1, 1]).unwrap();
        assert_eq!(family_case(&s), FamilyCase::Infeasible);
    }

    #[test]
    fn factorization_examples() {
        let f = factorize(&efg(&[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(
            (f.e_plus.clone(), f.e_minus.clone(), f.g_minus.clone(), f.g_plus.clone()),
            (b(3), b(1), b(1), b(1))
        );
        assert_eq!((f.left.clone(), f.right.clone()), ((b(9), b(2)), (b(1), b(0))));
        assert_eq!(f.factors_at(&b(1)), (b(7), b(1)));
        assert!(f.positive_from_t0);
        // case1 with F odd
        let f = factorize(&efg(&[1]).unwrap()).unwrap();
        assert_eq!(f.factors_at(&b(3)), (b(3), b(5)));
        assert!(matches!(factorize(&efg(&[]).unwrap()), Err(Error::Precondition(_))));
    }

    #[test]
    fn candidate_examples() {
        let c = prime_candidates(&efg(&[1, 1, 1]).unwrap()).unwrap();
        assert_eq!(c[0].value, Some(b(7)));
        assert_eq!(c[0].residue_holds(), Some(true));
        assert_eq!(c[1].value, None);
        let c = prime_candidates(&efg(&[2]).unwrap()).unwrap();
        assert!(c[1].excluded && !c[0].excluded);
    }

    #[test]
    fn roundtrip_examples() {
        let s = efg(&[1, 1, 1]).unwrap();
        assert_eq!(
            roundtrip_validate(&s, &b(1)).unwrap(),
            RoundTrip::Match { d: b(7), a0: b(2), minimal: true }
        );
        let s = efg(&[]).unwrap();
        assert!(roundtrip_validate(&s, &b(2)).unwrap().is_match());
        assert!(roundtrip_validate(&s, &b(0)).is_err());
        // word (4) at t0: D = 5 has period (4) only
        let s = efg(&[4]).unwrap();
        let p = family_poly(&s).unwrap();
        assert_eq!(p.eval(&p.t0), b(5));
        assert!(matches!(
            roundtrip_validate(&s, &p.t0).unwrap(),
            RoundTrip::Match { minimal: false, .. }
        ));
    }

    #[test]
    fn odd_length_words_start_above_t0() {
        // l = 7: t0 = -5, yet t = -3 lands outside the family
        let s = efg(&[1, 1, 2, 2, 1, 1]).unwrap();
        let p = family_poly(&s).unwrap();
        assert_eq!((p.t0.clone(), p.t_min.clone()), (b(-5), b(-2)));
        let r = roundtrip_validate(&s, &b(-3)).unwrap();
        assert!(matches!(r, RoundTrip::Mismatch { .. }), "{r:?}");
        for t in -2..40 {
            let r = roundtrip_validate(&s, &b(t)).unwrap();
            assert!(r.is_match() || r.is_skipped(), "t={t} {r:?}");
        }
    }

    #[test]
    fn case_form_a0_matches_isqrt() {
        for w in palindromes(5, 3) {
            let s = efg(&w).unwrap();
            let p = family_poly(&s).unwrap();
            if p.case == FamilyCase::Infeasible {
                continue;
            }
            for (t, r) in admissible_values(&s, 5, 500).unwrap() {
                match r {
                    RoundTrip::Match { a0, .. } => assert_eq!(a0, a0_of(&s, &t), "{w:?} t={t}"),
                    other => panic!("{w:?} t={t}: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn closed_form_a0_is_off_for_111() {
        let s = efg(&[1, 1, 1]).unwrap();
        assert_eq!(a0_closed_form(&s, &b(1)), (b(1), b(2)));
        assert_eq!(isqrt(&b(7)), b(2));
    }

    #[test]
    fn palindrome_enumeration() {
        let w = palindromes(3, 2);
        assert_eq!(
            w,
            vec![
                vec![],
                vec![1],
                vec![2],
                vec![1, 1],
                vec![2, 2],
                vec![1, 1, 1],
                vec![1, 2, 1],
                vec![2, 1, 2],
                vec![2, 2, 2],
            ]
        );
        assert_eq!(palindromes(7, 4).len(), 425);
    }

    #[test]
    fn report_shape() {
        let r = family_report(&[1, 1, 1], 3).unwrap();
        assert_eq!(r["poly"]["a"], json!(9));
        assert_eq!(r["roundtrip"][0]["D"], json!(7));
        assert_eq!(r["roundtrip"][0]["a0_closed_form"], json!("1/2"));
        assert_eq!(r["roundtrip"].as_array().unwrap().len(), 3);
        let r = family_report(&[1, 1], 3).unwrap();
        assert_eq!(r["poly"]["case"], json!("infeasible"));
        assert!(r.get("roundtrip").is_none());
    }
}
