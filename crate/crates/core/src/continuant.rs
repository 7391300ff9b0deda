//! Continuant polynomials `q_n` evaluated on integer words.
//!
//! `q_{-1} = 0`, `q_0 = 1`, `q_n(x_1..x_n) = x_n q_{n-1}(x_1..x_{n-1}) + q_{n-2}(x_1..x_{n-2})`.
//! The ordered product of `[[x_i, 1], [1, 0]]` carries four continuants at
//! once:
//!
//! ```text
//! [ q_n(x_1..x_n)      q_{n-1}(x_1..x_{n-1}) ]
//! [ q_{n-1}(x_2..x_n)  q_{n-2}(x_2..x_{n-1}) ]
//! ```

use num_bigint::{BigInt, ToBigInt};
use num_traits::{One, Zero};

fn big<L: ToBigInt>(x: &L) -> BigInt {
    x.to_bigint().expect("letters are integers")
}

/// `q_n(seq)` with two running values.
pub fn continuant<L: ToBigInt>(seq: &[L]) -> BigInt {
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    for x in seq {
        let next = big(x) * &cur + &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `q_len(seq[start .. start + len])`, where `len = -1` gives `q_{-1} = 0`.
///
/// Index arithmetic in the identities regularly produces the empty word and
/// the "minus one" word; both are legal here.
pub fn continuant_of_span<L: ToBigInt>(seq: &[L], start: usize, len: isize) -> BigInt {
    match len {
        -1 => BigInt::zero(),
        n if n >= 0 => continuant(&seq[start..start + n as usize]),
        _ => panic!("continuant span of length {len}"),
    }
}

/// Ordered product of the letter matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuantMatrix {
    pub e: BigInt,
    pub f_top: BigInt,
    pub f_bot: BigInt,
    pub g: BigInt,
}

impl ContinuantMatrix {
    pub fn identity() -> Self {
        Self {
            e: BigInt::one(),
            f_top: BigInt::zero(),
            f_bot: BigInt::zero(),
            g: BigInt::one(),
        }
    }

    pub fn determinant(&self) -> BigInt {
        &self.e * &self.g - &self.f_top * &self.f_bot
    }

    /// Right-multiplies by `[[x, 1], [1, 0]]`.
    pub fn push(&mut self, x: &BigInt) {
        let e = x * &self.e + &self.f_top;
        let f_bot = x * &self.f_bot + &self.g;
        self.f_top = std::mem::replace(&mut self.e, e);
        self.g = std::mem::replace(&mut self.f_bot, f_bot);
    }
}

pub fn matrix_product<L: ToBigInt>(seq: &[L]) -> ContinuantMatrix {
    let mut m = ContinuantMatrix::identity();
    for x in seq {
        m.push(&big(x));
    }
    m
}

/// `q_n(x_1..x_n) = q_n(x_n..x_1)`.
pub fn reversal_check<L: ToBigInt + Clone>(seq: &[L]) -> bool {
    let rev: Vec<L> = seq.iter().rev().cloned().collect();
    continuant(seq) == continuant(&rev)
}

/// `q_n(x_1..x_n) q_{n-2}(x_2..x_{n-1}) - q_{n-1}(x_1..x_{n-1}) q_{n-1}(x_2..x_n) = (-1)^n`
/// for `n >= 1`, each factor evaluated independently from its sub-word.
pub fn determinant_check<L: ToBigInt>(seq: &[L]) -> bool {
    let n = seq.len() as isize;
    assert!(n >= 1, "determinant identity needs a nonempty word");
    let lhs = continuant(seq) * continuant_of_span(seq, 1, n - 2)
        - continuant_of_span(seq, 0, n - 1) * continuant_of_span(seq, 1, n - 1);
    lhs == sign(n as usize)
}

/// The matrix product equals the four continuants it is supposed to carry.
pub fn matrix_identity_check<L: ToBigInt>(seq: &[L]) -> bool {
    let n = seq.len() as isize;
    let m = matrix_product(seq);
    if n == 0 {
        return m == ContinuantMatrix::identity();
    }
    m.e == continuant(seq)
        && m.f_top == continuant_of_span(seq, 0, n - 1)
        && m.f_bot == continuant_of_span(seq, 1, n - 1)
        && m.g == continuant_of_span(seq, 1, n - 2)
        && m.determinant() == sign(n as usize)
}

/// `(-1)^n`.
pub fn sign(n: usize) -> BigInt {
    if n % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    // Denominator of [0; x_1, ..., x_n] folded from the right in exact
    // rationals. Independent of the recurrence above.
    fn denominator_oracle(seq: &[u64]) -> BigInt {
        let mut acc: Option<BigRational> = None;
        for &x in seq.iter().rev() {
            let x = BigRational::from_integer(x.into());
            acc = Some(match acc {
                None => x,
                Some(tail) => x + tail.recip(),
            });
        }
        match acc {
            None => BigInt::one(),
            // [0; x_1..] = 1 / [x_1; ..]; its denominator is the numerator of [x_1; ..]
            Some(v) => v.numer().clone(),
        }
    }

    #[test]
    fn continuant_examples() {
        assert_eq!(continuant::<u64>(&[]), BigInt::one());
        assert_eq!(continuant(&[1u64, 1, 1]), BigInt::from(3));
        assert_eq!(continuant(&[2u64, 4]), BigInt::from(9));
        assert_eq!(continuant(&[1u64, 2, 3]), BigInt::from(10));
        assert_eq!(continuant(&[3u64, 2, 1]), BigInt::from(10));
    }

    #[test]
    fn matrix_examples() {
        let m = matrix_product(&[1u64, 1, 1]);
        assert_eq!(
            (m.e, m.f_top, m.f_bot, m.g),
            (3.into(), 2.into(), 2.into(), 1.into())
        );
        assert_eq!(matrix_product::<u64>(&[]), ContinuantMatrix::identity());
        let m = matrix_product(&[7u64]);
        assert_eq!(
            (m.e, m.f_top, m.f_bot, m.g),
            (7.into(), 1.into(), 1.into(), 0.into())
        );
    }

    #[test]
    fn determinant_examples() {
        assert!(determinant_check(&[1u64, 1, 1]));
        assert!(determinant_check(&[5u64]));
        assert!(determinant_check(&[2u64, 4]));
        assert!(reversal_check(&[1u64, 2, 1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn identities_hold(seq in proptest::collection::vec(1u64..=50, 0..=25)) {
            prop_assert!(reversal_check(&seq));
            prop_assert!(matrix_identity_check(&seq));
            if !seq.is_empty() {
                prop_assert!(determinant_check(&seq));
            }
            prop_assert_eq!(continuant(&seq), denominator_oracle(&seq));
        }

        #[test]
        fn palindromes_have_symmetric_matrix(half in proptest::collection::vec(1u64..=9, 0..=8), mid in proptest::option::of(1u64..=9)) {
            let mut seq = half.clone();
            seq.extend(mid);
            seq.extend(half.iter().rev());
            let m = matrix_product(&seq);
            prop_assert_eq!(m.f_top, m.f_bot);
        }
    }
}
