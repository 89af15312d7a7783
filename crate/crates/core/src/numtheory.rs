//! Exact integer utilities: square roots, Jacobi symbols, primality and
//! validation of the prime pairs `p1 ≡ p2 ≡ 1 (mod 4)`.

use std::fmt;

use num_bigint::{BigInt, RandBigInt, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::SeedableRng;
use thiserror::Error;

/// Arbitrary-precision integer used throughout the crate.
pub type Integer = BigInt;

/// Number of random Miller–Rabin rounds used above `2^64`.
pub const PROBABLE_PRIME_ROUNDS: usize = 40;

/// Witness set that makes Miller–Rabin deterministic for all `n < 2^64`.
const DETERMINISTIC_WITNESSES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("square root of negative integer {0}")]
    NegativeSqrt(Integer),
    #[error("Jacobi symbol needs an odd positive modulus, got {0}")]
    BadJacobiModulus(Integer),
}

pub fn isqrt(n: &Integer) -> Result<Integer, NumError> {
    if n.is_negative() {
        return Err(NumError::NegativeSqrt(n.clone()));
    }
    Ok(n.sqrt())
}

pub fn is_perfect_square(n: &Integer) -> bool {
    if n.is_negative() {
        return false;
    }
    // Quadratic residues mod 16 reject most non-squares before the root.
    let low = n.iter_u32_digits().next().unwrap_or(0) & 15;
    if !matches!(low, 0 | 1 | 4 | 9) {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Exact square root when `n` is a perfect square.
pub fn exact_sqrt(n: &Integer) -> Option<Integer> {
    if !is_perfect_square(n) {
        return None;
    }
    Some(n.sqrt())
}

/// The Jacobi symbol `(a/n)` for odd `n ≥ 1`.
pub fn jacobi(a: &Integer, n: &Integer) -> Result<i8, NumError> {
    if !n.is_positive() || n.is_even() {
        return Err(NumError::BadJacobiModulus(n.clone()));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1i8;
    while !a.is_zero() {
        let twos = a.trailing_zeros().unwrap_or(0);
        a >>= twos;
        if twos % 2 == 1 {
            let r = low_bits(&n, 8);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if low_bits(&a, 4) == 3 && low_bits(&n, 4) == 3 {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { result } else { 0 })
}

fn low_bits(n: &Integer, modulus: u32) -> u32 {
    debug_assert!(modulus.is_power_of_two());
    let digit = n.iter_u32_digits().next().unwrap_or(0);
    let digit = if n.sign() == Sign::Minus {
        digit.wrapping_neg()
    } else {
        digit
    };
    digit & (modulus - 1)
}

/// Outcome of a primality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Primality {
    Composite,
    /// Proven: deterministic witness set below `2^64`.
    Prime,
    /// Passed [`PROBABLE_PRIME_ROUNDS`] random strong-pseudoprime rounds.
    ProbablePrime,
}

impl Primality {
    pub fn is_prime(self) -> bool {
        !matches!(self, Primality::Composite)
    }
}

impl fmt::Display for Primality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Primality::Composite => "composite",
            Primality::Prime => "prime",
            Primality::ProbablePrime => "probable",
        })
    }
}

pub fn primality(n: &Integer) -> Primality {
    if n < &Integer::from(2) {
        return Primality::Composite;
    }
    for p in DETERMINISTIC_WITNESSES {
        if n == &Integer::from(p) {
            return Primality::Prime;
        }
        if (n % p).is_zero() {
            return Primality::Composite;
        }
    }
    let n_minus_one: Integer = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let odd = &n_minus_one >> s;
    let strong_witness = |a: &Integer| -> bool {
        let mut x = a.modpow(&odd, n);
        if x.is_one() || x == n_minus_one {
            return false;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                return false;
            }
            if x.is_one() {
                return true;
            }
        }
        true
    };

    if n.bits() <= 64 {
        let composite = DETERMINISTIC_WITNESSES
            .iter()
            .any(|&a| strong_witness(&Integer::from(a)));
        return if composite {
            Primality::Composite
        } else {
            Primality::Prime
        };
    }

    // Seeded from n so repeated runs agree.
    let seed = n.iter_u64_digits().fold(0x9e37_79b9_7f4a_7c15u64, |acc, w| {
        acc.rotate_left(17) ^ w.wrapping_mul(0xbf58_476d_1ce4_e5b9)
    });
    let mut rng = StdRng::seed_from_u64(seed);
    let two = Integer::from(2);
    for _ in 0..PROBABLE_PRIME_ROUNDS {
        let a = rng.gen_bigint_range(&two, &n_minus_one);
        if strong_witness(&a) {
            return Primality::Composite;
        }
    }
    Primality::ProbablePrime
}

pub fn is_prime(n: &Integer) -> bool {
    primality(n).is_prime()
}

/// Writes `n = s² · t` with `t` squarefree, by trial division.
///
/// Intended for the small norms that appear in ideal computations; the cost
/// grows like `√n`.
pub fn squarefree_decomposition(n: &Integer) -> (Integer, Integer) {
    assert!(n.is_positive(), "squarefree decomposition of non-positive {n}");
    let mut rest = n.clone();
    let mut square_root = Integer::one();
    let mut core = Integer::one();
    let mut p = Integer::from(2);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            square_root *= p.pow(e / 2);
            if e % 2 == 1 {
                core *= &p;
            }
        }
        p += if p == Integer::from(2) { 1 } else { 2 };
    }
    core *= rest;
    (square_root, core)
}

/// Squarefreeness by trial division up to `n^(1/3)`.
///
/// After removing every prime below the cube root, the cofactor has at most
/// two prime factors, so it is squarefree unless it is a perfect square.
pub fn is_squarefree(n: &Integer) -> bool {
    if !n.is_positive() {
        return false;
    }
    let mut rest = n.clone();
    let bound = n.cbrt() + 1u32;
    let mut p = Integer::from(2);
    while p <= bound {
        if (&rest % &p).is_zero() {
            rest /= &p;
            if (&rest % &p).is_zero() {
                return false;
            }
        }
        p += if p == Integer::from(2) { 1 } else { 2 };
    }
    rest.is_one() || !is_perfect_square(&rest)
}

/// Which member of the pair an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    P1,
    P2,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slot::P1 => "p1",
            Slot::P2 => "p2",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("{slot} = {value} is not prime")]
    NotPrime { slot: Slot, value: Integer },
    #[error("{slot} = {value} is not congruent to 1 mod 4")]
    ResidueClass { slot: Slot, value: Integer },
    #[error("primes must be distinct (both are {0})")]
    NotDistinct(Integer),
}

impl PairError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            PairError::NotPrime { .. } => "not_prime",
            PairError::ResidueClass { .. } => "residue_class",
            PairError::NotDistinct(_) => "not_distinct",
        }
    }
}

/// An ordered pair of distinct primes `p1 ≡ p2 ≡ 1 (mod 4)` with `d = 2·p1·p2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePair {
    p1: Integer,
    p2: Integer,
    d: Integer,
    certainty: Primality,
}

impl PrimePair {
    pub fn p1(&self) -> &Integer {
        &self.p1
    }

    pub fn p2(&self) -> &Integer {
        &self.p2
    }

    pub fn d(&self) -> &Integer {
        &self.d
    }

    /// `Primality::ProbablePrime` if either member is only a probable prime.
    pub fn certainty(&self) -> Primality {
        self.certainty
    }

    /// The pair with `p1` and `p2` exchanged.
    pub fn swapped(&self) -> PrimePair {
        PrimePair {
            p1: self.p2.clone(),
            p2: self.p1.clone(),
            d: self.d.clone(),
            certainty: self.certainty,
        }
    }

    pub fn both_one_mod_eight(&self) -> bool {
        low_bits(&self.p1, 8) == 1 && low_bits(&self.p2, 8) == 1
    }
}

impl fmt::Display for PrimePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p1, self.p2)
    }
}

pub fn validate_pair(p1: &Integer, p2: &Integer) -> Result<PrimePair, PairError> {
    let mut certainty = Primality::Prime;
    for (slot, value) in [(Slot::P1, p1), (Slot::P2, p2)] {
        match primality(value) {
            Primality::Composite => {
                return Err(PairError::NotPrime {
                    slot,
                    value: value.clone(),
                })
            }
            Primality::ProbablePrime => certainty = Primality::ProbablePrime,
            Primality::Prime => {}
        }
        if low_bits(value, 4) != 1 {
            return Err(PairError::ResidueClass {
                slot,
                value: value.clone(),
            });
        }
    }
    if p1 == p2 {
        return Err(PairError::NotDistinct(p1.clone()));
    }
    Ok(PrimePair {
        p1: p1.clone(),
        p2: p2.clone(),
        d: Integer::from(2) * p1 * p2,
        certainty,
    })
}

/// Convenience wrapper for machine-sized inputs.
pub fn validate_pair_u64(p1: u64, p2: u64) -> Result<PrimePair, PairError> {
    validate_pair(&Integer::from(p1), &Integer::from(p2))
}

/// Primes `p ≡ 1 (mod 4)` with `5 ≤ p ≤ max`.
pub fn primes_one_mod_four(max: u64) -> Vec<u64> {
    (5..=max)
        .step_by(4)
        .filter(|&p| is_prime(&Integer::from(p)))
        .collect()
}

/// Residue of `n` modulo a small positive `m`.
pub fn small_mod(n: &Integer, m: u32) -> u32 {
    n.mod_floor(&Integer::from(m))
        .to_u32()
        .expect("residue fits in u32")
}
