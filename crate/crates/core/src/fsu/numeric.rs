//! Round-and-verify square test in real biquadratic fields `Q(√a, √b)`.
//!
//! A candidate square root is read off from fixed-point approximations of
//! the four real conjugates and then checked by exact squaring, so a `true`
//! answer is always proven. Precision only affects completeness.

use num_traits::{One, Signed, Zero};

use crate::numtheory::Integer;
use crate::pell::QuadUnit;
use crate::Error;

/// Attempts at doubled precision before giving up.
pub const PRECISION_RETRIES: u32 = 3;

/// `(c0 + c1√a + c2√b + c3√ab) / den` with `den > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticElement {
    pub a: Integer,
    pub b: Integer,
    pub coeffs: [Integer; 4],
    pub den: Integer,
}

impl QuarticElement {
    pub fn one(a: &Integer, b: &Integer) -> Self {
        QuarticElement {
            a: a.clone(),
            b: b.clone(),
            coeffs: [Integer::one(), Integer::zero(), Integer::zero(), Integer::zero()],
            den: Integer::one(),
        }
    }

    /// Embeds a unit of `Q(√m)` where `m` is one of `a`, `b`, `ab`.
    pub fn from_unit(a: &Integer, b: &Integer, u: &QuadUnit) -> Result<Self, Error> {
        let slot = if u.m() == a {
            1
        } else if u.m() == b {
            2
        } else if *u.m() == a * b {
            3
        } else {
            return Err(Error::Precondition(format!(
                "√{} is not a basis radical of Q(√{a}, √{b})",
                u.m()
            )));
        };
        let mut coeffs = [Integer::zero(), Integer::zero(), Integer::zero(), Integer::zero()];
        coeffs[0] = u.x().clone();
        coeffs[slot] = u.y().clone();
        Ok(QuarticElement {
            a: a.clone(),
            b: b.clone(),
            coeffs,
            den: u.den_integer(),
        })
    }

    fn basis_factor(&self, i: usize, j: usize) -> Integer {
        let mut f = Integer::one();
        if i & j & 1 == 1 {
            f *= &self.a;
        }
        if i & j & 2 == 2 {
            f *= &self.b;
        }
        f
    }

    pub fn mul(&self, other: &QuarticElement) -> QuarticElement {
        debug_assert!(self.a == other.a && self.b == other.b);
        let mut coeffs = [Integer::zero(), Integer::zero(), Integer::zero(), Integer::zero()];
        for i in 0..4 {
            for j in 0..4 {
                coeffs[i ^ j] += &self.coeffs[i] * &other.coeffs[j] * self.basis_factor(i, j);
            }
        }
        QuarticElement {
            a: self.a.clone(),
            b: self.b.clone(),
            coeffs,
            den: &self.den * &other.den,
        }
    }

    pub fn neg(&self) -> QuarticElement {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = -&*c;
        }
        out
    }

    fn bit_size(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.bits())
            .max()
            .unwrap_or(0)
            .max(self.den.bits())
    }
}

/// Decides whether `u` is a square in `Q(√a, √b)`.
///
/// `min_precision_bits` raises the working precision above the default of
/// `4·bitlength + 64`; the smallest conjugate of a unit is roughly
/// `2^(-3·bitlength)`, so the default keeps its sign well resolved.
pub fn is_square(u: &QuarticElement, min_precision_bits: u32) -> Result<bool, Error> {
    // u is a square iff u·den² is, and the latter has integral coordinates.
    let mut w = u.clone();
    for c in w.coeffs.iter_mut() {
        *c *= &u.den;
    }
    w.den = Integer::one();
    if w.coeffs.iter().all(Zero::is_zero) {
        return Ok(true);
    }

    let bits = w.bit_size() + w.a.bits() + w.b.bits();
    let mut precision = (4 * bits + 64).max(min_precision_bits as u64);
    for _ in 0..=PRECISION_RETRIES {
        match attempt(&w, precision) {
            Attempt::Square => return Ok(true),
            Attempt::NotSquare => return Ok(false),
            Attempt::Inconclusive => precision *= 2,
        }
    }
    Err(Error::Undecided {
        precision_bits: precision / 2,
    })
}

enum Attempt {
    Square,
    NotSquare,
    Inconclusive,
}

fn attempt(w: &QuarticElement, precision: u64) -> Attempt {
    let scale = Integer::one() << precision;
    let fixed_sqrt = |n: &Integer| (n << (2 * precision)).sqrt();
    let root_a = fixed_sqrt(&w.a);
    let root_b = fixed_sqrt(&w.b);
    let root_ab = fixed_sqrt(&(&w.a * &w.b));
    let radical = [scale.clone(), root_a.clone(), root_b.clone(), root_ab];

    // Conjugate (s, t) flips √a when s = 1 and √b when t = 1.
    let sign = |k: usize, s: usize, t: usize| -> bool {
        let flips = (k & 1 == 1 && s == 1) as u8 + (k & 2 == 2 && t == 1) as u8;
        flips % 2 == 1
    };
    let mut roots = Vec::with_capacity(4);
    for s in 0..2 {
        for t in 0..2 {
            let mut value = Integer::zero();
            for k in 0..4 {
                let term = &w.coeffs[k] * &radical[k];
                if sign(k, s, t) {
                    value -= term;
                } else {
                    value += term;
                }
            }
            if !value.is_positive() {
                return Attempt::NotSquare;
            }
            roots.push((value << precision).sqrt());
        }
    }

    let mut inconclusive = false;
    for pattern in 0u8..8 {
        let root_sign = |idx: usize| idx > 0 && (pattern >> (idx - 1)) & 1 == 1;
        let mut traces = Vec::with_capacity(4);
        for k in 0..4 {
            // Tr(α·e_k) = Σ σ(α)·σ(e_k), in fixed point.
            let mut acc = Integer::zero();
            for (idx, root) in roots.iter().enumerate() {
                let (s, t) = (idx >> 1, idx & 1);
                let negative = root_sign(idx) ^ sign(k, s, t);
                if negative {
                    acc -= root;
                } else {
                    acc += root;
                }
            }
            let mut value = acc * &radical[k];
            value >>= precision;
            traces.push(value);
        }
        // At the default precision the rounding error is far below
        // 2^(-precision/4), so anything farther from an integer is not one.
        let half = &scale >> 1u32;
        let tight = &scale >> (precision / 4);
        let mut rounded = Vec::with_capacity(4);
        for t in &traces {
            let r: Integer = (t + &half) >> precision;
            if (t - (&r << precision)).abs() > tight {
                break;
            }
            rounded.push(r);
        }
        if rounded.len() < 4 {
            continue;
        }
        if verify(w, &rounded) {
            return Attempt::Square;
        }
        // Exactly integral traces always square back, so a failure means
        // a near miss that more precision will separate.
        inconclusive = true;
    }
    if inconclusive {
        Attempt::Inconclusive
    } else {
        Attempt::NotSquare
    }
}

/// Checks `α² = w` where `α_k = T_k / (4·a^i·b^j)`, cleared to integers.
fn verify(w: &QuarticElement, traces: &[Integer]) -> bool {
    let ab = &w.a * &w.b;
    let scaled = [
        &traces[0] * &ab,
        &traces[1] * &w.b,
        &traces[2] * &w.a,
        traces[3].clone(),
    ];
    let beta = QuarticElement {
        a: w.a.clone(),
        b: w.b.clone(),
        coeffs: scaled,
        den: Integer::one(),
    };
    let d: Integer = ab * 4u32;
    let d2 = &d * &d;
    let square = beta.mul(&beta);
    square
        .coeffs
        .iter()
        .zip(w.coeffs.iter())
        .all(|(lhs, rhs)| *lhs == rhs * &d2)
}

/// Number of `e ∈ {0,1}^3` with `±ε1^e1 ε2^e2 ε3^e3` a square in `Q(√a, √b)`.
pub fn unit_index(
    a: &Integer,
    b: &Integer,
    units: [&QuadUnit; 3],
    min_precision_bits: u32,
) -> Result<u8, Error> {
    let embedded = units
        .iter()
        .map(|u| QuarticElement::from_unit(a, b, u))
        .collect::<Result<Vec<_>, _>>()?;
    let mut count = 0;
    for mask in 0u8..8 {
        let mut prod = QuarticElement::one(a, b);
        for (j, e) in embedded.iter().enumerate() {
            if mask >> j & 1 == 1 {
                prod = prod.mul(e);
            }
        }
        if is_square(&prod, min_precision_bits)? || is_square(&prod.neg(), min_precision_bits)? {
            count += 1;
        }
    }
    Ok(count)
}
