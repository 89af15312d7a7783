//! Fundamental units of real quadratic fields from continued fractions.

use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::numtheory::{is_squarefree, isqrt, small_mod, Integer};

/// Default bound on the number of partial quotients examined.
pub const DEFAULT_PERIOD_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    #[error("radicand must exceed 1, got {0}")]
    RadicandTooSmall(Integer),
    #[error("radicand {0} is not squarefree")]
    NotSquarefree(Integer),
    #[error("continued fraction of √{m} did not close within {cap} steps")]
    PeriodCapExceeded { m: Integer, cap: usize },
    #[error("unit invariant violated for √{m}: {reason}")]
    Invariant { m: Integer, reason: String },
}

/// A unit `(x + y√m) / den` of the maximal order of `Q(√m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadUnit {
    m: Integer,
    x: Integer,
    y: Integer,
    den: u8,
    norm_sign: i8,
    period: usize,
}

impl QuadUnit {
    /// Builds a unit after checking `(x² − m·y²)/den² = ±1` exactly.
    pub fn new(m: Integer, x: Integer, y: Integer, den: u8) -> Result<QuadUnit, PellError> {
        let norm = exact_norm(&m, &x, &y, den).ok_or_else(|| PellError::Invariant {
            m: m.clone(),
            reason: format!("({x}, {y}, {den}) does not have norm ±1"),
        })?;
        if den == 2 && (small_mod(&m, 4) != 1 || x.is_even() != y.is_even()) {
            return Err(PellError::Invariant {
                m,
                reason: "half-integral unit outside the maximal order".into(),
            });
        }
        Ok(QuadUnit {
            m,
            x,
            y,
            den,
            norm_sign: norm,
            period: 0,
        })
    }

    pub fn m(&self) -> &Integer {
        &self.m
    }

    pub fn x(&self) -> &Integer {
        &self.x
    }

    pub fn y(&self) -> &Integer {
        &self.y
    }

    pub fn den(&self) -> u8 {
        self.den
    }

    pub fn norm_sign(&self) -> i8 {
        self.norm_sign
    }

    /// Length of the continued-fraction period the unit was read from (0 if
    /// built directly).
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn is_half_integral(&self) -> bool {
        self.den == 2
    }

    pub fn den_integer(&self) -> Integer {
        Integer::from(self.den)
    }
}

impl fmt::Display for QuadUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = if self.y.is_one() {
            format!("{}+√{}", self.x, self.m)
        } else {
            format!("{}+{}√{}", self.x, self.y, self.m)
        };
        if self.den == 1 {
            f.write_str(&body)
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

fn exact_norm(m: &Integer, x: &Integer, y: &Integer, den: u8) -> Option<i8> {
    let n: Integer = x * x - m * y * y;
    let d2 = Integer::from(den as u32 * den as u32);
    if n == d2 {
        Some(1)
    } else if n == -d2 {
        Some(-1)
    } else {
        None
    }
}

pub fn fundamental_unit(m: &Integer) -> Result<QuadUnit, PellError> {
    fundamental_unit_with_cap(m, DEFAULT_PERIOD_CAP)
}

/// Fundamental unit from the period of the continued fraction of `√m`, or
/// of `(1 + √m)/2` when `m ≡ 1 (mod 4)`.
pub fn fundamental_unit_with_cap(m: &Integer, cap: usize) -> Result<QuadUnit, PellError> {
    if m <= &Integer::one() {
        return Err(PellError::RadicandTooSmall(m.clone()));
    }
    if !is_squarefree(m) {
        return Err(PellError::NotSquarefree(m.clone()));
    }
    let omega = small_mod(m, 4) == 1;
    let root = isqrt(m).expect("m is positive");

    let (mut p_state, mut q_state) = if omega {
        (Integer::one(), Integer::from(2))
    } else {
        (Integer::zero(), Integer::one())
    };
    let step = |p: &Integer, q: &Integer| -> (Integer, Integer, Integer) {
        let a = (p + &root).div_floor(q);
        let p_next = &a * q - p;
        let q_next = (m - &p_next * &p_next) / q;
        (a, p_next, q_next)
    };

    let (a0, p1, q1) = step(&p_state, &q_state);
    // Convergents p_k/q_k; (prev, cur) start at index -1 and 0.
    let (mut h_prev, mut h_cur) = (Integer::one(), a0);
    let (mut k_prev, mut k_cur) = (Integer::zero(), Integer::one());
    (p_state, q_state) = (p1, q1);
    let start = (p_state.clone(), q_state.clone());

    // Before step l the pair (h_cur, k_cur) is the convergent of index l-1.
    let mut period = 0usize;
    loop {
        if period >= cap {
            return Err(PellError::PeriodCapExceeded { m: m.clone(), cap });
        }
        let (h_last, k_last) = (h_cur.clone(), k_cur.clone());
        let (a, p_next, q_next) = step(&p_state, &q_state);
        period += 1;
        if (p_next.clone(), q_next.clone()) == start {
            return finish(m, omega, h_last, k_last, period);
        }
        let h_next = &a * &h_cur + &h_prev;
        let k_next = &a * &k_cur + &k_prev;
        h_prev = std::mem::replace(&mut h_cur, h_next);
        k_prev = std::mem::replace(&mut k_cur, k_next);
        p_state = p_next;
        q_state = q_next;
    }
}

fn finish(
    m: &Integer,
    omega: bool,
    h: Integer,
    k: Integer,
    period: usize,
) -> Result<QuadUnit, PellError> {
    let (x, y, den) = if omega {
        let x: Integer = &h * 2u32 - &k;
        if x.is_even() && k.is_even() {
            (x / 2u32, k / 2u32, 1)
        } else {
            (x, k, 2)
        }
    } else {
        (h, k, 1)
    };
    let mut unit = QuadUnit::new(m.clone(), x, y, den)?;
    let expected = if period % 2 == 1 { -1 } else { 1 };
    if unit.norm_sign != expected || !unit.y.is_positive() {
        return Err(PellError::Invariant {
            m: m.clone(),
            reason: format!("period {period} disagrees with norm {}", unit.norm_sign),
        });
    }
    unit.period = period;
    Ok(unit)
}

/// The norm of `u`, recomputed from its coefficients.
pub fn unit_norm(u: &QuadUnit) -> Result<i8, PellError> {
    match exact_norm(&u.m, &u.x, &u.y, u.den) {
        Some(n) if n == u.norm_sign => Ok(n),
        _ => Err(PellError::Invariant {
            m: u.m.clone(),
            reason: "stored norm sign does not match coefficients".into(),
        }),
    }
}
