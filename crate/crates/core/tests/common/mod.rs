//! Independent oracles for the arithmetic layer: brute-force Pell search,
//! Lucas-sequence power checks, quadratic residues and sums of two squares.
//!
//! Each check returns the number of cases examined or the first mismatch.

#![allow(dead_code)]

use capitula_core::gaussian::two_squares;
use capitula_core::numtheory::{
    is_perfect_square, is_squarefree, jacobi, primes_one_mod_four, Integer,
};
use capitula_core::pell::{fundamental_unit, QuadUnit};
use num_integer::Roots;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn small_primes(limit: u64) -> Vec<u64> {
    let mut sieve = vec![true; limit as usize];
    let mut out = Vec::new();
    for n in 2..limit as usize {
        if sieve[n] {
            out.push(n as u64);
            for k in (n * n..limit as usize).step_by(n) {
                sieve[k] = false;
            }
        }
    }
    out
}

/// `V_k(t, n)`: the trace of `η^k` when `η` has trace `t` and norm `n`.
fn lucas_v(k: u64, t: &Integer, n: i64) -> Integer {
    let n = Integer::from(n);
    let (mut v0, mut v1) = (Integer::from(2), t.clone());
    for _ in 0..k {
        let next = t * &v1 - &n * &v0;
        v0 = std::mem::replace(&mut v1, next);
    }
    v0
}

/// Whether `u` is `±η^k` for a unit `η` of `Q(√m)` and prime `k`.
pub fn is_prime_power_of_unit(u: &QuadUnit, k: u64) -> bool {
    let den = u.den_integer();
    let trace: Integer = u.x() * 2u32 / &den;
    let root: Integer = trace.nth_root(k as u32);
    let lo: Integer = (&root - 2u32).max(Integer::one());
    let mut t = lo;
    while t <= &root + 2u32 {
        for n in [1i64, -1] {
            if lucas_v(k, &t, n) == trace {
                let disc: Integer = &t * &t - 4 * n;
                if disc.is_positive()
                    && (&disc % u.m()).is_zero()
                    && is_perfect_square(&(disc / u.m()))
                {
                    return true;
                }
            }
        }
        t += 1;
    }
    false
}

/// Smallest `y ≥ 1` with `m·y² ± c²` a perfect square, searched up to `bound`.
pub fn brute_force_y(m: u64, c: u64, bound: u64) -> Option<u64> {
    (1..=bound).find(|&y| {
        let base = m as u128 * (y as u128) * (y as u128);
        let c2 = (c * c) as u128;
        let sq = |v: u128| {
            let r = v.sqrt();
            r * r == v
        };
        sq(base + c2) || (base >= c2 && sq(base - c2))
    })
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

/// Fundamental units for squarefree `m < limit`: positive, minimal by brute
/// force when `y ≤ 20000`, and never a prime power of another unit.
pub fn pell_minimality(limit: u64) -> Result<usize, String> {
    let primes = small_primes(400);
    let mut brute_checked = 0;
    let mut checked = 0;
    for m in 2u64..limit {
        if !is_squarefree(&Integer::from(m)) {
            continue;
        }
        let u = fundamental_unit(&Integer::from(m)).map_err(|e| format!("m={m}: {e}"))?;
        ensure!(u.m() == &Integer::from(m), "m={m}: wrong radicand");
        ensure!(u.x().is_positive() && u.y().is_positive(), "m={m}: not positive");
        let c = u.den() as u64;
        if let Some(y) = u.y().to_u64() {
            if y <= 20_000 {
                let found = brute_force_y(m, c, y);
                ensure!(found == Some(y), "m={m}: brute force gives {found:?}, solver {y}");
                brute_checked += 1;
            }
        }
        // Fundamental units are at least (1+√5)/2, so ε = η^k forces
        // k ≤ log(ε)/log(1.6).
        let log_eps = u.x().bits() as f64 + 1.0;
        let max_k = (log_eps / 0.678).ceil() as u64;
        for &k in primes.iter().take_while(|&&k| k <= max_k) {
            ensure!(!is_prime_power_of_unit(&u, k), "m={m} is a {k}-th power");
        }
        checked += 1;
    }
    ensure!(brute_checked > 500, "only {brute_checked} brute-force checks");
    Ok(checked)
}

/// `jacobi(a, p)` against the table of squares mod `p`, odd primes `p < limit`.
pub fn jacobi_residues(limit: u64) -> Result<usize, String> {
    let mut checked = 0;
    for p in small_primes(limit).into_iter().skip(1) {
        let mut residue = vec![false; p as usize];
        for x in 1..p {
            residue[((x * x) % p) as usize] = true;
        }
        for a in 0..p {
            let expected = if a == 0 {
                0
            } else if residue[a as usize] {
                1
            } else {
                -1
            };
            let got = jacobi(&Integer::from(a), &Integer::from(p)).map_err(|e| e.to_string())?;
            ensure!(got == expected, "({a}/{p}) = {got}, expected {expected}");
        }
        checked += 1;
    }
    Ok(checked)
}

/// `p = e² + 4f²` for every prime `p ≡ 1 (mod 4)` below `limit`.
pub fn two_squares_exhaustive(limit: u64) -> Result<usize, String> {
    let mut count = 0;
    for p in primes_one_mod_four(limit) {
        let p_int = Integer::from(p);
        let t = two_squares(&p_int).map_err(|e| format!("p={p}: {e}"))?;
        ensure!(t.e.is_positive() && t.f.is_positive(), "p={p}: non-positive part");
        ensure!(t.e.to_u64().unwrap() % 2 == 1, "p={p}: even e");
        ensure!(&t.e * &t.e + 4 * &t.f * &t.f == p_int, "p={p}: e² + 4f² ≠ p");
        ensure!(t.pi().norm() == p_int, "p={p}: N(π) ≠ p");
        count += 1;
    }
    Ok(count)
}

/// `N(ε_p) = −1` for primes `p ≡ 1 (mod 4)` below `limit`.
pub fn prime_unit_norms(limit: u64) -> Result<usize, String> {
    let ps = primes_one_mod_four(limit);
    for &p in &ps {
        let u = fundamental_unit(&Integer::from(p)).map_err(|e| format!("p={p}: {e}"))?;
        ensure!(u.norm_sign() == -1, "p={p}: N(ε) = +1");
    }
    Ok(ps.len())
}
