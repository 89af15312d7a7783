//! Unit groups of `k` and of its unramified quadratic extensions
//! `K1 = Q(√p1, √2p2, i)`, `K2 = Q(√p2, √2p1, i)` and `K3 = Q(√2, √p1p2, i)`.
//!
//! In each tower `ε1, ε2, ε3` are the fundamental units of the three real
//! quadratic subfields, with `ε3 = ε_d = x + y√d` always.

pub mod kummer;
pub mod numeric;

use std::fmt;

use crate::gaussian::{divides, two_squares, GaussianInt, TwoSquares};
use crate::numtheory::{is_perfect_square, small_mod, Integer, PrimePair};
use crate::pell::{fundamental_unit_with_cap, QuadUnit, DEFAULT_PERIOD_CAP};
use crate::Error;

/// The sign chosen in an `x ± 1` condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Whether `m(x + 1)` and `m(x − 1)` are perfect squares.
pub fn pm_square_signs(x: &Integer, m: &Integer) -> (bool, bool) {
    (
        is_perfect_square(&(m * (x + 1u32))),
        is_perfect_square(&(m * (x - 1u32))),
    )
}

/// `Some(+)` if `m(x + 1)` is a square, `Some(−)` if `m(x − 1)` is.
pub fn pm_square_test(x: &Integer, m: &Integer) -> Option<Sign> {
    match pm_square_signs(x, m) {
        (true, _) => Some(Sign::Plus),
        (false, true) => Some(Sign::Minus),
        _ => None,
    }
}

/// Which conjugate pairing of the Gaussian primes sits under `√ε`.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SqrtForm {
    /// `π1π3` and `π2π4`.
    P13_24,
    /// `π1π4` and `π2π3`.
    P14_23,
}

impl SqrtForm {
    pub fn name(self) -> &'static str {
        match self {
            SqrtForm::P13_24 => "P13_24",
            SqrtForm::P14_23 => "P14_23",
        }
    }
}

impl fmt::Display for SqrtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Pairing form of a norm −1 unit `(a + b√n)/c`, read from which of
/// `π1, π2` and which of `π3, π4` divide `a + ci`.
pub fn sqrt_form(u: &QuadUnit, t1: &TwoSquares, t2: &TwoSquares) -> Result<SqrtForm, Error> {
    if u.norm_sign() != -1 {
        return Err(Error::Precondition(format!(
            "pairing form needs a unit of norm -1, got {u}"
        )));
    }
    let z = GaussianInt::new(u.x().clone(), u.den_integer());
    let first = [divides(&t1.pi(), &z)?, divides(&t1.pi_conj(), &z)?];
    let second = [divides(&t2.pi(), &z)?, divides(&t2.pi_conj(), &z)?];
    match (first, second) {
        ([true, false], [true, false]) | ([false, true], [false, true]) => Ok(SqrtForm::P13_24),
        ([true, false], [false, true]) | ([false, true], [true, false]) => Ok(SqrtForm::P14_23),
        _ => Err(Error::Inconsistent(format!(
            "no unique pairing for {u} over {} and {}",
            t1.p, t2.p
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tower {
    K1,
    K2,
    K3,
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tower::K1 => "K1",
            Tower::K2 => "K2",
            Tower::K3 => "K3",
        })
    }
}

/// Everything unit-related about one ordered pair, computed once.
#[derive(Debug, Clone)]
pub struct FieldData {
    pair: PrimePair,
    split1: TwoSquares,
    split2: TwoSquares,
    eps_d: QuadUnit,
    eps_p1: QuadUnit,
    eps_p2: QuadUnit,
    eps_2: QuadUnit,
    eps_2p1: QuadUnit,
    eps_2p2: QuadUnit,
    eps_p1p2: QuadUnit,
}

/// The three quadratic units of a tower and the radicands `n1, n2` with
/// `K⁺ = Q(√n1, √n2)`.
#[derive(Debug, Clone, Copy)]
pub struct TowerUnits<'a> {
    pub tower: Tower,
    pub eps: [&'a QuadUnit; 3],
    pub radicands: [&'a Integer; 2],
}

impl FieldData {
    pub fn new(pair: &PrimePair) -> Result<FieldData, Error> {
        FieldData::with_period_cap(pair, DEFAULT_PERIOD_CAP)
    }

    pub fn with_period_cap(pair: &PrimePair, cap: usize) -> Result<FieldData, Error> {
        let (p1, p2) = (pair.p1(), pair.p2());
        let unit = |m: Integer| fundamental_unit_with_cap(&m, cap);
        Ok(FieldData {
            split1: two_squares(p1)?,
            split2: two_squares(p2)?,
            eps_d: unit(pair.d().clone())?,
            eps_p1: unit(p1.clone())?,
            eps_p2: unit(p2.clone())?,
            eps_2: unit(Integer::from(2))?,
            eps_2p1: unit(p1 * 2u32)?,
            eps_2p2: unit(p2 * 2u32)?,
            eps_p1p2: unit(p1 * p2)?,
            pair: pair.clone(),
        })
    }

    pub fn pair(&self) -> &PrimePair {
        &self.pair
    }

    pub fn d(&self) -> &Integer {
        self.pair.d()
    }

    /// `p1 = e² + 4f²`.
    pub fn split_p1(&self) -> &TwoSquares {
        &self.split1
    }

    /// `p2 = g² + 4h²`.
    pub fn split_p2(&self) -> &TwoSquares {
        &self.split2
    }

    /// `π0 = 1 + i`, `π1 = e + 2fi`, `π2 = e − 2fi`, `π3 = g + 2hi`,
    /// `π4 = g − 2hi`.
    pub fn gaussian_prime(&self, j: usize) -> GaussianInt {
        match j {
            0 => GaussianInt::one_plus_i(),
            1 => self.split1.pi(),
            2 => self.split1.pi_conj(),
            3 => self.split2.pi(),
            4 => self.split2.pi_conj(),
            _ => panic!("Gaussian prime index {j} out of range"),
        }
    }

    pub fn eps_d(&self) -> &QuadUnit {
        &self.eps_d
    }

    pub fn eps_p1(&self) -> &QuadUnit {
        &self.eps_p1
    }

    pub fn eps_p2(&self) -> &QuadUnit {
        &self.eps_p2
    }

    pub fn eps_2(&self) -> &QuadUnit {
        &self.eps_2
    }

    pub fn eps_2p1(&self) -> &QuadUnit {
        &self.eps_2p1
    }

    pub fn eps_2p2(&self) -> &QuadUnit {
        &self.eps_2p2
    }

    pub fn eps_p1p2(&self) -> &QuadUnit {
        &self.eps_p1p2
    }

    /// Subfield units keyed by radicand label, in a fixed order.
    pub fn subfield_units(&self) -> [(&'static str, &QuadUnit); 6] {
        [
            ("p1", &self.eps_p1),
            ("p2", &self.eps_p2),
            ("2", &self.eps_2),
            ("2p1", &self.eps_2p1),
            ("2p2", &self.eps_2p2),
            ("p1p2", &self.eps_p1p2),
        ]
    }

    pub fn tower_units(&self, tower: Tower) -> TowerUnits<'_> {
        match tower {
            Tower::K1 => TowerUnits {
                tower,
                eps: [&self.eps_p1, &self.eps_2p2, &self.eps_d],
                radicands: [self.eps_p1.m(), self.eps_2p2.m()],
            },
            Tower::K2 => TowerUnits {
                tower,
                eps: [&self.eps_p2, &self.eps_2p1, &self.eps_d],
                radicands: [self.eps_p2.m(), self.eps_2p1.m()],
            },
            Tower::K3 => TowerUnits {
                tower,
                eps: [&self.eps_2, &self.eps_p1p2, &self.eps_d],
                radicands: [self.eps_2.m(), self.eps_p1p2.m()],
            },
        }
    }

    /// The sign for which `x ± 1` is a square, when `N(ε_d) = 1`.
    pub fn x_square(&self) -> Option<Sign> {
        if self.eps_d.norm_sign() != 1 {
            return None;
        }
        pm_square_test(self.eps_d.x(), &Integer::from(1))
    }
}

/// Hasse unit index of `k`: 2 iff `N(ε_d) = 1` and `x ± 1` is a square.
pub fn q_k_index(data: &FieldData) -> Result<u8, Error> {
    let q = if data.x_square().is_some() { 2 } else { 1 };
    let five_mod_eight =
        small_mod(data.pair().p1(), 8) == 5 || small_mod(data.pair().p2(), 8) == 5;
    if q == 2 && five_mod_eight {
        return Err(Error::Inconsistent(format!(
            "Q_k = 2 for {} although a prime factor is 5 mod 8",
            data.pair()
        )));
    }
    Ok(q)
}

/// Case of the unit classification for one tower, indexed by
/// `(N(ε2), N(ε3))`.
///
/// For `K1`/`K2` the recorded square is `2p(x ± 1)` with `p` the prime
/// adjoined by the tower; for `K3` it is `x ± 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    NegNeg { triple_square: bool },
    PosNeg,
    NegPos { square: Option<Sign> },
    PosPos { square: Option<Sign> },
}

impl Branch {
    pub fn label(&self) -> &'static str {
        match self {
            Branch::NegNeg { triple_square: true } => "1(i)",
            Branch::NegNeg { triple_square: false } => "1(ii)",
            Branch::PosNeg => "2",
            Branch::NegPos { square: Some(_) } => "3(i)",
            Branch::NegPos { square: None } => "3(ii)",
            Branch::PosPos { square: Some(_) } => "4(i)",
            Branch::PosPos { square: None } => "4(ii)",
        }
    }

    pub fn norms(&self) -> (i8, i8) {
        match self {
            Branch::NegNeg { .. } => (-1, -1),
            Branch::PosNeg => (1, -1),
            Branch::NegPos { .. } => (-1, 1),
            Branch::PosPos { .. } => (1, 1),
        }
    }
}

/// A fundamental system of units, written over `ε1, ε2, ε3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitSystem {
    pub real: [&'static str; 3],
    pub full: [&'static str; 3],
    pub alternatives: Vec<[&'static str; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FsuCase {
    pub tower: Tower,
    pub branch: Branch,
    /// Hasse unit index `Q_K`.
    pub q_index: u8,
    /// `q(K⁺/Q)`, reported for `K3` only.
    pub unit_index: Option<u8>,
    /// `[E_k : N(E_K)]`.
    pub norm_unit_index: u8,
    /// Sign for which `x ± 1` is a square (the `Q_k = 2` situation).
    pub x_square: Option<Sign>,
    pub system: UnitSystem,
}

impl FsuCase {
    pub fn kernel_size(&self) -> u8 {
        2 * self.norm_unit_index
    }
}

/// Exact test of `ε1ε2ε3` being a square in the real field of `tower`,
/// through square classes over `Q(i)`.
pub fn tower_triple_product_square(data: &FieldData, tower: Tower) -> Result<bool, Error> {
    let units = data.tower_units(tower);
    if units.eps[1].norm_sign() != -1 || units.eps[2].norm_sign() != -1 {
        return Err(Error::Precondition(format!(
            "triple product test needs N(ε2) = N(ε3) = -1 in {tower}"
        )));
    }
    let radicands = [units.radicands[0].clone(), units.radicands[1].clone()];
    Ok(kummer::unit_product_is_square(&units.eps, 0, &radicands))
}

/// `ε_2·ε_{p1p2}·ε_d` is a square in `Q(√2, √p1p2)` iff the pairing forms
/// of `ε_{p1p2}` and `ε_d` agree.
pub fn triple_product_square(data: &FieldData) -> Result<bool, Error> {
    if data.eps_p1p2.norm_sign() != -1 || data.eps_d.norm_sign() != -1 {
        return Err(Error::Precondition(
            "triple product test needs N(ε_p1p2) = N(ε_d) = -1".into(),
        ));
    }
    let f2 = sqrt_form(&data.eps_p1p2, &data.split1, &data.split2)?;
    let f3 = sqrt_form(&data.eps_d, &data.split1, &data.split2)?;
    Ok(f2 == f3)
}

pub fn classify(data: &FieldData, tower: Tower) -> Result<FsuCase, Error> {
    match tower {
        Tower::K1 | Tower::K2 => classify_split(data, tower),
        Tower::K3 => classify_k3(data),
    }
}

pub fn classify_k1(data: &FieldData) -> Result<FsuCase, Error> {
    classify_split(data, Tower::K1)
}

pub fn classify_k2(data: &FieldData) -> Result<FsuCase, Error> {
    classify_split(data, Tower::K2)
}

fn classify_split(data: &FieldData, tower: Tower) -> Result<FsuCase, Error> {
    let units = data.tower_units(tower);
    let (n2, n3) = (units.eps[1].norm_sign(), units.eps[2].norm_sign());
    let x = data.eps_d.x();
    let p = if tower == Tower::K1 {
        data.pair().p1()
    } else {
        data.pair().p2()
    };
    let twisted = || pm_square_test(x, &(p * 2u32));
    let branch = match (n2, n3) {
        (-1, -1) => Branch::NegNeg {
            triple_square: tower_triple_product_square(data, tower)?,
        },
        (1, -1) => Branch::PosNeg,
        (-1, 1) => Branch::NegPos { square: twisted() },
        _ => Branch::PosPos { square: twisted() },
    };
    let q_index = match branch {
        Branch::NegNeg { triple_square: true } | Branch::NegPos { square: Some(_) } => 1,
        _ => 2,
    };
    let x_square = data.x_square();
    let norm_unit_index = match (n2, n3) {
        (1, 1) if x_square.is_some() => 2,
        (1, 1) => 1,
        (-1, 1) if x_square.is_some() => 4,
        _ => 2,
    };
    Ok(FsuCase {
        tower,
        branch,
        q_index,
        unit_index: None,
        norm_unit_index,
        x_square,
        system: split_system(branch),
    })
}

fn split_system(branch: Branch) -> UnitSystem {
    let plain = ["ε1", "ε2", "ε3"];
    let (real, full, alternatives) = match branch {
        Branch::NegNeg { triple_square: true } => {
            let s = ["ε1", "ε2", "√(ε1ε2ε3)"];
            (s, s, vec![])
        }
        Branch::NegNeg { triple_square: false } => (plain, ["ε1", "ε2", "√(iε1ε2ε3)"], vec![]),
        Branch::PosNeg => (plain, ["ε1", "√(iε2)", "ε3"], vec![]),
        Branch::NegPos { square: Some(_) } => {
            let s = ["ε1", "ε2", "√ε3"];
            (s, s, vec![])
        }
        Branch::NegPos { square: None } => (plain, ["ε1", "ε2", "√(iε3)"], vec![]),
        Branch::PosPos { square: Some(_) } => {
            (["ε1", "ε2", "√ε3"], ["ε1", "√(iε2)", "√ε3"], vec![])
        }
        Branch::PosPos { square: None } => (
            ["ε1", "ε2", "√(ε2ε3)"],
            ["ε1", "√(ε2ε3)", "√(iε3)"],
            vec![["ε1", "√(ε2ε3)", "√(iε2)"], ["ε1", "√(iε2)", "√(iε3)"]],
        ),
    };
    UnitSystem {
        real,
        full,
        alternatives,
    }
}

pub fn classify_k3(data: &FieldData) -> Result<FsuCase, Error> {
    let units = data.tower_units(Tower::K3);
    let (n2, n3) = (units.eps[1].norm_sign(), units.eps[2].norm_sign());
    let x_square = data.x_square();
    let branch = match (n2, n3) {
        (-1, -1) => Branch::NegNeg {
            triple_square: triple_product_square(data)?,
        },
        (1, -1) => Branch::PosNeg,
        (-1, 1) => Branch::NegPos { square: x_square },
        _ => Branch::PosPos { square: x_square },
    };
    let q = match branch {
        Branch::NegNeg { triple_square } => 1 + triple_square as u8,
        Branch::PosNeg => 1,
        Branch::NegPos { square } => 1 + square.is_some() as u8,
        Branch::PosPos { .. } => 2,
    };
    let norm_unit_index = match branch {
        Branch::NegNeg { .. } | Branch::PosNeg => 3 - q,
        Branch::NegPos { .. } => 2,
        Branch::PosPos { square } => 1 + square.is_some() as u8,
    };
    let plain = ["ε1", "ε2", "ε3"];
    let real = match branch {
        Branch::NegNeg { triple_square: true } => ["ε1", "ε2", "√(ε1ε2ε3)"],
        Branch::NegPos { square: Some(_) } | Branch::PosPos { square: Some(_) } => {
            ["ε1", "ε2", "√ε3"]
        }
        Branch::PosPos { square: None } => ["ε1", "ε2", "√(ε2ε3)"],
        _ => plain,
    };
    Ok(FsuCase {
        tower: Tower::K3,
        branch,
        q_index: 1,
        unit_index: Some(q),
        norm_unit_index,
        x_square,
        system: UnitSystem {
            real,
            full: real,
            alternatives: vec![],
        },
    })
}

/// `q(K3⁺/Q)` from the numeric round-and-verify square test.
pub fn k3_unit_index_numeric(data: &FieldData, min_precision_bits: u32) -> Result<u8, Error> {
    let units = data.tower_units(Tower::K3);
    numeric::unit_index(
        units.radicands[0],
        units.radicands[1],
        units.eps,
        min_precision_bits,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::validate_pair_u64;

    fn data(p1: u64, p2: u64) -> FieldData {
        FieldData::new(&validate_pair_u64(p1, p2).unwrap()).unwrap()
    }

    fn int(n: i64) -> Integer {
        Integer::from(n)
    }

    #[test]
    fn pm_square_examples() {
        assert_eq!(pm_square_test(&int(12545), &int(1)), Some(Sign::Minus));
        assert_eq!(pm_square_test(&int(179), &int(5)), Some(Sign::Plus));
        assert_eq!(pm_square_test(&int(179), &int(1)), None);
        assert_eq!(pm_square_test(&int(12995), &int(1)), Some(Sign::Plus));
    }

    #[test]
    fn hasse_index_of_k() {
        assert_eq!(q_k_index(&data(17, 41)).unwrap(), 2);
        assert_eq!(q_k_index(&data(5, 89)).unwrap(), 1);
        assert_eq!(q_k_index(&data(5, 29)).unwrap(), 1);
    }

    #[test]
    fn pairing_forms() {
        let f = data(5, 29);
        assert_eq!(f.eps_d().to_string(), "17+√290");
        assert_eq!(
            sqrt_form(f.eps_d(), f.split_p1(), f.split_p2()).unwrap(),
            SqrtForm::P14_23
        );
        let f = data(5, 13);
        assert_eq!(
            sqrt_form(f.eps_d(), f.split_p1(), f.split_p2()).unwrap(),
            SqrtForm::P13_24
        );
        let f = data(17, 41);
        assert!(matches!(
            sqrt_form(f.eps_d(), f.split_p1(), f.split_p2()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn k1_branches() {
        let c = classify_k1(&data(41, 17)).unwrap();
        assert_eq!(c.branch.norms(), (1, 1));
        assert_eq!(c.kernel_size(), 4);
        let c = classify_k1(&data(5, 29)).unwrap();
        assert_eq!(c.branch.norms(), (-1, -1));
        let c = classify_k1(&data(5, 89)).unwrap();
        assert_eq!(c.branch.norms(), (1, 1));
        assert_eq!(c.kernel_size(), 2);
        let c = classify_k1(&data(89, 5)).unwrap();
        assert_eq!(c.branch.norms(), (-1, 1));
        assert_eq!(c.kernel_size(), 4);
        let c = classify_k1(&data(17, 41)).unwrap();
        assert_eq!(c.branch.norms(), (-1, 1));
        assert_eq!(c.kernel_size(), 8);
    }

    #[test]
    fn k2_mirrors_k1() {
        for (p1, p2) in [(17, 41), (5, 29), (13, 17), (5, 89)] {
            let mut a = classify_k2(&data(p1, p2)).unwrap();
            let b = classify_k1(&data(p2, p1)).unwrap();
            a.tower = Tower::K1;
            assert_eq!(a, b);
        }
        assert_eq!(classify_k2(&data(13, 17)).unwrap().kernel_size(), 4);
    }

    #[test]
    fn k3_unit_index() {
        for (p1, p2, q) in [(5, 13, 2), (5, 29, 1), (29, 37, 2), (13, 29, 1)] {
            let c = classify_k3(&data(p1, p2)).unwrap();
            assert_eq!(c.unit_index, Some(q), "({p1}, {p2})");
            assert_eq!(c.q_index, 1);
        }
        assert_eq!(
            classify_k3(&data(13, 29)).unwrap().branch,
            Branch::PosNeg
        );
    }

    #[test]
    fn triple_products() {
        assert!(triple_product_square(&data(5, 13)).unwrap());
        assert!(!triple_product_square(&data(5, 29)).unwrap());
        assert!(triple_product_square(&data(13, 41)).unwrap());
        assert!(triple_product_square(&data(17, 41)).is_err());
    }

    #[test]
    fn numeric_unit_index_agrees() {
        for (p1, p2) in [(5, 13), (5, 29), (29, 37), (13, 29)] {
            let f = data(p1, p2);
            assert_eq!(
                k3_unit_index_numeric(&f, 0).unwrap(),
                classify_k3(&f).unwrap().unit_index.unwrap()
            );
        }
    }
}
