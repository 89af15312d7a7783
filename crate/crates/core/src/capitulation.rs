//! Capitulation kernels of `k` in `K1`, `K2`, `K3` and in the genus field,
//! as subgroups of the strongly ambiguous classes.

use std::fmt;

use crate::ambiguous::{
    ambiguous_counts, ams_presentation, is_principal, is_type_222, AmsPresentation, ClassWord,
    Subgroup,
};
use crate::fsu::{classify_k1, classify_k2, classify_k3, Branch, FieldData, FsuCase, Tower};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KernelTower {
    K1,
    K2,
    K3,
    Genus,
}

impl KernelTower {
    pub fn name(self) -> &'static str {
        match self {
            KernelTower::K1 => "K1",
            KernelTower::K2 => "K2",
            KernelTower::K3 => "K3",
            KernelTower::Genus => "genus",
        }
    }
}

impl fmt::Display for KernelTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl From<Tower> for KernelTower {
    fn from(t: Tower) -> Self {
        match t {
            Tower::K1 => KernelTower::K1,
            Tower::K2 => KernelTower::K2,
            Tower::K3 => KernelTower::K3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelReport {
    pub tower: KernelTower,
    /// `|ker J|`; for the genus field the proven lower bound `|Am_s|`.
    pub size: u64,
    /// Generators as the theorems write them.
    pub generators: Vec<ClassWord>,
    /// Echelon form of the generators modulo the `Am_s` relations.
    pub canonical: Vec<ClassWord>,
    pub case: Option<FsuCase>,
}

impl KernelReport {
    fn new(
        tower: KernelTower,
        size: u64,
        generators: Vec<ClassWord>,
        ams: &AmsPresentation,
        case: Option<FsuCase>,
    ) -> KernelReport {
        let canonical =
            Subgroup::new(generators.clone(), ams.group.relations.clone()).canonical();
        KernelReport {
            tower,
            size,
            generators,
            canonical,
            case,
        }
    }

    pub fn subgroup(&self, ams: &AmsPresentation) -> Subgroup {
        Subgroup::new(self.generators.clone(), ams.group.relations.clone())
    }
}

fn words(list: &[&[usize]]) -> Vec<ClassWord> {
    list.iter().map(|ix| ClassWord::from_indices(ix)).collect()
}

/// Kernel generators for `K1`; `K2` is obtained by swapping the primes.
fn split_generators(case: &FsuCase) -> Vec<ClassWord> {
    let square = case.x_square.is_some();
    match case.branch.norms() {
        (1, 1) if square => words(&[&[1], &[2]]),
        (1, 1) => words(&[&[1]]),
        (-1, 1) if square => words(&[&[1], &[2], &[0, 3]]),
        (-1, 1) => words(&[&[1], &[0, 3]]),
        _ => words(&[&[1], &[2]]),
    }
}

/// `H1 ↔ H3`, `H2 ↔ H4`.
fn swap_primes(w: ClassWord) -> ClassWord {
    let b = w.bits();
    ClassWord::from_bits((b & 1) | (b & 0b00110) << 2 | (b & 0b11000) >> 2)
}

pub fn kernel_k1(data: &FieldData) -> Result<KernelReport> {
    let ams = ams_presentation(data)?;
    kernel_k1_with(data, &ams)
}

fn kernel_k1_with(data: &FieldData, ams: &AmsPresentation) -> Result<KernelReport> {
    let case = classify_k1(data)?;
    Ok(KernelReport::new(
        KernelTower::K1,
        case.kernel_size() as u64,
        split_generators(&case),
        ams,
        Some(case),
    ))
}

pub fn kernel_k2(data: &FieldData) -> Result<KernelReport> {
    let ams = ams_presentation(data)?;
    kernel_k2_with(data, &ams)
}

fn kernel_k2_with(data: &FieldData, ams: &AmsPresentation) -> Result<KernelReport> {
    let case = classify_k2(data)?;
    let generators = if is_type_222(data.pair()) {
        words(&[&[0, 1], &[0, 2]])
    } else {
        split_generators(&case).into_iter().map(swap_primes).collect()
    };
    Ok(KernelReport::new(
        KernelTower::K2,
        case.kernel_size() as u64,
        generators,
        ams,
        Some(case),
    ))
}

pub fn kernel_k3(data: &FieldData) -> Result<KernelReport> {
    let ams = ams_presentation(data)?;
    kernel_k3_with(data, &ams)
}

fn kernel_k3_with(data: &FieldData, ams: &AmsPresentation) -> Result<KernelReport> {
    let case = classify_k3(data)?;
    let generators = match case.branch {
        Branch::NegNeg { .. } | Branch::PosNeg if case.unit_index == Some(2) => words(&[&[0]]),
        Branch::NegNeg { .. } | Branch::PosNeg => words(&[&[0], &[1, 2]]),
        Branch::NegPos { .. } => words(&[&[0], &[1, 3]]),
        Branch::PosPos { square: Some(_) } => words(&[&[0], &[1, 2]]),
        Branch::PosPos { square: None } => words(&[&[0]]),
    };
    Ok(KernelReport::new(
        KernelTower::K3,
        case.kernel_size() as u64,
        generators,
        ams,
        Some(case),
    ))
}

/// `Am_s ⊆ ker J_{k*}`: the `Am_s` generators, with `|Am_s|` as size.
pub fn genus_kernel(data: &FieldData) -> Result<KernelReport> {
    let ams = ams_presentation(data)?;
    Ok(genus_kernel_with(&ams))
}

fn genus_kernel_with(ams: &AmsPresentation) -> KernelReport {
    KernelReport::new(
        KernelTower::Genus,
        ams.group.size(),
        ams.group.generators.clone(),
        ams,
        None,
    )
}

/// All four kernels and the `Am_s` presentation they are read against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kernels {
    pub ams: AmsPresentation,
    pub k1: KernelReport,
    pub k2: KernelReport,
    pub k3: KernelReport,
    pub genus: KernelReport,
}

impl Kernels {
    pub fn towers(&self) -> [&KernelReport; 3] {
        [&self.k1, &self.k2, &self.k3]
    }
}

pub fn kernels(data: &FieldData) -> Result<Kernels> {
    let ams = ams_presentation(data)?;
    Ok(Kernels {
        k1: kernel_k1_with(data, &ams)?,
        k2: kernel_k2_with(data, &ams)?,
        k3: kernel_k3_with(data, &ams)?,
        genus: genus_kernel_with(&ams),
        ams,
    })
}

/// A failed check of the main theorem, with the offending word if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub tower: Option<KernelTower>,
    pub check: &'static str,
    pub word: Option<ClassWord>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(t) = self.tower {
            write!(f, "{t}: ")?;
        }
        write!(f, "{}", self.check)?;
        if let Some(w) = self.word {
            write!(f, " [{w}]")?;
        }
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub violations: Vec<Violation>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn verdict(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }
}

/// Checks every kernel against `Am_s`: containment, the size formula
/// `|ker J| = 2·[E_k : N(E_K)]`, independence of the generators, the
/// universal relation and `|Am_s|`. The relations are also checked word by
/// word against exact principality in `k`.
pub fn verify_main_theorem(data: &FieldData) -> Result<Verification> {
    let ks = kernels(data)?;
    verify_kernels(data, &ks)
}

pub fn verify_kernels(data: &FieldData, ks: &Kernels) -> Result<Verification> {
    let mut out = Vec::new();
    let ams = &ks.ams.group;
    let counts = ambiguous_counts(data)?;
    let mut fail = |tower, check, word, detail: String| {
        out.push(Violation {
            tower,
            check,
            word,
            detail,
        })
    };

    if ams.size() != counts.ams_size {
        fail(
            None,
            "ams_size",
            None,
            format!("presentation has {} elements, expected {}", ams.size(), counts.ams_size),
        );
    }
    if !ams.is_trivial(ClassWord::UNIVERSAL) {
        fail(None, "universal_relation", Some(ClassWord::UNIVERSAL), String::new());
    }
    for report in ks.towers() {
        let t = Some(report.tower);
        for &g in &report.generators {
            if !ams.contains(g) {
                fail(t, "contained_in_ams", Some(g), String::new());
            }
        }
        let sub = report.subgroup(&ks.ams);
        let case = report.case.as_ref().expect("tower kernels carry their case");
        if report.size != 2 * case.norm_unit_index as u64 {
            fail(t, "size_formula", None, format!("size {}", report.size));
        }
        if sub.size() != report.size || !sub.generators_independent() {
            fail(
                t,
                "independent_generators",
                None,
                format!("span has {} elements, reported {}", sub.size(), report.size),
            );
        }
        if report.size > ams.size() {
            fail(t, "size_bound", None, format!("size {}", report.size));
        }
    }
    for &g in &ams.generators {
        if !ks.genus.generators.contains(&g) {
            fail(Some(KernelTower::Genus), "genus_contains_ams", Some(g), String::new());
        }
    }
    for w in ClassWord::all() {
        if is_principal(w, data)? != ams.is_trivial(w) {
            fail(None, "relations_exact", Some(w), String::new());
        }
    }
    Ok(Verification { violations: out })
}

/// The `(2, 2, 2)` situation and its kernels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Application222 {
    pub q_k3: u8,
    pub k1: KernelReport,
    pub k2: KernelReport,
    pub k3: KernelReport,
    /// `ker J_{k*} = Am_s = C_{k,2}`.
    pub genus: KernelReport,
}

pub fn application_222(data: &FieldData) -> Result<Option<Application222>> {
    if !is_type_222(data.pair()) {
        return Ok(None);
    }
    if data.eps_d().norm_sign() != -1 {
        return Err(Error::Inconsistent(format!(
            "type (2,2,2) but N(ε_d) = 1 for {}",
            data.pair()
        )));
    }
    let ks = kernels(data)?;
    let counts = ambiguous_counts(data)?;
    if counts.am_size != 8 || ks.k1.size != 4 || ks.k2.size != 4 {
        return Err(Error::Inconsistent(format!(
            "type (2,2,2) kernel sizes {} and {} with |Am| = {} for {}",
            ks.k1.size,
            ks.k2.size,
            counts.am_size,
            data.pair()
        )));
    }
    let q_k3 = ks.k3.case.as_ref().and_then(|c| c.unit_index).unwrap_or(0);
    Ok(Some(Application222 {
        q_k3,
        k1: ks.k1,
        k2: ks.k2,
        k3: ks.k3,
        genus: ks.genus,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::validate_pair_u64;

    fn data(p1: u64, p2: u64) -> FieldData {
        FieldData::new(&validate_pair_u64(p1, p2).unwrap()).unwrap()
    }

    fn rendered(r: &KernelReport) -> (u64, Vec<String>) {
        (r.size, r.generators.iter().map(|w| w.to_string()).collect())
    }

    fn expect(r: &KernelReport, size: u64, gens: &[&str]) {
        assert_eq!(rendered(r), (size, gens.iter().map(|s| s.to_string()).collect()));
    }

    #[test]
    fn k1_examples() {
        expect(&kernel_k1(&data(41, 17)).unwrap(), 4, &["H1", "H2"]);
        expect(&kernel_k1(&data(5, 29)).unwrap(), 4, &["H1", "H2"]);
        expect(&kernel_k1(&data(89, 5)).unwrap(), 4, &["H1", "H0*H3"]);
        expect(&kernel_k1(&data(5, 89)).unwrap(), 2, &["H1"]);
        expect(&kernel_k1(&data(17, 41)).unwrap(), 8, &["H1", "H2", "H0*H3"]);
    }

    #[test]
    fn k2_examples() {
        expect(&kernel_k2(&data(13, 17)).unwrap(), 4, &["H3", "H4"]);
        expect(&kernel_k2(&data(5, 29)).unwrap(), 4, &["H0*H1", "H0*H2"]);
        expect(&kernel_k2(&data(17, 41)).unwrap(), 4, &["H3", "H4"]);
    }

    #[test]
    fn k2_theorem_form_matches_mirror() {
        let f = data(5, 29);
        let k2 = kernel_k2(&f).unwrap();
        let ams = ams_presentation(&f).unwrap();
        let mirror = Subgroup::new(words(&[&[3], &[4]]), ams.group.relations.clone());
        assert_eq!(k2.canonical, mirror.canonical());
    }

    #[test]
    fn k3_examples() {
        expect(&kernel_k3(&data(5, 13)).unwrap(), 2, &["H0"]);
        expect(&kernel_k3(&data(5, 29)).unwrap(), 4, &["H0", "H1*H2"]);
        expect(&kernel_k3(&data(5, 89)).unwrap(), 4, &["H0", "H1*H3"]);
        expect(&kernel_k3(&data(17, 433)).unwrap(), 4, &["H0", "H1*H2"]);
    }

    #[test]
    fn genus_examples() {
        expect(&genus_kernel(&data(13, 17)).unwrap(), 8, &["H0", "H1", "H2"]);
        expect(&genus_kernel(&data(17, 41)).unwrap(), 16, &["H0", "H1", "H2", "H3"]);
        expect(&genus_kernel(&data(5, 89)).unwrap(), 8, &["H0", "H1", "H3"]);
    }

    #[test]
    fn main_theorem_examples() {
        for (p1, p2) in [(5, 29), (17, 41), (41, 17), (5, 89), (89, 5), (13, 17)] {
            let v = verify_main_theorem(&data(p1, p2)).unwrap();
            assert!(v.passed(), "({p1}, {p2}): {:?}", v.violations);
        }
    }

    #[test]
    fn broken_kernel_is_reported() {
        let f = data(5, 29);
        let mut ks = kernels(&f).unwrap();
        ks.k1.generators.push(ClassWord::from_indices(&[0]));
        let v = verify_kernels(&f, &ks).unwrap();
        assert!(!v.passed());
        assert_eq!(v.violations[0].check, "independent_generators");
    }

    #[test]
    fn application_examples() {
        let a = application_222(&data(5, 29)).unwrap().unwrap();
        assert_eq!(a.q_k3, 1);
        expect(&a.k1, 4, &["H1", "H2"]);
        expect(&a.k2, 4, &["H0*H1", "H0*H2"]);
        expect(&a.k3, 4, &["H0", "H1*H2"]);
        let a = application_222(&data(5, 13)).unwrap().unwrap();
        assert_eq!(a.q_k3, 2);
        expect(&a.k3, 2, &["H0"]);
        assert!(application_222(&data(17, 41)).unwrap().is_none());
    }

    #[test]
    fn prime_swap_is_an_involution() {
        for w in ClassWord::all() {
            assert_eq!(swap_primes(swap_primes(w)), w);
        }
        assert_eq!(swap_primes(ClassWord::from_indices(&[0, 3])).to_string(), "H0*H1");
    }
}
