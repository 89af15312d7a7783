//! Strongly ambiguous classes of `k/Q(i)`: the classes of the ramified
//! primes `H0 | 1+i` and `H_j | π_j`, their principality, and the resulting
//! presentation of `Am_s`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::fsu::{pm_square_test, q_k_index, sqrt_form, FieldData, SqrtForm};
use crate::gaussian::GaussianInt;
use crate::numtheory::{small_mod, squarefree_decomposition, Integer, PrimePair, Slot};
use crate::{Error, Result};

/// An element of `F2^5` over the classes `[H0], …, [H4]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ClassWord(u8);

impl ClassWord {
    pub const IDENTITY: ClassWord = ClassWord(0);
    /// `H1·H2·H3·H4 = (√d / (1+i))`, principal for every pair.
    pub const UNIVERSAL: ClassWord = ClassWord(0b11110);

    pub fn h(j: usize) -> ClassWord {
        assert!(j < 5, "class index {j} out of range");
        ClassWord(1 << j)
    }

    pub fn from_indices(indices: &[usize]) -> ClassWord {
        indices
            .iter()
            .fold(ClassWord::IDENTITY, |w, &j| w * ClassWord::h(j))
    }

    pub fn from_bits(bits: u8) -> ClassWord {
        assert!(bits < 32, "class word {bits:#b} has more than five bits");
        ClassWord(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..5).filter(move |j| self.0 >> j & 1 == 1)
    }

    /// All 32 words.
    pub fn all() -> impl Iterator<Item = ClassWord> {
        (0u8..32).map(ClassWord)
    }

}

impl std::ops::Mul for ClassWord {
    type Output = ClassWord;
    fn mul(self, rhs: ClassWord) -> ClassWord {
        ClassWord(self.0 ^ rhs.0)
    }
}

impl fmt::Display for ClassWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.indices().map(|j| format!("H{j}")).collect();
        f.write_str(&parts.join("*"))
    }
}

impl FromStr for ClassWord {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "1" {
            return Ok(ClassWord::IDENTITY);
        }
        s.split('*').try_fold(ClassWord::IDENTITY, |w, part| {
            let j: usize = part
                .strip_prefix('H')
                .and_then(|n| n.parse().ok())
                .filter(|&j| j < 5)
                .ok_or_else(|| format!("bad class word {s:?}"))?;
            Ok(w * ClassWord::h(j))
        })
    }
}

#[derive(Clone, Copy)]
enum Pivot {
    Lowest,
    Highest,
}

impl Pivot {
    fn of(self, w: ClassWord) -> Option<usize> {
        if w.is_identity() {
            return None;
        }
        Some(match self {
            Pivot::Lowest => w.0.trailing_zeros() as usize,
            Pivot::Highest => 7 - w.0.leading_zeros() as usize,
        })
    }
}

/// Reduced row-echelon basis of the span of `words`, pivots on the lowest
/// index and sorted by pivot.
pub fn echelon_basis(words: &[ClassWord]) -> Vec<ClassWord> {
    echelon(words, Pivot::Lowest)
}

fn echelon(words: &[ClassWord], pivot: Pivot) -> Vec<ClassWord> {
    let mut basis: Vec<ClassWord> = Vec::new();
    for &w in words {
        let r = reduce(w, &basis, pivot);
        if let Some(p) = pivot.of(r) {
            for b in basis.iter_mut() {
                if b.0 >> p & 1 == 1 {
                    *b = *b * r;
                }
            }
            basis.push(r);
        }
    }
    basis.sort_by_key(|&b| pivot.of(b));
    basis
}

/// Clears every pivot position of an echelon `basis` from `w`.
fn reduce(w: ClassWord, basis: &[ClassWord], pivot: Pivot) -> ClassWord {
    basis.iter().fold(w, |acc, &b| {
        let p = pivot.of(b).expect("basis rows are nonzero");
        if acc.0 >> p & 1 == 1 {
            acc * b
        } else {
            acc
        }
    })
}

pub fn rank(words: &[ClassWord]) -> usize {
    echelon_basis(words).len()
}

/// The subgroup generated by `generators` inside the group of words modulo
/// `relations`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub generators: Vec<ClassWord>,
    pub relations: Vec<ClassWord>,
}

impl Subgroup {
    pub fn new(generators: Vec<ClassWord>, relations: Vec<ClassWord>) -> Subgroup {
        Subgroup {
            generators,
            relations,
        }
    }

    /// Relations pivot on the highest index, so reduced words prefer
    /// low-index classes.
    fn relation_basis(&self) -> Vec<ClassWord> {
        echelon(&self.relations, Pivot::Highest)
    }

    pub fn log2_size(&self) -> usize {
        let all: Vec<ClassWord> = self
            .relations
            .iter()
            .chain(self.generators.iter())
            .copied()
            .collect();
        rank(&all) - rank(&self.relations)
    }

    pub fn size(&self) -> u64 {
        1 << self.log2_size()
    }

    /// Whether `w` equals the identity modulo the relations.
    pub fn is_trivial(&self, w: ClassWord) -> bool {
        reduce(w, &self.relation_basis(), Pivot::Highest).is_identity()
    }

    /// Whether the class of `w` lies in the subgroup.
    pub fn contains(&self, w: ClassWord) -> bool {
        let mut all = self.relations.clone();
        all.extend(&self.generators);
        let basis = echelon_basis(&all);
        reduce(w, &basis, Pivot::Lowest).is_identity()
    }

    /// Generators reduced modulo the relations and put in echelon form.
    pub fn canonical(&self) -> Vec<ClassWord> {
        let rel = self.relation_basis();
        let reduced: Vec<ClassWord> = self.generators.iter().map(|&g| reduce(g, &rel, Pivot::Highest)).collect();
        echelon_basis(&reduced)
    }

    /// Whether the generators are independent modulo the relations.
    pub fn generators_independent(&self) -> bool {
        self.log2_size() == self.generators.len()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.generators.iter().all(|&g| other.contains(g))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmbiguousCounts {
    pub rank_r: u8,
    pub am_size: u64,
    pub ams_size: u64,
    /// `[E_F ∩ N(k^×) : N(E_k)]` for `F = Q(i)`.
    pub norm_index: u64,
}

/// Rank of the 2-class group of `k`.
pub fn rank_2class(pair: &PrimePair) -> u8 {
    if pair.both_one_mod_eight() {
        4
    } else {
        3
    }
}

pub fn ambiguous_counts(data: &FieldData) -> Result<AmbiguousCounts> {
    let rank_r = rank_2class(data.pair());
    let am_size = 1u64 << rank_r;
    let ams_size = if rank_r == 4 && q_k_index(data)? == 2 {
        16
    } else {
        8
    };
    Ok(AmbiguousCounts {
        rank_r,
        am_size,
        ams_size,
        norm_index: am_size / ams_size,
    })
}

/// Principality of `H` with `H² = (a + ib)`, from the norm `a² + b²`.
///
/// If `√(a² + b²) ∉ Q(√d)` the ideal is not principal. If `a² + b² = d`
/// and `N(ε_d) = −1`, it is principal iff one of `yd ± ax ± b`,
/// `yd ± bx ± a` is a perfect square. Other norms are rejected.
pub fn principal_by_split(a: &Integer, b: &Integer, data: &FieldData) -> Result<bool> {
    let d = data.d();
    let s: Integer = a * a + b * b;
    if s.is_zero() {
        return Err(Error::Precondition("a + ib must be nonzero".into()));
    }
    let (_, core) = squarefree_decomposition(&s);
    if !core.is_one() && &core != d {
        return Ok(false);
    }
    if &s != d {
        return Err(Error::OutsideHypotheses(format!(
            "a² + b² = {s} has √ in Q(√{d}) but differs from d"
        )));
    }
    let eps = data.eps_d();
    if eps.norm_sign() == 1 {
        return Ok(false);
    }
    let yd: Integer = eps.y() * d;
    let x = eps.x();
    let found = [(a, b), (b, a)].iter().any(|(u, v)| {
        let ux: Integer = *u * x;
        [&yd + &ux, &yd - &ux].iter().any(|base| {
            crate::numtheory::is_perfect_square(&(base + *v))
                || crate::numtheory::is_perfect_square(&(base - *v))
        })
    });
    Ok(found)
}

/// Principality of `H1·H2` (for `p1`) or `H3·H4` (for `p2`).
pub fn pair_product_principal(slot: Slot, data: &FieldData) -> Result<bool> {
    if data.eps_d().norm_sign() == -1 || q_k_index(data)? == 2 {
        return Ok(false);
    }
    let p = match slot {
        Slot::P1 => data.pair().p1(),
        Slot::P2 => data.pair().p2(),
    };
    let x = data.eps_d().x();
    Ok(pm_square_test(x, p).is_some() || pm_square_test(x, &(p * 2u32)).is_some())
}

/// The two principal words `H0·H_i·H_j` given by the pairing form of `ε_d`.
pub fn negative_norm_relations(data: &FieldData) -> Result<[ClassWord; 2]> {
    if data.eps_d().norm_sign() != -1 {
        return Err(Error::Precondition(
            "pairing relations need N(ε_d) = -1".into(),
        ));
    }
    let form = sqrt_form(data.eps_d(), data.split_p1(), data.split_p2())?;
    Ok(relations_for(form))
}

fn relations_for(form: SqrtForm) -> [ClassWord; 2] {
    match form {
        SqrtForm::P13_24 => [
            ClassWord::from_indices(&[0, 1, 3]),
            ClassWord::from_indices(&[0, 2, 4]),
        ],
        SqrtForm::P14_23 => [
            ClassWord::from_indices(&[0, 1, 4]),
            ClassWord::from_indices(&[0, 2, 3]),
        ],
    }
}

/// Which situation fixed the presentation of `Am_s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmsCase {
    /// `N(ε_d) = −1`; relations from the pairing form.
    NegativeNorm(SqrtForm),
    /// `N(ε_d) = 1`, `Q_k = 1`; `H1H2` and `H3H4` principal.
    PositiveNorm,
    /// `N(ε_d) = 1`, `Q_k = 2`; only the universal relation.
    UnitIndexTwo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmsPresentation {
    pub case: AmsCase,
    pub group: Subgroup,
}

pub fn ams_presentation(data: &FieldData) -> Result<AmsPresentation> {
    let h = ClassWord::h;
    if data.eps_d().norm_sign() == -1 {
        let form = sqrt_form(data.eps_d(), data.split_p1(), data.split_p2())?;
        return Ok(AmsPresentation {
            case: AmsCase::NegativeNorm(form),
            group: Subgroup::new(vec![h(0), h(1), h(2)], relations_for(form).to_vec()),
        });
    }
    if q_k_index(data)? == 1 {
        for slot in [Slot::P1, Slot::P2] {
            if !pair_product_principal(slot, data)? {
                return Err(Error::Inconsistent(format!(
                    "N(ε_d) = 1 and Q_k = 1 but the {slot} product ideal is not principal for {}",
                    data.pair()
                )));
            }
        }
        return Ok(AmsPresentation {
            case: AmsCase::PositiveNorm,
            group: Subgroup::new(
                vec![h(0), h(1), h(3)],
                vec![h(1) * h(2), h(3) * h(4)],
            ),
        });
    }
    Ok(AmsPresentation {
        case: AmsCase::UnitIndexTwo,
        group: Subgroup::new(vec![h(0), h(1), h(2), h(3)], vec![ClassWord::UNIVERSAL]),
    })
}

/// Whether `A + B√d` (with `A, B ∈ Z[i]`) is a square in `Q(i, √d)`.
pub fn is_square_in_k(a: &GaussianInt, b: &GaussianInt, d: &Integer) -> bool {
    if b.is_zero() {
        return a.is_square() || a.scale(d).is_square();
    }
    let norm = &a.square() - &b.square().scale(d);
    let Some(c) = norm.sqrt() else {
        return false;
    };
    [a + &c, a - &c].iter().any(|t| {
        let doubled = t.scale(&Integer::from(2));
        !doubled.is_zero() && doubled.is_square()
    })
}

/// Representatives of `E_k` modulo squares, as pairs `(A, B)` meaning
/// `A + B√d` up to a square factor.
fn unit_classes(data: &FieldData) -> Result<Vec<(GaussianInt, GaussianInt)>> {
    let zero = GaussianInt::default();
    let mut reps = vec![(GaussianInt::one(), zero.clone()), (GaussianInt::i(), zero)];
    let eps = data.eps_d();
    let generator = if q_k_index(data)? == 2 {
        // √(iε) = (1+i)(2u + v√d)/2 where {x+1, x−1} = {4u², dv²}.
        let x = eps.x();
        let (sq, other) = if crate::numtheory::is_perfect_square(&(x + 1u32)) {
            (x + 1u32, x - 1u32)
        } else {
            (x - 1u32, x + 1u32)
        };
        let u: Integer = crate::numtheory::exact_sqrt(&sq).expect("checked square") / 2u32;
        let v = crate::numtheory::exact_sqrt(&(other / data.d()))
            .ok_or_else(|| Error::Inconsistent("x ∓ 1 is not d times a square".into()))?;
        let one_plus_i = GaussianInt::one_plus_i();
        (
            one_plus_i.scale(&(u * 4u32)),
            one_plus_i.scale(&(v * 2u32)),
        )
    } else {
        (
            GaussianInt::from_integer(eps.x().clone()),
            GaussianInt::from_integer(eps.y().clone()),
        )
    };
    let twisted = (generator.0.mul_i(), generator.1.mul_i());
    reps.push(generator);
    reps.push(twisted);
    Ok(reps)
}

/// Principality of the ideal whose square is `(∏_{j ∈ w} π_j)`, decided by
/// exact squareness in `k`.
pub fn is_principal(w: ClassWord, data: &FieldData) -> Result<bool> {
    let g: GaussianInt = w.indices().map(|j| data.gaussian_prime(j)).product();
    let d = data.d();
    Ok(unit_classes(data)?
        .iter()
        .any(|(a, b)| is_square_in_k(&(&g * a), &(&g * b), d)))
}

/// All principal words, by exhaustive exact testing.
pub fn principal_words(data: &FieldData) -> Result<Vec<ClassWord>> {
    let classes = unit_classes(data)?;
    let d = data.d();
    Ok(ClassWord::all()
        .filter(|&w| {
            let g: GaussianInt = w.indices().map(|j| data.gaussian_prime(j)).product();
            classes
                .iter()
                .any(|(a, b)| is_square_in_k(&(&g * a), &(&g * b), d))
        })
        .collect())
}

/// Whether the `2`-class group is of type `(2, 2, 2)`: at least two of
/// `(p1/p2)`, `(2/p1)`, `(2/p2)` equal −1.
pub fn is_type_222(pair: &PrimePair) -> bool {
    let legendre_2 = |p: &Integer| matches!(small_mod(p, 8), 3 | 5);
    let minus = [
        crate::numtheory::jacobi(pair.p1(), pair.p2()).expect("p2 is an odd prime") == -1,
        legendre_2(pair.p1()),
        legendre_2(pair.p2()),
    ];
    minus.iter().filter(|&&m| m).count() >= 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::validate_pair_u64;

    fn data(p1: u64, p2: u64) -> FieldData {
        FieldData::new(&validate_pair_u64(p1, p2).unwrap()).unwrap()
    }

    fn w(s: &str) -> ClassWord {
        s.parse().unwrap()
    }

    #[test]
    fn word_rendering() {
        assert_eq!(ClassWord::from_indices(&[1, 3]).to_string(), "H1*H3");
        assert_eq!(ClassWord::IDENTITY.to_string(), "1");
        assert_eq!(w("H0*H2"), ClassWord::h(0) * ClassWord::h(2));
        assert_eq!(w("H4*H1"), ClassWord::from_indices(&[1, 4]));
        assert!("H5".parse::<ClassWord>().is_err());
        assert!("H1+H2".parse::<ClassWord>().is_err());
    }

    #[test]
    fn echelon_and_size() {
        let g = Subgroup::new(
            vec![w("H0"), w("H1"), w("H2")],
            vec![w("H0*H1*H4"), w("H0*H2*H3")],
        );
        assert_eq!(g.size(), 8);
        assert!(g.is_trivial(ClassWord::UNIVERSAL));
        assert!(g.contains(w("H3")));
        let k = Subgroup::new(vec![w("H1"), w("H0*H3")], g.relations.clone());
        assert_eq!(k.size(), 4);
        assert_eq!(k.canonical(), vec![w("H1"), w("H2")]);
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_2class(&validate_pair_u64(17, 41).unwrap()), 4);
        assert_eq!(rank_2class(&validate_pair_u64(5, 29).unwrap()), 3);
        assert_eq!(rank_2class(&validate_pair_u64(13, 17).unwrap()), 3);
    }

    #[test]
    fn counts() {
        let c = ambiguous_counts(&data(17, 41)).unwrap();
        assert_eq!((c.am_size, c.ams_size, c.norm_index), (16, 16, 1));
        let c = ambiguous_counts(&data(5, 29)).unwrap();
        assert_eq!((c.am_size, c.ams_size, c.norm_index), (8, 8, 1));
        // ε_3298 = 161603 + 2814√3298 with x + 1 = 402².
        let c = ambiguous_counts(&data(97, 17)).unwrap();
        assert_eq!((c.am_size, c.ams_size), (16, 16));
    }

    #[test]
    fn split_criterion_basic_ideals() {
        let f = data(5, 29);
        assert!(!principal_by_split(&Integer::from(1), &Integer::from(1), &f).unwrap());
        assert!(!principal_by_split(&Integer::from(1), &Integer::from(2), &f).unwrap());
        assert!(principal_by_split(&Integer::from(3), &Integer::from(4), &f).is_err());
    }

    #[test]
    fn split_criterion_matches_pairing_for_290() {
        let f = data(5, 29);
        let rel = negative_norm_relations(&f).unwrap();
        for word in [w("H0*H1*H3"), w("H0*H1*H4"), w("H0*H2*H3"), w("H0*H2*H4")] {
            let g: GaussianInt = word.indices().map(|j| f.gaussian_prime(j)).product();
            let verdict = principal_by_split(&g.re, &g.im, &f).unwrap();
            assert_eq!(verdict, rel.contains(&word), "{word}");
        }
    }

    #[test]
    fn pair_product_examples() {
        assert!(pair_product_principal(Slot::P1, &data(5, 89)).unwrap());
        assert!(!pair_product_principal(Slot::P1, &data(17, 41)).unwrap());
        assert!(!pair_product_principal(Slot::P1, &data(5, 29)).unwrap());
    }

    #[test]
    fn negative_norm_relation_examples() {
        assert_eq!(
            negative_norm_relations(&data(5, 29)).unwrap(),
            [w("H0*H1*H4"), w("H0*H2*H3")]
        );
        assert!(negative_norm_relations(&data(17, 41)).is_err());
        let [r1, r2] = negative_norm_relations(&data(13, 41)).unwrap();
        assert_eq!(r1 * r2, ClassWord::UNIVERSAL);
    }

    #[test]
    fn presentations() {
        let a = ams_presentation(&data(5, 29)).unwrap();
        assert_eq!(a.group.generators, vec![w("H0"), w("H1"), w("H2")]);
        assert_eq!(a.group.size(), 8);
        let a = ams_presentation(&data(5, 89)).unwrap();
        assert_eq!(a.group.generators, vec![w("H0"), w("H1"), w("H3")]);
        assert_eq!(a.group.size(), 8);
        let a = ams_presentation(&data(17, 41)).unwrap();
        assert_eq!(a.group.generators.len(), 4);
        assert_eq!(a.group.size(), 16);
    }

    #[test]
    fn exact_principality_matches_presentation() {
        for (p1, p2) in [(5, 29), (5, 89), (17, 41), (13, 17), (5, 13)] {
            let f = data(p1, p2);
            let ams = ams_presentation(&f).unwrap().group;
            for word in ClassWord::all() {
                assert_eq!(
                    is_principal(word, &f).unwrap(),
                    ams.is_trivial(word),
                    "({p1}, {p2}) {word}"
                );
            }
        }
    }

    #[test]
    fn squares_in_k() {
        let d = Integer::from(290);
        let one = GaussianInt::one();
        let zero = GaussianInt::default();
        assert!(is_square_in_k(&GaussianInt::new(0, 2), &zero, &d));
        assert!(is_square_in_k(&GaussianInt::new(290, 0), &zero, &d));
        assert!(!is_square_in_k(&GaussianInt::new(2, 0), &zero, &d));
        // (1 + √290)² = 291 + 2√290
        assert!(is_square_in_k(&GaussianInt::new(291, 0), &GaussianInt::new(2, 0), &d));
        assert!(!is_square_in_k(&one, &one, &d));
    }

    #[test]
    fn type_222() {
        assert!(is_type_222(&validate_pair_u64(5, 29).unwrap()));
        assert!(is_type_222(&validate_pair_u64(5, 13).unwrap()));
        assert!(!is_type_222(&validate_pair_u64(17, 41).unwrap()));
    }
}
