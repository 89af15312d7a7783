//! Square classes of quadratic units inside fields containing `i`.
//!
//! For `ε = (a + b√n)/c` of norm −1 and `z = a + ci` one has
//! `2cε·z = (z + b√n)²`; for norm +1, `2c(a + c)·ε = (a + c + b√n)²`.
//! So modulo squares of any field containing `i` and `√n`, every unit is
//! congruent to an element of `Q(i)`, and a product of units is a square in
//! `Q(i, √n1, √n2)` iff the product of these representatives lies in
//! `Q(i)^2 · ⟨n1, n2⟩`.

use crate::gaussian::GaussianInt;
use crate::numtheory::Integer;
use crate::pell::QuadUnit;

/// A Gaussian integer in the square class of `u`.
pub fn unit_square_class(u: &QuadUnit) -> GaussianInt {
    let c = u.den_integer();
    let two_c: Integer = &c * 2u32;
    if u.norm_sign() < 0 {
        GaussianInt::new(u.x().clone(), c).scale(&two_c)
    } else {
        GaussianInt::from_integer(two_c * (u.x() + &c))
    }
}

/// The `4` representatives `{1, n1, n2, n1·n2}` of `⟨n1, n2⟩` modulo squares.
fn kummer_group(radicands: &[Integer]) -> Vec<Integer> {
    let mut group = vec![Integer::from(1)];
    for n in radicands {
        let extended: Vec<Integer> = group.iter().map(|g| g * n).collect();
        group.extend(extended);
    }
    group
}

/// Whether the nonzero `g ∈ Z[i]` is a square in `Q(i, √n : n ∈ radicands)`.
pub fn is_square_in_extension(g: &GaussianInt, radicands: &[Integer]) -> bool {
    debug_assert!(!g.is_zero());
    kummer_group(radicands)
        .iter()
        .any(|h| g.scale(h).is_square())
}

/// Whether `i^k · ∏ units` is a square in `Q(i, √n : n ∈ radicands)`.
pub fn unit_product_is_square(units: &[&QuadUnit], i_power: u32, radicands: &[Integer]) -> bool {
    let mut g: GaussianInt = units.iter().map(|u| unit_square_class(u)).product();
    for _ in 0..i_power % 4 {
        g = g.mul_i();
    }
    is_square_in_extension(&g, radicands)
}

/// Number of exponent vectors `e ∈ {0,1}^3` with `ε1^e1 ε2^e2 ε3^e3` a
/// square in `Q(i, √n1, √n2)`; this is the unit index of the real
/// subfield over the product of the quadratic unit groups.
pub fn unit_index_by_square_classes(units: [&QuadUnit; 3], radicands: &[Integer]) -> u8 {
    let mut count = 0;
    for mask in 0u8..8 {
        let chosen: Vec<&QuadUnit> = (0..3)
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| units[j])
            .collect();
        if unit_product_is_square(&chosen, 0, radicands) {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pell::fundamental_unit;

    fn unit(m: i64) -> QuadUnit {
        fundamental_unit(&Integer::from(m)).unwrap()
    }

    #[test]
    fn classes_of_small_units() {
        assert_eq!(unit_square_class(&unit(2)), GaussianInt::new(2, 2));
        assert_eq!(unit_square_class(&unit(5)), GaussianInt::new(4, 8));
        assert_eq!(unit_square_class(&unit(3)), GaussianInt::new(6, 0));
    }

    #[test]
    fn squares_of_units_are_squares() {
        // ε² has trivial class; check through the product of ε with itself.
        for m in [2i64, 5, 13, 1394, 290, 890] {
            let u = unit(m);
            let radicand = [Integer::from(m)];
            assert!(unit_product_is_square(&[&u, &u], 0, &radicand), "m={m}");
            assert!(!unit_product_is_square(&[&u], 0, &radicand), "m={m}");
        }
    }

    #[test]
    fn sqrt_two_eps_1394() {
        // x − 1 = 112², so 2ε is a square in Q(√1394) and √(iε) lies in k.
        let u = unit(1394);
        let radicand = [Integer::from(1394)];
        assert!(unit_product_is_square(&[&u], 1, &radicand));
        let u = unit(890);
        let radicand = [Integer::from(890)];
        assert!(!unit_product_is_square(&[&u], 1, &radicand));
    }
}
