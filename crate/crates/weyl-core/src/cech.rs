//! Combinatorial cohomology of the alive-component complexes that govern
//! which sign patterns of Laurent exponents survive in a monomial Cech model.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::One;

use crate::matrix::QMatrix;
use crate::weyl::Rat;

fn alive(gens: &[Vec<bool>], pattern: &[bool], mask: u32) -> bool {
    pattern.iter().enumerate().all(|(v, &need)| {
        !need || gens.iter().enumerate().any(|(t, sup)| mask & (1 << t) != 0 && sup[v])
    })
}

fn boundary(from: &[u32], to: &[u32]) -> QMatrix {
    let mut m = QMatrix::zero(to.len(), from.len());
    for (c, &t) in from.iter().enumerate() {
        let mut s = 0u32;
        while s < 32 {
            let bit = 1u32 << s;
            if t & bit == 0 {
                let bigger = t | bit;
                if let Ok(r) = to.binary_search(&bigger) {
                    let below = (t & (bit - 1)).count_ones();
                    let sign = if below % 2 == 0 { Rat::one() } else { -Rat::one() };
                    m.set(r, c, sign);
                }
            }
            s += 1;
        }
    }
    m
}

/// Dimension of the degree-i cohomology of the complex whose components are
/// the generator subsets T with pattern contained in the variable support of
/// the product over T, graded by |T|.
pub(crate) fn pattern_cohomology(gens: &[Vec<bool>], pattern: &[bool], i: usize) -> usize {
    let r = gens.len();
    if i > r {
        return 0;
    }
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); r + 1];
    for mask in 0..(1u32 << r) {
        if alive(gens, pattern, mask) {
            by_size[mask.count_ones() as usize].push(mask);
        }
    }
    let cur = &by_size[i];
    if cur.is_empty() {
        return 0;
    }
    let out_rank = if i < r {
        boundary(cur, &by_size[i + 1]).rank()
    } else {
        0
    };
    let in_rank = if i > 0 {
        boundary(&by_size[i - 1], cur).rank()
    } else {
        0
    };
    cur.len() - out_rank - in_rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sup(bits: &[usize], n: usize) -> Vec<bool> {
        let mut v = vec![false; n];
        for &b in bits {
            v[b] = true;
        }
        v
    }

    fn pat(bits: &[usize], n: usize) -> Vec<bool> {
        sup(bits, n)
    }

    #[test]
    fn no_generators_detect_polynomial_support() {
        assert_eq!(pattern_cohomology(&[], &pat(&[], 2), 0), 1);
        assert_eq!(pattern_cohomology(&[], &pat(&[0], 2), 0), 0);
    }

    #[test]
    fn full_cube_is_acyclic() {
        for n in 1..=3usize {
            let gens: Vec<Vec<bool>> = (0..n).map(|i| sup(&[i], n)).collect();
            for i in 0..=n {
                assert_eq!(pattern_cohomology(&gens, &pat(&[], n), i), 0);
            }
        }
    }

    #[test]
    fn coordinate_generators_concentrate_at_top() {
        for n in 1..=3usize {
            let gens: Vec<Vec<bool>> = (0..n).map(|i| sup(&[i], n)).collect();
            let full: Vec<usize> = (0..n).collect();
            for i in 0..=n {
                let expect = if i == n { 1 } else { 0 };
                assert_eq!(pattern_cohomology(&gens, &pat(&full, n), i), expect);
            }
        }
    }

    #[test]
    fn partial_pattern_survives_single_generator() {
        let gens = vec![sup(&[0], 2)];
        assert_eq!(pattern_cohomology(&gens, &pat(&[0], 2), 1), 1);
        assert_eq!(pattern_cohomology(&gens, &pat(&[0, 1], 2), 1), 0);
    }

    #[test]
    fn redundant_generators_do_not_change_top_cohomology() {
        let gens = vec![sup(&[0], 2), sup(&[1], 2), sup(&[0, 1], 2)];
        let full = pat(&[0, 1], 2);
        assert_eq!(pattern_cohomology(&gens, &full, 2), 1);
        assert_eq!(pattern_cohomology(&gens, &full, 1), 0);
        assert_eq!(pattern_cohomology(&gens, &full, 3), 0);
        for i in 0..=3 {
            assert_eq!(pattern_cohomology(&gens, &pat(&[0], 2), i), 0, "mid pattern at {}", i);
        }
    }

    #[test]
    fn single_product_generator_in_two_variables() {
        let gens = vec![sup(&[0, 1], 2)];
        assert_eq!(pattern_cohomology(&gens, &pat(&[0, 1], 2), 1), 1);
        assert_eq!(pattern_cohomology(&gens, &pat(&[0], 2), 1), 1);
        assert_eq!(pattern_cohomology(&gens, &pat(&[], 2), 0), 0);
        assert_eq!(pattern_cohomology(&gens, &pat(&[], 2), 1), 0);
    }
}
