//! Catalogs of monomial-supported local cohomology inputs and coordinate
//! presentations, enumerated deterministically for the verification suites.

use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::{
    cech_local_cohomology_model, presentation_model, GradedModel, ModelError,
};
use crate::weyl::{Mono, WeylElement};

fn support_mono(n: usize, mask: u32) -> Mono {
    let mut x = vec![0u32; n];
    for i in 0..n {
        if mask & (1 << i) != 0 {
            x[i] = 1;
        }
    }
    Mono { x, d: vec![0; n] }
}

/// All nonempty antichains of nonempty variable supports, each given as a
/// list of squarefree monomials sorted ascending.
pub fn squarefree_antichains(n: usize) -> Vec<Vec<Mono>> {
    assert!(n <= 4, "catalog enumeration is meant for small ambients");
    let supports: Vec<u32> = (1..(1u32 << n)).collect();
    let mut out = Vec::new();
    for pick in 1u64..(1 << supports.len()) {
        let chosen: Vec<u32> = supports
            .iter()
            .enumerate()
            .filter(|(j, _)| pick & (1 << j) != 0)
            .map(|(_, &m)| m)
            .collect();
        let antichain = chosen.iter().all(|&a| {
            chosen.iter().all(|&b| a == b || (a & b != a && a & b != b))
        });
        if antichain {
            let mut gens: Vec<Mono> =
                chosen.iter().map(|&m| support_mono(n, m)).collect();
            gens.sort();
            out.push(gens);
        }
    }
    out.sort();
    out
}

pub struct CechEntry {
    pub gens: Vec<Mono>,
    pub index: usize,
    pub model: Result<Rc<GradedModel>, ModelError>,
}

/// Every antichain paired with every cohomological index, together with the
/// outcome of the model constructor.
pub fn cech_catalog(n: usize) -> Vec<CechEntry> {
    let mut out = Vec::new();
    for gens in squarefree_antichains(n) {
        for index in 0..=n {
            let model = cech_local_cohomology_model(n, &gens, index);
            out.push(CechEntry { gens: gens.clone(), index, model });
        }
    }
    out
}

/// The accepted catalog models, in catalog order.
pub fn accepted_cech_models(n: usize) -> Vec<(Vec<Mono>, usize, Rc<GradedModel>)> {
    cech_catalog(n)
        .into_iter()
        .filter_map(|e| e.model.ok().map(|m| (e.gens, e.index, m)))
        .collect()
}

/// Top local cohomology of the polynomials at all coordinates.
pub fn top_cech_model(n: usize) -> Rc<GradedModel> {
    let gens: Vec<Mono> = (0..n).map(|i| support_mono(n, 1 << i)).collect();
    cech_local_cohomology_model(n, &gens, n).expect("the maximal ideal is accepted at the top")
}

pub struct PresentationEntry {
    pub variable_set: Vec<usize>,
    pub gens: Vec<WeylElement>,
    pub shift: i64,
    pub model: Result<Rc<GradedModel>, ModelError>,
}

/// Cyclic quotients by the left ideal taking the variable on each index in
/// S and the derivative elsewhere, shifted by the size of S.
pub fn coordinate_presentations(n: usize) -> Vec<PresentationEntry> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let variable_set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let gens: Vec<WeylElement> = (0..n)
            .map(|i| {
                if mask & (1 << i) != 0 {
                    WeylElement::var_x(n, i)
                } else {
                    WeylElement::var_d(n, i)
                }
            })
            .collect();
        let shift = variable_set.len() as i64;
        let model = presentation_model(n, &gens, shift);
        out.push(PresentationEntry { variable_set, gens, shift, model });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antichain_counts() {
        assert_eq!(squarefree_antichains(1).len(), 1);
        assert_eq!(squarefree_antichains(2).len(), 4);
        assert_eq!(squarefree_antichains(3).len(), 18);
    }

    #[test]
    fn only_the_maximal_ideal_survives_at_the_top() {
        for n in 1..=3usize {
            let accepted = accepted_cech_models(n);
            let nonzero: Vec<_> = accepted
                .iter()
                .filter(|(_, _, m)| (-(n as i64) - 3..=2).any(|d| m.dim(d) > 0))
                .collect();
            assert_eq!(nonzero.len(), 1, "n {}", n);
            let (gens, index, model) = nonzero[0];
            assert_eq!(*index, n);
            assert_eq!(gens.len(), n);
            assert!(gens.iter().all(|g| g.exp_degree() == 1));
            let top = top_cech_model(n);
            for d in -(n as i64) - 3..=2 {
                assert_eq!(model.dim(d), top.dim(d));
            }
        }
    }

    #[test]
    fn rejections_happen_only_strictly_between_the_ends() {
        for n in 1..=3usize {
            for e in cech_catalog(n) {
                if e.model.is_err() {
                    assert!(e.index > 0 && e.index < n, "n {} index {}", n, e.index);
                }
            }
        }
    }

    #[test]
    fn coordinate_presentations_accept_exactly_the_pure_ideals() {
        for n in 1..=3usize {
            let entries = coordinate_presentations(n);
            assert_eq!(entries.len(), 1 << n);
            for e in &entries {
                let pure = e.variable_set.is_empty() || e.variable_set.len() == n;
                assert_eq!(e.model.is_ok(), pure, "n {} S {:?}", n, e.variable_set);
            }
        }
    }
}
