//! Left Groebner bases over the Weyl algebra for degree-compatible orders,
//! with cofactor tracking, normal forms, syzygies from S-pair reductions,
//! and graded free resolutions.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::One;

use crate::module::ModuleElement;
use crate::order::{BaseOrder, ModMono, ModuleOrder};
use crate::weyl::{Rat, WeylElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    MixedAmbient,
    Inhomogeneous { index: usize },
}

impl fmt::Display for GroebnerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroebnerError::MixedAmbient => write!(f, "generators live in different ambient algebras"),
            GroebnerError::Inhomogeneous { index } => {
                write!(f, "generator {} is not homogeneous", index)
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GroebnerError {}

/// Reduced left Groebner basis together with cofactors over the input
/// generators.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub n: usize,
    pub order: ModuleOrder,
    pub shifts: Vec<i64>,
    pub elems: Vec<ModuleElement>,
    pub cofactors: Vec<ModuleElement>,
    pub input: Vec<ModuleElement>,
}

/// Divide `f` by the listed elements: returns per-element left quotients and
/// the remainder, with f = sum q_k * basis_k + rem exactly.
pub fn divide(
    f: &ModuleElement,
    basis: &[ModuleElement],
    order: &ModuleOrder,
) -> (Vec<WeylElement>, ModuleElement) {
    let n = f.n();
    let mut quots = vec![WeylElement::zero(n); basis.len()];
    let mut rem = ModuleElement::zero(n);
    let mut h = f.clone();
    while let Some((lm, lc)) = h.lead(order) {
        let mut reduced = false;
        for (k, g) in basis.iter().enumerate() {
            let Some((glm, glc)) = g.lead(order) else { continue };
            if glm.divides(&lm) {
                let u = lm.mono.quotient_by(&glm.mono);
                let c = &lc / &glc;
                let q = WeylElement::from_term(n, u, c);
                h = h.sub(&g.act(&q));
                quots[k] = quots[k].add(&q);
                reduced = true;
                break;
            }
        }
        if !reduced {
            let mut t = ModuleElement::zero(n);
            t.set_comp(lm.comp, WeylElement::from_term(n, lm.mono.clone(), lc.clone()));
            rem = rem.add(&t);
            h = h.sub(&t);
        }
    }
    (quots, rem)
}

fn lead_of(g: &ModuleElement, order: &ModuleOrder) -> ModMono {
    g.lead(order).expect("basis elements are nonzero").0
}

fn pair_key(i: usize, j: usize) -> (usize, usize) {
    (i.min(j), i.max(j))
}

/// Buchberger's algorithm on homogeneous module generators.  The returned
/// basis is reduced: minimal leading monomials, fully reduced tails, monic,
/// sorted by leading monomial ascending.
pub fn buchberger_module(
    n: usize,
    gens: &[ModuleElement],
    shifts: &[i64],
    order: ModuleOrder,
) -> Result<GroebnerBasis, GroebnerError> {
    for (idx, g) in gens.iter().enumerate() {
        if g.n() != n {
            return Err(GroebnerError::MixedAmbient);
        }
        if g.degree(shifts).is_err() {
            return Err(GroebnerError::Inhomogeneous { index: idx });
        }
    }

    let mut basis: Vec<ModuleElement> = Vec::new();
    let mut cof: Vec<ModuleElement> = Vec::new();
    for (idx, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let (_, lc) = g.lead(&order).unwrap();
        basis.push(g.scale(&(Rat::one() / lc.clone())));
        let mut c = ModuleElement::zero(n);
        c.set_comp(idx, WeylElement::scalar(n, Rat::one() / lc));
        cof.push(c);
    }

    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            if lead_of(&basis[i], &order).comp == lead_of(&basis[j], &order).comp {
                pairs.insert((i, j));
            }
        }
    }
    let mut treated: BTreeSet<(usize, usize)> = BTreeSet::new();

    while !pairs.is_empty() {
        let mut best: Option<((usize, usize), ModMono)> = None;
        for &(i, j) in &pairs {
            let li = lead_of(&basis[i], &order);
            let lj = lead_of(&basis[j], &order);
            let lcm = ModMono { comp: li.comp, mono: li.mono.lcm(&lj.mono) };
            match &best {
                None => best = Some(((i, j), lcm)),
                Some((bp, bl)) => {
                    let c = order.cmp(&lcm, bl);
                    if c == Ordering::Less || (c == Ordering::Equal && (i, j) < *bp) {
                        best = Some(((i, j), lcm));
                    }
                }
            }
        }
        let ((i, j), lcm) = best.unwrap();
        pairs.remove(&(i, j));
        treated.insert((i, j));

        let mut skip = false;
        for k in 0..basis.len() {
            if k == i || k == j {
                continue;
            }
            let lk = lead_of(&basis[k], &order);
            if lk.divides(&lcm)
                && treated.contains(&pair_key(i, k))
                && treated.contains(&pair_key(j, k))
            {
                skip = true;
                break;
            }
        }
        if skip {
            continue;
        }

        let li = lead_of(&basis[i], &order);
        let lj = lead_of(&basis[j], &order);
        let ui = lcm.mono.quotient_by(&li.mono);
        let uj = lcm.mono.quotient_by(&lj.mono);
        let one = Rat::one();
        let spair = basis[i].act_term(&one, &ui).sub(&basis[j].act_term(&one, &uj));
        let (quots, rem) = divide(&spair, &basis, &order);
        if rem.is_zero() {
            continue;
        }
        let (_, lc) = rem.lead(&order).unwrap();
        let mut new_cof = cof[i].act_term(&one, &ui).sub(&cof[j].act_term(&one, &uj));
        for (k, q) in quots.iter().enumerate() {
            if !q.is_zero() {
                new_cof = new_cof.sub(&cof[k].act(q));
            }
        }
        let inv = Rat::one() / lc;
        basis.push(rem.scale(&inv));
        cof.push(new_cof.scale(&inv));
        let newi = basis.len() - 1;
        let newlead = lead_of(&basis[newi], &order);
        for k in 0..newi {
            if lead_of(&basis[k], &order).comp == newlead.comp {
                pairs.insert((k, newi));
            }
        }
    }

    let mut idxs: Vec<usize> = (0..basis.len()).collect();
    idxs.sort_by(|&a, &b| order.cmp(&lead_of(&basis[a], &order), &lead_of(&basis[b], &order)));
    let mut kept: Vec<usize> = Vec::new();
    for &i in &idxs {
        let li = lead_of(&basis[i], &order);
        if !kept.iter().any(|&k| lead_of(&basis[k], &order).divides(&li)) {
            kept.push(i);
        }
    }

    let mut elems: Vec<ModuleElement> = kept.iter().map(|&i| basis[i].clone()).collect();
    let mut cofs: Vec<ModuleElement> = kept.iter().map(|&i| cof[i].clone()).collect();
    for i in 0..elems.len() {
        let others: Vec<ModuleElement> = elems
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, e)| e.clone())
            .collect();
        let (quots, rem) = divide(&elems[i], &others, &order);
        let mut c = cofs[i].clone();
        for (k, q) in quots.iter().enumerate() {
            if !q.is_zero() {
                let actual = if k < i { k } else { k + 1 };
                c = c.sub(&cofs[actual].act(q));
            }
        }
        elems[i] = rem;
        cofs[i] = c;
    }

    Ok(GroebnerBasis {
        n,
        order,
        shifts: shifts.to_vec(),
        elems,
        cofactors: cofs,
        input: gens.to_vec(),
    })
}

/// Groebner basis of the left ideal generated by homogeneous elements.
pub fn buchberger(
    n: usize,
    gens: &[WeylElement],
    order: BaseOrder,
) -> Result<GroebnerBasis, GroebnerError> {
    let wrapped: Vec<ModuleElement> = gens.iter().map(ModuleElement::from_ideal_element).collect();
    buchberger_module(n, &wrapped, &[0], ModuleOrder::new(order))
}

pub fn normal_form_module(f: &ModuleElement, gb: &GroebnerBasis) -> ModuleElement {
    divide(f, &gb.elems, &gb.order).1
}

pub fn normal_form(f: &WeylElement, gb: &GroebnerBasis) -> WeylElement {
    assert_eq!(gb.shifts.len(), 1, "normal_form expects an ideal basis");
    normal_form_module(&ModuleElement::from_ideal_element(f), gb).comp(0)
}

pub fn is_member(f: &WeylElement, gb: &GroebnerBasis) -> bool {
    normal_form(f, gb).is_zero()
}

/// Multipliers over the original input generators witnessing membership:
/// f = sum w_j * input_j.  `None` when f is not a member.
pub fn membership_certificate(f: &WeylElement, gb: &GroebnerBasis) -> Option<Vec<WeylElement>> {
    assert_eq!(gb.shifts.len(), 1, "certificates expect an ideal basis");
    let (quots, rem) = divide(&ModuleElement::from_ideal_element(f), &gb.elems, &gb.order);
    if !rem.is_zero() {
        return None;
    }
    let n = gb.n;
    let mut out = vec![WeylElement::zero(n); gb.input.len()];
    for (k, q) in quots.iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        for (&j, c) in gb.cofactors[k].comps() {
            out[j] = out[j].add(&q.mul(c));
        }
    }
    Some(out)
}

/// Least a <= a_max with E^a in the ideal, computed incrementally through
/// normal forms; `None` means no witness up to the bound.
pub fn eulerian_index(gb: &GroebnerBasis, a_max: u32) -> Option<u32> {
    assert_eq!(gb.shifts.len(), 1, "eulerian_index expects an ideal basis");
    let e = WeylElement::euler(gb.n);
    let mut r = normal_form(&e, gb);
    for a in 1..=a_max {
        if r.is_zero() {
            return Some(a);
        }
        if a < a_max {
            r = normal_form(&e.mul(&r), gb);
        }
    }
    None
}

/// Generating syzygies of a Groebner basis, one from each S-pair reduction,
/// as elements of the free module indexed by the basis elements.
pub fn syzygies(gb: &GroebnerBasis) -> Vec<ModuleElement> {
    syzygies_of(&gb.elems, &gb.order)
}

fn syzygies_of(basis: &[ModuleElement], order: &ModuleOrder) -> Vec<ModuleElement> {
    let mut out = Vec::new();
    if basis.is_empty() {
        return out;
    }
    let n = basis[0].n();
    let one = Rat::one();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            let li = lead_of(&basis[i], order);
            let lj = lead_of(&basis[j], order);
            if li.comp != lj.comp {
                continue;
            }
            let lcm = li.mono.lcm(&lj.mono);
            let ui = lcm.quotient_by(&li.mono);
            let uj = lcm.quotient_by(&lj.mono);
            let spair = basis[i].act_term(&one, &ui).sub(&basis[j].act_term(&one, &uj));
            let (quots, rem) = divide(&spair, basis, order);
            assert!(rem.is_zero(), "syzygies require a Groebner basis");
            let mut sigma = ModuleElement::zero(n);
            sigma.set_comp(i, WeylElement::from_term(n, ui, one.clone()));
            let mut mj = sigma.comp(j);
            mj = mj.sub(&WeylElement::from_term(n, uj, one.clone()));
            sigma.set_comp(j, mj);
            for (k, q) in quots.iter().enumerate() {
                if !q.is_zero() {
                    let cur = sigma.comp(k).sub(q);
                    sigma.set_comp(k, cur);
                }
            }
            if !sigma.is_zero() {
                out.push(sigma);
            }
        }
    }
    out
}

/// Generator degrees (as component shifts) of the free module covering the
/// listed homogeneous elements of an ambient with the given shifts.
pub fn cover_shifts(elems: &[ModuleElement], ambient_shifts: &[i64]) -> Vec<i64> {
    elems
        .iter()
        .map(|g| {
            let d = g
                .degree(ambient_shifts)
                .expect("homogeneous element")
                .expect("nonzero element");
            -d
        })
        .collect()
}

/// Graded free resolution data: stage component shifts and the maps between
/// consecutive stages, with maps[k] sending stage k+1 to stage k.
#[derive(Debug, Clone)]
pub struct FreeResolution {
    pub n: usize,
    pub shifts: Vec<Vec<i64>>,
    pub maps: Vec<Vec<Vec<WeylElement>>>,
    pub truncated: bool,
}

impl FreeResolution {
    pub fn rank(&self, stage: usize) -> usize {
        self.shifts.get(stage).map(|s| s.len()).unwrap_or(0)
    }

    pub fn stage_shifts(&self, stage: usize) -> &[i64] {
        self.shifts.get(stage).map(|s| s.as_slice()).unwrap_or(&[])
    }

    /// Index of the last stage carried (later stages are zero when the
    /// resolution is complete).
    pub fn last_stage(&self) -> usize {
        self.shifts.len() - 1
    }

    /// Check that consecutive maps compose to zero and that every entry is
    /// homogeneous of the degree dictated by the stage shifts.
    pub fn verify(&self) -> Result<(), String> {
        for (k, mat) in self.maps.iter().enumerate() {
            for (r, row) in mat.iter().enumerate() {
                for (c, w) in row.iter().enumerate() {
                    if w.is_zero() {
                        continue;
                    }
                    let expect = self.shifts[k][c] - self.shifts[k + 1][r];
                    if !w.is_homogeneous_of(expect) {
                        return Err(format!(
                            "map {} entry ({}, {}) is not homogeneous of degree {}",
                            k, r, c, expect
                        ));
                    }
                }
            }
        }
        for k in 1..self.maps.len() {
            let hi = &self.maps[k];
            let lo = &self.maps[k - 1];
            for (r, row) in hi.iter().enumerate() {
                for cc in 0..self.rank(k - 1) {
                    let mut acc = WeylElement::zero(self.n);
                    for (c, w) in row.iter().enumerate() {
                        acc = acc.add(&w.mul(&lo[c][cc]));
                    }
                    if !acc.is_zero() {
                        return Err(format!(
                            "maps {} and {} do not compose to zero at ({}, {})",
                            k, k - 1, r, cc
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Free resolution of A(s)/J from a reduced Groebner basis of J, continued
/// through iterated syzygies up to `max_length` stages of maps.
pub fn free_resolution(
    gb: &GroebnerBasis,
    generator_shift: i64,
    max_length: usize,
) -> Result<FreeResolution, GroebnerError> {
    assert_eq!(gb.shifts.len(), 1, "resolutions start from an ideal basis");
    let n = gb.n;
    let order = gb.order;
    let mut shifts: Vec<Vec<i64>> = vec![vec![generator_shift]];
    let mut maps: Vec<Vec<Vec<WeylElement>>> = Vec::new();
    let mut truncated = false;

    let mut cur: Vec<ModuleElement> = gb.elems.clone();
    let mut cur_shifts: Vec<i64> = vec![generator_shift];
    let mut stage = 1;
    loop {
        if cur.is_empty() {
            break;
        }
        let gen_shifts = cover_shifts(&cur, &cur_shifts);
        let rank_prev = cur_shifts.len();
        let mat: Vec<Vec<WeylElement>> = cur
            .iter()
            .map(|g| (0..rank_prev).map(|c| g.comp(c)).collect())
            .collect();
        shifts.push(gen_shifts.clone());
        maps.push(mat);
        let syz = syzygies_of(&cur, &order);
        if syz.is_empty() {
            break;
        }
        if stage == max_length {
            truncated = true;
            break;
        }
        let sgb = buchberger_module(n, &syz, &gen_shifts, order)?;
        cur = sgb.elems;
        cur_shifts = gen_shifts;
        stage += 1;
    }

    Ok(FreeResolution { n, shifts, maps, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_element;
    use alloc::string::ToString;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn gens(n: usize, strs: &[&str]) -> Vec<WeylElement> {
        strs.iter().map(|s| parse_element(n, s).unwrap()).collect()
    }

    fn gb(n: usize, strs: &[&str]) -> GroebnerBasis {
        buchberger(n, &gens(n, strs), BaseOrder::DegRevLex).unwrap()
    }

    #[test]
    fn normal_form_fixtures() {
        let e = parse_element(1, "x1*d1").unwrap();
        assert!(normal_form(&e, &gb(1, &["d1"])).is_zero());
        assert_eq!(normal_form(&e, &gb(1, &["x1"])).to_string(), "-1");
        let e2 = WeylElement::euler(1).power(2);
        assert_eq!(normal_form(&e2, &gb(1, &["x1"])).to_string(), "1");
    }

    #[test]
    fn membership_fixtures() {
        let e = WeylElement::euler(1);
        assert!(is_member(&e, &gb(1, &["d1"])));
        assert!(!is_member(&e, &gb(1, &["x1"])));
    }

    #[test]
    fn certificates_reconstruct_exactly() {
        let basis = gb(2, &["x1*d1 + x2*d2", "d1^2", "x2"]);
        let f = parse_element(2, "x1*d1^2 + d1")
            .unwrap()
            .mul(&parse_element(2, "x1*d1 + x2*d2").unwrap())
            .add(&parse_element(2, "x2^2*d2").unwrap().mul(&parse_element(2, "d1^2").unwrap()));
        let cert = membership_certificate(&f, &basis).expect("member by construction");
        let mut acc = WeylElement::zero(2);
        for (w, g) in cert.iter().zip(&basis.input) {
            acc = acc.add(&w.mul(&g.comp(0)));
        }
        assert_eq!(acc, f);
    }

    #[test]
    fn rejects_inhomogeneous_generators() {
        let bad = gens(1, &["x1 + 1"]);
        assert_eq!(
            buchberger(1, &bad, BaseOrder::DegRevLex).unwrap_err(),
            GroebnerError::Inhomogeneous { index: 0 }
        );
    }

    #[test]
    fn coprime_leads_can_interact() {
        let basis = gb(1, &["x1", "d1"]);
        assert_eq!(basis.elems.len(), 1);
        assert_eq!(basis.elems[0].comp(0).to_string(), "1");
    }

    #[test]
    fn eulerian_index_fixtures() {
        assert_eq!(eulerian_index(&gb(1, &["d1"]), 10), Some(1));
        assert_eq!(eulerian_index(&gb(1, &["x1"]), 10), None);
        assert_eq!(eulerian_index(&gb(1, &["x1*d1"]), 10), Some(1));
        assert_eq!(eulerian_index(&gb(1, &["d1^2"]), 10), None);
        for n in 1..=3 {
            let ds: Vec<String> = (1..=n).map(|i| alloc::format!("d{}", i)).collect();
            let refs: Vec<&str> = ds.iter().map(|s| s.as_str()).collect();
            assert_eq!(eulerian_index(&gb(n, &refs), 10), Some(1));
        }
    }

    #[test]
    fn syzygy_fixtures() {
        assert!(syzygies(&gb(1, &["x1"])).is_empty());
        assert!(syzygies(&gb(1, &[])).is_empty());
        let basis = gb(2, &["d1", "d2"]);
        let syz = syzygies(&basis);
        assert_eq!(syz.len(), 1);
        let mut acc = WeylElement::zero(2);
        for (&c, w) in syz[0].comps() {
            acc = acc.add(&w.mul(&basis.elems[c].comp(0)));
        }
        assert!(acc.is_zero());
        let mults: Vec<String> = (0..2).map(|c| syz[0].comp(c).to_string()).collect();
        let leads: Vec<String> = basis.elems.iter().map(|g| g.comp(0).to_string()).collect();
        for (m, g) in mults.iter().zip(leads.iter().rev()) {
            assert_eq!(m.trim_start_matches('-'), g);
        }
    }

    #[test]
    fn resolution_principal_x() {
        let basis = gb(1, &["x1"]);
        let res = free_resolution(&basis, 0, 3).unwrap();
        assert!(!res.truncated);
        assert_eq!(res.shifts, alloc::vec![alloc::vec![0], alloc::vec![-1]]);
        assert_eq!(res.maps.len(), 1);
        assert_eq!(res.maps[0][0][0].to_string(), "x1");
        res.verify().unwrap();
    }

    #[test]
    fn resolution_derivative_ideals_are_koszul() {
        for n in 1..=3usize {
            let ds: Vec<String> = (1..=n).map(|i| alloc::format!("d{}", i)).collect();
            let refs: Vec<&str> = ds.iter().map(|s| s.as_str()).collect();
            let basis = gb(n, &refs);
            let res = free_resolution(&basis, 0, 2 * n + 1).unwrap();
            assert!(!res.truncated);
            assert_eq!(res.last_stage(), n);
            for i in 0..=n {
                assert_eq!(res.rank(i), num_integer::binomial(n as u64, i as u64) as usize);
                assert!(res.stage_shifts(i).iter().all(|&t| t == i as i64));
            }
            res.verify().unwrap();
        }
    }

    #[test]
    fn resolution_mixed_pair() {
        let basis = gb(2, &["x1", "d2"]);
        let res = free_resolution(&basis, 0, 5).unwrap();
        assert!(!res.truncated);
        assert_eq!(res.rank(0), 1);
        assert_eq!(res.rank(1), 2);
        assert_eq!(res.rank(2), 1);
        assert_eq!(res.last_stage(), 2);
        res.verify().unwrap();
    }

    #[test]
    fn truncation_is_flagged() {
        let basis = gb(2, &["d1", "d2"]);
        let res = free_resolution(&basis, 0, 1).unwrap();
        assert!(res.truncated);
        assert_eq!(res.last_stage(), 1);
    }

    #[test]
    fn normal_form_is_stable_under_seeded_remainders() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xF00D);
        let basis = gb(2, &["d1^2", "x1*d2"]);
        for _ in 0..20 {
            let mut f = WeylElement::zero(2);
            for _ in 0..3 {
                let mono = crate::weyl::Mono {
                    x: (0..2).map(|_| rng.next_u32() % 3).collect(),
                    d: (0..2).map(|_| rng.next_u32() % 3).collect(),
                };
                f.add_term(mono, crate::weyl::rat((rng.next_u32() % 5) as i64 + 1));
            }
            let r = normal_form(&f, &basis);
            assert_eq!(normal_form(&r, &basis), r);
            let (quots, rem) = divide(
                &ModuleElement::from_ideal_element(&f),
                &basis.elems,
                &basis.order,
            );
            let mut acc = rem.comp(0);
            for (q, g) in quots.iter().zip(&basis.elems) {
                acc = acc.add(&q.mul(&g.comp(0)));
            }
            assert_eq!(acc, f);
        }
    }

    #[test]
    fn deglex_also_supported() {
        let basis = buchberger(2, &gens(2, &["x1", "d2"]), BaseOrder::DegLex).unwrap();
        assert_eq!(basis.elems.len(), 2);
        let e = parse_element(2, "x1*d1").unwrap();
        assert_eq!(normal_form(&e, &basis).to_string(), "-1");
    }
}
