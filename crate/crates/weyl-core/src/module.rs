//! Elements of finite free modules over the Weyl algebra, with component
//! shifts tracked by the caller.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::One;

use crate::order::{ModMono, ModuleOrder};
use crate::weyl::{Mono, Rat, WeylElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleElement {
    n: usize,
    comps: BTreeMap<usize, WeylElement>,
}

impl ModuleElement {
    pub fn zero(n: usize) -> ModuleElement {
        ModuleElement { n, comps: BTreeMap::new() }
    }

    /// The unit vector e_comp.
    pub fn unit(n: usize, comp: usize) -> ModuleElement {
        let mut m = ModuleElement::zero(n);
        m.set_comp(comp, WeylElement::one(n));
        m
    }

    pub fn from_ideal_element(e: &WeylElement) -> ModuleElement {
        let mut m = ModuleElement::zero(e.n());
        m.set_comp(0, e.clone());
        m
    }

    pub fn from_comps(n: usize, comps: Vec<(usize, WeylElement)>) -> ModuleElement {
        let mut m = ModuleElement::zero(n);
        for (c, e) in comps {
            let cur = m.comp(c).add(&e);
            m.set_comp(c, cur);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn comp(&self, c: usize) -> WeylElement {
        self.comps.get(&c).cloned().unwrap_or_else(|| WeylElement::zero(self.n))
    }

    pub fn comps(&self) -> impl Iterator<Item = (&usize, &WeylElement)> {
        self.comps.iter()
    }

    pub fn set_comp(&mut self, c: usize, e: WeylElement) {
        if e.is_zero() {
            self.comps.remove(&c);
        } else {
            self.comps.insert(c, e);
        }
    }

    pub fn add(&self, other: &ModuleElement) -> ModuleElement {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (&c, e) in &other.comps {
            let cur = out.comp(c).add(e);
            out.set_comp(c, cur);
        }
        out
    }

    pub fn sub(&self, other: &ModuleElement) -> ModuleElement {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (&c, e) in &other.comps {
            let cur = out.comp(c).sub(e);
            out.set_comp(c, cur);
        }
        out
    }

    pub fn neg(&self) -> ModuleElement {
        let mut out = ModuleElement::zero(self.n);
        for (&c, e) in &self.comps {
            out.set_comp(c, e.neg());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> ModuleElement {
        let mut out = ModuleElement::zero(self.n);
        for (&c, e) in &self.comps {
            out.set_comp(c, e.scale(s));
        }
        out
    }

    /// Left action of an algebra element on every component.
    pub fn act(&self, a: &WeylElement) -> ModuleElement {
        let mut out = ModuleElement::zero(self.n);
        for (&c, e) in &self.comps {
            out.set_comp(c, a.mul(e));
        }
        out
    }

    pub fn act_term(&self, coeff: &Rat, mono: &Mono) -> ModuleElement {
        self.act(&WeylElement::from_term(self.n, mono.clone(), coeff.clone()))
    }

    /// Leading module monomial and coefficient under `order`.
    pub fn lead(&self, order: &ModuleOrder) -> Option<(ModMono, Rat)> {
        let mut best: Option<(ModMono, Rat)> = None;
        for (&c, e) in &self.comps {
            for (m, coeff) in e.terms() {
                let cand = ModMono { comp: c, mono: m.clone() };
                match &best {
                    None => best = Some((cand, coeff.clone())),
                    Some((bm, _)) => {
                        if order.cmp(&cand, bm) == core::cmp::Ordering::Greater {
                            best = Some((cand, coeff.clone()));
                        }
                    }
                }
            }
        }
        best
    }

    /// Make the leading coefficient one; no-op on zero.
    pub fn monic(&self, order: &ModuleOrder) -> ModuleElement {
        match self.lead(order) {
            None => self.clone(),
            Some((_, lc)) => self.scale(&(Rat::one() / lc)),
        }
    }

    /// Grading degree relative to component shifts; `None` when zero,
    /// inhomogeneous terms reported via `Err`.
    pub fn degree(&self, shifts: &[i64]) -> Result<Option<i64>, ()> {
        let mut deg: Option<i64> = None;
        for (&c, e) in &self.comps {
            for (m, _) in e.terms() {
                let d = m.weight() - shifts[c];
                match deg {
                    None => deg = Some(d),
                    Some(prev) => {
                        if prev != d {
                            return Err(());
                        }
                    }
                }
            }
        }
        Ok(deg)
    }

    pub fn max_comp(&self) -> Option<usize> {
        self.comps.keys().next_back().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_element;
    use crate::order::BaseOrder;
    use alloc::vec;

    #[test]
    fn lead_and_degree() {
        let n = 2;
        let order = ModuleOrder::new(BaseOrder::DegRevLex);
        let g1 = parse_element(n, "x1*d2 + x2*d2").unwrap();
        let g2 = parse_element(n, "d1").unwrap();
        let m = ModuleElement::from_comps(n, vec![(0, g1), (1, g2)]);
        let (lm, _) = m.lead(&order).unwrap();
        assert_eq!(lm.comp, 0);
        assert_eq!(lm.mono.x, vec![1, 0]);
        assert_eq!(lm.mono.d, vec![0, 1]);
        assert!(m.degree(&[0, -1]).is_ok());
        assert_eq!(m.degree(&[0, -1]).unwrap(), Some(0));
        assert!(m.degree(&[0, 0]).is_err());
    }

    #[test]
    fn act_is_componentwise() {
        let n = 1;
        let x = parse_element(n, "x1").unwrap();
        let d = parse_element(n, "d1").unwrap();
        let m = ModuleElement::from_comps(n, vec![(0, x.clone()), (2, WeylElement::one(n))]);
        let dm = m.act(&d);
        assert_eq!(dm.comp(0), d.mul(&x));
        assert_eq!(dm.comp(2), d);
        assert!(dm.comp(1).is_zero());
    }
}
