//! Degree-compatible term orders on normal-ordered monomials and their
//! term-over-position extensions to free modules.

use core::cmp::Ordering;

use crate::weyl::Mono;

/// Orders on the concatenated exponent vector (x, d), refined by total
/// exponent degree first so that leading monomials are multiplicative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseOrder {
    DegRevLex,
    DegLex,
}

impl BaseOrder {
    pub fn cmp_mono(&self, a: &Mono, b: &Mono) -> Ordering {
        let da = a.exp_degree();
        let db = b.exp_degree();
        if da != db {
            return da.cmp(&db);
        }
        match self {
            BaseOrder::DegRevLex => {
                for i in (0..a.d.len()).rev() {
                    if a.d[i] != b.d[i] {
                        return b.d[i].cmp(&a.d[i]);
                    }
                }
                for i in (0..a.x.len()).rev() {
                    if a.x[i] != b.x[i] {
                        return b.x[i].cmp(&a.x[i]);
                    }
                }
                Ordering::Equal
            }
            BaseOrder::DegLex => {
                for i in 0..a.x.len() {
                    if a.x[i] != b.x[i] {
                        return a.x[i].cmp(&b.x[i]);
                    }
                }
                for i in 0..a.d.len() {
                    if a.d[i] != b.d[i] {
                        return a.d[i].cmp(&b.d[i]);
                    }
                }
                Ordering::Equal
            }
        }
    }
}

/// Monomial of a free module: a component index and a monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMono {
    pub comp: usize,
    pub mono: Mono,
}

impl ModMono {
    pub fn divides(&self, other: &ModMono) -> bool {
        self.comp == other.comp && self.mono.divides(&other.mono)
    }
}

/// Term-over-position order: monomials are compared by the base order and
/// ties go to the smaller component index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModuleOrder {
    pub base: BaseOrder,
}

impl ModuleOrder {
    pub fn new(base: BaseOrder) -> ModuleOrder {
        ModuleOrder { base }
    }

    pub fn cmp(&self, a: &ModMono, b: &ModMono) -> Ordering {
        match self.base.cmp_mono(&a.mono, &b.mono) {
            Ordering::Equal => b.comp.cmp(&a.comp),
            other => other,
        }
    }
}
