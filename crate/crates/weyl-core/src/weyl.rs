//! Normal-ordered elements of the rational Weyl algebra A_n.
//!
//! An element is a finite sum of terms c * x^a * d^b with exact rational
//! coefficients, where d_i denotes the i-th partial derivative.  The grading
//! gives x_i degree +1 and d_i degree -1.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub(crate) fn rat(v: i64) -> Rat {
    BigRational::from_integer(BigInt::from(v))
}

/// Exponent pair (a, b) of a normal-ordered monomial x^a * d^b.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub x: Vec<u32>,
    pub d: Vec<u32>,
}

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono { x: vec![0; n], d: vec![0; n] }
    }

    pub fn xgen(n: usize, i: usize) -> Mono {
        let mut m = Mono::one(n);
        m.x[i] = 1;
        m
    }

    pub fn dgen(n: usize, i: usize) -> Mono {
        let mut m = Mono::one(n);
        m.d[i] = 1;
        m
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Total exponent degree |a| + |b|.
    pub fn exp_degree(&self) -> u64 {
        self.x.iter().map(|&e| e as u64).sum::<u64>() + self.d.iter().map(|&e| e as u64).sum::<u64>()
    }

    /// Grading degree |a| - |b|.
    pub fn weight(&self) -> i64 {
        self.x.iter().map(|&e| e as i64).sum::<i64>() - self.d.iter().map(|&e| e as i64).sum::<i64>()
    }

    pub fn is_one(&self) -> bool {
        self.x.iter().all(|&e| e == 0) && self.d.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.x.iter().zip(&other.x).all(|(a, b)| a <= b)
            && self.d.iter().zip(&other.d).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono {
            x: self.x.iter().zip(&other.x).map(|(a, b)| *a.max(b)).collect(),
            d: self.d.iter().zip(&other.d).map(|(a, b)| *a.max(b)).collect(),
        }
    }

    /// Componentwise difference; requires `other.divides(self)`.
    pub fn quotient_by(&self, other: &Mono) -> Mono {
        Mono {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a - b).collect(),
            d: self.d.iter().zip(&other.d).map(|(a, b)| a - b).collect(),
        }
    }

    /// Componentwise sum of exponents (not the Weyl product).
    pub fn exp_sum(&self, other: &Mono) -> Mono {
        Mono {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            d: self.d.iter().zip(&other.d).map(|(a, b)| a + b).collect(),
        }
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.x.iter().enumerate() {
            if e > 0 {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "x{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        for (i, &e) in self.d.iter().enumerate() {
            if e > 0 {
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "d{}", i + 1)?;
                if e > 1 {
                    write!(f, "^{}", e)?;
                }
            }
        }
        Ok(())
    }
}

/// Grading degree of a nonzero element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Homogeneous(i64),
    Inhomogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    n: usize,
    terms: BTreeMap<Mono, Rat>,
}

fn binom(b: u32, k: u32) -> BigInt {
    num_integer::binomial(BigInt::from(b), BigInt::from(k))
}

fn falling(a: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for t in 0..k {
        acc *= BigInt::from(a as i64 - t as i64);
    }
    acc
}

impl WeylElement {
    pub fn zero(n: usize) -> WeylElement {
        WeylElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> WeylElement {
        WeylElement::from_term(n, Mono::one(n), Rat::one())
    }

    pub fn scalar(n: usize, c: Rat) -> WeylElement {
        WeylElement::from_term(n, Mono::one(n), c)
    }

    pub fn from_term(n: usize, mono: Mono, coeff: Rat) -> WeylElement {
        debug_assert_eq!(mono.n(), n);
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mono, coeff);
        }
        WeylElement { n, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, Rat)>>(n: usize, iter: I) -> WeylElement {
        let mut out = WeylElement::zero(n);
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    pub fn var_x(n: usize, i: usize) -> WeylElement {
        WeylElement::from_term(n, Mono::xgen(n, i), Rat::one())
    }

    pub fn var_d(n: usize, i: usize) -> WeylElement {
        WeylElement::from_term(n, Mono::dgen(n, i), Rat::one())
    }

    /// The Euler operator x_1 d_1 + ... + x_n d_n.
    pub fn euler(n: usize) -> WeylElement {
        let mut out = WeylElement::zero(n);
        for i in 0..n {
            let mut m = Mono::one(n);
            m.x[i] = 1;
            m.d[i] = 1;
            out.add_term(m, Rat::one());
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn max_exp_degree(&self) -> u64 {
        self.terms.keys().map(|m| m.exp_degree()).max().unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.n, other.n, "ambient mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.n, other.n, "ambient mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> WeylElement {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> WeylElement {
        if c.is_zero() {
            return WeylElement::zero(self.n);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    /// Normal-ordered product.  The reordering rule for one variable is
    /// d^b x^a = sum_k C(b,k) * a*(a-1)*...*(a-k+1) * x^(a-k) d^(b-k).
    pub fn mul(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.n, other.n, "ambient mismatch");
        let n = self.n;
        let mut out = WeylElement::zero(n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let base = c1 * c2;
                let kmax: Vec<u32> = (0..n).map(|i| m1.d[i].min(m2.x[i])).collect();
                let mut k = vec![0u32; n];
                loop {
                    let mut num = BigInt::one();
                    for i in 0..n {
                        if k[i] > 0 {
                            num *= binom(m1.d[i], k[i]) * falling(m2.x[i], k[i]);
                        }
                    }
                    let coeff = &base * Rat::from_integer(num);
                    let mono = Mono {
                        x: (0..n).map(|i| m1.x[i] + m2.x[i] - k[i]).collect(),
                        d: (0..n).map(|i| m1.d[i] + m2.d[i] - k[i]).collect(),
                    };
                    out.add_term(mono, coeff);
                    let mut i = 0;
                    loop {
                        if i == n {
                            break;
                        }
                        if k[i] < kmax[i] {
                            k[i] += 1;
                            for j in 0..i {
                                k[j] = 0;
                            }
                            break;
                        }
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                }
            }
        }
        out
    }

    pub fn power(&self, k: u32) -> WeylElement {
        let mut out = WeylElement::one(self.n);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// The transposition anti-automorphism: h * d^b maps to (-1)^|b| d^b * h.
    pub fn transpose(&self) -> WeylElement {
        let n = self.n;
        let mut out = WeylElement::zero(n);
        for (m, c) in &self.terms {
            let db: u64 = m.d.iter().map(|&e| e as u64).sum();
            let sign = if db % 2 == 1 { -c.clone() } else { c.clone() };
            let dpart = WeylElement::from_term(n, Mono { x: vec![0; n], d: m.d.clone() }, sign);
            let xpart = WeylElement::from_term(n, Mono { x: m.x.clone(), d: vec![0; n] }, Rat::one());
            out = out.add(&dpart.mul(&xpart));
        }
        out
    }

    /// Grading degree; `None` for the zero element.
    pub fn degree(&self) -> Option<Degree> {
        let mut it = self.terms.keys();
        let first = it.next()?.weight();
        for m in it {
            if m.weight() != first {
                return Some(Degree::Inhomogeneous);
            }
        }
        Some(Degree::Homogeneous(first))
    }

    pub fn is_homogeneous_of(&self, deg: i64) -> bool {
        self.terms.keys().all(|m| m.weight() == deg)
    }

    /// Largest term under the canonical printing order.
    pub fn lead_print(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }
}

fn fmt_coeff(f: &mut fmt::Formatter<'_>, c: &Rat, mono_trivial: bool) -> fmt::Result {
    if c.is_one() && !mono_trivial {
        return Ok(());
    }
    if c.denom().is_one() {
        write!(f, "{}", c.numer())?;
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())?;
    }
    if !mono_trivial {
        write!(f, "*")?;
    }
    Ok(())
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            fmt_coeff(f, &c.abs(), m.is_one())?;
            if !m.is_one() {
                write!(f, "{}", m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn parse(n: usize, s: &str) -> WeylElement {
        crate::grammar::parse_element(n, s).unwrap()
    }

    #[test]
    fn reordering_rule() {
        let d2 = WeylElement::var_d(1, 0).power(2);
        let x2 = WeylElement::var_x(1, 0).power(2);
        let p = d2.mul(&x2);
        assert_eq!(p, parse(1, "x1^2*d1^2 + 4*x1*d1 + 2"));
    }

    #[test]
    fn euler_square() {
        let e = WeylElement::euler(1);
        assert_eq!(e.power(2), parse(1, "x1^2*d1^2 + x1*d1"));
    }

    #[test]
    fn defining_relations() {
        for n in 1..=3 {
            for i in 0..n {
                for j in 0..n {
                    let xi = WeylElement::var_x(n, i);
                    let xj = WeylElement::var_x(n, j);
                    let di = WeylElement::var_d(n, i);
                    let dj = WeylElement::var_d(n, j);
                    assert_eq!(xi.mul(&xj), xj.mul(&xi));
                    assert_eq!(di.mul(&dj), dj.mul(&di));
                    let comm = di.mul(&xj).sub(&xj.mul(&di));
                    let expect = if i == j {
                        WeylElement::one(n)
                    } else {
                        WeylElement::zero(n)
                    };
                    assert_eq!(comm, expect);
                }
            }
        }
    }

    #[test]
    fn transpose_examples() {
        let e = WeylElement::euler(1);
        assert_eq!(e.transpose(), parse(1, "-x1*d1 - 1"));
        for n in 1..=3 {
            let en = WeylElement::euler(n);
            let expect = en.neg().sub(&WeylElement::scalar(n, rat(n as i64)));
            assert_eq!(en.transpose(), expect);
        }
        let f = parse(1, "d1^2*x1");
        assert_eq!(f.transpose().transpose(), f);
    }

    fn rand_elem(rng: &mut ChaCha8Rng, n: usize) -> WeylElement {
        let t = 1 + (rng.next_u32() % 3) as usize;
        let mut out = WeylElement::zero(n);
        for _ in 0..t {
            let mono = Mono {
                x: (0..n).map(|_| rng.next_u32() % 3).collect(),
                d: (0..n).map(|_| rng.next_u32() % 3).collect(),
            };
            let c = (rng.next_u32() % 9) as i64 - 4;
            out.add_term(mono, rat(if c == 0 { 1 } else { c }));
        }
        out
    }

    #[test]
    fn associativity_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
        for _ in 0..60 {
            let n = 1 + (rng.next_u32() % 3) as usize;
            let a = rand_elem(&mut rng, n);
            let b = rand_elem(&mut rng, n);
            let c = rand_elem(&mut rng, n);
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }
    }

    #[test]
    fn transpose_antiautomorphism_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xBEE);
        for _ in 0..40 {
            let n = 1 + (rng.next_u32() % 2) as usize;
            let a = rand_elem(&mut rng, n);
            let b = rand_elem(&mut rng, n);
            assert_eq!(a.mul(&b).transpose(), b.transpose().mul(&a.transpose()));
            assert_eq!(a.transpose().transpose(), a);
            assert_eq!(a.power(3).transpose(), a.transpose().power(3));
        }
    }

    #[test]
    fn degree_bookkeeping() {
        let e = WeylElement::euler(2);
        assert_eq!(e.degree(), Some(Degree::Homogeneous(0)));
        let mixed = parse(2, "x1 + d2^2");
        assert_eq!(mixed.degree(), Some(Degree::Inhomogeneous));
        assert_eq!(WeylElement::zero(2).degree(), None);
        let a = parse(2, "x1*x2*d1");
        assert_eq!(a.degree(), Some(Degree::Homogeneous(1)));
    }

    #[test]
    fn display_canonical() {
        let p = parse(1, "d1^2*x1^2");
        assert_eq!(p.to_string(), "x1^2*d1^2 + 4*x1*d1 + 2");
        let q = parse(2, "3/2*x1^2 - x2*d1");
        assert_eq!(q.to_string(), "3/2*x1^2 - x2*d1");
        assert_eq!(WeylElement::zero(1).to_string(), "0");
    }
}
