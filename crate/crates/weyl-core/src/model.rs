//! Graded module models with exact finite-dimensional pieces per degree and
//! cached operator matrices for the variable and derivative actions.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use num_traits::{One, Zero};

use crate::cech::pattern_cohomology;
use crate::groebner::{buchberger, normal_form, GroebnerBasis};
use crate::matrix::{Nilpotency, QMatrix, Subquotient};
use crate::order::BaseOrder;
use crate::weyl::{rat, Mono, Rat, WeylElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    LaurentAmbient { n: usize },
    InfiniteDimensional(String),
    AmbientMismatch,
    RightModule,
    BadGenerators(String),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::LaurentAmbient { n } => {
                write!(f, "laurent model needs ambient n = 1, got n = {}", n)
            }
            ModelError::InfiniteDimensional(why) => {
                write!(f, "graded pieces are not finite dimensional: {}", why)
            }
            ModelError::AmbientMismatch => write!(f, "ambient algebras do not match"),
            ModelError::RightModule => write!(f, "operation requires a left module"),
            ModelError::BadGenerators(why) => write!(f, "bad generators: {}", why),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ModelError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LastVarOp {
    MultiplyLast,
    DifferentiateLast,
}

#[derive(Debug, Clone)]
pub(crate) struct Cell {
    base: Mono,
    free: Vec<usize>,
    positive: bool,
}

pub(crate) enum Kind {
    Polynomial,
    Laurent,
    Cech { mult_pos: usize, mult_neg: usize },
    Presentation { gb: GroebnerBasis, shift: i64, cells: Vec<Cell> },
    Shift { inner: Rc<GradedModel>, offset: i64 },
    Dual { inner: Rc<GradedModel> },
    Transpose { inner: Rc<GradedModel> },
    Sum { parts: Vec<Rc<GradedModel>> },
    Koszul { inner: Rc<GradedModel>, op: LastVarOp, homological: usize },
}

pub(crate) enum PieceBasis {
    Mons { mons: Vec<Mono>, index: BTreeMap<Mono, usize> },
    Exps { exps: Vec<(Vec<i64>, usize)>, index: BTreeMap<(Vec<i64>, usize), usize> },
    Sub(Subquotient),
    Opaque,
}

pub(crate) struct Piece {
    pub(crate) dim: usize,
    pub(crate) labels: Vec<String>,
    pub(crate) basis: PieceBasis,
}

impl Piece {
    fn from_mons(mons: Vec<Mono>) -> Piece {
        let labels = mons.iter().map(|m| m.to_string()).collect();
        let index = mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Piece { dim: mons.len(), labels, basis: PieceBasis::Mons { mons, index } }
    }

    fn from_exps(exps: Vec<(Vec<i64>, usize)>, mult: usize) -> Piece {
        let labels = exps.iter().map(|(v, k)| exp_label(v, *k, mult)).collect();
        let index = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Piece { dim: exps.len(), labels, basis: PieceBasis::Exps { exps, index } }
    }
}

fn exp_label(v: &[i64], copy: usize, mult: usize) -> String {
    let mut s = String::new();
    for (i, &e) in v.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('*');
        }
        if e == 1 {
            s.push_str(&format!("x{}", i + 1));
        } else {
            s.push_str(&format!("x{}^{}", i + 1, e));
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    if mult > 1 {
        s.push_str(&format!("#{}", copy));
    }
    s
}

pub(crate) fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut v = Vec::with_capacity(parts);
            v.push(first);
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Graded module over the Weyl algebra presented through its degree pieces.
/// Pieces and operator matrices are computed on demand and cached, so the
/// type is not thread-shareable.
pub struct GradedModel {
    n: usize,
    right: bool,
    kind: Kind,
    pieces: RefCell<BTreeMap<i64, Rc<Piece>>>,
    mats: RefCell<BTreeMap<(bool, usize, i64), Rc<QMatrix>>>,
}

pub fn polynomial_model(n: usize) -> Rc<GradedModel> {
    Rc::new(GradedModel::new(n, false, Kind::Polynomial))
}

pub fn laurent_model(n: usize) -> Result<Rc<GradedModel>, ModelError> {
    if n != 1 {
        return Err(ModelError::LaurentAmbient { n });
    }
    Ok(Rc::new(GradedModel::new(n, false, Kind::Laurent)))
}

/// Model of the degree-`index` local cohomology of the polynomial algebra
/// supported on the monomial ideal generated by the given pure-x monomials.
/// Rejected when some mixed sign pattern of Laurent exponents would survive,
/// since that pattern carries infinitely many monomials in each degree.
pub fn cech_local_cohomology_model(
    n: usize,
    gens: &[Mono],
    index: usize,
) -> Result<Rc<GradedModel>, ModelError> {
    if n == 0 {
        return Err(ModelError::AmbientMismatch);
    }
    let mut supports = Vec::new();
    for g in gens {
        if g.n() != n {
            return Err(ModelError::AmbientMismatch);
        }
        if g.d.iter().any(|&e| e > 0) {
            return Err(ModelError::BadGenerators(
                "localization generators must be monomials in the x variables".to_string(),
            ));
        }
        supports.push(g.x.iter().map(|&e| e > 0).collect::<Vec<bool>>());
    }
    let full = (1u32 << n) - 1;
    for p in 0..=full {
        let pattern: Vec<bool> = (0..n).map(|v| p & (1 << v) != 0).collect();
        let h = pattern_cohomology(&supports, &pattern, index);
        if p != 0 && p != full && h > 0 {
            let vars: Vec<String> = (0..n)
                .filter(|v| pattern[*v])
                .map(|v| format!("x{}", v + 1))
                .collect();
            return Err(ModelError::InfiniteDimensional(format!(
                "sign pattern with negatives exactly in {{{}}} contributes in cohomological degree {}",
                vars.join(", "),
                index
            )));
        }
    }
    let mult_pos = pattern_cohomology(&supports, &vec![false; n], index);
    let mult_neg = pattern_cohomology(&supports, &vec![true; n], index);
    Ok(Rc::new(GradedModel::new(n, false, Kind::Cech { mult_pos, mult_neg })))
}

/// Model of A(shift)/J for the left ideal J spanned by the homogeneous
/// generators, realized on standard monomials of a Groebner basis.  Rejected
/// when some Stanley cell of the standard monomials mixes x and d free
/// directions, since the graded pieces are then infinite dimensional.
pub fn presentation_model(
    n: usize,
    gens: &[WeylElement],
    shift: i64,
) -> Result<Rc<GradedModel>, ModelError> {
    let gb = buchberger(n, gens, BaseOrder::DegRevLex)
        .map_err(|e| ModelError::BadGenerators(format!("{}", e)))?;
    presentation_model_from_gb(gb, shift)
}

pub fn presentation_model_from_gb(
    gb: GroebnerBasis,
    shift: i64,
) -> Result<Rc<GradedModel>, ModelError> {
    if gb.shifts.len() != 1 {
        return Err(ModelError::BadGenerators(
            "presentation expects an ideal basis, not a module basis".to_string(),
        ));
    }
    let n = gb.n;
    let lms: Vec<Vec<u32>> = gb
        .elems
        .iter()
        .map(|g| {
            let (lm, _) = g.lead(&gb.order).expect("basis elements are nonzero");
            let mut v: Vec<u32> = lm.mono.x.clone();
            v.extend_from_slice(&lm.mono.d);
            v
        })
        .collect();
    let coords: Vec<usize> = (0..2 * n).collect();
    let mut raw = Vec::new();
    stanley_cells(&lms, &coords, vec![0; 2 * n], &mut raw);
    let mut cells = Vec::new();
    for (base, free) in raw {
        let positive = free.iter().all(|&c| c < n);
        let negative = free.iter().all(|&c| c >= n);
        if !positive && !negative {
            return Err(ModelError::InfiniteDimensional(
                "a Stanley cell of the standard monomials has free directions of both signs"
                    .to_string(),
            ));
        }
        let mono = Mono { x: base[..n].to_vec(), d: base[n..].to_vec() };
        cells.push(Cell { base: mono, free, positive });
    }
    Ok(Rc::new(GradedModel::new(n, false, Kind::Presentation { gb, shift, cells })))
}

fn stanley_cells(
    lms: &[Vec<u32>],
    coords: &[usize],
    base: Vec<u32>,
    out: &mut Vec<(Vec<u32>, Vec<usize>)>,
) {
    if lms.iter().any(|l| coords.iter().all(|&c| l[c] == 0)) {
        return;
    }
    if lms.is_empty() {
        out.push((base, coords.to_vec()));
        return;
    }
    let c = *coords
        .iter()
        .find(|&&c| lms.iter().any(|l| l[c] > 0))
        .expect("a nonzero coordinate exists");
    let kept: Vec<Vec<u32>> = lms.iter().filter(|l| l[c] == 0).cloned().collect();
    let rest: Vec<usize> = coords.iter().copied().filter(|&cc| cc != c).collect();
    stanley_cells(&kept, &rest, base.clone(), out);
    let dec: Vec<Vec<u32>> = lms
        .iter()
        .map(|l| {
            let mut l2 = l.clone();
            if l2[c] > 0 {
                l2[c] -= 1;
            }
            l2
        })
        .collect();
    let mut b2 = base;
    b2[c] += 1;
    stanley_cells(&dec, coords, b2, out);
}

pub fn shift_model(inner: Rc<GradedModel>, offset: i64) -> Rc<GradedModel> {
    let n = inner.n;
    let right = inner.right;
    Rc::new(GradedModel::new(n, right, Kind::Shift { inner, offset }))
}

/// Graded dual with the left structure twisted through the transpose
/// anti-automorphism: x acts by precomposition with x, d by minus the
/// precomposition with d.
pub fn matlis_dual(inner: Rc<GradedModel>) -> Result<Rc<GradedModel>, ModelError> {
    if inner.right {
        return Err(ModelError::RightModule);
    }
    let n = inner.n;
    Ok(Rc::new(GradedModel::new(n, false, Kind::Dual { inner })))
}

/// Same underlying pieces with the action pulled back through the transpose
/// anti-automorphism, yielding a right module: x acts as before, d by its
/// negative.
pub fn transpose_model(inner: Rc<GradedModel>) -> Rc<GradedModel> {
    let n = inner.n;
    let right = !inner.right;
    Rc::new(GradedModel::new(n, right, Kind::Transpose { inner }))
}

pub fn direct_sum(parts: Vec<Rc<GradedModel>>) -> Result<Rc<GradedModel>, ModelError> {
    let Some(first) = parts.first() else {
        return Err(ModelError::AmbientMismatch);
    };
    let n = first.n;
    let right = first.right;
    if parts.iter().any(|p| p.n != n || p.right != right) {
        return Err(ModelError::AmbientMismatch);
    }
    Ok(Rc::new(GradedModel::new(n, right, Kind::Sum { parts })))
}

/// Homology of multiplication by the last variable (or differentiation by
/// it) as a module over the Weyl algebra in the remaining variables.  The
/// pieces carry the grading of the two-term complex whose added generator
/// has the degree of the chosen operator.
pub fn koszul_last_var(
    inner: Rc<GradedModel>,
    op: LastVarOp,
    homological: usize,
) -> Result<Rc<GradedModel>, ModelError> {
    if inner.n == 0 {
        return Err(ModelError::AmbientMismatch);
    }
    if inner.right {
        return Err(ModelError::RightModule);
    }
    if homological > 1 {
        return Err(ModelError::BadGenerators(
            "a two-term complex has homology only in degrees 0 and 1".to_string(),
        ));
    }
    let n = inner.n - 1;
    Ok(Rc::new(GradedModel::new(n, false, Kind::Koszul { inner, op, homological })))
}

fn koszul_ambient_degree(op: LastVarOp, homological: usize, d: i64) -> i64 {
    match (op, homological) {
        (LastVarOp::MultiplyLast, 1) => d - 1,
        (LastVarOp::DifferentiateLast, 1) => d + 1,
        _ => d,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegreeVerdict {
    Nilpotent { order: u32 },
    NotNilpotent { conclusive: bool },
}

#[derive(Debug, Clone)]
pub struct EulerianReport {
    pub lo: i64,
    pub hi: i64,
    pub per_degree: Vec<(i64, DegreeVerdict)>,
    pub uniform_bound: Option<u32>,
    pub vacuous: bool,
}

impl EulerianReport {
    pub fn holds(&self) -> bool {
        self.uniform_bound.is_some()
    }

    pub fn first_failure(&self) -> Option<(i64, bool)> {
        self.per_degree.iter().find_map(|(d, v)| match v {
            DegreeVerdict::NotNilpotent { conclusive } => Some((*d, *conclusive)),
            _ => None,
        })
    }

    /// True when every failure in the window is inconclusive, so a larger
    /// nilpotency cap might still succeed.
    pub fn only_inconclusive_failures(&self) -> bool {
        !self.holds()
            && self.per_degree.iter().all(|(_, v)| {
                !matches!(v, DegreeVerdict::NotNilpotent { conclusive: true })
            })
    }
}

impl GradedModel {
    fn new(n: usize, right: bool, kind: Kind) -> GradedModel {
        GradedModel {
            n,
            right,
            kind,
            pieces: RefCell::new(BTreeMap::new()),
            mats: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_right(&self) -> bool {
        self.right
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn dim(&self, d: i64) -> usize {
        self.piece(d).dim
    }

    pub fn labels(&self, d: i64) -> Vec<String> {
        self.piece(d).labels.clone()
    }

    pub(crate) fn piece(&self, d: i64) -> Rc<Piece> {
        if let Some(p) = self.pieces.borrow().get(&d) {
            return Rc::clone(p);
        }
        let built = Rc::new(self.build_piece(d));
        self.pieces.borrow_mut().insert(d, Rc::clone(&built));
        built
    }

    fn build_piece(&self, d: i64) -> Piece {
        match &self.kind {
            Kind::Polynomial => {
                if d < 0 {
                    return Piece::from_mons(Vec::new());
                }
                let mut mons: Vec<Mono> = compositions(d as u32, self.n)
                    .into_iter()
                    .map(|x| Mono { x, d: vec![0; self.n] })
                    .collect();
                mons.sort();
                Piece::from_mons(mons)
            }
            Kind::Laurent => Piece::from_exps(vec![(vec![d], 0)], 1),
            Kind::Cech { mult_pos, mult_neg } => {
                let n = self.n;
                let mut exps = Vec::new();
                if *mult_pos > 0 && d >= 0 {
                    for comp in compositions(d as u32, n) {
                        let v: Vec<i64> = comp.iter().map(|&e| e as i64).collect();
                        for k in 0..*mult_pos {
                            exps.push((v.clone(), k));
                        }
                    }
                }
                if *mult_neg > 0 && -d - (n as i64) >= 0 {
                    for comp in compositions((-d - n as i64) as u32, n) {
                        let v: Vec<i64> = comp.iter().map(|&e| -1 - e as i64).collect();
                        for k in 0..*mult_neg {
                            exps.push((v.clone(), k));
                        }
                    }
                }
                let mult = (*mult_pos).max(*mult_neg);
                Piece::from_exps(exps, mult)
            }
            Kind::Presentation { shift, cells, .. } => {
                let n = self.n;
                let w = d + shift;
                let mut mons = Vec::new();
                for cell in cells {
                    let rem = w - cell.base.weight();
                    if cell.free.is_empty() {
                        if rem == 0 {
                            mons.push(cell.base.clone());
                        }
                        continue;
                    }
                    let sign: i64 = if cell.positive { 1 } else { -1 };
                    if rem * sign < 0 {
                        continue;
                    }
                    for comp in compositions((rem * sign) as u32, cell.free.len()) {
                        let mut m = cell.base.clone();
                        for (&t, &c) in comp.iter().zip(&cell.free) {
                            if c < n {
                                m.x[c] += t;
                            } else {
                                m.d[c - n] += t;
                            }
                        }
                        mons.push(m);
                    }
                }
                mons.sort();
                Piece::from_mons(mons)
            }
            Kind::Shift { inner, offset } => {
                let p = inner.piece(d + offset);
                Piece { dim: p.dim, labels: p.labels.clone(), basis: PieceBasis::Opaque }
            }
            Kind::Dual { inner } => {
                let p = inner.piece(-d);
                let labels = p.labels.iter().map(|l| format!("({})*", l)).collect();
                Piece { dim: p.dim, labels, basis: PieceBasis::Opaque }
            }
            Kind::Transpose { inner } => {
                let p = inner.piece(d);
                Piece { dim: p.dim, labels: p.labels.clone(), basis: PieceBasis::Opaque }
            }
            Kind::Sum { parts } => {
                let mut labels = Vec::new();
                for (i, part) in parts.iter().enumerate() {
                    for l in part.piece(d).labels.iter() {
                        labels.push(format!("s{}:{}", i, l));
                    }
                }
                Piece { dim: labels.len(), labels, basis: PieceBasis::Opaque }
            }
            Kind::Koszul { inner, op, homological } => {
                let last = inner.n() - 1;
                let e = koszul_ambient_degree(*op, *homological, d);
                let ambient = inner.dim(e);
                let sq = if *homological == 1 {
                    let mat = match op {
                        LastVarOp::MultiplyLast => inner.act_x(last, e),
                        LastVarOp::DifferentiateLast => inner.act_d(last, e),
                    };
                    Subquotient::new(ambient, &mat.kernel_basis(), &[])
                } else {
                    let mat = match op {
                        LastVarOp::MultiplyLast => inner.act_x(last, d - 1),
                        LastVarOp::DifferentiateLast => inner.act_d(last, d + 1),
                    };
                    let id = QMatrix::identity(ambient);
                    Subquotient::new(ambient, &id.columns(), &mat.columns())
                };
                let labels = (0..sq.dim()).map(|j| format!("class{}", j)).collect();
                Piece { dim: sq.dim(), labels, basis: PieceBasis::Sub(sq) }
            }
        }
    }

    /// Matrix of multiplication by x_{i+1} from the degree-d piece to the
    /// degree-(d+1) piece, columns indexed by the source basis.
    pub fn act_x(&self, i: usize, d: i64) -> Rc<QMatrix> {
        self.act(true, i, d)
    }

    /// Matrix of the action of d_{i+1} from the degree-d piece to the
    /// degree-(d-1) piece.
    pub fn act_d(&self, i: usize, d: i64) -> Rc<QMatrix> {
        self.act(false, i, d)
    }

    fn act(&self, is_x: bool, i: usize, d: i64) -> Rc<QMatrix> {
        assert!(i < self.n, "variable index out of range");
        let key = (is_x, i, d);
        if let Some(m) = self.mats.borrow().get(&key) {
            return Rc::clone(m);
        }
        let built = Rc::new(self.build_act(is_x, i, d));
        self.mats.borrow_mut().insert(key, Rc::clone(&built));
        built
    }

    fn build_act(&self, is_x: bool, i: usize, d: i64) -> QMatrix {
        let tgt_deg = if is_x { d + 1 } else { d - 1 };
        match &self.kind {
            Kind::Polynomial => {
                let src = self.piece(d);
                let tgt = self.piece(tgt_deg);
                let mut m = QMatrix::zero(tgt.dim, src.dim);
                let (PieceBasis::Mons { mons, .. }, PieceBasis::Mons { index, .. }) =
                    (&src.basis, &tgt.basis)
                else {
                    unreachable!()
                };
                for (c, mono) in mons.iter().enumerate() {
                    if is_x {
                        let mut t = mono.clone();
                        t.x[i] += 1;
                        m.set(index[&t], c, Rat::one());
                    } else if mono.x[i] > 0 {
                        let mut t = mono.clone();
                        t.x[i] -= 1;
                        m.set(index[&t], c, rat(mono.x[i] as i64));
                    }
                }
                m
            }
            Kind::Laurent => {
                let coeff = if is_x { Rat::one() } else { rat(d) };
                QMatrix::from_fn(1, 1, |_, _| coeff.clone())
            }
            Kind::Cech { .. } => {
                let src = self.piece(d);
                let tgt = self.piece(tgt_deg);
                let mut m = QMatrix::zero(tgt.dim, src.dim);
                let (PieceBasis::Exps { exps, .. }, PieceBasis::Exps { index, .. }) =
                    (&src.basis, &tgt.basis)
                else {
                    unreachable!()
                };
                for (c, (v, k)) in exps.iter().enumerate() {
                    let negative = v.iter().all(|&e| e < 0);
                    if is_x {
                        let mut t = v.clone();
                        t[i] += 1;
                        if negative && t[i] == 0 {
                            continue;
                        }
                        m.set(index[&(t, *k)], c, Rat::one());
                    } else {
                        if v[i] == 0 {
                            continue;
                        }
                        let mut t = v.clone();
                        t[i] -= 1;
                        m.set(index[&(t, *k)], c, rat(v[i]));
                    }
                }
                m
            }
            Kind::Presentation { gb, .. } => {
                let src = self.piece(d);
                let tgt = self.piece(tgt_deg);
                let mut m = QMatrix::zero(tgt.dim, src.dim);
                let (PieceBasis::Mons { mons, .. }, PieceBasis::Mons { index, .. }) =
                    (&src.basis, &tgt.basis)
                else {
                    unreachable!()
                };
                let var = if is_x {
                    WeylElement::var_x(self.n, i)
                } else {
                    WeylElement::var_d(self.n, i)
                };
                for (c, mono) in mons.iter().enumerate() {
                    let f = var.mul(&WeylElement::from_term(self.n, mono.clone(), Rat::one()));
                    let nf = normal_form(&f, gb);
                    for (t, coeff) in nf.terms() {
                        let r = *index
                            .get(t)
                            .expect("normal form lands on standard monomials of the target piece");
                        m.set(r, c, coeff.clone());
                    }
                }
                m
            }
            Kind::Shift { inner, offset } => {
                let m = if is_x { inner.act_x(i, d + offset) } else { inner.act_d(i, d + offset) };
                (*m).clone()
            }
            Kind::Dual { inner } => {
                if is_x {
                    inner.act_x(i, -d - 1).transpose()
                } else {
                    inner.act_d(i, -d + 1).transpose().scale(&-Rat::one())
                }
            }
            Kind::Transpose { inner } => {
                let m = if is_x { inner.act_x(i, d) } else { inner.act_d(i, d) };
                if is_x {
                    (*m).clone()
                } else {
                    m.scale(&-Rat::one())
                }
            }
            Kind::Sum { parts } => {
                let mut rows = 0;
                let mut cols = 0;
                let blocks: Vec<Rc<QMatrix>> = parts
                    .iter()
                    .map(|p| if is_x { p.act_x(i, d) } else { p.act_d(i, d) })
                    .collect();
                for b in &blocks {
                    rows += b.rows();
                    cols += b.cols();
                }
                let mut m = QMatrix::zero(rows, cols);
                let mut ro = 0;
                let mut co = 0;
                for b in &blocks {
                    for r in 0..b.rows() {
                        for c in 0..b.cols() {
                            if !b.at(r, c).is_zero() {
                                m.set(ro + r, co + c, b.at(r, c).clone());
                            }
                        }
                    }
                    ro += b.rows();
                    co += b.cols();
                }
                m
            }
            Kind::Koszul { inner, op, homological } => {
                let src = self.piece(d);
                let tgt = self.piece(tgt_deg);
                let e = koszul_ambient_degree(*op, *homological, d);
                let mat = if is_x { inner.act_x(i, e) } else { inner.act_d(i, e) };
                let (PieceBasis::Sub(ssq), PieceBasis::Sub(tsq)) = (&src.basis, &tgt.basis)
                else {
                    unreachable!()
                };
                let cols: Vec<Vec<Rat>> = (0..ssq.dim())
                    .map(|j| tsq.reduce(&mat.apply(ssq.rep(j))))
                    .collect();
                QMatrix::from_cols(tsq.dim(), &cols)
            }
        }
    }

    /// Matrix of the left action of a homogeneous element of the given
    /// weight from the degree-d piece to the degree-(d+weight) piece.
    pub fn apply_homogeneous(&self, w: &WeylElement, weight: i64, d: i64) -> QMatrix {
        debug_assert!(w.is_zero() || w.is_homogeneous_of(weight));
        let rows = self.dim(d + weight);
        let cols = self.dim(d);
        let mut out = QMatrix::zero(rows, cols);
        for (mono, coeff) in w.terms() {
            let mut cur = QMatrix::identity(cols);
            let mut e = d;
            for i in 0..self.n {
                for _ in 0..mono.d[i] {
                    cur = self.act_d(i, e).mul(&cur);
                    e -= 1;
                }
            }
            for i in 0..self.n {
                for _ in 0..mono.x[i] {
                    cur = self.act_x(i, e).mul(&cur);
                    e += 1;
                }
            }
            debug_assert_eq!(e, d + weight);
            out = out.add(&cur.scale(coeff));
        }
        out
    }

    /// Matrix of the Euler operator on the degree-d piece.
    pub fn euler_matrix(&self, d: i64) -> QMatrix {
        let dim = self.dim(d);
        let mut m = QMatrix::zero(dim, dim);
        for i in 0..self.n {
            m = m.add(&self.act_x(i, d - 1).mul(&self.act_d(i, d)));
        }
        m
    }

    /// Check nilpotency of (E - d) on every nonempty piece in the inclusive
    /// window.  Degrees with zero-dimensional pieces are not listed.
    pub fn check_generalized_eulerian(
        &self,
        lo: i64,
        hi: i64,
        a_max: u32,
    ) -> Result<EulerianReport, ModelError> {
        if self.right {
            return Err(ModelError::RightModule);
        }
        let mut per_degree = Vec::new();
        for d in lo..=hi {
            let dim = self.dim(d);
            if dim == 0 {
                continue;
            }
            let mut a = self.euler_matrix(d);
            for j in 0..dim {
                let v = a.at(j, j) - rat(d);
                a.set(j, j, v);
            }
            let cap = a_max.max(dim as u32);
            let verdict = match a.nilpotency(cap) {
                Nilpotency::Nilpotent { order } => DegreeVerdict::Nilpotent { order },
                Nilpotency::NotNilpotent { conclusive, .. } => {
                    DegreeVerdict::NotNilpotent { conclusive }
                }
            };
            per_degree.push((d, verdict));
        }
        let vacuous = per_degree.is_empty();
        let mut bound = Some(0u32);
        for (_, v) in &per_degree {
            match v {
                DegreeVerdict::Nilpotent { order } => {
                    bound = bound.map(|b| b.max(*order));
                }
                DegreeVerdict::NotNilpotent { .. } => {
                    bound = None;
                    break;
                }
            }
        }
        Ok(EulerianReport { lo, hi, per_degree, uniform_bound: bound, vacuous })
    }

    /// Verify the defining operator relations on every degree of the window
    /// where both sides are composable: commuting x's, commuting d's, and
    /// [d_i, x_j] equal to the identity exactly when i = j (negated for
    /// right modules).
    pub fn verify_weyl_relations(&self, lo: i64, hi: i64) -> Result<(), String> {
        let sign = if self.right { -Rat::one() } else { Rat::one() };
        for d in lo..=hi {
            for i in 0..self.n {
                for j in 0..self.n {
                    let xx = self
                        .act_x(j, d + 1)
                        .mul(&self.act_x(i, d))
                        .sub(&self.act_x(i, d + 1).mul(&self.act_x(j, d)));
                    if !xx.is_zero() {
                        return Err(format!("x{} and x{} do not commute at degree {}", i + 1, j + 1, d));
                    }
                    let dd = self
                        .act_d(j, d - 1)
                        .mul(&self.act_d(i, d))
                        .sub(&self.act_d(i, d - 1).mul(&self.act_d(j, d)));
                    if !dd.is_zero() {
                        return Err(format!("d{} and d{} do not commute at degree {}", i + 1, j + 1, d));
                    }
                    let mut comm = self
                        .act_d(j, d + 1)
                        .mul(&self.act_x(i, d))
                        .sub(&self.act_x(i, d - 1).mul(&self.act_d(j, d)));
                    if i == j {
                        let dim = self.dim(d);
                        let id = QMatrix::identity(dim).scale(&sign);
                        comm = comm.sub(&id);
                    }
                    if !comm.is_zero() {
                        return Err(format!(
                            "[d{}, x{}] is wrong at degree {}",
                            j + 1,
                            i + 1,
                            d
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_element;

    fn binom(a: i64, b: i64) -> usize {
        if b < 0 || a < b {
            return 0;
        }
        num_integer::binomial(a as u64, b as u64) as usize
    }

    fn mono_x(n: usize, exps: &[u32]) -> Mono {
        Mono { x: exps.to_vec(), d: vec![0; n] }
    }

    #[test]
    fn polynomial_dims_labels_relations() {
        let r = polynomial_model(2);
        for d in -3..=6 {
            let expect = if d < 0 { 0 } else { binom(d + 1, 1) };
            assert_eq!(r.dim(d), expect, "dim at {}", d);
        }
        assert_eq!(r.labels(2), alloc::vec!["x2^2", "x1*x2", "x1^2"]);
        r.verify_weyl_relations(-2, 5).unwrap();
        let rep = r.check_generalized_eulerian(-3, 6, 1).unwrap();
        assert_eq!(rep.uniform_bound, Some(1));
        assert!(!rep.vacuous);
        assert!(rep.holds());
    }

    #[test]
    fn laurent_is_scalar_euler() {
        let l = laurent_model(1).unwrap();
        assert!(laurent_model(2).is_err());
        for d in -4..=4 {
            assert_eq!(l.dim(d), 1);
            let e = l.euler_matrix(d);
            assert_eq!(e.at(0, 0), &rat(d));
        }
        l.verify_weyl_relations(-3, 3).unwrap();
        assert!(l.check_generalized_eulerian(-5, 5, 1).unwrap().holds());
    }

    #[test]
    fn shifted_polynomial_fails_conclusively() {
        for s in [-2i64, -1, 1, 2] {
            let m = shift_model(polynomial_model(1), s);
            let rep = m.check_generalized_eulerian(-4, 4, 3).unwrap();
            assert!(!rep.holds(), "shift {}", s);
            let (_, conclusive) = rep.first_failure().unwrap();
            assert!(conclusive);
        }
    }

    #[test]
    fn top_cech_matches_support_dimensions() {
        for n in 1..=3usize {
            let gens: Vec<Mono> = (0..n)
                .map(|i| {
                    let mut e = vec![0u32; n];
                    e[i] = 1;
                    mono_x(n, &e)
                })
                .collect();
            let m = cech_local_cohomology_model(n, &gens, n).unwrap();
            for d in -8..=2 {
                let expect = binom(-d - 1, n as i64 - 1);
                let expect = if d <= -(n as i64) { expect } else { 0 };
                assert_eq!(m.dim(d), expect, "n {} d {}", n, d);
            }
            m.verify_weyl_relations(-6, 2).unwrap();
            let rep = m.check_generalized_eulerian(-8, 2, 1).unwrap();
            assert!(rep.holds());
            assert_eq!(rep.uniform_bound, Some(1));
        }
    }

    #[test]
    fn lower_cech_indices_vanish_for_coordinate_gens() {
        let gens = alloc::vec![mono_x(2, &[1, 0]), mono_x(2, &[0, 1])];
        for i in 0..2 {
            let m = cech_local_cohomology_model(2, &gens, i).unwrap();
            for d in -6..=4 {
                assert_eq!(m.dim(d), 0);
            }
        }
    }

    #[test]
    fn partial_localizations_are_rejected() {
        let only_x1 = alloc::vec![mono_x(2, &[1, 0])];
        assert!(matches!(
            cech_local_cohomology_model(2, &only_x1, 1),
            Err(ModelError::InfiniteDimensional(_))
        ));
        let product = alloc::vec![mono_x(2, &[1, 1])];
        assert!(matches!(
            cech_local_cohomology_model(2, &product, 1),
            Err(ModelError::InfiniteDimensional(_))
        ));
    }

    #[test]
    fn redundant_generators_agree_with_coordinate_ones() {
        let plain = cech_local_cohomology_model(
            2,
            &[mono_x(2, &[1, 0]), mono_x(2, &[0, 1])],
            2,
        )
        .unwrap();
        let redundant = cech_local_cohomology_model(
            2,
            &[mono_x(2, &[1, 0]), mono_x(2, &[0, 1]), mono_x(2, &[1, 1])],
            2,
        )
        .unwrap();
        for d in -7..=1 {
            assert_eq!(plain.dim(d), redundant.dim(d));
        }
        redundant.verify_weyl_relations(-5, 0).unwrap();
    }

    #[test]
    fn presentation_of_derivative_ideal_matches_polynomial() {
        let gens = alloc::vec![parse_element(2, "d1").unwrap(), parse_element(2, "d2").unwrap()];
        let m = presentation_model(2, &gens, 0).unwrap();
        let r = polynomial_model(2);
        for d in -3..=6 {
            assert_eq!(m.dim(d), r.dim(d));
            assert_eq!(m.labels(d), r.labels(d));
        }
        m.verify_weyl_relations(-2, 5).unwrap();
        assert!(m.check_generalized_eulerian(-3, 6, 1).unwrap().holds());
    }

    #[test]
    fn presentation_of_variable_ideal_is_torsion_type() {
        for n in 1..=2usize {
            let gens: Vec<WeylElement> =
                (1..=n).map(|i| parse_element(n, &format!("x{}", i)).unwrap()).collect();
            let m = presentation_model(n, &gens, n as i64).unwrap();
            for d in -8..=1 {
                let expect = if d <= -(n as i64) { binom(-d - 1, n as i64 - 1) } else { 0 };
                assert_eq!(m.dim(d), expect, "n {} d {}", n, d);
            }
            m.verify_weyl_relations(-6, 1).unwrap();
            assert!(m.check_generalized_eulerian(-8, 1, 1).unwrap().holds());
        }
    }

    #[test]
    fn presentation_second_derivative_not_eulerian() {
        let m = presentation_model(1, &[parse_element(1, "d1^2").unwrap()], 0).unwrap();
        assert_eq!(m.dim(-1), 1);
        for d in 0..=4 {
            assert_eq!(m.dim(d), 2);
        }
        assert_eq!(m.labels(0), alloc::vec!["1", "x1*d1"]);
        let e = m.euler_matrix(0);
        assert_eq!(e.at(0, 0), &rat(0));
        assert_eq!(e.at(0, 1), &rat(0));
        assert_eq!(e.at(1, 0), &rat(1));
        assert_eq!(e.at(1, 1), &rat(1));
        m.verify_weyl_relations(-3, 4).unwrap();
        let rep = m.check_generalized_eulerian(-2, 4, 2).unwrap();
        assert!(!rep.holds());
        let (deg, conclusive) = rep.first_failure().unwrap();
        assert_eq!(deg, -1);
        assert!(conclusive);
        assert!(rep
            .per_degree
            .iter()
            .all(|(_, v)| matches!(v, DegreeVerdict::NotNilpotent { conclusive: true })));
    }

    #[test]
    fn presentation_euler_ideal_is_eulerian() {
        let m = presentation_model(1, &[WeylElement::euler(1)], 0).unwrap();
        for d in -4..=4 {
            assert_eq!(m.dim(d), 1, "degree {}", d);
        }
        m.verify_weyl_relations(-3, 3).unwrap();
        assert!(m.check_generalized_eulerian(-4, 4, 1).unwrap().holds());
    }

    #[test]
    fn whole_algebra_presentation_is_rejected() {
        assert!(matches!(
            presentation_model(1, &[], 0),
            Err(ModelError::InfiniteDimensional(_))
        ));
    }

    #[test]
    fn unit_ideal_presentation_is_zero() {
        let m = presentation_model(1, &[parse_element(1, "x1").unwrap(), parse_element(1, "d1").unwrap()], 0)
            .unwrap();
        for d in -3..=3 {
            assert_eq!(m.dim(d), 0);
        }
        assert!(m.check_generalized_eulerian(-3, 3, 1).unwrap().vacuous);
    }

    #[test]
    fn dual_of_polynomial_relations_and_euler() {
        let m = matlis_dual(polynomial_model(2)).unwrap();
        for d in -2..=5 {
            assert_eq!(m.dim(d), polynomial_model(2).dim(-d));
        }
        m.verify_weyl_relations(-4, 4).unwrap();
        for d in [-1i64, 0, 2] {
            let dim = m.dim(d);
            if dim == 0 {
                continue;
            }
            let e = m.euler_matrix(d);
            let expect = QMatrix::identity(dim).scale(&rat(d - 2));
            assert!(e.sub(&expect).is_zero(), "degree {}", d);
        }
    }

    #[test]
    fn dual_of_top_cech_looks_like_shifted_polynomial() {
        let top = cech_local_cohomology_model(2, &[mono_x(2, &[1, 0]), mono_x(2, &[0, 1])], 2).unwrap();
        let m = matlis_dual(top).unwrap();
        let r = polynomial_model(2);
        for d in 0..=6 {
            assert_eq!(m.dim(d), r.dim(d - 2));
        }
        m.verify_weyl_relations(-2, 5).unwrap();
    }

    #[test]
    fn transpose_flips_side_and_relations() {
        let t = transpose_model(polynomial_model(2));
        assert!(t.is_right());
        t.verify_weyl_relations(-2, 4).unwrap();
        assert!(matches!(
            t.check_generalized_eulerian(-2, 4, 1),
            Err(ModelError::RightModule)
        ));
        let back = transpose_model(t);
        assert!(!back.is_right());
        back.verify_weyl_relations(-2, 4).unwrap();
    }

    #[test]
    fn direct_sum_blocks() {
        let one = polynomial_model(1);
        let top = cech_local_cohomology_model(1, &[mono_x(1, &[1])], 1).unwrap();
        let s = direct_sum(alloc::vec![one, top]).unwrap();
        for d in -4..=4 {
            assert_eq!(s.dim(d), 1);
        }
        s.verify_weyl_relations(-3, 3).unwrap();
        assert!(s.check_generalized_eulerian(-4, 4, 1).unwrap().holds());
        assert!(direct_sum(alloc::vec![]).is_err());
        assert!(direct_sum(alloc::vec![polynomial_model(1), polynomial_model(2)]).is_err());
    }

    #[test]
    fn koszul_quotient_by_last_variable() {
        let m = koszul_last_var(polynomial_model(2), LastVarOp::MultiplyLast, 0).unwrap();
        assert_eq!(m.n(), 1);
        for d in -2..=5 {
            let expect = if d >= 0 { 1 } else { 0 };
            assert_eq!(m.dim(d), expect);
        }
        m.verify_weyl_relations(-2, 4).unwrap();
        assert!(m.check_generalized_eulerian(-2, 5, 1).unwrap().holds());
    }

    #[test]
    fn koszul_kernel_of_multiplication_vanishes_on_polynomials() {
        let m = koszul_last_var(polynomial_model(2), LastVarOp::MultiplyLast, 1).unwrap();
        for d in -3..=5 {
            assert_eq!(m.dim(d), 0);
        }
    }

    #[test]
    fn koszul_kernel_of_differentiation_needs_a_shift() {
        let raw = koszul_last_var(polynomial_model(2), LastVarOp::DifferentiateLast, 1).unwrap();
        let m = shift_model(raw, -1);
        for d in -2..=5 {
            let expect = if d >= 0 { 1 } else { 0 };
            assert_eq!(m.dim(d), expect);
        }
        m.verify_weyl_relations(-2, 4).unwrap();
        assert!(m.check_generalized_eulerian(-2, 5, 1).unwrap().holds());
    }

    #[test]
    fn koszul_kernel_of_torsion_type() {
        let top = cech_local_cohomology_model(2, &[mono_x(2, &[1, 0]), mono_x(2, &[0, 1])], 2).unwrap();
        let quot = koszul_last_var(Rc::clone(&top), LastVarOp::MultiplyLast, 0).unwrap();
        for d in -6..=1 {
            assert_eq!(quot.dim(d), 0, "multiplication is onto at degree {}", d);
        }
        let m = koszul_last_var(top, LastVarOp::MultiplyLast, 1).unwrap();
        for d in -6..=1 {
            let expect = if d <= -1 { 1 } else { 0 };
            assert_eq!(m.dim(d), expect, "degree {}", d);
        }
        m.verify_weyl_relations(-5, 0).unwrap();
        assert!(m.check_generalized_eulerian(-6, 1, 1).unwrap().holds());
    }

    #[test]
    fn apply_homogeneous_composes_actions() {
        let r = polynomial_model(2);
        let w = parse_element(2, "x1^2*d2").unwrap();
        let got = r.apply_homogeneous(&w, 1, 2);
        let by_hand = r
            .act_x(0, 2)
            .mul(&r.act_x(0, 1).mul(&r.act_d(1, 2)));
        assert!(got.sub(&by_hand).is_zero());
        let e = WeylElement::euler(2);
        let em = r.apply_homogeneous(&e, 0, 3);
        assert!(em.sub(&r.euler_matrix(3)).is_zero());
        let zero = WeylElement::zero(2);
        let zm = r.apply_homogeneous(&zero, -1, 2);
        assert_eq!(zm.rows(), r.dim(1));
        assert_eq!(zm.cols(), r.dim(2));
        assert!(zm.is_zero());
    }

    #[test]
    fn squared_euler_ideal_is_eulerian_of_order_two() {
        let e2 = WeylElement::euler(1).power(2);
        let m = presentation_model(1, &[e2], 0).unwrap();
        let rep = m.check_generalized_eulerian(-3, 3, 2).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.uniform_bound, Some(2));
    }

    #[test]
    fn squared_variable_ideal_fails_conclusively() {
        let m = presentation_model(1, &[parse_element(1, "x1^2").unwrap()], 0).unwrap();
        let rep = m.check_generalized_eulerian(-3, 3, 2).unwrap();
        assert!(!rep.holds());
        assert!(!rep.only_inconclusive_failures());
    }
}
