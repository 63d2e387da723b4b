//! Koszul homology of module models, Hom complexes against free
//! resolutions, certified module structure over the polynomial subalgebra,
//! and degree-concentration reports for Tor and Ext.

use alloc::rc::Rc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::groebner::FreeResolution;
use crate::matrix::{QMatrix, Subquotient};
use crate::model::{GradedModel, Kind};
use crate::weyl::{Rat, WeylElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomologyError {
    MixedOps,
    AmbientMismatch,
    RightModule,
    TruncatedResolution,
    Unstructured,
}

impl fmt::Display for HomologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomologyError::MixedOps => {
                write!(f, "koszul operators must be all multiplications or all differentiations")
            }
            HomologyError::AmbientMismatch => write!(f, "ambient algebras do not match"),
            HomologyError::RightModule => write!(f, "operation requires a left module"),
            HomologyError::TruncatedResolution => {
                write!(f, "free resolution is truncated before the requested position")
            }
            HomologyError::Unstructured => {
                write!(f, "module structure over the polynomial subalgebra is not certified")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for HomologyError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KoszulOp {
    Multiply(usize),
    Differentiate(usize),
}

impl KoszulOp {
    fn weight(self) -> i64 {
        match self {
            KoszulOp::Multiply(_) => 1,
            KoszulOp::Differentiate(_) => -1,
        }
    }
}

pub fn derivative_ops(n: usize) -> Vec<KoszulOp> {
    (0..n).map(KoszulOp::Differentiate).collect()
}

pub fn variable_ops(n: usize) -> Vec<KoszulOp> {
    (0..n).map(KoszulOp::Multiply).collect()
}

#[derive(Debug, Clone)]
pub struct KoszulBlock {
    pub mask: u32,
    pub generator_weight: i64,
    pub inner_degree: i64,
    pub dim: usize,
}

pub struct KoszulPiece {
    pub sq: Subquotient,
    pub blocks: Vec<KoszulBlock>,
}

fn check_ops(model: &GradedModel, ops: &[KoszulOp]) -> Result<(), HomologyError> {
    if model.is_right() {
        return Err(HomologyError::RightModule);
    }
    let mut mult = false;
    let mut diff = false;
    for op in ops {
        let i = match op {
            KoszulOp::Multiply(i) => {
                mult = true;
                *i
            }
            KoszulOp::Differentiate(i) => {
                diff = true;
                *i
            }
        };
        if i >= model.n() {
            return Err(HomologyError::AmbientMismatch);
        }
    }
    if mult && diff {
        return Err(HomologyError::MixedOps);
    }
    Ok(())
}

fn masks_of_size(r: usize, k: usize) -> Vec<u32> {
    (0..(1u32 << r)).filter(|m| m.count_ones() as usize == k).collect()
}

fn mask_weight(ops: &[KoszulOp], mask: u32) -> i64 {
    ops.iter()
        .enumerate()
        .filter(|(s, _)| mask & (1 << s) != 0)
        .map(|(_, op)| op.weight())
        .sum()
}

fn blocks_for(model: &GradedModel, ops: &[KoszulOp], k: usize, l: i64) -> Vec<KoszulBlock> {
    masks_of_size(ops.len(), k)
        .into_iter()
        .map(|mask| {
            let w = mask_weight(ops, mask);
            let e = l - w;
            KoszulBlock { mask, generator_weight: w, inner_degree: e, dim: model.dim(e) }
        })
        .collect()
}

/// Matrix of the Koszul differential from homological position k to k-1 at
/// representation degree l.
fn koszul_matrix(model: &GradedModel, ops: &[KoszulOp], k: usize, l: i64) -> QMatrix {
    let src = blocks_for(model, ops, k, l);
    let tgt = blocks_for(model, ops, k - 1, l);
    let mut tgt_off = alloc::collections::BTreeMap::new();
    let mut rows = 0;
    for b in &tgt {
        tgt_off.insert(b.mask, rows);
        rows += b.dim;
    }
    let cols: usize = src.iter().map(|b| b.dim).sum();
    let mut m = QMatrix::zero(rows, cols);
    let mut co = 0;
    for b in &src {
        for (s, op) in ops.iter().enumerate() {
            let bit = 1u32 << s;
            if b.mask & bit == 0 {
                continue;
            }
            let rest = b.mask & !bit;
            let below = (b.mask & (bit - 1)).count_ones();
            let sign = if below % 2 == 0 { Rat::one() } else { -Rat::one() };
            let act = match op {
                KoszulOp::Multiply(i) => model.act_x(*i, b.inner_degree),
                KoszulOp::Differentiate(i) => model.act_d(*i, b.inner_degree),
            };
            let ro = tgt_off[&rest];
            for r in 0..act.rows() {
                for c in 0..act.cols() {
                    let v = act.at(r, c);
                    if !num_traits::Zero::is_zero(v) {
                        let cur = m.at(ro + r, co + c).clone();
                        m.set(ro + r, co + c, cur + v.clone() * sign.clone());
                    }
                }
            }
        }
        co += b.dim;
    }
    m
}

/// Homology of the Koszul complex on the listed commuting operators at the
/// given homological position and representation degree.  Generators carry
/// the weights of their operators, so for differentiations position k at
/// degree l draws on the module in degrees l + k.
pub fn koszul_homology_piece(
    model: &Rc<GradedModel>,
    ops: &[KoszulOp],
    position: usize,
    rep_degree: i64,
) -> Result<KoszulPiece, HomologyError> {
    check_ops(model, ops)?;
    let r = ops.len();
    if position > r {
        return Ok(KoszulPiece { sq: Subquotient::new(0, &[], &[]), blocks: Vec::new() });
    }
    let blocks = blocks_for(model, ops, position, rep_degree);
    let ambient: usize = blocks.iter().map(|b| b.dim).sum();
    let cycles: Vec<Vec<Rat>> = if position == 0 {
        QMatrix::identity(ambient).columns()
    } else {
        koszul_matrix(model, ops, position, rep_degree).kernel_basis()
    };
    let boundaries: Vec<Vec<Rat>> = if position + 1 > r {
        Vec::new()
    } else {
        koszul_matrix(model, ops, position + 1, rep_degree).columns()
    };
    let sq = Subquotient::new(ambient, &cycles, &boundaries);
    Ok(KoszulPiece { sq, blocks })
}

pub fn koszul_homology_dim(
    model: &Rc<GradedModel>,
    ops: &[KoszulOp],
    position: usize,
    rep_degree: i64,
) -> Result<usize, HomologyError> {
    Ok(koszul_homology_piece(model, ops, position, rep_degree)?.sq.dim())
}

/// Graded dimension of Tor at the given homological position between the
/// model and the polynomial quotient of the Weyl algebra, computed from the
/// Koszul resolution of the latter by differentiations.
pub fn tor_dim_with_polynomials(
    model: &Rc<GradedModel>,
    nu: usize,
    degree: i64,
) -> Result<usize, HomologyError> {
    let n = model.n();
    if nu > n {
        return Ok(0);
    }
    koszul_homology_dim(model, &derivative_ops(n), nu, degree)
}

#[derive(Debug, Clone)]
pub struct HomBlock {
    pub shift: i64,
    pub inner_degree: i64,
    pub dim: usize,
}

pub struct HomPiece {
    pub sq: Subquotient,
    pub blocks: Vec<HomBlock>,
}

fn hom_blocks(res: &FreeResolution, coeff: &GradedModel, k: usize, l: i64) -> Vec<HomBlock> {
    res.stage_shifts(k)
        .iter()
        .map(|&t| HomBlock { shift: t, inner_degree: l - t, dim: coeff.dim(l - t) })
        .collect()
}

/// Matrix of the Hom-complex differential from cohomological position k to
/// k+1 at graded degree l: precomposition with the resolution map.
fn hom_matrix(res: &FreeResolution, coeff: &GradedModel, k: usize, l: i64) -> QMatrix {
    let src = hom_blocks(res, coeff, k, l);
    let tgt = hom_blocks(res, coeff, k + 1, l);
    let rows: usize = tgt.iter().map(|b| b.dim).sum();
    let cols: usize = src.iter().map(|b| b.dim).sum();
    let mut m = QMatrix::zero(rows, cols);
    let Some(map) = res.maps.get(k) else {
        return m;
    };
    let mut ro = 0;
    for (r, tb) in tgt.iter().enumerate() {
        let mut co = 0;
        for (c, sb) in src.iter().enumerate() {
            let w = &map[r][c];
            if !w.is_zero() {
                let weight = sb.shift - tb.shift;
                let block = coeff.apply_homogeneous(w, weight, sb.inner_degree);
                for br in 0..block.rows() {
                    for bc in 0..block.cols() {
                        let v = block.at(br, bc);
                        if !num_traits::Zero::is_zero(v) {
                            m.set(ro + br, co + bc, v.clone());
                        }
                    }
                }
            }
            co += sb.dim;
        }
        ro += tb.dim;
    }
    m
}

/// Graded piece of Ext over the Weyl algebra computed from a free
/// resolution and a coefficient model.
pub fn ext_piece_over_weyl(
    res: &FreeResolution,
    coeff: &Rc<GradedModel>,
    nu: usize,
    degree: i64,
) -> Result<HomPiece, HomologyError> {
    if coeff.n() != res.n {
        return Err(HomologyError::AmbientMismatch);
    }
    if coeff.is_right() {
        return Err(HomologyError::RightModule);
    }
    if res.truncated && nu + 1 > res.last_stage() {
        return Err(HomologyError::TruncatedResolution);
    }
    let blocks = hom_blocks(res, coeff, nu, degree);
    let ambient: usize = blocks.iter().map(|b| b.dim).sum();
    let cycles = if res.rank(nu + 1) == 0 {
        QMatrix::identity(ambient).columns()
    } else {
        hom_matrix(res, coeff, nu, degree).kernel_basis()
    };
    let boundaries = if nu == 0 {
        Vec::new()
    } else {
        hom_matrix(res, coeff, nu - 1, degree).columns()
    };
    let sq = Subquotient::new(ambient, &cycles, &boundaries);
    Ok(HomPiece { sq, blocks })
}

pub fn ext_dim_over_weyl(
    res: &FreeResolution,
    coeff: &Rc<GradedModel>,
    nu: usize,
    degree: i64,
) -> Result<usize, HomologyError> {
    Ok(ext_piece_over_weyl(res, coeff, nu, degree)?.sq.dim())
}

/// Certified isomorphism type of a model as a graded module over the
/// polynomial subalgebra: zero, a sum of equal twists of the polynomials, a
/// sum of equal twists of the top local cohomology, or unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RClass {
    Zero,
    Free { twist: i64, mult: usize },
    Torsion { twist: i64, mult: usize },
    Unknown,
}

pub fn certify_r_structure(model: &GradedModel) -> RClass {
    let n = model.n() as i64;
    match model.kind() {
        Kind::Polynomial => RClass::Free { twist: 0, mult: 1 },
        Kind::Laurent => RClass::Unknown,
        Kind::Cech { mult_pos, mult_neg } => match (*mult_pos, *mult_neg) {
            (0, 0) => RClass::Zero,
            (h, 0) => RClass::Free { twist: 0, mult: h },
            (0, h) => RClass::Torsion { twist: 0, mult: h },
            _ => RClass::Unknown,
        },
        Kind::Presentation { gb, shift, .. } => {
            let nn = model.n();
            let ideal: Vec<WeylElement> = gb.elems.iter().map(|g| g.comp(0)).collect();
            let all_d = ideal.len() == nn
                && (0..nn).all(|i| ideal.iter().any(|g| *g == WeylElement::var_d(nn, i)));
            let all_x = ideal.len() == nn
                && (0..nn).all(|i| ideal.iter().any(|g| *g == WeylElement::var_x(nn, i)));
            if all_d {
                RClass::Free { twist: *shift, mult: 1 }
            } else if all_x {
                RClass::Torsion { twist: *shift - n, mult: 1 }
            } else {
                RClass::Unknown
            }
        }
        Kind::Shift { inner, offset } => match certify_r_structure(inner) {
            RClass::Free { twist, mult } => RClass::Free { twist: twist + offset, mult },
            RClass::Torsion { twist, mult } => RClass::Torsion { twist: twist + offset, mult },
            RClass::Zero => RClass::Zero,
            RClass::Unknown => RClass::Unknown,
        },
        Kind::Dual { inner } => match certify_r_structure(inner) {
            RClass::Free { twist, mult } => RClass::Torsion { twist: -n - twist, mult },
            RClass::Torsion { twist, mult } => RClass::Free { twist: -n - twist, mult },
            RClass::Zero => RClass::Zero,
            RClass::Unknown => RClass::Unknown,
        },
        Kind::Sum { parts } => {
            let mut acc = RClass::Zero;
            for p in parts {
                let c = certify_r_structure(p);
                acc = match (acc, c) {
                    (a, RClass::Zero) => a,
                    (RClass::Zero, b) => b,
                    (RClass::Free { twist: t, mult: h }, RClass::Free { twist: u, mult: b })
                        if t == u =>
                    {
                        RClass::Free { twist: t, mult: h + b }
                    }
                    (
                        RClass::Torsion { twist: t, mult: h },
                        RClass::Torsion { twist: u, mult: b },
                    ) if t == u => RClass::Torsion { twist: t, mult: h + b },
                    _ => RClass::Unknown,
                };
                if acc == RClass::Unknown {
                    break;
                }
            }
            acc
        }
        Kind::Transpose { .. } | Kind::Koszul { .. } => RClass::Unknown,
    }
}

/// Dimension of the degree-j piece of the polynomial algebra.
pub fn polynomial_piece_dim(n: usize, j: i64) -> usize {
    if j < 0 {
        return 0;
    }
    num_integer::binomial((j + n as i64 - 1) as u64, (n as i64 - 1) as u64) as usize
}

/// Dimension of the degree-j piece of the top local cohomology of the
/// polynomial algebra at the maximal monomial ideal.
pub fn top_local_cohomology_piece_dim(n: usize, j: i64) -> usize {
    if j > -(n as i64) {
        return 0;
    }
    num_integer::binomial((-j - 1) as u64, (n as i64 - 1) as u64) as usize
}

fn certified_pair(
    a: &GradedModel,
    b: &GradedModel,
) -> Result<(usize, RClass, RClass), HomologyError> {
    if a.n() != b.n() {
        return Err(HomologyError::AmbientMismatch);
    }
    let ca = certify_r_structure(a);
    let cb = certify_r_structure(b);
    if ca == RClass::Unknown || cb == RClass::Unknown {
        return Err(HomologyError::Unstructured);
    }
    Ok((a.n(), ca, cb))
}

/// Graded dimension of Tor over the polynomial subalgebra between two
/// certified models.
pub fn tor_over_polynomials(
    a: &GradedModel,
    b: &GradedModel,
    nu: usize,
    degree: i64,
) -> Result<usize, HomologyError> {
    let (n, ca, cb) = certified_pair(a, b)?;
    let l = degree;
    Ok(match (ca, cb) {
        (RClass::Zero, _) | (_, RClass::Zero) => 0,
        (RClass::Free { twist: t, mult: h }, RClass::Free { twist: u, mult: b }) => {
            if nu == 0 {
                h * b * polynomial_piece_dim(n, t + u + l)
            } else {
                0
            }
        }
        (RClass::Free { twist: t, mult: h }, RClass::Torsion { twist: u, mult: b })
        | (RClass::Torsion { twist: t, mult: h }, RClass::Free { twist: u, mult: b }) => {
            if nu == 0 {
                h * b * top_local_cohomology_piece_dim(n, t + u + l)
            } else {
                0
            }
        }
        (RClass::Torsion { twist: t, mult: h }, RClass::Torsion { twist: u, mult: b }) => {
            if nu == n {
                h * b * top_local_cohomology_piece_dim(n, t + u + l)
            } else {
                0
            }
        }
        _ => unreachable!(),
    })
}

/// Graded dimension of Ext over the polynomial subalgebra between two
/// certified models.
pub fn ext_over_polynomials(
    a: &GradedModel,
    b: &GradedModel,
    nu: usize,
    degree: i64,
) -> Result<usize, HomologyError> {
    let (n, ca, cb) = certified_pair(a, b)?;
    let l = degree;
    Ok(match (ca, cb) {
        (RClass::Zero, _) | (_, RClass::Zero) => 0,
        (RClass::Free { twist: t, mult: h }, RClass::Free { twist: u, mult: b }) => {
            if nu == 0 {
                h * b * polynomial_piece_dim(n, u - t + l)
            } else {
                0
            }
        }
        (RClass::Free { twist: t, mult: h }, RClass::Torsion { twist: u, mult: b }) => {
            if nu == 0 {
                h * b * top_local_cohomology_piece_dim(n, u - t + l)
            } else {
                0
            }
        }
        (RClass::Torsion { twist: t, mult: h }, RClass::Free { twist: u, mult: b }) => {
            if nu == n {
                h * b * polynomial_piece_dim(n, u - t + l)
            } else {
                0
            }
        }
        (RClass::Torsion { twist: t, mult: h }, RClass::Torsion { twist: u, mult: b }) => {
            if nu == 0 {
                h * b * polynomial_piece_dim(n, u - t + l)
            } else {
                0
            }
        }
        _ => unreachable!(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConcentrationVerdict {
    Concentrated { vacuous: bool },
    Counterexample { nu: usize, degree: i64, dim: usize },
}

#[derive(Debug, Clone)]
pub struct ConcentrationReport {
    pub target: i64,
    pub lo: i64,
    pub hi: i64,
    pub nonzero: Vec<(usize, i64, usize)>,
    pub verdict: ConcentrationVerdict,
}

impl ConcentrationReport {
    pub fn holds(&self) -> bool {
        matches!(self.verdict, ConcentrationVerdict::Concentrated { .. })
    }
}

fn conclude(target: i64, lo: i64, hi: i64, nonzero: Vec<(usize, i64, usize)>) -> ConcentrationReport {
    let verdict = nonzero
        .iter()
        .find(|(_, l, _)| *l != target)
        .map(|&(nu, degree, dim)| ConcentrationVerdict::Counterexample { nu, degree, dim })
        .unwrap_or(ConcentrationVerdict::Concentrated { vacuous: nonzero.is_empty() });
    ConcentrationReport { target, lo, hi, nonzero, verdict }
}

/// Check that Tor against the polynomial quotient is concentrated in degree
/// minus the ambient dimension throughout the window.
pub fn tor_concentration_with_polynomials(
    model: &Rc<GradedModel>,
    lo: i64,
    hi: i64,
) -> Result<ConcentrationReport, HomologyError> {
    let n = model.n();
    let target = -(n as i64);
    let mut nonzero = Vec::new();
    for nu in 0..=n {
        for l in lo..=hi {
            let d = tor_dim_with_polynomials(model, nu, l)?;
            if d > 0 {
                nonzero.push((nu, l, d));
            }
        }
    }
    Ok(conclude(target, lo, hi, nonzero))
}

/// Check that Ext of the resolved module against the coefficient model is
/// concentrated in degree zero throughout the window.
pub fn ext_concentration_over_weyl(
    res: &FreeResolution,
    coeff: &Rc<GradedModel>,
    lo: i64,
    hi: i64,
) -> Result<ConcentrationReport, HomologyError> {
    let mut nonzero = Vec::new();
    for nu in 0..=res.last_stage() {
        for l in lo..=hi {
            let d = ext_dim_over_weyl(res, coeff, nu, l)?;
            if d > 0 {
                nonzero.push((nu, l, d));
            }
        }
    }
    Ok(conclude(0, lo, hi, nonzero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_element;
    use crate::groebner::{buchberger, free_resolution};
    use crate::matrix::Nilpotency;
    use crate::model::{
        cech_local_cohomology_model, matlis_dual, polynomial_model, presentation_model,
        shift_model,
    };
    use crate::order::BaseOrder;
    use crate::weyl::{rat, Mono};

    fn top_model(n: usize) -> Rc<GradedModel> {
        let gens: Vec<Mono> = (0..n)
            .map(|i| {
                let mut x = vec![0u32; n];
                x[i] = 1;
                Mono { x, d: vec![0; n] }
            })
            .collect();
        cech_local_cohomology_model(n, &gens, n).unwrap()
    }

    fn resolution_of_derivatives(n: usize) -> FreeResolution {
        let gens: Vec<WeylElement> =
            (1..=n).map(|i| parse_element(n, &alloc::format!("d{}", i)).unwrap()).collect();
        let gb = buchberger(n, &gens, BaseOrder::DegRevLex).unwrap();
        free_resolution(&gb, 0, 2 * n + 1).unwrap()
    }

    fn resolution_of_variables(n: usize) -> FreeResolution {
        let gens: Vec<WeylElement> =
            (1..=n).map(|i| parse_element(n, &alloc::format!("x{}", i)).unwrap()).collect();
        let gb = buchberger(n, &gens, BaseOrder::DegRevLex).unwrap();
        free_resolution(&gb, n as i64, 2 * n + 1).unwrap()
    }

    #[test]
    fn koszul_on_polynomials_by_derivatives() {
        for n in 1..=2usize {
            let r = polynomial_model(n);
            let ops = derivative_ops(n);
            for l in -5..=3 {
                for k in 0..=n {
                    let dim = koszul_homology_dim(&r, &ops, k, l).unwrap();
                    let expect = if k == n && l == -(n as i64) { 1 } else { 0 };
                    assert_eq!(dim, expect, "n {} k {} l {}", n, k, l);
                }
            }
        }
    }

    #[test]
    fn koszul_on_polynomials_by_variables() {
        let r = polynomial_model(2);
        let ops = variable_ops(2);
        for l in -3..=4 {
            for k in 0..=2 {
                let dim = koszul_homology_dim(&r, &ops, k, l).unwrap();
                let expect = if k == 0 && l == 0 { 1 } else { 0 };
                assert_eq!(dim, expect, "k {} l {}", k, l);
            }
        }
    }

    #[test]
    fn koszul_rejects_mixed_operator_types() {
        let r = polynomial_model(2);
        let ops = alloc::vec![KoszulOp::Multiply(0), KoszulOp::Differentiate(1)];
        assert_eq!(
            koszul_homology_dim(&r, &ops, 1, 0),
            Err(HomologyError::MixedOps)
        );
    }

    #[test]
    fn tor_fixture_top_cohomology_in_one_variable() {
        let e = top_model(1);
        for l in -6..=2 {
            let t0 = tor_dim_with_polynomials(&e, 0, l).unwrap();
            let t1 = tor_dim_with_polynomials(&e, 1, l).unwrap();
            assert_eq!(t0, if l == -1 { 1 } else { 0 }, "position 0 at {}", l);
            assert_eq!(t1, 0, "position 1 at {}", l);
        }
    }

    #[test]
    fn tor_concentration_for_catalog_models() {
        for n in 1..=2usize {
            let rep = tor_concentration_with_polynomials(&polynomial_model(n), -6, 3).unwrap();
            assert!(rep.holds(), "polynomials n {}", n);
            assert_eq!(rep.nonzero, alloc::vec![(n, -(n as i64), 1)]);
            let rep = tor_concentration_with_polynomials(&top_model(n), -6, 3).unwrap();
            assert!(rep.holds(), "top cohomology n {}", n);
            assert_eq!(rep.nonzero, alloc::vec![(0, -(n as i64), 1)]);
        }
    }

    #[test]
    fn shifted_polynomials_break_concentration() {
        let m = shift_model(polynomial_model(1), 2);
        let rep = tor_concentration_with_polynomials(&m, -6, 3).unwrap();
        assert!(!rep.holds());
        match rep.verdict {
            ConcentrationVerdict::Counterexample { degree, .. } => assert_eq!(degree, -3),
            _ => panic!("expected a counterexample"),
        }
    }

    #[test]
    fn euler_strand_transports_to_koszul_homology() {
        let n = 2usize;
        let e = top_model(n);
        let ops = derivative_ops(n);
        let l = -(n as i64);
        let piece = koszul_homology_piece(&e, &ops, 0, l).unwrap();
        assert_eq!(piece.sq.dim(), 1);
        let ambient: usize = piece.blocks.iter().map(|b| b.dim).sum();
        let mut t = QMatrix::zero(ambient, ambient);
        let mut off = 0;
        for b in &piece.blocks {
            let em = e.euler_matrix(b.inner_degree);
            for r in 0..b.dim {
                for c in 0..b.dim {
                    let mut v = em.at(r, c).clone();
                    if r == c {
                        v += rat(-b.generator_weight);
                    }
                    t.set(off + r, off + c, v);
                }
            }
            off += b.dim;
        }
        let induced = piece.sq.induced(|v| t.apply(v));
        let shifted = induced.sub(&QMatrix::identity(piece.sq.dim()).scale(&rat(l)));
        assert!(matches!(shifted.nilpotency(4), Nilpotency::Nilpotent { .. }));
    }

    #[test]
    fn certify_constructors() {
        assert_eq!(
            certify_r_structure(&polynomial_model(2)),
            RClass::Free { twist: 0, mult: 1 }
        );
        assert_eq!(
            certify_r_structure(&top_model(2)),
            RClass::Torsion { twist: 0, mult: 1 }
        );
        let shifted = shift_model(top_model(2), 3);
        assert_eq!(certify_r_structure(&shifted), RClass::Torsion { twist: 3, mult: 1 });
        let dual = matlis_dual(polynomial_model(2)).unwrap();
        assert_eq!(certify_r_structure(&dual), RClass::Torsion { twist: -2, mult: 1 });
        let dual_back = matlis_dual(dual).unwrap();
        assert_eq!(certify_r_structure(&dual_back), RClass::Free { twist: 0, mult: 1 });
        let pres_r = presentation_model(
            2,
            &[parse_element(2, "d1").unwrap(), parse_element(2, "d2").unwrap()],
            0,
        )
        .unwrap();
        assert_eq!(certify_r_structure(&pres_r), RClass::Free { twist: 0, mult: 1 });
        let pres_e = presentation_model(
            2,
            &[parse_element(2, "x1").unwrap(), parse_element(2, "x2").unwrap()],
            2,
        )
        .unwrap();
        assert_eq!(certify_r_structure(&pres_e), RClass::Torsion { twist: 0, mult: 1 });
        let odd = presentation_model(1, &[WeylElement::euler(1)], 0).unwrap();
        assert_eq!(certify_r_structure(&odd), RClass::Unknown);
        let both = crate::model::direct_sum(alloc::vec![top_model(2), top_model(2)]).unwrap();
        assert_eq!(certify_r_structure(&both), RClass::Torsion { twist: 0, mult: 2 });
    }

    #[test]
    fn certified_dimensions_match_models() {
        for n in 1..=2usize {
            let r = polynomial_model(n);
            let e = top_model(n);
            for l in -7..=4 {
                assert_eq!(r.dim(l), polynomial_piece_dim(n, l));
                assert_eq!(e.dim(l), top_local_cohomology_piece_dim(n, l));
                let d = matlis_dual(polynomial_model(n)).unwrap();
                assert_eq!(
                    d.dim(l),
                    top_local_cohomology_piece_dim(n, -(n as i64) + l),
                    "dual dims n {} l {}",
                    n,
                    l
                );
            }
        }
    }

    #[test]
    fn tor_over_polynomials_frozen_values() {
        let n = 1usize;
        let r = polynomial_model(n);
        let e = top_model(n);
        assert_eq!(tor_over_polynomials(&r, &r, 0, 2).unwrap(), polynomial_piece_dim(1, 2));
        assert_eq!(tor_over_polynomials(&r, &r, 1, 0).unwrap(), 0);
        assert_eq!(tor_over_polynomials(&r, &e, 0, -1).unwrap(), 1);
        assert_eq!(tor_over_polynomials(&e, &r, 0, -1).unwrap(), 1);
        assert_eq!(tor_over_polynomials(&e, &e, 1, -1).unwrap(), 1);
        assert_eq!(tor_over_polynomials(&e, &e, 0, -1).unwrap(), 0);
        let l = crate::model::laurent_model(1).unwrap();
        assert_eq!(
            tor_over_polynomials(&l, &r, 0, 0),
            Err(HomologyError::Unstructured)
        );
    }

    #[test]
    fn ext_over_polynomials_frozen_values() {
        let r = polynomial_model(2);
        let e = top_model(2);
        for l in -4..=4 {
            assert_eq!(
                ext_over_polynomials(&r, &r, 0, l).unwrap(),
                polynomial_piece_dim(2, l)
            );
            assert_eq!(
                ext_over_polynomials(&r, &e, 0, l).unwrap(),
                top_local_cohomology_piece_dim(2, l)
            );
            assert_eq!(
                ext_over_polynomials(&e, &r, 2, l).unwrap(),
                polynomial_piece_dim(2, l)
            );
            assert_eq!(
                ext_over_polynomials(&e, &e, 0, l).unwrap(),
                polynomial_piece_dim(2, l)
            );
            for nu in 1..=1 {
                assert_eq!(ext_over_polynomials(&r, &e, nu, l).unwrap(), 0);
                assert_eq!(ext_over_polynomials(&e, &r, nu, l).unwrap(), 0);
                assert_eq!(ext_over_polynomials(&e, &e, nu, l).unwrap(), 0);
            }
        }
    }

    #[test]
    fn duality_pairs_ext_with_tor() {
        for n in 1..=2usize {
            let models = alloc::vec![polynomial_model(n), top_model(n)];
            for a in &models {
                for b in &models {
                    let bd = matlis_dual(Rc::clone(b)).unwrap();
                    for nu in 0..=n {
                        for d in -5..=5 {
                            let lhs = ext_over_polynomials(a, &bd, nu, d).unwrap();
                            let rhs = tor_over_polynomials(a, b, nu, -d).unwrap();
                            assert_eq!(lhs, rhs, "n {} nu {} d {}", n, nu, d);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ext_fixture_polynomials_against_themselves() {
        let n = 1usize;
        let res = resolution_of_derivatives(n);
        let r = polynomial_model(n);
        for l in -4..=4 {
            let e0 = ext_dim_over_weyl(&res, &r, 0, l).unwrap();
            let e1 = ext_dim_over_weyl(&res, &r, 1, l).unwrap();
            assert_eq!(e0, if l == 0 { 1 } else { 0 }, "position 0 at {}", l);
            assert_eq!(e1, 0, "position 1 at {}", l);
        }
    }

    #[test]
    fn ext_fixture_polynomials_against_top_cohomology() {
        for n in 1..=2usize {
            let res = resolution_of_derivatives(n);
            let e = top_model(n);
            for nu in 0..=n {
                for l in -4..=4 {
                    let dim = ext_dim_over_weyl(&res, &e, nu, l).unwrap();
                    let expect = if nu == n && l == 0 { 1 } else { 0 };
                    assert_eq!(dim, expect, "n {} nu {} l {}", n, nu, l);
                }
            }
        }
    }

    #[test]
    fn ext_fixture_torsion_presentation_against_top_cohomology() {
        let n = 2usize;
        let res = resolution_of_variables(n);
        let e = top_model(n);
        for nu in 0..=n {
            for l in -4..=4 {
                let dim = ext_dim_over_weyl(&res, &e, nu, l).unwrap();
                let expect = if nu == 0 && l == 0 { 1 } else { 0 };
                assert_eq!(dim, expect, "nu {} l {}", nu, l);
            }
        }
    }

    #[test]
    fn truncated_resolutions_are_refused_beyond_their_reach() {
        let gens: Vec<WeylElement> =
            (1..=2).map(|i| parse_element(2, &alloc::format!("d{}", i)).unwrap()).collect();
        let gb = buchberger(2, &gens, BaseOrder::DegRevLex).unwrap();
        let res = free_resolution(&gb, 0, 1).unwrap();
        assert!(res.truncated);
        let r = polynomial_model(2);
        assert!(ext_dim_over_weyl(&res, &r, 0, 0).is_ok());
        assert_eq!(
            ext_dim_over_weyl(&res, &r, 1, 0),
            Err(HomologyError::TruncatedResolution)
        );
    }

    #[test]
    fn hom_complex_squares_to_zero() {
        let res = resolution_of_derivatives(2);
        let e = top_model(2);
        for l in -2..=2 {
            let d0 = hom_matrix(&res, &e, 0, l);
            let d1 = hom_matrix(&res, &e, 1, l);
            assert!(d1.mul(&d0).is_zero(), "degree {}", l);
        }
    }

    #[test]
    fn resolution_shift_identity_for_ext_against_coefficients() {
        for n in 1..=2usize {
            let res = resolution_of_derivatives(n);
            let catalog: Vec<Rc<GradedModel>> = alloc::vec![polynomial_model(n), top_model(n)];
            let ops = derivative_ops(n);
            for coeff in &catalog {
                for nu in 0..=n {
                    for l in -5..=3 {
                        let lhs = ext_dim_over_weyl(&res, coeff, nu, l).unwrap();
                        let rhs =
                            koszul_homology_dim(coeff, &ops, n - nu, l - n as i64).unwrap();
                        assert_eq!(lhs, rhs, "n {} nu {} l {}", n, nu, l);
                    }
                }
            }
        }
    }

    #[test]
    fn ext_transported_euler_is_nilpotent_on_homology() {
        let n = 2usize;
        let res = resolution_of_derivatives(n);
        let e = top_model(n);
        let l = 0i64;
        let piece = ext_piece_over_weyl(&res, &e, n, l).unwrap();
        assert_eq!(piece.sq.dim(), 1);
        let ambient: usize = piece.blocks.iter().map(|b| b.dim).sum();
        let mut t = QMatrix::zero(ambient, ambient);
        let mut off = 0;
        for b in &piece.blocks {
            let em = e.euler_matrix(b.inner_degree);
            for r in 0..b.dim {
                for c in 0..b.dim {
                    let mut v = em.at(r, c).clone();
                    if r == c {
                        v += rat(b.shift);
                    }
                    t.set(off + r, off + c, v);
                }
            }
            off += b.dim;
        }
        let induced = piece.sq.induced(|v| t.apply(v));
        let shifted = induced.sub(&QMatrix::identity(piece.sq.dim()).scale(&rat(l)));
        assert!(matches!(shifted.nilpotency(4), Nilpotency::Nilpotent { .. }));
    }
}
