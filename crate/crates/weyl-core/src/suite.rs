//! Named verification suites bundling the seeded checks run by the command
//! line and the acceptance harness.

use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::catalog::{accepted_cech_models, coordinate_presentations, top_cech_model};
use crate::groebner::{
    buchberger, eulerian_index, free_resolution, is_member, membership_certificate,
    FreeResolution,
};
use crate::homology::{
    certify_r_structure, derivative_ops, ext_concentration_over_weyl, ext_dim_over_weyl,
    ext_over_polynomials, koszul_homology_dim, polynomial_piece_dim,
    top_local_cohomology_piece_dim, tor_concentration_with_polynomials,
    tor_dim_with_polynomials, tor_over_polynomials, ConcentrationVerdict, RClass,
};
use crate::model::{
    cech_local_cohomology_model, matlis_dual, polynomial_model, presentation_model,
    shift_model, GradedModel,
};
use crate::order::BaseOrder;
use crate::weyl::{rat, Mono, Rat, WeylElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail).count()
    }
}

fn check(name: &str, ok: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name: String::from(name),
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail,
    }
}

pub fn suite_names() -> &'static [&'static str] {
    &["identities", "eulerian", "tor-concentration", "ext-concentration", "duality"]
}

pub fn run_suite(name: &str) -> Option<SuiteReport> {
    match name {
        "identities" => Some(run_identities()),
        "eulerian" => Some(run_eulerian()),
        "tor-concentration" => Some(run_tor_concentration()),
        "ext-concentration" => Some(run_ext_concentration()),
        "duality" => Some(run_duality()),
        _ => None,
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick(r: &mut ChaCha8Rng, m: u32) -> u32 {
    r.next_u32() % m
}

fn random_mono(r: &mut ChaCha8Rng, n: usize, max_exp: u32) -> Mono {
    let x = (0..n).map(|_| pick(r, max_exp + 1)).collect();
    let d = (0..n).map(|_| pick(r, max_exp + 1)).collect();
    Mono { x, d }
}

fn random_element(r: &mut ChaCha8Rng, n: usize, max_exp: u32, terms: usize) -> WeylElement {
    let mut out = WeylElement::zero(n);
    for _ in 0..terms {
        let c = rat(pick(r, 5) as i64 - 2);
        out = out.add(&WeylElement::from_term(n, random_mono(r, n, max_exp), c));
    }
    out
}

/// Random homogeneous element of the given weight whose monomials have
/// exponent degree at most `max_exp`; the weight must satisfy |w| <= max_exp.
fn random_homogeneous(
    r: &mut ChaCha8Rng,
    n: usize,
    weight: i64,
    max_exp: u32,
    terms: usize,
) -> WeylElement {
    let mut out = WeylElement::zero(n);
    let mut placed = 0;
    let mut attempts = 0;
    while placed < terms {
        attempts += 1;
        assert!(attempts < 100_000, "homogeneous sampling exhausted");
        let m = random_mono(r, n, max_exp);
        if m.weight() != weight || m.exp_degree() > max_exp as u64 {
            continue;
        }
        let c = rat([1, -1, 2, -2, 3][pick(r, 5) as usize]);
        out = out.add(&WeylElement::from_term(n, m, c));
        placed += 1;
    }
    if out.is_zero() {
        out = out.add(&random_homogeneous(r, n, weight, max_exp, 1));
    }
    out
}

pub fn run_identities() -> SuiteReport {
    let mut checks = Vec::new();

    let mut ok = true;
    let mut detail = String::from("commutators over ambients 1..=3");
    for n in 1..=3usize {
        for i in 0..n {
            for j in 0..n {
                let x = WeylElement::var_x(n, j);
                let d = WeylElement::var_d(n, i);
                let lhs = d.mul(&x).sub(&x.mul(&d));
                let expect = if i == j {
                    WeylElement::one(n)
                } else {
                    WeylElement::zero(n)
                };
                if lhs != expect {
                    ok = false;
                    detail = format!("commutator failed at n={} i={} j={}", n, i + 1, j + 1);
                }
            }
        }
    }
    checks.push(check("defining-relations", ok, detail));

    let mut ok = true;
    let mut detail = String::from("powers t<=4 against offsets |e|<=5");
    for n in 1..=2usize {
        let e = WeylElement::euler(n);
        for i in 0..n {
            for t in 1..=4u32 {
                for off in -5..=5i64 {
                    let shifted = e.sub(&WeylElement::scalar(n, rat(off)));
                    let xp = WeylElement::var_x(n, i).power(t);
                    let lhs = shifted.mul(&xp);
                    let rhs = xp.mul(&e.sub(&WeylElement::scalar(n, rat(off - t as i64))));
                    if lhs != rhs {
                        ok = false;
                        detail = format!("variable side n={} i={} t={} e={}", n, i + 1, t, off);
                    }
                    let dp = WeylElement::var_d(n, i).power(t);
                    let lhs = shifted.mul(&dp);
                    let rhs = dp.mul(&e.sub(&WeylElement::scalar(n, rat(off + t as i64))));
                    if lhs != rhs {
                        ok = false;
                        detail = format!("derivative side n={} i={} t={} e={}", n, i + 1, t, off);
                    }
                }
            }
        }
    }
    checks.push(check("euler-power-commutation", ok, detail));

    let mut ok = true;
    let mut detail = String::from("25 seeded homogeneous elements per ambient");
    let mut r = rng(0x1DE);
    for n in 1..=2usize {
        let e = WeylElement::euler(n);
        let wmax = 3i64;
        for _ in 0..25 {
            let w = pick(&mut r, 2 * wmax as u32 + 1) as i64 - wmax;
            let terms = 1 + pick(&mut r, 2) as usize;
            let h = random_homogeneous(&mut r, n, w, 3, terms);
            let lhs = e.mul(&h);
            let rhs = h.mul(&e.add(&WeylElement::scalar(n, rat(w))));
            if lhs != rhs {
                ok = false;
                detail = format!("transport failed at n={} weight={}", n, w);
            }
        }
    }
    checks.push(check("euler-transport-homogeneous", ok, detail));

    let mut ok = true;
    let mut detail = String::from("25 seeded pairs per ambient, plus the euler images");
    let mut r = rng(0x7A0);
    for n in 1..=2usize {
        for _ in 0..25 {
            let a = random_element(&mut r, n, 2, 3);
            let b = random_element(&mut r, n, 2, 3);
            if a.mul(&b).transpose() != b.transpose().mul(&a.transpose()) {
                ok = false;
                detail = format!("antiautomorphism failed at n={}", n);
            }
            if a.transpose().transpose() != a {
                ok = false;
                detail = format!("involution failed at n={}", n);
            }
        }
    }
    for n in 1..=3usize {
        let e = WeylElement::euler(n);
        let expect = e.neg().sub(&WeylElement::scalar(n, rat(n as i64)));
        if e.transpose() != expect {
            ok = false;
            detail = format!("euler transpose failed at n={}", n);
        }
    }
    checks.push(check("transpose-antiautomorphism", ok, detail));

    let mut ok = true;
    let mut detail = String::from("15 seeded triples per ambient");
    let mut r = rng(0xA550C);
    for n in 1..=2usize {
        for _ in 0..15 {
            let a = random_element(&mut r, n, 2, 2);
            let b = random_element(&mut r, n, 2, 2);
            let c = random_element(&mut r, n, 2, 2);
            if a.mul(&b).mul(&c) != a.mul(&b.mul(&c)) {
                ok = false;
                detail = format!("associativity failed at n={}", n);
            }
        }
    }
    checks.push(check("associativity", ok, detail));

    let mut ok = true;
    let mut detail = String::from("products of seeded homogeneous pairs stay graded");
    let mut r = rng(0x96AD);
    for n in 1..=2usize {
        for _ in 0..20 {
            let wa = pick(&mut r, 7) as i64 - 3;
            let wb = pick(&mut r, 7) as i64 - 3;
            let a = random_homogeneous(&mut r, n, wa, 3, 2);
            let b = random_homogeneous(&mut r, n, wb, 3, 2);
            let p = a.mul(&b);
            if !p.is_homogeneous_of(wa + wb) {
                ok = false;
                detail = format!("grading broke at n={} weights {} {}", n, wa, wb);
            }
        }
    }
    checks.push(check("product-grading", ok, detail));

    SuiteReport { suite: "identities", checks }
}

fn gb_of(n: usize, gens: &[WeylElement]) -> crate::groebner::GroebnerBasis {
    buchberger(n, gens, BaseOrder::DegRevLex).expect("homogeneous generators")
}

pub fn run_eulerian() -> SuiteReport {
    let mut checks = Vec::new();

    let mut ok = true;
    let mut detail = String::from("uniform nilpotency order 1 on [-14,14]");
    for n in 1..=3usize {
        let rep = polynomial_model(n).check_generalized_eulerian(-14, 14, 1).unwrap();
        if rep.uniform_bound != Some(1) {
            ok = false;
            detail = format!("polynomials failed at n={}", n);
        }
    }
    checks.push(check("polynomials-strictly-eulerian", ok, detail));

    let mut ok = true;
    let mut detail = String::from("shifts -2,-1,1,2 fail conclusively");
    for n in 1..=2usize {
        for s in [-2i64, -1, 1, 2] {
            let rep = shift_model(polynomial_model(n), s)
                .check_generalized_eulerian(-10, 10, 2)
                .unwrap();
            let conclusive = rep.first_failure().map(|(_, c)| c).unwrap_or(false);
            if rep.holds() || !conclusive {
                ok = false;
                detail = format!("shift {} at n={} was not refuted", s, n);
            }
        }
    }
    checks.push(check("shifted-polynomials-fail", ok, detail));

    let mut ok = true;
    let mut count = 0usize;
    let mut detail = String::new();
    for n in 1..=3usize {
        for (gens, index, model) in accepted_cech_models(n) {
            let rep = model.check_generalized_eulerian(-10, 6, 1).unwrap();
            count += 1;
            if !rep.holds() || rep.uniform_bound > Some(1) {
                ok = false;
                detail = format!(
                    "local cohomology model failed: n={} gens={:?} index={}",
                    n,
                    gens.iter().map(|g| format!("{}", g)).collect::<Vec<_>>(),
                    index
                );
            }
        }
    }
    if ok {
        detail = format!("{} accepted models eulerian with order at most 1", count);
    }
    checks.push(check("catalog-local-cohomology-eulerian", ok, detail));

    let mut ok = true;
    let mut detail = String::from("index bound 4, window [-8,8]");
    let mut cases: Vec<(usize, Vec<WeylElement>, Option<u32>)> = Vec::new();
    for n in 1..=3usize {
        cases.push((n, (0..n).map(|i| WeylElement::var_d(n, i)).collect(), Some(1)));
        cases.push((n, (0..n).map(|i| WeylElement::var_x(n, i)).collect(), None));
    }
    let e1 = WeylElement::euler(1);
    cases.push((1, alloc::vec![e1.clone()], Some(1)));
    cases.push((1, alloc::vec![e1.mul(&e1)], Some(2)));
    cases.push((1, alloc::vec![WeylElement::var_d(1, 0).power(2)], None));
    cases.push((1, alloc::vec![WeylElement::var_x(1, 0).power(2)], None));
    for (n, gens, expect) in cases {
        let gb = gb_of(n, &gens);
        let got = eulerian_index(&gb, 4);
        if got != expect {
            ok = false;
            detail = format!("index mismatch at n={}: got {:?}, expected {:?}", n, got, expect);
            continue;
        }
        let model = presentation_model(n, &gens, 0).unwrap();
        let rep = model.check_generalized_eulerian(-8, 8, 4).unwrap();
        let agree = match expect {
            Some(a) => rep.uniform_bound == Some(a),
            None => {
                !rep.holds() && rep.first_failure().map(|(_, c)| c).unwrap_or(false)
            }
        };
        if !agree {
            ok = false;
            detail = format!(
                "module check disagrees with the index at n={} (index {:?}, bound {:?})",
                n, expect, rep.uniform_bound
            );
        }
    }
    checks.push(check("euler-index-agreement", ok, detail));

    SuiteReport { suite: "eulerian", checks }
}

fn tor_models(n: usize) -> Vec<(String, Rc<GradedModel>)> {
    let mut out: Vec<(String, Rc<GradedModel>)> = Vec::new();
    out.push((String::from("polynomials"), polynomial_model(n)));
    for (gens, index, model) in accepted_cech_models(n) {
        let label = format!(
            "localcoh gens={} index={}",
            gens.iter().map(|g| format!("{}", g)).collect::<Vec<_>>().join(","),
            index
        );
        out.push((label, model));
    }
    for e in coordinate_presentations(n) {
        if let Ok(model) = e.model {
            out.push((format!("presentation S={:?}", e.variable_set), model));
        }
    }
    out
}

pub fn run_tor_concentration() -> SuiteReport {
    let mut checks = Vec::new();

    let mut ok = true;
    let mut count = 0usize;
    let mut detail = String::new();
    for n in 1..=2usize {
        for (label, model) in tor_models(n) {
            let rep = tor_concentration_with_polynomials(&model, -12, 6).unwrap();
            count += 1;
            if !rep.holds() {
                ok = false;
                detail = format!("concentration failed for n={} {}", n, label);
            }
        }
    }
    if ok {
        detail = format!("{} models concentrated at minus the ambient dimension", count);
    }
    checks.push(check("catalog-tor-concentrated", ok, detail));

    let mut ok = true;
    let mut detail =
        String::from("one variable: position 0 lives in degree -1, position 1 vanishes");
    let e = top_cech_model(1);
    for l in -12..=6i64 {
        let t0 = tor_dim_with_polynomials(&e, 0, l).unwrap();
        let t1 = tor_dim_with_polynomials(&e, 1, l).unwrap();
        if t0 != usize::from(l == -1) || t1 != 0 {
            ok = false;
            detail = format!("fixture dims wrong at degree {}: {} {}", l, t0, t1);
        }
    }
    for n in 1..=2usize {
        let rep = tor_concentration_with_polynomials(&polynomial_model(n), -12, 6).unwrap();
        if rep.nonzero != alloc::vec![(n, -(n as i64), 1)] {
            ok = false;
            detail = format!("polynomial sanity wrong at n={}", n);
        }
    }
    checks.push(check("fixture-dimensions", ok, detail));

    let mut ok = true;
    let mut detail = String::from("a shifted module is caught as a counterexample");
    let rep =
        tor_concentration_with_polynomials(&shift_model(polynomial_model(1), 2), -12, 6).unwrap();
    if rep.holds() || !matches!(rep.verdict, ConcentrationVerdict::Counterexample { .. }) {
        ok = false;
        detail = String::from("shifted polynomials were not refuted");
    }
    checks.push(check("shifted-counterexample-detected", ok, detail));

    SuiteReport { suite: "tor-concentration", checks }
}

fn derivative_resolution(n: usize) -> FreeResolution {
    let gens: Vec<WeylElement> = (0..n).map(|i| WeylElement::var_d(n, i)).collect();
    free_resolution(&gb_of(n, &gens), 0, 2 * n + 1).unwrap()
}

fn variable_resolution(n: usize) -> FreeResolution {
    let gens: Vec<WeylElement> = (0..n).map(|i| WeylElement::var_x(n, i)).collect();
    free_resolution(&gb_of(n, &gens), n as i64, 2 * n + 1).unwrap()
}

pub fn run_ext_concentration() -> SuiteReport {
    let mut checks = Vec::new();

    let mut ok = true;
    let mut count = 0usize;
    let mut detail = String::new();
    for n in 1..=2usize {
        let resolutions = [
            ("derivative ideal", derivative_resolution(n)),
            ("variable ideal", variable_resolution(n)),
        ];
        let coeffs = [
            ("polynomials", polynomial_model(n)),
            ("top local cohomology", top_cech_model(n)),
        ];
        for (rlabel, res) in &resolutions {
            for (clabel, coeff) in &coeffs {
                let rep = ext_concentration_over_weyl(res, coeff, -10, 10).unwrap();
                count += 1;
                if !rep.holds() {
                    ok = false;
                    detail = format!("n={} {} against {} not concentrated", n, rlabel, clabel);
                }
            }
        }
    }
    if ok {
        detail = format!("{} resolution and coefficient pairs concentrated in degree 0", count);
    }
    checks.push(check("catalog-ext-concentrated", ok, detail));

    let mut ok = true;
    let mut detail = String::from("one variable: position 0 lives in degree 0, position 1 vanishes");
    let res = derivative_resolution(1);
    let r = polynomial_model(1);
    for l in -10..=10i64 {
        let e0 = ext_dim_over_weyl(&res, &r, 0, l).unwrap();
        let e1 = ext_dim_over_weyl(&res, &r, 1, l).unwrap();
        if e0 != usize::from(l == 0) || e1 != 0 {
            ok = false;
            detail = format!("fixture dims wrong at degree {}: {} {}", l, e0, e1);
        }
    }
    checks.push(check("fixture-dimensions", ok, detail));

    let mut ok = true;
    let mut detail = String::from("a shifted coefficient module is caught as a counterexample");
    let rep = ext_concentration_over_weyl(
        &derivative_resolution(1),
        &shift_model(polynomial_model(1), 1),
        -10,
        10,
    )
    .unwrap();
    if rep.holds() || !matches!(rep.verdict, ConcentrationVerdict::Counterexample { .. }) {
        ok = false;
        detail = String::from("shifted coefficients were not refuted");
    }
    checks.push(check("shifted-coefficient-counterexample", ok, detail));

    SuiteReport { suite: "ext-concentration", checks }
}

/// Comparison of Ext from a resolution of the polynomial quotient with the
/// Koszul cohomology of the coefficients, shifted by the ambient dimension.
pub fn run_koszul_comparison() -> SuiteReport {
    let mut checks = Vec::new();
    for n in 1..=2usize {
        let res = derivative_resolution(n);
        let ops = derivative_ops(n);
        let mut coeffs: Vec<(String, Rc<GradedModel>)> =
            alloc::vec![(String::from("polynomials"), polynomial_model(n))];
        for (gens, index, model) in accepted_cech_models(n) {
            let label = format!(
                "localcoh gens={} index={}",
                gens.iter().map(|g| format!("{}", g)).collect::<Vec<_>>().join(","),
                index
            );
            coeffs.push((label, model));
        }
        for (label, coeff) in coeffs {
            let mut ok = true;
            let mut detail = format!("positions 0..={} on degrees [-8,4]", n);
            for nu in 0..=n {
                for l in -8..=4i64 {
                    let lhs = ext_dim_over_weyl(&res, &coeff, nu, l).unwrap();
                    let rhs =
                        koszul_homology_dim(&coeff, &ops, n - nu, l - n as i64).unwrap();
                    if lhs != rhs {
                        ok = false;
                        detail =
                            format!("mismatch at position {} degree {}: {} vs {}", nu, l, lhs, rhs);
                    }
                }
            }
            checks.push(check(&format!("resolution-shift-n{}-{}", n, label), ok, detail));
        }
    }
    SuiteReport { suite: "koszul-comparison", checks }
}

pub fn run_duality() -> SuiteReport {
    let mut checks = Vec::new();

    let mut ok = true;
    let mut detail = String::from("dual classes and dimensions over [-8,4]");
    for n in 1..=2usize {
        let ni = n as i64;
        let dr = matlis_dual(polynomial_model(n)).unwrap();
        let de = matlis_dual(top_cech_model(n)).unwrap();
        if certify_r_structure(&dr) != (RClass::Torsion { twist: -ni, mult: 1 }) {
            ok = false;
            detail = format!("dual of the polynomials misclassified at n={}", n);
        }
        if certify_r_structure(&de) != (RClass::Free { twist: -ni, mult: 1 }) {
            ok = false;
            detail = format!("dual of the top local cohomology misclassified at n={}", n);
        }
        for l in -8..=4i64 {
            if dr.dim(l) != top_local_cohomology_piece_dim(n, l - ni)
                || de.dim(l) != polynomial_piece_dim(n, l - ni)
            {
                ok = false;
                detail = format!("dual dimensions wrong at n={} degree {}", n, l);
            }
        }
        let back = matlis_dual(dr).unwrap();
        if certify_r_structure(&back) != (RClass::Free { twist: 0, mult: 1 }) {
            ok = false;
            detail = format!("double dual misclassified at n={}", n);
        }
        for l in -8..=4i64 {
            if back.dim(l) != polynomial_piece_dim(n, l) {
                ok = false;
                detail = format!("double dual dimensions wrong at n={} degree {}", n, l);
            }
        }
    }
    checks.push(check("matlis-dual-classes", ok, detail));

    let mut ok = true;
    let mut detail = String::from("pairing over positions 0..=n and degrees [-6,6]");
    for n in 1..=2usize {
        let models = [polynomial_model(n), top_cech_model(n)];
        for m in &models {
            for nmod in &models {
                let nd = matlis_dual(Rc::clone(nmod)).unwrap();
                for nu in 0..=n {
                    for d in -6..=6i64 {
                        let lhs = ext_over_polynomials(m, &nd, nu, d).unwrap();
                        let rhs = tor_over_polynomials(m, nmod, nu, -d).unwrap();
                        if lhs != rhs {
                            ok = false;
                            detail = format!(
                                "pairing mismatch at n={} position {} degree {}",
                                n, nu, d
                            );
                        }
                    }
                }
            }
        }
    }
    checks.push(check("ext-tor-pairing", ok, detail));

    SuiteReport { suite: "duality", checks }
}

/// Presentations against their local cohomology counterparts: identical
/// graded dimensions and identical characteristic polynomials of the euler
/// action, with mixed coordinate choices rejected on both sides.
pub fn run_model_consistency() -> SuiteReport {
    let mut checks = Vec::new();
    for n in 1..=3usize {
        let entries = coordinate_presentations(n);

        let mut ok = true;
        let mut detail = String::from("quotient by the derivatives matches the polynomials");
        let free = entries.iter().find(|e| e.variable_set.is_empty()).unwrap();
        let poly = polynomial_model(n);
        match &free.model {
            Ok(model) => {
                for d in -12..=6i64 {
                    if model.dim(d) != poly.dim(d)
                        || model.euler_matrix(d).char_poly() != poly.euler_matrix(d).char_poly()
                    {
                        ok = false;
                        detail = format!("mismatch at degree {}", d);
                    }
                }
            }
            Err(e) => {
                ok = false;
                detail = format!("constructor refused the derivative ideal: {}", e);
            }
        }
        checks.push(check(&format!("free-side-n{}", n), ok, detail));

        let mut ok = true;
        let mut detail =
            String::from("shifted quotient by the variables matches the top local cohomology");
        let torsion = entries.iter().find(|e| e.variable_set.len() == n).unwrap();
        let top = top_cech_model(n);
        match &torsion.model {
            Ok(model) => {
                for d in -12..=6i64 {
                    if model.dim(d) != top.dim(d)
                        || model.euler_matrix(d).char_poly() != top.euler_matrix(d).char_poly()
                    {
                        ok = false;
                        detail = format!("mismatch at degree {}", d);
                    }
                }
            }
            Err(e) => {
                ok = false;
                detail = format!("constructor refused the variable ideal: {}", e);
            }
        }
        checks.push(check(&format!("torsion-side-n{}", n), ok, detail));

        if n >= 2 {
            let mut ok = true;
            let mut detail = String::from("mixed coordinate choices rejected on both sides");
            for e in entries.iter().filter(|e| {
                !e.variable_set.is_empty() && e.variable_set.len() < n
            }) {
                if e.model.is_ok() {
                    ok = false;
                    detail = format!("presentation accepted mixed S={:?}", e.variable_set);
                }
                let gens: Vec<Mono> = e
                    .variable_set
                    .iter()
                    .map(|&i| {
                        let mut x = alloc::vec![0u32; n];
                        x[i] = 1;
                        Mono { x, d: alloc::vec![0; n] }
                    })
                    .collect();
                if cech_local_cohomology_model(n, &gens, e.variable_set.len()).is_ok() {
                    ok = false;
                    detail = format!("local cohomology accepted mixed S={:?}", e.variable_set);
                }
            }
            checks.push(check(&format!("mixed-rejected-n{}", n), ok, detail));
        }
    }
    SuiteReport { suite: "model-consistency", checks }
}

fn enumerate_exps(slots: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == slots {
        out.push(cur.clone());
        return;
    }
    for v in 0..=budget {
        cur.push(v);
        enumerate_exps(slots, budget - v, cur, out);
        cur.pop();
    }
}

fn monos_with_weight(n: usize, weight: i64, max_exp: u32) -> Vec<Mono> {
    let mut raw = Vec::new();
    enumerate_exps(2 * n, max_exp, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|e| Mono { x: e[..n].to_vec(), d: e[n..].to_vec() })
        .filter(|m| m.weight() == weight)
        .collect()
}

/// Independent membership oracle: decide solvability of f = sum u_j g_j by
/// linear algebra over multiplier monomials of exponent degree at most the
/// bound, using only the product operation.
fn solvable_with_bound(f: &WeylElement, gens: &[WeylElement], bound: u32) -> bool {
    use alloc::collections::BTreeMap;
    let n = f.n();
    let t = match f.degree() {
        Some(crate::weyl::Degree::Homogeneous(t)) => t,
        _ => return false,
    };
    let mut columns: Vec<WeylElement> = Vec::new();
    for g in gens {
        let gd = match g.degree() {
            Some(crate::weyl::Degree::Homogeneous(d)) => d,
            _ => continue,
        };
        for u in monos_with_weight(n, t - gd, bound) {
            let prod = WeylElement::from_term(n, u, Rat::one()).mul(g);
            if !prod.is_zero() {
                columns.push(prod);
            }
        }
    }
    let mut index: BTreeMap<Mono, usize> = BTreeMap::new();
    for el in columns.iter().chain(core::iter::once(f)) {
        for (m, _) in el.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    let rows = index.len();
    let mut mat = crate::matrix::QMatrix::zero(rows, columns.len());
    for (c, el) in columns.iter().enumerate() {
        for (m, coef) in el.terms() {
            mat.set(index[m], c, coef.clone());
        }
    }
    let mut b = alloc::vec![Rat::zero(); rows];
    for (m, coef) in f.terms() {
        b[index[m]] = coef.clone();
    }
    mat.solve(&b).is_some()
}

/// Seeded ideal membership instances decided twice: by normal forms against
/// a Groebner basis and by the bounded linear oracle.
pub fn run_membership() -> SuiteReport {
    let mut checks = Vec::new();
    let mut r = rng(0xB1B2_B3B4);
    let mut members = 0usize;
    let mut non_members = 0usize;
    let mut ok = true;
    let mut detail = String::new();
    let total = 100usize;
    for k in 0..total {
        let n = 1 + (k % 2);
        let gcount = 1 + pick(&mut r, 2) as usize;
        let gens: Vec<WeylElement> = (0..gcount)
            .map(|_| {
                let w = pick(&mut r, 5) as i64 - 2;
                let terms = 1 + pick(&mut r, 2) as usize;
                random_homogeneous(&mut r, n, w, 3, terms)
            })
            .collect();
        let gb = gb_of(n, &gens);
        let target = gens
            .iter()
            .filter_map(|g| match g.degree() {
                Some(crate::weyl::Degree::Homogeneous(d)) => Some(d),
                _ => None,
            })
            .max()
            .unwrap_or(0)
            + pick(&mut r, 2) as i64;
        let f = if k % 2 == 0 {
            let mut acc = WeylElement::zero(n);
            for g in &gens {
                let gd = match g.degree() {
                    Some(crate::weyl::Degree::Homogeneous(d)) => d,
                    _ => continue,
                };
                let terms = 1 + pick(&mut r, 2) as usize;
                let cap = 2u32.max((target - gd).unsigned_abs() as u32);
                let u = random_homogeneous(&mut r, n, target - gd, cap, terms);
                acc = acc.add(&u.mul(g));
            }
            acc
        } else {
            let terms = 1 + pick(&mut r, 3) as usize;
            random_homogeneous(&mut r, n, target, 3, terms)
        };
        if f.is_zero() {
            continue;
        }
        if is_member(&f, &gb) {
            members += 1;
            let cert = membership_certificate(&f, &gb).expect("member has a certificate");
            let bound = cert.iter().map(|w| w.max_exp_degree()).max().unwrap_or(0) as u32;
            let mut recon = WeylElement::zero(n);
            for (w, g) in cert.iter().zip(&gens) {
                recon = recon.add(&w.mul(g));
            }
            if recon != f {
                ok = false;
                detail = format!("certificate does not reconstruct instance {}", k);
            }
            if !solvable_with_bound(&f, &gens, bound.max(1)) {
                ok = false;
                detail = format!("oracle missed a member at instance {}", k);
            }
        } else {
            non_members += 1;
            if solvable_with_bound(&f, &gens, 4) {
                ok = false;
                detail = format!("oracle solved a non-member at instance {}", k);
            }
        }
    }
    if ok {
        detail = format!("{} members and {} non-members agree", members, non_members);
    }
    checks.push(check("seeded-instances", ok, detail));
    checks.push(check(
        "instance-mix",
        members >= 20 && non_members >= 20,
        format!("{} members, {} non-members of {}", members, non_members, total),
    ));
    SuiteReport { suite: "membership", checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_clean(report: &SuiteReport) {
        for c in &report.checks {
            assert_eq!(
                c.status,
                CheckStatus::Pass,
                "{} / {}: {}",
                report.suite,
                c.name,
                c.detail
            );
        }
        assert!(report.passed());
    }

    #[test]
    fn identities_suite_is_clean() {
        assert_clean(&run_identities());
    }

    #[test]
    fn eulerian_suite_is_clean() {
        assert_clean(&run_eulerian());
    }

    #[test]
    fn tor_suite_is_clean() {
        assert_clean(&run_tor_concentration());
    }

    #[test]
    fn ext_suite_is_clean() {
        assert_clean(&run_ext_concentration());
    }

    #[test]
    fn koszul_comparison_suite_is_clean() {
        assert_clean(&run_koszul_comparison());
    }

    #[test]
    fn duality_suite_is_clean() {
        assert_clean(&run_duality());
    }

    #[test]
    fn model_consistency_suite_is_clean() {
        assert_clean(&run_model_consistency());
    }

    #[test]
    fn membership_suite_is_clean() {
        assert_clean(&run_membership());
    }

    #[test]
    fn suites_are_reachable_by_name() {
        for name in suite_names() {
            assert!(run_suite(name).is_some());
        }
        assert!(run_suite("unknown").is_none());
    }
}
