//! The acceptance suite as a library routine, so the CLI can run it.
//!
//! Each criterion is an exact randomized check over small ranks and the
//! fields Q, GF(2), GF(3), GF(5). A criterion passes only with zero failures.

use std::time::Instant;

use crate::decomp::{
    decompose_b, decompose_chein_monomial, decompose_d, decompose_exponential, decompose_one_row, reduce_a,
    HypothesisContext, LetterKind, Mode,
};
use crate::endo::{a_map, b_map, chein, chein_c, d_map, elementary, exponential, Endomorphism};
use crate::error::Error;
use crate::field::Field;
use crate::magnus::{lift_column, to_basis, JacobianColumn, LieExpr, MagnusElement};
use crate::poly::{Monomial, Poly};
use crate::random::Sampler;

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    pub millis: u128,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub const TITLES: [&str; 10] = [
    "algebra laws in Magnus coordinates",
    "Fox columns: Y*a = 0 and lifting",
    "right-normed basis round trip and the Jacobi rewrite",
    "chain rule for Jacobians",
    "inversion and the Jacobian unit test",
    "one-row monomial maps are tame",
    "exponential maps: tame and almost tame",
    "D(a): tame and almost tame",
    "A(h,g) and B(h,f,g) are almost tame",
    "one-row maps modulo merged cubic residues",
];

struct Run {
    checks: usize,
    failures: Vec<String>,
}

impl Run {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }
}

pub fn run_criterion(id: u8, seed: u64) -> CriterionReport {
    assert!((1..=10).contains(&id), "criteria are numbered 1..=10");
    let start = Instant::now();
    let mut run = Run { checks: 0, failures: Vec::new() };
    let seed = seed.wrapping_mul(1000).wrapping_add(u64::from(id));
    match id {
        1 => algebra_laws(&mut run, seed),
        2 => fox_columns(&mut run, seed),
        3 => basis(&mut run, seed),
        4 => chain_rule(&mut run, seed),
        5 => inversion(&mut run, seed),
        6 => chein_monomials(&mut run),
        7 => exponentials(&mut run, seed),
        8 => d_maps(&mut run, seed),
        9 => a_and_b(&mut run, seed),
        _ => residues(&mut run, seed),
    }
    CriterionReport {
        id,
        title: TITLES[usize::from(id) - 1],
        checks: run.checks,
        failures: run.failures,
        millis: start.elapsed().as_millis(),
    }
}

pub fn run_all(seed: u64) -> Vec<CriterionReport> {
    (1..=10).map(|id| run_criterion(id, seed)).collect()
}

fn fields() -> [Field; 4] {
    [Field::Rationals, Field::Prime(2), Field::Prime(3), Field::Prime(5)]
}

/// Cycles through ranks 4..=6 and the four fields.
fn setting(k: usize) -> (usize, Field) {
    (4 + k % 3, fields()[k % 4])
}

fn algebra_laws(run: &mut Run, seed: u64) {
    for k in 0..500 {
        let (n, field) = setting(k);
        let mut s = Sampler::new(seed + k as u64, n, field);
        let (u, v, w) = (s.element(3, 2), s.element(3, 2), s.element(3, 2));
        let br = |a: &MagnusElement, b: &MagnusElement| a.bracket(b).expect("same ring");
        run.check((&br(&u, &v) + &br(&v, &u)).is_zero(), || format!("anticommutativity, instance {k}"));
        let jacobi = &(&br(&br(&u, &v), &w) + &br(&br(&v, &w), &u)) + &br(&br(&w, &u), &v);
        run.check(jacobi.is_zero(), || format!("Jacobi, instance {k}"));
        let (m1, m2) = (s.derived(2, 4, 2), s.derived(2, 4, 2));
        run.check(br(&m1, &m2).is_zero(), || format!("metabelian identity, instance {k}"));
    }
}

fn fox_columns(run: &mut Run, seed: u64) {
    for k in 0..200 {
        let (n, field) = setting(k);
        let mut s = Sampler::new(seed + k as u64, n, field);
        let f = s.derived(2, 5, 3);
        let col = f.fox_derivatives();
        run.check(col.y_pairing().is_zero(), || format!("Y*a != 0 for a derivative, instance {k}"));
        run.check(lift_column(&col).ok() == Some(f.clone()), || format!("lift(fox(f)) != f, instance {k}"));
    }
    for k in 0..50 {
        let (n, field) = setting(k);
        let mut s = Sampler::new(seed + 1000 + k as u64, n, field);
        let col = loop {
            let c = JacobianColumn::new((0..n).map(|_| s.poly(0, 3, 2)).collect()).expect("same ring");
            if !c.y_pairing().is_zero() {
                break c;
            }
        };
        run.check(matches!(lift_column(&col), Err(Error::NotADerivative(_))), || {
            format!("column with Y*a != 0 accepted, instance {k}")
        });
    }
}

/// `[x_a, x_b] * p` as an expression tree.
fn bracket_times(a: usize, b: usize, p: Poly) -> LieExpr {
    LieExpr::ModuleScale(Box::new(LieExpr::bracket(LieExpr::gen(a), LieExpr::gen(b))), p)
}

fn basis(run: &mut Run, seed: u64) {
    for k in 0..200 {
        let (n, field) = setting(k);
        let mut s = Sampler::new(seed + k as u64, n, field);
        let f = s.element(6, 3);
        run.check(to_basis(&f).evaluate() == f, || format!("basis round trip, instance {k}"));
    }
    for n in [4, 5] {
        let q = Field::Rationals;
        let y = |i: usize| Poly::var(n, q, i);
        for i1 in 1..=3 {
            for i_last in 1..=3 {
                let head = &y(0).pow(i1) * &y(n - 1).pow(i_last - 1);
                let lhs = bracket_times(1, 2, &head * &y(n - 1));
                let rhs = LieExpr::Sum(vec![
                    bracket_times(1, n - 1, &head * &y(2)),
                    bracket_times(n - 1, 2, &head * &y(1)),
                ]);
                let (l, r) = (lhs.eval(n, q).expect("valid"), rhs.eval(n, q).expect("valid"));
                run.check(to_basis(&l) == to_basis(&r), || format!("Jacobi rewrite, n = {n}, ({i1}, {i_last})"));
            }
        }
    }
}

fn chain_rule(run: &mut Run, seed: u64) {
    for k in 0..100 {
        let n = 4 + k % 2;
        let field = fields()[k % 4];
        let mut s = Sampler::new(seed + k as u64, n, field);
        let (phi, psi) = (s.endomorphism(3, 2), s.endomorphism(3, 2));
        let lhs = phi.compose(&psi).expect("same ring").jacobian();
        let rhs = psi.jacobian().substitute(&phi.substitution()).and_then(|m| phi.jacobian().mul(&m));
        run.check(rhs.ok() == Some(lhs), || format!("chain rule, instance {k}"));
    }
}

/// `x_i -> alpha x_i + f` with `f` free of `x_i`; `f` has a derived part
/// only when `nonlinear`.
fn random_elementary(s: &mut Sampler, nonlinear: bool) -> Endomorphism {
    let (n, field) = (s.n(), s.field());
    let i = s.index(n);
    let mut f = MagnusElement::zero(n, field);
    for j in (0..n).filter(|&j| j != i) {
        if s.coin(0.5) {
            f = &f + &MagnusElement::generator(n, field, j).scale(&s.scalar());
        }
    }
    if nonlinear {
        let a = s.index(n - 1);
        let b = s.index(n - 2);
        let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        let (a, b) = (others[a], others[(a + 1 + b) % (n - 1)]);
        let (_, free) = s.poly(0, 1, 2).split_by_variable(i);
        f = &f + &MagnusElement::commutator(n, field, a, b).module_scale(&free).expect("derived");
    }
    elementary(i, &s.nonzero_scalar(), &f).expect("valid elementary data")
}

fn inversion(run: &mut Run, seed: u64) {
    for k in 0..100 {
        let n = 4 + k % 2;
        let field = fields()[k % 4];
        let mut s = Sampler::new(seed + k as u64, n, field);
        let len = 1 + s.index(8);
        // at most three letters with a derived part keeps degrees small
        let mut nonlinear_left = 3;
        let mut phi = Endomorphism::identity(n, field);
        for _ in 0..len {
            let nonlinear = nonlinear_left > 0 && s.coin(0.6);
            nonlinear_left -= usize::from(nonlinear);
            phi = phi.compose(&random_elementary(&mut s, nonlinear)).expect("same ring");
        }
        let ok = phi.invert().is_ok_and(|inv| {
            phi.compose(&inv).is_ok_and(|e| e.is_identity()) && inv.compose(&phi).is_ok_and(|e| e.is_identity())
        });
        run.check(ok, || format!("inverse of a product of {len} elementary maps, instance {k}"));
    }
    for k in 0..20 {
        let n = 4 + k % 2;
        let field = fields()[k % 4];
        let mut s = Sampler::new(seed + 500 + k as u64, n, field);
        let i = s.index(n);
        let mut images: Vec<MagnusElement> = (0..n).map(|j| MagnusElement::generator(n, field, j)).collect();
        if k % 2 == 0 {
            // the i-th Fox derivative of the image picks up -y_j u
            let j = (i + 1 + s.index(n - 1)) % n;
            let d = s.index(2) as u32;
            let u = s.nonzero_homogeneous(d, 2);
            let bump = MagnusElement::commutator(n, field, j, i).module_scale(&u).expect("derived");
            images[i] = &images[i] + &bump;
        } else {
            // singular linear part
            let j = (i + 1) % n;
            images[i] = &MagnusElement::generator(n, field, j) + &s.derived(2, 3, 2);
        }
        let phi = Endomorphism::from_images(images).expect("consistent");
        run.check(!phi.is_automorphism() && phi.invert().is_err(), || format!("non-automorphism accepted, instance {k}"));
    }
}

/// All exponent vectors of length `n` with total degree in `lo..=hi`.
pub fn monomials(n: usize, lo: u32, hi: u32) -> Vec<Monomial> {
    fn rec(k: usize, left: u32, e: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if k + 1 == e.len() {
            e[k] = left;
            out.push(Monomial::from_exponents(e).expect("small exponents"));
            return;
        }
        for v in 0..=left {
            e[k] = v;
            rec(k + 1, left - v, e, out);
        }
    }
    let mut out = Vec::new();
    for d in lo..=hi {
        rec(0, d, &mut vec![0; n], &mut out);
    }
    out
}

/// Needs the division by 3: `y1^a yn` with `a >= 1`, or a pure power of `y1`.
fn needs_third(e: &Monomial, n: usize) -> bool {
    let x = e.exponents(n);
    let middle_free = x[1..n - 1].iter().all(|&v| v == 0);
    x[0] >= 1 && middle_free && (x[n - 1] == 1 || x[n - 1] == 0)
}

fn chein_monomials(run: &mut Run) {
    let contexts = [(4, Field::Rationals), (5, Field::Prime(3))];
    for (n, field) in contexts {
        let ctx = HypothesisContext::new(n, field).expect("valid rank");
        let gamma = field.from_i64(2);
        for e in monomials(n, 2, 5) {
            let target = chein_c(&Poly::term(n, field, gamma.clone(), e)).expect("valid");
            let ok = decompose_chein_monomial(&gamma, &e, ctx)
                .is_ok_and(|d| d.word.verify(&target) && d.word.letters().iter().all(|l| l.is_tame()));
            run.check(ok, || format!("C(2*y^{:?}) over n = {n}, {field}", e.exponents(n)));
        }
    }
    let f3 = Field::Prime(3);
    let ctx = HypothesisContext::new(4, f3).expect("valid rank");
    for e in monomials(4, 2, 5) {
        let r = decompose_chein_monomial(&f3.one(), &e, ctx);
        let ok = if needs_third(&e, 4) {
            matches!(r, Err(Error::InadmissibleContext(_)))
        } else {
            r.is_ok_and(|d| d.word.verify(&chein_c(&Poly::term(4, f3, f3.one(), e)).expect("valid")))
        };
        run.check(ok, || format!("characteristic 3 gate at n = 4, y^{:?}", e.exponents(4)));
    }
}

fn exponentials(run: &mut Run, seed: u64) {
    let tame = [(4, Field::Rationals), (5, Field::Prime(3)), (5, Field::Prime(2)), (4, Field::Prime(5))];
    let almost = [(4, Field::Prime(3)), (4, Field::Rationals), (5, Field::Prime(2)), (4, Field::Prime(2))];
    for k in 0..50 {
        let (n, field) = tame[k % 4];
        let ctx = HypothesisContext::new(n, field).expect("valid rank");
        let mut s = Sampler::new(seed + k as u64, n, field);
        let m = s.derived_with_ldeg(4 + (k % 2) as u32, 5, 2);
        let target = exponential(&m).expect("derived");
        let ok = decompose_exponential(&m, Mode::Tame, ctx)
            .is_ok_and(|d| d.word.verify(&target) && d.word.letters().iter().all(|l| l.is_tame()));
        run.check(ok, || format!("tame E(m), instance {k}"));
    }
    for k in 0..50 {
        let (n, field) = almost[k % 4];
        let ctx = HypothesisContext::new(n, field).expect("valid rank");
        let mut s = Sampler::new(seed + 100 + k as u64, n, field);
        let m = s.derived_with_ldeg(3, 4, 2);
        let target = exponential(&m).expect("derived");
        let ok = decompose_exponential(&m, Mode::AlmostTame, ctx).is_ok_and(|d| d.word.verify(&target));
        run.check(ok, || format!("almost tame E(m), instance {k}"));
        let tame_ctx = HypothesisContext::new(n.max(5), field).expect("valid rank");
        let mut s = Sampler::new(seed + 200 + k as u64, tame_ctx.n, field);
        let m = s.derived_with_ldeg(3, 4, 2);
        run.check(matches!(decompose_exponential(&m, Mode::Tame, tame_ctx), Err(Error::Hypothesis(_))), || {
            format!("tame mode accepted ldeg 3, instance {k}")
        });
    }
}

fn d_maps(run: &mut Run, seed: u64) {
    let tame = [(4, Field::Rationals), (5, Field::Prime(3)), (4, Field::Prime(2)), (5, Field::Rationals)];
    let almost = [(4, Field::Prime(3)), (4, Field::Rationals), (5, Field::Prime(5)), (4, Field::Prime(2))];
    for k in 0..50 {
        let (n, field) = tame[k % 4];
        let ctx = HypothesisContext::new(n, field).expect("valid rank");
        let mut s = Sampler::new(seed + k as u64, n, field);
        let a = &s.nonzero_homogeneous(2, 2) + &s.poly(2, 3, 2);
        let ok = decompose_d(&a, Mode::Tame, ctx)
            .is_ok_and(|d| d.word.verify(&d_map(&a).expect("valid")) && d.word.letters().iter().all(|l| l.is_tame()));
        run.check(ok, || format!("tame D(a), instance {k}"));
    }
    for k in 0..50 {
        let (n, field) = almost[k % 4];
        let ctx = HypothesisContext::new(n, field).expect("valid rank");
        let mut s = Sampler::new(seed + 100 + k as u64, n, field);
        let a = &s.nonzero_homogeneous(1, 2) + &s.poly(2, 3, 2);
        let ok = decompose_d(&a, Mode::AlmostTame, ctx).is_ok_and(|d| d.word.verify(&d_map(&a).expect("valid")));
        run.check(ok, || format!("almost tame D(a), instance {k}"));
    }
}

fn a_and_b(run: &mut Run, seed: u64) {
    let settings = [(4, Field::Rationals), (5, Field::Prime(3)), (5, Field::Rationals), (4, Field::Prime(3))];
    for k in 0..50 {
        let (n, field) = settings[k % 4];
        let ctx = HypothesisContext::new(n, field).expect("valid rank");
        let mut s = Sampler::new(seed + k as u64, n, field);
        let (h, g) = (s.poly(0, 3, 2), s.poly(0, 3, 3));
        let ok = reduce_a(&h, &g, ctx).is_ok_and(|d| d.word.verify(&a_map(&h, &g).expect("valid")));
        run.check(ok, || format!("A(h,g), instance {k}"));
    }
    for k in 0..25 {
        let (n, field) = settings[k % 4];
        let ctx = HypothesisContext::new(n, field).expect("valid rank");
        let mut s = Sampler::new(seed + 100 + k as u64, n, field);
        let (h, f, g) = (s.poly(0, 3, 2), s.poly(0, 3, 2), s.poly(0, 3, 2));
        let ok = decompose_b(&h, &f, &g, ctx).is_ok_and(|d| d.word.verify(&b_map(&h, &f, &g).expect("valid")));
        run.check(ok, || format!("B(h,f,g), instance {k}"));
    }
}

/// Random one-row data at row `i` whose pieces mix monomials free of `y_i`,
/// multiples of `y_i` of degree at least 2, and `y_i` itself.
pub fn mixed_one_row_data(s: &mut Sampler, i: usize) -> MagnusElement {
    let (n, field) = (s.n(), s.field());
    let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    let mut f = MagnusElement::zero(n, field);
    for _ in 0..3 {
        let a = s.index(others.len());
        let b = (a + 1 + s.index(others.len() - 1)) % others.len();
        let (_, free) = s.poly(0, 2, 2).split_by_variable(i);
        let yi = Poly::var(n, field, i);
        let d = 1 + s.index(2) as u32;
        let higher = &yi * &s.nonzero_homogeneous(d, 2);
        let linear = yi.scale(&s.nonzero_scalar());
        let coeff = &(&free + &higher) + &linear;
        f = &f + &MagnusElement::commutator(n, field, others[a], others[b]).module_scale(&coeff).expect("derived");
    }
    f
}

fn residues(run: &mut Run, seed: u64) {
    let settings = [(4, Field::Rationals), (5, Field::Prime(5)), (4, Field::Prime(2)), (6, Field::Rationals)];
    for k in 0..25 {
        let (n, field) = settings[k % 4];
        let ctx = HypothesisContext::new(n, field).expect("valid rank");
        let mut s = Sampler::new(seed + k as u64, n, field);
        let i = s.index(n);
        let f = mixed_one_row_data(&mut s, i);
        let d = match decompose_one_row(i, &f, Mode::AlmostTame, ctx) {
            Ok(d) => d,
            Err(e) => {
                run.check(false, || format!("one-row map {k}: {e}"));
                continue;
            }
        };
        run.check(d.word.verify(&chein(i, &f).expect("valid")), || format!("one-row map {k} not certified"));
        let mut seen = Vec::new();
        let mut only_residues = true;
        for l in d.word.letters().iter().filter(|l| !l.is_tame()) {
            match &l.kind {
                LetterKind::CubicResidue { row, s, t, .. } if *row == i && !seen.contains(&(*s, *t)) => {
                    seen.push((*s, *t));
                }
                _ => only_residues = false,
            }
        }
        run.check(only_residues, || format!("one-row map {k}: non-tame letter other than a merged residue"));
        // the residue at (s,t) is the coefficient of y_i y_t in the s-th Fox derivative
        let fox = f.fox_derivatives();
        let mut expected = Vec::new();
        for a in (0..n).filter(|&a| a != i) {
            for b in (a + 1..n).filter(|&b| b != i) {
                let mono = Monomial::var(i).checked_mul(&Monomial::var(b)).expect("small");
                let c = fox.entries[a].coefficient(&mono);
                if !c.is_zero() {
                    expected.push((a, b, c));
                }
            }
        }
        let mut emitted: Vec<_> = d
            .word
            .letters()
            .iter()
            .filter_map(|l| match &l.kind {
                LetterKind::CubicResidue { s, t, alpha, .. } => Some((*s, *t, if l.inverted { -alpha } else { alpha.clone() })),
                _ => None,
            })
            .collect();
        emitted.sort_by_key(|e| (e.0, e.1));
        run.check(emitted == expected, || format!("one-row map {k}: residues {emitted:?}, expected {expected:?}"));
    }
}
