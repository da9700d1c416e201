use super::engine::B_CONJUGATOR;
use super::*;
use crate::endo::{a_map, b_map, chein, chein_c, comm, cubic, d_map, exponential, LinearMap};
use crate::random::Sampler;

fn q() -> Field {
    Field::Rationals
}

fn ctx(n: usize, field: Field) -> HypothesisContext {
    HypothesisContext::new(n, field).unwrap()
}

fn y(n: usize, field: Field, i: usize) -> Poly {
    Poly::var(n, field, i - 1)
}

fn mono(exps: &[u32]) -> Monomial {
    Monomial::from_exponents(exps).unwrap()
}

/// Every monomial in `n` variables with total degree in `lo..=hi`.
fn monomials(n: usize, lo: u32, hi: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut e = vec![0u32; n];
    fn rec(k: usize, left: u32, e: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k + 1 == e.len() {
            e[k] = left;
            out.push(e.clone());
            return;
        }
        for v in 0..=left {
            e[k] = v;
            rec(k + 1, left - v, e, out);
        }
    }
    for d in lo..=hi {
        let mut all = Vec::new();
        rec(0, d, &mut e, &mut all);
        out.extend(all.iter().map(|x| mono(x)));
    }
    out
}

fn tame_only(w: &GeneratorWord) -> bool {
    w.letters().iter().all(Letter::is_tame)
}

#[test]
fn contexts() {
    assert!(ctx(4, q()).tame_admissible());
    assert!(!ctx(4, Field::prime(3).unwrap()).tame_admissible());
    assert!(ctx(5, Field::prime(3).unwrap()).tame_admissible());
    assert!(ctx(4, Field::prime(3).unwrap()).almost_tame_admissible());
    assert!(!ctx(3, q()).almost_tame_admissible());
}

#[test]
fn word_basics() {
    let c = ctx(4, q());
    let empty = GeneratorWord::new(4, q(), Alphabet::Tame);
    assert!(verify_word(&empty, &Endomorphism::identity(4, q())));
    let phi = Letter::elementary(3, q().one(), comm(1, 2, &y(4, q(), 1))).unwrap();
    let psi = Letter::elementary(0, q().one(), -&comm(1, 3, &Poly::one(4, q()))).unwrap();
    let single = GeneratorWord::from_letters(4, q(), Alphabet::Tame, vec![phi.clone()]).unwrap();
    assert_eq!(word_evaluate(&single), phi.evaluate(4, q()));
    let w = GeneratorWord::from_letters(4, q(), Alphabet::Tame, vec![phi.clone(), psi.clone(), phi.inverse(), psi.inverse()])
        .unwrap();
    let (f, g) = (phi.evaluate(4, q()), psi.evaluate(4, q()));
    assert_eq!(w.evaluate(), f.commutator(&g).unwrap());
    let target = chein_c(&(&y(4, q(), 1) * &y(4, q(), 2))).unwrap();
    assert!(w.verify(&target));
    let perturbed = chein_c(&(&(&y(4, q(), 1) * &y(4, q(), 2)) + &y(4, q(), 4))).unwrap();
    assert!(!w.verify(&perturbed));
    let d = decompose_chein_monomial(&q().one(), &mono(&[1, 1, 0, 0]), c).unwrap();
    assert_eq!(d.word.len(), 4);
    assert!(d.word.verify(&target));
}

#[test]
fn simplification_cancels_and_merges() {
    let f = comm(1, 2, &y(4, q(), 4));
    let a = Letter::chein(0, f.clone()).unwrap();
    let b = Letter::chein(0, f.scale(&q().from_i64(2))).unwrap();
    let w = GeneratorWord::from_letters(4, q(), Alphabet::AlmostTame, vec![a.clone(), b, a.inverse()]).unwrap();
    let s = w.simplify();
    assert_eq!(s.len(), 1);
    assert_eq!(s.evaluate(), w.evaluate());
    let w = GeneratorWord::from_letters(4, q(), Alphabet::AlmostTame, vec![a.clone(), a.inverse()]).unwrap();
    assert!(w.simplify().is_empty());
}

#[test]
fn tame_word_rejects_one_row_letter() {
    let a = Letter::chein(0, comm(1, 2, &Poly::one(4, q()))).unwrap();
    assert!(GeneratorWord::from_letters(4, q(), Alphabet::Tame, vec![a]).is_err());
}

#[test]
fn chein_monomial_examples() {
    let c = ctx(4, q());
    let d = decompose_chein_monomial(&q().one(), &mono(&[0, 1, 0, 1]), c).unwrap();
    assert_eq!(d.word.len(), 1);
    let a = y(4, q(), 1).pow(2);
    let d = decompose_chein_monomial(&q().one(), &mono(&[2, 0, 0, 0]), c).unwrap();
    assert!(d.word.verify(&chein_c(&a).unwrap()));
    assert!(tame_only(&d.word));
    assert!(d.depth >= 2);
}

#[test]
fn chein_monomials_up_to_degree_four() {
    for (n, field) in [(4, q()), (5, Field::prime(3).unwrap())] {
        let c = ctx(n, field);
        for e in monomials(n, 2, 4) {
            let gamma = field.from_i64(2);
            let d = decompose_chein_monomial(&gamma, &e, c).unwrap_or_else(|err| panic!("{e:?}: {err}"));
            let target = chein_c(&Poly::term(n, field, gamma.clone(), e)).unwrap();
            assert!(d.word.verify(&target) && tame_only(&d.word));
        }
    }
}

#[test]
fn char_three_gate_at_rank_four() {
    let f3 = Field::prime(3).unwrap();
    let c = ctx(4, f3);
    assert!(matches!(
        decompose_chein_monomial(&f3.one(), &mono(&[1, 0, 0, 1]), c),
        Err(Error::InadmissibleContext(_))
    ));
    assert!(decompose_chein_monomial(&f3.one(), &mono(&[1, 0, 0, 2]), c).is_ok());
    assert!(matches!(
        decompose_chein_monomial(&f3.one(), &mono(&[1, 1, 0]), ctx(3, f3)),
        Err(Error::Hypothesis(_))
    ));
    // the engine itself raises only on the branch that divides by 3
    let mut eng = Engine::new(c, Mode::Tame);
    assert!(matches!(eng.chein_monomial(&f3.one(), &[2, 0, 0, 1]), Err(Error::InadmissibleContext(_))));
    let mut eng = Engine::new(c, Mode::Tame);
    assert!(eng.chein_monomial(&f3.one(), &[1, 1, 0, 0]).is_ok());
    let mut eng = Engine::new(c, Mode::Tame);
    assert!(eng.chein_monomial(&f3.one(), &[1, 0, 0, 2]).is_ok());
}

#[test]
fn low_degree_monomial_rejected() {
    assert!(matches!(
        decompose_chein_monomial(&q().one(), &mono(&[1, 0, 0, 0]), ctx(4, q())),
        Err(Error::Hypothesis(_))
    ));
}

#[test]
fn one_row_examples() {
    let c = ctx(4, q());
    let f = comm(1, 2, &(&y(4, q(), 2) + &y(4, q(), 4).pow(2)));
    let d = decompose_one_row(0, &f, Mode::Tame, c).unwrap();
    assert!(d.word.verify(&chein(0, &f).unwrap()) && tame_only(&d.word));

    let f5 = cubic(4, q()).unwrap();
    let residue = &f5.images()[0] - &MagnusElement::generator(4, q(), 0);
    assert!(matches!(decompose_one_row(0, &residue, Mode::Tame, c), Err(Error::CubicObstruction(_))));
    let d = decompose_one_row(0, &residue, Mode::AlmostTame, c).unwrap();
    assert_eq!(d.word.len(), 1);
    assert!(matches!(d.word.letters()[0].kind, LetterKind::CubicResidue { .. }));
    assert!(d.word.verify(&f5));
}

#[test]
fn one_row_at_every_row() {
    let mut s = Sampler::new(21, 4, q());
    let c = ctx(4, q());
    for row in 0..4 {
        // degree 3 data may contain a cubic residue, so start at 4
        let f = s.chein_data(row, 4, 5, 3);
        let d = decompose_one_row(row, &f, Mode::Tame, c).unwrap();
        assert!(d.word.verify(&chein(row, &f).unwrap()) && tame_only(&d.word));
        let f = s.chein_data(row, 2, 4, 4);
        let d = decompose_one_row(row, &f, Mode::AlmostTame, c).unwrap();
        assert!(d.word.verify(&chein(row, &f).unwrap()));
        assert!(d.word.letters().iter().all(|l| l.is_tame() || matches!(l.kind, LetterKind::CubicResidue { .. })));
    }
}

#[test]
fn invalid_one_row_data() {
    let bad = comm(1, 0, &Poly::one(4, q()));
    assert!(matches!(decompose_one_row(0, &bad, Mode::AlmostTame, ctx(4, q())), Err(Error::Domain(_))));
}

#[test]
fn d_examples() {
    let c = ctx(4, q());
    assert!(decompose_d(&Poly::zero(4, q()), Mode::Tame, c).unwrap().word.is_empty());
    let a = &y(4, q(), 3) * &y(4, q(), 4);
    let d = decompose_d(&a, Mode::Tame, c).unwrap();
    assert!(d.word.verify(&d_map(&a).unwrap()) && tame_only(&d.word));
    let a = y(4, q(), 1);
    assert!(matches!(decompose_d(&a, Mode::Tame, c), Err(Error::Hypothesis(_))));
    let d = decompose_d(&a, Mode::AlmostTame, c).unwrap();
    assert!(d.word.verify(&d_map(&a).unwrap()));
}

#[test]
fn d_random() {
    let mut s = Sampler::new(22, 4, q());
    let c = ctx(4, q());
    for _ in 0..4 {
        let a = s.nonzero_homogeneous(2, 3);
        let d = decompose_d(&a, Mode::Tame, c).unwrap();
        assert!(d.word.verify(&d_map(&a).unwrap()) && tame_only(&d.word));
        let a = s.nonzero_homogeneous(1, 3);
        assert!(decompose_d(&a, Mode::AlmostTame, c).unwrap().word.verify(&d_map(&a).unwrap()));
    }
}

#[test]
fn exponential_examples() {
    let c = ctx(4, q());
    assert!(decompose_exponential(&MagnusElement::zero(4, q()), Mode::Tame, c).unwrap().word.is_empty());
    let m = comm(0, 1, &(&y(4, q(), 3) * &y(4, q(), 4)));
    let d = decompose_exponential(&m, Mode::Tame, c).unwrap();
    assert!(d.word.verify(&exponential(&m).unwrap()) && tame_only(&d.word));
    let m = comm(0, 1, &y(4, q(), 3));
    assert!(matches!(decompose_exponential(&m, Mode::Tame, c), Err(Error::Hypothesis(_))));
    assert!(decompose_exponential(&m, Mode::AlmostTame, c).unwrap().word.verify(&exponential(&m).unwrap()));
}

#[test]
fn a_examples() {
    let c = ctx(4, q());
    let h = &y(4, q(), 2) + &y(4, q(), 3);
    let d = reduce_a(&h, &Poly::zero(4, q()), c).unwrap();
    assert_eq!(d.word.len(), 1);
    let one = Poly::one(4, q());
    let lambda = Poly::constant(4, q(), q().from_i64(3));
    let d = reduce_a(&one, &lambda, c).unwrap();
    assert!(d.word.verify(&a_map(&one, &lambda).unwrap()));
    let (h, g) = (y(4, q(), 3), y(4, q(), 1));
    assert!(reduce_a(&h, &g, c).unwrap().word.verify(&a_map(&h, &g).unwrap()));
}

#[test]
fn a_random_over_gf3() {
    let f3 = Field::prime(3).unwrap();
    let mut s = Sampler::new(23, 5, f3);
    let c = ctx(5, f3);
    for _ in 0..4 {
        let (h, g) = (s.poly(0, 2, 2), s.poly(0, 3, 3));
        assert!(reduce_a(&h, &g, c).unwrap().word.verify(&a_map(&h, &g).unwrap()));
    }
}

#[test]
fn b_examples() {
    let c = ctx(4, q());
    let (zero, one) = (Poly::zero(4, q()), Poly::one(4, q()));
    let h = y(4, q(), 2);
    assert!(decompose_b(&h, &zero, &zero, c).unwrap().word.is_empty());
    assert!(decompose_b(&one, &one, &one, c).unwrap().word.verify(&b_map(&one, &one, &one).unwrap()));
    let c5 = ctx(5, q());
    let (h, f, g) = (y(5, q(), 2), y(5, q(), 1), y(5, q(), 3));
    assert!(decompose_b(&h, &f, &g, c5).unwrap().word.verify(&b_map(&h, &f, &g).unwrap()));
}

/// Independent search for the relabelling that turns the last factor into an A-map.
#[test]
fn b_conjugator_is_the_unique_candidate() {
    let n = 4;
    let mut s = Sampler::new(24, n, q());
    let (h, f, g) = (s.poly(0, 2, 2), s.poly(0, 2, 2), s.poly(0, 2, 2));
    let last = n - 1;
    let (hf, hg) = (&h * &f, &h * &g);
    let psi1 = chein(0, &(&comm(1, last, &(&hg * &g)) - &comm(2, last, &(&hf * &(&g * &g))))).unwrap();
    let tau = chein(2, &(&comm(0, last, &hf) + &comm(1, last, &hg))).unwrap();
    let phi1 = chein(1, &-&(&comm(0, last, &(&hf * &f)) + &comm(2, last, &(&(&hf * &f) * &g)))).unwrap();
    let t23 = LinearMap::transposition(n, q(), 1, 2).unwrap().to_endomorphism();
    let (hf23, g23) = (hf.permute_vars(&[0, 2, 1, 3]), g.permute_vars(&[0, 2, 1, 3]));
    let phi2 = t23.compose(&a_map(&hf23, &g23).unwrap()).unwrap().compose(&t23).unwrap();
    let target = b_map(&h, &f, &g).unwrap();
    // B = tau phi1 phi2 psi1 psi2, so psi2 is determined
    let prefix = tau.compose(&phi1).unwrap().compose(&phi2).unwrap().compose(&psi1).unwrap();
    let psi2 = prefix.invert().unwrap().compose(&target).unwrap();
    let mut hits = Vec::new();
    for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let full = [perm[0], perm[1], perm[2], 3];
        let p = LinearMap::permutation(n, q(), &full).unwrap().to_endomorphism();
        let candidate = a_map(&hg.permute_vars(&full), &-&f.permute_vars(&full)).unwrap();
        if p.invert().unwrap().compose(&candidate).unwrap().compose(&p).unwrap() == psi2 {
            hits.push(perm);
        }
    }
    assert_eq!(hits, vec![B_CONJUGATOR]);
}

#[test]
fn linear_factorizations() {
    let id = LinearMap::identity(4, q());
    assert!(linear_to_elementary(&id).unwrap().is_empty());
    let w = permutation_to_elementary(4, q(), 0, 1).unwrap();
    assert_eq!(w.len(), 4);
    assert!(w.verify(&LinearMap::transposition(4, q(), 0, 1).unwrap().to_endomorphism()));
    let f5 = Field::prime(5).unwrap();
    let mut s = Sampler::new(25, 4, f5);
    for _ in 0..5 {
        let l = s.invertible_linear();
        let w = linear_to_elementary(&l).unwrap();
        assert!(w.verify(&l.to_endomorphism()) && tame_only(&w));
        assert!(w.letters().iter().all(|l| matches!(l.kind, LetterKind::Elementary { .. })));
    }
    let singular = LinearMap::new(vec![vec![q().one(); 2]; 2]).unwrap();
    assert!(linear_to_elementary(&singular).is_err());
}
