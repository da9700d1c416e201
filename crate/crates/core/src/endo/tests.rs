use super::*;
use crate::random::Sampler;

const N: usize = 4;

fn q() -> Field {
    Field::Rationals
}

fn x(i: usize) -> MagnusElement {
    MagnusElement::generator(N, q(), i - 1)
}

fn y(i: usize) -> Poly {
    Poly::var(N, q(), i - 1)
}

fn br(a: &MagnusElement, b: &MagnusElement) -> MagnusElement {
    a.bracket(b).unwrap()
}

fn one_row(i: usize, image: MagnusElement) -> Endomorphism {
    let mut images: Vec<MagnusElement> = (1..=N).map(x).collect();
    images[i - 1] = image;
    Endomorphism::from_images(images).unwrap()
}

/// Chain-rule oracle: Fox column of `phi(g)` is `J(phi) * (dg)^phi`.
fn apply_by_jacobian(phi: &Endomorphism, g: &MagnusElement) -> Vec<Poly> {
    let j = phi.jacobian();
    let subst = phi.substitution();
    let d: Vec<Poly> = g.module().iter().map(|p| p.substitute(&subst).unwrap()).collect();
    (0..N)
        .map(|r| (0..N).fold(Poly::zero(N, q()), |acc, k| &acc + &(j.get(r, k) * &d[k])))
        .collect()
}

#[test]
fn apply_identity_and_generators() {
    let mut s = Sampler::new(1, N, q());
    let phi = s.endomorphism(3, 3);
    let g = s.element(4, 3);
    assert_eq!(Endomorphism::identity(N, q()).apply(&g).unwrap(), g);
    for i in 1..=N {
        assert_eq!(&phi.apply(&x(i)).unwrap(), phi.image(i - 1));
    }
}

#[test]
fn quadratic_map_fixes_cubic_bracket() {
    let f3 = quadratic(N, q()).unwrap();
    let g = MagnusElement::commutator(N, q(), 1, 2).module_scale(&y(1)).unwrap();
    assert_eq!(f3.apply(&g).unwrap(), br(&br(&x(2), &x(3)), &x(1)));
}

#[test]
fn apply_agrees_with_chain_rule() {
    let mut s = Sampler::new(2, N, q());
    for _ in 0..10 {
        let phi = s.endomorphism(3, 3);
        let g = s.element(4, 3);
        let image = phi.apply(&g).unwrap();
        assert_eq!(image.module(), apply_by_jacobian(&phi, &g).as_slice());
    }
}

#[test]
fn composition_identity_laws_and_chein_additivity() {
    let mut s = Sampler::new(3, N, q());
    let phi = s.endomorphism(3, 2);
    let id = Endomorphism::identity(N, q());
    assert_eq!(phi.compose(&id).unwrap(), phi);
    assert_eq!(id.compose(&phi).unwrap(), phi);
    let a = s.poly(0, 3, 3);
    let b = s.poly(0, 3, 3);
    let lhs = chein_c(&a).unwrap().compose(&chein_c(&b).unwrap()).unwrap();
    assert_eq!(lhs, chein_c(&(&a + &b)).unwrap());
}

#[test]
fn chain_rule_for_random_pairs() {
    let mut s = Sampler::new(4, N, q());
    for _ in 0..5 {
        let phi = s.endomorphism(3, 2);
        let psi = s.endomorphism(3, 2);
        let lhs = phi.compose(&psi).unwrap().jacobian();
        let rhs = phi.jacobian().mul(&psi.jacobian().substitute(&phi.substitution()).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn jacobians_of_named_maps() {
    assert!(Endomorphism::identity(N, q()).jacobian().is_identity());
    let j = quadratic(N, q()).unwrap().jacobian();
    assert_eq!(j.column(0), vec![Poly::one(N, q()), y(3), -&y(2), Poly::zero(N, q())]);
    let a = &y(1) * &y(4);
    let j = chein_c(&a).unwrap().jacobian();
    let d = MagnusElement::commutator(N, q(), 1, 2).module_scale(&a).unwrap();
    let mut col = d.module().to_vec();
    col[0] = &col[0] + &Poly::one(N, q());
    assert_eq!(j.column(0), col);
    for c in 1..N {
        let e: Vec<Poly> = (0..N).map(|r| if r == c { Poly::one(N, q()) } else { Poly::zero(N, q()) }).collect();
        assert_eq!(j.column(c), e);
    }
}

#[test]
fn automorphism_test() {
    assert!(Endomorphism::identity(N, q()).is_automorphism());
    assert!(quadratic(N, q()).unwrap().is_automorphism());
    let bad = one_row(1, &x(1) + &br(&x(2), &x(1)));
    assert!(!bad.is_automorphism());
    assert_eq!(bad.jacobian().determinant(), &Poly::one(N, q()) - &y(2));
    assert!(matches!(bad.invert(), Err(Error::NotAutomorphism(_))));
}

#[test]
fn inverses_of_named_maps() {
    let c23 = br(&x(2), &x(3));
    let e = one_row(1, &x(1) + &c23);
    assert_eq!(e.invert().unwrap(), one_row(1, &x(1) - &c23));

    let mut s = Sampler::new(5, N, q());
    let m = s.derived(2, 4, 3);
    let exp = exponential(&m).unwrap();
    assert_eq!(exp.invert().unwrap(), exponential(&-&m).unwrap());
    assert!(exp.compose(&exponential(&-&m).unwrap()).unwrap().is_identity());

    let a = s.poly(0, 3, 3);
    assert_eq!(chein_c(&a).unwrap().invert().unwrap(), chein_c(&-&a).unwrap());
}

#[test]
fn inverse_with_linear_part() {
    let mut s = Sampler::new(6, N, Field::prime(5).unwrap());
    let l = s.invertible_linear().to_endomorphism();
    let c = chein_c(&s.poly(1, 2, 2)).unwrap();
    let phi = l.compose(&c).unwrap().compose(&exponential(&s.derived(2, 3, 2)).unwrap()).unwrap();
    let inv = phi.invert().unwrap();
    assert!(phi.compose(&inv).unwrap().is_identity());
    assert!(inv.compose(&phi).unwrap().is_identity());
}

#[test]
fn conjugation_and_commutators() {
    let mut s = Sampler::new(7, N, q());
    let phi = chein_c(&s.poly(1, 3, 2)).unwrap();
    let id = Endomorphism::identity(N, q());
    assert_eq!(phi.conjugate(&id).unwrap(), phi);
    assert!(phi.commutator(&phi).unwrap().is_identity());

    // elementary pair whose commutator is C(y1 y2)
    let f = one_row(4, &x(4) + &MagnusElement::commutator(N, q(), 1, 2).module_scale(&y(1)).unwrap());
    let g = one_row(1, &x(1) - &br(&x(2), &x(4)));
    assert_eq!(f.commutator(&g).unwrap(), chein_c(&(&y(1) * &y(2))).unwrap());
}

#[test]
fn permute_is_conjugation_by_permutation() {
    let mut s = Sampler::new(8, N, q());
    let phi = exponential(&s.derived(2, 3, 2)).unwrap();
    let perm = [2, 0, 3, 1];
    let p = LinearMap::permutation(N, q(), &perm).unwrap().to_endomorphism();
    assert_eq!(phi.permute(&perm), phi.conjugate(&p).unwrap());
}

#[test]
fn exponential_additivity() {
    let mut s = Sampler::new(9, N, q());
    for _ in 0..3 {
        let m1 = s.derived(2, 4, 2);
        let m2 = s.derived(2, 4, 2);
        let lhs = exponential(&(&m1 + &m2)).unwrap();
        assert_eq!(exponential(&m1).unwrap().compose(&exponential(&m2).unwrap()).unwrap(), lhs);
    }
    assert!(exponential(&MagnusElement::zero(N, q())).unwrap().is_identity());
}

#[test]
fn d_map_additivity() {
    let mut s = Sampler::new(10, N, q());
    let a1 = s.poly(0, 3, 3);
    let a2 = s.poly(0, 3, 3);
    let lhs = d_map(&(&a1 + &a2)).unwrap();
    assert_eq!(d_map(&a1).unwrap().compose(&d_map(&a2).unwrap()).unwrap(), lhs);
}

#[test]
fn one_row_maps_at_a_row_add() {
    let mut s = Sampler::new(11, N, q());
    for row in 0..N {
        let f = s.chein_data(row, 2, 4, 3);
        let g = s.chein_data(row, 2, 4, 3);
        let lhs = chein(row, &f).unwrap().compose(&chein(row, &g).unwrap()).unwrap();
        assert_eq!(lhs, chein(row, &(&f + &g)).unwrap());
    }
}

#[test]
fn one_row_detection_and_validity() {
    let f5 = cubic(N, q()).unwrap();
    assert_eq!(f5.is_one_row(), Some(0));
    assert!(is_chein_valid(0, &br(&br(&x(2), &x(3)), &x(1))));
    let bad = br(&x(2), &x(1));
    assert!(!is_chein_valid(0, &bad));
    assert_eq!(bad.module()[0], -&y(2));
    assert_eq!(Endomorphism::identity(N, q()).is_one_row(), Some(0));
    assert!(is_chein_valid(2, &MagnusElement::zero(N, q())));
    assert_eq!(d_map(&y(3)).unwrap().is_one_row(), None);
}

#[test]
fn degrees_of_maps() {
    let show = |e: Endomorphism| (e.degrees().ldeg(), e.degrees().deg());
    assert_eq!(show(quadratic(N, q()).unwrap()), (Some(2), Some(2)));
    assert_eq!(show(cubic(N, q()).unwrap()), (Some(3), Some(3)));
    assert_eq!(show(Endomorphism::identity(N, q())), (None, None));
}

#[test]
fn builder_preconditions() {
    assert!(elementary(0, &q().one(), &br(&x(2), &x(1))).is_err());
    assert!(elementary(0, &q().zero(), &x(2)).is_err());
    // [x2,x3] y1 is one-row data but not free of x1
    let f = MagnusElement::commutator(N, q(), 1, 2).module_scale(&y(1)).unwrap();
    assert!(chein(0, &f).is_ok());
    assert!(elementary(0, &q().one(), &f).is_err());
    assert!(elementary(3, &q().from_i64(2), &f).is_ok());
    assert!(exponential(&x(1)).is_err());
    assert!(matches!(elementary(7, &q().one(), &x(2)), Err(Error::IndexOutOfRange { .. })));
}

#[test]
fn a_map_with_zero_g() {
    let h = &y(2) + &y(3);
    let a = a_map(&h, &Poly::zero(N, q())).unwrap();
    let expect = one_row(2, &x(2) - &MagnusElement::commutator(N, q(), 0, 3).module_scale(&h).unwrap());
    assert_eq!(a, expect);
}

#[test]
fn linear_maps_compose_as_matrices() {
    let mut s = Sampler::new(12, N, Field::prime(5).unwrap());
    let l1 = s.invertible_linear();
    let l2 = s.invertible_linear();
    let prod = l1.compose(&l2).unwrap().to_endomorphism();
    assert_eq!(l1.to_endomorphism().compose(&l2.to_endomorphism()).unwrap(), prod);
    assert!(l1.compose(&l1.inverse().unwrap()).unwrap().is_identity());
    let t = LinearMap::transvection(N, q(), 0, 2, q().from_i64(3)).unwrap().to_endomorphism();
    assert_eq!(t.image(0), &(&x(1) + &x(3).scale(&q().from_i64(3))));
}
