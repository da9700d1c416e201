//! Recursive decomposition of the named automorphism families into letters.
//!
//! Every routine returns letters whose product it has checked against the
//! automorphism it was asked for, so a wrong identity surfaces as a
//! certification error at the level where it happened.

use super::word::{evaluate_letters, inverse_letters, Letter};
use super::{HypothesisContext, Mode};
use crate::endo::{
    a_map_unchecked, b_map_unchecked, chein_c_unchecked, chein_unchecked, comm, d_map_unchecked,
    exponential_unchecked, Endomorphism, LinearMap,
};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::magnus::MagnusElement;
use crate::poly::{Monomial, Poly};

/// The relabelling used to turn the last factor of the two-row
/// factorization into an `A`-map: `x1 -> x3 -> x2 -> x1` (zero-based 0 -> 2 -> 1 -> 0).
pub(crate) const B_CONJUGATOR: [usize; 3] = [2, 0, 1];

pub(crate) struct Engine {
    ctx: HypothesisContext,
    mode: Mode,
    depth: usize,
    pub(crate) max_depth: usize,
}

type Letters = Vec<Letter>;

impl Engine {
    pub(crate) fn new(ctx: HypothesisContext, mode: Mode) -> Engine {
        Engine { ctx, mode, depth: 0, max_depth: 0 }
    }

    fn n(&self) -> usize {
        self.ctx.n
    }

    fn field(&self) -> Field {
        self.ctx.field
    }

    fn nested<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.depth += 1;
        self.max_depth = self.max_depth.max(self.depth);
        let r = f(self);
        self.depth -= 1;
        r
    }

    fn certified(&self, letters: Letters, target: &Endomorphism, what: &str) -> Result<Letters> {
        if evaluate_letters(self.n(), self.field(), &letters) != *target {
            return Err(Error::Certification(format!("{what}: emitted letters do not multiply to the target")));
        }
        Ok(letters)
    }

    fn y(&self, i: usize) -> Poly {
        Poly::var(self.n(), self.field(), i)
    }

    fn monomial_poly(&self, gamma: &Scalar, exps: &[u32]) -> Poly {
        Poly::term(self.n(), self.field(), gamma.clone(), Monomial::from_exponents(exps).expect("small exponents"))
    }

    fn swap(&self, s: usize, t: usize) -> Letter {
        Letter::linear_unchecked(LinearMap::transposition(self.n(), self.field(), s, t).expect("valid indices"))
    }

    fn swap_perm(&self, s: usize, t: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..self.n()).collect();
        p.swap(s, t);
        p
    }

    fn scaling(&self, i: usize, alpha: Scalar) -> Letter {
        Letter::linear_unchecked(LinearMap::scaling(self.n(), self.field(), i, alpha).expect("nonzero scalar"))
    }

    /// `x_i -> x_i + c x_j`.
    fn transvection(&self, i: usize, j: usize, c: Scalar) -> Letter {
        Letter::linear_unchecked(LinearMap::transvection(self.n(), self.field(), i, j, c).expect("valid indices"))
    }

    /// The substitution on `U` induced by `x_i -> x_i + c x_j`.
    fn transvection_subst(&self, i: usize, j: usize, c: &Scalar) -> Vec<Poly> {
        let mut s: Vec<Poly> = (0..self.n()).map(|k| self.y(k)).collect();
        s[i] = &s[i] + &self.y(j).scale(c);
        s
    }

    // ---- one-row maps and C(a) ----

    /// `C(gamma y^e)` for a monomial of degree at least two, as tame letters.
    pub(crate) fn chein_monomial(&mut self, gamma: &Scalar, exps: &[u32]) -> Result<Letters> {
        let n = self.n();
        if n < 4 {
            return Err(Error::Hypothesis(format!("tame decomposition of one-row maps needs n >= 4, got {n}")));
        }
        let degree: u32 = exps.iter().sum();
        if degree < 2 {
            return Err(Error::Hypothesis(format!("monomial of degree {degree} < 2 has no tame decomposition here")));
        }
        if gamma.is_zero() {
            return Ok(Vec::new());
        }
        self.nested(|eng| {
            let target = chein_c_unchecked(&eng.monomial_poly(gamma, exps));
            let letters = if exps[0] == 0 {
                vec![Letter::elementary_unchecked(0, eng.field().one(), comm(1, 2, &eng.monomial_poly(gamma, exps)))]
            } else if let Some(j) = (1..=n - 2).find(|&j| exps[j] >= 1) {
                eng.commutator_case(gamma, exps, j)
            } else if exps[n - 1] >= 1 {
                eng.two_variable_case(gamma, exps[0], exps[n - 1])?
            } else {
                eng.pure_power_case(gamma, exps[0])?
            };
            eng.certified(letters, &target, "one-row monomial")
        })
    }

    /// A monomial with `y_j`, `1 <= j <= n-2`: the commutator of two elementary maps.
    fn commutator_case(&mut self, gamma: &Scalar, exps: &[u32], j: usize) -> Letters {
        let n = self.n();
        let one = self.field().one();
        let mut head = vec![0u32; n];
        head[0] = exps[0];
        head[j] = exps[j] - 1;
        let mut tail = vec![0u32; n];
        tail[j + 1..].copy_from_slice(&exps[j + 1..]);
        let phi = Letter::elementary_unchecked(n - 1, one.clone(), comm(1, 2, &self.monomial_poly(&one, &head)));
        let psi = Letter::elementary_unchecked(0, one, comm(j, n - 1, &self.monomial_poly(&-gamma, &tail)));
        vec![phi.clone(), psi.clone(), phi.inverse(), psi.inverse()]
    }

    /// `gamma y1^i1 yn^in` with `i1, in >= 1`.
    fn two_variable_case(&mut self, gamma: &Scalar, i1: u32, i_last: u32) -> Result<Letters> {
        let n = self.n();
        let field = self.field();
        let one = field.one();
        if !gamma.is_one() {
            // C(gamma b) is C(b) conjugated by x2 -> gamma x2
            let theta = self.scaling(1, gamma.clone());
            let inner = self.two_variable_case(&one, i1, i_last)?;
            return Ok([vec![theta.clone()], inner, vec![theta.inverse()]].concat());
        }
        let mono = |eng: &Self, pairs: &[(usize, u32)]| {
            let mut e = vec![0u32; n];
            for &(k, v) in pairs {
                e[k] += v;
            }
            (eng.monomial_poly(&one, &e), e)
        };
        if i_last >= 2 {
            // Jacobi split: [x2,x3]a = [x2,xn] y1^i1 y3 yn^(in-1) + [xn,x3] y1^i1 y2 yn^(in-1)
            let (a_first, e_first) = mono(self, &[(0, i1), (2, i_last - 1), (n - 1, 1)]);
            let (a_second, e_second) = mono(self, &[(0, i1), (1, i_last - 1), (n - 1, 1)]);
            let first = chein_c_unchecked(&a_first).permute(&self.swap_perm(2, n - 1));
            let second = chein_c_unchecked(&a_second).permute(&self.swap_perm(1, n - 1));
            let (a, _) = mono(self, &[(0, i1), (n - 1, i_last)]);
            if first.compose_unchecked(&second) != chein_c_unchecked(&a) {
                return Err(Error::Certification("Jacobi split of a two-variable monomial failed".into()));
            }
            let w_first = self.chein_monomial(&one, &e_first)?;
            let w_second = self.chein_monomial(&one, &e_second)?;
            let (t2, t1) = (self.swap(2, n - 1), self.swap(1, n - 1));
            return Ok([vec![t2.clone()], w_first, vec![t2, t1.clone()], w_second, vec![t1]].concat());
        }
        if n >= 5 {
            // relabel yn as y4 and fall into the commutator case
            let (_, e) = mono(self, &[(0, i1), (3, 1)]);
            let t = self.swap(3, n - 1);
            let inner = self.chein_monomial(&one, &e)?;
            return Ok([vec![t.clone()], inner, vec![t]].concat());
        }
        if field.characteristic() == 3 {
            return Err(Error::InadmissibleContext(format!(
                "C(y1^{i1}*y{n}) at n = 4 needs division by 3, unavailable in characteristic 3"
            )));
        }
        // n = 4, char != 3
        let (_, e_tau) = mono(self, &[(0, i1), (1, 1)]);
        let w_tau = self.chein_monomial(&one, &e_tau)?;
        let alpha = self.transvection(1, n - 1, one.clone());
        let t = self.swap(1, n - 1);
        // sigma = [alpha, tau] * (tau^(2n))^-1
        let sigma = [
            vec![alpha.clone()],
            w_tau.clone(),
            vec![alpha.inverse()],
            inverse_letters(&w_tau),
            vec![t.clone()],
            inverse_letters(&w_tau),
            vec![t],
        ]
        .concat();
        let t23 = self.swap(1, 2);
        // C(3b) = sigma * (sigma^-1)^(23)
        let triple = [sigma.clone(), vec![t23.clone()], inverse_letters(&sigma), vec![t23]].concat();
        let (b, _) = mono(self, &[(0, i1), (n - 1, 1)]);
        let three = field.from_i64(3);
        let triple = self.certified(triple, &chein_c_unchecked(&b.scale(&three)), "tripled two-variable monomial")?;
        let third = self.scaling(1, three.inv().expect("char != 3"));
        Ok([vec![third.clone()], triple, vec![third.inverse()]].concat())
    }

    /// `gamma y1^s`, `s >= 2`.
    fn pure_power_case(&mut self, gamma: &Scalar, s: u32) -> Result<Letters> {
        let n = self.n();
        let one = self.field().one();
        if !gamma.is_one() {
            let theta = self.scaling(1, gamma.clone());
            let inner = self.pure_power_case(&one, s)?;
            return Ok([vec![theta.clone()], inner, vec![theta.inverse()]].concat());
        }
        let mut e_phi = vec![0u32; n];
        e_phi[0] = s - 1;
        e_phi[n - 1] = 1;
        let w_phi = self.chein_monomial(&one, &e_phi)?;
        let beta = self.transvection(n - 1, 0, one.clone());
        let minus = -&one;
        let mut e_mixed = vec![0u32; n];
        e_mixed[0] = 1;
        e_mixed[n - 1] = s - 1;
        let mut e_top = vec![0u32; n];
        e_top[n - 1] = s;
        let w_mixed = self.chein_monomial(&minus, &e_mixed)?;
        let w_top = self.chein_monomial(&minus, &e_top)?;
        let t = self.swap(0, n - 1);
        // C(a) = [beta, phi] * rho^-1 with rho = C(-yn^s)^(1n) C(-y1 yn^(s-1))^(1n)
        Ok([
            vec![beta.clone()],
            w_phi.clone(),
            vec![beta.inverse()],
            inverse_letters(&w_phi),
            vec![t.clone()],
            inverse_letters(&w_mixed),
            inverse_letters(&w_top),
            vec![t],
        ]
        .concat())
    }

    /// `x_i -> x_i + f` for valid one-row data. Tame letters except for the
    /// `[[x_s,x_t],x_i]` residues, which are rejected in tame mode.
    pub(crate) fn one_row(&mut self, i: usize, f: &MagnusElement) -> Result<Letters> {
        let n = self.n();
        let field = self.field();
        let one = field.one();
        self.nested(|eng| {
            let target = chein_unchecked(i, f);
            let to_front = eng.swap_perm(0, i);
            let moved = f.permute(&to_front);
            let mut inner = Vec::new();
            let mut residues = Vec::new();
            for term in moved.commutator_form() {
                let (s, t) = (term.i, term.j);
                debug_assert!(s != 0, "one-row data has no pair through its own row");
                let mut free = Poly::zero(n, field);
                let mut higher = Vec::new();
                for (m, c) in term.coeff.terms() {
                    if m.exponent(0) == 0 {
                        free = &free + &Poly::term(n, field, c.clone(), *m);
                    } else if m.total_degree() == 1 {
                        if eng.mode == Mode::Tame {
                            let residue = Letter::cubic_unchecked(i, to_front[s], to_front[t], c.clone());
                            return Err(Error::CubicObstruction(format!("{residue} has no tame decomposition")));
                        }
                        residues.push(Letter::cubic_unchecked(i, to_front[s], to_front[t], c.clone()));
                    } else {
                        higher.push((c.clone(), *m));
                    }
                }
                if !free.is_zero() {
                    inner.push(Letter::elementary_unchecked(0, one.clone(), comm(s, t, &free)));
                }
                if !higher.is_empty() {
                    // relabel so that the pair becomes (x2, x3)
                    let mut pi: Vec<usize> = vec![0, s, t];
                    pi.extend((1..n).filter(|&k| k != s && k != t));
                    let p = Letter::linear_unchecked(LinearMap::permutation(n, field, &pi).expect("permutation"));
                    inner.push(p.clone());
                    for (c, m) in higher {
                        let e: Vec<u32> = (0..n).map(|k| m.exponent(pi[k])).collect();
                        inner.extend(eng.chein_monomial_or_letter(&c, &e)?);
                    }
                    inner.push(p.inverse());
                }
            }
            let mut letters = if i == 0 {
                inner
            } else {
                let p = eng.swap(0, i);
                [vec![p.clone()], inner, vec![p]].concat()
            };
            letters.extend(residues);
            eng.certified(letters, &target, "one-row map")
        })
    }

    fn chein_monomial_or_letter(&mut self, gamma: &Scalar, exps: &[u32]) -> Result<Letters> {
        match self.chein_monomial(gamma, exps) {
            Err(Error::InadmissibleContext(_)) if self.mode == Mode::AlmostTame => {
                Ok(vec![Letter::chein_unchecked(0, comm(1, 2, &self.monomial_poly(gamma, exps)))])
            }
            r => r,
        }
    }

    /// A one-row factor: tame letters in tame mode, a single letter otherwise.
    fn one_row_factor(&mut self, i: usize, f: MagnusElement) -> Result<Letters> {
        if f.is_zero() {
            return Ok(Vec::new());
        }
        match self.mode {
            Mode::Tame => self.one_row(i, &f),
            Mode::AlmostTame => Ok(vec![Letter::chein_unchecked(i, f)]),
        }
    }

    // ---- D(a) ----

    pub(crate) fn d_map(&mut self, a: &Poly) -> Result<Letters> {
        if a.is_zero() {
            return Ok(Vec::new());
        }
        let n = self.n();
        let field = self.field();
        self.nested(|eng| {
            let target = d_map_unchecked(a);
            let mut by_var = vec![Poly::zero(n, field); n];
            let mut with_y1 = Poly::zero(n, field);
            let mut with_y2 = Poly::zero(n, field);
            for (m, c) in a.terms() {
                let strip = |k: usize| Poly::term(n, field, c.clone(), m.quotient(&Monomial::var(k)).expect("divisible"));
                if let Some(k) = (2..n).find(|&k| m.exponent(k) > 0) {
                    by_var[k] = &by_var[k] + &strip(k);
                } else if m.exponent(0) > 0 {
                    with_y1 = &with_y1 + &strip(0);
                } else if m.exponent(1) > 0 {
                    with_y2 = &with_y2 + &strip(1);
                } else {
                    return Err(Error::Hypothesis("D(a) needs a without constant term".into()));
                }
            }
            let mut letters = Vec::new();
            for (k, b) in by_var.iter().enumerate() {
                if !b.is_zero() {
                    letters.extend(eng.d_through(k, b)?);
                }
            }
            for (k, b) in [(0, &with_y1), (1, &with_y2)] {
                if !b.is_zero() {
                    letters.extend(eng.d_low(k, b)?);
                }
            }
            eng.certified(letters, &target, "D(a)")
        })
    }

    /// `D(y_k b)` for `k >= 2`, relabelled from `D(y4 b)`.
    fn d_through(&mut self, k: usize, b: &Poly) -> Result<Letters> {
        if k == 3 {
            return self.d_y4(b);
        }
        let perm = self.swap_perm(3, k);
        let inner = self.d_y4(&b.permute_vars(&perm))?;
        let p = self.swap(3, k);
        Ok([vec![p.clone()], inner, vec![p]].concat())
    }

    /// `D(y4 b) = [phi, psi]` with `phi` two one-row maps and `psi = (x3 -> x3 + [x1,x2])`.
    fn d_y4(&mut self, b: &Poly) -> Result<Letters> {
        let n = self.n();
        let field = self.field();
        self.nested(|eng| {
            let target = d_map_unchecked(&(&eng.y(3) * b));
            let mut phi = eng.one_row_factor(0, comm(2, 3, &-&(&eng.y(0) * b)))?;
            phi.extend(eng.one_row_factor(1, comm(2, 3, &-&(&eng.y(1) * b)))?);
            let psi = Letter::elementary_unchecked(2, field.one(), MagnusElement::commutator(n, field, 0, 1));
            let letters = [phi.clone(), vec![psi.clone()], inverse_letters(&phi), vec![psi.inverse()]].concat();
            eng.certified(letters, &target, "D(y4 b)")
        })
    }

    /// `D(y_k b)` for `k` in {1, 2} (zero-based 0, 1) and `b` in `K[y1,y2]`.
    fn d_low(&mut self, k: usize, b: &Poly) -> Result<Letters> {
        let one = self.field().one();
        self.nested(|eng| {
            let yk = eng.y(k);
            let target = d_map_unchecked(&(&yk * b));
            // D(y4 b)^alpha = D(y4 b) D(y_k b) chi with alpha = (x4 -> x4 + x_k)
            let w_d4 = eng.d_y4(b)?;
            let alpha = eng.transvection(3, k, one.clone());
            let chi = comm(0, 1, &-&(&(&yk * &(&eng.y(3) + &yk)) * b));
            let w_chi = eng.one_row_factor(3, chi)?;
            let letters = [
                inverse_letters(&w_d4),
                vec![alpha.clone()],
                w_d4,
                vec![alpha.inverse()],
                inverse_letters(&w_chi),
            ]
            .concat();
            eng.certified(letters, &target, "D(y_k b) with b in K[y1,y2]")
        })
    }

    // ---- E(m) ----

    pub(crate) fn exponential(&mut self, m: &MagnusElement) -> Result<Letters> {
        let n = self.n();
        let field = self.field();
        self.nested(|eng| {
            let target = exponential_unchecked(m);
            let mut letters = Vec::new();
            for term in m.commutator_form() {
                let (i, j) = (term.i, term.j);
                let mut pi: Vec<usize> = vec![i, j];
                pi.extend((0..n).filter(|&k| k != i && k != j));
                let mut inv = vec![0; n];
                for (k, &p) in pi.iter().enumerate() {
                    inv[p] = k;
                }
                let a = term.coeff.permute_vars(&inv);
                // E([x1,x2] a) = D(a) * prod_k (x_k -> x_k + [x1,x2] y_k a)
                let mut inner = eng.d_map(&a)?;
                for k in 2..n {
                    inner.extend(eng.one_row_factor(k, comm(0, 1, &(&eng.y(k) * &a)))?);
                }
                let p = Letter::linear_unchecked(LinearMap::permutation(n, field, &pi).expect("permutation"));
                letters.push(p.clone());
                letters.extend(inner);
                letters.push(p.inverse());
            }
            eng.certified(letters, &target, "E(m)")
        })
    }

    // ---- A(h,g) ----

    pub(crate) fn a_map(&mut self, h: &Poly, g: &Poly) -> Result<Letters> {
        self.nested(|eng| {
            let target = a_map_unchecked(h, g);
            let mut state = AState { h: h.clone(), g: g.clone(), pre: Vec::new(), post: Vec::new() };
            eng.reduce_a(&mut state)?;
            let last = eng.n() - 1;
            let tail = Letter::chein_unchecked(1, comm(0, last, &-&state.h));
            let letters = [state.pre, vec![tail], state.post.into_iter().rev().collect()].concat();
            eng.certified(letters, &target, "A(h,g)")
        })
    }

    /// Drives `g` to zero while keeping `A(h0,g0) = pre * A(h,g) * post`.
    fn reduce_a(&mut self, st: &mut AState) -> Result<()> {
        let n = self.n();
        let field = self.field();
        let one = field.one();
        let last = n - 1;
        // (a) constant term of g, via x1 -> x1 - lambda x2
        let lambda = st.g.constant_term();
        if !lambda.is_zero() {
            let sub = self.transvection_subst(0, 1, &-&lambda);
            let h2 = st.h.substitute_unchecked(&sub);
            let g2 = &st.g.substitute_unchecked(&sub) - &Poly::constant(n, field, lambda.clone());
            let alpha = self.transvection(0, 1, -&lambda);
            self.conjugation_step(st, alpha, None, h2, g2, "constant term removal")?;
        }
        // (b) remove y3..y_{n-1}
        self.strip_middle(st)?;
        // (c) remove the y_n part
        let (q, _) = st.g.split_by_variable(last);
        if !q.is_zero() {
            // g = G - y_n b with b = -q; first g -> g + y3 b
            let b = -&q;
            self.shift_step(st, 2, &-&b)?;
            let sub = self.transvection_subst(2, last, &one);
            let (h2, g2) = (st.h.substitute_unchecked(&sub), st.g.substitute_unchecked(&sub));
            let beta = self.transvection(2, last, one.clone());
            self.conjugation_step(st, beta, None, h2, g2, "elimination of the y_n part")?;
            self.strip_middle(st)?;
        }
        debug_assert!((2..n).all(|k| !st.g.contains_var(k)));
        // (d) monomials of K[y1,y2]
        while let Some((m, c)) = st.g.leading_term().map(|(m, c)| (*m, c.clone())) {
            let k = if m.exponent(0) > 0 { 0 } else { 1 };
            let quotient = Poly::term(n, field, -&c, m.quotient(&Monomial::var(k)).expect("divisible"));
            // g -> g + y3 c', conjugate by x3 -> x3 + x_k, then strip y3 c' again
            self.shift_step(st, 2, &-&quotient)?;
            let sub = self.transvection_subst(2, k, &one);
            let (h2, g2) = (st.h.substitute_unchecked(&sub), st.g.substitute_unchecked(&sub));
            let correction = if k == 0 {
                let hg = &h2 * &g2;
                &(-&comm(0, last, &hg)) - &comm(1, last, &(&hg * &g2))
            } else {
                &comm(0, last, &h2) + &comm(1, last, &(&h2 * &g2))
            };
            let conj = self.transvection(2, k, one.clone());
            self.conjugation_step(st, conj, Some(Letter::chein_unchecked(2, correction)), h2, g2, "two-variable reduction")?;
            self.shift_step(st, 2, &quotient)?;
        }
        Ok(())
    }

    fn strip_middle(&mut self, st: &mut AState) -> Result<()> {
        for k in 2..self.n() - 1 {
            let (q, _) = st.g.split_by_variable(k);
            if !q.is_zero() {
                self.shift_step(st, k, &q)?;
            }
        }
        Ok(())
    }

    /// `A(h,g) = phi^-1 A(h, g - y_k a) psi1 psi2 phi`.
    fn shift_step(&mut self, st: &mut AState, k: usize, a: &Poly) -> Result<()> {
        let last = self.n() - 1;
        let g_new = &st.g - &(&self.y(k) * a);
        let y2ah = &(&self.y(1) * a) * &st.h;
        let phi = Letter::chein_unchecked(0, comm(1, k, &-a));
        let psi1 = Letter::chein_unchecked(0, comm(k, last, &(&y2ah * &g_new)));
        let psi2 = Letter::chein_unchecked(1, comm(k, last, &-&y2ah));
        let before = a_map_unchecked(&st.h, &st.g);
        let after = a_map_unchecked(&st.h, &g_new);
        let check = [vec![phi.inverse()], vec![psi1.clone(), psi2.clone(), phi.clone()]];
        let lhs = evaluate_letters(self.n(), self.field(), &check[0])
            .compose_unchecked(&after)
            .compose_unchecked(&evaluate_letters(self.n(), self.field(), &check[1]));
        if lhs != before {
            return Err(Error::Certification(format!("shift of g by y{} failed", k + 1)));
        }
        st.pre.push(phi.inverse());
        // post is stored reversed
        st.post.extend([phi, psi2, psi1]);
        st.g = g_new;
        Ok(())
    }

    /// `A(h,g) = c^-1 [sigma] A(h2,g2) c` for a linear conjugator `c`.
    fn conjugation_step(
        &mut self,
        st: &mut AState,
        conj: Letter,
        sigma: Option<Letter>,
        h2: Poly,
        g2: Poly,
        what: &str,
    ) -> Result<()> {
        let before = a_map_unchecked(&st.h, &st.g);
        let after = a_map_unchecked(&h2, &g2);
        let mut left = vec![conj.inverse()];
        left.extend(sigma.clone());
        let lhs = evaluate_letters(self.n(), self.field(), &left)
            .compose_unchecked(&after)
            .compose_unchecked(&conj.evaluate(self.n(), self.field()));
        if lhs != before {
            return Err(Error::Certification(format!("A-map {what} failed")));
        }
        st.pre.extend(left);
        st.post.push(conj);
        st.h = h2;
        st.g = g2;
        Ok(())
    }

    // ---- B(h,f,g) ----

    pub(crate) fn b_map(&mut self, h: &Poly, f: &Poly, g: &Poly) -> Result<Letters> {
        let n = self.n();
        let field = self.field();
        let last = n - 1;
        self.nested(|eng| {
            let target = b_map_unchecked(h, f, g);
            let hf = h * f;
            let hg = h * g;
            let tau = Letter::chein_unchecked(2, &comm(0, last, &hf) + &comm(1, last, &hg));
            let hf2 = &hf * f;
            let phi1 = Letter::chein_unchecked(1, -&(&comm(0, last, &hf2) + &comm(2, last, &(&hf2 * g))));
            let hg2 = &hg * g;
            let psi1 = Letter::chein_unchecked(0, &comm(1, last, &hg2) - &comm(2, last, &(&hf * &(g * g))));
            // phi2 = (23) A((hf)^(23), g^(23)) (23)
            let t = eng.swap_perm(1, 2);
            let w_phi2 = eng.a_map(&hf.permute_vars(&t), &g.permute_vars(&t))?;
            let swap = eng.swap(1, 2);
            // psi2 = pi^-1 A((hg)^pi, -f^pi) pi
            let mut pi: Vec<usize> = B_CONJUGATOR.to_vec();
            pi.extend(3..n);
            let w_psi2 = eng.a_map(&hg.permute_vars(&pi), &-&f.permute_vars(&pi))?;
            let p = Letter::linear_unchecked(LinearMap::permutation(n, field, &pi).expect("permutation"));
            let letters = [
                vec![tau, phi1, swap.clone()],
                w_phi2,
                vec![swap, psi1, p.inverse()],
                w_psi2,
                vec![p],
            ]
            .concat();
            eng.certified(letters, &target, "B(h,f,g)")
        })
    }
}

struct AState {
    h: Poly,
    g: Poly,
    pre: Letters,
    /// Right cofactors, innermost last.
    post: Letters,
}
