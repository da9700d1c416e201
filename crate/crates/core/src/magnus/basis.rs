//! The right-normed basis of `M_n'`:
//! `[...[[x_i, x_i1], x_i2], ..., x_ik]` with `i > i1 <= i2 <= ... <= ik`.
//!
//! In Magnus coordinates such a monomial is `[x_i, x_i1] * y_i2 ... y_ik`,
//! so the basis is `{[x_i, x_j] y^mu : j < i, mu supported on indices >= j}`.

use std::collections::BTreeMap;
use std::fmt;

use super::MagnusElement;
use crate::field::{Field, Scalar};
use crate::poly::{write_signed_term, Monomial, Poly};

/// `coeff * [...[[x_head, x_tail0], x_tail1], ...]`, zero-based indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisTerm {
    pub coeff: Scalar,
    pub head: usize,
    pub tail: Vec<usize>,
}

impl BasisTerm {
    pub fn is_well_formed(&self) -> bool {
        !self.tail.is_empty() && self.head > self.tail[0] && self.tail.windows(2).all(|w| w[0] <= w[1])
    }

    /// The Lie monomial built by literal iterated brackets.
    pub fn evaluate(&self, n: usize, field: Field) -> MagnusElement {
        let gen = |i| MagnusElement::generator(n, field, i);
        let mut acc = gen(self.head);
        for &t in &self.tail {
            acc = acc.bracket_unchecked(&gen(t));
        }
        acc.scale(&self.coeff)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCombination {
    pub n: usize,
    pub field: Field,
    pub linear: Vec<Scalar>,
    pub terms: Vec<BasisTerm>,
}

impl BasisCombination {
    pub fn evaluate(&self) -> MagnusElement {
        let mut acc = MagnusElement::zero(self.n, self.field);
        for (i, c) in self.linear.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &MagnusElement::generator(self.n, self.field, i).scale(c);
            }
        }
        for t in &self.terms {
            acc = &acc + &t.evaluate(self.n, self.field);
        }
        acc
    }
}

/// Coordinates of `f` in the right-normed basis.
///
/// Works downward from the last coordinate: the `k`-th Fox derivative of
/// what is left is `sum_{j<k} y_j p_j`, and routing each monomial to its
/// smallest variable `y_j` gives the unique `p_j` supported on indices `>= j`.
pub fn to_basis(f: &MagnusElement) -> BasisCombination {
    let n = f.n();
    let field = f.field();
    let mut a: Vec<Poly> = f.derived_part().module().to_vec();
    // (degree, head, tail) -> coeff
    let mut found: BTreeMap<(usize, usize, Vec<usize>), Scalar> = BTreeMap::new();
    for k in (1..n).rev() {
        let entry = std::mem::replace(&mut a[k], Poly::zero(n, field));
        for (m, c) in entry.terms() {
            let j = m.first_variable().expect("derived coordinates have no constant term");
            assert!(j < k, "basis straightening met an unreachable monomial");
            let rest = m.quotient(&Monomial::var(j)).expect("first variable divides");
            let mut tail = vec![j];
            for v in 0..n {
                tail.extend(std::iter::repeat_n(v, rest.exponent(v) as usize));
            }
            // [x_k, x_j] * rest has j-th coordinate -y_k * rest
            let p = Poly::term(n, field, c.clone(), rest);
            a[j] = &a[j] + &(&Poly::var(n, field, k) * &p);
            found.insert((tail.len(), k, tail), c.clone());
        }
    }
    assert!(a[0].is_zero(), "basis straightening left a remainder");
    BasisCombination {
        n,
        field,
        linear: f.linear().to_vec(),
        terms: found
            .into_iter()
            .map(|((_, head, tail), coeff)| BasisTerm { coeff, head, tail })
            .collect(),
    }
}

fn write_basis_monomial(f: &mut fmt::Formatter<'_>, head: usize, tail: &[usize]) -> fmt::Result {
    write!(f, "[x{},x{}]", head + 1, tail[0] + 1)?;
    let mut i = 1;
    while i < tail.len() {
        let v = tail[i];
        let mut e = 0;
        while i < tail.len() && tail[i] == v {
            e += 1;
            i += 1;
        }
        write!(f, "*y{}", v + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for BasisCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.linear.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            write_signed_term(f, c, first, &|f| write!(f, "x{}", i + 1), false)?;
            first = false;
        }
        for t in &self.terms {
            write_signed_term(f, &t.coeff, first, &|f| write_basis_monomial(f, t.head, &t.tail), false)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: usize = 4;

    fn q() -> Field {
        Field::Rationals
    }

    fn x(i: usize) -> MagnusElement {
        MagnusElement::generator(N, q(), i - 1)
    }

    fn br(a: &MagnusElement, b: &MagnusElement) -> MagnusElement {
        a.bracket(b).unwrap()
    }

    fn term(c: i64, head: usize, tail: &[usize]) -> BasisTerm {
        BasisTerm { coeff: q().from_i64(c), head: head - 1, tail: tail.iter().map(|t| t - 1).collect() }
    }

    #[test]
    fn antisymmetry_gives_ordered_head() {
        let b = to_basis(&br(&x(1), &x(2)));
        assert_eq!(b.terms, vec![term(-1, 2, &[1])]);
        assert_eq!(b.to_string(), "-[x2,x1]");
    }

    #[test]
    fn jacobi_rewrite_of_left_nested_bracket() {
        // [x1,[x2,x3]] = [[x3,x1],x2] - [[x2,x1],x3]
        let f = br(&x(1), &br(&x(2), &x(3)));
        let b = to_basis(&f);
        assert_eq!(b.terms, vec![term(-1, 2, &[1, 3]), term(1, 3, &[1, 2])]);
        let rhs = &br(&br(&x(3), &x(1)), &x(2)) - &br(&br(&x(2), &x(1)), &x(3));
        assert_eq!(f, rhs);
        assert_eq!(b.evaluate(), f);
    }

    #[test]
    fn terms_are_well_formed_and_round_trip() {
        let f = &(&x(2) + &br(&br(&x(4), &x(2)), &x(1))) + &br(&br(&br(&x(3), &x(4)), &x(4)), &x(2));
        let b = to_basis(&f);
        assert!(b.terms.iter().all(BasisTerm::is_well_formed));
        assert_eq!(b.evaluate(), f);
    }

    #[test]
    fn zero_prints_as_zero() {
        assert_eq!(to_basis(&MagnusElement::zero(N, q())).to_string(), "0");
    }
}
