//! Elements of the free metabelian Lie algebra `M_n` in Magnus coordinates.
//!
//! `M_n` sits inside `Y_n + T_n`, where `Y_n` is abelian on `y1..yn` and
//! `T_n` is the free right `U`-module on `t1..tn`, `U = K[y1..yn]`. The
//! generators are `x_i = y_i + t_i` and the bracket is
//! `[a + t, b + s] = t*b - s*a`. An element is stored as its linear
//! coefficients `lambda_i` and its module coordinates `d_i`, which are
//! exactly its Fox derivatives.

mod basis;
mod expr;

use std::fmt;
use std::ops::{Add, Neg, Sub};

pub use basis::{to_basis, BasisCombination, BasisTerm};
pub use expr::LieExpr;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::{Degrees, Poly, MAX_VARS};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MagnusElement {
    n: usize,
    field: Field,
    linear: Vec<Scalar>,
    module: Vec<Poly>,
}

/// One summand `[x_i, x_j] * coeff` (zero-based, `i < j`) of a derived element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorTerm {
    pub i: usize,
    pub j: usize,
    pub coeff: Poly,
}

pub(crate) fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_VARS).contains(&n) {
        return Err(Error::Dimension(format!("n = {n} outside 2..={MAX_VARS}")));
    }
    Ok(())
}

impl MagnusElement {
    pub fn zero(n: usize, field: Field) -> MagnusElement {
        MagnusElement {
            n,
            field,
            linear: vec![field.zero(); n],
            module: vec![Poly::zero(n, field); n],
        }
    }

    /// The generator `x_{i+1}`.
    pub fn generator(n: usize, field: Field, i: usize) -> MagnusElement {
        let mut g = MagnusElement::zero(n, field);
        g.linear[i] = field.one();
        g.module[i] = Poly::one(n, field);
        g
    }

    /// `[x_{i+1}, x_{j+1}]`, with Fox column `e_i y_j - e_j y_i`.
    pub fn commutator(n: usize, field: Field, i: usize, j: usize) -> MagnusElement {
        let mut m = MagnusElement::zero(n, field);
        if i != j {
            m.module[i] = Poly::var(n, field, j);
            m.module[j] = -&Poly::var(n, field, i);
        }
        m
    }

    /// Builds an element from raw coordinates, checking membership in `M_n`:
    /// `sum y_i d_i = sum lambda_i y_i`.
    pub fn from_parts(linear: Vec<Scalar>, module: Vec<Poly>) -> Result<MagnusElement> {
        let n = linear.len();
        check_n(n)?;
        if module.len() != n {
            return Err(Error::Dimension("linear and module parts differ in length".into()));
        }
        let field = linear[0].field();
        if linear.iter().any(|c| c.field() != field) || module.iter().any(|p| p.n() != n || p.field() != field) {
            return Err(Error::Dimension("coordinates disagree in n or field".into()));
        }
        let e = MagnusElement { n, field, linear, module };
        if !e.membership_defect().is_zero() {
            return Err(Error::Domain("coordinates do not describe an element of M_n".into()));
        }
        Ok(e)
    }

    /// An element of `M_n'` from its Fox column; the caller guarantees `Y*a = 0`.
    pub(crate) fn from_module_unchecked(module: Vec<Poly>) -> MagnusElement {
        let n = module.len();
        let field = module[0].field();
        MagnusElement { n, field, linear: vec![field.zero(); n], module }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn linear(&self) -> &[Scalar] {
        &self.linear
    }

    pub fn module(&self) -> &[Poly] {
        &self.module
    }

    pub fn is_zero(&self) -> bool {
        self.linear.iter().all(Scalar::is_zero) && self.module.iter().all(Poly::is_zero)
    }

    /// True iff the element lies in `M_n' = [M_n, M_n]`.
    pub fn is_derived(&self) -> bool {
        self.linear.iter().all(Scalar::is_zero)
    }

    /// `sum y_i d_i - sum lambda_i y_i`; zero exactly for members of `M_n`.
    fn membership_defect(&self) -> Poly {
        let mut acc = -&self.linear_form();
        for (i, d) in self.module.iter().enumerate() {
            acc = &acc + &(&Poly::var(self.n, self.field, i) * d);
        }
        acc
    }

    /// `sum lambda_i y_i`, the image of the element in `Y_n` viewed inside `U`.
    pub fn linear_form(&self) -> Poly {
        let mut p = Poly::zero(self.n, self.field);
        for (i, c) in self.linear.iter().enumerate() {
            if !c.is_zero() {
                p = &p + &Poly::var(self.n, self.field, i).scale(c);
            }
        }
        p
    }

    /// The summand `m` in `f = sum lambda_i x_i + m`, `m` in `M_n'`.
    pub fn derived_part(&self) -> MagnusElement {
        let module = self
            .module
            .iter()
            .zip(&self.linear)
            .map(|(d, c)| d - &Poly::constant(self.n, self.field, c.clone()))
            .collect();
        MagnusElement::from_module_unchecked(module)
    }

    /// The linear summand `sum lambda_i x_i`.
    pub fn linear_summand(&self) -> MagnusElement {
        let module = self
            .linear
            .iter()
            .map(|c| Poly::constant(self.n, self.field, c.clone()))
            .collect();
        MagnusElement { n: self.n, field: self.field, linear: self.linear.clone(), module }
    }

    fn check_compatible(&self, other: &MagnusElement) -> Result<()> {
        if self.n != other.n || self.field != other.field {
            return Err(Error::Dimension(format!(
                "elements over (n = {}, {}) and (n = {}, {})",
                self.n, self.field, other.n, other.field
            )));
        }
        Ok(())
    }

    pub fn bracket(&self, other: &MagnusElement) -> Result<MagnusElement> {
        self.check_compatible(other)?;
        Ok(self.bracket_unchecked(other))
    }

    pub(crate) fn bracket_unchecked(&self, other: &MagnusElement) -> MagnusElement {
        let a = self.linear_form();
        let b = other.linear_form();
        let module = self
            .module
            .iter()
            .zip(&other.module)
            .map(|(t, s)| &(t * &b) - &(s * &a))
            .collect();
        MagnusElement::from_module_unchecked(module)
    }

    /// `m * u` for `m` in `M_n'`; for a monomial `u = y_i...` this is the
    /// iterated bracket `[[m, x_i], ...]`.
    pub fn module_scale(&self, u: &Poly) -> Result<MagnusElement> {
        if !self.is_derived() {
            return Err(Error::Domain("module action needs an element of [M_n, M_n]".into()));
        }
        if u.n() != self.n || u.field() != self.field {
            return Err(Error::Dimension("scaling polynomial from a different ring".into()));
        }
        Ok(self.scale_module_unchecked(u))
    }

    pub(crate) fn scale_module_unchecked(&self, u: &Poly) -> MagnusElement {
        MagnusElement::from_module_unchecked(self.module.iter().map(|d| d * u).collect())
    }

    pub fn scale(&self, c: &Scalar) -> MagnusElement {
        MagnusElement {
            n: self.n,
            field: self.field,
            linear: self.linear.iter().map(|l| l * c).collect(),
            module: self.module.iter().map(|d| d.scale(c)).collect(),
        }
    }

    pub fn fox_derivatives(&self) -> JacobianColumn {
        JacobianColumn { entries: self.module.clone() }
    }

    /// Degrees in the `x`-grading: a module monomial of `y`-degree `k`
    /// sits in degree `k + 1`, a nonzero linear part in degree 1.
    pub fn degrees(&self) -> Degrees {
        let linear = if self.is_derived() { Degrees::Zero } else { Degrees::Range { ldeg: 1, deg: 1 } };
        let derived = self
            .derived_part()
            .module
            .iter()
            .fold(Degrees::Zero, |acc, d| acc.union(d.degrees()))
            .shift(1);
        linear.union(derived)
    }

    /// Image under the permutation automorphism `x_k -> x_{perm[k]}`.
    pub fn permute(&self, perm: &[usize]) -> MagnusElement {
        let mut out = MagnusElement::zero(self.n, self.field);
        for k in 0..self.n {
            out.linear[perm[k]] = self.linear[k].clone();
            out.module[perm[k]] = self.module[k].permute_vars(perm);
        }
        out
    }

    /// Whether `f` involves the generator `x_{i+1}`: a nonzero linear
    /// coefficient, a nonzero Fox derivative in slot `i`, or `y_i` in any
    /// module coordinate of the derived part.
    pub fn involves_generator(&self, i: usize) -> bool {
        if !self.linear[i].is_zero() {
            return true;
        }
        let m = self.derived_part();
        !m.module[i].is_zero() || m.module.iter().any(|d| d.contains_var(i))
    }

    /// Writes the derived part as `sum_{i<j} [x_i, x_j] a_ij` by the
    /// elimination in the proof that `Y*a = 0` columns are Fox derivatives.
    pub fn commutator_form(&self) -> Vec<CommutatorTerm> {
        commutator_form_unchecked(self.derived_part().module.clone())
    }
}

/// Elimination of coordinates `n-1, ..., 1`: split `a_i = y_k q_i + r_i`,
/// peel off `[x_i, x_k] q_i`, continue with the `r_i`.
fn commutator_form_unchecked(mut a: Vec<Poly>) -> Vec<CommutatorTerm> {
    let n = a.len();
    let mut out = Vec::new();
    for k in (1..n).rev() {
        let mut residual = a[k].clone();
        for i in 0..k {
            let (q, r) = a[i].split_by_variable(k);
            if q.is_zero() {
                continue;
            }
            residual = &residual + &(&Poly::var(q.n(), q.field(), i) * &q);
            a[i] = r;
            out.push(CommutatorTerm { i, j: k, coeff: q });
        }
        assert!(residual.is_zero(), "column elimination left a nonzero remainder");
        a[k] = Poly::zero(residual.n(), residual.field());
    }
    assert!(a.first().is_none_or(Poly::is_zero), "column elimination left a nonzero remainder");
    out.sort_by_key(|x| (x.i, x.j));
    out
}

/// Builds `sum [x_i, x_j] a_ij` in Magnus coordinates.
pub fn from_commutator_form(n: usize, field: Field, terms: &[CommutatorTerm]) -> MagnusElement {
    let mut acc = MagnusElement::zero(n, field);
    for t in terms {
        acc = &acc + &MagnusElement::commutator(n, field, t.i, t.j).scale_module_unchecked(&t.coeff);
    }
    acc
}

/// A column of `n` polynomials, e.g. the Fox derivatives of one element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianColumn {
    pub entries: Vec<Poly>,
}

impl JacobianColumn {
    pub fn new(entries: Vec<Poly>) -> Result<JacobianColumn> {
        let n = entries.len();
        check_n(n)?;
        let field = entries[0].field();
        if entries.iter().any(|p| p.n() != n || p.field() != field) {
            return Err(Error::Dimension("column entries disagree in n or field".into()));
        }
        Ok(JacobianColumn { entries })
    }

    /// `Y*a = y1 a1 + ... + yn an`.
    pub fn y_pairing(&self) -> Poly {
        let n = self.entries.len();
        let field = self.entries[0].field();
        self.entries
            .iter()
            .enumerate()
            .fold(Poly::zero(n, field), |acc, (i, a)| &acc + &(&Poly::var(n, field, i) * a))
    }

    /// The decomposition `a = sum (e_i y_j - e_j y_i) a_ij`, after checking `Y*a = 0`.
    pub fn commutator_form(&self) -> Result<Vec<CommutatorTerm>> {
        let pairing = self.y_pairing();
        if !pairing.is_zero() {
            return Err(Error::NotADerivative(pairing.to_string()));
        }
        Ok(commutator_form_unchecked(self.entries.clone()))
    }
}

/// The unique `f` in `M_n'` with `fox_derivatives(f) = a`.
pub fn lift_column(a: &JacobianColumn) -> Result<MagnusElement> {
    let terms = a.commutator_form()?;
    let n = a.entries.len();
    let f = from_commutator_form(n, a.entries[0].field(), &terms);
    if f.module != a.entries {
        return Err(Error::Certification("lifted element does not reproduce its column".into()));
    }
    Ok(f)
}

impl<'a> Add for &'a MagnusElement {
    type Output = MagnusElement;
    fn add(self, rhs: &'a MagnusElement) -> MagnusElement {
        assert!(self.n == rhs.n && self.field == rhs.field, "elements from different algebras");
        MagnusElement {
            n: self.n,
            field: self.field,
            linear: self.linear.iter().zip(&rhs.linear).map(|(a, b)| a + b).collect(),
            module: self.module.iter().zip(&rhs.module).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub for &'a MagnusElement {
    type Output = MagnusElement;
    fn sub(self, rhs: &'a MagnusElement) -> MagnusElement {
        self + &(-rhs)
    }
}

impl Neg for &MagnusElement {
    type Output = MagnusElement;
    fn neg(self) -> MagnusElement {
        MagnusElement {
            n: self.n,
            field: self.field,
            linear: self.linear.iter().map(|a| -a).collect(),
            module: self.module.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for MagnusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", to_basis(self))
    }
}

impl fmt::Display for JacobianColumn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MagnusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MagnusElement({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;

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

    fn zero() -> Poly {
        Poly::zero(N, q())
    }

    #[test]
    fn generator_coordinates() {
        let g = x(1);
        assert!(g.linear()[0].is_one() && g.linear()[1..].iter().all(Scalar::is_zero));
        assert_eq!(g.module()[0], Poly::one(N, q()));
        assert_eq!(g.fox_derivatives().entries, vec![Poly::one(N, q()), zero(), zero(), zero()]);
    }

    #[test]
    fn bracket_of_generators() {
        let c = br(&x(1), &x(2));
        assert!(c.is_derived());
        assert_eq!(c.module(), &[y(2), -&y(1), zero(), zero()]);
        assert_eq!(c, MagnusElement::commutator(N, q(), 0, 1));
    }

    #[test]
    fn cubic_right_normed() {
        let c = br(&br(&x(2), &x(3)), &x(1));
        assert_eq!(c.module(), &[zero(), &y(1) * &y(3), -&(&y(1) * &y(2)), zero()]);
        assert_eq!(c.degrees(), Degrees::Range { ldeg: 3, deg: 3 });
    }

    #[test]
    fn self_bracket_and_metabelian_identity() {
        let u = &x(1) + &br(&x(2), &x(3));
        assert!(br(&u, &u).is_zero());
        assert!(br(&br(&x(1), &x(2)), &br(&x(3), &x(4))).is_zero());
    }

    #[test]
    fn module_scale_matches_iterated_brackets() {
        let c = br(&x(2), &x(3));
        assert_eq!(c.module_scale(&Poly::one(N, q())).unwrap(), c);
        assert_eq!(c.module_scale(&y(1)).unwrap(), br(&c, &x(1)));
        let u = &y(1) * &y(4).pow(2);
        let scaled = c.module_scale(&u).unwrap();
        for order in [[1, 4, 4], [4, 1, 4], [4, 4, 1]] {
            let it = order.iter().fold(c.clone(), |acc, &g| br(&acc, &x(g)));
            assert_eq!(scaled, it);
        }
        assert!(matches!(x(1).module_scale(&y(1)), Err(Error::Domain(_))));
    }

    #[test]
    fn lift_examples() {
        let zero_col = JacobianColumn::new(vec![zero(); N]).unwrap();
        assert!(lift_column(&zero_col).unwrap().is_zero());
        let col = JacobianColumn::new(vec![y(2), -&y(1), zero(), zero()]).unwrap();
        assert_eq!(lift_column(&col).unwrap(), br(&x(1), &x(2)));
        let bad = JacobianColumn::new(vec![y(2), zero(), zero(), zero()]).unwrap();
        assert!(matches!(lift_column(&bad), Err(Error::NotADerivative(_))));
    }

    #[test]
    fn commutator_form_reassembles() {
        let f = &br(&br(&x(2), &x(3)), &x(1)).scale_module_unchecked(&y(4)) + &br(&x(1), &x(4));
        let terms = f.commutator_form();
        assert!(terms.iter().all(|t| t.i < t.j));
        assert_eq!(from_commutator_form(N, q(), &terms), f);
    }

    #[test]
    fn degrees_of_elements() {
        assert_eq!(x(1).degrees(), Degrees::Range { ldeg: 1, deg: 1 });
        assert_eq!(MagnusElement::zero(N, q()).degrees(), Degrees::Zero);
        let mixed = &x(1) + &br(&br(&x(2), &x(3)), &x(1));
        assert_eq!(mixed.degrees(), Degrees::Range { ldeg: 1, deg: 3 });
    }

    #[test]
    fn from_parts_checks_membership() {
        let one = Poly::one(N, q());
        let ok = MagnusElement::from_parts(
            vec![q().one(), q().zero(), q().zero(), q().zero()],
            vec![one.clone(), zero(), zero(), zero()],
        );
        assert!(ok.is_ok());
        let bad = MagnusElement::from_parts(vec![q().zero(); N], vec![one, zero(), zero(), zero()]);
        assert!(matches!(bad, Err(Error::Domain(_))));
    }

    #[test]
    fn permutation_action() {
        // (1 4) sends [x2,x3]*y1 to [x2,x3]*y4
        let f = br(&x(2), &x(3)).scale_module_unchecked(&y(1));
        let g = f.permute(&[3, 1, 2, 0]);
        assert_eq!(g, br(&x(2), &x(3)).scale_module_unchecked(&y(4)));
        let _ = Monomial::one();
    }

    #[test]
    fn involves_generator_detects_tails() {
        let f = br(&x(2), &x(3)).scale_module_unchecked(&y(1));
        assert!(f.involves_generator(0));
        assert!(!f.involves_generator(3));
        assert!(br(&x(2), &x(1)).involves_generator(0));
    }
}
