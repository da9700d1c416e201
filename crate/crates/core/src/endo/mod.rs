//! Endomorphisms of `M_n`, given by the images of the generators.
//!
//! Composition follows `(phi psi)(x_i) = psi_i(phi_1, ..., phi_n)`, so
//! `phi.compose(psi)` maps `x_i` to `phi.apply(psi_i)` and the Jacobians
//! satisfy `J(phi psi) = J(phi) * J(psi)^phi`.

mod builders;

use std::fmt;

pub use builders::*;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::magnus::{check_n, lift_column, to_basis, JacobianColumn, MagnusElement};
use crate::matrix::{scalar_determinant, scalar_inverse, scalar_mul, PolyMatrix};
use crate::poly::{Degrees, Poly};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    n: usize,
    field: Field,
    images: Vec<MagnusElement>,
}

impl Endomorphism {
    pub fn identity(n: usize, field: Field) -> Endomorphism {
        Endomorphism { n, field, images: (0..n).map(|i| MagnusElement::generator(n, field, i)).collect() }
    }

    pub fn from_images(images: Vec<MagnusElement>) -> Result<Endomorphism> {
        let n = images.len();
        check_n(n)?;
        let field = images[0].field();
        if images.iter().any(|f| f.n() != n || f.field() != field) {
            return Err(Error::Dimension(format!("expected {n} images over a common field")));
        }
        Ok(Endomorphism { n, field, images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<MagnusElement>) -> Endomorphism {
        let n = images.len();
        let field = images[0].field();
        Endomorphism { n, field, images }
    }

    /// The identity with row `i` replaced by `image`.
    pub(crate) fn one_row_unchecked(i: usize, image: MagnusElement) -> Endomorphism {
        let mut e = Endomorphism::identity(image.n(), image.field());
        e.images[i] = image;
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn images(&self) -> &[MagnusElement] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &MagnusElement {
        &self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, f)| *f == MagnusElement::generator(self.n, self.field, i))
    }

    fn check_compatible(&self, n: usize, field: Field) -> Result<()> {
        if self.n != n || self.field != field {
            return Err(Error::Dimension(format!(
                "endomorphism over (n = {}, {}) applied to (n = {}, {})",
                self.n, self.field, n, field
            )));
        }
        Ok(())
    }

    /// The induced substitution on `U`: `y_k -> linear form of the k-th image`.
    pub fn substitution(&self) -> Vec<Poly> {
        self.images.iter().map(MagnusElement::linear_form).collect()
    }

    pub fn apply(&self, g: &MagnusElement) -> Result<MagnusElement> {
        self.check_compatible(g.n(), g.field())?;
        Ok(self.apply_with(g, &self.substitution(), &mut BracketCache::new(self.n)))
    }

    fn apply_with(&self, g: &MagnusElement, subst: &[Poly], cache: &mut BracketCache) -> MagnusElement {
        let mut acc = MagnusElement::zero(self.n, self.field);
        for (i, c) in g.linear().iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &self.images[i].scale(c);
            }
        }
        for t in g.commutator_form() {
            let b = cache.get(&self.images, t.i, t.j);
            let coeff = t.coeff.substitute_unchecked(subst);
            acc = &acc + &b.scale_module_unchecked(&coeff);
        }
        acc
    }

    /// `self * other`, i.e. `x_i -> self.apply(other_i)`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.check_compatible(other.n, other.field)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Endomorphism) -> Endomorphism {
        let subst = self.substitution();
        let mut cache = BracketCache::new(self.n);
        let images = other
            .images
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if *g == MagnusElement::generator(self.n, self.field, i) {
                    self.images[i].clone()
                } else {
                    self.apply_with(g, &subst, &mut cache)
                }
            })
            .collect();
        Endomorphism { n: self.n, field: self.field, images }
    }

    /// Column `j` holds the Fox derivatives of the `j`-th image.
    pub fn jacobian(&self) -> PolyMatrix {
        let cols: Vec<Vec<Poly>> = self.images.iter().map(|f| f.module().to_vec()).collect();
        PolyMatrix::from_columns(&cols).expect("images share n and field")
    }

    pub fn linear_part(&self) -> LinearMap {
        let matrix = (0..self.n)
            .map(|r| self.images.iter().map(|f| f.linear()[r].clone()).collect())
            .collect();
        LinearMap { n: self.n, field: self.field, matrix }
    }

    /// True iff the Jacobian determinant is a nonzero constant.
    pub fn is_automorphism(&self) -> bool {
        let d = self.jacobian().determinant();
        d.is_constant() && !d.is_zero()
    }

    /// The inverse automorphism, certified by composing both ways.
    pub fn invert(&self) -> Result<Endomorphism> {
        let linv = self
            .linear_part()
            .inverse()
            .map_err(|_| Error::NotAutomorphism("linear part is singular".into()))?
            .to_endomorphism();
        let unipotent = linv.compose_unchecked(self);
        let jinv = unipotent
            .jacobian()
            .inverse_unipotent()
            .ok_or_else(|| Error::NotAutomorphism("Jacobian matrix has no polynomial inverse".into()))?;
        let mut images = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let mut col = jinv.column(j);
            col[j] = &col[j] - &Poly::one(self.n, self.field);
            let g = lift_column(&JacobianColumn { entries: col }).map_err(|e| {
                Error::Certification(format!("inverse Jacobian column {} does not lift: {e}", j + 1))
            })?;
            images.push(&MagnusElement::generator(self.n, self.field, j) + &g);
        }
        let inverse = Endomorphism { n: self.n, field: self.field, images }.compose_unchecked(&linv);
        if !self.compose_unchecked(&inverse).is_identity() || !inverse.compose_unchecked(self).is_identity() {
            return Err(Error::Certification("computed inverse does not compose to the identity".into()));
        }
        Ok(inverse)
    }

    /// `by * self * by^-1`.
    pub fn conjugate(&self, by: &Endomorphism) -> Result<Endomorphism> {
        self.check_compatible(by.n, by.field)?;
        let inv = by.invert()?;
        Ok(by.compose_unchecked(self).compose_unchecked(&inv))
    }

    /// `self * other * self^-1 * other^-1`.
    pub fn commutator(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.check_compatible(other.n, other.field)?;
        let a = self.invert()?;
        let b = other.invert()?;
        Ok(self.compose_unchecked(other).compose_unchecked(&a).compose_unchecked(&b))
    }

    /// `ldeg`/`deg` over the nonlinear parts of the images.
    pub fn degrees(&self) -> Degrees {
        self.images.iter().fold(Degrees::Zero, |acc, f| acc.union(f.derived_part().degrees()))
    }

    /// The row moved by a map that fixes every other generator; row 0 for
    /// the identity.
    pub fn is_one_row(&self) -> Option<usize> {
        let moved: Vec<usize> = (0..self.n)
            .filter(|&i| self.images[i] != MagnusElement::generator(self.n, self.field, i))
            .collect();
        match moved.as_slice() {
            [] => Some(0),
            [i] => Some(*i),
            _ => None,
        }
    }

    /// Image under the relabelling `x_k -> x_{perm[k]}`: the conjugate
    /// `P self P^-1` for the permutation map `P`.
    pub fn permute(&self, perm: &[usize]) -> Endomorphism {
        let mut images = vec![MagnusElement::zero(self.n, self.field); self.n];
        for k in 0..self.n {
            images[perm[k]] = self.images[k].permute(perm);
        }
        Endomorphism { n: self.n, field: self.field, images }
    }
}

/// Lazily computed brackets `[f_i, f_j]` of the images.
struct BracketCache {
    n: usize,
    slots: Vec<Option<MagnusElement>>,
}

impl BracketCache {
    fn new(n: usize) -> BracketCache {
        BracketCache { n, slots: vec![None; n * n] }
    }

    fn get(&mut self, images: &[MagnusElement], i: usize, j: usize) -> &MagnusElement {
        let slot = &mut self.slots[i * self.n + j];
        slot.get_or_insert_with(|| images[i].bracket_unchecked(&images[j]))
    }
}

/// Valid one-row data: `x_i -> x_i + f` is an automorphism fixing the other
/// generators iff `f` is a commutator element with `df/dx_i = 0`.
pub fn is_chein_valid(i: usize, f: &MagnusElement) -> bool {
    i < f.n() && f.is_derived() && f.module()[i].is_zero()
}

/// Valid elementary data for row `i`: `alpha != 0` and `f` free of `x_i`.
pub fn is_elementary_valid(i: usize, alpha: &Scalar, f: &MagnusElement) -> bool {
    i < f.n() && !alpha.is_zero() && !f.involves_generator(i)
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.images.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "x{} -> {}", i + 1, to_basis(g))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Endomorphism(")?;
        for (i, g) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "x{} -> {}", i + 1, to_basis(g))?;
        }
        write!(f, ")")
    }
}

/// A linear automorphism; column `j` holds the coefficients of the image of `x_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    n: usize,
    field: Field,
    matrix: Vec<Vec<Scalar>>,
}

impl LinearMap {
    pub fn new(matrix: Vec<Vec<Scalar>>) -> Result<LinearMap> {
        let n = matrix.len();
        check_n(n)?;
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("linear map needs a square matrix".into()));
        }
        let field = matrix[0][0].field();
        if matrix.iter().flatten().any(|c| c.field() != field) {
            return Err(Error::Dimension("matrix entries from different fields".into()));
        }
        Ok(LinearMap { n, field, matrix })
    }

    pub fn identity(n: usize, field: Field) -> LinearMap {
        let matrix = (0..n)
            .map(|r| (0..n).map(|c| if r == c { field.one() } else { field.zero() }).collect())
            .collect();
        LinearMap { n, field, matrix }
    }

    fn check_index(n: usize, i: usize) -> Result<()> {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i + 1, n });
        }
        Ok(())
    }

    /// `x_k -> x_{perm[k]}`.
    pub fn permutation(n: usize, field: Field, perm: &[usize]) -> Result<LinearMap> {
        check_n(n)?;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::Domain("not a permutation of the generators".into()));
        }
        let mut m = LinearMap::identity(n, field);
        for (k, &p) in perm.iter().enumerate() {
            for r in 0..n {
                m.matrix[r][k] = if r == p { field.one() } else { field.zero() };
            }
        }
        Ok(m)
    }

    pub fn transposition(n: usize, field: Field, s: usize, t: usize) -> Result<LinearMap> {
        check_n(n)?;
        Self::check_index(n, s)?;
        Self::check_index(n, t)?;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(s, t);
        LinearMap::permutation(n, field, &perm)
    }

    /// `x_i -> alpha x_i`.
    pub fn scaling(n: usize, field: Field, i: usize, alpha: Scalar) -> Result<LinearMap> {
        check_n(n)?;
        Self::check_index(n, i)?;
        if alpha.is_zero() {
            return Err(Error::Domain("scaling by zero".into()));
        }
        let mut m = LinearMap::identity(n, field);
        m.matrix[i][i] = alpha;
        Ok(m)
    }

    /// `x_i -> x_i + c x_j`.
    pub fn transvection(n: usize, field: Field, i: usize, j: usize, c: Scalar) -> Result<LinearMap> {
        check_n(n)?;
        Self::check_index(n, i)?;
        Self::check_index(n, j)?;
        if i == j {
            return Err(Error::Domain("transvection needs distinct indices".into()));
        }
        let mut m = LinearMap::identity(n, field);
        m.matrix[j][i] = c;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        *self == LinearMap::identity(self.n, self.field)
    }

    pub fn determinant(&self) -> Scalar {
        scalar_determinant(&self.matrix)
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        let matrix = scalar_inverse(&self.matrix).ok_or_else(|| Error::Domain("singular matrix".into()))?;
        Ok(LinearMap { n: self.n, field: self.field, matrix })
    }

    /// The map `self * other` in composition order, matrix product `M_self M_other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.n != other.n || self.field != other.field {
            return Err(Error::Dimension("linear maps of different shapes".into()));
        }
        Ok(LinearMap { n: self.n, field: self.field, matrix: scalar_mul(&self.matrix, &other.matrix) })
    }

    pub fn to_endomorphism(&self) -> Endomorphism {
        let images = (0..self.n)
            .map(|j| {
                (0..self.n).fold(MagnusElement::zero(self.n, self.field), |acc, r| {
                    let c = &self.matrix[r][j];
                    if c.is_zero() {
                        acc
                    } else {
                        &acc + &MagnusElement::generator(self.n, self.field, r).scale(c)
                    }
                })
            })
            .collect();
        Endomorphism { n: self.n, field: self.field, images }
    }
}

#[cfg(test)]
mod tests;
