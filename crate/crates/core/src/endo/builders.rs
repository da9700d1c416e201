//! Named families of automorphisms. Indices are zero-based, so `x1` of the
//! usual notation is index 0 and `x_n` is index `n - 1`.
//!
//! Public builders check their preconditions and certify the result with
//! the Jacobian criterion; the `*_unchecked` variants skip both and are
//! used by the decomposition engine, which certifies whole words instead.

use super::{is_chein_valid, is_elementary_valid, Endomorphism, LinearMap};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::magnus::{check_n, MagnusElement};
use crate::poly::Poly;

fn certify(e: Endomorphism, what: &str) -> Result<Endomorphism> {
    if !e.is_automorphism() {
        return Err(Error::Certification(format!("{what} failed the Jacobian unit test")));
    }
    Ok(e)
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i + 1, n });
    }
    Ok(())
}

fn need_rank(n: usize, min: usize, what: &str) -> Result<()> {
    check_n(n)?;
    if n < min {
        return Err(Error::Dimension(format!("{what} needs n >= {min}, got {n}")));
    }
    Ok(())
}

/// `[x_i, x_j] * a`.
pub(crate) fn comm(i: usize, j: usize, a: &Poly) -> MagnusElement {
    MagnusElement::commutator(a.n(), a.field(), i, j).scale_module_unchecked(a)
}

fn x(n: usize, field: Field, i: usize) -> MagnusElement {
    MagnusElement::generator(n, field, i)
}

/// `x_i -> alpha x_i + f`, `f` free of `x_i`.
pub fn elementary(i: usize, alpha: &Scalar, f: &MagnusElement) -> Result<Endomorphism> {
    check_index(f.n(), i)?;
    if alpha.field() != f.field() {
        return Err(Error::Dimension("scalar from a different field".into()));
    }
    if !is_elementary_valid(i, alpha, f) {
        return Err(Error::Domain(format!(
            "elementary data for row {} must have a nonzero scalar and avoid x{}",
            i + 1,
            i + 1
        )));
    }
    certify(elementary_unchecked(i, alpha, f), "elementary map")
}

pub(crate) fn elementary_unchecked(i: usize, alpha: &Scalar, f: &MagnusElement) -> Endomorphism {
    let image = &x(f.n(), f.field(), i).scale(alpha) + f;
    Endomorphism::one_row_unchecked(i, image)
}

pub fn linear(l: &LinearMap) -> Result<Endomorphism> {
    if l.determinant().is_zero() {
        return Err(Error::NotAutomorphism("singular linear map".into()));
    }
    Ok(l.to_endomorphism())
}

/// The map swapping `x_s` and `x_t`.
pub fn transposition(n: usize, field: Field, s: usize, t: usize) -> Result<Endomorphism> {
    if s == t {
        check_n(n)?;
        check_index(n, s)?;
        return Ok(Endomorphism::identity(n, field));
    }
    Ok(LinearMap::transposition(n, field, s, t)?.to_endomorphism())
}

/// The one-row map `x_i -> x_i + f` with `f` a commutator element and `df/dx_i = 0`.
pub fn chein(i: usize, f: &MagnusElement) -> Result<Endomorphism> {
    check_index(f.n(), i)?;
    if !is_chein_valid(i, f) {
        return Err(Error::Domain(format!("not valid one-row data for row {}", i + 1)));
    }
    certify(chein_unchecked(i, f), "one-row map")
}

pub(crate) fn chein_unchecked(i: usize, f: &MagnusElement) -> Endomorphism {
    Endomorphism::one_row_unchecked(i, &x(f.n(), f.field(), i) + f)
}

/// `C(a) = (x1 + [x2,x3] a, x2, ..., xn)`.
pub fn chein_c(a: &Poly) -> Result<Endomorphism> {
    need_rank(a.n(), 3, "C(a)")?;
    certify(chein_c_unchecked(a), "C(a)")
}

pub(crate) fn chein_c_unchecked(a: &Poly) -> Endomorphism {
    chein_unchecked(0, &comm(1, 2, a))
}

/// `D(a) = (x1 + [x1,x2] y1 a, x2 + [x1,x2] y2 a, x3, ..., xn)`.
pub fn d_map(a: &Poly) -> Result<Endomorphism> {
    check_n(a.n())?;
    certify(d_map_unchecked(a), "D(a)")
}

pub(crate) fn d_map_unchecked(a: &Poly) -> Endomorphism {
    let (n, field) = (a.n(), a.field());
    let mut e = Endomorphism::identity(n, field);
    for k in 0..2 {
        let coeff = &Poly::var(n, field, k) * a;
        e.images[k] = &x(n, field, k) + &comm(0, 1, &coeff);
    }
    e
}

/// `E(m) = id + ad m`, i.e. `x_k -> x_k + [m, x_k]`, for a commutator element `m`.
pub fn exponential(m: &MagnusElement) -> Result<Endomorphism> {
    check_n(m.n())?;
    if !m.is_derived() {
        return Err(Error::Domain("exponential needs an element of [M_n, M_n]".into()));
    }
    certify(exponential_unchecked(m), "E(m)")
}

pub(crate) fn exponential_unchecked(m: &MagnusElement) -> Endomorphism {
    let (n, field) = (m.n(), m.field());
    let images = (0..n)
        .map(|k| &x(n, field, k) + &m.scale_module_unchecked(&Poly::var(n, field, k)))
        .collect();
    Endomorphism::from_images_unchecked(images)
}

fn check_same_ring(polys: &[&Poly]) -> Result<()> {
    let (n, field) = (polys[0].n(), polys[0].field());
    if polys.iter().any(|p| p.n() != n || p.field() != field) {
        return Err(Error::Dimension("polynomial arguments from different rings".into()));
    }
    Ok(())
}

/// `A(h,g) = (x1 + [x1,xn] hg + [x2,xn] hg^2, x2 - [x1,xn] h - [x2,xn] hg, x3, ..., xn)`.
pub fn a_map(h: &Poly, g: &Poly) -> Result<Endomorphism> {
    check_same_ring(&[h, g])?;
    need_rank(h.n(), 3, "A(h,g)")?;
    certify(a_map_unchecked(h, g), "A(h,g)")
}

pub(crate) fn a_map_unchecked(h: &Poly, g: &Poly) -> Endomorphism {
    let (n, field) = (h.n(), h.field());
    let last = n - 1;
    let hg = h * g;
    let hg2 = &hg * g;
    let mut e = Endomorphism::identity(n, field);
    e.images[0] = &(&x(n, field, 0) + &comm(0, last, &hg)) + &comm(1, last, &hg2);
    e.images[1] = &(&x(n, field, 1) - &comm(0, last, h)) - &comm(1, last, &hg);
    e
}

/// `B(h,f,g) = (x1 + [x1,xn] hfg + [x2,xn] hg^2, x2 - [x1,xn] hf^2 - [x2,xn] hfg, x3, ..., xn)`.
pub fn b_map(h: &Poly, f: &Poly, g: &Poly) -> Result<Endomorphism> {
    check_same_ring(&[h, f, g])?;
    need_rank(h.n(), 3, "B(h,f,g)")?;
    certify(b_map_unchecked(h, f, g), "B(h,f,g)")
}

pub(crate) fn b_map_unchecked(h: &Poly, f: &Poly, g: &Poly) -> Endomorphism {
    let (n, field) = (h.n(), h.field());
    let last = n - 1;
    let hf = h * f;
    let hfg = &hf * g;
    let hg2 = &(h * g) * g;
    let hf2 = &hf * f;
    let mut e = Endomorphism::identity(n, field);
    e.images[0] = &(&x(n, field, 0) + &comm(0, last, &hfg)) + &comm(1, last, &hg2);
    e.images[1] = &(&x(n, field, 1) - &comm(0, last, &hf2)) - &comm(1, last, &hfg);
    e
}

/// `(x1 + [x2,x3], x2, ..., xn)`.
pub fn quadratic(n: usize, field: Field) -> Result<Endomorphism> {
    need_rank(n, 3, "the quadratic map")?;
    certify(chein_unchecked(0, &MagnusElement::commutator(n, field, 1, 2)), "quadratic map")
}

/// `(x1 + [[x2,x3],x1], x2, ..., xn)`.
pub fn cubic(n: usize, field: Field) -> Result<Endomorphism> {
    cubic_residue(n, 0, 1, 2, &field.one())
}

/// `x_i -> x_i + alpha [[x_s,x_t],x_i]`, a relabelled multiple of the cubic map.
pub fn cubic_residue(n: usize, i: usize, s: usize, t: usize, alpha: &Scalar) -> Result<Endomorphism> {
    need_rank(n, 3, "the cubic map")?;
    for k in [i, s, t] {
        check_index(n, k)?;
    }
    if i == s || i == t || s == t {
        return Err(Error::Domain("cubic residue needs three distinct indices".into()));
    }
    certify(cubic_residue_unchecked(n, i, s, t, alpha), "cubic map")
}

pub(crate) fn cubic_residue_unchecked(n: usize, i: usize, s: usize, t: usize, alpha: &Scalar) -> Endomorphism {
    let field = alpha.field();
    let y = Poly::var(n, field, i).scale(alpha);
    chein_unchecked(i, &comm(s, t, &y))
}
