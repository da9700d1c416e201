//! Sparse multivariate polynomials in commuting variables `y1..yn` over an
//! exact field, kept in graded lexicographic order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Largest supported number of variables (and generators).
pub const MAX_VARS: usize = 16;

/// Exponent vector of a monomial. Slots past the session's `n` stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(i: usize) -> Monomial {
        let mut m = Monomial::default();
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u32]) -> Result<Monomial> {
        if exps.len() > MAX_VARS {
            return Err(Error::Dimension(format!("{} variables exceed the maximum {MAX_VARS}", exps.len())));
        }
        let mut m = Monomial::default();
        for (slot, &e) in m.exps.iter_mut().zip(exps) {
            *slot = u16::try_from(e).map_err(|_| Error::Overflow)?;
        }
        Ok(m)
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, n: usize) -> Vec<u32> {
        self.exps[..n].iter().map(|&e| e as u32).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps) {
            *a = a.checked_add(b)?;
        }
        Some(m)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps).all(|(a, b)| *a <= b)
    }

    /// `self / other`, when `other` divides `self`.
    pub fn quotient(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = *self;
        for (a, b) in m.exps.iter_mut().zip(other.exps) {
            *a = a.checked_sub(b)?;
        }
        Some(m)
    }

    pub fn with_exponent(mut self, i: usize, e: u32) -> Monomial {
        self.exps[i] = u16::try_from(e).expect("exponent overflow");
        self
    }

    /// Renames `y_k` to `y_{perm[k]}`.
    pub fn permuted(&self, perm: &[usize]) -> Monomial {
        let mut m = Monomial::default();
        for (k, &target) in perm.iter().enumerate() {
            m.exps[target] = self.exps[k];
        }
        m
    }

    /// Index of the first variable with positive exponent.
    pub fn first_variable(&self) -> Option<usize> {
        self.exps.iter().position(|&e| e > 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.exps.iter().rposition(|&e| e > 0).map_or(0, |i| i + 1);
        write!(f, "y{:?}", &self.exps[..last])
    }
}

/// Lower degree and degree of a graded object. The zero object carries the
/// sentinels `ldeg = +inf`, `deg = -inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degrees {
    Zero,
    Range { ldeg: u32, deg: u32 },
}

impl Degrees {
    pub fn ldeg(&self) -> Option<u32> {
        match self {
            Degrees::Zero => None,
            Degrees::Range { ldeg, .. } => Some(*ldeg),
        }
    }

    pub fn deg(&self) -> Option<u32> {
        match self {
            Degrees::Zero => None,
            Degrees::Range { deg, .. } => Some(*deg),
        }
    }

    pub fn shift(self, by: u32) -> Degrees {
        match self {
            Degrees::Zero => Degrees::Zero,
            Degrees::Range { ldeg, deg } => Degrees::Range { ldeg: ldeg + by, deg: deg + by },
        }
    }

    pub fn union(self, other: Degrees) -> Degrees {
        match (self, other) {
            (Degrees::Zero, d) | (d, Degrees::Zero) => d,
            (Degrees::Range { ldeg: a, deg: b }, Degrees::Range { ldeg: c, deg: d }) => {
                Degrees::Range { ldeg: a.min(c), deg: b.max(d) }
            }
        }
    }

    /// `ldeg >= bound`, with the zero object always passing.
    pub fn ldeg_at_least(&self, bound: u32) -> bool {
        self.ldeg().is_none_or(|l| l >= bound)
    }
}

impl fmt::Display for Degrees {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degrees::Zero => write!(f, "ldeg = inf, deg = -inf"),
            Degrees::Range { ldeg, deg } => write!(f, "ldeg = {ldeg}, deg = {deg}"),
        }
    }
}

/// A polynomial in `y1..yn` over `field`. No stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    n: usize,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Poly {
    pub fn zero(n: usize, field: Field) -> Poly {
        assert!(n <= MAX_VARS, "at most {MAX_VARS} variables");
        Poly { n, field, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, field: Field, c: Scalar) -> Poly {
        Poly::term(n, field, c, Monomial::one())
    }

    pub fn one(n: usize, field: Field) -> Poly {
        Poly::constant(n, field, field.one())
    }

    /// The variable `y_{i+1}` (zero-based index `i`).
    pub fn var(n: usize, field: Field, i: usize) -> Poly {
        assert!(i < n, "variable index out of range");
        Poly::term(n, field, field.one(), Monomial::var(i))
    }

    pub fn term(n: usize, field: Field, c: Scalar, m: Monomial) -> Poly {
        assert!(field.owns(&c), "coefficient from a different field");
        debug_assert!(m.exps[n..].iter().all(|&e| e == 0));
        let mut p = Poly::zero(n, field);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn degrees(&self) -> Degrees {
        let mut it = self.terms.keys().map(Monomial::total_degree);
        match it.next() {
            None => Degrees::Zero,
            Some(first) => {
                let (lo, hi) = it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d)));
                Degrees::Range { ldeg: lo, deg: hi }
            }
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n, self.field);
        }
        Poly {
            n: self.n,
            field: self.field,
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            n: self.n,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.checked_mul(m).expect("exponent overflow"), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.n, self.field);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn contains_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(i) > 0)
    }

    /// Unique decomposition `self = y_i * q + r` with `r` free of `y_i`.
    pub fn split_by_variable(&self, i: usize) -> (Poly, Poly) {
        let mut q = Poly::zero(self.n, self.field);
        let mut r = Poly::zero(self.n, self.field);
        let yi = Monomial::var(i);
        for (m, c) in &self.terms {
            match m.quotient(&yi) {
                Some(rest) => {
                    q.terms.insert(rest, c.clone());
                }
                None => {
                    r.terms.insert(*m, c.clone());
                }
            }
        }
        (q, r)
    }

    /// Terms of total degree at most `max`.
    pub fn truncated(&self, max: u32) -> Poly {
        Poly {
            n: self.n,
            field: self.field,
            terms: self.terms.iter().filter(|(m, _)| m.total_degree() <= max).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// `(self * other).truncated(max)` without forming the discarded terms.
    pub fn mul_truncated(&self, other: &Poly, max: u32) -> Poly {
        assert_compatible(self, other);
        let mut out = Poly::zero(self.n, self.field);
        for (ma, ca) in &self.terms {
            let da = ma.total_degree();
            if da > max {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.total_degree() <= max {
                    out.add_term(ma.checked_mul(mb).expect("exponent overflow"), &(ca * cb));
                }
            }
        }
        out
    }

    /// Homogeneous component of total degree `k`.
    pub fn homogeneous_part(&self, k: u32) -> Poly {
        Poly {
            n: self.n,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == k)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Renames `y_k` to `y_{perm[k]}`.
    pub fn permute_vars(&self, perm: &[usize]) -> Poly {
        assert_eq!(perm.len(), self.n);
        Poly {
            n: self.n,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.permuted(perm), c.clone())).collect(),
        }
    }

    /// Simultaneous substitution `y_i -> images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.n {
            return Err(Error::Dimension(format!(
                "substitution needs {} images, got {}",
                self.n,
                images.len()
            )));
        }
        let (n, field) = images
            .first()
            .map(|p| (p.n, p.field))
            .unwrap_or((self.n, self.field));
        if images.iter().any(|p| p.n != n || p.field != field) || field != self.field {
            return Err(Error::Dimension("substitution images disagree in n or field".into()));
        }
        Ok(self.substitute_unchecked(images))
    }

    pub(crate) fn substitute_unchecked(&self, images: &[Poly]) -> Poly {
        let target_n = images.first().map_or(self.n, |p| p.n);
        let mut powers: Vec<Vec<Poly>> = vec![Vec::new(); self.n];
        let mut out = Poly::zero(target_n, self.field);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target_n, self.field, c.clone());
            for (i, cache) in powers.iter_mut().enumerate() {
                let e = m.exponent(i) as usize;
                if e == 0 {
                    continue;
                }
                if cache.is_empty() {
                    cache.push(Poly::one(target_n, self.field));
                }
                while cache.len() <= e {
                    let next = &cache[cache.len() - 1] * &images[i];
                    cache.push(next);
                }
                t = &t * &cache[e];
            }
            out = &out + &t;
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading_term()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut q = Poly::zero(self.n, self.field);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.quotient(lm)?;
            let qc = c * &lc_inv;
            q.add_term(qm, &qc);
            let sub = d.mul_monomial(&qm).scale(&qc);
            rem = &rem - &sub;
        }
        Some(q)
    }

    fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.n != other.n || self.field != other.field {
            return Err(Error::Dimension(format!(
                "polynomials over (n = {}, {}) and (n = {}, {})",
                self.n, self.field, other.n, other.field
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        Ok(self * other)
    }
}

fn assert_compatible(a: &Poly, b: &Poly) {
    assert!(a.n == b.n && a.field == b.field, "polynomial arithmetic across different rings");
}

impl<'a> Add for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        assert_compatible(self, rhs);
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(*m, c);
        }
        big
    }
}

impl<'a> Sub for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        assert_compatible(self, rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, &-c);
        }
        out
    }
}

impl<'a> Mul for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        assert_compatible(self, rhs);
        let mut out = Poly::zero(self.n, self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.checked_mul(mb).expect("exponent overflow");
                out.add_term(m, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            n: self.n,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub(crate) fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "y{}", i + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Writes `c*m` as a signed summand. `first` suppresses the leading ` + `.
pub(crate) fn write_signed_term(
    f: &mut fmt::Formatter<'_>,
    c: &Scalar,
    first: bool,
    body: &dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result,
    body_is_empty: bool,
) -> fmt::Result {
    let negative = c.is_negative();
    let mag = c.abs();
    match (first, negative) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if body_is_empty {
        write!(f, "{mag}")
    } else if mag.is_one() {
        body(f)
    } else {
        write!(f, "{mag}*")?;
        body(f)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let m = *m;
            write_signed_term(f, c, k == 0, &|f| write_monomial(f, &m), m.total_degree() == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}
