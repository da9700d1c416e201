//! Square matrices over `U = K[y1..yn]` and over `K`.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::Poly;

/// A square matrix of polynomials, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    field: Field,
    rows: Vec<Vec<Poly>>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<PolyMatrix> {
        let size = rows.len();
        if size == 0 || rows.iter().any(|r| r.len() != size) {
            return Err(Error::Dimension("matrix must be square and nonempty".into()));
        }
        let n = rows[0][0].n();
        let field = rows[0][0].field();
        if rows.iter().flatten().any(|p| p.n() != n || p.field() != field) {
            return Err(Error::Dimension("matrix entries disagree in n or field".into()));
        }
        Ok(PolyMatrix { n, field, rows })
    }

    /// Builds the matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<Poly>]) -> Result<PolyMatrix> {
        let size = columns.len();
        let rows = (0..size)
            .map(|i| columns.iter().map(|c| c.get(i).cloned()).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Dimension("ragged columns".into()))?;
        PolyMatrix::from_rows(rows)
    }

    pub fn identity(size: usize, n: usize, field: Field) -> PolyMatrix {
        let rows = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| if i == j { Poly::one(n, field) } else { Poly::zero(n, field) })
                    .collect()
            })
            .collect();
        PolyMatrix { n, field, rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.rows
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| {
            r.iter().enumerate().all(|(j, p)| if i == j { p.is_constant() && p.constant_term().is_one() } else { p.is_zero() })
        })
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.size() != other.size() || self.n != other.n || self.field != other.field {
            return Err(Error::Dimension("matrix product of incompatible matrices".into()));
        }
        let s = self.size();
        let rows = (0..s)
            .map(|i| {
                (0..s)
                    .map(|j| {
                        (0..s).fold(Poly::zero(self.n, self.field), |acc, k| {
                            if self.rows[i][k].is_zero() || other.rows[k][j].is_zero() {
                                acc
                            } else {
                                &acc + &(&self.rows[i][k] * &other.rows[k][j])
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(PolyMatrix { n: self.n, field: self.field, rows })
    }

    fn mul_truncated(&self, other: &PolyMatrix, max: u32) -> PolyMatrix {
        let s = self.size();
        let rows = (0..s)
            .map(|i| {
                (0..s)
                    .map(|j| {
                        (0..s).fold(Poly::zero(self.n, self.field), |acc, k| {
                            &acc + &self.rows[i][k].mul_truncated(&other.rows[k][j], max)
                        })
                    })
                    .collect()
            })
            .collect();
        PolyMatrix { n: self.n, field: self.field, rows }
    }

    fn max_degree(&self) -> u32 {
        self.rows.iter().flatten().filter_map(|p| p.degrees().deg()).max().unwrap_or(0)
    }

    /// Polynomial inverse of a matrix congruent to `I` modulo the
    /// augmentation ideal, by Newton iteration on truncated series.
    ///
    /// Any polynomial inverse is `adj / det` with constant `det`, so its
    /// degree is at most `(size - 1) * max_degree`; past that precision the
    /// series either equals the inverse or no inverse exists.
    pub fn inverse_unipotent(&self) -> Option<PolyMatrix> {
        let s = self.size();
        let one = PolyMatrix::identity(s, self.n, self.field);
        let constant_is_one = self.rows.iter().enumerate().all(|(i, r)| {
            r.iter().enumerate().all(|(j, p)| p.constant_term() == one.rows[i][j].constant_term())
        });
        if !constant_is_one {
            return None;
        }
        let bound = (s as u32).saturating_sub(1) * self.max_degree();
        let mut x = one.clone();
        let mut precision = 0u32;
        while precision < bound {
            precision = (2 * precision + 1).min(bound);
            // x <- x (2I - A x)
            let ax = self.mul_truncated(&x, precision);
            let mut e = ax;
            for (i, row) in e.rows.iter_mut().enumerate() {
                for (j, p) in row.iter_mut().enumerate() {
                    *p = if i == j { &Poly::one(self.n, self.field) - p } else { -&*p };
                }
            }
            let correction = x.mul_truncated(&e, precision);
            x = PolyMatrix { n: self.n, field: self.field, rows: x.rows.iter().zip(&correction.rows).map(|(a, b)| a.iter().zip(b).map(|(p, q)| p + q).collect()).collect() };
        }
        let check = self.mul(&x).expect("same shape");
        check.is_identity().then_some(x)
    }

    /// Entrywise substitution `y_k -> images[k]`.
    pub fn substitute(&self, images: &[Poly]) -> Result<PolyMatrix> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|p| p.substitute(images)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMatrix { n: self.n, field: self.field, rows })
    }

    pub fn determinant(&self) -> Poly {
        let mut a = self.rows.clone();
        let s = a.len();
        let mut sign_negative = false;
        let mut prev = Poly::one(self.n, self.field);
        for k in 0..s {
            let Some(p) = (k..s).find(|&r| !a[r][k].is_zero()) else {
                return Poly::zero(self.n, self.field);
            };
            if p != k {
                a.swap(p, k);
                sign_negative = !sign_negative;
            }
            for i in k + 1..s {
                for j in k + 1..s {
                    let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev).expect("Bareiss step divides exactly");
                }
                a[i][k] = Poly::zero(self.n, self.field);
            }
            prev = a[k][k].clone();
        }
        if sign_negative {
            -&prev
        } else {
            prev
        }
    }

    /// `(det, adj)` with `self * adj = det * I`, by fraction-free
    /// Gauss-Jordan elimination on `[self | I]`.
    pub fn adjugate(&self) -> (Poly, PolyMatrix) {
        let s = self.size();
        let zero = Poly::zero(self.n, self.field);
        let mut a: Vec<Vec<Poly>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.clone();
                row.extend((0..s).map(|j| if i == j { Poly::one(self.n, self.field) } else { zero.clone() }));
                row
            })
            .collect();
        let mut sign_negative = false;
        let mut prev = Poly::one(self.n, self.field);
        for k in 0..s {
            let Some(p) = (k..s).find(|&r| !a[r][k].is_zero()) else {
                // singular: fall back to cofactors
                return (zero, self.adjugate_by_cofactors());
            };
            if p != k {
                a.swap(p, k);
                sign_negative = !sign_negative;
            }
            let pivot_row = a[k].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == k {
                    continue;
                }
                let factor = row[k].clone();
                for j in 0..2 * s {
                    if j == k {
                        continue;
                    }
                    let num = &(&pivot_row[k] * &row[j]) - &(&factor * &pivot_row[j]);
                    row[j] = num.div_exact(&prev).expect("fraction-free step divides exactly");
                }
                row[k] = zero.clone();
            }
            // pivot row already carries the new common factor a[k][k]
            prev = a[k][k].clone();
        }
        // now a = [det' I | adj'] with det' = ±det
        let flip = |p: Poly| if sign_negative { -&p } else { p };
        let det = flip(prev);
        let adj = a.into_iter().map(|r| r[s..].iter().cloned().map(|p| if sign_negative { -&p } else { p }).collect()).collect();
        (det, PolyMatrix { n: self.n, field: self.field, rows: adj })
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> PolyMatrix {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip_row)
            .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != skip_col).map(|(_, p)| p.clone()).collect())
            .collect();
        PolyMatrix { n: self.n, field: self.field, rows }
    }

    fn adjugate_by_cofactors(&self) -> PolyMatrix {
        let s = self.size();
        if s == 1 {
            return PolyMatrix::identity(1, self.n, self.field);
        }
        let rows = (0..s)
            .map(|i| {
                (0..s)
                    .map(|j| {
                        let d = self.minor(j, i).determinant();
                        if (i + j) % 2 == 1 {
                            -&d
                        } else {
                            d
                        }
                    })
                    .collect()
            })
            .collect();
        PolyMatrix { n: self.n, field: self.field, rows }
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|p| p.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Determinant and inverse of a scalar matrix by Gaussian elimination.
pub(crate) fn scalar_inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let s = m.len();
    let field = m[0][0].field();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..s).map(|j| if i == j { field.one() } else { field.zero() }));
            row
        })
        .collect();
    for k in 0..s {
        let p = (k..s).find(|&r| !a[r][k].is_zero())?;
        a.swap(p, k);
        let inv = a[k][k].inv()?;
        for x in a[k].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let factor = row[k].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &(&factor * p);
            }
        }
    }
    Some(a.into_iter().map(|r| r[s..].to_vec()).collect())
}

pub(crate) fn scalar_determinant(m: &[Vec<Scalar>]) -> Scalar {
    let s = m.len();
    let field = m[0][0].field();
    let mut a = m.to_vec();
    let mut det = field.one();
    for k in 0..s {
        let Some(p) = (k..s).find(|&r| !a[r][k].is_zero()) else {
            return field.zero();
        };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        det = &det * &a[k][k];
        let inv = a[k][k].inv().expect("nonzero pivot");
        for i in k + 1..s {
            if a[i][k].is_zero() {
                continue;
            }
            let factor = &a[i][k] * &inv;
            for j in k..s {
                let t = &factor * &a[k][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
    }
    det
}

pub(crate) fn scalar_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let s = a.len();
    let field = a[0][0].field();
    (0..s)
        .map(|i| {
            (0..s)
                .map(|j| (0..s).fold(field.zero(), |acc, k| &acc + &(&a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    fn y(i: usize) -> Poly {
        Poly::var(4, q(), i - 1)
    }

    fn c(v: i64) -> Poly {
        Poly::constant(4, q(), q().from_i64(v))
    }

    fn cofactor_det(m: &PolyMatrix) -> Poly {
        // Laplace expansion along the first row, independent of elimination
        let s = m.size();
        if s == 1 {
            return m.get(0, 0).clone();
        }
        let mut acc = Poly::zero(4, q());
        for j in 0..s {
            let term = m.get(0, j) * &cofactor_det(&m.minor(0, j));
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    fn sample() -> PolyMatrix {
        PolyMatrix::from_rows(vec![
            vec![&c(1) + &y(1), y(2), c(0)],
            vec![y(3), c(2), &y(1) * &y(2)],
            vec![c(0), &y(4) - &c(1), y(3)],
        ])
        .unwrap()
    }

    #[test]
    fn determinant_matches_laplace() {
        let m = sample();
        assert_eq!(m.determinant(), cofactor_det(&m));
    }

    #[test]
    fn non_unit_determinant() {
        // (x1 + [x2,x1], x2, ...) has first column (1 - y2, y1, 0, 0)
        let mut rows = PolyMatrix::identity(4, 4, q()).rows().to_vec();
        rows[0][0] = &c(1) - &y(2);
        rows[1][0] = y(1);
        let m = PolyMatrix::from_rows(rows).unwrap();
        assert_eq!(m.determinant(), &c(1) - &y(2));
    }

    #[test]
    fn adjugate_inverts_up_to_determinant() {
        let m = sample();
        let (det, adj) = m.adjugate();
        assert_eq!(det, m.determinant());
        let prod = m.mul(&adj).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { det.clone() } else { Poly::zero(4, q()) };
                assert_eq!(prod.get(i, j), &want);
            }
        }
    }

    #[test]
    fn adjugate_with_zero_leading_pivot() {
        let m = PolyMatrix::from_rows(vec![
            vec![c(0), c(1), y(1)],
            vec![c(1), y(2), c(0)],
            vec![y(3), c(0), c(1)],
        ])
        .unwrap();
        let (det, adj) = m.adjugate();
        assert_eq!(det, cofactor_det(&m));
        let prod = adj.mul(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { det.clone() } else { Poly::zero(4, q()) };
                assert_eq!(prod.get(i, j), &want);
            }
        }
    }

    #[test]
    fn unipotent_inverse() {
        // I + E_{12} y1 y3 + E_{23} y2: det 1, inverse has a degree-3 entry
        let mut rows = PolyMatrix::identity(3, 4, q()).rows().to_vec();
        rows[0][1] = &y(1) * &y(3);
        rows[1][2] = y(2);
        let m = PolyMatrix::from_rows(rows).unwrap();
        let inv = m.inverse_unipotent().unwrap();
        let (det, adj) = m.adjugate();
        assert_eq!(det, c(1));
        assert_eq!(inv, adj);
        assert_eq!(inv.get(0, 2), &(&(&y(1) * &y(3)) * &y(2)));
        let singular = PolyMatrix::from_rows(vec![
            vec![&c(1) - &y(2), c(0)],
            vec![y(1), c(1)],
        ])
        .unwrap();
        assert!(singular.inverse_unipotent().is_none());
        assert!(sample().inverse_unipotent().is_none());
    }

    #[test]
    fn scalar_inverse_and_determinant() {
        let f = Field::prime(5).unwrap();
        let m: Vec<Vec<Scalar>> = [[0, 1, 2], [1, 0, 3], [4, -3, 8]]
            .iter()
            .map(|r| r.iter().map(|&v| f.from_i64(v)).collect())
            .collect();
        let inv = scalar_inverse(&m).unwrap();
        let id = scalar_mul(&m, &inv);
        for (i, r) in id.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
                assert_eq!(x.is_zero(), i != j);
            }
        }
        // det = 0*(0-(-9)) - 1*(8-12) + 2*(-3-0) = -2
        assert_eq!(scalar_determinant(&m), f.from_i64(-2));
        let singular = vec![vec![f.one(), f.from_i64(2)], vec![f.from_i64(2), f.from_i64(4)]];
        assert!(scalar_inverse(&singular).is_none());
        assert!(scalar_determinant(&singular).is_zero());
    }
}
