use super::MagnusElement;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::Poly;

/// Expression tree for elements of `M_n`. Generator indices are zero-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieExpr {
    Generator(usize),
    Bracket(Box<LieExpr>, Box<LieExpr>),
    Scale(Scalar, Box<LieExpr>),
    Sum(Vec<LieExpr>),
    /// A commutator-valued subexpression times a polynomial in `y1..yn`.
    ModuleScale(Box<LieExpr>, Poly),
}

impl LieExpr {
    pub fn gen(i: usize) -> LieExpr {
        LieExpr::Generator(i)
    }

    pub fn bracket(a: LieExpr, b: LieExpr) -> LieExpr {
        LieExpr::Bracket(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, n: usize, field: Field) -> Result<MagnusElement> {
        super::check_n(n)?;
        match self {
            LieExpr::Generator(i) => {
                if *i >= n {
                    return Err(Error::IndexOutOfRange { index: i + 1, n });
                }
                Ok(MagnusElement::generator(n, field, *i))
            }
            LieExpr::Bracket(a, b) => a.eval(n, field)?.bracket(&b.eval(n, field)?),
            LieExpr::Scale(c, e) => {
                if c.field() != field {
                    return Err(Error::Dimension("scalar from a different field".into()));
                }
                Ok(e.eval(n, field)?.scale(c))
            }
            LieExpr::Sum(items) => items
                .iter()
                .try_fold(MagnusElement::zero(n, field), |acc, e| Ok(&acc + &e.eval(n, field)?)),
            LieExpr::ModuleScale(e, u) => e.eval(n, field)?.module_scale(u),
        }
    }
}
