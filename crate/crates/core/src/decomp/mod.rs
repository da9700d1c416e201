//! Decomposition of automorphisms into certified generator words.
//!
//! Every public entry point returns a word whose product has been recomputed
//! and compared with the target; a mismatch is reported as
//! [`Error::Certification`] and never as a word.

mod engine;
mod linear;
#[cfg(test)]
mod tests;
mod word;

use std::sync::OnceLock;

use engine::Engine;
pub use linear::{linear_to_elementary, permutation_to_elementary};
pub use word::{verify_word, word_evaluate, Alphabet, GeneratorWord, Letter, LetterKind};
pub(crate) use word::simplify_letters;

use crate::endo::{a_map_unchecked, b_map_unchecked, chein_unchecked, d_map_unchecked, exponential_unchecked, is_chein_valid, Endomorphism};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::magnus::{check_n, MagnusElement};
use crate::poly::{Monomial, Poly};

/// Decomposition mode; the same two alphabets as [`Alphabet`].
pub type Mode = Alphabet;

/// The rank and field a decomposition runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HypothesisContext {
    pub n: usize,
    pub field: Field,
}

impl HypothesisContext {
    pub fn new(n: usize, field: Field) -> Result<HypothesisContext> {
        check_n(n)?;
        Ok(HypothesisContext { n, field })
    }

    /// `n >= 5`, or `n = 4` away from characteristic 3.
    pub fn tame_admissible(&self) -> bool {
        self.n >= 5 || (self.n == 4 && self.field.characteristic() != 3)
    }

    pub fn almost_tame_admissible(&self) -> bool {
        self.n >= 4
    }

    pub fn admits(&self, mode: Mode) -> bool {
        match mode {
            Mode::Tame => self.tame_admissible(),
            Mode::AlmostTame => self.almost_tame_admissible(),
        }
    }

    fn require(&self, mode: Mode) -> Result<()> {
        if self.admits(mode) {
            return Ok(());
        }
        Err(Error::Hypothesis(match mode {
            Mode::Tame => format!(
                "tame decomposition needs n >= 5, or n = 4 with characteristic != 3 (got n = {}, field {})",
                self.n, self.field
            ),
            Mode::AlmostTame => format!("almost tame decomposition needs n >= 4 (got n = {})", self.n),
        }))
    }

    fn check_poly(&self, p: &Poly) -> Result<()> {
        if p.n() != self.n || p.field() != self.field {
            return Err(Error::Dimension(format!(
                "polynomial over n = {}, {} used in context n = {}, {}",
                p.n(),
                p.field(),
                self.n,
                self.field
            )));
        }
        Ok(())
    }

    fn check_element(&self, f: &MagnusElement) -> Result<()> {
        if f.n() != self.n || f.field() != self.field {
            return Err(Error::Dimension("element outside the context's ring".into()));
        }
        Ok(())
    }
}

/// A certified word and the deepest recursion reached while building it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub word: GeneratorWord,
    pub depth: usize,
}

/// The commutator convention, checked once: the four-letter word for
/// `C(y1 y2)` in rank 4 over the rationals must multiply to `C(y1 y2)`.
fn orientation_ok() -> Result<()> {
    static CHECK: OnceLock<bool> = OnceLock::new();
    let ok = *CHECK.get_or_init(|| {
        let ctx = HypothesisContext { n: 4, field: Field::Rationals };
        let mut eng = Engine::new(ctx, Mode::Tame);
        eng.chein_monomial(&Field::Rationals.one(), &[1, 1, 0, 0]).is_ok()
    });
    if ok {
        Ok(())
    } else {
        Err(Error::Certification("commutator convention check failed; refusing to decompose".into()))
    }
}

fn run(
    ctx: HypothesisContext,
    mode: Mode,
    target: impl FnOnce() -> Endomorphism,
    build: impl FnOnce(&mut Engine) -> Result<Vec<Letter>>,
) -> Result<Decomposition> {
    orientation_ok()?;
    let mut eng = Engine::new(ctx, mode);
    let letters = simplify_letters(&build(&mut eng)?);
    let word = GeneratorWord::from_letters_unchecked(ctx.n, ctx.field, mode, letters);
    if !word.respects_alphabet() {
        return Err(Error::Certification("tame decomposition produced a non-tame letter".into()));
    }
    if !word.verify(&target()) {
        return Err(Error::Certification("simplified word does not multiply to the target".into()));
    }
    Ok(Decomposition { word, depth: eng.max_depth })
}

/// `C(gamma y^e)` as a tame word; needs total degree at least 2.
///
/// Needs `n >= 4`. In rank 4 and characteristic 3 only the monomials that
/// reach the division by 3 fail, with [`Error::InadmissibleContext`].
pub fn decompose_chein_monomial(gamma: &Scalar, exponents: &Monomial, ctx: HypothesisContext) -> Result<Decomposition> {
    ctx.require(Mode::AlmostTame)?;
    if gamma.field() != ctx.field {
        return Err(Error::Dimension("scalar from a different field".into()));
    }
    if gamma.is_zero() {
        return Err(Error::Domain("C(a) for a monomial needs a nonzero coefficient".into()));
    }
    let degree = exponents.total_degree();
    if degree < 2 {
        return Err(Error::Hypothesis(format!("monomial of degree {degree} < 2")));
    }
    let exps = exponents.exponents(ctx.n);
    if exps.iter().sum::<u32>() != degree {
        return Err(Error::IndexOutOfRange { index: exponents.first_variable().map_or(0, |i| i + 1), n: ctx.n });
    }
    let a = Poly::term(ctx.n, ctx.field, gamma.clone(), *exponents);
    run(
        ctx,
        Mode::Tame,
        || chein_unchecked(0, &crate::endo::comm(1, 2, &a)),
        |eng| eng.chein_monomial(gamma, &exps),
    )
}

/// `C(a) = (x1 + [x2,x3] a, x2, ..., xn)` for an arbitrary polynomial `a`.
pub fn decompose_chein(a: &Poly, mode: Mode, ctx: HypothesisContext) -> Result<Decomposition> {
    ctx.check_poly(a)?;
    decompose_one_row(0, &crate::endo::comm(1, 2, a), mode, ctx)
}

/// The one-row map `x_i -> x_i + f`.
pub fn decompose_one_row(i: usize, f: &MagnusElement, mode: Mode, ctx: HypothesisContext) -> Result<Decomposition> {
    ctx.require(mode)?;
    ctx.check_element(f)?;
    if i >= ctx.n {
        return Err(Error::IndexOutOfRange { index: i + 1, n: ctx.n });
    }
    if !is_chein_valid(i, f) {
        return Err(Error::Domain(format!("not valid one-row data for row {}", i + 1)));
    }
    run(ctx, mode, || chein_unchecked(i, f), |eng| eng.one_row(i, f))
}

fn require_ldeg(what: &str, ldeg: Option<u32>, min: u32, mode: Mode) -> Result<()> {
    match ldeg {
        Some(d) if d < min => Err(Error::Hypothesis(format!(
            "{what} in {mode} mode needs lower degree >= {min}, got {d}"
        ))),
        _ => Ok(()),
    }
}

/// `D(a)`; tame mode needs `ldeg(a) >= 2`, almost tame mode `ldeg(a) >= 1`.
pub fn decompose_d(a: &Poly, mode: Mode, ctx: HypothesisContext) -> Result<Decomposition> {
    ctx.require(mode)?;
    ctx.check_poly(a)?;
    let min = if mode == Mode::Tame { 2 } else { 1 };
    require_ldeg("D(a)", a.degrees().ldeg(), min, mode)?;
    run(ctx, mode, || d_map_unchecked(a), |eng| eng.d_map(a))
}

/// `E(m)`; tame mode needs `ldeg(m) >= 4`, almost tame mode `ldeg(m) >= 3`.
pub fn decompose_exponential(m: &MagnusElement, mode: Mode, ctx: HypothesisContext) -> Result<Decomposition> {
    ctx.require(mode)?;
    ctx.check_element(m)?;
    if !m.is_derived() {
        return Err(Error::Domain("exponential needs an element of [M_n, M_n]".into()));
    }
    let min = if mode == Mode::Tame { 4 } else { 3 };
    require_ldeg("E(m)", m.degrees().ldeg(), min, mode)?;
    run(ctx, mode, || exponential_unchecked(m), |eng| eng.exponential(m))
}

/// `A(h,g)` as an almost tame word.
pub fn reduce_a(h: &Poly, g: &Poly, ctx: HypothesisContext) -> Result<Decomposition> {
    ctx.require(Mode::AlmostTame)?;
    ctx.check_poly(h)?;
    ctx.check_poly(g)?;
    run(ctx, Mode::AlmostTame, || a_map_unchecked(h, g), |eng| eng.a_map(h, g))
}

/// `B(h,f,g)` as an almost tame word.
pub fn decompose_b(h: &Poly, f: &Poly, g: &Poly, ctx: HypothesisContext) -> Result<Decomposition> {
    ctx.require(Mode::AlmostTame)?;
    for p in [h, f, g] {
        ctx.check_poly(p)?;
    }
    run(ctx, Mode::AlmostTame, || b_map_unchecked(h, f, g), |eng| eng.b_map(h, f, g))
}
