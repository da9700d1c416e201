use std::fmt;

use crate::endo::{
    chein_unchecked, cubic_residue_unchecked, elementary_unchecked, is_chein_valid, is_elementary_valid, Endomorphism,
    LinearMap,
};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::magnus::{to_basis, MagnusElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LetterKind {
    /// `x_row -> alpha x_row + f`, `f` free of `x_row`.
    Elementary { row: usize, alpha: Scalar, f: MagnusElement },
    Linear(LinearMap),
    /// `x_row -> x_row + f`, `f` a commutator element with `df/dx_row = 0`.
    Chein { row: usize, f: MagnusElement },
    /// `x_row -> x_row + alpha [[x_s,x_t],x_row]`, stored with `s < t`.
    CubicResidue { row: usize, s: usize, t: usize, alpha: Scalar },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub kind: LetterKind,
    pub inverted: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    Tame,
    AlmostTame,
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alphabet::Tame => "tame",
            Alphabet::AlmostTame => "almost_tame",
        })
    }
}

impl Letter {
    fn plain(kind: LetterKind) -> Letter {
        Letter { kind, inverted: false }
    }

    pub fn elementary(row: usize, alpha: Scalar, f: MagnusElement) -> Result<Letter> {
        let l = Letter::plain(LetterKind::Elementary { row, alpha, f });
        l.validate()?;
        Ok(l)
    }

    pub fn linear(map: LinearMap) -> Result<Letter> {
        let l = Letter::plain(LetterKind::Linear(map));
        l.validate()?;
        Ok(l)
    }

    pub fn chein(row: usize, f: MagnusElement) -> Result<Letter> {
        let l = Letter::plain(LetterKind::Chein { row, f });
        l.validate()?;
        Ok(l)
    }

    pub fn cubic_residue(row: usize, s: usize, t: usize, alpha: Scalar) -> Result<Letter> {
        if row == s || row == t || s == t {
            return Err(Error::Domain("cubic residue needs three distinct indices".into()));
        }
        Ok(Letter::cubic_unchecked(row, s, t, alpha))
    }

    pub(crate) fn elementary_unchecked(row: usize, alpha: Scalar, f: MagnusElement) -> Letter {
        debug_assert!(is_elementary_valid(row, &alpha, &f));
        Letter::plain(LetterKind::Elementary { row, alpha, f })
    }

    pub(crate) fn linear_unchecked(map: LinearMap) -> Letter {
        Letter::plain(LetterKind::Linear(map))
    }

    pub(crate) fn chein_unchecked(row: usize, f: MagnusElement) -> Letter {
        debug_assert!(is_chein_valid(row, &f));
        Letter::plain(LetterKind::Chein { row, f })
    }

    pub(crate) fn cubic_unchecked(row: usize, s: usize, t: usize, alpha: Scalar) -> Letter {
        let (s, t, alpha) = if s < t { (s, t, alpha) } else { (t, s, -alpha) };
        Letter::plain(LetterKind::CubicResidue { row, s, t, alpha })
    }

    /// Checks the letter against its defining constraints in rank `n`.
    pub fn validate_in(&self, n: usize, field: Field) -> Result<()> {
        let ok_index = |i: usize| if i < n { Ok(()) } else { Err(Error::IndexOutOfRange { index: i + 1, n }) };
        match &self.kind {
            LetterKind::Elementary { row, alpha, f } => {
                ok_index(*row)?;
                if f.n() != n || f.field() != field || alpha.field() != field {
                    return Err(Error::Dimension("letter payload outside the word's ring".into()));
                }
            }
            LetterKind::Chein { row, f } => {
                ok_index(*row)?;
                if f.n() != n || f.field() != field {
                    return Err(Error::Dimension("letter payload outside the word's ring".into()));
                }
            }
            LetterKind::Linear(m) => {
                if m.n() != n || m.field() != field {
                    return Err(Error::Dimension("linear letter of the wrong size".into()));
                }
            }
            LetterKind::CubicResidue { row, s, t, alpha } => {
                ok_index(*row)?;
                ok_index(*s)?;
                ok_index(*t)?;
                if alpha.field() != field {
                    return Err(Error::Dimension("letter scalar from a different field".into()));
                }
            }
        }
        self.validate()
    }

    fn validate(&self) -> Result<()> {
        match &self.kind {
            LetterKind::Elementary { row, alpha, f } => {
                if !is_elementary_valid(*row, alpha, f) {
                    return Err(Error::Domain(format!("invalid elementary letter at row {}", row + 1)));
                }
            }
            LetterKind::Chein { row, f } => {
                if !is_chein_valid(*row, f) {
                    return Err(Error::Domain(format!("invalid one-row letter at row {}", row + 1)));
                }
            }
            LetterKind::Linear(m) => {
                if m.determinant().is_zero() {
                    return Err(Error::Domain("singular linear letter".into()));
                }
            }
            LetterKind::CubicResidue { row, s, t, .. } => {
                if row == s || row == t || s == t {
                    return Err(Error::Domain("cubic residue needs three distinct indices".into()));
                }
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> Letter {
        Letter { kind: self.kind.clone(), inverted: !self.inverted }
    }

    pub fn is_tame(&self) -> bool {
        matches!(self.kind, LetterKind::Elementary { .. } | LetterKind::Linear(_))
    }

    /// The letter with `inverted` resolved; linear letters keep the flag.
    fn resolved(&self) -> Letter {
        if !self.inverted {
            return self.clone();
        }
        let kind = match &self.kind {
            LetterKind::Elementary { row, alpha, f } => {
                let inv = alpha.inv().expect("nonzero scalar");
                LetterKind::Elementary { row: *row, f: (-f).scale(&inv), alpha: inv }
            }
            LetterKind::Chein { row, f } => LetterKind::Chein { row: *row, f: -f },
            LetterKind::CubicResidue { row, s, t, alpha } => {
                LetterKind::CubicResidue { row: *row, s: *s, t: *t, alpha: -alpha }
            }
            LetterKind::Linear(_) => return self.clone(),
        };
        Letter::plain(kind)
    }

    pub fn is_identity(&self) -> bool {
        match &self.kind {
            LetterKind::Elementary { alpha, f, .. } => alpha.is_one() && f.is_zero(),
            LetterKind::Linear(m) => m.is_identity(),
            LetterKind::Chein { f, .. } => f.is_zero(),
            LetterKind::CubicResidue { alpha, .. } => alpha.is_zero(),
        }
    }

    pub fn evaluate(&self, n: usize, field: Field) -> Endomorphism {
        let r = self.resolved();
        match &r.kind {
            LetterKind::Elementary { row, alpha, f } => elementary_unchecked(*row, alpha, f),
            LetterKind::Linear(m) => {
                if r.inverted {
                    m.inverse().expect("validated letter").to_endomorphism()
                } else {
                    m.to_endomorphism()
                }
            }
            LetterKind::Chein { row, f } => chein_unchecked(*row, f),
            LetterKind::CubicResidue { row, s, t, alpha } => {
                debug_assert_eq!(alpha.field(), field);
                cubic_residue_unchecked(n, *row, *s, *t, alpha)
            }
        }
    }

    /// The product `self * next` when it is again a single letter of the
    /// same kind. `Some(None)` means the pair cancels.
    fn merge(&self, next: &Letter) -> Option<Option<Letter>> {
        if let (LetterKind::Linear(a), LetterKind::Linear(b)) = (&self.kind, &next.kind) {
            let cancels = a == b && self.inverted != next.inverted
                || !self.inverted && !next.inverted && a.compose(b).is_ok_and(|p| p.is_identity());
            return if cancels { Some(None) } else { None };
        }
        let (a, b) = (self.resolved(), next.resolved());
        let merged = match (&a.kind, &b.kind) {
            (LetterKind::Elementary { row: r1, alpha: a1, f: f1 }, LetterKind::Elementary { row: r2, alpha: a2, f: f2 })
                if r1 == r2 =>
            {
                // (a1 x + f1)(a2 x + g) = a1 a2 x + a2 f1 + f2
                Letter::plain(LetterKind::Elementary { row: *r1, alpha: a1 * a2, f: &f1.scale(a2) + f2 })
            }
            (LetterKind::Chein { row: r1, f: f1 }, LetterKind::Chein { row: r2, f: f2 }) if r1 == r2 => {
                Letter::plain(LetterKind::Chein { row: *r1, f: f1 + f2 })
            }
            (
                LetterKind::CubicResidue { row: r1, s: s1, t: t1, alpha: a1 },
                LetterKind::CubicResidue { row: r2, s: s2, t: t2, alpha: a2 },
            ) if (r1, s1, t1) == (r2, s2, t2) => {
                Letter::plain(LetterKind::CubicResidue { row: *r1, s: *s1, t: *t1, alpha: a1 + a2 })
            }
            _ => return None,
        };
        Some(if merged.is_identity() { None } else { Some(merged) })
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            LetterKind::Elementary { row, alpha, f: g } => {
                let scaled = if alpha.is_one() { String::new() } else { format!("{alpha}*") };
                write!(f, "elementary(x{} -> {}x{} + {})", row + 1, scaled, row + 1, to_basis(g))?;
            }
            LetterKind::Linear(m) => {
                let cols: Vec<String> = (0..m.n())
                    .map(|c| {
                        let col: Vec<String> = (0..m.n()).map(|r| m.matrix()[r][c].to_string()).collect();
                        format!("({})", col.join(","))
                    })
                    .collect();
                write!(f, "linear[{}]", cols.join(" "))?;
            }
            LetterKind::Chein { row, f: g } => write!(f, "one_row(x{} -> x{} + {})", row + 1, row + 1, to_basis(g))?,
            LetterKind::CubicResidue { row, s, t, alpha } => {
                let scaled = if alpha.is_one() { String::new() } else { format!("{alpha}*") };
                write!(f, "cubic(x{} -> x{} + {scaled}[[x{},x{}],x{}])", row + 1, row + 1, s + 1, t + 1, row + 1)?;
            }
        }
        if self.inverted {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

/// An ordered product of generator letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorWord {
    n: usize,
    field: Field,
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new(n: usize, field: Field, alphabet: Alphabet) -> GeneratorWord {
        GeneratorWord { n, field, alphabet, letters: Vec::new() }
    }

    /// A word from letters, checking ring, validity and alphabet.
    pub fn from_letters(n: usize, field: Field, alphabet: Alphabet, letters: Vec<Letter>) -> Result<GeneratorWord> {
        crate::magnus::check_n(n)?;
        for l in &letters {
            l.validate_in(n, field)?;
        }
        let w = GeneratorWord { n, field, alphabet, letters };
        if !w.respects_alphabet() {
            return Err(Error::Domain("tame word contains a non-tame letter".into()));
        }
        Ok(w)
    }

    pub(crate) fn from_letters_unchecked(n: usize, field: Field, alphabet: Alphabet, letters: Vec<Letter>) -> GeneratorWord {
        GeneratorWord { n, field, alphabet, letters }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn respects_alphabet(&self) -> bool {
        self.alphabet == Alphabet::AlmostTame || self.letters.iter().all(Letter::is_tame)
    }

    pub fn inverse(&self) -> GeneratorWord {
        GeneratorWord {
            n: self.n,
            field: self.field,
            alphabet: self.alphabet,
            letters: inverse_letters(&self.letters),
        }
    }

    /// Left-to-right product of the letters.
    pub fn evaluate(&self) -> Endomorphism {
        evaluate_letters(self.n, self.field, &self.letters)
    }

    pub fn verify(&self, target: &Endomorphism) -> bool {
        target.n() == self.n && target.field() == self.field && self.evaluate() == *target
    }

    /// Drops identity letters, cancels adjacent inverse pairs and merges
    /// adjacent one-row letters acting on the same row.
    pub fn simplify(&self) -> GeneratorWord {
        GeneratorWord { letters: simplify_letters(&self.letters), ..self.clone() }
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "(empty word)");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{:>4}  {}", i + 1, l)?;
        }
        Ok(())
    }
}

pub(crate) fn inverse_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(Letter::inverse).collect()
}

pub(crate) fn evaluate_letters(n: usize, field: Field, letters: &[Letter]) -> Endomorphism {
    letters
        .iter()
        .fold(Endomorphism::identity(n, field), |acc, l| acc.compose_unchecked(&l.evaluate(n, field)))
}

pub(crate) fn simplify_letters(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for l in letters {
        if l.is_identity() {
            continue;
        }
        let mut current = Some(l.clone());
        while let Some(next) = current.take() {
            match out.last().and_then(|top| top.merge(&next)) {
                Some(merged) => {
                    out.pop();
                    current = merged;
                }
                None => {
                    out.push(next);
                }
            }
        }
    }
    out
}

pub fn word_evaluate(w: &GeneratorWord) -> Endomorphism {
    w.evaluate()
}

pub fn verify_word(w: &GeneratorWord, target: &Endomorphism) -> bool {
    w.verify(target)
}
