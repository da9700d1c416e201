//! JSON forms of elements, endomorphisms and generator words.
//!
//! Indices are one-based and scalars are strings (`"-3/2"`, or canonical
//! residues for prime fields), so every value round-trips exactly. The
//! shape of word documents is pinned by `word.schema.json`.

use serde::{Deserialize, Serialize};

use crate::decomp::{Alphabet, GeneratorWord, Letter, LetterKind};
use crate::endo::{Endomorphism, LinearMap};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::magnus::{to_basis, BasisCombination, BasisTerm, MagnusElement};
use crate::parse::parse_scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: String,
    pub head: usize,
    pub tail: Vec<usize>,
}

/// An element as its linear part and right-normed basis terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementJson {
    pub linear: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndomorphismJson {
    pub n: usize,
    pub field: String,
    pub images: Vec<ElementJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LetterJson {
    Elementary { row: usize, scalar: String, element: ElementJson, inverted: bool },
    Linear { matrix: Vec<Vec<String>>, inverted: bool },
    Chein { row: usize, element: ElementJson, inverted: bool },
    CubicResidue { row: usize, indices: [usize; 2], scalar: String, inverted: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordJson {
    pub n: usize,
    pub field: String,
    pub alphabet: String,
    pub letters: Vec<LetterJson>,
}

fn scalar_in(s: &str, field: Field) -> Result<Scalar> {
    parse_scalar(s, field).map_err(|e| Error::Domain(format!("bad scalar {s:?}: {e}")))
}

fn index_in(k: usize, n: usize) -> Result<usize> {
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, n });
    }
    Ok(k - 1)
}

pub fn element_to_json(f: &MagnusElement) -> ElementJson {
    let b = to_basis(f);
    ElementJson {
        linear: b.linear.iter().map(Scalar::to_string).collect(),
        terms: b
            .terms
            .iter()
            .map(|t| TermJson {
                coeff: t.coeff.to_string(),
                head: t.head + 1,
                tail: t.tail.iter().map(|i| i + 1).collect(),
            })
            .collect(),
    }
}

pub fn element_from_json(j: &ElementJson, n: usize, field: Field) -> Result<MagnusElement> {
    if j.linear.len() != n {
        return Err(Error::Dimension(format!("linear part has {} entries, expected {n}", j.linear.len())));
    }
    let linear = j.linear.iter().map(|s| scalar_in(s, field)).collect::<Result<Vec<_>>>()?;
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        let term = BasisTerm {
            coeff: scalar_in(&t.coeff, field)?,
            head: index_in(t.head, n)?,
            tail: t.tail.iter().map(|&k| index_in(k, n)).collect::<Result<_>>()?,
        };
        if !term.is_well_formed() {
            return Err(Error::Domain(format!(
                "basis term needs head > tail[0] and a non-decreasing tail, got {} / {:?}",
                t.head, t.tail
            )));
        }
        terms.push(term);
    }
    Ok(BasisCombination { n, field, linear, terms }.evaluate())
}

pub fn endomorphism_to_json(phi: &Endomorphism) -> EndomorphismJson {
    EndomorphismJson {
        n: phi.n(),
        field: phi.field().to_string(),
        images: phi.images().iter().map(element_to_json).collect(),
    }
}

pub fn endomorphism_from_json(j: &EndomorphismJson) -> Result<Endomorphism> {
    let field = Field::parse_spec(&j.field)?;
    if j.images.len() != j.n {
        return Err(Error::Dimension(format!("{} images for n = {}", j.images.len(), j.n)));
    }
    let images = j.images.iter().map(|e| element_from_json(e, j.n, field)).collect::<Result<Vec<_>>>()?;
    Endomorphism::from_images(images)
}

fn letter_to_json(l: &Letter) -> LetterJson {
    let inverted = l.inverted;
    match &l.kind {
        LetterKind::Elementary { row, alpha, f } => LetterJson::Elementary {
            row: row + 1,
            scalar: alpha.to_string(),
            element: element_to_json(f),
            inverted,
        },
        LetterKind::Linear(m) => LetterJson::Linear {
            matrix: m.matrix().iter().map(|r| r.iter().map(Scalar::to_string).collect()).collect(),
            inverted,
        },
        LetterKind::Chein { row, f } => LetterJson::Chein { row: row + 1, element: element_to_json(f), inverted },
        LetterKind::CubicResidue { row, s, t, alpha } => LetterJson::CubicResidue {
            row: row + 1,
            indices: [s + 1, t + 1],
            scalar: alpha.to_string(),
            inverted,
        },
    }
}

fn letter_from_json(j: &LetterJson, n: usize, field: Field) -> Result<Letter> {
    let (letter, inverted) = match j {
        LetterJson::Elementary { row, scalar, element, inverted } => (
            Letter::elementary(index_in(*row, n)?, scalar_in(scalar, field)?, element_from_json(element, n, field)?)?,
            *inverted,
        ),
        LetterJson::Linear { matrix, inverted } => {
            if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
                return Err(Error::Dimension(format!("linear letter must be {n}x{n}")));
            }
            let rows = matrix
                .iter()
                .map(|r| r.iter().map(|s| scalar_in(s, field)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            (Letter::linear(LinearMap::new(rows)?)?, *inverted)
        }
        LetterJson::Chein { row, element, inverted } => {
            (Letter::chein(index_in(*row, n)?, element_from_json(element, n, field)?)?, *inverted)
        }
        LetterJson::CubicResidue { row, indices, scalar, inverted } => {
            let l = Letter::cubic_residue(
                index_in(*row, n)?,
                index_in(indices[0], n)?,
                index_in(indices[1], n)?,
                scalar_in(scalar, field)?,
            )?;
            (l, *inverted)
        }
    };
    Ok(if inverted { letter.inverse() } else { letter })
}

pub fn word_to_json(w: &GeneratorWord) -> WordJson {
    WordJson {
        n: w.n(),
        field: w.field().to_string(),
        alphabet: w.alphabet().to_string(),
        letters: w.letters().iter().map(letter_to_json).collect(),
    }
}

pub fn word_from_json(j: &WordJson) -> Result<GeneratorWord> {
    let field = Field::parse_spec(&j.field)?;
    let alphabet = match j.alphabet.as_str() {
        "tame" => Alphabet::Tame,
        "almost_tame" => Alphabet::AlmostTame,
        other => return Err(Error::Domain(format!("unknown alphabet {other:?}"))),
    };
    crate::magnus::check_n(j.n)?;
    let letters = j.letters.iter().map(|l| letter_from_json(l, j.n, field)).collect::<Result<Vec<_>>>()?;
    GeneratorWord::from_letters(j.n, field, alphabet, letters)
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), column: e.column(), message: e.to_string() }
}

pub fn word_to_string(w: &GeneratorWord) -> String {
    serde_json::to_string_pretty(&word_to_json(w)).expect("plain data serializes")
}

pub fn word_from_str(s: &str) -> Result<GeneratorWord> {
    word_from_json(&serde_json::from_str(s).map_err(json_error)?)
}

pub fn endomorphism_to_string(phi: &Endomorphism) -> String {
    serde_json::to_string_pretty(&endomorphism_to_json(phi)).expect("plain data serializes")
}

pub fn endomorphism_from_str(s: &str) -> Result<Endomorphism> {
    endomorphism_from_json(&serde_json::from_str(s).map_err(json_error)?)
}
