//! Factorization of invertible linear maps into linear elementary letters.

use super::word::{GeneratorWord, Letter};
use super::Alphabet;
use crate::endo::LinearMap;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::magnus::{check_n, MagnusElement};

/// `x_i -> x_i + c x_j`.
fn transvection(n: usize, field: Field, i: usize, j: usize, c: &Scalar) -> Letter {
    Letter::elementary_unchecked(i, field.one(), MagnusElement::generator(n, field, j).scale(c))
}

/// `x_i -> alpha x_i`.
fn dilation(n: usize, field: Field, i: usize, alpha: &Scalar) -> Letter {
    Letter::elementary_unchecked(i, alpha.clone(), MagnusElement::zero(n, field))
}

/// Row reduction without row swaps. With row operations `O_1, ..., O_k`
/// satisfying `O_k ... O_1 M = I`, the word is `O_1^-1 ... O_k^-1`.
pub fn linear_to_elementary(l: &LinearMap) -> Result<GeneratorWord> {
    let (n, field) = (l.n(), l.field());
    check_n(n)?;
    let mut m: Vec<Vec<Scalar>> = l.matrix().to_vec();
    let mut letters = Vec::new();
    for k in 0..n {
        if m[k][k].is_zero() {
            let r = (k + 1..n)
                .find(|&r| !m[r][k].is_zero())
                .ok_or_else(|| Error::Domain("singular linear map".into()))?;
            // row k += row r
            let src = m[r].clone();
            for (a, b) in m[k].iter_mut().zip(&src) {
                *a = &*a + b;
            }
            letters.push(transvection(n, field, r, k, &-&field.one()));
        }
        let pivot = m[k][k].clone();
        if !pivot.is_one() {
            let inv = pivot.inv().expect("nonzero pivot");
            for a in m[k].iter_mut() {
                *a = &*a * &inv;
            }
            letters.push(dilation(n, field, k, &pivot));
        }
        for r in 0..n {
            if r == k || m[r][k].is_zero() {
                continue;
            }
            // row r -= c row k
            let c = m[r][k].clone();
            let src = m[k].clone();
            for (a, b) in m[r].iter_mut().zip(&src) {
                *a = &*a - &(&c * b);
            }
            letters.push(transvection(n, field, k, r, &c));
        }
    }
    let word = GeneratorWord::from_letters_unchecked(n, field, Alphabet::Tame, letters);
    if !word.verify(&l.to_endomorphism()) {
        return Err(Error::Certification("linear factorization does not multiply to the input".into()));
    }
    Ok(word)
}

/// The transposition `(s t)` as three transvections and a sign change.
pub fn permutation_to_elementary(n: usize, field: Field, s: usize, t: usize) -> Result<GeneratorWord> {
    let target = LinearMap::transposition(n, field, s, t)?;
    if s == t {
        return Ok(GeneratorWord::new(n, field, Alphabet::Tame));
    }
    let one = field.one();
    let minus = -&one;
    let letters = vec![
        transvection(n, field, s, t, &one),
        transvection(n, field, t, s, &minus),
        transvection(n, field, s, t, &one),
        dilation(n, field, t, &minus),
    ];
    let word = GeneratorWord::from_letters_unchecked(n, field, Alphabet::Tame, letters);
    if !word.verify(&target.to_endomorphism()) {
        return Err(Error::Certification("transposition factorization failed".into()));
    }
    Ok(word)
}
