//! Seeded sampling of polynomials, elements and maps for randomized checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::endo::{Endomorphism, LinearMap};
use crate::field::{Field, Scalar};
use crate::magnus::MagnusElement;
use crate::poly::{Monomial, Poly};

pub struct Sampler {
    rng: ChaCha8Rng,
    n: usize,
    field: Field,
}

impl Sampler {
    pub fn new(seed: u64, n: usize, field: Field) -> Sampler {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), n, field }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn scalar(&mut self) -> Scalar {
        match self.field {
            Field::Rationals => {
                let num = self.rng.gen_range(-4i64..=4);
                let den = self.rng.gen_range(1i64..=3);
                &self.field.from_i64(num) / &self.field.from_i64(den)
            }
            Field::Prime(p) => self.field.from_i64(self.rng.gen_range(0..p.min(1 << 20)) as i64),
        }
    }

    pub fn nonzero_scalar(&mut self) -> Scalar {
        loop {
            let s = self.scalar();
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// A uniformly chosen monomial of the given total degree.
    pub fn monomial(&mut self, degree: u32) -> Monomial {
        let mut exps = vec![0u32; self.n];
        for _ in 0..degree {
            exps[self.rng.gen_range(0..self.n)] += 1;
        }
        Monomial::from_exponents(&exps).expect("small exponents")
    }

    /// Monomial of the given degree using only variables in `vars`.
    pub fn monomial_in(&mut self, degree: u32, vars: &[usize]) -> Monomial {
        let mut exps = vec![0u32; self.n];
        for _ in 0..degree {
            exps[*vars.choose(&mut self.rng).expect("nonempty variable set")] += 1;
        }
        Monomial::from_exponents(&exps).expect("small exponents")
    }

    /// Up to `terms` terms with total degrees in `min..=max`.
    pub fn poly(&mut self, min: u32, max: u32, terms: usize) -> Poly {
        let mut p = Poly::zero(self.n, self.field);
        for _ in 0..terms {
            let d = self.rng.gen_range(min..=max);
            let m = self.monomial(d);
            let c = self.nonzero_scalar();
            p = &p + &Poly::term(self.n, self.field, c, m);
        }
        p
    }

    /// A polynomial whose terms all have degree exactly `d`, nonzero.
    pub fn nonzero_homogeneous(&mut self, d: u32, terms: usize) -> Poly {
        loop {
            let p = self.poly(d, d, terms.max(1));
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// A random element of `M_n'` with x-degrees in `min..=max` (`min >= 2`).
    pub fn derived(&mut self, min: u32, max: u32, terms: usize) -> MagnusElement {
        let pairs: Vec<(usize, usize)> = (0..self.n).flat_map(|i| (i + 1..self.n).map(move |j| (i, j))).collect();
        self.derived_over(&pairs, min, max, terms)
    }

    /// `sum [x_s,x_t] a_st` over the given pairs, x-degrees in `min..=max`.
    pub fn derived_over(&mut self, pairs: &[(usize, usize)], min: u32, max: u32, terms: usize) -> MagnusElement {
        assert!(min >= 2 && !pairs.is_empty());
        let mut acc = MagnusElement::zero(self.n, self.field);
        for _ in 0..terms {
            let &(s, t) = pairs.choose(&mut self.rng).expect("nonempty");
            let a = self.poly(min - 2, max - 2, 1);
            acc = &acc + &MagnusElement::commutator(self.n, self.field, s, t).scale_module_unchecked(&a);
        }
        acc
    }

    /// A nonzero element of `M_n'` whose lowest nonzero component has degree exactly `ldeg`.
    pub fn derived_with_ldeg(&mut self, ldeg: u32, max: u32, terms: usize) -> MagnusElement {
        loop {
            let low = self.derived(ldeg, ldeg, 1);
            if low.is_zero() {
                continue;
            }
            let rest = if terms > 1 { self.derived(ldeg, max.max(ldeg), terms - 1) } else { MagnusElement::zero(self.n, self.field) };
            let m = &low + &rest;
            if m.degrees().ldeg() == Some(ldeg) {
                return m;
            }
        }
    }

    /// Valid one-row data for row `i`: a combination of `[x_s,x_t]`, `s,t != i`.
    pub fn chein_data(&mut self, i: usize, min: u32, max: u32, terms: usize) -> MagnusElement {
        let pairs: Vec<(usize, usize)> = (0..self.n)
            .filter(|&s| s != i)
            .flat_map(|s| (s + 1..self.n).filter(move |&t| t != i).map(move |t| (s, t)))
            .collect();
        self.derived_over(&pairs, min, max, terms)
    }

    /// `x_i + linear noise + derived part`, degrees up to `max`.
    pub fn element(&mut self, max: u32, terms: usize) -> MagnusElement {
        let mut acc = MagnusElement::zero(self.n, self.field);
        for i in 0..self.n {
            if self.rng.gen_bool(0.5) {
                let c = self.scalar();
                acc = &acc + &MagnusElement::generator(self.n, self.field, i).scale(&c);
            }
        }
        if max >= 2 {
            acc = &acc + &self.derived(2, max, terms);
        }
        acc
    }

    /// A (usually non-invertible) endomorphism with images of degree `<= max`.
    pub fn endomorphism(&mut self, max: u32, terms: usize) -> Endomorphism {
        let images = (0..self.n).map(|_| self.element(max, terms)).collect();
        Endomorphism::from_images(images).expect("consistent images")
    }

    pub fn invertible_linear(&mut self) -> LinearMap {
        loop {
            let matrix = (0..self.n).map(|_| (0..self.n).map(|_| self.scalar()).collect()).collect();
            let l = LinearMap::new(matrix).expect("square");
            if !l.determinant().is_zero() {
                return l;
            }
        }
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }
}
