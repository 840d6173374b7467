use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::field::Rational;

/// Sparse multivariate polynomial over ℚ in a fixed number of variables.
///
/// No zero coefficients are stored, so structural equality is polynomial
/// equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> MultiPoly {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// `x_i`, zero-based.
    pub fn variable(nvars: usize, i: usize) -> MultiPoly {
        let mut exp = vec![0; nvars];
        exp[i] = 1;
        let mut p = MultiPoly::zero(nvars);
        p.add_term(exp, Rational::one());
        p
    }

    /// `(x_1² + ⋯ + x_n²)^d`.
    pub fn sum_of_squares_power(nvars: usize, d: u32) -> MultiPoly {
        let mut base = MultiPoly::zero(nvars);
        for i in 0..nvars {
            let mut exp = vec![0; nvars];
            exp[i] = 2;
            base.add_term(exp, Rational::one());
        }
        base.pow(d)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exp: &[u32]) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: Rational) {
        assert_eq!(exp.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MultiPoly { nvars: self.nvars, terms: acc }
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.nvars, Rational::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitutes `x_i → -x_i` for every `i` with `flip[i]`.
    pub fn flip_signs(&self, flip: &[bool]) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let odd = e.iter().zip(flip).filter(|(k, f)| **f && **k % 2 == 1).count();
            out.add_term(e.clone(), if odd % 2 == 1 { -c.clone() } else { c.clone() });
        }
        out
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `n! / (k_1! ⋯ k_m!)` for `k_1 + ⋯ + k_m = n`.
pub(crate) fn multinomial(parts: &[u32]) -> BigInt {
    let n: u32 = parts.iter().sum();
    parts.iter().fold(factorial(n), |acc, &k| acc / factorial(k))
}

/// Calls `f` with every exponent vector of length `n` and total degree `e`,
/// in lexicographically decreasing order.
pub(crate) fn for_each_composition(n: usize, e: u32, mut f: impl FnMut(&[u32])) {
    fn rec(buf: &mut Vec<u32>, n: usize, left: u32, f: &mut dyn FnMut(&[u32])) {
        if buf.len() == n - 1 {
            buf.push(left);
            f(buf);
            buf.pop();
            return;
        }
        for k in (0..=left).rev() {
            buf.push(k);
            rec(buf, n, left - k, f);
            buf.pop();
        }
    }
    if n == 0 {
        return;
    }
    rec(&mut Vec::with_capacity(n), n, e, &mut f);
}

/// Exact expansion of `Σ λᵢ (ℓᵢ · x)^e` by the multinomial theorem.
pub fn poly_expand_power_sum(terms: &[(Rational, Vec<Rational>)], nvars: usize, e: u32) -> MultiPoly {
    let mut acc: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    for_each_composition(nvars, e, |alpha| {
        let multi = Rational::from_integer(multinomial(alpha));
        let mut sum = Rational::zero();
        for (lambda, form) in terms {
            assert_eq!(form.len(), nvars, "linear form length");
            let mut prod = lambda.clone();
            for (c, &k) in form.iter().zip(alpha) {
                if k > 0 {
                    prod *= num_traits::pow(c.clone(), k as usize);
                }
            }
            sum += prod;
        }
        if !sum.is_zero() {
            acc.insert(alpha.to_vec(), sum * &multi);
        }
    });
    MultiPoly { nvars, terms: acc }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}")?;
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", v + 1)?,
                    _ => write!(f, "*x{}^{k}", v + 1)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| r(x, 1)).collect()
    }

    #[test]
    fn binomial_square() {
        let p = poly_expand_power_sum(&[(r(1, 1), v(&[1, 1]))], 2, 2);
        assert_eq!(p.coefficient(&[2, 0]), r(1, 1));
        assert_eq!(p.coefficient(&[1, 1]), r(2, 1));
        assert_eq!(p.coefficient(&[0, 2]), r(1, 1));
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn pure_fourth_powers() {
        let p = poly_expand_power_sum(&[(r(1, 1), v(&[1, 0])), (r(1, 1), v(&[0, 1]))], 2, 4);
        let mut want = MultiPoly::zero(2);
        want.add_term(alloc::vec![4, 0], r(1, 1));
        want.add_term(alloc::vec![0, 4], r(1, 1));
        assert_eq!(p, want);
    }

    #[test]
    fn two_variable_quartic_identity() {
        let terms = [
            (r(1, 6), v(&[1, 1])),
            (r(1, 6), v(&[1, -1])),
            (r(2, 3), v(&[1, 0])),
            (r(2, 3), v(&[0, 1])),
        ];
        let p = poly_expand_power_sum(&terms, 2, 4);
        assert_eq!(p, MultiPoly::sum_of_squares_power(2, 2));
        assert_eq!(p.coefficient(&[2, 2]), r(2, 1));
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[2, 1, 1]), BigInt::from(12));
        let mut count = 0;
        for_each_composition(3, 4, |_| count += 1);
        assert_eq!(count, 15);
    }

    #[test]
    fn arithmetic_and_signs() {
        let x = MultiPoly::variable(2, 0);
        let y = MultiPoly::variable(2, 1);
        let s = x.add(&y);
        let cube = s.pow(3);
        assert_eq!(cube.coefficient(&[2, 1]), r(3, 1));
        let flipped = cube.flip_signs(&[false, true]);
        assert_eq!(flipped.coefficient(&[2, 1]), r(-3, 1));
        assert_eq!(flipped.coefficient(&[1, 2]), r(3, 1));
        assert!(s.add(&s.flip_signs(&[true, true])).is_zero());
    }
}
