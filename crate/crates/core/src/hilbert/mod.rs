//! Hilbert identities `(x₁² + ⋯ + x_n²)^d = Σ λᵢ (ℓᵢ · x)^{2d}` with positive
//! rational weights, and the conversion of weighted powers into plain sums of
//! powers.
//!
//! Identities are found by an exact linear solve. Candidate directions are
//! primitive integer vectors of bounded height, grouped into orbits under
//! signed coordinate permutations; every direction in an orbit gets the same
//! weight, so the unknowns are one weight per orbit and the equations are one
//! per partition of `d` into at most `n` parts. Subsets of orbits are tried in
//! a fixed order until the solve yields strictly positive weights, and the
//! result is then checked by full polynomial expansion.

mod poly;

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{Element, FieldError, Rational};
use crate::Limits;

pub use poly::{poly_expand_power_sum, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HilbertError {
    #[error("no Hilbert identity for n={n}, d={d} found within the search budget")]
    SearchBudgetExceeded { n: usize, d: u32 },
    #[error("n and d must both be positive")]
    InvalidArguments,
    #[error("invalid identity: {0}")]
    InvalidIdentity(&'static str),
    #[error("weights can only be absorbed in characteristic zero")]
    PositiveCharacteristic,
    #[error("weight must be a positive rational")]
    InvalidWeight,
    #[error("exponent must be positive and even")]
    InvalidExponent,
    #[error("absorbing the weight needs {0} copies, above the configured cap")]
    TooManyCopies(BigUint),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// One weighted term `λ (ℓ · x)^{2d}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertTerm {
    pub lambda: Rational,
    pub form: Vec<Rational>,
}

/// A verified identity `(x₁² + ⋯ + x_n²)^d = Σ λᵢ (ℓᵢ · x)^{2d}`, all `λᵢ > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertIdentity {
    n: usize,
    d: u32,
    terms: Vec<HilbertTerm>,
}

impl HilbertIdentity {
    /// Checks the identity by expansion before accepting it.
    pub fn new(n: usize, d: u32, terms: Vec<HilbertTerm>) -> Result<HilbertIdentity, HilbertError> {
        if n == 0 || d == 0 {
            return Err(HilbertError::InvalidArguments);
        }
        if terms.is_empty() {
            return Err(HilbertError::InvalidIdentity("no terms"));
        }
        if terms.iter().any(|t| t.form.len() != n) {
            return Err(HilbertError::InvalidIdentity("linear form has the wrong length"));
        }
        if terms.iter().any(|t| !t.lambda.is_positive()) {
            return Err(HilbertError::InvalidIdentity("weights must be positive"));
        }
        if !verify_identity(n, d, &terms) {
            return Err(HilbertError::InvalidIdentity("expansion does not match (Σ xᵢ²)^d"));
        }
        Ok(HilbertIdentity { n, d, terms })
    }

    /// `(x²)^d = x^{2d}`.
    pub fn trivial(d: u32) -> HilbertIdentity {
        HilbertIdentity { n: 1, d, terms: vec![HilbertTerm { lambda: Rational::one(), form: vec![Rational::one()] }] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn terms(&self) -> &[HilbertTerm] {
        &self.terms
    }

    pub fn expand(&self) -> MultiPoly {
        expand_terms(self.n, self.d, &self.terms)
    }

    pub fn verify(&self) -> bool {
        verify_identity(self.n, self.d, &self.terms)
    }
}

fn expand_terms(n: usize, d: u32, terms: &[HilbertTerm]) -> MultiPoly {
    let pairs: Vec<(Rational, Vec<Rational>)> = terms.iter().map(|t| (t.lambda.clone(), t.form.clone())).collect();
    poly_expand_power_sum(&pairs, n, 2 * d)
}

/// True iff every weight is positive, every form has length `n`, and the
/// terms expand to exactly `(x₁² + ⋯ + x_n²)^d`.
pub fn verify_identity(n: usize, d: u32, terms: &[HilbertTerm]) -> bool {
    if n == 0 || d == 0 || terms.is_empty() {
        return false;
    }
    if terms.iter().any(|t| t.form.len() != n || !t.lambda.is_positive()) {
        return false;
    }
    expand_terms(n, d, terms) == MultiPoly::sum_of_squares_power(n, d)
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

struct Orbit {
    height: i64,
    members: Vec<Vec<i64>>,
}

/// Partitions of `d` into at most `n` parts, nonincreasing, padded with zeros.
fn partitions(d: u32, n: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, max: u32, n: usize, buf: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            let mut p = buf.clone();
            p.resize(n, 0);
            out.push(p);
            return;
        }
        if buf.len() == n {
            return;
        }
        for k in (1..=left.min(max)).rev() {
            buf.push(k);
            rec(left - k, k, n, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, n, &mut Vec::new(), &mut out);
    out
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Canonical orbit representatives of height exactly `h`: nonincreasing,
/// nonnegative, primitive.
fn orbit_reps(n: usize, h: i64) -> Vec<Vec<i64>> {
    fn rec(n: usize, max: i64, buf: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if buf.len() == n {
            out.push(buf.clone());
            return;
        }
        for k in (0..=max).rev() {
            buf.push(k);
            rec(n, k, buf, out);
            buf.pop();
        }
    }
    let mut all = Vec::new();
    let mut buf = vec![h];
    rec(n, h, &mut buf, &mut all);
    all.retain(|v| gcd_all(v) == 1);
    all.reverse();
    all
}

/// All signed permutations of `rep`, up to overall sign.
fn orbit_members(rep: &[i64]) -> Vec<Vec<i64>> {
    fn perms(items: &mut Vec<i64>, k: usize, out: &mut BTreeSet<Vec<i64>>) {
        if k == items.len() {
            out.insert(items.clone());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            perms(items, k + 1, out);
            items.swap(k, i);
        }
    }
    let mut arrangements = BTreeSet::new();
    perms(&mut rep.to_vec(), 0, &mut arrangements);
    let mut members = BTreeSet::new();
    for a in arrangements {
        let nonzero: Vec<usize> = (0..a.len()).filter(|&i| a[i] != 0).collect();
        for mask in 0u64..(1 << nonzero.len()) {
            let mut v = a.clone();
            for (bit, &i) in nonzero.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    v[i] = -v[i];
                }
            }
            if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                continue;
            }
            members.insert(v);
        }
    }
    members.into_iter().rev().collect()
}

fn orbit_column(orbit: &Orbit, parts: &[Vec<u32>]) -> Vec<Rational> {
    parts
        .iter()
        .map(|lambda| {
            let doubled: Vec<u32> = lambda.iter().map(|k| 2 * k).collect();
            let mut sum = BigInt::zero();
            for v in &orbit.members {
                let mut prod = BigInt::one();
                for (&c, &k) in v.iter().zip(&doubled) {
                    prod *= num_traits::pow(BigInt::from(c), k as usize);
                }
                sum += prod;
            }
            Rational::from_integer(sum * poly::multinomial(&doubled))
        })
        .collect()
}

/// Solves `A w = b` exactly, where `A` is given by columns. Returns the
/// unique solution, or `None` if the system is inconsistent or
/// underdetermined.
fn solve_exact(columns: &[&Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let rows = rhs.len();
    let k = columns.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..k {
        let pr = (pivot_row..rows).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, pr);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                let (src, dst) = if r < pivot_row {
                    let (a, b) = m.split_at_mut(pivot_row);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[pivot_row], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d -= &factor * s;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| m[i][k].clone()).collect())
}

/// Calls `f` on each `k`-subset of `0..n` in lexicographic order until it
/// returns `false`.
fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Finds a Hilbert identity for `(x₁² + ⋯ + x_n²)^d`.
pub fn find_hilbert_identity(n: usize, d: u32, limits: &Limits) -> Result<HilbertIdentity, HilbertError> {
    if n == 0 || d == 0 {
        return Err(HilbertError::InvalidArguments);
    }
    if n == 1 {
        return Ok(HilbertIdentity::trivial(d));
    }
    let parts = partitions(d, n);
    let rhs: Vec<Rational> = parts
        .iter()
        .map(|lambda| Rational::from_integer(poly::multinomial(lambda)))
        .collect();

    let mut orbits: Vec<Orbit> = Vec::new();
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    let mut tried: u64 = 0;
    for height in 1..=limits.hilbert_max_height as i64 {
        for rep in orbit_reps(n, height) {
            let orbit = Orbit { height, members: orbit_members(&rep) };
            columns.push(orbit_column(&orbit, &parts));
            orbits.push(orbit);
        }
        let mut found: Option<(Vec<usize>, Vec<Rational>)> = None;
        let mut exhausted = false;
        for k in 1..=parts.len() {
            for_each_subset(orbits.len(), k, |subset| {
                // subsets without a new orbit were already tried at a lower height
                if !subset.iter().any(|&i| orbits[i].height == height) {
                    return true;
                }
                tried += 1;
                if tried > limits.hilbert_max_subsets {
                    exhausted = true;
                    return false;
                }
                let cols: Vec<&Vec<Rational>> = subset.iter().map(|&i| &columns[i]).collect();
                if let Some(w) = solve_exact(&cols, &rhs) {
                    if w.iter().all(Signed::is_positive) {
                        found = Some((subset.to_vec(), w));
                        return false;
                    }
                }
                true
            });
            if found.is_some() || exhausted {
                break;
            }
        }
        if let Some((subset, weights)) = found {
            let terms = subset
                .iter()
                .zip(weights)
                .flat_map(|(&i, w)| {
                    orbits[i].members.iter().map(move |v| HilbertTerm {
                        lambda: w.clone(),
                        form: v.iter().map(|&c| Rational::from_integer(c.into())).collect(),
                    })
                })
                .collect();
            return HilbertIdentity::new(n, d, terms);
        }
        if exhausted {
            break;
        }
    }
    Err(HilbertError::SearchBudgetExceeded { n, d })
}

// ---------------------------------------------------------------------------
// weight absorption
// ---------------------------------------------------------------------------

fn check_absorb_args(lambda: &Rational, base: &Element, e: u32) -> Result<(), HilbertError> {
    if base.field().characteristic() != 0 {
        return Err(HilbertError::PositiveCharacteristic);
    }
    if !lambda.is_positive() {
        return Err(HilbertError::InvalidWeight);
    }
    if e == 0 || e % 2 == 1 {
        return Err(HilbertError::InvalidExponent);
    }
    Ok(())
}

/// Writes `λ·base^e` (λ = a/b in lowest terms) as the sum of `e`-th powers of
/// `a·b^{e−1}` copies of `base/b`.
pub fn scale_to_pure_powers(
    lambda: &Rational,
    base: &Element,
    e: u32,
    limits: &Limits,
) -> Result<Vec<Element>, HilbertError> {
    check_absorb_args(lambda, base, e)?;
    let a = lambda.numer().magnitude().clone();
    let b = lambda.denom().magnitude().clone();
    let copies = &a * num_traits::pow(b.clone(), e as usize - 1);
    let count = copies.to_u64().filter(|&c| c <= limits.enumeration_cap).ok_or(HilbertError::TooManyCopies(copies.clone()))?;
    let piece = base.scale(&Rational::new(BigInt::one(), BigInt::from(b)))?;
    let want = base.pow(e as u64).scale(lambda)?;
    let got = piece.pow(e as u64).scale(&Rational::from_integer(BigInt::from(copies)))?;
    if got != want {
        return Err(HilbertError::InvalidIdentity("weight absorption failed to verify"));
    }
    Ok(vec![piece; count as usize])
}

/// Decomposes positive integers into sums of `e`-th powers of positive
/// integers: greedy on the large part, optimal (fewest terms) below a fixed
/// threshold.
#[derive(Debug, Clone)]
pub struct PowerDecomposer {
    e: u32,
    // root of the last part in a fewest-terms decomposition of each v ≤ TAIL
    last: Vec<u32>,
}

impl PowerDecomposer {
    const TAIL: usize = 1 << 16;

    pub fn new(e: u32) -> PowerDecomposer {
        assert!(e > 0);
        let coins: Vec<(u32, usize)> = (1u32..)
            .map(|m| (m, (m as u64).checked_pow(e)))
            .take_while(|(_, v)| v.is_some_and(|v| v <= Self::TAIL as u64))
            .map(|(m, v)| (m, v.unwrap() as usize))
            .collect();
        let mut best = vec![u32::MAX; Self::TAIL + 1];
        let mut last = vec![0u32; Self::TAIL + 1];
        best[0] = 0;
        for v in 1..=Self::TAIL {
            for &(m, c) in &coins {
                if c > v {
                    break;
                }
                if best[v - c] + 1 < best[v] {
                    best[v] = best[v - c] + 1;
                    last[v] = m;
                }
            }
        }
        PowerDecomposer { e, last }
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    /// Positive integers `m_k` with `Σ m_k^e = value`.
    pub fn decompose(&self, value: &BigUint) -> Vec<BigUint> {
        let mut rest = value.clone();
        let mut parts = Vec::new();
        let tail = BigUint::from(Self::TAIL);
        while rest > tail {
            let m = rest.nth_root(self.e);
            rest -= num_traits::pow(m.clone(), self.e as usize);
            parts.push(m);
        }
        let mut v = rest.to_usize().expect("below threshold");
        while v > 0 {
            let m = self.last[v];
            parts.push(BigUint::from(m));
            v -= (m as usize).pow(self.e);
        }
        parts
    }
}

/// Smallest positive `t` with `b | t^e`.
fn power_cover(b: &BigUint, e: u32) -> BigUint {
    let mut rest = b.clone();
    let mut t = BigUint::one();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        if (&rest % &p).is_zero() {
            let mut v = 0u32;
            while (&rest % &p).is_zero() {
                rest /= &p;
                v += 1;
            }
            t *= num_traits::pow(p.clone(), v.div_ceil(e) as usize);
        }
        p += 1u32;
        if p > BigUint::from(1_000_000u32) {
            // large cofactor: t = b itself is always a valid (if larger) choice
            return b.clone();
        }
    }
    if !rest.is_one() {
        t *= rest;
    }
    t
}

/// Writes `λ·base^e` as a plain sum of `e`-th powers of rational multiples of
/// `base`, using few terms: with `t` minimal such that `b | t^e`, the integer
/// `M = a·t^e/b` is split into `e`-th powers `Σ m_k^e`, and the witnesses are
/// `m_k·base/t`.
pub fn absorb_weight(
    lambda: &Rational,
    base: &Element,
    decomposer: &PowerDecomposer,
) -> Result<Vec<Element>, HilbertError> {
    let e = decomposer.exponent();
    check_absorb_args(lambda, base, e)?;
    let a = lambda.numer().magnitude();
    let b = lambda.denom().magnitude();
    let t = power_cover(b, e);
    let m_total = a * num_traits::pow(t.clone(), e as usize) / b;
    let witnesses: Vec<Element> = decomposer
        .decompose(&m_total)
        .into_iter()
        .map(|m| base.scale(&Rational::new(BigInt::from(m), BigInt::from(t.clone()))))
        .collect::<Result<_, _>>()?;
    let want = base.pow(e as u64).scale(lambda)?;
    let got = witnesses
        .iter()
        .fold(base.field().zero(), |acc, w| acc + w.pow(e as u64));
    if got != want {
        return Err(HilbertError::InvalidIdentity("weight absorption failed to verify"));
    }
    Ok(witnesses)
}
