//! Sums of d-th powers: the Σ-chain over a finite field, minimal
//! representations with certificates, the sum-of-two-squares style identity
//! `c = ((c+1)/2)² + Σ (aᵢ(c−1)/2)²` (given `Σ aᵢ² = −1`), and the
//! characteristic-zero tower that writes −1 as a sum of d-th powers by lifting
//! through Hilbert identities one factor of 2 at a time.
//!
//! `Σ_{d,r}` is the set of sums of `r` d-th powers of field elements (zeros
//! allowed), i.e. the sums of at most `r` nonzero d-th powers together with 0.
//! It is a union of cosets of `(K^×)^d` plus possibly 0, so the chain is
//! computed on sets of residue classes.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::field::{Element, Field, FieldError, Rational};
use crate::hilbert::{self, HilbertError, HilbertIdentity, PowerDecomposer};
use crate::residue::{ResidueError, ResidueTable};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WaringError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error("the exponent d must be positive")]
    ZeroExponent,
    #[error("target must be nonzero")]
    ZeroTarget,
    #[error("target is not a sum of d-th powers")]
    NotRepresentable,
    #[error("the identity needs 2 to be invertible")]
    CharacteristicTwo,
    #[error("invalid certificate: {0}")]
    InvalidCertificate(&'static str),
    #[error("operation requires characteristic zero")]
    NotCharacteristicZero,
    #[error("characteristic zero requires a certificate that -1 is a sum of squares")]
    MissingSquaresCertificate,
    #[error("no Hilbert identity available for n={n}, d={d}")]
    HilbertIdentityUnavailable { n: usize, d: u32 },
}

/// A checked witness that `target = Σ witnesses[i]^d` with every witness
/// nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSumCertificate {
    target: Element,
    d: u64,
    witnesses: Vec<Element>,
}

/// Checks `target = Σ wᵢ^d` with nonzero witnesses from the target's field.
pub fn check_power_sum(target: &Element, d: u64, witnesses: &[Element]) -> Result<(), WaringError> {
    if d == 0 {
        return Err(WaringError::ZeroExponent);
    }
    if witnesses.is_empty() {
        return Err(WaringError::InvalidCertificate("no witnesses"));
    }
    let field = target.field();
    let mut sum = field.zero();
    for w in witnesses {
        if w.field() != field {
            return Err(WaringError::InvalidCertificate("witness from another field"));
        }
        if w.is_zero() {
            return Err(WaringError::InvalidCertificate("zero witness"));
        }
        sum = sum + w.pow(d);
    }
    if sum != *target {
        return Err(WaringError::InvalidCertificate("sum of powers differs from target"));
    }
    Ok(())
}

impl PowerSumCertificate {
    pub fn new(target: Element, d: u64, witnesses: Vec<Element>) -> Result<PowerSumCertificate, WaringError> {
        check_power_sum(&target, d, &witnesses)?;
        Ok(PowerSumCertificate { target, d, witnesses })
    }

    /// Re-evaluates the sum of powers from scratch.
    pub fn verify(&self) -> bool {
        check_power_sum(&self.target, self.d, &self.witnesses).is_ok()
    }

    pub fn field(&self) -> &Field {
        self.target.field()
    }

    pub fn target(&self) -> &Element {
        &self.target
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn witnesses(&self) -> &[Element] {
        &self.witnesses
    }

    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// One level `Σ_{d,r}` of the chain, as residue classes plus a zero flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLevel {
    pub contains_zero: bool,
    /// Sorted class indices.
    pub classes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct LevelBits {
    zero: bool,
    classes: Vec<bool>,
}

/// The increasing chain `Σ_{d,0} ⊆ Σ_{d,1} ⊆ ⋯` over a finite field, computed
/// until it stabilizes.
#[derive(Debug, Clone)]
pub struct SigmaChain {
    table: ResidueTable,
    // levels[r] = Σ_{d,r}, up to and including stabilization_index + 1
    levels: Vec<LevelBits>,
    stabilization_index: usize,
}

impl SigmaChain {
    pub fn new(field: &Field, d: u64, limits: &Limits) -> Result<SigmaChain, WaringError> {
        Ok(SigmaChain::from_table(ResidueTable::new(field, d, limits)?))
    }

    pub fn from_table(table: ResidueTable) -> SigmaChain {
        let field = table.field().clone();
        let classes = table.class_count();
        let q = table.order();
        let powers: Vec<u64> = (1..q).filter(|&a| table.class_of_index(a) == Some(0)).collect();
        let reps: Vec<u64> = (0..classes).map(|c| table.representative(c).index().unwrap()).collect();

        // C_i + P has the same classes as rep_i + P, since P·(C_i + P) = C_i + P.
        let shifted: Vec<LevelBits> = reps
            .iter()
            .map(|&rep| {
                let mut bits = LevelBits { zero: false, classes: vec![false; classes] };
                for &s in &powers {
                    match table.class_of_index(field.raw_add(rep, s)) {
                        None => bits.zero = true,
                        Some(c) => bits.classes[c] = true,
                    }
                }
                bits
            })
            .collect();

        let mut levels = vec![LevelBits { zero: true, classes: vec![false; classes] }];
        loop {
            let cur = levels.last().unwrap();
            let mut next = cur.clone();
            if cur.zero {
                next.classes[0] = true;
            }
            for (i, present) in cur.classes.iter().enumerate() {
                if *present {
                    next.zero |= shifted[i].zero;
                    for (slot, &hit) in next.classes.iter_mut().zip(&shifted[i].classes) {
                        *slot |= hit;
                    }
                }
            }
            let stable = next == *cur;
            levels.push(next);
            if stable {
                break;
            }
        }
        let stabilization_index = levels.len() - 2;
        SigmaChain { table, levels, stabilization_index }
    }

    pub fn table(&self) -> &ResidueTable {
        &self.table
    }

    pub fn field(&self) -> &Field {
        self.table.field()
    }

    pub fn d(&self) -> u64 {
        self.table.d()
    }

    pub fn class_count(&self) -> usize {
        self.table.class_count()
    }

    /// First `r` with `Σ_{d,r} = Σ_{d,r+1}`.
    pub fn stabilization_index(&self) -> usize {
        self.stabilization_index
    }

    /// `Σ_{d,0}, …, Σ_{d,s+1}` where `s` is the stabilization index.
    pub fn levels(&self) -> Vec<ChainLevel> {
        (0..self.levels.len()).map(|r| self.level(r)).collect()
    }

    /// `Σ_{d,r}` for any `r`.
    pub fn level(&self, r: usize) -> ChainLevel {
        let bits = &self.levels[r.min(self.levels.len() - 1)];
        ChainLevel {
            contains_zero: bits.zero,
            classes: (0..bits.classes.len()).filter(|&c| bits.classes[c]).collect(),
        }
    }

    fn contains_index(&self, r: usize, a: u64) -> bool {
        let bits = &self.levels[r.min(self.levels.len() - 1)];
        match self.table.class_of_index(a) {
            None => bits.zero,
            Some(c) => bits.classes[c],
        }
    }

    pub fn contains(&self, r: usize, a: &Element) -> bool {
        a.field() == self.field() && self.contains_index(r, a.index().unwrap())
    }

    /// The least `r` with `c ∈ Σ_{d,r}`, with a certificate of exactly `r`
    /// nonzero witnesses. Witnesses are chosen greedily in enumeration order
    /// (each choice leaves a remainder of rank one less) and listed in reverse
    /// order of choice.
    pub fn rank(&self, c: &Element) -> Result<(usize, PowerSumCertificate), WaringError> {
        if c.field() != self.field() {
            return Err(FieldError::FieldMismatch.into());
        }
        if c.is_zero() {
            return Err(WaringError::ZeroTarget);
        }
        let target = c.index().unwrap();
        let r = (1..=self.stabilization_index)
            .find(|&r| self.contains_index(r, target))
            .ok_or(WaringError::NotRepresentable)?;

        let field = self.field();
        let d = self.d();
        let mut witnesses = Vec::with_capacity(r);
        let mut rest = target;
        for left in (1..=r).rev() {
            let w = if left == 1 {
                self.table.dth_root_index(rest).expect("rank-1 element is a d-th power")
            } else {
                // rest has rank exactly `left`, so any w with rest − w^d ∈ Σ_{left−1}
                // leaves a remainder of rank exactly left − 1
                (1..self.table.order())
                    .find(|&w| {
                        let t = field.raw_sub(rest, field.raw_pow(w, d));
                        t != 0 && self.contains_index(left - 1, t)
                    })
                    .expect("greedy step exists for an element of known rank")
            };
            rest = field.raw_sub(rest, field.raw_pow(w, d));
            witnesses.push(field.from_index(w)?);
        }
        debug_assert_eq!(rest, 0);
        // listed from the last greedy choice back to the first
        witnesses.reverse();
        Ok((r, PowerSumCertificate::new(c.clone(), d, witnesses)?))
    }
}

/// Minimal Waring representation of `c` as a sum of d-th powers.
pub fn waring_rank(
    field: &Field,
    d: u64,
    c: &Element,
    limits: &Limits,
) -> Result<(usize, PowerSumCertificate), WaringError> {
    SigmaChain::new(field, d, limits)?.rank(c)
}

/// Fewest nonzero d-th powers summing to `target`, by breadth-first search
/// over field elements (independent of the residue-class machinery).
/// `Some(0)` for a zero target; `None` if unreachable.
pub fn brute_force_rank(field: &Field, d: u64, target: &Element, limits: &Limits) -> Result<Option<usize>, WaringError> {
    let q = field.checked_order(limits)?;
    let target = target.index().ok_or(FieldError::FieldMismatch)?;
    let mut powers: Vec<u64> = (1..q).map(|a| field.raw_pow(a, d)).collect();
    powers.sort_unstable();
    powers.dedup();
    let mut dist = vec![usize::MAX; q as usize];
    dist[0] = 0;
    let mut frontier = vec![0u64];
    let mut depth = 0;
    while !frontier.is_empty() {
        if dist[target as usize] != usize::MAX {
            break;
        }
        depth += 1;
        let mut next = Vec::new();
        for &a in &frontier {
            for &s in &powers {
                let b = field.raw_add(a, s);
                if dist[b as usize] == usize::MAX {
                    dist[b as usize] = depth;
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
    Ok((dist[target as usize] != usize::MAX).then_some(dist[target as usize]))
}

/// `−1 = (p − 1)·1^d` in characteristic `p`.
pub fn characteristic_fallback(field: &Field, d: u64) -> Result<PowerSumCertificate, WaringError> {
    let p = field.characteristic();
    if p == 0 {
        return Err(WaringError::NotRepresentable);
    }
    let copies = if p == 2 { 1 } else { p - 1 };
    PowerSumCertificate::new(field.from_int(-1), d, vec![field.one(); copies as usize])
}

/// A certificate that −1 is a sum of d-th powers.
///
/// Finite fields use the minimal representation from the Σ-chain. In
/// characteristic zero a certificate that −1 is a sum of squares must be
/// supplied, and the answer comes from [`minus_one_power_tower`].
pub fn represent_minus_one(
    field: &Field,
    d: u64,
    minus_one_squares: Option<&PowerSumCertificate>,
    limits: &Limits,
) -> Result<PowerSumCertificate, WaringError> {
    if field.is_finite() {
        let chain = SigmaChain::new(field, d, limits)?;
        return Ok(chain.rank(&field.from_int(-1))?.1);
    }
    let squares = minus_one_squares.ok_or(WaringError::MissingSquaresCertificate)?;
    minus_one_power_tower(field, d, squares, limits)
}

fn check_minus_one_squares(cert: &PowerSumCertificate) -> Result<(), WaringError> {
    if cert.d() != 2 {
        return Err(WaringError::InvalidCertificate("expected a certificate with exponent 2"));
    }
    if *cert.target() != cert.field().from_int(-1) {
        return Err(WaringError::InvalidCertificate("expected a certificate with target -1"));
    }
    if !cert.verify() {
        return Err(WaringError::InvalidCertificate("certificate does not verify"));
    }
    Ok(())
}

/// Writes `c` as a sum of squares from `Σ aᵢ² = −1`:
/// `c = ((c+1)/2)² + Σ (aᵢ·(c−1)/2)²`. Zero terms are dropped.
pub fn sum_of_squares_rep(c: &Element, minus_one: &PowerSumCertificate) -> Result<PowerSumCertificate, WaringError> {
    let field = c.field();
    if field != minus_one.field() {
        return Err(FieldError::FieldMismatch.into());
    }
    if field.characteristic() == 2 {
        return Err(WaringError::CharacteristicTwo);
    }
    check_minus_one_squares(minus_one)?;
    let half = field.from_rational(&Rational::new(1.into(), 2.into()))?;
    let plus = (c + &field.one()) * &half;
    let minus = (c - &field.one()) * &half;
    let witnesses: Vec<Element> = core::iter::once(plus)
        .chain(minus_one.witnesses().iter().map(|a| a * &minus))
        .filter(|w| !w.is_zero())
        .collect();
    PowerSumCertificate::new(c.clone(), 2, witnesses)
}

/// −1 as a sum of d-th powers in characteristic zero, by induction on the
/// power of 2 dividing `d = 2^m·u`: `−1 = (−1)^u` for odd `u`; each doubling
/// rewrites every witness `w` as a sum of squares `Σ sⱼ²`, expands
/// `w^{d'} = (Σ sⱼ²)^{d'}` with a Hilbert identity into `Σ λₖ yₖ^{2d'}`, and
/// absorbs the rational weights into plain `2d'`-th powers.
pub fn minus_one_power_tower(
    field: &Field,
    d: u64,
    minus_one_squares: &PowerSumCertificate,
    limits: &Limits,
) -> Result<PowerSumCertificate, WaringError> {
    if field.characteristic() != 0 {
        return Err(WaringError::NotCharacteristicZero);
    }
    if d == 0 {
        return Err(WaringError::ZeroExponent);
    }
    if minus_one_squares.field() != field {
        return Err(FieldError::FieldMismatch.into());
    }
    check_minus_one_squares(minus_one_squares)?;

    let m = d.trailing_zeros();
    let odd = d >> m;
    let minus_one = field.from_int(-1);
    let mut cert = PowerSumCertificate::new(minus_one.clone(), odd, vec![minus_one.clone()])?;
    let mut identities: BTreeMap<usize, HilbertIdentity> = BTreeMap::new();
    for step in 1..=m {
        let exponent = odd << step;
        if exponent == 2 {
            cert = minus_one_squares.clone();
            continue;
        }
        let half = (exponent / 2) as u32;
        identities.clear();
        let decomposer = PowerDecomposer::new(exponent as u32);
        // total weight per base, keyed up to sign (the exponent is even)
        let mut weights: BTreeMap<Vec<Rational>, (Element, Rational)> = BTreeMap::new();
        for w in cert.witnesses() {
            let squares = sum_of_squares_rep(w, minus_one_squares)?;
            let roots = squares.witnesses();
            let n = roots.len();
            if !identities.contains_key(&n) {
                let id = hilbert::find_hilbert_identity(n, half, limits)
                    .map_err(|_| WaringError::HilbertIdentityUnavailable { n, d: half })?;
                identities.insert(n, id);
            }
            for term in identities[&n].terms() {
                let y = term
                    .form
                    .iter()
                    .zip(roots)
                    .filter(|(c, _)| !c.is_zero())
                    .try_fold(field.zero(), |acc, (c, s)| s.scale(c).map(|t| acc + t))?;
                if y.is_zero() {
                    continue;
                }
                let coeffs = y.coefficients();
                let y = if coeffs.iter().find(|c| !c.is_zero()).is_some_and(|c| c < &Rational::zero()) { -y } else { y };
                weights
                    .entry(y.coefficients())
                    .and_modify(|(_, lambda)| *lambda += &term.lambda)
                    .or_insert((y, term.lambda.clone()));
            }
        }
        let mut witnesses = Vec::new();
        for (y, lambda) in weights.values() {
            witnesses.extend(hilbert::absorb_weight(lambda, y, &decomposer)?);
        }
        cert = PowerSumCertificate::new(minus_one.clone(), exponent, witnesses)?;
    }
    Ok(cert)
}
