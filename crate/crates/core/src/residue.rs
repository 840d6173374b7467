//! The group of d-th power residue classes `K^×/(K^×)^d` of a finite field.
//!
//! Classes are indexed deterministically: class 0 is the subgroup of nonzero
//! d-th powers, and the remaining classes are numbered in the order in which
//! their first element appears in the field enumeration. The table is built by
//! direct enumeration, not discrete logarithms.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::field::{Element, Field, FieldError};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResidueError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("the exponent d must be positive")]
    ZeroExponent,
    #[error("zero has no residue class")]
    ZeroElement,
}

const NO_CLASS: u32 = u32::MAX;

/// `K^×/(K^×)^d` for a finite field `K`, with every nonzero element mapped to
/// its class.
#[derive(Debug, Clone)]
pub struct ResidueTable {
    field: Field,
    d: u64,
    representatives: Vec<u64>,
    class_index: Vec<u32>,
    // first d-th root (in enumeration order) of each d-th power, 0 elsewhere
    first_root: Vec<u64>,
}

impl ResidueTable {
    pub fn new(field: &Field, d: u64, limits: &Limits) -> Result<ResidueTable, ResidueError> {
        if d == 0 {
            return Err(ResidueError::ZeroExponent);
        }
        let q = field.checked_order(limits)?;
        let mut first_root = vec![0u64; q as usize];
        let mut powers = Vec::new();
        for a in 1..q {
            let s = field.raw_pow(a, d);
            if first_root[s as usize] == 0 {
                first_root[s as usize] = a;
                powers.push(s);
            }
        }

        let mut class_index = vec![NO_CLASS; q as usize];
        let mut representatives = Vec::new();
        for a in 1..q {
            if class_index[a as usize] != NO_CLASS {
                continue;
            }
            let class = representatives.len() as u32;
            representatives.push(a);
            for &s in &powers {
                class_index[field.raw_mul(a, s) as usize] = class;
            }
        }
        Ok(ResidueTable { field: field.clone(), d, representatives, class_index, first_root })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Field order `q`.
    pub fn order(&self) -> u64 {
        self.class_index.len() as u64
    }

    /// `|K_d|`.
    pub fn class_count(&self) -> usize {
        self.representatives.len()
    }

    /// One representative per class; class 0 is represented by 1.
    pub fn representatives(&self) -> Vec<Element> {
        self.representatives.iter().map(|&a| self.element(a)).collect()
    }

    pub fn representative(&self, class: usize) -> Element {
        self.element(self.representatives[class])
    }

    /// Class index of a nonzero element.
    pub fn class_of(&self, a: &Element) -> Result<usize, ResidueError> {
        if *a.field() != self.field {
            return Err(FieldError::FieldMismatch.into());
        }
        let idx = a.index().expect("finite field element");
        self.class_of_index(idx).ok_or(ResidueError::ZeroElement)
    }

    pub(crate) fn class_of_index(&self, a: u64) -> Option<usize> {
        match self.class_index[a as usize] {
            NO_CLASS => None,
            c => Some(c as usize),
        }
    }

    /// The elements of a class, in enumeration order.
    pub fn members(&self, class: usize) -> Vec<Element> {
        (1..self.order())
            .filter(|&a| self.class_index[a as usize] == class as u32)
            .map(|a| self.element(a))
            .collect()
    }

    /// Class of the product of two classes (the quotient-group law).
    pub fn mul_classes(&self, i: usize, j: usize) -> usize {
        let prod = self.field.raw_mul(self.representatives[i], self.representatives[j]);
        self.class_index[prod as usize] as usize
    }

    /// True for nonzero d-th powers.
    pub fn is_dth_power(&self, a: &Element) -> bool {
        a.index().is_some_and(|i| i != 0 && self.first_root[i as usize] != 0)
    }

    /// The first `u` in enumeration order with `u^d = a`, for a nonzero d-th
    /// power `a`.
    pub fn dth_root(&self, a: &Element) -> Option<Element> {
        if *a.field() != self.field {
            return None;
        }
        self.dth_root_index(a.index()?).map(|u| self.element(u))
    }

    pub(crate) fn dth_root_index(&self, a: u64) -> Option<u64> {
        match self.first_root.get(a as usize) {
            Some(&0) | None => None,
            Some(&u) => Some(u),
        }
    }

    fn element(&self, index: u64) -> Element {
        self.field.from_index(index).expect("index within field order")
    }
}

/// `|K^×/(K^×)^d| = gcd(d, q − 1)` for the field with `q` elements.
pub fn class_count_formula(q: u64, d: u64) -> u64 {
    d.gcd(&(q - 1))
}
