//! Closed-form bounds on power residue classes and diagonal forms, and
//! Schreier generators for point stabilizers of finite permutation groups.

mod perm;

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use num_bigint::BigUint;

pub use perm::{Perm, PermError};

/// A permutation group of degree `m` given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGroupSpec {
    degree: usize,
    generators: Vec<Perm>,
}

impl PermGroupSpec {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<PermGroupSpec, PermError> {
        if generators.is_empty() || generators.iter().any(|g| g.degree() != degree) {
            return Err(PermError::NotBijection(degree));
        }
        Ok(PermGroupSpec { degree, generators })
    }

    pub fn symmetric(degree: usize) -> PermGroupSpec {
        if degree < 2 {
            return PermGroupSpec { degree, generators: alloc::vec![Perm::identity(degree)] };
        }
        let cycle: Vec<u32> = (0..degree as u32).collect();
        let gens = alloc::vec![
            Perm::from_cycles(degree, &[&[0, 1]]).unwrap(),
            Perm::from_cycles(degree, &[&cycle]).unwrap(),
        ];
        PermGroupSpec { degree, generators: gens }
    }

    pub fn cyclic(degree: usize) -> PermGroupSpec {
        let cycle: Vec<u32> = (0..degree as u32).collect();
        PermGroupSpec { degree, generators: alloc::vec![Perm::from_cycles(degree, &[&cycle]).unwrap()] }
    }

    /// Symmetries of a regular `degree`-gon (degree ≥ 3).
    pub fn dihedral(degree: usize) -> PermGroupSpec {
        let m = degree as u32;
        let rotation = Perm::from_images((0..m).map(|i| (i + 1) % m).collect()).unwrap();
        let reflection = Perm::from_images((0..m).map(|i| (m - i) % m).collect()).unwrap();
        PermGroupSpec { degree, generators: alloc::vec![rotation, reflection] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Number of elements, by closure.
    pub fn order(&self) -> usize {
        closure(self.degree, &self.generators).len()
    }
}

/// Every element of the group generated by `gens`.
pub fn closure(degree: usize, gens: &[Perm]) -> BTreeSet<Perm> {
    let mut seen = BTreeSet::new();
    let id = Perm::identity(degree);
    let mut queue = VecDeque::from([id.clone()]);
    seen.insert(id);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = g.compose(s);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierResult {
    /// Orbit of the base point in breadth-first order.
    pub orbit: Vec<u32>,
    /// `[G : Stab(base)]`, the orbit size.
    pub index: usize,
    /// Generators of the stabilizer, identities and repeats removed.
    pub subgroup_generators: Vec<Perm>,
}

/// Schreier generators `t_x·s·t_{x·s}⁻¹` of the stabilizer of `base`, with
/// the transversal `t_x` built breadth-first (generators in order, then
/// points in discovery order).
pub fn schreier_generators(group: &PermGroupSpec, base: u32) -> Result<SchreierResult, PermError> {
    if base as usize >= group.degree {
        return Err(PermError::PointOutOfRange { point: base, degree: group.degree });
    }
    let mut transversal: BTreeMap<u32, Perm> = BTreeMap::new();
    let mut orbit = alloc::vec![base];
    transversal.insert(base, Perm::identity(group.degree));
    let mut head = 0;
    while head < orbit.len() {
        let x = orbit[head];
        head += 1;
        for s in &group.generators {
            let y = s.apply(x);
            if !transversal.contains_key(&y) {
                let t = transversal[&x].compose(s);
                transversal.insert(y, t);
                orbit.push(y);
            }
        }
    }

    let mut seen = BTreeSet::new();
    let mut subgroup_generators = Vec::new();
    for &x in &orbit {
        for s in &group.generators {
            let y = s.apply(x);
            let h = transversal[&x].compose(s).compose(&transversal[&y].inverse());
            debug_assert_eq!(h.apply(base), base);
            if !h.is_identity() && seen.insert(h.clone()) {
                subgroup_generators.push(h);
            }
        }
    }
    Ok(SchreierResult { index: orbit.len(), orbit, subgroup_generators })
}

/// `1 + index·(g − 1)`.
pub fn generator_bound(g: u64, index: u64) -> u64 {
    1 + index * (g - 1)
}

/// `d^{dg+1}`.
pub fn kummer_bound(d: u64, g: u64) -> BigUint {
    num_traits::pow(BigUint::from(d), (d * g + 1) as usize)
}

/// `(n, N) = (d^{dg+1}, n²)`: a diagonal form of degree `d` in more than `N`
/// variables has a nontrivial zero.
pub fn diagonal_variable_bound(d: u64, g: u64) -> (BigUint, BigUint) {
    let n = kummer_bound(d, g);
    let big_n = &n * &n;
    (n, big_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn generator_bound_examples() {
        assert_eq!(generator_bound(2, 3), 4);
        assert_eq!(generator_bound(1, 7), 1);
        assert_eq!(generator_bound(3, 2), 5);
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(kummer_bound(2, 1), BigUint::from(8u32));
        assert_eq!(kummer_bound(1, 5), BigUint::from(1u32));
        assert_eq!(kummer_bound(3, 1), BigUint::from(81u32));
        assert_eq!(diagonal_variable_bound(2, 1), (BigUint::from(8u32), BigUint::from(64u32)));
        assert_eq!(diagonal_variable_bound(3, 1), (BigUint::from(81u32), BigUint::from(6561u32)));
        assert_eq!(diagonal_variable_bound(1, 4), (BigUint::from(1u32), BigUint::from(1u32)));
    }

    #[test]
    fn s3_stabilizer() {
        let g = PermGroupSpec::new(3, Perm::parse_list(3, "(0 1),(0 1 2)").unwrap()).unwrap();
        let r = schreier_generators(&g, 0).unwrap();
        assert_eq!(r.index, 3);
        assert!(r.subgroup_generators.len() as u64 <= generator_bound(2, 3));
        assert_eq!(closure(3, &r.subgroup_generators).len(), 2);
        assert!(r.subgroup_generators.iter().all(|h| h.apply(0) == 0));
    }

    #[test]
    fn s4_stabilizer() {
        let g = PermGroupSpec::symmetric(4);
        assert_eq!(g.order(), 24);
        let r = schreier_generators(&g, 0).unwrap();
        assert_eq!(r.index, 4);
        assert!(r.subgroup_generators.len() <= 5);
        assert_eq!(closure(4, &r.subgroup_generators).len(), 6);
    }

    #[test]
    fn fixed_base_keeps_generators() {
        let gens = Perm::parse_list(4, "(1 2),(2 3),(1 2)").unwrap();
        let g = PermGroupSpec::new(4, gens).unwrap();
        let r = schreier_generators(&g, 0).unwrap();
        assert_eq!(r.index, 1);
        assert_eq!(r.subgroup_generators, Perm::parse_list(4, "(1 2),(2 3)").unwrap());
    }

    #[test]
    fn cycle_notation() {
        let p = Perm::parse_list(5, "(0 1)(2 4 3)").unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].to_string(), "(0 1)(2 4 3)");
        assert_eq!(p[0].compose(&p[0].inverse()), Perm::identity(5));
        assert!(Perm::parse_list(3, "(0 3)").is_err());
        assert!(Perm::parse_list(3, "(0 1 0)").is_err());
        assert!(Perm::parse_list(3, "0 1").is_err());
        assert_eq!(Perm::parse_list(3, "()").unwrap()[0], Perm::identity(3));
    }

    #[test]
    fn standard_groups() {
        assert_eq!(PermGroupSpec::dihedral(5).order(), 10);
        assert_eq!(PermGroupSpec::cyclic(6).order(), 6);
        assert_eq!(PermGroupSpec::symmetric(5).order(), 120);
    }
}
