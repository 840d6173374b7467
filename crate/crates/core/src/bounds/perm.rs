use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A permutation of `{0, …, m−1}` in image form: `p[i]` is the image of `i`.
///
/// Permutations act on the right, so `x·(pq) = (x·p)·q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("not a bijection of 0..{0}")]
    NotBijection(usize),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: u32, degree: usize },
    #[error("bad cycle notation: {0}")]
    Syntax(String),
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        Perm((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm, PermError> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &x in &images {
            if x as usize >= n || seen[x as usize] {
                return Err(PermError::NotBijection(n));
            }
            seen[x as usize] = true;
        }
        Ok(Perm(images))
    }

    /// Builds a permutation of the given degree from disjoint or overlapping
    /// cycles, applied left to right.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Perm, PermError> {
        let mut acc = Perm::identity(degree);
        for cycle in cycles {
            let mut images: Vec<u32> = (0..degree as u32).collect();
            let mut seen = BTreeSet::new();
            for (i, &x) in cycle.iter().enumerate() {
                if x as usize >= degree {
                    return Err(PermError::PointOutOfRange { point: x, degree });
                }
                if !seen.insert(x) {
                    return Err(PermError::NotBijection(degree));
                }
                images[x as usize] = cycle[(i + 1) % cycle.len()];
            }
            acc = acc.compose(&Perm(images));
        }
        Ok(acc)
    }

    /// Parses `"(0 1),(0 1 2 3)"`-style lists; `"()"` is the identity.
    pub fn parse_list(degree: usize, s: &str) -> Result<Vec<Perm>, PermError> {
        let mut out = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            rest = rest.trim_start_matches(|c: char| c == ',' || c.is_whitespace());
            if rest.is_empty() {
                break;
            }
            // one generator: a run of adjacent "(...)" groups
            let mut cycles: Vec<Vec<u32>> = Vec::new();
            while let Some(body) = rest.strip_prefix('(') {
                let end = body.find(')').ok_or_else(|| PermError::Syntax(s.into()))?;
                let points = body[..end]
                    .split(|c: char| c == ' ' || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<u32>().map_err(|_| PermError::Syntax(s.into())))
                    .collect::<Result<Vec<_>, _>>()?;
                cycles.push(points);
                rest = body[end + 1..].trim_start_matches(' ');
            }
            if cycles.is_empty() {
                return Err(PermError::Syntax(s.into()));
            }
            let refs: Vec<&[u32]> = cycles.iter().map(Vec::as_slice).collect();
            out.push(Perm::from_cycles(degree, &refs)?);
        }
        Ok(out)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = alloc::vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Disjoint cycles of length ≥ 2, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = alloc::vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start as u32;
            while !seen[x as usize] {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}
