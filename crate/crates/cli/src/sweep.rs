//! Grid experiment over finite fields 𝔽_q and exponents d: class counts
//! against `gcd(d, q−1)`, Σ-chain stabilization, constructive Fermat points at
//! `n = |K_d|`, the oracle's minimal Fermat `n`, the Kummer bound with `g = 1`,
//! and optionally seeded random diagonal forms with `|K_d|² + 1` coefficients.

use cfermat_core::bounds::kummer_bound;
use cfermat_core::field::prime_power;
use cfermat_core::residue::{class_count_formula, ResidueTable};
use cfermat_core::solvers::{self, DiagonalForm, DiagonalSolver};
use cfermat_core::waring::{self, SigmaChain};
use cfermat_core::{Field, Limits};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub q: u64,
    pub d: u64,
    pub class_count: usize,
    pub formula: u64,
    pub stabilization_index: usize,
    /// Witnesses in the minimal representation of −1.
    pub minus_one_rank: usize,
    /// Least n with a point on x₀^d + ⋯ + x_n^d = 0, by element-space search.
    pub oracle_min_fermat_n: usize,
    /// The n handed to the constructive Fermat solver.
    pub constructive_n: usize,
    pub fermat_verified: bool,
    pub kummer_bound: String,
    /// Random diagonal forms solved without brute force, out of the samples.
    pub diagonal_constructive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub q_max: u64,
    pub d_max: u64,
    pub seed: u64,
    pub diagonal_samples: usize,
    pub cells: Vec<SweepCell>,
    pub violations: Vec<String>,
}

impl SweepReport {
    pub fn render_text(&self) -> String {
        let mut out = String::from("    q   d  |K_d|  stab  rank(-1)  min n  fermat  diag");
        for c in &self.cells {
            out.push_str(&format!(
                "\n{:>5} {:>3} {:>6} {:>5} {:>9} {:>6} {:>7} {:>5}",
                c.q,
                c.d,
                c.class_count,
                c.stabilization_index,
                c.minus_one_rank,
                c.oracle_min_fermat_n,
                if c.fermat_verified { "ok" } else { "FAIL" },
                format!("{}/{}", c.diagonal_constructive, self.diagonal_samples),
            ));
        }
        if self.violations.is_empty() {
            out.push_str("\nviolations: none");
        } else {
            out.push_str("\nviolations:");
            for v in &self.violations {
                out.push_str(&format!("\n  {v}"));
            }
        }
        out
    }
}

pub fn prime_powers_up_to(q_max: u64) -> Vec<u64> {
    (2..=q_max).filter(|&q| prime_power(q).is_some()).collect()
}

/// Deterministic per-cell seed.
fn cell_seed(seed: u64, q: u64, d: u64) -> u64 {
    seed ^ q.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ d.wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
}

/// Runs the grid. Cells are computed in parallel and reported in order of
/// ascending `q`, then ascending `d`.
pub fn sweep(q_max: u64, d_max: u64, seed: u64, diagonal_samples: usize, limits: &Limits) -> Result<SweepReport, CliError> {
    if q_max > limits.enumeration_cap {
        return Err(CliError::Resource(format!(
            "q_max {q_max} exceeds the enumeration cap {}",
            limits.enumeration_cap
        )));
    }
    let grid: Vec<(u64, u64)> =
        prime_powers_up_to(q_max).into_iter().flat_map(|q| (1..=d_max).map(move |d| (q, d))).collect();
    let results: Vec<Result<(SweepCell, Vec<String>), CliError>> =
        grid.par_iter().map(|&(q, d)| run_cell(q, d, seed, diagonal_samples, limits)).collect();

    let mut cells = Vec::with_capacity(results.len());
    let mut violations = Vec::new();
    for r in results {
        let (cell, v) = r?;
        cells.push(cell);
        violations.extend(v);
    }
    Ok(SweepReport { q_max, d_max, seed, diagonal_samples, cells, violations })
}

fn run_cell(q: u64, d: u64, seed: u64, samples: usize, limits: &Limits) -> Result<(SweepCell, Vec<String>), CliError> {
    let field = Field::finite(q)?;
    let table = ResidueTable::new(&field, d, limits)?;
    let n = table.class_count();
    let formula = class_count_formula(q, d);
    let chain = SigmaChain::from_table(table);
    let minus_one = field.from_int(-1);
    let (rank, _) = chain.rank(&minus_one)?;
    let oracle = waring::brute_force_rank(&field, d, &minus_one, limits)?.unwrap_or(usize::MAX);
    let fermat_verified = match solvers::fermat_point(&field, d, n, limits) {
        Ok(v) => v.verify(),
        Err(_) => false,
    };
    let kummer = kummer_bound(d, 1);

    let mut violations = Vec::new();
    let tag = format!("q={q} d={d}");
    if n as u64 != formula {
        violations.push(format!("{tag}: class count {n} != gcd(d, q-1) = {formula}"));
    }
    if chain.stabilization_index() > n {
        violations.push(format!("{tag}: stabilization index {} > {n}", chain.stabilization_index()));
    }
    if !fermat_verified {
        violations.push(format!("{tag}: no verified Fermat point at n = {n}"));
    }
    if oracle > n {
        violations.push(format!("{tag}: oracle minimal Fermat n {oracle} > {n}"));
    }
    if BigUint::from(n) > kummer {
        violations.push(format!("{tag}: class count {n} > kummer bound {kummer}"));
    }

    let mut diagonal_constructive = 0;
    if samples > 0 {
        let solver = DiagonalSolver::new(&field, d, limits)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(seed, q, d));
        for _ in 0..samples {
            let coeffs = (0..n * n + 1).map(|_| field.from_index(rng.gen_range(1..q))).collect::<Result<Vec<_>, _>>()?;
            let form = DiagonalForm::new(&field, d, coeffs)?;
            match solver.constructive(&form)? {
                Some((v, _)) if v.verify() => diagonal_constructive += 1,
                _ => violations.push(format!("{tag}: random form of length {} needed brute force", n * n + 1)),
            }
        }
    }

    let cell = SweepCell {
        q,
        d,
        class_count: n,
        formula,
        stabilization_index: chain.stabilization_index(),
        minus_one_rank: rank,
        oracle_min_fermat_n: oracle,
        constructive_n: n,
        fermat_verified,
        kummer_bound: kummer.to_string(),
        diagonal_constructive,
    };
    Ok((cell, violations))
}
