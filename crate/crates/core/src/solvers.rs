//! Nontrivial zeros of diagonal forms `a₀x₀^d + ⋯ + a_N x_N^d` over finite
//! fields.
//!
//! The constructive path reduces to the Fermat form: a representation
//! `−1 = b₁^d + ⋯ + b_r^d` gives the point `(1, b₁, …, b_r, 0, …)` on
//! `x₀^d + ⋯ + x_n^d = 0` whenever `r ≤ n`, and a form with `r + 1`
//! coefficients in one residue class is a scaled Fermat form after folding
//! d-th roots into the variables. `NoSolution` is only reported after an
//! exhaustive scan.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Element, Field, FieldError};
use crate::residue::{ResidueError, ResidueTable};
use crate::waring::{self, PowerSumCertificate, SigmaChain, WaringError};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Waring(#[from] WaringError),
    #[error("no nontrivial solution exists")]
    NoSolution,
    #[error("brute force needs {required} evaluations, cap is {cap}")]
    BruteForceCapExceeded { required: u128, cap: u64 },
    #[error("expected {expected} coordinates, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("a diagonal form needs at least two coefficients")]
    TooFewCoefficients,
    #[error("the number of variables n must be at least 1")]
    InvalidVariableCount,
    #[error("the exponent d must be positive")]
    ZeroExponent,
    #[error("invalid solution: {0}")]
    InvalidSolution(&'static str),
}

/// `a₀x₀^d + ⋯ + a_N x_N^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalForm {
    field: Field,
    d: u64,
    coefficients: Vec<Element>,
}

impl DiagonalForm {
    pub fn new(field: &Field, d: u64, coefficients: Vec<Element>) -> Result<DiagonalForm, SolveError> {
        if d == 0 {
            return Err(SolveError::ZeroExponent);
        }
        if coefficients.len() < 2 {
            return Err(SolveError::TooFewCoefficients);
        }
        if coefficients.iter().any(|a| a.field() != field) {
            return Err(FieldError::FieldMismatch.into());
        }
        Ok(DiagonalForm { field: field.clone(), d, coefficients })
    }

    /// `x₀^d + ⋯ + x_n^d`.
    pub fn fermat(field: &Field, d: u64, n: usize) -> Result<DiagonalForm, SolveError> {
        if n == 0 {
            return Err(SolveError::InvalidVariableCount);
        }
        DiagonalForm::new(field, d, vec![field.one(); n + 1])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn coefficients(&self) -> &[Element] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// The form `c·a`.
    pub fn scaled(&self, c: &Element) -> Result<DiagonalForm, SolveError> {
        let coefficients = self.coefficients.iter().map(|a| a.try_mul(c)).collect::<Result<_, _>>()?;
        DiagonalForm::new(&self.field, self.d, coefficients)
    }

    pub fn evaluate(&self, v: &[Element]) -> Result<Element, SolveError> {
        evaluate_form(self, v)
    }
}

/// `Σ aᵢ vᵢ^d`.
pub fn evaluate_form(form: &DiagonalForm, v: &[Element]) -> Result<Element, SolveError> {
    if v.len() != form.coefficients.len() {
        return Err(SolveError::LengthMismatch { expected: form.coefficients.len(), found: v.len() });
    }
    let mut sum = form.field.zero();
    for (a, x) in form.coefficients.iter().zip(v) {
        sum = sum.try_add(&a.try_mul(&x.pow(form.d))?)?;
    }
    Ok(sum)
}

/// A nonzero zero of a diagonal form, checked on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionVector {
    form: DiagonalForm,
    coordinates: Vec<Element>,
}

impl SolutionVector {
    pub fn new(form: DiagonalForm, coordinates: Vec<Element>) -> Result<SolutionVector, SolveError> {
        check_solution(&form, &coordinates)?;
        Ok(SolutionVector { form, coordinates })
    }

    pub fn form(&self) -> &DiagonalForm {
        &self.form
    }

    pub fn coordinates(&self) -> &[Element] {
        &self.coordinates
    }

    /// Re-evaluates the form at the coordinates.
    pub fn verify(&self) -> bool {
        check_solution(&self.form, &self.coordinates).is_ok()
    }
}

fn check_solution(form: &DiagonalForm, v: &[Element]) -> Result<(), SolveError> {
    let value = evaluate_form(form, v)?;
    if v.iter().all(Element::is_zero) {
        return Err(SolveError::InvalidSolution("zero vector"));
    }
    if !value.is_zero() {
        return Err(SolveError::InvalidSolution("form does not vanish"));
    }
    Ok(())
}

/// How [`DiagonalSolver::solve`] found its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    ZeroCoefficient,
    Coset,
    BruteForce,
}

/// A point on the Fermat hypersurface `x₀^d + ⋯ + x_n^d = 0`.
pub fn fermat_point(field: &Field, d: u64, n: usize, limits: &Limits) -> Result<SolutionVector, SolveError> {
    let form = DiagonalForm::fermat(field, d, n)?;
    let cert = waring::represent_minus_one(field, d, None, limits)?;
    match point_from_certificate(&form, &cert) {
        Some(v) => Ok(v),
        None => brute_force_point(&form, limits),
    }
}

fn point_from_certificate(form: &DiagonalForm, cert: &PowerSumCertificate) -> Option<SolutionVector> {
    let n = form.len() - 1;
    if cert.len() > n {
        return None;
    }
    let field = form.field();
    let mut coords = vec![field.zero(); n + 1];
    coords[0] = field.one();
    coords[1..=cert.len()].clone_from_slice(cert.witnesses());
    SolutionVector::new(form.clone(), coords).ok()
}

/// Constructive solver for diagonal forms of one degree over one finite
/// field. Holds the residue table and the minimal representation of −1.
#[derive(Debug, Clone)]
pub struct DiagonalSolver {
    table: ResidueTable,
    minus_one: PowerSumCertificate,
    limits: Limits,
}

impl DiagonalSolver {
    pub fn new(field: &Field, d: u64, limits: &Limits) -> Result<DiagonalSolver, SolveError> {
        let table = ResidueTable::new(field, d, limits)?;
        let chain = SigmaChain::from_table(table.clone());
        let (_, minus_one) = chain.rank(&field.from_int(-1))?;
        Ok(DiagonalSolver { table, minus_one, limits: *limits })
    }

    pub fn table(&self) -> &ResidueTable {
        &self.table
    }

    /// The minimal certificate for −1 used by the coset step.
    pub fn minus_one(&self) -> &PowerSumCertificate {
        &self.minus_one
    }

    fn check_form(&self, form: &DiagonalForm) -> Result<(), SolveError> {
        if form.field() != self.table.field() || form.d() != self.table.d() {
            return Err(FieldError::FieldMismatch.into());
        }
        Ok(())
    }

    /// The zero-coefficient and coset steps only; `None` if neither applies.
    pub fn constructive(&self, form: &DiagonalForm) -> Result<Option<(SolutionVector, SolveMethod)>, SolveError> {
        self.check_form(form)?;
        let field = form.field();
        let coeffs = form.coefficients();
        if let Some(i) = coeffs.iter().position(Element::is_zero) {
            let mut v = vec![field.zero(); coeffs.len()];
            v[i] = field.one();
            return Ok(Some((SolutionVector::new(form.clone(), v)?, SolveMethod::ZeroCoefficient)));
        }

        let classes: Vec<usize> = coeffs.iter().map(|a| self.table.class_of(a)).collect::<Result<_, _>>()?;
        let needed = self.minus_one.len() + 1;
        for class in 0..self.table.class_count() {
            let positions: Vec<usize> = (0..coeffs.len()).filter(|&i| classes[i] == class).take(needed).collect();
            if positions.len() < needed {
                continue;
            }
            // a_i = rep·u_i^d, so a_i x_i^d = rep·(u_i x_i)^d; solve Σ (u_i x_i)^d = 0
            let rep = self.table.representative(class);
            let mut v = vec![field.zero(); coeffs.len()];
            let fermat = core::iter::once(field.one()).chain(self.minus_one.witnesses().iter().cloned());
            for (&i, b) in positions.iter().zip(fermat) {
                let ratio = coeffs[i].try_div(&rep)?;
                let u = self.table.dth_root(&ratio).expect("same class as the representative");
                v[i] = b.try_div(&u)?;
            }
            return Ok(Some((SolutionVector::new(form.clone(), v)?, SolveMethod::Coset)));
        }
        Ok(None)
    }

    /// Constructive steps, then brute force.
    pub fn solve(&self, form: &DiagonalForm) -> Result<(SolutionVector, SolveMethod), SolveError> {
        if let Some(found) = self.constructive(form)? {
            return Ok(found);
        }
        Ok((brute_force_point(form, &self.limits)?, SolveMethod::BruteForce))
    }
}

/// A nontrivial zero of `form`, constructively when possible.
pub fn diagonal_solve(form: &DiagonalForm, limits: &Limits) -> Result<(SolutionVector, SolveMethod), SolveError> {
    DiagonalSolver::new(form.field(), form.d(), limits)?.solve(form)
}

/// Exhaustive search over projective representatives: for each position `k`
/// of the first nonzero coordinate, that coordinate is 1 and the later ones
/// run through all field elements (the last coordinate varying fastest).
/// Returns the first zero in this order.
pub fn brute_force_point(form: &DiagonalForm, limits: &Limits) -> Result<SolutionVector, SolveError> {
    let field = form.field();
    let q = field.checked_order(limits)?;
    let len = form.len();
    let required = (q as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if required > limits.oracle_cap as u128 {
        return Err(SolveError::BruteForceCapExceeded { required, cap: limits.oracle_cap });
    }

    let d = form.d();
    let powers: Vec<u64> = (0..q).map(|x| field.raw_pow(x, d)).collect();
    let coeffs: Vec<u64> = form.coefficients().iter().map(|a| a.index().unwrap()).collect();
    // terms[i][x] = a_i·x^d
    let terms: Vec<Vec<u64>> = coeffs.iter().map(|&a| powers.iter().map(|&p| field.raw_mul(a, p)).collect()).collect();

    for k in 0..len {
        let tail = len - k - 1;
        let mut digits = vec![0u64; tail];
        loop {
            let mut sum = terms[k][1];
            for (j, &x) in digits.iter().enumerate() {
                sum = field.raw_add(sum, terms[k + 1 + j][x as usize]);
            }
            if sum == 0 {
                let mut v = vec![field.zero(); len];
                v[k] = field.one();
                for (j, &x) in digits.iter().enumerate() {
                    v[k + 1 + j] = field.from_index(x)?;
                }
                return SolutionVector::new(form.clone(), v);
            }
            let Some(pos) = digits.iter().rposition(|&x| x + 1 < q) else {
                break;
            };
            digits[pos] += 1;
            digits[pos + 1..].iter_mut().for_each(|x| *x = 0);
        }
    }
    Err(SolveError::NoSolution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::{String, ToString};

    fn lim() -> Limits {
        Limits::default()
    }

    fn form(q: u64, d: u64, a: &[i64]) -> DiagonalForm {
        let f = Field::finite(q).unwrap();
        DiagonalForm::new(&f, d, a.iter().map(|&x| f.from_int(x)).collect()).unwrap()
    }

    fn strings(v: &SolutionVector) -> Vec<String> {
        v.coordinates().iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn evaluate_examples() {
        let f5 = form(5, 2, &[1, 1]);
        let v: Vec<Element> = [1, 2].iter().map(|&x| f5.field().from_int(x)).collect();
        assert!(evaluate_form(&f5, &v).unwrap().is_zero());
        let zeros = vec![f5.field().zero(); 2];
        assert!(evaluate_form(&f5, &zeros).unwrap().is_zero());
        let f7 = form(7, 3, &[1, 1]);
        let ones = vec![f7.field().one(); 2];
        assert_eq!(evaluate_form(&f7, &ones).unwrap(), f7.field().from_int(2));
        assert_eq!(
            evaluate_form(&f7, &ones[..1]).unwrap_err(),
            SolveError::LengthMismatch { expected: 2, found: 1 }
        );
    }

    #[test]
    fn fermat_examples() {
        let f5 = Field::finite(5).unwrap();
        assert_eq!(strings(&fermat_point(&f5, 2, 1, &lim()).unwrap()), ["1", "2"]);
        let f7 = Field::finite(7).unwrap();
        assert_eq!(strings(&fermat_point(&f7, 2, 2, &lim()).unwrap()), ["1", "3", "2"]);
        let f3 = Field::finite(3).unwrap();
        assert_eq!(fermat_point(&f3, 2, 1, &lim()).unwrap_err(), SolveError::NoSolution);
        assert_eq!(fermat_point(&f3, 2, 0, &lim()).unwrap_err(), SolveError::InvalidVariableCount);
    }

    #[test]
    fn diagonal_examples() {
        let (v, method) = diagonal_solve(&form(5, 2, &[1, 2, 3, 1, 2]), &lim()).unwrap();
        assert_eq!(method, SolveMethod::Coset);
        assert!(v.verify());
        let (v, method) = diagonal_solve(&form(7, 3, &[1, 0, 5]), &lim()).unwrap();
        assert_eq!((strings(&v), method), (vec!["0".into(), "1".into(), "0".into()], SolveMethod::ZeroCoefficient));
        assert_eq!(diagonal_solve(&form(3, 2, &[1, 1]), &lim()).unwrap_err(), SolveError::NoSolution);
    }

    #[test]
    fn coset_step_folds_roots() {
        // 3, 5, 6 are the non-squares mod 7; −1 needs two squares, so three coefficients in one class
        let (v, method) = diagonal_solve(&form(7, 2, &[3, 5, 6, 1]), &lim()).unwrap();
        assert_eq!(method, SolveMethod::Coset);
        assert!(v.verify());
    }

    #[test]
    fn brute_force_examples() {
        assert_eq!(strings(&brute_force_point(&form(5, 2, &[1, 1]), &lim()).unwrap()), ["1", "2"]);
        assert_eq!(brute_force_point(&form(3, 2, &[1, 1]), &lim()).unwrap_err(), SolveError::NoSolution);
        assert_eq!(strings(&brute_force_point(&form(5, 2, &[0, 1, 1]), &lim()).unwrap()), ["1", "0", "0"]);
        let tight = Limits { oracle_cap: 24, ..Limits::default() };
        assert!(matches!(
            brute_force_point(&form(5, 2, &[1, 1]), &tight),
            Err(SolveError::BruteForceCapExceeded { required: 25, cap: 24 })
        ));
    }

    #[test]
    fn solutions_reject_bad_vectors() {
        let f = form(5, 2, &[1, 1]);
        let k = f.field().clone();
        assert!(SolutionVector::new(f.clone(), vec![k.zero(), k.zero()]).is_err());
        assert!(SolutionVector::new(f.clone(), vec![k.one(), k.one()]).is_err());
        assert!(SolutionVector::new(f, vec![k.one(), k.from_int(3)]).is_ok());
    }
}
