//! Re-checks a `cf/1` document using only its own contents.
//!
//! Structural problems (bad JSON, missing keys, unknown kinds) are schema
//! errors. Anything that parses but does not hold, including element strings
//! that are not valid in the named field, makes the document invalid.

use std::collections::BTreeSet;

use cfermat_core::bounds::{self, Perm, PermGroupSpec};
use cfermat_core::hilbert::{self, HilbertTerm};
use cfermat_core::residue::class_count_formula;
use cfermat_core::solvers::{DiagonalForm, SolutionVector};
use cfermat_core::waring::{check_power_sum, SigmaChain};
use cfermat_core::{element_arith, ArithOp, Element, Field, Limits, Rational};
use num_traits::Zero;

use crate::docs::*;
use crate::error::CliError;

/// Largest permutation degree whose closure `verify` will enumerate.
pub const MAX_CLOSURE_DEGREE: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub valid: bool,
    pub reason: String,
}

impl Verdict {
    fn ok() -> Verdict {
        Verdict { valid: true, reason: "ok".into() }
    }
}

/// Why a document is invalid.
struct Invalid(String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Invalid {
        Invalid(e.to_string())
    }
}

type Check = Result<(), Invalid>;

fn fail(msg: impl Into<String>) -> Check {
    Err(Invalid(msg.into()))
}

fn ensure(cond: bool, msg: &str) -> Check {
    if cond {
        Ok(())
    } else {
        fail(msg)
    }
}

pub fn kind_name(doc: &Document) -> &'static str {
    match doc {
        Document::FieldInfo(_) => "field_info",
        Document::FieldElements(_) => "field_elements",
        Document::FieldArith(_) => "field_arith",
        Document::FieldPow(_) => "field_pow",
        Document::ResidueTable(_) => "residue_table",
        Document::SigmaChain(_) => "sigma_chain",
        Document::PowerSum(_) => "power_sum",
        Document::HilbertIdentity(_) => "hilbert_identity",
        Document::WeightedPower(_) => "weighted_power",
        Document::Solution(_) => "solution",
        Document::KummerBound(_) => "kummer_bound",
        Document::GeneratorBound(_) => "generator_bound",
        Document::DiagonalBound(_) => "diagonal_bound",
        Document::Schreier(_) => "schreier",
        Document::Verification(_) => "verification",
        Document::Sweep(_) => "sweep",
        Document::Error(_) => "error",
    }
}

/// Parses and verifies a JSON document.
pub fn verify_json(text: &str, limits: &Limits) -> Result<Verdict, CliError> {
    verify_document(&Envelope::from_json(text)?.doc, limits)
}

pub fn verify_document(doc: &Document, limits: &Limits) -> Result<Verdict, CliError> {
    let outcome = match doc {
        Document::FieldInfo(d) => check_field_info(d),
        Document::FieldElements(d) => check_elements(d, limits)?,
        Document::FieldArith(d) => check_arith(d),
        Document::FieldPow(d) => check_pow(d),
        Document::ResidueTable(d) => check_residue(d, limits)?,
        Document::SigmaChain(d) => check_chain(d, limits)?,
        Document::PowerSum(d) => check_power_sum_doc(d, limits)?,
        Document::HilbertIdentity(d) => check_identity(d),
        Document::WeightedPower(d) => check_weighted(d),
        Document::Solution(d) => check_solution(d),
        Document::KummerBound(d) => check_kummer(d),
        Document::GeneratorBound(d) => check_generator_bound(d),
        Document::DiagonalBound(d) => check_diagonal_bound(d),
        Document::Schreier(d) => check_schreier(d)?,
        Document::Verification(_) | Document::Sweep(_) | Document::Error(_) => {
            return Err(CliError::Schema(format!("'{}' documents carry no certificate", kind_name(doc))));
        }
    };
    Ok(match outcome {
        Ok(()) => Verdict::ok(),
        Err(Invalid(reason)) => Verdict { valid: false, reason },
    })
}

fn field(spec: &str) -> Result<Field, Invalid> {
    spec.parse::<Field>().map_err(|e| Invalid(format!("field '{spec}': {e}")))
}

fn element(f: &Field, s: &str) -> Result<Element, Invalid> {
    f.parse_element(s).map_err(|e| Invalid(format!("element '{s}': {e}")))
}

fn elements(f: &Field, v: &[String]) -> Result<Vec<Element>, Invalid> {
    v.iter().map(|s| element(f, s)).collect()
}

fn rational(s: &str) -> Result<Rational, Invalid> {
    Field::parse_rational(s).map_err(|e| Invalid(format!("rational '{s}': {e}")))
}

/// Fails with a resource error when the field is too large to enumerate, so
/// a cap is never reported as an invalid document.
fn finite_order(f: &Field, limits: &Limits) -> Result<Result<u64, Invalid>, CliError> {
    match f.order() {
        None => Ok(Err(Invalid("field is infinite".into()))),
        Some(q) if q > limits.enumeration_cap => Err(CliError::Resource(format!(
            "field of order {q} exceeds the enumeration cap {}",
            limits.enumeration_cap
        ))),
        Some(q) => Ok(Ok(q)),
    }
}

fn check_field_info(d: &FieldInfoDoc) -> Check {
    let f = field(&d.field)?;
    ensure(d.characteristic == f.characteristic(), "characteristic differs")?;
    ensure(d.order == f.order().map(|q| q.to_string()), "order differs")?;
    ensure(d.degree == f.degree(), "degree differs")?;
    let modulus = f.modulus().map(|m| cfermat_core::field::format_poly(&m));
    ensure(d.modulus == modulus, "modulus differs")
}

fn check_elements(d: &FieldElementsDoc, limits: &Limits) -> Result<Check, CliError> {
    let f = match field(&d.field) {
        Ok(f) => f,
        Err(e) => return Ok(Err(e)),
    };
    if let Err(e) = finite_order(&f, limits)? {
        return Ok(Err(e));
    }
    let expected = strings(&f.enumerate_elements(limits)?);
    Ok(ensure(d.elements == expected, "element list differs from the enumeration"))
}

fn parse_op(op: &str) -> Result<ArithOp, Invalid> {
    Ok(match op {
        "add" => ArithOp::Add,
        "sub" => ArithOp::Sub,
        "mul" => ArithOp::Mul,
        "div" => ArithOp::Div,
        _ => return Err(Invalid(format!("unknown operation '{op}'"))),
    })
}

fn check_arith(d: &FieldArithDoc) -> Check {
    let f = field(&d.field)?;
    let (a, b, result) = (element(&f, &d.a)?, element(&f, &d.b)?, element(&f, &d.result)?);
    ensure(element_arith(&a, &b, parse_op(&d.op)?)? == result, "result differs")
}

fn check_pow(d: &FieldPowDoc) -> Check {
    let f = field(&d.field)?;
    let (a, result) = (element(&f, &d.base)?, element(&f, &d.result)?);
    ensure(a.pow(d.exponent) == result, "result differs")
}

fn check_residue(d: &ResidueTableDoc, limits: &Limits) -> Result<Check, CliError> {
    let f = match field(&d.field) {
        Ok(f) => f,
        Err(e) => return Ok(Err(e)),
    };
    let q = match finite_order(&f, limits)? {
        Ok(q) => q,
        Err(e) => return Ok(Err(e)),
    };
    Ok(check_residue_classes(d, &f, q))
}

fn check_residue_classes(d: &ResidueTableDoc, f: &Field, q: u64) -> Check {
    ensure(d.d >= 1, "d must be positive")?;
    ensure(d.formula == class_count_formula(q, d.d), "formula value differs from gcd(d, q-1)")?;
    ensure(d.class_count == d.classes.len(), "class_count differs from the number of classes")?;
    let classes: Vec<Vec<Element>> = d.classes.iter().map(|c| elements(f, c)).collect::<Result<_, _>>()?;

    // the classes partition the nonzero elements, each listed in index order
    let mut seen = BTreeSet::new();
    for class in &classes {
        ensure(!class.is_empty(), "empty class")?;
        let idx: Vec<u64> = class.iter().map(|x| x.index().unwrap()).collect();
        ensure(idx.windows(2).all(|w| w[0] < w[1]), "class members out of enumeration order")?;
        for i in idx {
            ensure(i != 0, "zero listed in a class")?;
            ensure(seen.insert(i), "element listed twice")?;
        }
    }
    ensure(seen.len() as u64 == q - 1, "classes do not cover the nonzero elements")?;

    let powers: BTreeSet<u64> = (1..q).map(|i| f.from_index(i).unwrap().pow(d.d).index().unwrap()).collect();
    let class0: BTreeSet<u64> = classes[0].iter().map(|x| x.index().unwrap()).collect();
    ensure(class0 == powers, "class 0 is not the set of nonzero d-th powers")?;
    for class in &classes {
        let first_inv = class[0].inv()?;
        for x in class {
            ensure(powers.contains(&(x * &first_inv).index().unwrap()), "class is not a single coset")?;
        }
    }
    // numbered by first appearance after class 0
    let firsts: Vec<u64> = classes[1..].iter().map(|c| c[0].index().unwrap()).collect();
    ensure(firsts.windows(2).all(|w| w[0] < w[1]), "classes out of first-appearance order")
}

fn check_chain(d: &SigmaChainDoc, limits: &Limits) -> Result<Check, CliError> {
    let f = match field(&d.field) {
        Ok(f) => f,
        Err(e) => return Ok(Err(e)),
    };
    if let Err(e) = finite_order(&f, limits)? {
        return Ok(Err(e));
    }
    if d.d == 0 {
        return Ok(fail("d must be positive"));
    }
    let expected = chain_doc(&SigmaChain::new(&f, d.d, limits)?);
    Ok(ensure(*d == expected, "chain differs from the recomputed chain"))
}

fn check_power_sum_doc(d: &PowerSumDoc, limits: &Limits) -> Result<Check, CliError> {
    let f = match field(&d.field) {
        Ok(f) => f,
        Err(e) => return Ok(Err(e)),
    };
    let parsed = element(&f, &d.target).and_then(|t| Ok((t, elements(&f, &d.witnesses)?)));
    let (target, witnesses) = match parsed {
        Ok(p) => p,
        Err(e) => return Ok(Err(e)),
    };
    if let Err(e) = check_power_sum(&target, d.d, &witnesses) {
        return Ok(fail(e.to_string()));
    }
    let Some(rank) = d.rank else {
        return Ok(Ok(()));
    };
    if rank != witnesses.len() {
        return Ok(fail("rank differs from the witness count"));
    }
    if let Err(e) = finite_order(&f, limits)? {
        return Ok(Err(Invalid(format!("minimality cannot be checked: {}", e.0))));
    }
    let chain = SigmaChain::new(&f, d.d, limits)?;
    Ok(match chain.rank(&target) {
        Ok((r, _)) if r == rank => Ok(()),
        _ => fail("rank is not minimal"),
    })
}

fn check_identity(d: &HilbertIdentityDoc) -> Check {
    ensure(d.field == "Q", "identities are over Q")?;
    ensure(d.n >= 1 && d.d >= 1, "n and d must be positive")?;
    let mut terms = Vec::with_capacity(d.terms.len());
    for t in &d.terms {
        let lambda = rational(&t.lambda)?;
        ensure(lambda > Rational::zero(), "weights must be positive")?;
        ensure(t.form.len() == d.n, "linear form has the wrong length")?;
        let form = t.form.iter().map(|c| rational(c)).collect::<Result<Vec<_>, _>>()?;
        terms.push(HilbertTerm { lambda, form });
    }
    ensure(!terms.is_empty(), "no terms")?;
    ensure(hilbert::verify_identity(d.n, d.d, &terms), "expansion differs from (x1^2+...+xn^2)^d")
}

fn check_weighted(d: &WeightedPowerDoc) -> Check {
    let f = field(&d.field)?;
    ensure(f.characteristic() == 0, "weights are absorbed in characteristic zero only")?;
    ensure(d.e >= 2 && d.e % 2 == 0, "exponent must be positive and even")?;
    let lambda = rational(&d.lambda)?;
    ensure(lambda > Rational::zero(), "weight must be positive")?;
    let base = element(&f, &d.base)?;
    let witnesses = elements(&f, &d.witnesses)?;
    ensure(!witnesses.is_empty(), "no witnesses")?;
    ensure(witnesses.iter().all(|w| !w.is_zero()), "zero witness")?;
    let sum = witnesses.iter().fold(f.zero(), |acc, w| acc + w.pow(d.e as u64));
    ensure(sum == base.pow(d.e as u64).scale(&lambda)?, "sum of powers differs from the weighted power")
}

fn check_solution(d: &SolutionDoc) -> Check {
    let f = field(&d.field)?;
    let form = DiagonalForm::new(&f, d.d, elements(&f, &d.coefficients)?)?;
    SolutionVector::new(form, elements(&f, &d.solution)?)?;
    Ok(())
}

fn check_kummer(d: &KummerBoundDoc) -> Check {
    ensure(d.d >= 1 && d.g >= 1, "d and g must be positive")?;
    ensure(d.bound == bounds::kummer_bound(d.d, d.g).to_string(), "bound differs from d^(dg+1)")
}

fn check_generator_bound(d: &GeneratorBoundDoc) -> Check {
    ensure(d.g >= 1 && d.index >= 1, "g and index must be positive")?;
    ensure(d.bound == bounds::generator_bound(d.g, d.index).to_string(), "bound differs from 1 + index(g-1)")
}

fn check_diagonal_bound(d: &DiagonalBoundDoc) -> Check {
    ensure(d.d >= 1 && d.g >= 1, "d and g must be positive")?;
    let (n, big_n) = bounds::diagonal_variable_bound(d.d, d.g);
    ensure(d.n == n.to_string() && d.N == big_n.to_string(), "bounds differ from (d^(dg+1), n^2)")
}

fn perms(degree: usize, v: &[String]) -> Result<Vec<Perm>, Invalid> {
    let mut out = Vec::with_capacity(v.len());
    for s in v {
        let mut p = Perm::parse_list(degree, s)?;
        if p.len() != 1 {
            return Err(Invalid(format!("'{s}' is not a single permutation")));
        }
        out.push(p.pop().unwrap());
    }
    Ok(out)
}

fn check_schreier(d: &SchreierDoc) -> Result<Check, CliError> {
    if d.degree > MAX_CLOSURE_DEGREE {
        return Err(CliError::Resource(format!(
            "closure of degree {} exceeds the verifier limit {MAX_CLOSURE_DEGREE}",
            d.degree
        )));
    }
    Ok(check_schreier_contents(d))
}

fn check_schreier_contents(d: &SchreierDoc) -> Check {
    let gens = perms(d.degree, &d.generators)?;
    let group = PermGroupSpec::new(d.degree, gens)?;
    ensure((d.base as usize) < d.degree, "base out of range")?;
    let sub = perms(d.degree, &d.subgroup_generators)?;

    let mut distinct = BTreeSet::new();
    for h in &sub {
        ensure(h.apply(d.base) == d.base, "a subgroup generator moves the base point")?;
        ensure(!h.is_identity(), "identity listed as a generator")?;
        ensure(distinct.insert(h.clone()), "duplicate generator")?;
    }
    let g = group.generators().len() as u64;
    ensure(d.bound == bounds::generator_bound(g, d.index as u64), "bound differs from 1 + index(g-1)")?;
    ensure(sub.len() as u64 <= d.bound, "more generators than the bound allows")?;

    // orbit by plain search over the generators
    let mut orbit = BTreeSet::from([d.base]);
    let mut frontier = vec![d.base];
    while let Some(x) = frontier.pop() {
        for s in group.generators() {
            if orbit.insert(s.apply(x)) {
                frontier.push(s.apply(x));
            }
        }
    }
    let listed: BTreeSet<u32> = d.orbit.iter().copied().collect();
    ensure(listed == orbit && d.orbit.len() == orbit.len(), "orbit differs")?;
    ensure(d.index == orbit.len(), "index differs from the orbit size")?;

    let whole = bounds::closure(d.degree, group.generators());
    ensure(d.group_order == whole.len(), "group order differs")?;
    let stabilizer = whole.iter().filter(|p| p.apply(d.base) == d.base).count();
    let generated = if sub.is_empty() { 1 } else { bounds::closure(d.degree, &sub).len() };
    ensure(d.stabilizer_order == generated, "stabilizer order differs")?;
    ensure(generated == stabilizer, "generators do not generate the full stabilizer")?;
    ensure(generated * d.index == whole.len(), "orbit-stabilizer count fails")
}

/// Re-verifies a freshly built document through its JSON serialization and
/// records the outcome in its `verified` flag.
pub fn stamp_verified(doc: &mut Document, limits: &Limits) -> Result<bool, CliError> {
    let json = Envelope::new(doc.clone()).to_json();
    let valid = verify_json(&json, limits)?.valid;
    match doc {
        Document::PowerSum(d) => d.verified = valid,
        Document::HilbertIdentity(d) => d.verified = valid,
        Document::WeightedPower(d) => d.verified = valid,
        Document::Solution(d) => d.verified = valid,
        _ => {}
    }
    Ok(valid)
}
