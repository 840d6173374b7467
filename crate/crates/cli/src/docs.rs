//! The `cf/1` JSON documents emitted by every subcommand and consumed by
//! `verify`.
//!
//! Every document is an object with `"schema": "cf/1"` and a `"kind"` tag.
//! Field elements are strings in the element syntax of the named field;
//! big integers and rationals are strings as well.

use cfermat_core::bounds::{Perm, SchreierResult};
use cfermat_core::field::format_poly;
use cfermat_core::hilbert::HilbertIdentity;
use cfermat_core::solvers::{SolutionVector, SolveMethod};
use cfermat_core::waring::{PowerSumCertificate, SigmaChain};
use cfermat_core::{Element, Field, FieldSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA: &str = "cf/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema: String,
    #[serde(flatten)]
    pub doc: Document,
}

impl Envelope {
    pub fn new(doc: Document) -> Envelope {
        Envelope { schema: SCHEMA.to_string(), doc }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Parses a document, checking the schema tag.
    pub fn from_json(text: &str) -> Result<Envelope, CliError> {
        let env: Envelope = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
        if env.schema != SCHEMA {
            return Err(CliError::Schema(format!("unsupported schema '{}'", env.schema)));
        }
        Ok(env)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    FieldInfo(FieldInfoDoc),
    FieldElements(FieldElementsDoc),
    FieldArith(FieldArithDoc),
    FieldPow(FieldPowDoc),
    ResidueTable(ResidueTableDoc),
    SigmaChain(SigmaChainDoc),
    PowerSum(PowerSumDoc),
    HilbertIdentity(HilbertIdentityDoc),
    WeightedPower(WeightedPowerDoc),
    Solution(SolutionDoc),
    KummerBound(KummerBoundDoc),
    GeneratorBound(GeneratorBoundDoc),
    DiagonalBound(DiagonalBoundDoc),
    Schreier(SchreierDoc),
    Verification(VerificationDoc),
    Sweep(crate::sweep::SweepReport),
    Error(ErrorDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldInfoDoc {
    pub field: String,
    pub characteristic: u64,
    pub order: Option<String>,
    pub degree: u32,
    pub modulus: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldElementsDoc {
    pub field: String,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldArithDoc {
    pub field: String,
    pub op: String,
    pub a: String,
    pub b: String,
    pub result: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldPowDoc {
    pub field: String,
    pub base: String,
    pub exponent: u64,
    pub result: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueTableDoc {
    pub field: String,
    pub d: u64,
    pub class_count: usize,
    pub formula: u64,
    /// Members of each class in enumeration order; class 0 is the d-th powers.
    pub classes: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLevelDoc {
    pub r: usize,
    pub contains_zero: bool,
    pub classes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaChainDoc {
    pub field: String,
    pub d: u64,
    pub class_count: usize,
    pub stabilization_index: usize,
    pub levels: Vec<ChainLevelDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSumDoc {
    pub field: String,
    pub d: u64,
    pub target: String,
    pub witnesses: Vec<String>,
    /// Present when the certificate claims minimality.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertTermDoc {
    pub lambda: String,
    pub form: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HilbertIdentityDoc {
    pub field: String,
    pub n: usize,
    pub d: u32,
    pub terms: Vec<HilbertTermDoc>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedPowerDoc {
    pub field: String,
    pub lambda: String,
    pub base: String,
    pub e: u32,
    pub witnesses: Vec<String>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub field: String,
    pub d: u64,
    pub coefficients: Vec<String>,
    pub solution: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KummerBoundDoc {
    pub d: u64,
    pub g: u64,
    pub bound: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorBoundDoc {
    pub g: u64,
    pub index: u64,
    pub bound: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct DiagonalBoundDoc {
    pub d: u64,
    pub g: u64,
    pub n: String,
    pub N: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchreierDoc {
    pub degree: usize,
    pub generators: Vec<String>,
    pub base: u32,
    pub orbit: Vec<u32>,
    pub index: usize,
    pub subgroup_generators: Vec<String>,
    pub bound: u64,
    pub group_order: usize,
    pub stabilizer_order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationDoc {
    pub valid: bool,
    pub reason: String,
    pub checked_kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub result: String,
    pub message: String,
}

/// Spec string that reconstructs exactly this field, with the default
/// modulus of an extension field spelled out.
pub fn field_label(field: &Field) -> String {
    match field.spec() {
        FieldSpec::Extension { p, .. } if field.degree() == 1 => format!("p={p}"),
        FieldSpec::Extension { .. } => {
            format!("q={}:{}", field.order().unwrap(), format_poly(&field.modulus().unwrap()))
        }
        spec => spec.to_string(),
    }
}

pub fn strings(elems: &[Element]) -> Vec<String> {
    elems.iter().map(Element::to_string).collect()
}

pub fn power_sum_doc(cert: &PowerSumCertificate, rank: Option<usize>) -> PowerSumDoc {
    PowerSumDoc {
        field: field_label(cert.field()),
        d: cert.d(),
        target: cert.target().to_string(),
        witnesses: strings(cert.witnesses()),
        rank,
        verified: false,
    }
}

pub fn solution_doc(v: &SolutionVector, method: Option<SolveMethod>) -> SolutionDoc {
    SolutionDoc {
        field: field_label(v.form().field()),
        d: v.form().d(),
        coefficients: strings(v.form().coefficients()),
        solution: strings(v.coordinates()),
        method: method.map(|m| method_name(m).to_string()),
        verified: false,
    }
}

pub fn method_name(m: SolveMethod) -> &'static str {
    match m {
        SolveMethod::ZeroCoefficient => "zero_coefficient",
        SolveMethod::Coset => "coset",
        SolveMethod::BruteForce => "brute_force",
    }
}

pub fn identity_doc(id: &HilbertIdentity) -> HilbertIdentityDoc {
    HilbertIdentityDoc {
        field: "Q".to_string(),
        n: id.n(),
        d: id.d(),
        terms: id
            .terms()
            .iter()
            .map(|t| HilbertTermDoc {
                lambda: t.lambda.to_string(),
                form: t.form.iter().map(ToString::to_string).collect(),
            })
            .collect(),
        verified: false,
    }
}

pub fn chain_doc(chain: &SigmaChain) -> SigmaChainDoc {
    SigmaChainDoc {
        field: field_label(chain.field()),
        d: chain.d(),
        class_count: chain.class_count(),
        stabilization_index: chain.stabilization_index(),
        levels: chain
            .levels()
            .into_iter()
            .enumerate()
            .map(|(r, l)| ChainLevelDoc { r, contains_zero: l.contains_zero, classes: l.classes })
            .collect(),
    }
}

pub fn perm_strings(perms: &[Perm]) -> Vec<String> {
    perms.iter().map(Perm::to_string).collect()
}

pub fn schreier_doc(
    degree: usize,
    generators: &[Perm],
    base: u32,
    result: &SchreierResult,
    group_order: usize,
    stabilizer_order: usize,
) -> SchreierDoc {
    SchreierDoc {
        degree,
        generators: perm_strings(generators),
        base,
        orbit: result.orbit.clone(),
        index: result.index,
        subgroup_generators: perm_strings(&result.subgroup_generators),
        bound: cfermat_core::bounds::generator_bound(generators.len() as u64, result.index as u64),
        group_order,
        stabilizer_order,
    }
}

/// Plain-text rendering for `--format text`.
pub fn render_text(doc: &Document) -> String {
    let list = |v: &[String]| v.join(", ");
    match doc {
        Document::FieldInfo(d) => format!(
            "field {}\ncharacteristic {}\norder {}\ndegree {}{}",
            d.field,
            d.characteristic,
            d.order.as_deref().unwrap_or("infinite"),
            d.degree,
            d.modulus.as_ref().map(|m| format!("\nmodulus {m}")).unwrap_or_default()
        ),
        Document::FieldElements(d) => d.elements.join("\n"),
        Document::FieldArith(d) => d.result.clone(),
        Document::FieldPow(d) => d.result.clone(),
        Document::ResidueTable(d) => {
            let mut out = format!("{} classes (gcd formula {})", d.class_count, d.formula);
            for (i, c) in d.classes.iter().enumerate() {
                out.push_str(&format!("\nclass {i}: {}", list(c)));
            }
            out
        }
        Document::SigmaChain(d) => {
            let mut out = format!("stabilization index {} (class count {})", d.stabilization_index, d.class_count);
            for l in &d.levels {
                let zero = l.contains_zero.then(|| "0".to_string());
                let parts: Vec<String> = zero.into_iter().chain(l.classes.iter().map(|c| format!("class {c}"))).collect();
                out.push_str(&format!("\nr={}: {{{}}}", l.r, parts.join(", ")));
            }
            out
        }
        Document::PowerSum(d) => {
            let terms: Vec<String> = d.witnesses.iter().map(|w| format!("({w})^{}", d.d)).collect();
            let rank = d.rank.map(|r| format!("rank {r}\n")).unwrap_or_default();
            format!("{rank}{} = {}", d.target, terms.join(" + "))
        }
        Document::HilbertIdentity(d) => {
            let terms: Vec<String> =
                d.terms.iter().map(|t| format!("{} * ({})^{}", t.lambda, list(&t.form), 2 * d.d)).collect();
            let squares: Vec<String> = (1..=d.n).map(|i| format!("x{i}^2")).collect();
            format!("({})^{} = {}", squares.join("+"), d.d, terms.join("\n  + "))
        }
        Document::WeightedPower(d) => {
            let terms: Vec<String> = d.witnesses.iter().map(|w| format!("({w})^{}", d.e)).collect();
            format!("{} * ({})^{} = {}", d.lambda, d.base, d.e, terms.join(" + "))
        }
        Document::Solution(d) => format!("({}) verified={}", list(&d.solution), d.verified),
        Document::KummerBound(d) => d.bound.clone(),
        Document::GeneratorBound(d) => d.bound.clone(),
        Document::DiagonalBound(d) => format!("n = {}\nN = {}", d.n, d.N),
        Document::Schreier(d) => format!(
            "index {} (orbit {:?})\n{} generators (bound {}): {}",
            d.index,
            d.orbit,
            d.subgroup_generators.len(),
            d.bound,
            d.subgroup_generators.join(" ")
        ),
        Document::Verification(d) => {
            if d.valid {
                format!("valid {}", d.checked_kind)
            } else {
                format!("invalid {}: {}", d.checked_kind, d.reason)
            }
        }
        Document::Sweep(r) => r.render_text(),
        Document::Error(d) => format!("{}: {}", d.result, d.message),
    }
}
