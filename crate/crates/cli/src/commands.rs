use std::io::Read;
use std::path::PathBuf;

use cfermat_core::bounds::{self, Perm, PermGroupSpec};
use cfermat_core::hilbert::{self, PowerDecomposer};
use cfermat_core::residue::{class_count_formula, ResidueTable};
use cfermat_core::solvers::{self, DiagonalForm, DiagonalSolver, SolveMethod};
use cfermat_core::waring::{self, PowerSumCertificate, SigmaChain};
use cfermat_core::{element_arith, ArithOp, Element, Field, Limits};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Config;
use crate::docs::*;
use crate::error::{CliError, EXIT_DOMAIN, EXIT_OK};
use crate::sweep;
use crate::verify::{self, stamp_verified};

#[derive(Debug, Parser)]
#[command(name = "cfermat", version, about = "Sums of powers, Fermat hypersurfaces and diagonal forms over exact fields")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Brute-force evaluation cap (overrides the config file).
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    /// Config file (default: $CFERMAT_CONFIG or ~/.config/cfermat/config.toml).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field construction and arithmetic.
    #[command(subcommand)]
    Field(FieldCmd),
    /// Power residue classes K^×/(K^×)^d.
    Residue {
        #[command(flatten)]
        field: FieldSel,
        #[arg(long)]
        d: u64,
    },
    /// Sums of d-th powers.
    #[command(subcommand)]
    Waring(WaringCmd),
    /// Hilbert identities and weight absorption.
    #[command(subcommand)]
    Hilbert(HilbertCmd),
    /// A point on x0^d + ... + xn^d = 0.
    Fermat {
        #[command(flatten)]
        field: FieldSel,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: usize,
    },
    /// A nontrivial zero of a0 x0^d + ... + aN xN^d.
    Diagonal {
        #[command(flatten)]
        field: FieldSel,
        #[arg(long)]
        d: u64,
        /// Comma-separated coefficients.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// Skip the constructive steps.
        #[arg(long)]
        brute: bool,
    },
    /// Closed-form bounds and Schreier generators.
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Re-check a JSON document ("-" reads standard input).
    Verify { path: String },
    /// Run the finite-field grid experiment.
    Sweep {
        #[arg(long)]
        q_max: u64,
        #[arg(long)]
        d_max: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random diagonal forms per cell.
        #[arg(long, default_value_t = 0)]
        diagonal_samples: usize,
    },
}

#[derive(Debug, Args)]
pub struct FieldSel {
    /// Finite field order (default modulus).
    #[arg(long, conflicts_with = "field")]
    pub q: Option<u64>,
    /// Field spec: p=7, q=9:x^2+1, Q, Q[x]/(x^2+1).
    #[arg(long)]
    pub field: Option<String>,
}

impl FieldSel {
    fn resolve(&self) -> Result<Field, CliError> {
        match (&self.q, &self.field) {
            (Some(q), _) => Ok(Field::finite(*q)?),
            (None, Some(spec)) => Ok(spec.parse::<Field>()?),
            (None, None) => Err(CliError::Usage("one of --q or --field is required".into())),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum FieldCmd {
    Info {
        #[command(flatten)]
        field: FieldSel,
    },
    /// All elements in enumeration order.
    Elements {
        #[command(flatten)]
        field: FieldSel,
    },
    Arith {
        #[command(flatten)]
        field: FieldSel,
        #[arg(long, value_enum)]
        op: OpArg,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    Pow {
        #[command(flatten)]
        field: FieldSel,
        #[arg(allow_hyphen_values = true)]
        a: String,
        e: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpArg {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Subcommand)]
pub enum WaringCmd {
    /// The chain Σ_{d,0} ⊆ Σ_{d,1} ⊆ ... until it stabilizes.
    Chain {
        #[command(flatten)]
        field: FieldSel,
        #[arg(long)]
        d: u64,
    },
    /// Minimal representation of c as a sum of d-th powers.
    Rank {
        #[command(flatten)]
        field: FieldSel,
        #[arg(long)]
        d: u64,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
    /// −1 as a sum of d-th powers.
    MinusOne {
        #[command(flatten)]
        field: FieldSel,
        #[arg(long)]
        d: u64,
        /// Characteristic zero: comma-separated squares summing to −1.
        #[arg(long, allow_hyphen_values = true)]
        squares: Option<String>,
    },
    /// c as a sum of squares, given squares summing to −1.
    Squares {
        #[command(flatten)]
        field: FieldSel,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, allow_hyphen_values = true)]
        minus_one: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum HilbertCmd {
    /// (x1^2+...+xn^2)^d = Σ λ_i (ℓ_i · x)^{2d}.
    Find {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u32,
    },
    /// λ·base^e as a sum of e-th powers.
    Scale {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        base: String,
        #[arg(long)]
        e: u32,
        /// Fewer witnesses via integer decomposition of the weight.
        #[arg(long)]
        compact: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// d^(dg+1).
    Kummer {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        g: u64,
    },
    /// 1 + index·(g − 1).
    Generators {
        #[arg(long)]
        g: u64,
        #[arg(long)]
        index: u64,
    },
    /// (n, N) = (d^(dg+1), n²).
    Diagonal {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        g: u64,
    },
    /// Schreier generators of a point stabilizer.
    Schreier {
        #[arg(long)]
        degree: usize,
        /// Generators in cycle notation, e.g. "(0 1),(0 1 2 3)".
        #[arg(long)]
        gens: String,
        #[arg(long)]
        base: u32,
    },
}

/// A finished command: the document to print and the exit status.
pub struct Output {
    pub doc: Document,
    pub exit: i32,
}

impl Output {
    fn ok(doc: Document) -> Output {
        Output { doc, exit: EXIT_OK }
    }
}

pub fn limits_for(cli: &Cli) -> Result<Limits, CliError> {
    let mut limits = Limits::default();
    Config::discover(cli.config.as_deref())?.apply(&mut limits);
    if let Some(cap) = cli.cap {
        limits.oracle_cap = cap;
    }
    Ok(limits)
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let limits = limits_for(cli)?;
    match &cli.command {
        Command::Field(cmd) => run_field(cmd, &limits),
        Command::Residue { field, d } => {
            let f = field.resolve()?;
            let table = ResidueTable::new(&f, *d, &limits)?;
            let classes = (0..table.class_count()).map(|c| strings(&table.members(c))).collect();
            Ok(Output::ok(Document::ResidueTable(ResidueTableDoc {
                field: field_label(&f),
                d: *d,
                class_count: table.class_count(),
                formula: class_count_formula(table.order(), *d),
                classes,
            })))
        }
        Command::Waring(cmd) => run_waring(cmd, &limits),
        Command::Hilbert(cmd) => run_hilbert(cmd, &limits),
        Command::Fermat { field, d, n } => {
            let f = field.resolve()?;
            let v = solvers::fermat_point(&f, *d, *n, &limits)?;
            stamped(Document::Solution(solution_doc(&v, None)), &limits)
        }
        Command::Diagonal { field, d, coeffs, brute } => {
            let f = field.resolve()?;
            let form = DiagonalForm::new(&f, *d, parse_list(&f, coeffs)?)?;
            let (v, method) = if *brute {
                (solvers::brute_force_point(&form, &limits)?, SolveMethod::BruteForce)
            } else {
                DiagonalSolver::new(&f, *d, &limits)?.solve(&form)?
            };
            stamped(Document::Solution(solution_doc(&v, Some(method))), &limits)
        }
        Command::Bounds(cmd) => run_bounds(cmd),
        Command::Verify { path } => {
            let text = read_input(path)?;
            let env = Envelope::from_json(&text)?;
            let verdict = verify::verify_document(&env.doc, &limits)?;
            let exit = if verdict.valid { EXIT_OK } else { EXIT_DOMAIN };
            let doc = Document::Verification(VerificationDoc {
                valid: verdict.valid,
                reason: verdict.reason,
                checked_kind: verify::kind_name(&env.doc).to_string(),
            });
            Ok(Output { doc, exit })
        }
        Command::Sweep { q_max, d_max, seed, diagonal_samples } => {
            let report = sweep::sweep(*q_max, *d_max, *seed, *diagonal_samples, &limits)?;
            let exit = if report.violations.is_empty() { EXIT_OK } else { EXIT_DOMAIN };
            Ok(Output { doc: Document::Sweep(report), exit })
        }
    }
}

/// Emits a certificate-like document only after it re-verifies from its own
/// serialization.
fn stamped(mut doc: Document, limits: &Limits) -> Result<Output, CliError> {
    if !stamp_verified(&mut doc, limits)? {
        return Err(CliError::domain("internal_verification_failed", "emitted document failed re-verification"));
    }
    Ok(Output::ok(doc))
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{path}: {e}")))
    }
}

fn parse_list(f: &Field, list: &str) -> Result<Vec<Element>, CliError> {
    list.split(',').map(|s| Ok(f.parse_element(s.trim())?)).collect()
}

fn run_field(cmd: &FieldCmd, limits: &Limits) -> Result<Output, CliError> {
    let doc = match cmd {
        FieldCmd::Info { field } => {
            let f = field.resolve()?;
            Document::FieldInfo(FieldInfoDoc {
                field: field_label(&f),
                characteristic: f.characteristic(),
                order: f.order().map(|q| q.to_string()),
                degree: f.degree(),
                modulus: f.modulus().map(|m| cfermat_core::field::format_poly(&m)),
            })
        }
        FieldCmd::Elements { field } => {
            let f = field.resolve()?;
            Document::FieldElements(FieldElementsDoc {
                field: field_label(&f),
                elements: strings(&f.enumerate_elements(limits)?),
            })
        }
        FieldCmd::Arith { field, op, a, b } => {
            let f = field.resolve()?;
            let (x, y) = (f.parse_element(a)?, f.parse_element(b)?);
            let (op, name) = match op {
                OpArg::Add => (ArithOp::Add, "add"),
                OpArg::Sub => (ArithOp::Sub, "sub"),
                OpArg::Mul => (ArithOp::Mul, "mul"),
                OpArg::Div => (ArithOp::Div, "div"),
            };
            let result = element_arith(&x, &y, op)?;
            Document::FieldArith(FieldArithDoc {
                field: field_label(&f),
                op: name.into(),
                a: x.to_string(),
                b: y.to_string(),
                result: result.to_string(),
            })
        }
        FieldCmd::Pow { field, a, e } => {
            let f = field.resolve()?;
            let x = f.parse_element(a)?;
            Document::FieldPow(FieldPowDoc {
                field: field_label(&f),
                base: x.to_string(),
                exponent: *e,
                result: x.pow(*e).to_string(),
            })
        }
    };
    Ok(Output::ok(doc))
}

fn run_waring(cmd: &WaringCmd, limits: &Limits) -> Result<Output, CliError> {
    match cmd {
        WaringCmd::Chain { field, d } => {
            let chain = SigmaChain::new(&field.resolve()?, *d, limits)?;
            Ok(Output::ok(Document::SigmaChain(chain_doc(&chain))))
        }
        WaringCmd::Rank { field, d, c } => {
            let f = field.resolve()?;
            let (r, cert) = waring::waring_rank(&f, *d, &f.parse_element(c)?, limits)?;
            stamped(Document::PowerSum(power_sum_doc(&cert, Some(r))), limits)
        }
        WaringCmd::MinusOne { field, d, squares } => {
            let f = field.resolve()?;
            let squares = squares
                .as_deref()
                .map(|s| PowerSumCertificate::new(f.from_int(-1), 2, parse_list(&f, s)?).map_err(CliError::from))
                .transpose()?;
            let cert = waring::represent_minus_one(&f, *d, squares.as_ref(), limits)?;
            let rank = f.is_finite().then(|| cert.len());
            stamped(Document::PowerSum(power_sum_doc(&cert, rank)), limits)
        }
        WaringCmd::Squares { field, c, minus_one } => {
            let f = field.resolve()?;
            let m = PowerSumCertificate::new(f.from_int(-1), 2, parse_list(&f, minus_one)?)?;
            let cert = waring::sum_of_squares_rep(&f.parse_element(c)?, &m)?;
            stamped(Document::PowerSum(power_sum_doc(&cert, None)), limits)
        }
    }
}

fn run_hilbert(cmd: &HilbertCmd, limits: &Limits) -> Result<Output, CliError> {
    match cmd {
        HilbertCmd::Find { n, d } => {
            let id = hilbert::find_hilbert_identity(*n, *d, limits)?;
            stamped(Document::HilbertIdentity(identity_doc(&id)), limits)
        }
        HilbertCmd::Scale { field, lambda, base, e, compact } => {
            let f: Field = field.parse()?;
            let lam = Field::parse_rational(lambda)?;
            let b = f.parse_element(base)?;
            let witnesses = if *compact {
                if *e == 0 || e % 2 != 0 {
                    return Err(CliError::Usage("exponent must be positive and even".into()));
                }
                hilbert::absorb_weight(&lam, &b, &PowerDecomposer::new(*e))?
            } else {
                hilbert::scale_to_pure_powers(&lam, &b, *e, limits)?
            };
            let doc = WeightedPowerDoc {
                field: field_label(&f),
                lambda: lam.to_string(),
                base: b.to_string(),
                e: *e,
                witnesses: strings(&witnesses),
                verified: false,
            };
            stamped(Document::WeightedPower(doc), limits)
        }
    }
}

fn run_bounds(cmd: &BoundsCmd) -> Result<Output, CliError> {
    let positive = |name: &str, v: u64| {
        if v == 0 {
            Err(CliError::Usage(format!("--{name} must be positive")))
        } else {
            Ok(())
        }
    };
    let doc = match cmd {
        BoundsCmd::Kummer { d, g } => {
            positive("d", *d)?;
            positive("g", *g)?;
            Document::KummerBound(KummerBoundDoc { d: *d, g: *g, bound: bounds::kummer_bound(*d, *g).to_string() })
        }
        BoundsCmd::Generators { g, index } => {
            positive("g", *g)?;
            positive("index", *index)?;
            let bound = bounds::generator_bound(*g, *index).to_string();
            Document::GeneratorBound(GeneratorBoundDoc { g: *g, index: *index, bound })
        }
        BoundsCmd::Diagonal { d, g } => {
            positive("d", *d)?;
            positive("g", *g)?;
            let (n, big_n) = bounds::diagonal_variable_bound(*d, *g);
            Document::DiagonalBound(DiagonalBoundDoc { d: *d, g: *g, n: n.to_string(), N: big_n.to_string() })
        }
        BoundsCmd::Schreier { degree, gens, base } => {
            if *degree > verify::MAX_CLOSURE_DEGREE {
                return Err(CliError::Resource(format!(
                    "degree {degree} exceeds the closure limit {}",
                    verify::MAX_CLOSURE_DEGREE
                )));
            }
            let generators: Vec<Perm> = Perm::parse_list(*degree, gens)?;
            let group = PermGroupSpec::new(*degree, generators)?;
            let result = bounds::schreier_generators(&group, *base)?;
            let group_order = group.order();
            let stabilizer_order = if result.subgroup_generators.is_empty() {
                1
            } else {
                bounds::closure(*degree, &result.subgroup_generators).len()
            };
            Document::Schreier(schreier_doc(*degree, group.generators(), *base, &result, group_order, stabilizer_order))
        }
    };
    Ok(Output::ok(doc))
}
