//! Exact verification of pp-definitions and pp-interpretations over type
//! tables, with constants modelled as extra free variables whose mutual type
//! is pinned.

mod catalog;

pub use catalog::{builtin_catalog, one_in_three_patterns};

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::formula::{eval_qf, parse_pp, parse_qf, FormulaError, PreparedPp, SignatureEnv};
use crate::poset::{enumerate_ktypes, KType, MAX_ENUM_ARITY};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("gadget {gadget}: {vars} variables exceed the enumeration limit {max}")]
    SizeLimit { gadget: String, vars: usize, max: usize },
    #[error("gadget {gadget}, claim {claim}: {source}")]
    Formula {
        gadget: String,
        claim: String,
        source: FormulaError,
    },
    #[error("gadget {gadget}: pinned pattern has arity {found}, expected {expected}")]
    PinnedArity { gadget: String, expected: usize, found: usize },
    #[error("gadget {gadget} has no claim {claim} with conjunct {atom}")]
    NoSuchConjunct { gadget: String, claim: usize, atom: usize },
}

/// One equivalence: over every type extending the pinned constants and
/// satisfying `domain`, the pp `formula` holds iff `expected` does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetClaim {
    pub label: String,
    /// Relations the pp-formula may use.
    pub relations: Vec<String>,
    pub free: Vec<String>,
    pub formula: String,
    /// Quantifier-free, over the standard environment.
    pub expected: String,
    pub domain: Option<String>,
}

impl GadgetClaim {
    pub fn new(label: &str, relations: &[&str], free: &[&str], formula: &str, expected: &str) -> Self {
        GadgetClaim {
            label: label.to_string(),
            relations: relations.iter().map(|s| s.to_string()).collect(),
            free: free.iter().map(|s| s.to_string()).collect(),
            formula: formula.to_string(),
            expected: expected.to_string(),
            domain: None,
        }
    }

    pub fn within(mut self, domain: &str) -> Self {
        self.domain = Some(domain.to_string());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetLemma {
    pub name: String,
    pub constants: Vec<String>,
    /// Type of the constants, in order.
    pub pinned: KType,
    pub claims: Vec<GadgetClaim>,
}

impl GadgetLemma {
    /// The lemma with conjunct `atom` removed from the formula of claim `claim`.
    pub fn without_conjunct(&self, claim: usize, atom: usize) -> Result<GadgetLemma, GadgetError> {
        let missing = || GadgetError::NoSuchConjunct {
            gadget: self.name.clone(),
            claim,
            atom,
        };
        let c = self.claims.get(claim).ok_or_else(missing)?;
        let env = SignatureEnv::standard();
        let vars = self.vars(c);
        let names: Vec<&str> = vars.iter().map(String::as_str).collect();
        let f = parse_pp(&c.formula, &names, env).map_err(|e| self.formula_error(c, e))?;
        if atom >= f.atoms().len() {
            return Err(missing());
        }
        let mut out = self.clone();
        out.claims[claim].formula = f.without_atom(atom).to_string();
        Ok(out)
    }

    fn vars(&self, c: &GadgetClaim) -> Vec<String> {
        self.constants.iter().chain(&c.free).cloned().collect()
    }

    fn formula_error(&self, c: &GadgetClaim, source: FormulaError) -> GadgetError {
        GadgetError::Formula {
            gadget: self.name.clone(),
            claim: c.label.clone(),
            source,
        }
    }
}

/// A type on which formula and expectation disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub claim: String,
    pub vars: Vec<String>,
    pub ktype: KType,
    pub formula_holds: bool,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.vars.len();
        let mut parts = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                parts.push(format!("{}{}{}", self.vars[i], self.ktype.rel(i, j).symbol(), self.vars[j]));
            }
        }
        let side = if self.formula_holds {
            "formula holds, expected false"
        } else {
            "formula fails, expected true"
        };
        write!(f, "{}: [{}] {side}", self.claim, parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verification {
    Pass,
    Fail(Vec<Mismatch>),
}

impl Verification {
    pub fn passed(&self) -> bool {
        matches!(self, Verification::Pass)
    }

    pub fn mismatches(&self) -> &[Mismatch] {
        match self {
            Verification::Pass => &[],
            Verification::Fail(m) => m,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetReport {
    pub name: String,
    pub verification: Verification,
    pub types_checked: usize,
    pub elapsed: Duration,
}

impl fmt::Display for GadgetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GADGET {} {} ({} types checked, {}ms)",
            self.name,
            if self.verification.passed() { "PASS" } else { "FAIL" },
            self.types_checked,
            self.elapsed.as_millis()
        )
    }
}

/// Checks every claim of `lemma` exhaustively.
pub fn verify(lemma: &GadgetLemma) -> Result<GadgetReport, GadgetError> {
    let start = Instant::now();
    let k = lemma.constants.len();
    if lemma.pinned.arity() != k {
        return Err(GadgetError::PinnedArity {
            gadget: lemma.name.clone(),
            expected: k,
            found: lemma.pinned.arity(),
        });
    }
    let standard = SignatureEnv::standard();
    let constant_positions: Vec<usize> = (0..k).collect();
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for c in &lemma.claims {
        let vars = lemma.vars(c);
        if vars.len() > MAX_ENUM_ARITY {
            return Err(GadgetError::SizeLimit {
                gadget: lemma.name.clone(),
                vars: vars.len(),
                max: MAX_ENUM_ARITY,
            });
        }
        let names: Vec<&str> = vars.iter().map(String::as_str).collect();
        let rels: Vec<&str> = c.relations.iter().map(String::as_str).collect();
        let err = |e| lemma.formula_error(c, e);
        let env = standard.restricted(&rels).map_err(err)?;
        let formula = parse_pp(&c.formula, &names, &env).map_err(err)?;
        let prepared = PreparedPp::new(&formula, &env).map_err(err)?;
        let expected = parse_qf(&c.expected, &names, standard).map_err(err)?;
        let domain = match &c.domain {
            Some(d) => Some(parse_qf(d, &names, standard).map_err(err)?),
            None => None,
        };
        let types = enumerate_ktypes(vars.len()).expect("arity checked");
        for t in types {
            if t.project(&constant_positions) != lemma.pinned {
                continue;
            }
            if let Some(d) = &domain {
                if !eval_qf(d, t, standard).map_err(err)? {
                    continue;
                }
            }
            checked += 1;
            let got = prepared.eval(t).map_err(err)?;
            if got != eval_qf(&expected, t, standard).map_err(err)? {
                mismatches.push(Mismatch {
                    claim: c.label.clone(),
                    vars: vars.clone(),
                    ktype: t.clone(),
                    formula_holds: got,
                });
            }
        }
    }
    Ok(GadgetReport {
        name: lemma.name.clone(),
        verification: if mismatches.is_empty() {
            Verification::Pass
        } else {
            Verification::Fail(mismatches)
        },
        types_checked: checked,
        elapsed: start.elapsed(),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GadgetSummary {
    pub reports: Vec<GadgetReport>,
}

impl GadgetSummary {
    pub fn passed(&self) -> usize {
        self.reports.iter().filter(|r| r.verification.passed()).count()
    }

    pub fn total(&self) -> usize {
        self.reports.len()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.total()
    }
}

impl fmt::Display for GadgetSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.reports {
            writeln!(f, "{r}")?;
        }
        write!(f, "{}/{} gadgets pass", self.passed(), self.total())
    }
}

/// Verifies each lemma on its own thread; reports keep catalog order.
pub fn verify_all(catalog: &[GadgetLemma]) -> Result<GadgetSummary, GadgetError> {
    let results: Vec<Result<GadgetReport, GadgetError>> = std::thread::scope(|s| {
        let handles: Vec<_> = catalog.iter().map(|g| s.spawn(move || verify(g))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("gadget verification panicked"))
            .collect()
    });
    Ok(GadgetSummary {
        reports: results.into_iter().collect::<Result<_, _>>()?,
    })
}
