use std::fmt;

use super::preserve::{preserved_binary, preserved_unary, Preservation};
use super::search::{pp_search, PpBudget, PpSearchOutcome};
use super::ClassifyError;
use crate::formula::{builtin, PpFormula, SignatureEnv};
use crate::horn::{horn_synthesize, Dialect, HornTheory};
use crate::poset::{BinaryBehaviour, KType, PairRelation, UnaryFamily};
use crate::table::RelationTable;

/// Largest relation arity [`classify`] accepts.
pub const CLASSIFY_MAX_ARITY: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Trivial,
    HornLeq,
    HornStrict,
    EqualityTractable,
    EqualityHard,
    TemporalDelegated,
    HardBetw,
    HardCycl,
    HardSep,
    HardLow,
    HardByDichotomy,
}

impl Label {
    pub fn name(self) -> &'static str {
        match self {
            Label::Trivial => "Trivial",
            Label::HornLeq => "HornLeq",
            Label::HornStrict => "HornStrict",
            Label::EqualityTractable => "EqualityTractable",
            Label::EqualityHard => "EqualityHard",
            Label::TemporalDelegated => "TemporalDelegated",
            Label::HardBetw => "HardBetw",
            Label::HardCycl => "HardCycl",
            Label::HardSep => "HardSep",
            Label::HardLow => "HardLow",
            Label::HardByDichotomy => "HardByDichotomy",
        }
    }

    pub fn is_hard(self) -> bool {
        matches!(
            self,
            Label::HardBetw | Label::HardCycl | Label::HardSep | Label::HardLow | Label::HardByDichotomy
        )
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certainty {
    Certified,
    PerDichotomy,
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certainty::Certified => "certified",
            Certainty::PerDichotomy => "per-dichotomy",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    None,
    /// A unary behaviour preserving every relation.
    Behaviour(String),
    Horn(Vec<HornTheory>),
    /// pp-definitions over the language of the named target relations.
    PpDefinitions(Vec<(String, PpFormula)>),
    /// The reduced language, handed on unclassified.
    Reduced(Vec<RelationTable>),
}

/// One evaluated check: step name, relation, outcome and witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub check: String,
    pub relation: String,
    pub pass: bool,
    pub witness: String,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK {} {} {} {}",
            self.check,
            self.relation,
            if self.pass { "PASS" } else { "FAIL" },
            self.witness
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub label: Label,
    pub certainty: Certainty,
    pub certificate: Certificate,
    pub trace: Vec<TraceLine>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyConfig {
    pub pp_budget: PpBudget,
    /// Skip certification searches entirely.
    pub certify: bool,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            pp_budget: PpBudget::default(),
            certify: true,
        }
    }
}

/// A table as a disjunction of its types over `v1..vk`.
pub fn table_formula(table: &RelationTable) -> String {
    let k = table.arity();
    if k == 0 || table.is_empty() {
        return if table.is_empty() { "v1 < v1".into() } else { "v1 = v1".into() };
    }
    let disjuncts: Vec<String> = table.iter().map(type_formula).collect();
    if disjuncts.len() == 1 {
        disjuncts.into_iter().next().unwrap()
    } else {
        disjuncts.iter().map(|d| format!("({d})")).collect::<Vec<_>>().join(" | ")
    }
}

fn type_formula(t: &KType) -> String {
    if t.arity() < 2 {
        return "v1 = v1".into();
    }
    let mut parts = Vec::new();
    for i in 0..t.arity() {
        for j in (i + 1)..t.arity() {
            let sym = match t.rel(i, j) {
                PairRelation::Eq => "=",
                PairRelation::Lt => "<",
                PairRelation::Gt => ">",
                PairRelation::Inc => "#",
            };
            parts.push(format!("v{} {} v{}", i + 1, sym, j + 1));
        }
    }
    parts.join(" & ")
}

impl Verdict {
    /// Certificate lines in the instance-format `rel` syntax.
    pub fn certificate_lines(&self) -> Vec<String> {
        match &self.certificate {
            Certificate::None => vec![],
            Certificate::Behaviour(b) => vec![format!("% preserved by {b}")],
            Certificate::Horn(ths) => ths.iter().map(HornTheory::to_rel_line).collect(),
            Certificate::PpDefinitions(defs) => defs
                .iter()
                .map(|(name, f)| format!("rel {} {} := {}", name, f.free().len(), f))
                .collect(),
            Certificate::Reduced(tables) => tables
                .iter()
                .map(|t| format!("rel {} {} := {}", t.name(), t.arity(), table_formula(t)))
                .collect(),
        }
    }

    pub fn report(&self) -> String {
        let mut out = format!("label: {}\ncertainty: {}\n", self.label, self.certainty);
        for line in &self.trace {
            out.push_str(&line.to_string());
            out.push('\n');
        }
        let cert = self.certificate_lines();
        if !cert.is_empty() {
            out.push_str("certificate:\n");
            for l in cert {
                out.push_str(&l);
                out.push('\n');
            }
        }
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report())
    }
}

struct Tracer {
    lines: Vec<TraceLine>,
}

impl Tracer {
    fn record(&mut self, check: &str, relation: &str, result: &Preservation) -> bool {
        let (pass, witness) = match result {
            Preservation::Holds => (true, "-".to_string()),
            Preservation::Violated(c) => (false, c.to_string()),
        };
        self.lines.push(TraceLine {
            check: check.to_string(),
            relation: relation.to_string(),
            pass,
            witness,
        });
        pass
    }

    fn note(&mut self, check: &str, relation: &str, pass: bool, witness: String) -> bool {
        self.lines.push(TraceLine {
            check: check.to_string(),
            relation: relation.to_string(),
            pass,
            witness,
        });
        pass
    }

    /// Runs `check` on every table, stopping at the first failure.
    fn all(
        &mut self,
        name: &str,
        tables: &[&RelationTable],
        check: impl Fn(&RelationTable) -> Preservation,
    ) -> bool {
        for t in tables {
            if !self.record(name, t.name(), &check(t)) {
                return false;
            }
        }
        true
    }
}

fn horn_certificate(tables: &[&RelationTable], dialect: Dialect) -> Result<Vec<HornTheory>, ClassifyError> {
    tables
        .iter()
        .map(|t| horn_synthesize(t, dialect).map_err(ClassifyError::from))
        .collect()
}

/// Classifies the constraint language of `env`.
pub fn classify(env: &SignatureEnv, config: &ClassifyConfig) -> Result<Verdict, ClassifyError> {
    let tables: Vec<&RelationTable> = env.tables().collect();
    for t in &tables {
        if t.arity() > CLASSIFY_MAX_ARITY {
            return Err(ClassifyError::ArityTooLarge {
                name: t.name().to_string(),
                arity: t.arity(),
                max: CLASSIFY_MAX_ARITY,
            });
        }
    }
    let mut tr = Tracer { lines: Vec::new() };
    for t in tables.iter().filter(|t| t.is_empty()) {
        tr.note("empty", t.name(), true, "relation has no tuples".into());
    }
    let done = |label, certainty, certificate, tr: Tracer| {
        Ok(Verdict {
            label,
            certainty,
            certificate,
            trace: tr.lines,
        })
    };

    let e_leq = BinaryBehaviour::e_leq();
    if tr.all("e_leq", &tables, |t| preserved_binary(t, &e_leq)) {
        let ths = horn_certificate(&tables, Dialect::Leq)?;
        return done(Label::HornLeq, Certainty::Certified, Certificate::Horn(ths), tr);
    }
    let e_lt = BinaryBehaviour::e_lt();
    if tr.all("e_lt", &tables, |t| preserved_binary(t, &e_lt)) {
        let ths = horn_certificate(&tables, Dialect::Strict)?;
        return done(Label::HornStrict, Certainty::Certified, Certificate::Horn(ths), tr);
    }

    let mut trivial = true;
    for t in &tables {
        if t.is_empty() {
            continue;
        }
        let arity = t.arity();
        if !tr.note(
            "diagonal",
            t.name(),
            t.has_diagonal(),
            if t.has_diagonal() { "-".into() } else { format!("no [{}]", KType::diagonal(arity)) },
        ) {
            trivial = false;
            break;
        }
    }
    if trivial {
        return done(
            Label::Trivial,
            Certainty::Certified,
            Certificate::Behaviour(UnaryFamily::Constant.name().into()),
            tr,
        );
    }

    if tr.all("flatten_collapse", &tables, |t| preserved_unary(t, UnaryFamily::FlattenCollapse)) {
        let reduced: Vec<RelationTable> = tables
            .iter()
            .map(|t| t.filtered(t.name(), KType::is_order_free))
            .collect();
        let diag = reduced.iter().all(|t| t.is_empty() || t.has_diagonal());
        tr.note("equality_constant", "*", diag, "-".into());
        let tractable = diag || {
            let inj = BinaryBehaviour::injection();
            let refs: Vec<&RelationTable> = reduced.iter().collect();
            tr.all("injection", &refs, |t| preserved_binary(t, &inj))
        };
        let label = if tractable {
            Label::EqualityTractable
        } else {
            Label::EqualityHard
        };
        return done(label, Certainty::PerDichotomy, Certificate::Reduced(reduced), tr);
    }

    if tr.all("chain_collapse", &tables, |t| preserved_unary(t, UnaryFamily::ChainCollapse)) {
        let reduced = tables.iter().map(|t| t.filtered(t.name(), KType::is_total)).collect();
        return done(
            Label::TemporalDelegated,
            Certainty::PerDichotomy,
            Certificate::Reduced(reduced),
            tr,
        );
    }

    let reversal = tables.iter().all(|t| {
        let r = preserved_unary(t, UnaryFamily::Reverse);
        tr.record("reverse", t.name(), &r)
    });
    let rotation = tables.iter().all(|t| {
        let r = preserved_unary(t, UnaryFamily::Rotate);
        tr.record("rotate", t.name(), &r)
    });
    let (label, targets): (Label, &[&str]) = match (reversal, rotation) {
        (true, true) => (Label::HardSep, &["Sep"]),
        (false, true) => (Label::HardCycl, &["Cycl"]),
        (true, false) => (Label::HardBetw, &["Betw", "#"]),
        (false, false) => (Label::HardLow, &["Low"]),
    };
    if !config.certify {
        return done(label, Certainty::PerDichotomy, Certificate::None, tr);
    }
    let mut defs = Vec::new();
    for &target in targets {
        let table = builtin(target).expect("hard targets are builtin");
        match pp_search(table, env, &config.pp_budget)? {
            PpSearchOutcome::Found(f) => {
                tr.note("pp_define", target, true, f.to_string());
                defs.push((target.to_string(), f));
            }
            PpSearchOutcome::NotFound { nodes, exhausted } => {
                tr.note(
                    "pp_define",
                    target,
                    false,
                    format!("not found ({nodes} nodes{})", if exhausted { ", exhausted" } else { "" }),
                );
                return done(label, Certainty::PerDichotomy, Certificate::None, tr);
            }
        }
    }
    done(label, Certainty::Certified, Certificate::PpDefinitions(defs), tr)
}
