//! Line-based instance files:
//!
//! ```text
//! % comment
//! rel Name k := formula over v1..vk
//! var a b c
//! ct Name(a,b,c)
//! ct a < b
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Instance, SolverError};
use crate::formula::{
    compile_qf, parse_formula, parse_qf, pp_to_table, Formula, FormulaError, QfFormula, SignatureEnv,
};

/// A parsed instance file: the instance plus its declared relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    /// `(name, arity, defining formula text)` in declaration order.
    pub relations: Vec<(String, usize, String)>,
}

impl InstanceFile {
    pub fn from_instance(instance: Instance) -> Self {
        InstanceFile {
            instance,
            relations: Vec::new(),
        }
    }

    /// Relations declared by `rel` lines plus those used by constraints,
    /// sorted by name.
    pub fn signature(&self) -> Vec<String> {
        let mut names: BTreeSet<String> = self.relations.iter().map(|r| r.0.clone()).collect();
        names.extend(self.instance.constraints().iter().map(|c| c.relation.clone()));
        names.into_iter().collect()
    }

    /// The environment restricted to [`InstanceFile::signature`].
    pub fn signature_env(&self) -> SignatureEnv {
        let names = self.signature();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.instance
            .env()
            .restricted(&refs)
            .expect("signature names come from the instance environment")
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> SolverError {
    SolverError::Parse {
        line,
        message: message.into(),
    }
}

fn formula_err(line: usize) -> impl Fn(FormulaError) -> SolverError {
    move |source| SolverError::Formula { line, source }
}

/// Parses an instance file on top of the standard environment.
pub fn parse_instance(text: &str) -> Result<InstanceFile, SolverError> {
    parse_instance_with(text, SignatureEnv::standard().clone())
}

/// Parses an instance file on top of `base`.
pub fn parse_instance_with(text: &str, base: SignatureEnv) -> Result<InstanceFile, SolverError> {
    let mut env = base;
    let mut relations = Vec::new();
    let mut vars: Vec<String> = Vec::new();
    let mut cts: Vec<(usize, QfFormula)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('%').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (kw, rest) = content
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim()))
            .unwrap_or((content, ""));
        match kw {
            "rel" => {
                let (head, body) = rest
                    .split_once(":=")
                    .ok_or_else(|| parse_err(line, "expected 'rel <Name> <arity> := <formula>'"))?;
                let mut parts = head.split_whitespace();
                let (Some(name), Some(arity), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(parse_err(line, "expected 'rel <Name> <arity> := <formula>'"));
                };
                if !name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                    || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    return Err(parse_err(line, format!("bad relation name '{name}'")));
                }
                let arity: usize = arity
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad arity '{arity}'")))?;
                let body = body.trim();
                let names: Vec<String> = (1..=arity).map(|i| format!("v{i}")).collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                let table = match parse_formula(body, &refs, &env).map_err(formula_err(line))? {
                    Formula::Qf(f) => compile_qf(name, &f, arity, &env),
                    Formula::Pp(f) => pp_to_table(name, &f, &env),
                }
                .map_err(formula_err(line))?;
                env.insert(table).map_err(formula_err(line))?;
                relations.push((name.to_string(), arity, body.to_string()));
            }
            "var" => {
                for v in rest.split_whitespace() {
                    if vars.iter().any(|w| w == v) {
                        return Err(parse_err(line, format!("variable '{v}' declared twice")));
                    }
                    if !v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                        || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                        || v == "exists"
                    {
                        return Err(parse_err(line, format!("bad variable name '{v}'")));
                    }
                    vars.push(v.to_string());
                }
            }
            "ct" => {
                let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
                let f = parse_qf(rest, &refs, &env).map_err(formula_err(line))?;
                cts.push((line, f));
            }
            other => return Err(parse_err(line, format!("unknown keyword '{other}'"))),
        }
    }
    let mut instance = Instance::new(env);
    for v in vars {
        instance.add_var(v);
    }
    for (line, f) in cts {
        let (name, args) = match f {
            QfFormula::Order(a, c, b) => (c.symbol().to_string(), vec![a, b]),
            QfFormula::Rel(name, args) => (name, args),
            _ => return Err(parse_err(line, "a constraint must be a single atom")),
        };
        instance.add_constraint(&name, &args).map_err(|e| match e {
            SolverError::EmptyRelation(n) => parse_err(line, format!("relation '{n}' is empty")),
            other => other,
        })?;
    }
    Ok(InstanceFile { instance, relations })
}

fn is_order_name(name: &str) -> bool {
    crate::formula::ORDER_RELATIONS.contains(&name)
}

/// Renders an instance file; parsing the output gives back an equal file.
pub fn write_instance(file: &InstanceFile) -> String {
    let mut out = String::new();
    for (name, arity, body) in &file.relations {
        let _ = writeln!(out, "rel {name} {arity} := {body}");
    }
    let inst = &file.instance;
    if !inst.vars().is_empty() {
        let _ = writeln!(out, "var {}", inst.vars().join(" "));
    }
    for c in inst.constraints() {
        let names: Vec<&str> = c.args.iter().map(|&a| inst.vars()[a].as_str()).collect();
        if is_order_name(&c.relation) && names.len() == 2 {
            let _ = writeln!(out, "ct {} {} {}", names[0], c.relation, names[1]);
        } else {
            let _ = writeln!(out, "ct {}({})", c.relation, names.join(","));
        }
    }
    out
}
