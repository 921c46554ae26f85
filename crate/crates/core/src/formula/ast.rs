use std::fmt;

use crate::poset::{PairRelation, RelSet};

/// Order comparison between two variables. `#` is incomparability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cmp {
    Le,
    Ge,
    Lt,
    Gt,
    Eq,
    Ne,
    Inc,
}

impl Cmp {
    pub const ALL: [Cmp; 7] = [Cmp::Le, Cmp::Ge, Cmp::Lt, Cmp::Gt, Cmp::Eq, Cmp::Ne, Cmp::Inc];

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Le => "<=",
            Cmp::Ge => ">=",
            Cmp::Lt => "<",
            Cmp::Gt => ">",
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
            Cmp::Inc => "#",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Cmp> {
        Cmp::ALL.into_iter().find(|c| c.symbol() == s)
    }

    /// The pair relations for which `x cmp y` holds.
    pub fn relset(self) -> RelSet {
        use PairRelation::*;
        match self {
            Cmp::Le => RelSet::of(&[Eq, Lt]),
            Cmp::Ge => RelSet::of(&[Eq, Gt]),
            Cmp::Lt => RelSet::of(&[Lt]),
            Cmp::Gt => RelSet::of(&[Gt]),
            Cmp::Eq => RelSet::of(&[Eq]),
            Cmp::Ne => RelSet::of(&[Lt, Gt, Inc]),
            Cmp::Inc => RelSet::of(&[Inc]),
        }
    }

    pub fn holds(self, r: PairRelation) -> bool {
        self.relset().contains(r)
    }
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Quantifier-free formula; variables are indices into the enclosing
/// definition's variable list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum QfFormula {
    Order(usize, Cmp, usize),
    Rel(String, Vec<usize>),
    Not(Box<QfFormula>),
    And(Vec<QfFormula>),
    Or(Vec<QfFormula>),
}

impl QfFormula {
    pub fn and(parts: Vec<QfFormula>) -> QfFormula {
        QfFormula::And(parts)
    }

    pub fn or(parts: Vec<QfFormula>) -> QfFormula {
        QfFormula::Or(parts)
    }

    pub fn not(inner: QfFormula) -> QfFormula {
        QfFormula::Not(Box::new(inner))
    }

    /// Largest variable index mentioned, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            QfFormula::Order(a, _, b) => Some(*a.max(b)),
            QfFormula::Rel(_, args) => args.iter().copied().max(),
            QfFormula::Not(inner) => inner.max_var(),
            QfFormula::And(ps) | QfFormula::Or(ps) => ps.iter().filter_map(QfFormula::max_var).max(),
        }
    }

    /// Renders in the input grammar using the given variable names.
    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        self.render_into(names, &mut out, 0);
        out
    }

    // prec: 0 = top / inside disjunction, 1 = inside conjunction
    fn render_into(&self, names: &[String], out: &mut String, prec: u8) {
        match self {
            QfFormula::Order(..) | QfFormula::Rel(..) => out.push_str(&render_atom(self, names)),
            QfFormula::Not(inner) => {
                out.push_str("!(");
                inner.render_into(names, out, 0);
                out.push(')');
            }
            QfFormula::And(ps) if ps.is_empty() => out.push_str("true"),
            QfFormula::Or(ps) if ps.is_empty() => out.push_str("false"),
            QfFormula::And(ps) => {
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" & ");
                    }
                    p.render_into(names, out, 1);
                }
            }
            QfFormula::Or(ps) => {
                if prec > 0 {
                    out.push('(');
                }
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" | ");
                    }
                    p.render_into(names, out, 0);
                }
                if prec > 0 {
                    out.push(')');
                }
            }
        }
    }
}

fn render_atom(f: &QfFormula, names: &[String]) -> String {
    match f {
        QfFormula::Order(a, c, b) => format!("{} {} {}", names[*a], c, names[*b]),
        QfFormula::Rel(name, args) => {
            let args: Vec<&str> = args.iter().map(|&i| names[i].as_str()).collect();
            format!("{}({})", name, args.join(","))
        }
        _ => unreachable!(),
    }
}

/// Atomic formula of a primitive positive formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Order(usize, Cmp, usize),
    Rel(String, Vec<usize>),
}

impl Atom {
    pub fn vars(&self) -> Vec<usize> {
        match self {
            Atom::Order(a, _, b) => vec![*a, *b],
            Atom::Rel(_, args) => args.clone(),
        }
    }

    pub fn to_qf(&self) -> QfFormula {
        match self {
            Atom::Order(a, c, b) => QfFormula::Order(*a, *c, *b),
            Atom::Rel(n, args) => QfFormula::Rel(n.clone(), args.clone()),
        }
    }

    fn render(&self, names: &[String]) -> String {
        match self {
            Atom::Order(a, c, b) => format!("{} {} {}", names[*a], c, names[*b]),
            // relations named after a comparison print infix
            Atom::Rel(n, args) if args.len() == 2 && Cmp::from_symbol(n).is_some() => {
                format!("{} {} {}", names[args[0]], n, names[args[1]])
            }
            Atom::Rel(..) => render_atom(&self.to_qf(), names),
        }
    }
}

/// `∃ bound . atom ∧ … ∧ atom`. Variable indices `0..free.len()` are the
/// free variables, the rest are bound.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PpFormula {
    free: Vec<String>,
    bound: Vec<String>,
    atoms: Vec<Atom>,
}

impl PpFormula {
    pub fn new(free: Vec<String>, bound: Vec<String>, atoms: Vec<Atom>) -> Self {
        PpFormula { free, bound, atoms }
    }

    pub fn free(&self) -> &[String] {
        &self.free
    }

    pub fn bound(&self) -> &[String] {
        &self.bound
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn var_count(&self) -> usize {
        self.free.len() + self.bound.len()
    }

    pub fn var_names(&self) -> Vec<String> {
        self.free.iter().chain(&self.bound).cloned().collect()
    }

    /// The same formula with one more conjunct.
    pub fn with_atom(&self, atom: Atom) -> PpFormula {
        let mut out = self.clone();
        out.atoms.push(atom);
        out
    }

    /// The same formula without the conjunct at `index`.
    pub fn without_atom(&self, index: usize) -> PpFormula {
        let mut out = self.clone();
        out.atoms.remove(index);
        out
    }

    /// The same formula with free variables renamed.
    pub fn with_free_names(&self, names: Vec<String>) -> PpFormula {
        assert_eq!(names.len(), self.free.len());
        PpFormula {
            free: names,
            bound: self.bound.clone(),
            atoms: self.atoms.clone(),
        }
    }
}

impl fmt::Display for PpFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.var_names();
        if !self.bound.is_empty() {
            write!(f, "exists {} . ", self.bound.join(" "))?;
        }
        if self.atoms.is_empty() {
            return match names.first() {
                Some(v) => write!(f, "{v} = {v}"),
                None => f.write_str("true"),
            };
        }
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            f.write_str(&a.render(&names))?;
        }
        Ok(())
    }
}

/// Result of parsing: either fragment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Qf(QfFormula),
    Pp(PpFormula),
}
