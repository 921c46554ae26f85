//! Recursive-descent parser for the formula grammar:
//!
//! ```text
//! formula = disj ; disj = conj { "|" conj } ; conj = unit { "&" unit } ;
//! unit    = [ "!" ] ( "(" formula ")" | atom ) ;
//! atom    = var cmp var | name "(" var { "," var } ")" ;
//! cmp     = "<=" | ">=" | "<" | ">" | "=" | "!=" | "#" ;
//! pp      = "exists" var { var } "." conj-of-atoms ;
//! ```

use super::ast::{Atom, Cmp, Formula, PpFormula, QfFormula};
use super::env::SignatureEnv;
use super::FormulaError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Cmp(Cmp),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, FormulaError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut width = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '&' => Tok::Amp,
            '|' => Tok::Pipe,
            '#' => Tok::Cmp(Cmp::Inc),
            '=' => Tok::Cmp(Cmp::Eq),
            '!' | '<' | '>' => {
                let next_eq = chars.get(i + 1) == Some(&'=');
                if next_eq {
                    width = 2;
                }
                match (c, next_eq) {
                    ('!', true) => Tok::Cmp(Cmp::Ne),
                    ('!', false) => Tok::Bang,
                    ('<', true) => Tok::Cmp(Cmp::Le),
                    ('<', false) => Tok::Cmp(Cmp::Lt),
                    ('>', true) => Tok::Cmp(Cmp::Ge),
                    _ => Tok::Cmp(Cmp::Gt),
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i + width < chars.len()
                    && (chars[i + width].is_ascii_alphanumeric() || chars[i + width] == '_')
                {
                    width += 1;
                }
                Tok::Ident(chars[start..start + width].iter().collect())
            }
            other => {
                return Err(FormulaError::Syntax {
                    line: tl,
                    col: tc,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push(Token {
            tok,
            line: tl,
            col: tc,
        });
        i += width;
        col += width;
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: Vec<String>,
    env: &'a SignatureEnv,
}

impl<'a> Parser<'a> {
    fn new(text: &str, free: &[&str], env: &'a SignatureEnv) -> Result<Self, FormulaError> {
        Ok(Parser {
            tokens: lex(text)?,
            pos: 0,
            vars: free.iter().map(|s| s.to_string()).collect(),
            env,
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> FormulaError {
        let t = &self.tokens[self.pos];
        FormulaError::Syntax {
            line: t.line,
            col: t.col,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), FormulaError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {what}")))
        }
    }

    fn expect_end(&self) -> Result<(), FormulaError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error_here("unexpected trailing input"))
        }
    }

    fn is_keyword(name: &str) -> bool {
        name == "exists"
    }

    fn var(&mut self) -> Result<usize, FormulaError> {
        match self.peek().clone() {
            Tok::Ident(name) if !Self::is_keyword(&name) => {
                self.bump();
                self.vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or(FormulaError::UndeclaredVariable { name })
            }
            _ => Err(self.error_here("expected a variable")),
        }
    }

    fn disj(&mut self) -> Result<QfFormula, FormulaError> {
        let mut parts = vec![self.conj()?];
        while *self.peek() == Tok::Pipe {
            self.bump();
            parts.push(self.conj()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            QfFormula::Or(parts)
        })
    }

    fn conj(&mut self) -> Result<QfFormula, FormulaError> {
        let mut parts = vec![self.unit()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            parts.push(self.unit()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            QfFormula::And(parts)
        })
    }

    fn unit(&mut self) -> Result<QfFormula, FormulaError> {
        let negated = if *self.peek() == Tok::Bang {
            self.bump();
            true
        } else {
            false
        };
        let inner = if *self.peek() == Tok::LParen {
            self.bump();
            let f = self.disj()?;
            self.expect(Tok::RParen, "')'")?;
            f
        } else {
            self.atom()?
        };
        Ok(if negated { QfFormula::not(inner) } else { inner })
    }

    fn atom(&mut self) -> Result<QfFormula, FormulaError> {
        let name = match self.peek().clone() {
            Tok::Ident(name) if !Self::is_keyword(&name) => name,
            Tok::Ident(_) => return Err(self.error_here("'exists' is only allowed at the start of a pp-formula")),
            _ => return Err(self.error_here("expected an atom")),
        };
        if self.tokens[self.pos + 1].tok == Tok::LParen {
            self.bump();
            self.bump();
            let mut args = vec![self.var()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.var()?);
            }
            self.expect(Tok::RParen, "')' or ','")?;
            let table = self
                .env
                .get(&name)
                .ok_or_else(|| FormulaError::UnknownRelation { name: name.clone() })?;
            if table.arity() != args.len() {
                return Err(FormulaError::ArityMismatch {
                    name,
                    expected: table.arity(),
                    found: args.len(),
                });
            }
            Ok(QfFormula::Rel(name, args))
        } else {
            let a = self.var()?;
            let cmp = match self.peek() {
                Tok::Cmp(c) => *c,
                _ => return Err(self.error_here("expected a comparison (<=, >=, <, >, =, !=, #)")),
            };
            self.bump();
            let b = self.var()?;
            Ok(QfFormula::Order(a, cmp, b))
        }
    }

    fn pp(&mut self, free: usize) -> Result<PpFormula, FormulaError> {
        let mut bound = Vec::new();
        if matches!(self.peek(), Tok::Ident(k) if k == "exists") {
            self.bump();
            loop {
                match self.peek().clone() {
                    Tok::Ident(name) if !Self::is_keyword(&name) => {
                        if self.vars.contains(&name) {
                            return Err(self.error_here(format!(
                                "bound variable '{name}' clashes with another variable"
                            )));
                        }
                        self.bump();
                        self.vars.push(name.clone());
                        bound.push(name);
                    }
                    Tok::Dot if !bound.is_empty() => {
                        self.bump();
                        break;
                    }
                    _ => return Err(self.error_here("expected a bound variable or '.'")),
                }
            }
        }
        let body = self.disj()?;
        self.expect_end()?;
        let mut atoms = Vec::new();
        flatten_atoms(body, &mut atoms).map_err(|()| FormulaError::NotPrimitivePositive)?;
        Ok(PpFormula::new(self.vars[..free].to_vec(), bound, atoms))
    }
}

fn flatten_atoms(f: QfFormula, out: &mut Vec<Atom>) -> Result<(), ()> {
    match f {
        QfFormula::Order(a, c, b) => out.push(Atom::Order(a, c, b)),
        QfFormula::Rel(n, args) => out.push(Atom::Rel(n, args)),
        QfFormula::And(parts) => {
            for p in parts {
                flatten_atoms(p, out)?;
            }
        }
        QfFormula::Not(_) | QfFormula::Or(_) => return Err(()),
    }
    Ok(())
}

fn starts_with_exists(text: &str) -> bool {
    let t = text.trim_start();
    t.strip_prefix("exists")
        .is_some_and(|rest| rest.chars().next().is_none_or(|c| !(c.is_ascii_alphanumeric() || c == '_')))
}

/// Parses a quantifier-free formula over the given free variables.
pub fn parse_qf(text: &str, free: &[&str], env: &SignatureEnv) -> Result<QfFormula, FormulaError> {
    let mut p = Parser::new(text, free, env)?;
    let f = p.disj()?;
    p.expect_end()?;
    Ok(f)
}

/// Parses a primitive positive formula. A bare conjunction of atoms is
/// accepted as a pp-formula without bound variables.
pub fn parse_pp(text: &str, free: &[&str], env: &SignatureEnv) -> Result<PpFormula, FormulaError> {
    let mut p = Parser::new(text, free, env)?;
    p.pp(free.len())
}

/// Parses either fragment: text starting with `exists` is a pp-formula.
pub fn parse_formula(text: &str, free: &[&str], env: &SignatureEnv) -> Result<Formula, FormulaError> {
    if starts_with_exists(text) {
        parse_pp(text, free, env).map(Formula::Pp)
    } else {
        parse_qf(text, free, env).map(Formula::Qf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> SignatureEnv {
        SignatureEnv::standard().clone()
    }

    #[test]
    fn disjunction_of_order_atoms() {
        let f = parse_qf("x < y | x # y", &["x", "y"], &env()).unwrap();
        assert_eq!(
            f,
            QfFormula::Or(vec![
                QfFormula::Order(0, Cmp::Lt, 1),
                QfFormula::Order(0, Cmp::Inc, 1)
            ])
        );
    }

    #[test]
    fn precedence_and_negation() {
        let f = parse_qf("!x <= y & y != z | Betw(x,y,z)", &["x", "y", "z"], &env()).unwrap();
        let QfFormula::Or(parts) = f else { panic!() };
        assert!(matches!(&parts[0], QfFormula::And(a) if matches!(a[0], QfFormula::Not(_))));
        assert!(matches!(&parts[1], QfFormula::Rel(n, _) if n == "Betw"));
    }

    #[test]
    fn pp_with_one_bound_variable() {
        let f = parse_formula("exists z . z < y & z # x", &["x", "y"], &env()).unwrap();
        let Formula::Pp(pp) = f else { panic!("expected pp") };
        assert_eq!(pp.bound(), ["z".to_string()]);
        assert_eq!(pp.atoms().len(), 2);
        assert_eq!(pp.atoms()[0], Atom::Order(2, Cmp::Lt, 1));
        assert_eq!(pp.to_string(), "exists z . z < y & z # x");
    }

    #[test]
    fn rejects_bang_less() {
        let err = parse_qf("x !< y", &["x", "y"], &env()).unwrap_err();
        assert!(matches!(err, FormulaError::Syntax { line: 1, col: 3, .. }), "{err:?}");
    }

    #[test]
    fn error_kinds() {
        let e = env();
        assert!(matches!(
            parse_qf("Foo(x)", &["x"], &e),
            Err(FormulaError::UnknownRelation { .. })
        ));
        assert!(matches!(
            parse_qf("Betw(x,y)", &["x", "y"], &e),
            Err(FormulaError::ArityMismatch { expected: 3, found: 2, .. })
        ));
        assert!(matches!(
            parse_qf("x < w", &["x"], &e),
            Err(FormulaError::UndeclaredVariable { .. })
        ));
        assert!(matches!(
            parse_pp("x < y | y < x", &["x", "y"], &e),
            Err(FormulaError::NotPrimitivePositive)
        ));
        assert!(matches!(
            parse_pp("exists x . x < y", &["x", "y"], &e),
            Err(FormulaError::Syntax { .. })
        ));
        assert!(matches!(
            parse_qf("(x < y", &["x", "y"], &e),
            Err(FormulaError::Syntax { .. })
        ));
        assert!(matches!(
            parse_qf("x < y\n  & y ~ x", &["x", "y"], &e),
            Err(FormulaError::Syntax { line: 2, col: 7, .. })
        ));
    }

    #[test]
    fn render_round_trips() {
        let e = env();
        let names = ["x", "y", "z"];
        for text in [
            "x < y | x # y",
            "(x < y | y < z) & !(x = z)",
            "Betw(x,y,z) & x <= z",
        ] {
            let f = parse_qf(text, &names, &e).unwrap();
            let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
            let again = parse_qf(&f.render(&owned), &names, &e).unwrap();
            assert_eq!(f, again, "{text}");
        }
    }
}
