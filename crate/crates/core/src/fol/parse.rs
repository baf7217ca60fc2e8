//! Recursive-descent parser for the concrete syntax.

use super::ast::{PredicateSymbol, Term};
use super::Formula;
use std::fmt;
use thiserror::Error;

/// Parse failure, reported with the byte offset of the offending token and
/// the set of tokens that would have been accepted there.
#[derive(Debug, Error, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at byte {}: expected {}, found {}",
            self.offset,
            self.expected.join(" | "),
            self.found
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    And,
    Or,
    Xor,
    Arrow,
    Neg,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier {s:?}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Xor => "'^'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::Neg => "'-'".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'&' => {
                toks.push((i, Tok::And));
                i += 1;
            }
            b'|' => {
                toks.push((i, Tok::Or));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Xor));
                i += 1;
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((i, Tok::Arrow));
                    i += 2;
                } else {
                    toks.push((i, Tok::Neg));
                    i += 1;
                }
            }
            _ if b.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(ParseError {
                    offset: i,
                    expected: vec!["identifier", "'('", "')'", "'&'", "'|'", "'^'", "'->'", "'-'"],
                    found: format!("{:?}", text[i..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    bound: Option<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn found(&self) -> String {
        match self.toks.get(self.pos) {
            Some((_, t)) => t.describe(),
            None => "end of input".into(),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError { offset: self.here(), expected, found: self.found() }
    }

    fn expect(&mut self, tok: Tok, label: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(vec![label]))
        }
    }

    fn ident(&mut self, label: &'static str) -> Result<(usize, String), ParseError> {
        let offset = self.here();
        match self.bump() {
            Some(Tok::Ident(s)) => Ok((offset, s)),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err(vec![label]))
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if let Some(Tok::Ident(kw)) = self.peek() {
            if (kw == "all" || kw == "exists") && matches!(self.peek2(), Some(Tok::Ident(_))) {
                let universal = kw == "all";
                self.pos += 1;
                let (var_offset, var) = self.ident("variable")?;
                self.bound = Some(var.clone());
                self.expect(Tok::LParen, "'('")?;
                let body = self.implication()?;
                self.expect(Tok::RParen, "')'")?;
                self.bound = None;
                if !mentions_var(&body, &var) {
                    return Err(ParseError {
                        offset: var_offset,
                        expected: vec!["occurrence of the bound variable in the body"],
                        found: format!("unused variable binding {var:?}"),
                    });
                }
                let make = if universal { Formula::forall } else { Formula::exists };
                return Ok(make(var, body));
            }
        }
        self.implication()
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.xor()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn xor(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.or()?;
        while self.peek() == Some(&Tok::Xor) {
            self.pos += 1;
            f = Formula::xor(f, self.or()?);
        }
        Ok(f)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.and()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Tok::Neg) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let f = self.implication()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::Ident(kw))
                if (kw == "all" || kw == "exists")
                    && matches!(self.peek2(), Some(Tok::Ident(_))) =>
            {
                // Single prenex quantifier only.
                Err(ParseError {
                    offset: self.here(),
                    expected: vec!["atom", "'-'", "'('"],
                    found: format!("nested quantifier {kw:?}"),
                })
            }
            Some(Tok::Ident(_)) => self.atom(),
            _ => Err(self.err(vec!["atom", "'-'", "'('"])),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let (offset, pred) = self.ident("predicate")?;
        self.expect(Tok::LParen, "'('")?;
        let (_, arg) = self.ident("term")?;
        self.expect(Tok::RParen, "')'")?;
        let predicate = PredicateSymbol::new(pred).map_err(|e| ParseError {
            offset,
            expected: vec!["predicate identifier"],
            found: e.to_string(),
        })?;
        let term = match &self.bound {
            Some(var) if *var == arg => Term::Variable(arg),
            _ => Term::Constant(arg),
        };
        Ok(Formula::Atom(predicate, term))
    }
}

fn mentions_var(f: &Formula, var: &str) -> bool {
    match f {
        Formula::Atom(_, Term::Variable(v)) => v == var,
        Formula::Atom(_, Term::Constant(_)) => false,
        Formula::Not(inner) => mentions_var(inner, var),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Xor(a, b) => mentions_var(a, var) || mentions_var(b, var),
        Formula::ForAll(_, body) | Formula::Exists(_, body) => mentions_var(body, var),
    }
}

/// Parses a formula in the concrete syntax, yielding its unique AST.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0, end: text.len(), bound: None };
    let f = parser.formula()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.err(vec!["end of input"]));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn pred(name: &str) -> PredicateSymbol {
        PredicateSymbol::new(name).unwrap()
    }

    #[test]
    fn parses_rule_with_conjunction_antecedent() {
        let f = p("(f1(Sawyer) & f2(Sawyer)) -> f3(Sawyer)");
        let sawyer = || Term::Constant("Sawyer".into());
        assert_eq!(
            f,
            Formula::implies(
                Formula::and(
                    Formula::Atom(pred("f1"), sawyer()),
                    Formula::Atom(pred("f2"), sawyer())
                ),
                Formula::Atom(pred("f3"), sawyer())
            )
        );
    }

    #[test]
    fn parses_quantified_rule_with_placeholders() {
        let f = p("all x (F7(x) -> (is_fluffy(x) & F8(x)))");
        match &f {
            Formula::ForAll(var, body) => {
                assert_eq!(var, "x");
                assert!(matches!(**body, Formula::Implies(_, _)));
            }
            other => panic!("expected ForAll, got {other:?}"),
        }
        assert!(f.is_closed());
    }

    #[test]
    fn parses_bare_atom() {
        assert_eq!(
            p("poet(Sawyer)"),
            Formula::Atom(pred("poet"), Term::Constant("Sawyer".into()))
        );
    }

    #[test]
    fn precedence_not_and_or_xor_implies() {
        // -a & b  ==  (-a) & b
        let f = p("-a(X) & b(X)");
        assert!(matches!(f, Formula::And(_, _)));
        // a & b | c  ==  (a & b) | c
        let f = p("a(X) & b(X) | c(X)");
        assert!(matches!(f, Formula::Or(_, _)));
        // a | b ^ c  ==  (a | b) ^ c
        let f = p("a(X) | b(X) ^ c(X)");
        assert!(matches!(f, Formula::Xor(_, _)));
        // a ^ b -> c  ==  (a ^ b) -> c
        let f = p("a(X) ^ b(X) -> c(X)");
        assert!(matches!(f, Formula::Implies(_, _)));
    }

    #[test]
    fn implication_is_right_associative() {
        let f = p("a(X) -> b(X) -> c(X)");
        match f {
            Formula::Implies(_, rhs) => assert!(matches!(*rhs, Formula::Implies(_, _))),
            other => panic!("expected Implies, got {other:?}"),
        }
    }

    #[test]
    fn binary_chains_are_left_associative() {
        let f = p("a(X) & b(X) & c(X)");
        match f {
            Formula::And(lhs, _) => assert!(matches!(*lhs, Formula::And(_, _))),
            other => panic!("expected And, got {other:?}"),
        }
    }

    #[test]
    fn rejects_nested_quantifier() {
        let err = parse_formula("all x (p(x) & exists y (q(y)))").unwrap_err();
        assert!(err.found.contains("nested quantifier"));
        assert_eq!(err.offset, 14);
    }

    #[test]
    fn rejects_unused_bound_variable() {
        let err = parse_formula("all x (p(Sawyer))").unwrap_err();
        assert!(err.found.contains("unused variable"));
    }

    #[test]
    fn reports_offset_and_expected_set() {
        let err = parse_formula("p(A) &").unwrap_err();
        assert_eq!(err.offset, 6);
        assert!(err.expected.contains(&"atom"));
        assert_eq!(err.found, "end of input");

        let err = parse_formula("p(A) ? q(A)").unwrap_err();
        assert_eq!(err.offset, 5);
    }

    #[test]
    fn rejects_trailing_input() {
        let err = parse_formula("p(A) q(A)").unwrap_err();
        assert_eq!(err.expected, vec!["end of input"]);
    }

    #[test]
    fn quantifier_keyword_can_still_name_a_predicate() {
        // `all` followed by '(' is an atom, not a quantifier.
        let f = p("all(Sawyer)");
        assert_eq!(f, Formula::Atom(pred("all"), Term::Constant("Sawyer".into())));
    }
}
