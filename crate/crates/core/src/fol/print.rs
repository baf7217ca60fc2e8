//! Canonical text rendering.
//!
//! Composite operands of a binary connective are parenthesized unless they
//! chain the same operator on its associative side, so `(a(X) & b(X)) -> c(X)`
//! but `a(X) & b(X) & c(X)`. Parsing the output reproduces the AST exactly.

use super::Formula;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq)]
enum BinOp {
    And,
    Or,
    Xor,
    Implies,
}

fn bin_op(f: &Formula) -> Option<BinOp> {
    match f {
        Formula::And(_, _) => Some(BinOp::And),
        Formula::Or(_, _) => Some(BinOp::Or),
        Formula::Xor(_, _) => Some(BinOp::Xor),
        Formula::Implies(_, _) => Some(BinOp::Implies),
        _ => None,
    }
}

struct Style {
    not: &'static str,
    and: &'static str,
    or: &'static str,
    xor: &'static str,
    implies: &'static str,
    forall: &'static str,
    exists: &'static str,
}

const ASCII: Style = Style {
    not: "-",
    and: " & ",
    or: " | ",
    xor: " ^ ",
    implies: " -> ",
    forall: "all ",
    exists: "exists ",
};

const UNICODE: Style = Style {
    not: "¬",
    and: " ∧ ",
    or: " ∨ ",
    xor: " ⊕ ",
    implies: " → ",
    forall: "∀",
    exists: "∃",
};

fn write_node(f: &Formula, style: &Style, out: &mut String) {
    match f {
        Formula::Atom(p, t) => {
            out.push_str(p.name());
            out.push('(');
            out.push_str(t.text());
            out.push(')');
        }
        Formula::Not(inner) => {
            out.push_str(style.not);
            // Binary composites and quantifiers under negation need parens.
            if bin_op(inner).is_some() || inner.is_quantified() {
                out.push('(');
                write_node(inner, style, out);
                out.push(')');
            } else {
                write_node(inner, style, out);
            }
        }
        Formula::And(a, b) => write_binary(f, a, b, style.and, style, out),
        Formula::Or(a, b) => write_binary(f, a, b, style.or, style, out),
        Formula::Xor(a, b) => write_binary(f, a, b, style.xor, style, out),
        Formula::Implies(a, b) => write_binary(f, a, b, style.implies, style, out),
        Formula::ForAll(var, body) | Formula::Exists(var, body) => {
            out.push_str(if matches!(f, Formula::ForAll(_, _)) {
                style.forall
            } else {
                style.exists
            });
            out.push_str(var);
            out.push_str(" (");
            write_node(body, style, out);
            out.push(')');
        }
    }
}

fn write_binary(
    parent: &Formula,
    a: &Formula,
    b: &Formula,
    op_str: &str,
    style: &Style,
    out: &mut String,
) {
    let op = bin_op(parent).unwrap();
    // Chains of the same operator stay flat on the associative side:
    // left for & | ^, right for ->.
    write_child(a, op, op != BinOp::Implies, style, out);
    out.push_str(op_str);
    write_child(b, op, op == BinOp::Implies, style, out);
}

fn write_child(child: &Formula, parent_op: BinOp, natural_side: bool, style: &Style, out: &mut String) {
    let needs_parens = match bin_op(child) {
        Some(child_op) => child_op != parent_op || !natural_side,
        None => child.is_quantified(),
    };
    if needs_parens {
        out.push('(');
        write_node(child, style, out);
        out.push(')');
    } else {
        write_node(child, style, out);
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        write_node(self, &ASCII, &mut out);
        f.write_str(&out)
    }
}

impl Formula {
    /// Rendering with the usual logic glyphs, e.g. `∀x (F7(x) → (a(x) ∧ b(x)))`.
    /// Used in prompts and human-facing output; not parseable back.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        write_node(self, &UNICODE, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;

    fn roundtrip(text: &str) {
        let f = parse_formula(text).unwrap();
        assert_eq!(f.to_string(), text);
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn canonical_forms() {
        roundtrip("(a(X) & b(X)) -> c(X)");
        roundtrip("musician(Sawyer) ^ poet(Sawyer)");
        roundtrip("all x (p(x) -> q(x))");
        roundtrip("all x (F7(x) -> (is_fluffy(x) & F8(x)))");
        roundtrip("exists x (p(x) & q(x))");
        roundtrip("-p(A)");
        roundtrip("--p(A)");
        roundtrip("-(p(A) & q(A))");
        roundtrip("a(X) & b(X) & c(X)");
        roundtrip("a(X) & (b(X) & c(X))");
        roundtrip("a(X) -> b(X) -> c(X)");
        roundtrip("(a(X) -> b(X)) -> c(X)");
        roundtrip("-a(X) & b(X)");
        roundtrip("((a(X) | b(X)) ^ c(X)) -> d(X)");
    }

    #[test]
    fn structure_recoverable_after_paren_changes() {
        // Same token stream, different structure: printing keeps them apart.
        let flat = parse_formula("a(X) & b(X) & c(X)").unwrap();
        let nested = parse_formula("a(X) & (b(X) & c(X))").unwrap();
        assert_ne!(flat, nested);
        assert_ne!(flat.to_string(), nested.to_string());
    }

    #[test]
    fn drops_redundant_atom_parentheses() {
        let f = parse_formula("((a(X)) & ((b(X))))").unwrap();
        assert_eq!(f.to_string(), "a(X) & b(X)");
    }

    #[test]
    fn pretty_uses_logic_glyphs() {
        let f = parse_formula("all x (F7(x) -> (is_fluffy(x) & F8(x)))").unwrap();
        assert_eq!(f.pretty(), "∀x (F7(x) → (is_fluffy(x) ∧ F8(x)))");
    }
}
