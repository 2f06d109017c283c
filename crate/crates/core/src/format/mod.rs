//! The `.poptam` modelling language: guarded commands over bounded integer
//! variables split into observable and hidden parts, optional clocks, and
//! named locations with observations.

pub mod ast;
mod elaborate;
pub mod lexer;
mod parser;
mod print;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use ast::ModelDocument;
pub use elaborate::{elaborate, ElabOptions, ElaboratedModel};
pub use print::print_document;

/// 1-based line and column.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError { pos, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: {message}")]
    Reference { pos: Pos, message: String },
    #[error("{}{message}", pos.map(|p| format!("{p}: ")).unwrap_or_default())]
    Elaboration { pos: Option<Pos>, message: String },
    #[error("model exceeds the limit of {0} discrete states")]
    Capacity(usize),
}

impl FormatError {
    pub(crate) fn elab(pos: Option<Pos>, message: impl Into<String>) -> Self {
        FormatError::Elaboration { pos, message: message.into() }
    }
}

/// Parses a model and checks that every identifier is declared once.
pub fn parse_model(src: &str) -> Result<ModelDocument, FormatError> {
    let doc = parser::parse_document(src)?;
    check_references(&doc)?;
    Ok(doc)
}

fn check_references(doc: &ModelDocument) -> Result<(), FormatError> {
    use ast::{Expr, Item, Rhs};

    let mut names: BTreeSet<String> = BTreeSet::new();
    let mut consts: BTreeSet<String> = BTreeSet::new();
    let mut actions: BTreeSet<String> = BTreeSet::new();
    let mut labels: BTreeSet<String> = BTreeSet::new();
    let mut vars: BTreeSet<String> = BTreeSet::new();
    let mut locations = 0usize;
    let dup = |pos: Pos, what: &str, name: &str| FormatError::Reference {
        pos,
        message: format!("{what} `{name}` is already declared"),
    };
    names.insert("loc".into());

    for item in &doc.items {
        match item {
            Item::Const { name, value, span, .. } => {
                if let Some(v) = value {
                    if let Some((n, s)) = v.mentions(&|n| !consts.contains(n)) {
                        return Err(FormatError::Reference {
                            pos: s.0,
                            message: format!("`{n}` is not a previously declared constant"),
                        });
                    }
                }
                if !names.insert(name.clone()) {
                    return Err(dup(span.0, "identifier", name));
                }
                consts.insert(name.clone());
            }
            Item::Clock { name, span, .. } | Item::Var { name, span, .. } => {
                if !names.insert(name.clone()) {
                    return Err(dup(span.0, "identifier", name));
                }
                if matches!(item, Item::Var { .. }) {
                    vars.insert(name.clone());
                } else if doc.kind == ast::ModelKind::Pomdp {
                    return Err(FormatError::Reference {
                        pos: span.0,
                        message: "clocks are only allowed in `popta` models".into(),
                    });
                }
            }
            Item::Location { name, span, .. } => {
                if !names.insert(name.clone()) {
                    return Err(dup(span.0, "location", name));
                }
                locations += 1;
            }
            Item::Actions { names: list } => {
                for (a, span) in list {
                    if !actions.insert(a.clone()) {
                        return Err(dup(span.0, "action", a));
                    }
                }
            }
            Item::Label { name, span, .. } => {
                if !labels.insert(name.clone()) {
                    return Err(dup(span.0, "label", name));
                }
            }
            _ => {}
        }
    }

    let undeclared = |e: &Expr| -> Result<(), FormatError> {
        match e.mentions(&|n| !names.contains(n)) {
            Some((n, s)) => Err(FormatError::Reference { pos: s.0, message: format!("`{n}` is not declared") }),
            None => Ok(()),
        }
    };
    let check_action = |a: &str, pos: Pos| -> Result<(), FormatError> {
        if actions.contains(a) {
            Ok(())
        } else {
            Err(FormatError::Reference { pos, message: format!("action `{a}` is not declared") })
        }
    };
    let check_update = |u: &ast::Update| -> Result<(), FormatError> {
        if u.var != "loc" && !names.contains(&u.var) || consts.contains(&u.var) {
            return Err(FormatError::Reference {
                pos: u.span.0,
                message: format!("`{}` is not a variable or clock", u.var),
            });
        }
        undeclared(&u.value)
    };

    let mut inits = Vec::new();
    for item in &doc.items {
        match item {
            Item::Clock { bound: Some(b), .. } => undeclared(b)?,
            Item::Var { lo, hi, init, .. } => {
                undeclared(lo)?;
                undeclared(hi)?;
                undeclared(init)?;
            }
            Item::Location { invariant, init, span, .. } => {
                if let Some(inv) = invariant {
                    undeclared(inv)?;
                }
                if *init {
                    inits.push(span.0);
                }
            }
            Item::Invariant { cond, clocks, .. } => {
                undeclared(cond)?;
                undeclared(clocks)?;
            }
            Item::Command { action, guard, rhs, span } => {
                check_action(action, span.0)?;
                undeclared(guard)?;
                match rhs {
                    Rhs::Branches(bs) => {
                        for b in bs {
                            if let Some(p) = &b.prob {
                                undeclared(p)?;
                            }
                            for u in &b.updates {
                                check_update(u)?;
                            }
                        }
                    }
                    Rhs::Uniform { var, lo, hi, updates, span } => {
                        if !vars.contains(var) {
                            return Err(FormatError::Reference {
                                pos: span.0,
                                message: format!("`{var}` is not a variable"),
                            });
                        }
                        undeclared(lo)?;
                        undeclared(hi)?;
                        for u in updates {
                            check_update(u)?;
                        }
                    }
                }
            }
            Item::Reward { action, cond, value, span } => {
                if let Some(a) = action {
                    check_action(a, span.0)?;
                }
                undeclared(cond)?;
                undeclared(value)?;
            }
            Item::Label { cond, .. } => undeclared(cond)?,
            _ => {}
        }
    }
    if locations > 0 && inits.len() != 1 {
        let pos = inits.get(1).copied().unwrap_or_default();
        return Err(FormatError::Reference {
            pos,
            message: format!("exactly one location must be marked `init` (found {})", inits.len()),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = r#"
        popta
        clock x;
        action go;
        location a observe oa init invariant x <= 2;
        location b observe ob;
        [go] loc = a & x >= 1 -> (loc' = b) & (x' = 0);
    "#;

    #[test]
    fn minimal_document() {
        let doc = parse_model(TWO).unwrap();
        let locs = doc.items.iter().filter(|i| matches!(i, ast::Item::Location { .. })).count();
        let clocks = doc.items.iter().filter(|i| matches!(i, ast::Item::Clock { .. })).count();
        assert_eq!((locs, clocks), (2, 1));
    }

    #[test]
    fn duplicate_location_reported_at_second() {
        let src = "popta\nlocation a observe o init;\nlocation a observe p;\n";
        match parse_model(src) {
            Err(FormatError::Reference { pos, .. }) => assert_eq!(pos, Pos { line: 3, col: 10 }),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn undeclared_names_are_errors() {
        let src = "popta\naction go;\nlocation a observe o init;\n[go] q > 1 -> true;\n";
        assert!(matches!(parse_model(src), Err(FormatError::Reference { .. })));
        let src = "popta\nlocation a observe o init;\n[go] true -> true;\n";
        assert!(matches!(parse_model(src), Err(FormatError::Reference { .. })));
    }

    #[test]
    fn syntax_errors_have_positions() {
        match parse_model("popta\nclock x\n") {
            Err(FormatError::Syntax(e)) => assert_eq!(e.pos.line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn print_round_trip() {
        let doc = parse_model(TWO).unwrap();
        let text = print_document(&doc);
        assert_eq!(parse_model(&text).unwrap(), doc);
    }
}
