use std::fmt::Write;

use super::ast::*;

/// Renders a document as `.poptam` source; parsing the output yields an
/// equal document.
pub fn print_document(doc: &ModelDocument) -> String {
    let mut out = String::new();
    out.push_str(match doc.kind {
        ModelKind::Popta => "popta\n\n",
        ModelKind::Pomdp => "pomdp\n\n",
    });
    for item in &doc.items {
        print_item(&mut out, item);
        out.push('\n');
    }
    out
}

fn print_item(out: &mut String, item: &Item) {
    match item {
        Item::Const { name, ty, value, .. } => {
            let ty = match ty {
                ConstType::Int => "int",
                ConstType::Double => "double",
            };
            match value {
                Some(v) => write!(out, "const {ty} {name} = {};", expr(v)),
                None => write!(out, "const {ty} {name};"),
            }
            .unwrap();
        }
        Item::Clock { name, bound, .. } => match bound {
            Some(b) => write!(out, "clock {name} <= {};", expr(b)).unwrap(),
            None => write!(out, "clock {name};").unwrap(),
        },
        Item::Var { name, visibility, lo, hi, init, .. } => {
            let vis = match visibility {
                Visibility::Observable => "observable",
                Visibility::Hidden => "hidden",
            };
            write!(out, "{vis} {name} : [{}..{}] init {};", expr(lo), expr(hi), expr(init)).unwrap();
        }
        Item::Location { name, observe, init, invariant, .. } => {
            write!(out, "location {name} observe {observe}").unwrap();
            if *init {
                out.push_str(" init");
            }
            if let Some(inv) = invariant {
                write!(out, " invariant {}", expr(inv)).unwrap();
            }
            out.push(';');
        }
        Item::Actions { names } => {
            let list: Vec<&str> = names.iter().map(|n| n.0.as_str()).collect();
            write!(out, "action {};", list.join(", ")).unwrap();
        }
        Item::Invariant { cond, clocks, .. } => {
            write!(out, "invariant {} => {};", expr(cond), expr(clocks)).unwrap();
        }
        Item::Command { action, guard, rhs, .. } => {
            write!(out, "[{action}] {} -> ", expr(guard)).unwrap();
            match rhs {
                Rhs::Uniform { var, lo, hi, updates: ups, .. } => {
                    write!(out, "uniform {var}' in [{}..{}]", expr(lo), expr(hi)).unwrap();
                    if !ups.is_empty() {
                        write!(out, " : {}", updates(ups)).unwrap();
                    }
                }
                Rhs::Branches(bs) => {
                    for (i, b) in bs.iter().enumerate() {
                        if i > 0 {
                            out.push_str(" + ");
                        }
                        if let Some(p) = &b.prob {
                            write!(out, "{}:", expr(p)).unwrap();
                        }
                        out.push_str(&updates(&b.updates));
                    }
                }
            }
            out.push(';');
        }
        Item::Reward { action, cond, value, .. } => {
            out.push_str("reward ");
            if let Some(a) = action {
                write!(out, "[{a}] ").unwrap();
            }
            write!(out, "{} : {};", expr(cond), expr(value)).unwrap();
        }
        Item::Label { name, cond, .. } => {
            write!(out, "label \"{name}\" = {};", expr(cond)).unwrap();
        }
    }
}

fn updates(ups: &[Update]) -> String {
    if ups.is_empty() {
        return "true".into();
    }
    let parts: Vec<String> = ups.iter().map(|u| format!("({}'={})", u.var, expr(&u.value))).collect();
    parts.join(" & ")
}

pub fn expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e, 0);
    s
}

fn write_expr(out: &mut String, e: &Expr, parent: u8) {
    match e {
        Expr::Int(n) => write!(out, "{n}").unwrap(),
        Expr::Float(x) => write!(out, "{x:?}").unwrap(),
        Expr::Bool(b) => write!(out, "{b}").unwrap(),
        Expr::Ident(n, _) => out.push_str(n),
        Expr::Unary(op, inner) => {
            out.push(match op {
                UnOp::Neg => '-',
                UnOp::Not => '!',
            });
            // unary binds tighter than every binary operator
            write_expr(out, inner, 6);
        }
        Expr::Binary(op, l, r) => {
            let p = op.precedence();
            let paren = p < parent;
            if paren {
                out.push('(');
            }
            write_expr(out, l, p);
            write!(out, " {} ", op.symbol()).unwrap();
            // right operands at equal precedence need parentheses (left-assoc)
            write_expr(out, r, p + 1);
            if paren {
                out.push(')');
            }
        }
    }
}
