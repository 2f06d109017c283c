use super::ast::*;
use super::lexer::{tokenize, Cursor, Tok};
use super::SyntaxError;

/// Parses `.poptam` source into a document (syntax only).
pub fn parse_document(src: &str) -> Result<ModelDocument, SyntaxError> {
    let mut c = Cursor::new(tokenize(src)?);
    let kind = if c.eat_keyword("popta") {
        ModelKind::Popta
    } else if c.eat_keyword("pomdp") {
        ModelKind::Pomdp
    } else {
        return Err(c.unexpected("`popta` or `pomdp`"));
    };
    c.eat(&Tok::Semi);
    let mut items = Vec::new();
    while c.peek() != &Tok::Eof {
        items.push(item(&mut c)?);
    }
    Ok(ModelDocument { kind, items })
}

fn item(c: &mut Cursor) -> Result<Item, SyntaxError> {
    let span = Span(c.pos());
    let it = if c.eat_keyword("const") {
        let ty = if c.eat_keyword("int") {
            ConstType::Int
        } else if c.eat_keyword("double") {
            ConstType::Double
        } else {
            return Err(c.unexpected("`int` or `double`"));
        };
        let (name, span) = c.ident()?;
        let value = if c.eat(&Tok::Assign) { Some(expr(c)?) } else { None };
        Item::Const { name, ty, value, span: Span(span) }
    } else if c.eat_keyword("clock") {
        let (name, span) = c.ident()?;
        let bound = if c.eat(&Tok::Le) { Some(expr(c)?) } else { None };
        Item::Clock { name, bound, span: Span(span) }
    } else if c.is_keyword("observable") || c.is_keyword("hidden") {
        let visibility =
            if c.eat_keyword("observable") { Visibility::Observable } else { c.next(); Visibility::Hidden };
        let (name, span) = c.ident()?;
        c.expect(&Tok::Colon)?;
        c.expect(&Tok::LBracket)?;
        let lo = expr(c)?;
        c.expect(&Tok::DotDot)?;
        let hi = expr(c)?;
        c.expect(&Tok::RBracket)?;
        c.expect_keyword("init")?;
        let init = expr(c)?;
        Item::Var { name, visibility, lo, hi, init, span: Span(span) }
    } else if c.eat_keyword("location") {
        let (name, span) = c.ident()?;
        c.expect_keyword("observe")?;
        let (observe, _) = c.ident()?;
        let init = c.eat_keyword("init");
        let invariant = if c.eat_keyword("invariant") { Some(expr(c)?) } else { None };
        Item::Location { name, observe, init, invariant, span: Span(span) }
    } else if c.eat_keyword("action") {
        let mut names = vec![];
        loop {
            let (n, p) = c.ident()?;
            names.push((n, Span(p)));
            if !c.eat(&Tok::Comma) {
                break;
            }
        }
        Item::Actions { names }
    } else if c.eat_keyword("invariant") {
        let cond = expr(c)?;
        c.expect(&Tok::Implies)?;
        let clocks = expr(c)?;
        Item::Invariant { cond, clocks, span }
    } else if c.eat(&Tok::LBracket) {
        let (action, _) = c.ident()?;
        c.expect(&Tok::RBracket)?;
        let guard = expr(c)?;
        c.expect(&Tok::Arrow)?;
        let rhs = rhs(c)?;
        Item::Command { action, guard, rhs, span }
    } else if c.eat_keyword("reward") {
        let action = if c.eat(&Tok::LBracket) {
            let (a, _) = c.ident()?;
            c.expect(&Tok::RBracket)?;
            Some(a)
        } else {
            None
        };
        let cond = expr(c)?;
        c.expect(&Tok::Colon)?;
        let value = expr(c)?;
        Item::Reward { action, cond, value, span }
    } else if c.eat_keyword("label") {
        let name = match c.next().tok {
            Tok::Str(s) => s,
            _ => return Err(SyntaxError::new(span.0, "expected a quoted label name")),
        };
        c.expect(&Tok::Assign)?;
        let cond = expr(c)?;
        Item::Label { name, cond, span }
    } else {
        return Err(c.unexpected("a declaration, command, reward or label"));
    };
    c.expect(&Tok::Semi)?;
    Ok(it)
}

fn rhs(c: &mut Cursor) -> Result<Rhs, SyntaxError> {
    let span = Span(c.pos());
    if c.eat_keyword("uniform") {
        let (var, _) = c.ident()?;
        c.expect(&Tok::Prime)?;
        c.expect_keyword("in")?;
        c.expect(&Tok::LBracket)?;
        let lo = expr(c)?;
        c.expect(&Tok::DotDot)?;
        let hi = expr(c)?;
        c.expect(&Tok::RBracket)?;
        let updates = if c.eat(&Tok::Colon) { updates(c)? } else { Vec::new() };
        return Ok(Rhs::Uniform { var, lo, hi, updates, span });
    }
    let mut branches = Vec::new();
    loop {
        let starts_updates = c.is_keyword("true")
            || (c.peek() == &Tok::LParen
                && matches!(c.peek_at(1), Tok::Ident(_))
                && c.peek_at(2) == &Tok::Prime);
        if starts_updates {
            branches.push(BranchAst { prob: None, updates: updates(c)? });
        } else {
            let p = expr(c)?;
            c.expect(&Tok::Colon)?;
            branches.push(BranchAst { prob: Some(p), updates: updates(c)? });
        }
        if !c.eat(&Tok::Plus) {
            break;
        }
    }
    Ok(Rhs::Branches(branches))
}

fn updates(c: &mut Cursor) -> Result<Vec<Update>, SyntaxError> {
    if c.eat_keyword("true") {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    loop {
        c.expect(&Tok::LParen)?;
        let (var, pos) = c.ident()?;
        c.expect(&Tok::Prime)?;
        c.expect(&Tok::Assign)?;
        let value = expr(c)?;
        c.expect(&Tok::RParen)?;
        out.push(Update { var, value, span: Span(pos) });
        if !c.eat(&Tok::And) {
            break;
        }
    }
    Ok(out)
}

pub fn expr(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    binary(c, 1)
}

fn binop(t: &Tok) -> Option<BinOp> {
    Some(match t {
        Tok::Or => BinOp::Or,
        Tok::And => BinOp::And,
        Tok::Assign | Tok::EqEq => BinOp::Eq,
        Tok::Neq => BinOp::Neq,
        Tok::Lt => BinOp::Lt,
        Tok::Le => BinOp::Le,
        Tok::Gt => BinOp::Gt,
        Tok::Ge => BinOp::Ge,
        Tok::Plus => BinOp::Add,
        Tok::Minus => BinOp::Sub,
        Tok::Star => BinOp::Mul,
        Tok::Slash => BinOp::Div,
        _ => return None,
    })
}

fn binary(c: &mut Cursor, min_prec: u8) -> Result<Expr, SyntaxError> {
    let mut lhs = unary(c)?;
    while let Some(op) = binop(c.peek()) {
        let prec = op.precedence();
        if prec < min_prec {
            break;
        }
        c.next();
        let rhs = binary(c, prec + 1)?;
        lhs = Expr::binary(op, lhs, rhs);
    }
    Ok(lhs)
}

fn unary(c: &mut Cursor) -> Result<Expr, SyntaxError> {
    if c.eat(&Tok::Not) {
        return Ok(Expr::Unary(UnOp::Not, Box::new(unary(c)?)));
    }
    if c.eat(&Tok::Minus) {
        return Ok(Expr::Unary(UnOp::Neg, Box::new(unary(c)?)));
    }
    let pos = c.pos();
    match c.peek().clone() {
        Tok::Int(n) => {
            c.next();
            let v = i64::try_from(n).map_err(|_| SyntaxError::new(pos, "integer literal too large"))?;
            Ok(Expr::Int(v))
        }
        Tok::Float(x) => {
            c.next();
            Ok(Expr::Float(x))
        }
        Tok::Ident(s) if s == "true" => {
            c.next();
            Ok(Expr::Bool(true))
        }
        Tok::Ident(s) if s == "false" => {
            c.next();
            Ok(Expr::Bool(false))
        }
        Tok::Ident(s) => {
            c.next();
            Ok(Expr::Ident(s, Span(pos)))
        }
        Tok::LParen => {
            c.next();
            let e = expr(c)?;
            c.expect(&Tok::RParen)?;
            Ok(e)
        }
        _ => Err(c.unexpected("an expression")),
    }
}
