use super::Pos;

/// Source position attached to AST nodes. Spans never take part in equality,
/// so documents compare structurally.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Span(pub Pos);

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Popta,
    Pomdp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelDocument {
    pub kind: ModelKind,
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstType {
    Int,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visibility {
    Observable,
    Hidden,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Item {
    Const { name: String, ty: ConstType, value: Option<Expr>, span: Span },
    Clock { name: String, bound: Option<Expr>, span: Span },
    Var { name: String, visibility: Visibility, lo: Expr, hi: Expr, init: Expr, span: Span },
    Location { name: String, observe: String, init: bool, invariant: Option<Expr>, span: Span },
    Actions { names: Vec<(String, Span)> },
    Invariant { cond: Expr, clocks: Expr, span: Span },
    Command { action: String, guard: Expr, rhs: Rhs, span: Span },
    Reward { action: Option<String>, cond: Expr, value: Expr, span: Span },
    Label { name: String, cond: Expr, span: Span },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Rhs {
    Branches(Vec<BranchAst>),
    Uniform { var: String, lo: Expr, hi: Expr, updates: Vec<Update>, span: Span },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchAst {
    /// Absent for a single unlabelled branch (probability one).
    pub prob: Option<Expr>,
    pub updates: Vec<Update>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Update {
    pub var: String,
    pub value: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Or,
    And,
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Neq | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 3,
            BinOp::Add | BinOp::Sub => 4,
            BinOp::Mul | BinOp::Div => 5,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Or => "|",
            BinOp::And => "&",
            BinOp::Eq => "=",
            BinOp::Neq => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    pub fn is_comparison(self) -> bool {
        self.precedence() == 3
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Int(i64),
    Float(f64),
    Bool(bool),
    Ident(String, Span),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    /// Top-level conjuncts.
    pub fn conjuncts(&self) -> Vec<&Expr> {
        match self {
            Expr::Binary(BinOp::And, l, r) => {
                let mut v = l.conjuncts();
                v.extend(r.conjuncts());
                v
            }
            other => vec![other],
        }
    }

    pub fn mentions(&self, pred: &dyn Fn(&str) -> bool) -> Option<(String, Span)> {
        match self {
            Expr::Ident(n, s) if pred(n) => Some((n.clone(), *s)),
            Expr::Unary(_, e) => e.mentions(pred),
            Expr::Binary(_, l, r) => l.mentions(pred).or_else(|| r.mentions(pred)),
            _ => None,
        }
    }
}
