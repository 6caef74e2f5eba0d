//! Syntax tree for `.gpc` circuit files.

/// A numeric constructor argument: an integer or a rational `p/q`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Arg {
    Int(i64),
    Ratio(i64, i64),
}

impl std::fmt::Display for Arg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Arg::Int(n) => write!(f, "{n}"),
            Arg::Ratio(p, q) => write!(f, "{p}/{q}"),
        }
    }
}

/// A state or measurement constructor call, e.g. `vertex(1, 1, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ctor {
    pub name: String,
    pub args: Vec<Arg>,
}

/// Boolean expression over outcome variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoolAst {
    Int(i64),
    Var(String),
    Not(Box<BoolAst>),
    Xor(Box<BoolAst>, Box<BoolAst>),
    And(Box<BoolAst>, Box<BoolAst>),
    Or(Box<BoolAst>, Box<BoolAst>),
    Eq(Box<BoolAst>, Box<BoolAst>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StmtKind {
    System {
        name: String,
        ty: String,
    },
    Aux {
        name: String,
        ty: String,
    },
    Prepare {
        ctor: Ctor,
        wires: Vec<String>,
    },
    Apply {
        gate: String,
        inputs: Vec<String>,
        outputs: Vec<String>,
    },
    Measure {
        ctor: Ctor,
        wires: Vec<String>,
        vars: Vec<String>,
    },
    PostSelect {
        expr: BoolAst,
    },
}

#[derive(Clone, Debug)]
pub struct Stmt {
    pub kind: StmtKind,
    pub line: usize,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        // Structural equality ignores source positions.
        self.kind == other.kind
    }
}

impl Eq for Stmt {}

/// A parsed circuit file.
#[derive(Clone, Debug)]
pub struct CircuitAst {
    pub theory: String,
    pub statements: Vec<Stmt>,
    pub accept: BoolAst,
    pub accept_line: usize,
}

impl PartialEq for CircuitAst {
    fn eq(&self, other: &Self) -> bool {
        self.theory == other.theory
            && self.statements == other.statements
            && self.accept == other.accept
    }
}

impl Eq for CircuitAst {}
