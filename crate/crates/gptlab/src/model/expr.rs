//! Acceptance predicates over joint outcome strings.

use super::circuit::OutcomeVar;

/// Boolean expression over device outcome values.
///
/// Outcome values are small nonnegative integers; an expression is accepted
/// when it evaluates to a nonzero value. `Xor`/`And`/`Or` act bitwise on
/// integers, `Not` is logical.
#[derive(Clone, Debug, PartialEq)]
pub enum AcceptExpr {
    Const(bool),
    Lit(i64),
    Var(OutcomeVar),
    Eq(Box<AcceptExpr>, Box<AcceptExpr>),
    Not(Box<AcceptExpr>),
    And(Box<AcceptExpr>, Box<AcceptExpr>),
    Or(Box<AcceptExpr>, Box<AcceptExpr>),
    Xor(Box<AcceptExpr>, Box<AcceptExpr>),
    /// True when more than half of the sub-expressions are true.
    Majority(Vec<AcceptExpr>),
}

impl AcceptExpr {
    pub fn var(v: OutcomeVar) -> Self {
        AcceptExpr::Var(v)
    }

    pub fn eq(a: AcceptExpr, b: AcceptExpr) -> Self {
        AcceptExpr::Eq(Box::new(a), Box::new(b))
    }

    pub fn xor(a: AcceptExpr, b: AcceptExpr) -> Self {
        AcceptExpr::Xor(Box::new(a), Box::new(b))
    }

    pub fn and(a: AcceptExpr, b: AcceptExpr) -> Self {
        AcceptExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: AcceptExpr, b: AcceptExpr) -> Self {
        AcceptExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn not(a: AcceptExpr) -> Self {
        AcceptExpr::Not(Box::new(a))
    }

    /// XOR of a list of variables (parity).
    pub fn parity(vars: impl IntoIterator<Item = OutcomeVar>) -> Self {
        let mut it = vars.into_iter();
        let first = match it.next() {
            Some(v) => AcceptExpr::Var(v),
            None => AcceptExpr::Lit(0),
        };
        it.fold(first, |acc, v| AcceptExpr::xor(acc, AcceptExpr::Var(v)))
    }

    fn value(&self, outcomes: &[usize]) -> i64 {
        match self {
            AcceptExpr::Const(b) => *b as i64,
            AcceptExpr::Lit(n) => *n,
            AcceptExpr::Var(OutcomeVar(d)) => outcomes[*d] as i64,
            AcceptExpr::Eq(a, b) => (a.value(outcomes) == b.value(outcomes)) as i64,
            AcceptExpr::Not(a) => (a.value(outcomes) == 0) as i64,
            AcceptExpr::And(a, b) => a.value(outcomes) & b.value(outcomes),
            AcceptExpr::Or(a, b) => a.value(outcomes) | b.value(outcomes),
            AcceptExpr::Xor(a, b) => a.value(outcomes) ^ b.value(outcomes),
            AcceptExpr::Majority(items) => {
                let yes = items.iter().filter(|e| e.accepts(outcomes)).count();
                (2 * yes > items.len()) as i64
            }
        }
    }

    /// Evaluates the predicate on a joint outcome string indexed by device.
    pub fn accepts(&self, outcomes: &[usize]) -> bool {
        self.value(outcomes) != 0
    }

    /// Shifts every variable index by `offset` (used when duplicating
    /// circuits side by side).
    pub fn shift_vars(&self, offset: usize) -> AcceptExpr {
        match self {
            AcceptExpr::Const(b) => AcceptExpr::Const(*b),
            AcceptExpr::Lit(n) => AcceptExpr::Lit(*n),
            AcceptExpr::Var(OutcomeVar(d)) => AcceptExpr::Var(OutcomeVar(d + offset)),
            AcceptExpr::Eq(a, b) => AcceptExpr::eq(a.shift_vars(offset), b.shift_vars(offset)),
            AcceptExpr::Not(a) => AcceptExpr::not(a.shift_vars(offset)),
            AcceptExpr::And(a, b) => AcceptExpr::and(a.shift_vars(offset), b.shift_vars(offset)),
            AcceptExpr::Or(a, b) => AcceptExpr::or(a.shift_vars(offset), b.shift_vars(offset)),
            AcceptExpr::Xor(a, b) => AcceptExpr::xor(a.shift_vars(offset), b.shift_vars(offset)),
            AcceptExpr::Majority(items) => {
                AcceptExpr::Majority(items.iter().map(|e| e.shift_vars(offset)).collect())
            }
        }
    }
}
