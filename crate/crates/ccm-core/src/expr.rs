//! Boolean/integer expressions shared by guards, update right-hand sides,
//! and annotation predicates.

use std::collections::BTreeSet;
use std::fmt;

use crate::value::{State, Value, VarId, VarTable};
use crate::CoreError;

/// An expression over program variables. Guards are boolean-typed
/// expressions; integer expressions are only literals and variable
/// references (there is no arithmetic).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Bool(bool),
    Int(u8),
    Var(VarId),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Eq(Box<Expr>, Box<Expr>),
    Ne(Box<Expr>, Box<Expr>),
}

/// The two expression types.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ty {
    Bool,
    Int,
}

impl Expr {
    pub fn var(v: VarId) -> Expr {
        Expr::Var(v)
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Expr {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Expr {
        Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn eq(a: Expr, b: Expr) -> Expr {
        Expr::Eq(Box::new(a), Box::new(b))
    }

    pub fn ne(a: Expr, b: Expr) -> Expr {
        Expr::Ne(Box::new(a), Box::new(b))
    }

    /// Typechecks against a declaration table and returns the expression's
    /// type. All evaluation errors surface here, never at evaluation time.
    pub fn ty(&self, table: &VarTable) -> Result<Ty, CoreError> {
        match self {
            Expr::Bool(_) => Ok(Ty::Bool),
            Expr::Int(_) => Ok(Ty::Int),
            Expr::Var(v) => {
                if v.0 >= table.len() {
                    return Err(CoreError::UnknownVarId { id: v.0 });
                }
                Ok(match table.domain(*v) {
                    crate::value::VarDomain::Bool => Ty::Bool,
                    crate::value::VarDomain::Int { .. } => Ty::Int,
                })
            }
            Expr::Not(e) => match e.ty(table)? {
                Ty::Bool => Ok(Ty::Bool),
                Ty::Int => Err(CoreError::TypeMismatch {
                    context: "negation applied to an integer expression".into(),
                }),
            },
            Expr::And(a, b) | Expr::Or(a, b) => {
                if a.ty(table)? == Ty::Bool && b.ty(table)? == Ty::Bool {
                    Ok(Ty::Bool)
                } else {
                    Err(CoreError::TypeMismatch {
                        context: "boolean connective applied to an integer expression".into(),
                    })
                }
            }
            Expr::Eq(a, b) | Expr::Ne(a, b) => {
                if a.ty(table)? == b.ty(table)? {
                    Ok(Ty::Bool)
                } else {
                    Err(CoreError::TypeMismatch {
                        context: "comparison between a boolean and an integer".into(),
                    })
                }
            }
        }
    }

    /// Evaluates on a total state. Requires a well-typed expression (see
    /// [`Expr::ty`]); panics otherwise, since typechecking is performed when
    /// programs are constructed.
    pub fn eval(&self, s: &State) -> Value {
        match self {
            Expr::Bool(b) => Value::Bool(*b),
            Expr::Int(k) => Value::Int(*k),
            Expr::Var(v) => s.get(*v),
            Expr::Not(e) => match e.eval(s) {
                Value::Bool(b) => Value::Bool(!b),
                Value::Int(_) => panic!("ill-typed expression: !<int>"),
            },
            Expr::And(a, b) => {
                let av = a.eval(s).as_bool().expect("ill-typed &&");
                // No short-circuit needed; evaluation is total.
                let bv = b.eval(s).as_bool().expect("ill-typed &&");
                Value::Bool(av && bv)
            }
            Expr::Or(a, b) => {
                let av = a.eval(s).as_bool().expect("ill-typed ||");
                let bv = b.eval(s).as_bool().expect("ill-typed ||");
                Value::Bool(av || bv)
            }
            Expr::Eq(a, b) => Value::Bool(a.eval(s) == b.eval(s)),
            Expr::Ne(a, b) => Value::Bool(a.eval(s) != b.eval(s)),
        }
    }

    /// Evaluates a boolean expression. Panics on ill-typed input.
    pub fn eval_bool(&self, s: &State) -> bool {
        self.eval(s).as_bool().expect("guard must be boolean-typed")
    }

    /// Variables referenced anywhere in the expression.
    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Expr::Bool(_) | Expr::Int(_) => {}
            Expr::Var(v) => {
                out.insert(*v);
            }
            Expr::Not(e) => e.collect_vars(out),
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Eq(a, b) | Expr::Ne(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Rewrites variable ids through a map; `None` entries are unmapped
    /// variables and yield an error. Used when projecting augmented programs
    /// onto their ghost-free base.
    pub fn remap(&self, map: &[Option<VarId>]) -> Result<Expr, CoreError> {
        Ok(match self {
            Expr::Bool(b) => Expr::Bool(*b),
            Expr::Int(k) => Expr::Int(*k),
            Expr::Var(v) => Expr::Var(map[v.0].ok_or(CoreError::UnknownVarId { id: v.0 })?),
            Expr::Not(e) => Expr::not(e.remap(map)?),
            Expr::And(a, b) => Expr::and(a.remap(map)?, b.remap(map)?),
            Expr::Or(a, b) => Expr::or(a.remap(map)?, b.remap(map)?),
            Expr::Eq(a, b) => Expr::eq(a.remap(map)?, b.remap(map)?),
            Expr::Ne(a, b) => Expr::ne(a.remap(map)?, b.remap(map)?),
        })
    }

    /// Renders with variable names. Precedence: `||` < `&&` < `!` with
    /// comparisons at the atom level, matching the surface grammar.
    pub fn render(&self, table: &VarTable) -> String {
        self.render_prec(table, 0)
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Or(..) => 1,
            Expr::And(..) => 2,
            Expr::Eq(..) | Expr::Ne(..) => 3,
            Expr::Not(..) => 4,
            Expr::Bool(_) | Expr::Int(_) | Expr::Var(_) => 5,
        }
    }

    fn render_prec(&self, table: &VarTable, min: u8) -> String {
        let mine = self.prec();
        let body = match self {
            Expr::Bool(b) => b.to_string(),
            Expr::Int(k) => k.to_string(),
            Expr::Var(v) => table.name(*v).to_string(),
            Expr::Not(e) => format!("!{}", e.render_prec(table, 4)),
            Expr::And(a, b) => format!(
                "{} && {}",
                a.render_prec(table, 2),
                b.render_prec(table, 3)
            ),
            Expr::Or(a, b) => format!(
                "{} || {}",
                a.render_prec(table, 1),
                b.render_prec(table, 2)
            ),
            Expr::Eq(a, b) => format!(
                "{} == {}",
                a.render_prec(table, 4),
                b.render_prec(table, 4)
            ),
            Expr::Ne(a, b) => format!(
                "{} != {}",
                a.render_prec(table, 4),
                b.render_prec(table, 4)
            ),
        };
        if mine < min {
            format!("({body})")
        } else {
            body
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Bool => write!(f, "bool"),
            Ty::Int => write!(f, "int"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{VarDecl, VarDomain};

    fn table() -> VarTable {
        VarTable::new(vec![
            VarDecl {
                name: "x".into(),
                domain: VarDomain::Bool,
                init: Value::Bool(true),
                ghost: false,
            },
            VarDecl {
                name: "b".into(),
                domain: VarDomain::Bool,
                init: Value::Bool(true),
                ghost: false,
            },
            VarDecl {
                name: "y".into(),
                domain: VarDomain::Bool,
                init: Value::Bool(true),
                ghost: false,
            },
        ])
        .unwrap()
    }

    #[test]
    fn guard_negation() {
        // g = !y at {x:T, y:F}
        let t = table();
        let g = Expr::not(Expr::var(t.lookup("y").unwrap()));
        let mut s = t.initial_state();
        s.set(t.lookup("y").unwrap(), Value::Bool(false));
        assert!(g.eval_bool(&s));
    }

    #[test]
    fn omitted_guard_is_true() {
        let t = table();
        let g = Expr::Bool(true);
        for s in t.state_space() {
            assert!(g.eval_bool(&s));
        }
    }

    #[test]
    fn nested_disjunction() {
        // g = x || (b && y) at {x:F, b:T, y:T}
        let t = table();
        let (x, b, y) = (
            t.lookup("x").unwrap(),
            t.lookup("b").unwrap(),
            t.lookup("y").unwrap(),
        );
        let g = Expr::or(Expr::var(x), Expr::and(Expr::var(b), Expr::var(y)));
        let mut s = t.initial_state();
        s.set(x, Value::Bool(false));
        assert!(g.eval_bool(&s));
    }

    #[test]
    fn typecheck_rejects_mixed_comparison() {
        let t = VarTable::new(vec![
            VarDecl {
                name: "x".into(),
                domain: VarDomain::Bool,
                init: Value::Bool(false),
                ghost: false,
            },
            VarDecl {
                name: "v".into(),
                domain: VarDomain::Int { max: 3 },
                init: Value::Int(0),
                ghost: false,
            },
        ])
        .unwrap();
        let e = Expr::eq(Expr::var(VarId(0)), Expr::var(VarId(1)));
        assert!(e.ty(&t).is_err());
    }

    #[test]
    fn render_round_structure() {
        let t = table();
        let (x, b, y) = (VarId(0), VarId(1), VarId(2));
        let e = Expr::or(Expr::and(Expr::var(x), Expr::not(Expr::var(b))), Expr::var(y));
        assert_eq!(e.render(&t), "x && !b || y");
        let e2 = Expr::and(Expr::var(x), Expr::or(Expr::var(b), Expr::var(y)));
        assert_eq!(e2.render(&t), "x && (b || y)");
        let e3 = Expr::eq(Expr::var(b), Expr::not(Expr::var(x)));
        assert_eq!(e3.render(&t), "b == !x");
    }
}
