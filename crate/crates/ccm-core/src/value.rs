//! Values, variable declarations, and total states over a finite state space.
//!
//! Every variable ranges over either the booleans or a bounded integer
//! interval `[0, max]` with `max <= 7`, so the full state space of a program
//! is small enough to quantify over exhaustively.

use std::fmt;

use serde::Serialize;

use crate::CoreError;

/// Largest admissible upper bound for an integer variable domain.
pub const MAX_INT_BOUND: u8 = 7;

/// The domain a variable ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VarDomain {
    Bool,
    /// Integers `0..=max`, with `max <= MAX_INT_BOUND`.
    Int { max: u8 },
}

impl VarDomain {
    pub fn size(&self) -> usize {
        match self {
            VarDomain::Bool => 2,
            VarDomain::Int { max } => *max as usize + 1,
        }
    }

    /// All values of the domain, in canonical order.
    pub fn values(&self) -> Vec<Value> {
        match self {
            VarDomain::Bool => vec![Value::Bool(false), Value::Bool(true)],
            VarDomain::Int { max } => (0..=*max).map(Value::Int).collect(),
        }
    }

    pub fn contains(&self, v: Value) -> bool {
        match (self, v) {
            (VarDomain::Bool, Value::Bool(_)) => true,
            (VarDomain::Int { max }, Value::Int(k)) => k <= *max,
            _ => false,
        }
    }
}

impl fmt::Display for VarDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarDomain::Bool => write!(f, "bool"),
            VarDomain::Int { max } => write!(f, "int[0,{max}]"),
        }
    }
}

/// A concrete value: a boolean or a small bounded integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Value {
    Bool(bool),
    Int(u8),
}

impl Value {
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            Value::Int(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(k) => write!(f, "{k}"),
        }
    }
}

/// Index of a variable in its program's declaration table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VarId(pub usize);

/// A variable declaration: name, domain, initial value, ghost flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub domain: VarDomain,
    pub init: Value,
    pub ghost: bool,
}

/// The declaration table of a program. Variable identity is positional.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VarTable {
    decls: Vec<VarDecl>,
}

impl VarTable {
    pub fn new(decls: Vec<VarDecl>) -> Result<Self, CoreError> {
        for (i, d) in decls.iter().enumerate() {
            if let VarDomain::Int { max } = d.domain {
                if max > MAX_INT_BOUND {
                    return Err(CoreError::DomainTooLarge {
                        var: d.name.clone(),
                        max,
                    });
                }
            }
            if !d.domain.contains(d.init) {
                return Err(CoreError::DomainViolation {
                    var: d.name.clone(),
                    value: d.init,
                });
            }
            if decls[..i].iter().any(|e| e.name == d.name) {
                return Err(CoreError::DuplicateVar {
                    var: d.name.clone(),
                });
            }
        }
        Ok(VarTable { decls })
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn decl(&self, v: VarId) -> &VarDecl {
        &self.decls[v.0]
    }

    pub fn name(&self, v: VarId) -> &str {
        &self.decls[v.0].name
    }

    pub fn domain(&self, v: VarId) -> VarDomain {
        self.decls[v.0].domain
    }

    pub fn is_ghost(&self, v: VarId) -> bool {
        self.decls[v.0].ghost
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.decls.iter().position(|d| d.name == name).map(VarId)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &VarDecl)> {
        self.decls.iter().enumerate().map(|(i, d)| (VarId(i), d))
    }

    /// The state built from the declared initial values.
    pub fn initial_state(&self) -> State {
        State(self.decls.iter().map(|d| d.init).collect())
    }

    /// Iterator over every state of the declared space (odometer order).
    pub fn state_space(&self) -> StateSpace<'_> {
        StateSpace {
            table: self,
            next: Some(self.decls.iter().map(|d| d.domain.values()[0]).collect()),
        }
    }

    /// Total number of states in the declared space.
    pub fn space_size(&self) -> usize {
        self.decls.iter().map(|d| d.domain.size()).product()
    }
}

/// A total map from declared variables to values, stored positionally.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(pub Vec<Value>);

impl State {
    pub fn get(&self, v: VarId) -> Value {
        self.0[v.0]
    }

    pub fn set(&mut self, v: VarId, val: Value) {
        self.0[v.0] = val;
    }

    /// Renders as a sorted `var=value` list against a declaration table.
    pub fn render(&self, table: &VarTable) -> StateSnapshot {
        let mut pairs: Vec<(String, Value)> = self
            .0
            .iter()
            .enumerate()
            .map(|(i, v)| (table.name(VarId(i)).to_string(), *v))
            .collect();
        pairs.sort();
        StateSnapshot(pairs)
    }
}

/// A display/report form of a state: `var=value` pairs sorted by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct StateSnapshot(pub Vec<(String, Value)>);

impl StateSnapshot {
    pub fn value_of(&self, var: &str) -> Option<Value> {
        self.0
            .iter()
            .find(|(name, _)| name == var)
            .map(|(_, v)| *v)
    }
}

impl fmt::Display for StateSnapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{name}={v}")?;
        }
        Ok(())
    }
}

/// Exhaustive iterator over the declared state space.
pub struct StateSpace<'t> {
    table: &'t VarTable,
    next: Option<Vec<Value>>,
}

impl Iterator for StateSpace<'_> {
    type Item = State;

    fn next(&mut self) -> Option<State> {
        let cur = self.next.take()?;
        let out = State(cur.clone());
        // Advance the odometer, last variable fastest.
        let mut vals = cur;
        for i in (0..vals.len()).rev() {
            let dom = self.table.domain(VarId(i));
            let all = dom.values();
            let pos = all.iter().position(|v| *v == vals[i]).expect("in domain");
            if pos + 1 < all.len() {
                vals[i] = all[pos + 1];
                self.next = Some(vals);
                return Some(out);
            }
            vals[i] = all[0];
        }
        // Wrapped around: this was the last state. Empty tables yield the
        // single empty state exactly once.
        self.next = None;
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bool_decl(name: &str) -> VarDecl {
        VarDecl {
            name: name.to_string(),
            domain: VarDomain::Bool,
            init: Value::Bool(false),
            ghost: false,
        }
    }

    #[test]
    fn state_space_covers_product() {
        let table = VarTable::new(vec![
            bool_decl("x"),
            VarDecl {
                name: "v".into(),
                domain: VarDomain::Int { max: 3 },
                init: Value::Int(0),
                ghost: false,
            },
        ])
        .unwrap();
        let states: Vec<State> = table.state_space().collect();
        assert_eq!(states.len(), 8);
        assert_eq!(table.space_size(), 8);
        let distinct: std::collections::BTreeSet<_> = states.into_iter().collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn rejects_oversized_domain() {
        let err = VarTable::new(vec![VarDecl {
            name: "v".into(),
            domain: VarDomain::Int { max: 8 },
            init: Value::Int(0),
            ghost: false,
        }]);
        assert!(err.is_err());
    }

    #[test]
    fn rejects_out_of_domain_init() {
        let err = VarTable::new(vec![VarDecl {
            name: "v".into(),
            domain: VarDomain::Int { max: 2 },
            init: Value::Int(5),
            ghost: false,
        }]);
        assert!(err.is_err());
    }

    #[test]
    fn snapshot_sorts_by_name() {
        let table = VarTable::new(vec![bool_decl("y"), bool_decl("a")]).unwrap();
        let mut s = table.initial_state();
        s.set(VarId(0), Value::Bool(true));
        assert_eq!(s.render(&table).to_string(), "a=false y=true");
    }
}
