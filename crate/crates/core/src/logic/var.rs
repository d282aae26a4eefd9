use std::collections::HashMap;
use std::fmt;
use std::ops::Not;

use serde::{Deserialize, Serialize};

/// Dense variable id. Ids are `0..n` within the owning [`VarTable`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Var(u32);

impl Var {
    pub fn new(index: usize) -> Var {
        Var(u32::try_from(index).expect("variable index overflow"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn pos(self) -> Lit {
        Lit::new(self, true)
    }

    pub fn neg(self) -> Lit {
        Lit::new(self, false)
    }

    /// The literal that holds when this variable takes `value`.
    pub fn lit(self, value: bool) -> Lit {
        Lit::new(self, value)
    }
}

/// A variable with a sign, packed as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 * 2 + u32::from(!positive))
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// The value the variable must take for this literal to hold.
    pub fn value(self) -> bool {
        self.is_positive()
    }

    pub(crate) fn code(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "{}", self.var().0)
        } else {
            write!(f, "-{}", self.var().0)
        }
    }
}

/// Interned variable names. Auxiliary variables introduced by the CNF
/// encoding are flagged and never visible to name lookup.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    aux: Vec<bool>,
    index: HashMap<String, Var>,
}

impl VarTable {
    pub fn new() -> VarTable {
        VarTable::default()
    }

    /// Builds a table from distinct names. Returns the first duplicate on
    /// failure.
    pub fn from_names<I, S>(names: I) -> Result<VarTable, String>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut table = VarTable::new();
        for name in names {
            let name = name.into();
            if table.index.contains_key(&name) {
                return Err(name);
            }
            table.intern(&name);
        }
        Ok(table)
    }

    /// Returns the id of `name`, registering it if needed.
    pub fn intern(&mut self, name: &str) -> Var {
        if let Some(&v) = self.index.get(name) {
            return v;
        }
        let v = Var::new(self.names.len());
        self.names.push(name.to_owned());
        self.aux.push(false);
        self.index.insert(name.to_owned(), v);
        v
    }

    pub(crate) fn add_aux(&mut self) -> Var {
        let v = Var::new(self.names.len());
        self.names.push(format!("$aux{}", v.0));
        self.aux.push(true);
        v
    }

    pub fn lookup(&self, name: &str) -> Option<Var> {
        self.index.get(name).copied()
    }

    pub fn name(&self, v: Var) -> &str {
        &self.names[v.index()]
    }

    pub fn is_aux(&self, v: Var) -> bool {
        self.aux[v.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        (0..self.names.len()).map(Var::new)
    }

    /// Non-auxiliary variables in id order.
    pub fn user_vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.vars().filter(move |&v| !self.is_aux(v))
    }

    pub fn user_count(&self) -> usize {
        self.aux.iter().filter(|a| !**a).count()
    }

    pub fn has_aux(&self) -> bool {
        self.aux.iter().any(|a| *a)
    }

    pub fn lit_name(&self, lit: Lit) -> String {
        if lit.is_positive() {
            self.name(lit.var()).to_owned()
        } else {
            format!("!{}", self.name(lit.var()))
        }
    }

    /// Renders a set of variables as `{a, b, c}`.
    pub fn set_name<I: IntoIterator<Item = Var>>(&self, vars: I) -> String {
        let names: Vec<&str> = vars.into_iter().map(|v| self.name(v)).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// A partial or total mapping from variables to truth values.
///
/// Total assignments compare equal exactly when their true-sets are equal.
/// The derived ordering on total assignments is the lexicographic order of
/// the bit pattern `b_0 b_1 ... b_{n-1}` with `false < true`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn unassigned(num_vars: usize) -> Assignment {
        Assignment {
            values: vec![None; num_vars],
        }
    }

    pub fn from_bools(values: &[bool]) -> Assignment {
        Assignment {
            values: values.iter().map(|&b| Some(b)).collect(),
        }
    }

    /// Total assignment over `num_vars` variables whose true-set is `trues`.
    pub fn from_true_set<I: IntoIterator<Item = Var>>(num_vars: usize, trues: I) -> Assignment {
        let mut values = vec![Some(false); num_vars];
        for v in trues {
            values[v.index()] = Some(true);
        }
        Assignment { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.values[v.index()]
    }

    pub fn set(&mut self, v: Var, value: Option<bool>) {
        self.values[v.index()] = value;
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// `Some(true)` if the literal holds, `Some(false)` if it is violated,
    /// `None` when its variable is unbound.
    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.get(lit.var()).map(|b| b == lit.is_positive())
    }

    pub fn satisfies(&self, lit: Lit) -> bool {
        self.lit_value(lit) == Some(true)
    }

    pub fn true_set(&self) -> Vec<Var> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == Some(true))
            .map(|(i, _)| Var::new(i))
            .collect()
    }

    /// True-set restricted to the non-auxiliary variables of `vars`.
    pub fn user_true_set(&self, vars: &VarTable) -> Vec<Var> {
        self.true_set()
            .into_iter()
            .filter(|&v| !vars.is_aux(v))
            .collect()
    }
}
