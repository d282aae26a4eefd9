//! The interactive configuration process.
//!
//! A session starts from a satisfiable base formula and accumulates
//! decisions. Each decision is a literal over a user variable with an
//! origin: made by the user, inferred because the current constraint
//! entails it, or set automatically by a completion function. After every
//! mutation the entailed literals over the still unassigned variables are
//! added as inferred decisions.
//!
//! Every operation that logs something gets a fresh step index, shared by
//! all decisions it produces. Step 0 holds the literals forced by the base
//! formula alone.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{backbone, ClauseSet, Lit, Solver, Var};
use crate::reasoning::{dispensable_under, minimal_models_under, ReasoningError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    User,
    Inferred,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decision {
    pub var: Var,
    pub value: bool,
    pub origin: Origin,
    pub step: usize,
}

impl Decision {
    pub fn lit(&self) -> Lit {
        self.var.lit(self.value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarStatus {
    Unassigned,
    UserTrue,
    UserFalse,
    InferredTrue,
    InferredFalse,
    AutoFalse,
    /// Only blind completion sets variables true automatically.
    AutoTrue,
}

impl VarStatus {
    fn of(d: Option<&Decision>) -> VarStatus {
        match d.map(|d| (d.origin, d.value)) {
            None => VarStatus::Unassigned,
            Some((Origin::User, true)) => VarStatus::UserTrue,
            Some((Origin::User, false)) => VarStatus::UserFalse,
            Some((Origin::Inferred, true)) => VarStatus::InferredTrue,
            Some((Origin::Inferred, false)) => VarStatus::InferredFalse,
            Some((Origin::Auto, true)) => VarStatus::AutoTrue,
            Some((Origin::Auto, false)) => VarStatus::AutoFalse,
        }
    }

    pub fn value(self) -> Option<bool> {
        match self {
            VarStatus::Unassigned => None,
            VarStatus::UserTrue | VarStatus::InferredTrue | VarStatus::AutoTrue => Some(true),
            _ => Some(false),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SessionError {
    #[error("the model admits no products")]
    UnsatModel,
    #[error("unknown variable '{0}'")]
    UnknownVar(String),
    #[error("'{0}' is already assigned")]
    AlreadyAssigned(String),
    #[error("setting '{0}' to {1} contradicts the constraints")]
    InconsistentDecision(String, bool),
    #[error("'{0}' carries no user decision")]
    NotAUserDecision(String),
}

impl SessionError {
    /// Stable machine-readable tag.
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::UnsatModel => "unsat_model",
            SessionError::UnknownVar(_) => "unknown_var",
            SessionError::AlreadyAssigned(_) => "already_assigned",
            SessionError::InconsistentDecision(..) => "inconsistent_decision",
            SessionError::NotAUserDecision(_) => "not_a_user_decision",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("script line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct Session {
    base: ClauseSet,
    solver: Solver,
    decisions: Vec<Decision>,
    /// Index into `decisions` per variable.
    slot: Vec<Option<usize>>,
    next_step: usize,
    shopping: bool,
    highlight: Vec<Var>,
}

impl Session {
    /// Starts a session; literals entailed by `base` are inferred at step 0.
    pub fn new(base: ClauseSet) -> Result<Session, SessionError> {
        let solver = Solver::new(&base);
        let n = base.num_vars();
        let mut s = Session {
            base,
            solver,
            decisions: Vec::new(),
            slot: vec![None; n],
            next_step: 0,
            shopping: false,
            highlight: Vec::new(),
        };
        if !s.solver.is_sat(&[]) {
            return Err(SessionError::UnsatModel);
        }
        s.infer(0);
        s.next_step = 1;
        Ok(s)
    }

    pub fn base(&self) -> &ClauseSet {
        &self.base
    }

    pub fn decisions(&self) -> &[Decision] {
        &self.decisions
    }

    /// User variables in id order.
    pub fn vars(&self) -> Vec<Var> {
        self.base.user_vars()
    }

    pub fn name(&self, v: Var) -> &str {
        self.base.vars().name(v)
    }

    pub fn lookup(&self, name: &str) -> Result<Var, SessionError> {
        self.base
            .lookup(name)
            .ok_or_else(|| SessionError::UnknownVar(name.to_owned()))
    }

    pub fn decision(&self, v: Var) -> Option<&Decision> {
        self.slot
            .get(v.index())
            .copied()
            .flatten()
            .map(|i| &self.decisions[i])
    }

    pub fn status(&self, v: Var) -> VarStatus {
        VarStatus::of(self.decision(v))
    }

    pub fn value(&self, v: Var) -> Option<bool> {
        self.decision(v).map(|d| d.value)
    }

    /// The decision literals, i.e. the current constraint minus the base.
    pub fn assumptions(&self) -> Vec<Lit> {
        self.decisions.iter().map(Decision::lit).collect()
    }

    pub fn unassigned(&self) -> Vec<Var> {
        self.base
            .user_vars()
            .into_iter()
            .filter(|v| self.slot[v.index()].is_none())
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.unassigned().is_empty()
    }

    /// Unassigned variables that need the user's attention. Empty until the
    /// shopping principle has been invoked once; afterwards recomputed
    /// after every mutation as the unassigned variables that are not
    /// dispensable under the current constraint.
    pub fn highlight(&self) -> &[Var] {
        &self.highlight
    }

    pub fn is_highlighted(&self, v: Var) -> bool {
        self.highlight.binary_search(&v).is_ok()
    }

    pub fn shopping_invoked(&self) -> bool {
        self.shopping
    }

    /// Whether setting `v` true (resp. false) is consistent. Both are false
    /// for assigned variables.
    pub fn selectable(&mut self, v: Var) -> (bool, bool) {
        if self.slot[v.index()].is_some() {
            return (false, false);
        }
        let mut query = self.assumptions();
        query.push(v.pos());
        let t = self.solver.is_sat(&query);
        query.pop();
        query.push(v.neg());
        let f = self.solver.is_sat(&query);
        (t, f)
    }

    /// Number of minimal models of the current constraint, failing once
    /// more than `limit` have been found.
    pub fn minimal_model_count(&self, limit: usize) -> Result<usize, ReasoningError> {
        minimal_models_under(&self.base, &self.assumptions(), Some(limit)).map(|m| m.len())
    }

    fn push(&mut self, var: Var, value: bool, origin: Origin, step: usize) {
        debug_assert!(self.slot[var.index()].is_none());
        self.slot[var.index()] = Some(self.decisions.len());
        self.decisions.push(Decision {
            var,
            value,
            origin,
            step,
        });
    }

    /// Adds every literal entailed by the current constraint over the
    /// unassigned variables. Adding entailed literals does not change the
    /// model set, so a single pass reaches the fixpoint.
    fn infer(&mut self, step: usize) {
        let open = self.unassigned();
        if open.is_empty() {
            return;
        }
        let assumptions = self.assumptions();
        let forced = backbone(&mut self.solver, &assumptions, &open)
            .expect("session constraint is satisfiable");
        for l in forced {
            self.push(l.var(), l.value(), Origin::Inferred, step);
        }
    }

    fn refresh_highlight(&mut self) {
        self.highlight.clear();
        if !self.shopping || self.is_complete() {
            return;
        }
        let report = dispensable_under(&self.base, &self.assumptions())
            .expect("session constraint is satisfiable");
        self.highlight = report
            .needs_attention
            .into_iter()
            .filter(|v| self.slot[v.index()].is_none())
            .collect();
        self.highlight.sort();
    }

    fn check_user_var(&self, v: Var) -> Result<(), SessionError> {
        if v.index() >= self.base.num_vars() || self.base.vars().is_aux(v) {
            return Err(SessionError::UnknownVar(format!("#{}", v.index())));
        }
        Ok(())
    }

    /// Applies a user decision, then inference.
    pub fn decide(&mut self, v: Var, value: bool) -> Result<(), SessionError> {
        self.check_user_var(v)?;
        if self.slot[v.index()].is_some() {
            return Err(SessionError::AlreadyAssigned(self.name(v).to_owned()));
        }
        let mut query = self.assumptions();
        query.push(v.lit(value));
        if !self.solver.is_sat(&query) {
            return Err(SessionError::InconsistentDecision(self.name(v).to_owned(), value));
        }
        let step = self.next_step;
        self.next_step += 1;
        self.push(v, value, Origin::User, step);
        self.infer(step);
        self.refresh_highlight();
        Ok(())
    }

    pub fn decide_named(&mut self, name: &str, value: bool) -> Result<(), SessionError> {
        let v = self.lookup(name)?;
        self.decide(v, value)
    }

    /// Removes the user decision on `v` and rebuilds the log by replaying
    /// the remaining user decisions in their original order, each keeping
    /// its step index. Inferred and automatic decisions are dropped and
    /// re-derived only by inference. Returns any replayed decision that no
    /// longer fits; such decisions are dropped.
    pub fn retract(&mut self, v: Var) -> Result<Vec<Decision>, SessionError> {
        self.check_user_var(v)?;
        match self.decision(v) {
            Some(d) if d.origin == Origin::User => {}
            _ => return Err(SessionError::NotAUserDecision(self.name(v).to_owned())),
        }
        let replay: Vec<Decision> = self
            .decisions
            .iter()
            .filter(|d| d.origin == Origin::User && d.var != v)
            .copied()
            .collect();
        self.decisions.clear();
        self.slot.iter_mut().for_each(|s| *s = None);
        self.infer(0);
        let mut dropped = Vec::new();
        for d in replay {
            if let Some(current) = self.value(d.var) {
                // Already implied by earlier decisions; the user decision
                // would be redundant (same value) or contradictory.
                if current != d.value {
                    dropped.push(d);
                }
                continue;
            }
            let mut query = self.assumptions();
            query.push(d.lit());
            if !self.solver.is_sat(&query) {
                dropped.push(d);
                continue;
            }
            self.push(d.var, d.value, Origin::User, d.step);
            self.infer(d.step);
        }
        self.refresh_highlight();
        Ok(dropped)
    }

    pub fn retract_named(&mut self, name: &str) -> Result<Vec<Decision>, SessionError> {
        let v = self.lookup(name)?;
        self.retract(v)
    }

    /// Deselects every unassigned dispensable variable in one batch, then
    /// runs inference and highlights what remains. Never sets a variable
    /// true. Returns the deselected variables.
    pub fn shopping_principle(&mut self) -> Vec<Var> {
        self.shopping = true;
        let mut deselected = Vec::new();
        if !self.is_complete() {
            let report = dispensable_under(&self.base, &self.assumptions())
                .expect("session constraint is satisfiable");
            let step = self.next_step;
            for v in report.dispensable {
                if self.slot[v.index()].is_none() {
                    self.push(v, false, Origin::Auto, step);
                    deselected.push(v);
                }
            }
            if !deselected.is_empty() {
                self.next_step += 1;
                self.infer(step);
            }
        }
        self.refresh_highlight();
        deselected
    }

    /// Binds every unassigned variable to its value in the solver's model
    /// of the current constraint. Returns the newly bound variables.
    pub fn complete_blind(&mut self) -> Vec<Var> {
        let open = self.unassigned();
        if open.is_empty() {
            return open;
        }
        let model = self
            .solver
            .solve(&self.assumptions())
            .expect("session constraint is satisfiable");
        let step = self.next_step;
        self.next_step += 1;
        for &v in &open {
            self.push(v, model[v.index()], Origin::Auto, step);
        }
        self.refresh_highlight();
        open
    }

    /// The decision log as a replayable script: `decide <var> <true|false>`
    /// per user decision, `auto <var>=<0|1> ...` per batch of automatic
    /// decisions, and a final `shopping` line once the shopping principle
    /// has been invoked. Inferred decisions are left to replay. Replay
    /// renumbers steps consecutively.
    pub fn to_script(&self) -> String {
        let mut out = String::new();
        let mut batch: Option<usize> = None;
        for d in &self.decisions {
            match d.origin {
                Origin::User => {
                    batch = None;
                    out.push_str(&format!("decide {} {}\n", self.name(d.var), d.value));
                }
                Origin::Auto => {
                    if batch == Some(d.step) {
                        out.pop();
                    } else {
                        out.push_str("auto");
                        batch = Some(d.step);
                    }
                    out.push_str(&format!(" {}={}\n", self.name(d.var), u8::from(d.value)));
                }
                Origin::Inferred => {}
            }
        }
        if self.shopping {
            out.push_str("shopping\n");
        }
        out
    }

    /// Applies a batch of automatic decisions as one step, then inference.
    fn apply_auto(&mut self, batch: &[(Var, bool)]) -> Result<(), SessionError> {
        let mut query = self.assumptions();
        for &(v, value) in batch {
            self.check_user_var(v)?;
            if self.slot[v.index()].is_some() || query.iter().any(|l| l.var() == v) {
                return Err(SessionError::AlreadyAssigned(self.name(v).to_owned()));
            }
            query.push(v.lit(value));
        }
        if !self.solver.is_sat(&query) {
            let (v, value) = batch[0];
            return Err(SessionError::InconsistentDecision(self.name(v).to_owned(), value));
        }
        let step = self.next_step;
        self.next_step += 1;
        for &(v, value) in batch {
            self.push(v, value, Origin::Auto, step);
        }
        self.infer(step);
        self.refresh_highlight();
        Ok(())
    }

    /// Replays a script produced by [`Session::to_script`]. Blank lines
    /// and `#` comments are ignored.
    pub fn replay(base: ClauseSet, script: &str) -> Result<Session, ScriptError> {
        let mut s = Session::new(base).map_err(|e| ScriptError {
            line: 0,
            message: e.to_string(),
        })?;
        for (i, raw) in script.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let err = |message: String| ScriptError { line, message };
            let words: Vec<&str> = text.split_whitespace().collect();
            match words[..] {
                ["decide", name, value] => {
                    let value = match value {
                        "true" => true,
                        "false" => false,
                        other => return Err(err(format!("expected true or false, got '{other}'"))),
                    };
                    s.decide_named(name, value).map_err(|e| err(e.to_string()))?;
                }
                ["auto", ref items @ ..] if !items.is_empty() => {
                    let mut batch = Vec::new();
                    for item in items {
                        let (name, value) = match item.split_once('=') {
                            Some((n, "0")) => (n, false),
                            Some((n, "1")) => (n, true),
                            _ => return Err(err(format!("expected <var>=0 or <var>=1, got '{item}'"))),
                        };
                        batch.push((s.lookup(name).map_err(|e| err(e.to_string()))?, value));
                    }
                    s.apply_auto(&batch).map_err(|e| err(e.to_string()))?;
                }
                ["shopping"] => {
                    s.shopping = true;
                    s.refresh_highlight();
                }
                _ => return Err(err(format!("cannot read '{text}'"))),
            }
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature_model::parse_model;
    use crate::logic::{count_models, parse_expr, to_cnf, VarTable};

    const SAMPLE: &str = "\
feature x
  feature y mandatory
    xor
      feature a
      feature b
  feature c optional
  feature d optional
";

    fn formula(names: &[&str], src: &str) -> ClauseSet {
        let t = VarTable::from_names(names.iter().copied()).unwrap();
        to_cnf(&parse_expr(src, |n| t.lookup(n)).unwrap(), &t)
    }

    fn sample() -> Session {
        Session::new(parse_model(SAMPLE).unwrap().to_clauses()).unwrap()
    }

    fn status(s: &Session, name: &str) -> VarStatus {
        s.status(s.lookup(name).unwrap())
    }

    fn names(s: &Session, vs: &[Var]) -> Vec<String> {
        vs.iter().map(|&v| s.name(v).to_owned()).collect()
    }

    #[test]
    fn root_and_mandatory_child_inferred_at_start() {
        let s = sample();
        assert_eq!(status(&s, "x"), VarStatus::InferredTrue);
        assert_eq!(status(&s, "y"), VarStatus::InferredTrue);
        assert!(s.decisions().iter().all(|d| d.step == 0));
        for n in ["a", "b", "c", "d"] {
            assert_eq!(status(&s, n), VarStatus::Unassigned);
        }
        assert!(!s.is_complete());
    }

    #[test]
    fn unsat_model_rejected() {
        let cs = formula(&["x"], "x & !x");
        assert_eq!(Session::new(cs).unwrap_err(), SessionError::UnsatModel);
    }

    #[test]
    fn manual_trace() {
        let mut s = Session::new(formula(&["u", "v", "x", "y"], "(!u | !v) & (x -> y)")).unwrap();
        assert!(s.decisions().is_empty());
        s.decide_named("u", true).unwrap();
        assert_eq!(status(&s, "v"), VarStatus::InferredFalse);
        s.decide_named("y", false).unwrap();
        assert_eq!(status(&s, "x"), VarStatus::InferredFalse);
        assert!(s.is_complete());
        let steps: Vec<usize> = s.decisions().iter().map(|d| d.step).collect();
        assert_eq!(steps, [1, 1, 2, 2]);
    }

    #[test]
    fn deciding_a_deselects_b() {
        let mut s = sample();
        s.decide_named("a", true).unwrap();
        assert_eq!(status(&s, "b"), VarStatus::InferredFalse);
    }

    #[test]
    fn rejected_decisions() {
        let mut s = sample();
        s.decide_named("a", true).unwrap();
        assert_eq!(
            s.decide_named("a", false),
            Err(SessionError::AlreadyAssigned("a".into()))
        );
        assert_eq!(
            s.decide_named("b", true),
            Err(SessionError::AlreadyAssigned("b".into()))
        );
        assert_eq!(
            s.decide_named("zz", true),
            Err(SessionError::UnknownVar("zz".into()))
        );
    }

    #[test]
    fn inconsistent_decision_is_not_applied() {
        // Inference leaves both values open for every unassigned var, so
        // this is only reachable with a log that skipped inference.
        let mut t = Session::new(formula(&["x", "y"], "x | y")).unwrap();
        t.slot[0] = None;
        t.decisions.clear();
        t.decisions.push(Decision {
            var: Var::new(0),
            value: false,
            origin: Origin::User,
            step: 1,
        });
        t.slot[0] = Some(0);
        assert_eq!(
            t.decide(Var::new(1), false),
            Err(SessionError::InconsistentDecision("y".into(), false))
        );
        assert_eq!(t.decisions().len(), 1);
    }

    #[test]
    fn retraction() {
        let mut s = Session::new(formula(&["u", "v", "x", "y"], "(!u | !v) & (x -> y)")).unwrap();
        s.decide_named("u", true).unwrap();
        assert_eq!(
            s.retract_named("v"),
            Err(SessionError::NotAUserDecision("v".into()))
        );
        assert!(s.retract_named("u").unwrap().is_empty());
        assert!(s.decisions().is_empty());
        assert_eq!(status(&s, "v"), VarStatus::Unassigned);

        let mut s = sample();
        s.decide_named("a", true).unwrap();
        s.decide_named("c", true).unwrap();
        s.retract_named("a").unwrap();
        assert_eq!(status(&s, "a"), VarStatus::Unassigned);
        assert_eq!(status(&s, "b"), VarStatus::Unassigned);
        assert_eq!(status(&s, "c"), VarStatus::UserTrue);
        assert_eq!(s.to_script(), "decide c true\n");
        assert_eq!(s.decision(s.lookup("c").unwrap()).unwrap().step, 2);
    }

    #[test]
    fn retraction_clears_auto_decisions() {
        let mut s = Session::new(formula(&["u", "v", "x", "y"], "(u | v) & (x -> y)")).unwrap();
        s.decide_named("u", true).unwrap();
        s.shopping_principle();
        assert_eq!(status(&s, "v"), VarStatus::AutoFalse);
        s.retract_named("u").unwrap();
        assert!(s.decisions().is_empty());
        assert_eq!(names(&s, s.highlight()), ["u", "v"]);
    }

    #[test]
    fn shopping_principle_trace() {
        let mut s = Session::new(formula(&["u", "v", "x", "y"], "(u | v) & (x -> y)")).unwrap();
        assert!(s.highlight().is_empty());
        let off = s.shopping_principle();
        assert_eq!(names(&s, &off), ["x", "y"]);
        assert_eq!(status(&s, "x"), VarStatus::AutoFalse);
        assert_eq!(status(&s, "y"), VarStatus::AutoFalse);
        assert_eq!(names(&s, s.highlight()), ["u", "v"]);

        let snapshot = s.decisions().to_vec();
        assert!(s.shopping_principle().is_empty());
        assert_eq!(s.decisions(), &snapshot[..]);

        s.decide_named("u", true).unwrap();
        assert_eq!(names(&s, s.highlight()), Vec::<String>::new());
        s.shopping_principle();
        assert_eq!(status(&s, "v"), VarStatus::AutoFalse);
        assert!(s.is_complete());
    }

    #[test]
    fn shopping_on_sample_after_a_and_c() {
        let mut s = sample();
        s.decide_named("a", true).unwrap();
        s.decide_named("c", true).unwrap();
        let off = s.shopping_principle();
        assert_eq!(names(&s, &off), ["d"]);
        assert!(s.is_complete());
        let on: Vec<&str> = s
            .vars()
            .into_iter()
            .filter(|&v| s.value(v) == Some(true))
            .map(|v| s.name(v))
            .collect();
        assert_eq!(on, ["x", "y", "a", "c"]);
    }

    #[test]
    fn blind_completion_follows_solver() {
        let mut s = Session::new(formula(&["u", "v"], "u | v")).unwrap();
        s.complete_blind();
        assert!(s.is_complete());
        // Lowest variable first, false first: u=false forces v=true.
        assert_eq!(status(&s, "u"), VarStatus::AutoFalse);
        assert_eq!(status(&s, "v"), VarStatus::AutoTrue);
        let before = s.decisions().to_vec();
        assert!(s.complete_blind().is_empty());
        assert_eq!(s.decisions(), &before[..]);
    }

    #[test]
    fn completion_leaves_one_model() {
        let mut s = sample();
        s.complete_blind();
        assert!(s.is_complete());
        let mut cs = s.base().clone();
        for l in s.assumptions() {
            cs.add_clause(&[l]);
        }
        assert_eq!(count_models(&cs, 10), Some(1));
    }

    #[test]
    fn selectable_flags() {
        let mut s = sample();
        let x = s.lookup("x").unwrap();
        let a = s.lookup("a").unwrap();
        assert_eq!(s.selectable(x), (false, false));
        assert_eq!(s.selectable(a), (true, true));
    }

    #[test]
    fn script_round_trip() {
        let mut s = sample();
        s.decide_named("b", true).unwrap();
        s.decide_named("d", false).unwrap();
        let script = s.to_script();
        assert_eq!(script, "decide b true\ndecide d false\n");
        let t = Session::replay(s.base().clone(), &format!("# replay\n{script}\n")).unwrap();
        assert_eq!(t.decisions(), s.decisions());

        let err = Session::replay(s.base().clone(), "decide b maybe\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = Session::replay(s.base().clone(), "\nundo b\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = Session::replay(s.base().clone(), "auto c=1 c=0\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn script_keeps_automatic_decisions() {
        let mut s = Session::new(formula(&["u", "v", "x", "y"], "(u | v) & (x -> y)")).unwrap();
        s.shopping_principle();
        s.decide_named("u", true).unwrap();
        s.shopping_principle();
        let script = s.to_script();
        assert_eq!(script, "auto x=0 y=0\ndecide u true\nauto v=0\nshopping\n");
        let t = Session::replay(s.base().clone(), &script).unwrap();
        assert_eq!(t.decisions(), s.decisions());
        assert!(t.is_complete());

        let mut s = Session::new(formula(&["u", "v", "x", "y"], "(u | v) & (x -> y)")).unwrap();
        s.shopping_principle();
        let t = Session::replay(s.base().clone(), &s.to_script()).unwrap();
        assert_eq!(t.highlight(), s.highlight());
        assert_eq!(t.decisions(), s.decisions());
        s.complete_blind();
        assert_eq!(s.to_script(), "auto x=0 y=0\nauto u=0 v=1\nshopping\n");
        let t = Session::replay(s.base().clone(), &s.to_script()).unwrap();
        assert_eq!(t.decisions(), s.decisions());
    }
}
