use super::cnf::ClauseSet;
use super::var::{Assignment, Lit, Var};
use super::LogicError;

const UNASSIGNED: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;
const LEARNED: u32 = 1 << 31;

/// Outcome of a satisfiability call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    Sat(Assignment),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn model(&self) -> Option<&Assignment> {
        match self {
            SatResult::Sat(m) => Some(m),
            SatResult::Unsat => None,
        }
    }
}

/// Conflict-driven solver with two-watched-literal propagation.
///
/// Decisions follow a fixed rule: the assumptions first, one per level,
/// then always the lowest unassigned variable id set to `false`. Under that
/// rule the search returns the lexicographically smallest model (variable
/// 0 most significant, `false < true`) among those satisfying the
/// assumptions, the same model a chronological backtracking search would
/// find; clause learning only prunes subtrees without models.
///
/// Learned clauses are implied by the clause database alone, so they are
/// kept across calls and across added clauses. Clauses may be added and
/// the most recently added one removed between calls; removal forgets
/// everything learned.
#[derive(Clone, Debug)]
pub struct Solver {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    /// Referenced with the [`LEARNED`] bit set.
    learned: Vec<Vec<Lit>>,
    /// Clause references watching each literal code. A clause watches its
    /// first two literals.
    watches: Vec<Vec<u32>>,
    units: Vec<u32>,
    learned_units: Vec<Lit>,
    empty: usize,
    assign: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    seen: Vec<bool>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    /// Chronological enumeration only: whether each level was flipped.
    flipped: Vec<bool>,
    qhead: usize,
}

enum Step {
    Model,
    Unsat,
}

impl Solver {
    pub fn new(cs: &ClauseSet) -> Solver {
        let mut s = Solver::with_vars(cs.num_vars());
        for c in cs.clauses() {
            s.add_clause(c);
        }
        s
    }

    pub fn with_vars(num_vars: usize) -> Solver {
        Solver {
            num_vars,
            clauses: Vec::new(),
            learned: Vec::new(),
            watches: vec![Vec::new(); 2 * num_vars],
            units: Vec::new(),
            learned_units: Vec::new(),
            empty: 0,
            assign: vec![UNASSIGNED; num_vars],
            level: vec![0; num_vars],
            reason: vec![None; num_vars],
            seen: vec![false; num_vars],
            trail: Vec::with_capacity(num_vars),
            trail_lim: Vec::new(),
            flipped: Vec::new(),
            qhead: 0,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Number of added (not learned) clauses.
    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn num_learned(&self) -> usize {
        self.learned.len() + self.learned_units.len()
    }

    fn forget_learned(&mut self) {
        if self.learned.is_empty() && self.learned_units.is_empty() {
            return;
        }
        self.learned.clear();
        self.learned_units.clear();
        for ws in &mut self.watches {
            ws.retain(|&c| c & LEARNED == 0);
        }
    }

    pub fn add_clause(&mut self, lits: &[Lit]) {
        let mut clause = lits.to_vec();
        clause.sort();
        clause.dedup();
        debug_assert!(clause.iter().all(|l| l.var().index() < self.num_vars));
        let idx = self.clauses.len() as u32;
        match clause.len() {
            0 => self.empty += 1,
            1 => self.units.push(idx),
            _ => {
                self.watches[clause[0].code()].push(idx);
                self.watches[clause[1].code()].push(idx);
            }
        }
        self.clauses.push(clause);
    }

    /// Removes the most recently added clause.
    pub fn pop_clause(&mut self) {
        self.forget_learned();
        let Some(clause) = self.clauses.pop() else {
            return;
        };
        let idx = self.clauses.len() as u32;
        match clause.len() {
            0 => self.empty -= 1,
            1 => {
                let popped = self.units.pop();
                debug_assert_eq!(popped, Some(idx));
            }
            _ => {
                for l in &clause[..2] {
                    let ws = &mut self.watches[l.code()];
                    let pos = ws.iter().rposition(|&c| c == idx).expect("watch missing");
                    ws.swap_remove(pos);
                }
            }
        }
    }

    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.assign[l.var().index()];
        if l.is_positive() {
            v
        } else {
            -v
        }
    }

    fn enqueue(&mut self, l: Lit, reason: Option<u32>) {
        let v = l.var().index();
        self.assign[v] = if l.is_positive() { TRUE } else { FALSE };
        self.level[v] = self.trail_lim.len() as u32;
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn new_level(&mut self) {
        self.trail_lim.push(self.trail.len());
    }

    fn cancel_until(&mut self, level: usize, next_var: &mut usize) {
        if self.trail_lim.len() <= level {
            return;
        }
        let start = self.trail_lim[level];
        for l in self.trail.drain(start..) {
            let v = l.var().index();
            self.assign[v] = UNASSIGNED;
            self.reason[v] = None;
            *next_var = (*next_var).min(v);
        }
        self.trail_lim.truncate(level);
        self.qhead = start;
    }

    fn reset(&mut self) {
        let mut ignored = 0;
        self.cancel_until(0, &mut ignored);
        for l in self.trail.drain(..) {
            let v = l.var().index();
            self.assign[v] = UNASSIGNED;
            self.reason[v] = None;
        }
        self.flipped.clear();
        self.qhead = 0;
    }

    /// Returns the conflicting clause, if any.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let mut i = 0;
            let mut j = 0;
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                let clause = if ci & LEARNED != 0 {
                    &mut self.learned[(ci & !LEARNED) as usize]
                } else {
                    &mut self.clauses[ci as usize]
                };
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                let first_val = {
                    let v = self.assign[first.var().index()];
                    if first.is_positive() {
                        v
                    } else {
                        -v
                    }
                };
                if first_val == TRUE {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    let v = self.assign[l.var().index()];
                    let lv = if l.is_positive() { v } else { -v };
                    if lv != FALSE {
                        clause.swap(1, k);
                        self.watches[clause[1].code()].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                if first_val == FALSE {
                    conflict = Some(ci);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                } else {
                    self.enqueue(first, Some(ci));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    /// Level 0: unit clauses, original and learned. Returns `false` if the
    /// database alone is contradictory.
    fn start(&mut self) -> bool {
        self.reset();
        if self.empty > 0 {
            return false;
        }
        for i in 0..self.units.len() {
            let l = self.clauses[self.units[i] as usize][0];
            match self.lit_value(l) {
                FALSE => return false,
                UNASSIGNED => self.enqueue(l, None),
                _ => {}
            }
        }
        for i in 0..self.learned_units.len() {
            let l = self.learned_units[i];
            match self.lit_value(l) {
                FALSE => return false,
                UNASSIGNED => self.enqueue(l, None),
                _ => {}
            }
        }
        self.propagate().is_none()
    }

    /// First-UIP conflict analysis. Returns the learned clause, asserting
    /// literal first and a literal of the backjump level second, and the
    /// backjump level.
    fn analyze(&mut self, conflict: u32) -> (Vec<Lit>, usize) {
        let current = self.trail_lim.len() as u32;
        let mut learned = vec![Lit::new(Var::new(0), false)];
        let mut pending = 0;
        let mut idx = self.trail.len();
        let mut clause = conflict;
        let mut skip_first = false;
        let uip = loop {
            let lits = if clause & LEARNED != 0 {
                &self.learned[(clause & !LEARNED) as usize]
            } else {
                &self.clauses[clause as usize]
            };
            for &q in &lits[usize::from(skip_first)..] {
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    if self.level[v] == current {
                        pending += 1;
                    } else {
                        learned.push(q);
                    }
                }
            }
            let p = loop {
                idx -= 1;
                let p = self.trail[idx];
                if self.seen[p.var().index()] {
                    break p;
                }
            };
            self.seen[p.var().index()] = false;
            pending -= 1;
            if pending == 0 {
                break p;
            }
            clause = self.reason[p.var().index()].expect("implied literal has a reason");
            skip_first = true;
        };
        learned[0] = !uip;
        for l in &learned[1..] {
            self.seen[l.var().index()] = false;
        }
        let mut back = 0;
        if learned.len() > 1 {
            let mut best = 1;
            for k in 2..learned.len() {
                if self.level[learned[k].var().index()] > self.level[learned[best].var().index()] {
                    best = k;
                }
            }
            learned.swap(1, best);
            back = self.level[learned[1].var().index()] as usize;
        }
        (learned, back)
    }

    fn learn(&mut self, learned: Vec<Lit>) {
        let asserting = learned[0];
        if learned.len() == 1 {
            self.learned_units.push(asserting);
            self.enqueue(asserting, None);
            return;
        }
        let idx = self.learned.len() as u32 | LEARNED;
        self.watches[learned[0].code()].push(idx);
        self.watches[learned[1].code()].push(idx);
        self.learned.push(learned);
        self.enqueue(asserting, Some(idx));
    }

    /// Solves under the given assumptions; returns the lexicographically
    /// smallest model.
    pub fn solve(&mut self, assumptions: &[Lit]) -> Option<Vec<bool>> {
        let result = self.search_lexmin(assumptions);
        self.reset();
        result
    }

    fn search_lexmin(&mut self, assumptions: &[Lit]) -> Option<Vec<bool>> {
        if !self.start() {
            return None;
        }
        let mut next_var = 0;
        loop {
            if let Some(conflict) = self.propagate() {
                if self.trail_lim.is_empty() {
                    return None;
                }
                let (learned, back) = self.analyze(conflict);
                self.cancel_until(back, &mut next_var);
                self.learn(learned);
                continue;
            }
            let level = self.trail_lim.len();
            if level < assumptions.len() {
                let a = assumptions[level];
                match self.lit_value(a) {
                    FALSE => return None,
                    TRUE => self.new_level(),
                    _ => {
                        self.new_level();
                        self.enqueue(a, None);
                    }
                }
                continue;
            }
            while next_var < self.num_vars && self.assign[next_var] != UNASSIGNED {
                next_var += 1;
            }
            if next_var == self.num_vars {
                return Some(self.model());
            }
            self.new_level();
            self.enqueue(Var::new(next_var).neg(), None);
        }
    }

    pub fn is_sat(&mut self, assumptions: &[Lit]) -> bool {
        self.solve(assumptions).is_some()
    }

    fn model(&self) -> Vec<bool> {
        self.assign.iter().map(|&v| v == TRUE).collect()
    }

    /// Undoes decision levels until one can be flipped, then flips it.
    /// Returns `false` when the search space is exhausted.
    fn backtrack_chrono(&mut self, next_var: &mut usize) -> bool {
        while let Some(&start) = self.trail_lim.last() {
            let was_flipped = self.flipped.pop().unwrap();
            let decision = self.trail[start];
            self.cancel_until(self.trail_lim.len() - 1, next_var);
            if !was_flipped {
                self.new_level();
                self.flipped.push(true);
                self.enqueue(!decision, None);
                return true;
            }
        }
        false
    }

    /// Chronological search from the current state until a full model or
    /// exhaustion.
    fn search_chrono(&mut self, next_var: &mut usize) -> Step {
        loop {
            while *next_var < self.num_vars && self.assign[*next_var] != UNASSIGNED {
                *next_var += 1;
            }
            if *next_var == self.num_vars {
                return Step::Model;
            }
            self.new_level();
            self.flipped.push(false);
            self.enqueue(Var::new(*next_var).neg(), None);
            while self.propagate().is_some() {
                if !self.backtrack_chrono(next_var) {
                    return Step::Unsat;
                }
            }
        }
    }

    /// Counts total models under the assumptions, giving up (and returning
    /// `None`) once the count exceeds `limit`.
    pub fn count_models(&mut self, assumptions: &[Lit], limit: u64) -> Option<u64> {
        let result = self.count_chrono(assumptions, limit);
        self.reset();
        result
    }

    fn count_chrono(&mut self, assumptions: &[Lit], limit: u64) -> Option<u64> {
        if !self.start() {
            return Some(0);
        }
        for &a in assumptions {
            match self.lit_value(a) {
                FALSE => return Some(0),
                UNASSIGNED => self.enqueue(a, None),
                _ => {}
            }
        }
        if self.propagate().is_some() {
            return Some(0);
        }
        let mut count = 0u64;
        let mut next_var = 0;
        loop {
            match self.search_chrono(&mut next_var) {
                Step::Unsat => return Some(count),
                Step::Model => {
                    count += 1;
                    if count > limit {
                        return None;
                    }
                    if !self.backtrack_chrono(&mut next_var) {
                        return Some(count);
                    }
                    // The flipped literal may conflict immediately.
                    while self.propagate().is_some() {
                        if !self.backtrack_chrono(&mut next_var) {
                            return Some(count);
                        }
                    }
                }
            }
        }
    }
}

/// Solves `cs` under `assumptions`.
pub fn solve(cs: &ClauseSet, assumptions: &[Lit]) -> SatResult {
    match Solver::new(cs).solve(assumptions) {
        Some(m) => SatResult::Sat(Assignment::from_bools(&m)),
        None => SatResult::Unsat,
    }
}

/// `cs ⊨ lit`, i.e. `cs ∧ ¬lit` is unsatisfiable.
pub fn entails(cs: &ClauseSet, lit: Lit) -> Result<bool, LogicError> {
    let mut s = Solver::new(cs);
    if !s.is_sat(&[]) {
        return Err(LogicError::UnsatContext);
    }
    Ok(!s.is_sat(&[!lit]))
}

/// Number of models of `cs`, or `None` if it exceeds `limit`.
pub fn count_models(cs: &ClauseSet, limit: u64) -> Option<u64> {
    Solver::new(cs).count_models(&[], limit)
}

/// Literals over `candidates` entailed by the solver's clauses together
/// with `assumptions`, in candidate order.
///
/// Each model found along the way rules out every candidate whose value
/// differs from the first model, so only plausible backbone members cost a
/// dedicated refutation call.
pub fn backbone(
    solver: &mut Solver,
    assumptions: &[Lit],
    candidates: &[Var],
) -> Result<Vec<Lit>, LogicError> {
    let first = solver.solve(assumptions).ok_or(LogicError::UnsatContext)?;
    let mut refuted = vec![false; solver.num_vars()];
    let mut forced = Vec::new();
    let mut query = assumptions.to_vec();
    for &v in candidates {
        if refuted[v.index()] {
            continue;
        }
        let lit = v.lit(first[v.index()]);
        query.push(!lit);
        match solver.solve(&query) {
            None => forced.push(lit),
            Some(other) => {
                for &c in candidates {
                    if other[c.index()] != first[c.index()] {
                        refuted[c.index()] = true;
                    }
                }
            }
        }
        query.pop();
    }
    Ok(forced)
}
