//! Random feature models for the simulation experiments.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::feature_model::{FeatureId, FeatureModel, GroupKind, ModelBuilder};
use crate::logic::{Expr, Solver};

#[derive(Clone, Debug, PartialEq)]
pub struct SynthParams {
    /// Total number of features including the root.
    pub features: usize,
    /// Chance that a plain child is mandatory.
    pub mandatory: f64,
    /// Chance that an expansion step adds a group instead of one child.
    pub group: f64,
    /// Share of `or` groups among groups; the rest are `xor`.
    pub or_share: f64,
    /// Largest group size.
    pub max_group: usize,
    /// Cross-tree constraints, each a requires or excludes edge.
    pub constraints: usize,
}

impl SynthParams {
    pub fn new(features: usize) -> SynthParams {
        SynthParams {
            features,
            mandatory: 0.2,
            group: 0.12,
            or_share: 0.4,
            max_group: 4,
            constraints: features / 25,
        }
    }
}

fn ancestors(fm: &FeatureModel, mut f: FeatureId) -> Vec<FeatureId> {
    let mut out = vec![f];
    while let Some((p, _)) = fm.feature(f).parent {
        out.push(p);
        f = p;
    }
    out
}

/// A random satisfiable model named `f0` (root), `f1`, ... Parents are
/// drawn uniformly among existing features. Constraints connect features
/// that are not in an ancestor relation; candidate constraints that would
/// make the model unsatisfiable are redrawn.
pub fn generate_model(params: &SynthParams, rng: &mut impl Rng) -> FeatureModel {
    assert!(params.features >= 1, "a model needs a root");
    let mut b = ModelBuilder::new("f0");
    let mut ids = vec![FeatureId(0)];
    let mut next = 1;
    let name = |i: usize| format!("f{i}");
    while next < params.features {
        let parent = *ids.choose(rng).expect("the root exists");
        let left = params.features - next;
        if left >= 2 && rng.random_bool(params.group) {
            let size = rng.random_range(2..=params.max_group.min(left));
            let kind = if rng.random_bool(params.or_share) {
                GroupKind::Or
            } else {
                GroupKind::Xor
            };
            let g = b.group(parent, kind);
            for _ in 0..size {
                ids.push(b.member(g, &name(next)).expect("names are fresh"));
                next += 1;
            }
        } else {
            let mandatory = rng.random_bool(params.mandatory);
            ids.push(b.child(parent, &name(next), mandatory).expect("names are fresh"));
            next += 1;
        }
    }
    if params.features > 2 {
        let mut added = 0;
        let mut attempts = 0;
        while added < params.constraints && attempts < 100 * params.constraints.max(1) {
            attempts += 1;
            let a = FeatureId(rng.random_range(1..params.features));
            let c = FeatureId(rng.random_range(1..params.features));
            if ancestors(b.model(), a).contains(&c) || ancestors(b.model(), c).contains(&a) {
                continue;
            }
            let requires = rng.random_bool(0.5);
            let target = if requires {
                Expr::Var(c.var())
            } else {
                Expr::Not(Box::new(Expr::Var(c.var())))
            };
            let mut trial = b.model().to_clauses();
            trial.add_clause(&[a.var().neg(), c.var().lit(requires)]);
            if Solver::new(&trial).is_sat(&[]) {
                b.constraint(Expr::Implies(Box::new(Expr::Var(a.var())), Box::new(target)));
                added += 1;
            }
        }
    }
    b.finish().expect("groups have at least two members")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::run_rng;

    #[test]
    fn sizes_and_determinism() {
        for n in [1, 2, 20, 57, 100] {
            let p = SynthParams::new(n);
            let a = generate_model(&p, &mut run_rng(5, n as u64));
            let b = generate_model(&p, &mut run_rng(5, n as u64));
            assert_eq!(a, b);
            assert_eq!(a.len(), n);
            assert!(Solver::new(&a.to_clauses()).is_sat(&[]));
        }
    }

    #[test]
    fn constraints_are_added() {
        let p = SynthParams::new(100);
        let fm = generate_model(&p, &mut run_rng(1, 0));
        assert_eq!(fm.constraints().len(), 4);
    }
}
