//! FODA-style feature models: the model text format, validation, printing
//! and translation to propositional constraints.
//!
//! Every feature is also a propositional variable; feature ids and variable
//! ids coincide, so `FeatureId(i)` is `Var::new(i)` in [`FeatureModel::vars`].

mod parse;
mod print;
mod translate;

pub use parse::{parse_model, ModelError};
pub use print::print_model;
pub use translate::{translate, translate_conjuncts};

use crate::logic::{to_cnf, ClauseSet, Expr, Var, VarTable};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FeatureId(pub usize);

impl FeatureId {
    pub fn var(self) -> Var {
        Var::new(self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupId(pub usize);

/// How a non-root feature hangs off its parent.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeKind {
    Mandatory,
    Optional,
    /// Member of a group; the group decides the semantics.
    Member(GroupId),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroupKind {
    /// Exactly one member when the parent is selected.
    Xor,
    /// At least one member when the parent is selected.
    Or,
}

/// Children of a feature in source order.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Child {
    Feature(FeatureId),
    Group(GroupId),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Feature {
    pub name: String,
    /// Parent feature and edge kind; `None` for the root.
    pub parent: Option<(FeatureId, EdgeKind)>,
    pub children: Vec<Child>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Group {
    pub kind: GroupKind,
    pub parent: FeatureId,
    pub members: Vec<FeatureId>,
}

/// A validated feature tree with cross-tree constraints.
///
/// The root is always feature 0. Features are numbered in declaration
/// order, which is a pre-order walk of the tree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FeatureModel {
    features: Vec<Feature>,
    groups: Vec<Group>,
    constraints: Vec<Expr>,
    vars: VarTable,
}

impl FeatureModel {
    pub fn root(&self) -> FeatureId {
        FeatureId(0)
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn feature(&self, id: FeatureId) -> &Feature {
        &self.features[id.0]
    }

    pub fn feature_ids(&self) -> impl Iterator<Item = FeatureId> {
        (0..self.features.len()).map(FeatureId)
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    pub fn group(&self, id: GroupId) -> &Group {
        &self.groups[id.0]
    }

    pub fn constraints(&self) -> &[Expr] {
        &self.constraints
    }

    /// Variable table whose ids coincide with feature ids.
    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn lookup(&self, name: &str) -> Option<FeatureId> {
        self.vars.lookup(name).map(|v| FeatureId(v.index()))
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Clausal form of the model semantics.
    pub fn to_clauses(&self) -> ClauseSet {
        to_cnf(&translate(self), &self.vars)
    }
}

/// Incremental construction used by the parser and by model generators.
/// [`ModelBuilder::finish`] checks the structural invariants.
#[derive(Debug)]
pub struct ModelBuilder {
    model: FeatureModel,
}

impl ModelBuilder {
    pub fn new(root: &str) -> ModelBuilder {
        let mut vars = VarTable::new();
        vars.intern(root);
        ModelBuilder {
            model: FeatureModel {
                features: vec![Feature {
                    name: root.to_owned(),
                    parent: None,
                    children: Vec::new(),
                }],
                groups: Vec::new(),
                constraints: Vec::new(),
                vars,
            },
        }
    }

    pub fn model(&self) -> &FeatureModel {
        &self.model
    }

    fn push_feature(&mut self, name: &str, parent: (FeatureId, EdgeKind)) -> Option<FeatureId> {
        if self.model.vars.lookup(name).is_some() {
            return None;
        }
        let id = FeatureId(self.model.features.len());
        self.model.vars.intern(name);
        self.model.features.push(Feature {
            name: name.to_owned(),
            parent: Some(parent),
            children: Vec::new(),
        });
        Some(id)
    }

    /// Adds a mandatory or optional child. Returns `None` on a duplicate
    /// name.
    pub fn child(&mut self, parent: FeatureId, name: &str, mandatory: bool) -> Option<FeatureId> {
        let kind = if mandatory {
            EdgeKind::Mandatory
        } else {
            EdgeKind::Optional
        };
        let id = self.push_feature(name, (parent, kind))?;
        self.model.features[parent.0].children.push(Child::Feature(id));
        Some(id)
    }

    pub fn group(&mut self, parent: FeatureId, kind: GroupKind) -> GroupId {
        let id = GroupId(self.model.groups.len());
        self.model.groups.push(Group {
            kind,
            parent,
            members: Vec::new(),
        });
        self.model.features[parent.0].children.push(Child::Group(id));
        id
    }

    pub fn member(&mut self, group: GroupId, name: &str) -> Option<FeatureId> {
        let parent = self.model.groups[group.0].parent;
        let id = self.push_feature(name, (parent, EdgeKind::Member(group)))?;
        self.model.groups[group.0].members.push(id);
        Some(id)
    }

    pub fn constraint(&mut self, e: Expr) {
        self.model.constraints.push(e);
    }

    /// Returns the first group with fewer than two members, if any.
    pub fn degenerate_group(&self) -> Option<GroupId> {
        self.model
            .groups
            .iter()
            .position(|g| g.members.len() < 2)
            .map(GroupId)
    }

    /// Finishes the model, failing with the offending group if one has
    /// fewer than two members.
    pub fn finish(self) -> Result<FeatureModel, GroupId> {
        match self.degenerate_group() {
            Some(g) => Err(g),
            None => Ok(self.model),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_rejects_duplicates_and_small_groups() {
        let mut b = ModelBuilder::new("r");
        let r = FeatureId(0);
        assert!(b.child(r, "a", true).is_some());
        assert!(b.child(r, "a", false).is_none());
        let g = b.group(r, GroupKind::Xor);
        b.member(g, "m1").unwrap();
        assert_eq!(b.degenerate_group(), Some(g));
        b.member(g, "m2").unwrap();
        let fm = b.finish().unwrap();
        assert_eq!(fm.len(), 4);
        assert_eq!(fm.lookup("m2"), Some(FeatureId(3)));
        assert_eq!(
            fm.feature(FeatureId(3)).parent,
            Some((r, EdgeKind::Member(g)))
        );
    }
}
