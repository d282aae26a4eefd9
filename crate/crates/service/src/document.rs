use serde::{Deserialize, Serialize};

use confik_core::feature_model::{Child, EdgeKind, FeatureId, FeatureModel, GroupKind};
use confik_core::{Session, VarStatus};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableState {
    pub name: String,
    pub status: VarStatus,
    pub highlighted: bool,
    pub selectable_true: bool,
    pub selectable_false: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Root,
    Mandatory,
    Optional,
    Member,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupNode {
    /// `xor` or `or`.
    pub kind: String,
    pub members: Vec<TreeNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub name: String,
    pub parent: Option<String>,
    pub kind: NodeKind,
    /// Children that are not group members, in source order.
    pub children: Vec<TreeNode>,
    pub groups: Vec<GroupNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionDocument {
    pub id: String,
    pub model_name: String,
    pub variables: Vec<VariableState>,
    pub complete: bool,
    pub tree: TreeNode,
}

fn node(fm: &FeatureModel, id: FeatureId) -> TreeNode {
    let f = fm.feature(id);
    let kind = match f.parent {
        None => NodeKind::Root,
        Some((_, EdgeKind::Mandatory)) => NodeKind::Mandatory,
        Some((_, EdgeKind::Optional)) => NodeKind::Optional,
        Some((_, EdgeKind::Member(_))) => NodeKind::Member,
    };
    let mut children = Vec::new();
    let mut groups = Vec::new();
    for c in &f.children {
        match *c {
            Child::Feature(child) => children.push(node(fm, child)),
            Child::Group(g) => {
                let group = fm.group(g);
                groups.push(GroupNode {
                    kind: match group.kind {
                        GroupKind::Xor => "xor",
                        GroupKind::Or => "or",
                    }
                    .to_owned(),
                    members: group.members.iter().map(|&m| node(fm, m)).collect(),
                });
            }
        }
    }
    TreeNode {
        name: f.name.clone(),
        parent: f.parent.map(|(p, _)| fm.feature(p).name.clone()),
        kind,
        children,
        groups,
    }
}

pub fn tree(fm: &FeatureModel) -> TreeNode {
    node(fm, fm.root())
}

/// Renders the session state. Takes the session mutably because the
/// selectable flags are SAT queries.
pub fn render(id: &str, model_name: &str, fm: &FeatureModel, session: &mut Session) -> SessionDocument {
    let variables = session
        .vars()
        .into_iter()
        .map(|v| {
            let (selectable_true, selectable_false) = session.selectable(v);
            VariableState {
                name: session.name(v).to_owned(),
                status: session.status(v),
                highlighted: session.is_highlighted(v),
                selectable_true,
                selectable_false,
            }
        })
        .collect();
    SessionDocument {
        id: id.to_owned(),
        model_name: model_name.to_owned(),
        variables,
        complete: session.is_complete(),
        tree: tree(fm),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use confik_core::feature_model::parse_model;

    #[test]
    fn tree_follows_source_order() {
        let fm = parse_model("feature r\n  feature m mandatory\n  or\n    feature p\n    feature q\n  feature o\n").unwrap();
        let t = tree(&fm);
        assert_eq!(t.kind, NodeKind::Root);
        let kids: Vec<(&str, NodeKind)> = t.children.iter().map(|c| (c.name.as_str(), c.kind)).collect();
        assert_eq!(kids, [("m", NodeKind::Mandatory), ("o", NodeKind::Optional)]);
        assert_eq!(t.groups.len(), 1);
        assert_eq!(t.groups[0].kind, "or");
        assert_eq!(t.groups[0].members[1].parent.as_deref(), Some("r"));
    }

    #[test]
    fn statuses_serialize_in_snake_case() {
        let fm = parse_model("feature r\n  feature a\n").unwrap();
        let mut s = Session::new(fm.to_clauses()).unwrap();
        let doc = render("id", "m", &fm, &mut s);
        let json = serde_json::to_value(&doc).unwrap();
        assert_eq!(json["variables"][0]["status"], "inferred_true");
        assert_eq!(json["variables"][1]["status"], "unassigned");
        assert_eq!(json["variables"][1]["selectable_true"], true);
    }
}
