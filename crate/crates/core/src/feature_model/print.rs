use std::fmt::Write as _;

use super::{Child, EdgeKind, FeatureId, FeatureModel, GroupKind};

/// Renders a model in the text format accepted by
/// [`parse_model`](super::parse_model). Edge kinds are always spelled out.
pub fn print_model(fm: &FeatureModel) -> String {
    let mut out = String::new();
    write_feature(fm, fm.root(), 0, &mut out);
    for c in fm.constraints() {
        let _ = writeln!(out, "constraint {}", c.display(fm.vars()));
    }
    out
}

fn write_feature(fm: &FeatureModel, id: FeatureId, depth: usize, out: &mut String) {
    let f = fm.feature(id);
    let pad = "  ".repeat(depth);
    let suffix = match f.parent {
        Some((_, EdgeKind::Mandatory)) => " mandatory",
        Some((_, EdgeKind::Optional)) => " optional",
        _ => "",
    };
    let _ = writeln!(out, "{pad}feature {}{suffix}", f.name);
    for child in &f.children {
        match *child {
            Child::Feature(c) => write_feature(fm, c, depth + 1, out),
            Child::Group(g) => {
                let group = fm.group(g);
                let kw = match group.kind {
                    GroupKind::Xor => "xor",
                    GroupKind::Or => "or",
                };
                let _ = writeln!(out, "{pad}  {kw}");
                for &m in &group.members {
                    write_feature(fm, m, depth + 2, out);
                }
            }
        }
    }
}
