use thiserror::Error;

use super::{FeatureId, FeatureModel, GroupId, GroupKind, ModelBuilder};
use crate::logic::parse_expr;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("semantic error at {line}:{column}: {message}")]
    Semantic {
        line: usize,
        column: usize,
        message: String,
    },
}

#[derive(Clone, Copy)]
enum Frame {
    Feature(FeatureId),
    Group(GroupId),
}

fn syntax<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ModelError> {
    Err(ModelError::Syntax {
        line,
        column,
        message: message.into(),
    })
}

fn semantic<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ModelError> {
    Err(ModelError::Semantic {
        line,
        column,
        message: message.into(),
    })
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name != "true"
        && name != "false"
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '.')
}

/// Parses the indentation-based model format:
///
/// ```text
/// feature x
///   feature y mandatory
///     xor
///       feature a
///       feature b
///   feature c optional
/// constraint a -> !c
/// ```
///
/// Two spaces per level; `#` starts a comment. The first `feature` line is
/// the root. `xor`/`or` lines open a group whose members are the next-deeper
/// `feature` lines. Non-group children default to optional. `constraint`
/// lines come after the tree and may use any feature name.
pub fn parse_model(text: &str) -> Result<FeatureModel, ModelError> {
    let mut builder: Option<ModelBuilder> = None;
    let mut stack: Vec<Frame> = Vec::new();
    let mut group_lines: Vec<(usize, usize)> = Vec::new();
    // (line, column of the expression, expression text)
    let mut constraints: Vec<(usize, usize, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim_end();
        if content.trim().is_empty() {
            continue;
        }
        let indent_str: String = content.chars().take_while(|c| c.is_whitespace()).collect();
        if indent_str.contains('\t') {
            return syntax(line, 1, "tabs are not allowed in indentation");
        }
        let indent = indent_str.chars().count();
        let column = indent + 1;
        if indent % 2 != 0 {
            return syntax(line, column, "indentation must be a multiple of two spaces");
        }
        let depth = indent / 2;
        let body = &content[indent_str.len()..];
        let mut words = body.split_whitespace();
        let keyword = words.next().unwrap_or_default();

        if keyword == "constraint" {
            if depth != 0 {
                return syntax(line, column, "constraints must not be indented");
            }
            if builder.is_none() {
                return syntax(line, column, "constraint before the root feature");
            }
            let expr_text = body["constraint".len()..].trim_start();
            if expr_text.is_empty() {
                return syntax(line, column, "empty constraint");
            }
            let expr_column = column + body.len() - expr_text.len();
            constraints.push((line, expr_column, expr_text.to_owned()));
            continue;
        }
        if !constraints.is_empty() {
            return syntax(line, column, "tree lines must precede constraint lines");
        }

        match keyword {
            "feature" => {
                let Some(name) = words.next() else {
                    return syntax(line, column, "missing feature name");
                };
                if !valid_name(name) {
                    return syntax(line, column, format!("invalid feature name '{name}'"));
                }
                let suffix = words.next();
                if let Some(extra) = words.next() {
                    return syntax(line, column, format!("unexpected '{extra}'"));
                }
                let mandatory = match suffix {
                    None | Some("optional") => false,
                    Some("mandatory") => true,
                    Some(other) => {
                        return syntax(line, column, format!("unknown edge kind '{other}'"));
                    }
                };
                if depth == 0 {
                    if builder.is_some() {
                        return syntax(line, column, "only one root feature is allowed");
                    }
                    if suffix.is_some() {
                        return syntax(line, column, "the root feature takes no edge kind");
                    }
                    builder = Some(ModelBuilder::new(name));
                    stack = vec![Frame::Feature(FeatureId(0))];
                    continue;
                }
                let Some(b) = builder.as_mut() else {
                    return syntax(line, column, "the first feature must not be indented");
                };
                if depth > stack.len() {
                    return syntax(line, column, "indentation skips a level");
                }
                stack.truncate(depth);
                let added = match stack[depth - 1] {
                    Frame::Feature(parent) => b.child(parent, name, mandatory),
                    Frame::Group(group) => {
                        if suffix.is_some() {
                            return syntax(
                                line,
                                column,
                                "group members take no mandatory/optional suffix",
                            );
                        }
                        b.member(group, name)
                    }
                };
                let Some(id) = added else {
                    return semantic(line, column, format!("duplicate feature name '{name}'"));
                };
                stack.push(Frame::Feature(id));
            }
            "xor" | "or" => {
                if let Some(extra) = words.next() {
                    return syntax(line, column, format!("unexpected '{extra}'"));
                }
                let Some(b) = builder.as_mut() else {
                    return syntax(line, column, "group before the root feature");
                };
                if depth == 0 || depth > stack.len() {
                    return syntax(line, column, "group must be nested under a feature");
                }
                stack.truncate(depth);
                let Frame::Feature(parent) = stack[depth - 1] else {
                    return syntax(line, column, "a group cannot directly contain a group");
                };
                let kind = if keyword == "xor" {
                    GroupKind::Xor
                } else {
                    GroupKind::Or
                };
                let g = b.group(parent, kind);
                group_lines.push((line, column));
                stack.push(Frame::Group(g));
            }
            other => return syntax(line, column, format!("unknown keyword '{other}'")),
        }
    }

    let Some(mut builder) = builder else {
        return syntax(1, 1, "no root feature");
    };
    if let Some(g) = builder.degenerate_group() {
        let (line, column) = group_lines[g.0];
        return semantic(line, column, "a group needs at least two members");
    }
    for (line, column, text) in constraints {
        let vars = builder.model().vars().clone();
        let expr = parse_expr(&text, |n| vars.lookup(n)).map_err(|e| {
            let column = column + e.column - 1;
            if e.message.starts_with("unknown variable") {
                ModelError::Semantic {
                    line,
                    column,
                    message: e.message.replace("variable", "feature"),
                }
            } else {
                ModelError::Syntax {
                    line,
                    column,
                    message: e.message,
                }
            }
        })?;
        builder.constraint(expr);
    }
    Ok(builder
        .finish()
        .expect("group sizes were checked before constraints"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature_model::{Child, EdgeKind};

    const SAMPLE: &str = "\
feature x
  feature y mandatory
    xor
      feature a
      feature b
  feature c optional
  feature d optional
";

    #[test]
    fn sample_model_shape() {
        let fm = parse_model(SAMPLE).unwrap();
        assert_eq!(fm.len(), 6);
        assert_eq!(fm.groups().len(), 1);
        let x = fm.lookup("x").unwrap();
        let y = fm.lookup("y").unwrap();
        assert_eq!(fm.root(), x);
        assert_eq!(fm.feature(y).parent, Some((x, EdgeKind::Mandatory)));
        for n in ["c", "d"] {
            let f = fm.feature(fm.lookup(n).unwrap());
            assert_eq!(f.parent, Some((x, EdgeKind::Optional)));
        }
        let g = &fm.groups()[0];
        assert_eq!(g.kind, GroupKind::Xor);
        assert_eq!(g.parent, y);
        assert_eq!(g.members, vec![fm.lookup("a").unwrap(), fm.lookup("b").unwrap()]);
        assert_eq!(fm.feature(y).children, vec![Child::Group(GroupId(0))]);
    }

    #[test]
    fn lone_root() {
        let fm = parse_model("feature r").unwrap();
        assert_eq!(fm.len(), 1);
        assert!(fm.groups().is_empty());
    }

    #[test]
    fn singleton_group_is_semantic_error() {
        let err = parse_model("feature r\n  xor\n    feature a\n").unwrap_err();
        assert!(matches!(err, ModelError::Semantic { line: 2, column: 3, .. }), "{err}");
    }

    #[test]
    fn comments_and_default_optional() {
        let fm = parse_model("# header\nfeature r # the root\n\n  feature a\n").unwrap();
        assert_eq!(
            fm.feature(FeatureId(1)).parent,
            Some((FeatureId(0), EdgeKind::Optional))
        );
    }

    #[test]
    fn syntax_errors() {
        let cases = [
            ("feature r\n   feature a\n", 2),
            ("feature r\n\tfeature a\n", 2),
            ("feature r\n    feature a\n", 2),
            ("feature r\nfeature s\n", 2),
            ("feature r\n  feature a sometimes\n", 2),
            ("feature r\n  xor\n    xor\n", 3),
            ("feature r\n  xor\n    feature a mandatory\n    feature b\n", 3),
            ("feature r\n  widget a\n", 2),
            ("  feature r\n", 1),
            ("feature r\nconstraint r &\n", 2),
            ("feature r\nconstraint r\n  feature a\n", 3),
            ("feature r mandatory\n", 1),
            ("", 1),
        ];
        for (src, line) in cases {
            match parse_model(src) {
                Err(ModelError::Syntax { line: l, .. }) => assert_eq!(l, line, "{src:?}"),
                other => panic!("{src:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn semantic_errors() {
        let dup = parse_model("feature r\n  feature a\n  feature a\n").unwrap_err();
        assert!(matches!(dup, ModelError::Semantic { line: 3, .. }));
        let unknown = parse_model("feature r\n  feature a\nconstraint a -> zz\n").unwrap_err();
        assert_eq!(
            unknown,
            ModelError::Semantic {
                line: 3,
                column: 17,
                message: "unknown feature 'zz'".into()
            }
        );
    }

    #[test]
    fn constraints_resolve_to_feature_vars() {
        let fm = parse_model(&format!("{SAMPLE}constraint a -> !d\n")).unwrap();
        assert_eq!(fm.constraints().len(), 1);
        assert_eq!(
            fm.constraints()[0].display(fm.vars()).to_string(),
            "a -> !d"
        );
    }
}
