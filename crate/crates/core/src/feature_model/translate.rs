use super::{Child, EdgeKind, FeatureModel, GroupKind};
use crate::logic::Expr;

/// One conjunct per modeling primitive, in this order: the root, then for
/// each feature in declaration order its plain child edges followed by its
/// groups, then the cross-tree constraints verbatim.
///
/// * root `r`: `r`
/// * mandatory child `c` of `p`: `c <-> p`
/// * optional child `c` of `p`: `c -> p`
/// * group members `g1..gn` of `p`: `gi -> p` for each member, then
///   `p -> (g1 | ... | gn)`
/// * xor groups additionally: `p -> !(gi & gj)` for every pair `i < j`
pub fn translate_conjuncts(fm: &FeatureModel) -> Vec<Expr> {
    let v = |id: super::FeatureId| Expr::Var(id.var());
    let mut out = vec![v(fm.root())];
    for id in fm.feature_ids() {
        let f = fm.feature(id);
        for child in &f.children {
            if let Child::Feature(c) = *child {
                match fm.feature(c).parent {
                    Some((_, EdgeKind::Mandatory)) => out.push(Expr::iff(v(c), v(id))),
                    Some((_, EdgeKind::Optional)) => out.push(Expr::implies(v(c), v(id))),
                    _ => unreachable!("plain children carry plain edges"),
                }
            }
        }
        for child in &f.children {
            if let Child::Group(g) = *child {
                let group = fm.group(g);
                for &m in &group.members {
                    out.push(Expr::implies(v(m), v(id)));
                }
                out.push(Expr::implies(
                    v(id),
                    Expr::Or(group.members.iter().map(|&m| v(m)).collect()),
                ));
                if group.kind == GroupKind::Xor {
                    for (i, &a) in group.members.iter().enumerate() {
                        for &b in &group.members[i + 1..] {
                            out.push(Expr::implies(
                                v(id),
                                Expr::not(Expr::And(vec![v(a), v(b)])),
                            ));
                        }
                    }
                }
            }
        }
    }
    out.extend(fm.constraints().iter().cloned());
    out
}

/// The propositional semantics of the model as a single conjunction.
pub fn translate(fm: &FeatureModel) -> Expr {
    let mut conjuncts = translate_conjuncts(fm);
    if conjuncts.len() == 1 {
        conjuncts.pop().unwrap()
    } else {
        Expr::And(conjuncts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature_model::{parse_model, print_model};
    use crate::logic::oracle::projected_models;
    use crate::logic::Var;

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
    fn sample_conjuncts_in_order() {
        let fm = parse_model(SAMPLE).unwrap();
        let printed: Vec<String> = translate_conjuncts(&fm)
            .iter()
            .map(|e| e.display(fm.vars()).to_string())
            .collect();
        assert_eq!(
            printed,
            [
                "x",
                "y <-> x",
                "c -> x",
                "d -> x",
                "a -> y",
                "b -> y",
                "y -> a | b",
                "y -> !(a & b)",
            ]
        );
    }

    #[test]
    fn lone_root_has_single_model() {
        let fm = parse_model("feature r").unwrap();
        assert_eq!(translate(&fm), Expr::Var(Var::new(0)));
        let models = projected_models(&fm.to_clauses()).unwrap();
        assert_eq!(models, vec![vec![Var::new(0)]]);
    }

    #[test]
    fn three_way_xor_models() {
        let fm = parse_model("feature r\n  xor\n    feature a\n    feature b\n    feature c\n").unwrap();
        let models = projected_models(&fm.to_clauses()).unwrap();
        let [r, a, b, c] = [0, 1, 2, 3].map(Var::new);
        let mut expected = vec![vec![r, a], vec![r, b], vec![r, c]];
        expected.sort();
        assert_eq!(models, expected);
    }

    #[test]
    fn or_group_omits_exclusion() {
        let fm = parse_model("feature r\n  or\n    feature a\n    feature b\n").unwrap();
        let models = projected_models(&fm.to_clauses()).unwrap();
        assert_eq!(models.len(), 3);
    }

    #[test]
    fn translation_uses_only_feature_vars() {
        let src = format!("{SAMPLE}constraint (a | c) <-> !(d & b)\n");
        let fm = parse_model(&src).unwrap();
        for e in translate_conjuncts(&fm) {
            assert!(e.vars().iter().all(|v| v.index() < fm.len()));
        }
    }

    #[test]
    fn print_then_parse_is_identity() {
        let src = format!("{SAMPLE}  or\n    feature e\n    feature f\nconstraint a -> !d\nconstraint e | f -> c\n");
        let fm = parse_model(&src).unwrap();
        let printed = print_model(&fm);
        assert_eq!(parse_model(&printed).unwrap(), fm);
        assert_eq!(print_model(&parse_model(&printed).unwrap()), printed);
    }
}
