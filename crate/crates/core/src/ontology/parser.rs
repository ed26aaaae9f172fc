use crate::error::{Location, ParseError};
use crate::ontology::model::{Axiom, ClassExpr, Facet, Literal, NameKind, Number, Ontology, THING};
use crate::ontology::syntax::{read_forms, Form, Node, Token};

/// Name given to documents without an `Ontology(...)` header.
pub const DEFAULT_ONTOLOGY_NAME: &str = "unnamed";

/// Parses an HFS document.
///
/// Declarations are collected first, so they may appear anywhere in the
/// document. TBox axioms are then added in document order, followed by the
/// assertions (which need the declared ranges).
pub fn parse_ontology(text: &str) -> Result<Ontology, ParseError> {
    let forms = read_forms(text)?;
    let mut ontology = Ontology::new(DEFAULT_ONTOLOGY_NAME);
    let mut header: Option<Location> = None;
    let mut axioms = Vec::new();
    let mut assertions = Vec::new();

    for form in &forms {
        match form.head.as_str() {
            "Ontology" => {
                if header.is_some() {
                    return Err(ParseError::syntax(form.location, "second Ontology header"));
                }
                form.expect_arity(1)?;
                ontology.set_name(ident(&form.args[0])?);
                header = Some(form.location);
            }
            "Class" | "ObjectProperty" | "DataProperty" => {
                form.expect_arity(1)?;
                let kind = match form.head.as_str() {
                    "Class" => NameKind::Class,
                    "ObjectProperty" => NameKind::ObjectProperty,
                    _ => NameKind::DataProperty,
                };
                let name = ident(&form.args[0])?;
                ontology
                    .declare(kind, &name)
                    .map_err(|e| ParseError::model(form.args[0].location(), e))?;
            }
            "SubClassOf" | "EquivalentClasses" | "ObjectPropertyDomain" | "DataPropertyDomain"
            | "DataPropertyRange" => axioms.push(form),
            "ClassAssertion" | "ObjectPropertyAssertion" | "DataPropertyAssertion" => assertions.push(form),
            other => {
                return Err(ParseError::syntax(form.location, format!("unknown construct `{other}`")));
            }
        }
    }

    for form in axioms {
        let axiom = axiom(form)?;
        ontology
            .add_axiom(axiom)
            .map_err(|e| ParseError::model(form.location, e))?;
    }
    for form in assertions {
        assertion(&mut ontology, form)?;
    }
    Ok(ontology)
}

fn ident(node: &Node) -> Result<String, ParseError> {
    match node {
        Node::Atom(s) => match &s.token {
            Token::Ident(name) => Ok(name.clone()),
            _ => Err(ParseError::syntax(s.location, "expected a name")),
        },
        Node::Form(f) => Err(ParseError::syntax(f.location, "expected a name, found a form")),
    }
}

/// Parses a class expression.
pub fn class_expr(node: &Node) -> Result<ClassExpr, ParseError> {
    match node {
        Node::Atom(_) => Ok(ClassExpr::atomic(ident(node)?)),
        Node::Form(f) => match f.head.as_str() {
            "ObjectIntersectionOf" => {
                if f.args.len() < 2 {
                    return Err(ParseError::syntax(
                        f.location,
                        "ObjectIntersectionOf needs at least two operands",
                    ));
                }
                Ok(ClassExpr::IntersectionOf(
                    f.args.iter().map(class_expr).collect::<Result<_, _>>()?,
                ))
            }
            "ObjectSomeValuesFrom" => {
                f.expect_arity(2)?;
                Ok(ClassExpr::some(ident(&f.args[0])?, class_expr(&f.args[1])?))
            }
            "DataSomeValuesFrom" => {
                f.expect_arity(2)?;
                Ok(ClassExpr::DataSome(ident(&f.args[0])?, facet(&f.args[1])?))
            }
            other => Err(ParseError::syntax(
                f.location,
                format!("`{other}` is not a class expression"),
            )),
        },
    }
}

fn number(node: &Node) -> Result<(Number, Location), ParseError> {
    match node {
        Node::Atom(s) => match &s.token {
            Token::Number(n) => Ok((*n, s.location)),
            _ => Err(ParseError::syntax(s.location, "expected a number")),
        },
        Node::Form(f) => Err(ParseError::syntax(f.location, "expected a number")),
    }
}

fn string(node: &Node) -> Result<String, ParseError> {
    match node {
        Node::Atom(s) => match &s.token {
            Token::Str(v) => Ok(v.clone()),
            _ => Err(ParseError::syntax(s.location, "expected a quoted string")),
        },
        Node::Form(f) => Err(ParseError::syntax(f.location, "expected a quoted string")),
    }
}

pub fn facet(node: &Node) -> Result<Facet, ParseError> {
    let Node::Form(f) = node else {
        return Err(ParseError::syntax(node.location(), "expected a facet"));
    };
    match f.head.as_str() {
        "Interval" => {
            f.expect_arity(2)?;
            let (lo, lo_at) = number(&f.args[0])?;
            let (hi, hi_at) = number(&f.args[1])?;
            if lo == Number::POS_INF {
                return Err(ParseError::syntax(lo_at, "lower bound cannot be +inf"));
            }
            if hi == Number::NEG_INF {
                return Err(ParseError::syntax(hi_at, "upper bound cannot be -inf"));
            }
            Facet::interval(lo, hi).map_err(|e| ParseError::model(f.location, e))
        }
        "OneOf" => {
            if f.args.is_empty() {
                return Err(ParseError::syntax(f.location, "OneOf needs at least one literal"));
            }
            let values = f.args.iter().map(string).collect::<Result<Vec<_>, _>>()?;
            Facet::one_of(values).map_err(|e| ParseError::model(f.location, e))
        }
        "BoolEq" => {
            f.expect_arity(1)?;
            match ident(&f.args[0])?.as_str() {
                "true" => Ok(Facet::BoolEq(true)),
                "false" => Ok(Facet::BoolEq(false)),
                _ => Err(ParseError::syntax(f.args[0].location(), "expected true or false")),
            }
        }
        other => Err(ParseError::syntax(f.location, format!("`{other}` is not a facet"))),
    }
}

/// Parses a data literal: number, quoted string, `true` or `false`.
pub fn literal(node: &Node) -> Result<Literal, ParseError> {
    match node {
        Node::Atom(s) => match &s.token {
            Token::Number(n) if n.is_finite() => Ok(Literal::Number(*n)),
            Token::Str(v) => Ok(Literal::Str(v.clone())),
            Token::Ident(v) if v == "true" => Ok(Literal::Bool(true)),
            Token::Ident(v) if v == "false" => Ok(Literal::Bool(false)),
            _ => Err(ParseError::syntax(s.location, "expected a literal")),
        },
        Node::Form(f) => Err(ParseError::syntax(f.location, "expected a literal")),
    }
}

/// Parses a single literal written in HFS syntax, e.g. `76`, `"positive"`, `true`.
pub fn parse_literal(text: &str) -> Result<Literal, ParseError> {
    let tokens = crate::ontology::syntax::Lexer::new(text).tokenize()?;
    match tokens.as_slice() {
        [single] => literal(&Node::Atom(single.clone())),
        [] => Err(ParseError::syntax(Location { line: 1, column: 1 }, "expected a literal")),
        [_, extra, ..] => Err(ParseError::syntax(extra.location, "trailing input after literal")),
    }
}

fn axiom(form: &Form) -> Result<Axiom, ParseError> {
    form.expect_arity(2)?;
    let a = &form.args[0];
    let b = &form.args[1];
    Ok(match form.head.as_str() {
        "SubClassOf" => Axiom::SubClassOf(class_expr(a)?, class_expr(b)?),
        "EquivalentClasses" => Axiom::EquivalentClasses(class_expr(a)?, class_expr(b)?),
        "ObjectPropertyDomain" => Axiom::ObjectPropertyDomain(ident(a)?, class_expr(b)?),
        "DataPropertyDomain" => Axiom::DataPropertyDomain(ident(a)?, class_expr(b)?),
        "DataPropertyRange" => Axiom::DataPropertyRange(ident(a)?, facet(b)?),
        _ => unreachable!("caller dispatches on axiom heads"),
    })
}

fn individual(node: &Node) -> Result<String, ParseError> {
    let name = ident(node)?;
    if name == THING {
        return Err(ParseError::model(
            node.location(),
            crate::error::ModelError::ReservedName(name),
        ));
    }
    Ok(name)
}

fn assertion(ontology: &mut Ontology, form: &Form) -> Result<(), ParseError> {
    let at = |e| ParseError::model(form.location, e);
    match form.head.as_str() {
        "ClassAssertion" => {
            form.expect_arity(2)?;
            let expr = class_expr(&form.args[0])?;
            let ind = individual(&form.args[1])?;
            ontology.assert_class(expr, &ind).map_err(at)
        }
        "ObjectPropertyAssertion" => {
            form.expect_arity(3)?;
            let prop = ident(&form.args[0])?;
            let subject = individual(&form.args[1])?;
            let object = individual(&form.args[2])?;
            ontology.assert_object(&prop, &subject, &object).map_err(at)
        }
        "DataPropertyAssertion" => {
            form.expect_arity(3)?;
            let prop = ident(&form.args[0])?;
            let subject = individual(&form.args[1])?;
            let value = literal(&form.args[2])?;
            ontology.assert_data(&prop, &subject, value).map_err(at)
        }
        _ => unreachable!("caller dispatches on assertion heads"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn category(text: &str) -> &'static str {
        parse_ontology(text).unwrap_err().category()
    }

    #[test]
    fn smallest_document() {
        let o = parse_ontology("Class(A) Class(B) SubClassOf(A B)").unwrap();
        assert_eq!(o.classes().len(), 2);
        assert_eq!(o.axiom_count(), 1);
        assert_eq!(o.name(), DEFAULT_ONTOLOGY_NAME);
    }

    #[test]
    fn undeclared_name_reported() {
        let err = parse_ontology("SubClassOf(A B)").unwrap_err();
        assert_eq!(err.category(), "undeclared_name");
        assert!(err.to_string().contains("`A`"));
    }

    #[test]
    fn declarations_in_any_order() {
        let o = parse_ontology("SubClassOf(A B)\nClass(B)\nClass(A)").unwrap();
        assert_eq!(o.axiom_count(), 1);
    }

    #[test]
    fn error_categories() {
        assert_eq!(category("Class(A) Class(A)"), "duplicate_declaration");
        assert_eq!(category("Class(A) ObjectProperty(A)"), "kind_conflict");
        assert_eq!(category("DataProperty(d) DataPropertyRange(d Interval(5 2))"), "empty_interval");
        assert_eq!(
            category("DataProperty(d) DataPropertyAssertion(d i 1) DataPropertyAssertion(d i 2)"),
            "duplicate_data_assertion"
        );
        assert_eq!(
            category("DataProperty(d) DataPropertyRange(d BoolEq(true)) DataPropertyAssertion(d i false)"),
            "range_violation"
        );
        assert_eq!(category("Class(A"), "syntax");
        assert_eq!(category("Foo(A)"), "syntax");
        assert_eq!(category("Class(A) ObjectProperty(r) SubClassOf(r A)"), "kind_mismatch");
        assert_eq!(category("Class(Thing)"), "invalid_name");
        assert_eq!(
            category("Class(A) Class(B) ObjectProperty(r) ObjectPropertyDomain(r A) ObjectPropertyDomain(r B)"),
            "multiple_domain_or_range"
        );
    }

    #[test]
    fn error_location_points_at_form() {
        let err = parse_ontology("Class(A)\n\n   SubClassOf(A Missing)").unwrap_err();
        assert_eq!(err.location, Location { line: 3, column: 4 });
    }

    #[test]
    fn range_declared_after_assertion_still_applies() {
        let text = "DataPropertyAssertion(d i \"x\")\nDataProperty(d)\nDataPropertyRange(d Interval(0 1))";
        assert_eq!(category(text), "range_violation");
    }

    #[test]
    fn literals() {
        assert_eq!(parse_literal("76").unwrap(), Literal::Number(Number::new(76.0).unwrap()));
        assert_eq!(parse_literal("\"a b\"").unwrap(), Literal::Str("a b".into()));
        assert_eq!(parse_literal("false").unwrap(), Literal::Bool(false));
        assert!(parse_literal("abc").is_err());
        assert!(parse_literal("+inf").is_err());
        assert!(parse_literal("1 2").is_err());
    }
}
