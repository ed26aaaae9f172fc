use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use indexmap::{IndexMap, IndexSet};

use crate::error::ModelError;

/// Reserved name of the top class.
pub const THING: &str = "Thing";

/// Returns true when `name` matches `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An extended real: finite decimal, `-inf` or `+inf`. NaN is unrepresentable.
#[derive(Debug, Clone, Copy)]
pub struct Number(f64);

impl Number {
    pub const NEG_INF: Number = Number(f64::NEG_INFINITY);
    pub const POS_INF: Number = Number(f64::INFINITY);

    pub fn new(value: f64) -> Option<Number> {
        if value.is_nan() {
            None
        } else if value == 0.0 {
            Some(Number(0.0))
        } else {
            Some(Number(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl PartialEq for Number {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Number {}

impl PartialOrd for Number {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Number {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Hash for Number {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == f64::INFINITY {
            f.write_str("+inf")
        } else if self.0 == f64::NEG_INFINITY {
            f.write_str("-inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// A data value as written in assertions and form fields.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    Number(Number),
    Str(String),
    Bool(bool),
}

impl Literal {
    /// Plain rendering used in XML and JSON (strings unquoted).
    pub fn plain(&self) -> String {
        match self {
            Literal::Number(n) => n.to_string(),
            Literal::Str(s) => s.clone(),
            Literal::Bool(b) => b.to_string(),
        }
    }
}

pub(crate) fn write_quoted(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            '\r' => f.write_str("\\r")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Number(n) => write!(f, "{n}"),
            Literal::Str(s) => write_quoted(f, s),
            Literal::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// Constraint on data values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Facet {
    /// Closed interval over the extended reals.
    Interval { lo: Number, hi: Number },
    OneOf(BTreeSet<String>),
    BoolEq(bool),
}

impl Facet {
    pub fn interval(lo: Number, hi: Number) -> Result<Facet, ModelError> {
        if lo > hi {
            return Err(ModelError::EmptyInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Facet::Interval { lo, hi })
    }

    pub fn one_of<I, S>(values: I) -> Result<Facet, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set: BTreeSet<String> = values.into_iter().map(Into::into).collect();
        if set.is_empty() {
            return Err(ModelError::EmptyOneOf);
        }
        Ok(Facet::OneOf(set))
    }

    pub fn satisfied_by(&self, value: &Literal) -> bool {
        match (self, value) {
            (Facet::Interval { lo, hi }, Literal::Number(v)) => lo <= v && v <= hi,
            (Facet::OneOf(set), Literal::Str(s)) => set.contains(s),
            (Facet::BoolEq(b), Literal::Bool(v)) => b == v,
            _ => false,
        }
    }

    /// Every value satisfying `self` also satisfies `other`.
    pub fn implies(&self, other: &Facet) -> bool {
        match (self, other) {
            (Facet::Interval { lo: a, hi: b }, Facet::Interval { lo: c, hi: d }) => c <= a && b <= d,
            (Facet::OneOf(a), Facet::OneOf(b)) => a.is_subset(b),
            (Facet::BoolEq(a), Facet::BoolEq(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Facet::Interval { lo, hi } => write!(f, "Interval({lo} {hi})"),
            Facet::OneOf(values) => {
                f.write_str("OneOf(")?;
                for (k, v) in values.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ")?;
                    }
                    write_quoted(f, v)?;
                }
                f.write_str(")")
            }
            Facet::BoolEq(b) => write!(f, "BoolEq({b})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassExpr {
    Thing,
    Atomic(String),
    /// At least two operands.
    IntersectionOf(Vec<ClassExpr>),
    ObjectSome(String, Box<ClassExpr>),
    DataSome(String, Facet),
}

impl ClassExpr {
    pub fn atomic(name: impl Into<String>) -> ClassExpr {
        let name = name.into();
        if name == THING {
            ClassExpr::Thing
        } else {
            ClassExpr::Atomic(name)
        }
    }

    pub fn some(prop: impl Into<String>, filler: ClassExpr) -> ClassExpr {
        ClassExpr::ObjectSome(prop.into(), Box::new(filler))
    }

    pub fn as_atomic(&self) -> Option<&str> {
        match self {
            ClassExpr::Atomic(name) => Some(name),
            ClassExpr::Thing => Some(THING),
            _ => None,
        }
    }

    /// Calls `f` on this expression and every nested sub-expression.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a ClassExpr)) {
        f(self);
        match self {
            ClassExpr::IntersectionOf(parts) => parts.iter().for_each(|p| p.visit(f)),
            ClassExpr::ObjectSome(_, filler) => filler.visit(f),
            _ => {}
        }
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassExpr::Thing => f.write_str(THING),
            ClassExpr::Atomic(name) => f.write_str(name),
            ClassExpr::IntersectionOf(parts) => {
                f.write_str("ObjectIntersectionOf(")?;
                for (k, p) in parts.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            ClassExpr::ObjectSome(prop, filler) => write!(f, "ObjectSomeValuesFrom({prop} {filler})"),
            ClassExpr::DataSome(prop, facet) => write!(f, "DataSomeValuesFrom({prop} {facet})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Axiom {
    SubClassOf(ClassExpr, ClassExpr),
    EquivalentClasses(ClassExpr, ClassExpr),
    ObjectPropertyDomain(String, ClassExpr),
    DataPropertyDomain(String, ClassExpr),
    DataPropertyRange(String, Facet),
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::SubClassOf(a, b) => write!(f, "SubClassOf({a} {b})"),
            Axiom::EquivalentClasses(a, b) => write!(f, "EquivalentClasses({a} {b})"),
            Axiom::ObjectPropertyDomain(p, c) => write!(f, "ObjectPropertyDomain({p} {c})"),
            Axiom::DataPropertyDomain(p, c) => write!(f, "DataPropertyDomain({p} {c})"),
            Axiom::DataPropertyRange(p, r) => write!(f, "DataPropertyRange({p} {r})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NameKind {
    Class,
    ObjectProperty,
    DataProperty,
    Individual,
}

impl NameKind {
    pub fn describe(self) -> &'static str {
        match self {
            NameKind::Class => "class",
            NameKind::ObjectProperty => "object property",
            NameKind::DataProperty => "data property",
            NameKind::Individual => "individual",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObjectAssertion {
    pub prop: String,
    pub subject: String,
    pub object: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ABox {
    pub(crate) individuals: BTreeSet<String>,
    pub(crate) class_assertions: IndexSet<(ClassExpr, String)>,
    pub(crate) object_assertions: IndexSet<ObjectAssertion>,
    pub(crate) data_assertions: IndexMap<(String, String), Literal>,
}

impl ABox {
    pub fn individuals(&self) -> &BTreeSet<String> {
        &self.individuals
    }

    pub fn class_assertions(&self) -> impl Iterator<Item = (&ClassExpr, &str)> {
        self.class_assertions.iter().map(|(c, i)| (c, i.as_str()))
    }

    pub fn object_assertions(&self) -> impl Iterator<Item = &ObjectAssertion> {
        self.object_assertions.iter()
    }

    /// `(prop, individual, value)` triples in insertion order.
    pub fn data_assertions(&self) -> impl Iterator<Item = (&str, &str, &Literal)> {
        self.data_assertions
            .iter()
            .map(|((p, i), v)| (p.as_str(), i.as_str(), v))
    }

    pub fn data_value(&self, prop: &str, individual: &str) -> Option<&Literal> {
        self.data_assertions
            .get(&(prop.to_string(), individual.to_string()))
    }

    pub fn object_values(&self, prop: &str, individual: &str) -> BTreeSet<&str> {
        self.object_assertions
            .iter()
            .filter(|a| a.prop == prop && a.subject == individual)
            .map(|a| a.object.as_str())
            .collect()
    }

    pub fn assertion_count(&self) -> usize {
        self.class_assertions.len() + self.object_assertions.len() + self.data_assertions.len()
    }
}

/// Names partitioned by kind, the TBox axioms and the ABox.
///
/// Every mutator validates the invariants, so an `Ontology` value is always
/// well formed: referenced names are declared with the right kind, each
/// property has at most one domain and one range, data values are single
/// valued and satisfy the declared range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ontology {
    pub(crate) name: String,
    pub(crate) classes: BTreeSet<String>,
    pub(crate) object_props: BTreeSet<String>,
    pub(crate) data_props: BTreeSet<String>,
    pub(crate) axioms: IndexSet<Axiom>,
    pub(crate) abox: ABox,
}

impl Ontology {
    pub fn new(name: impl Into<String>) -> Ontology {
        Ontology {
            name: name.into(),
            classes: BTreeSet::new(),
            object_props: BTreeSet::new(),
            data_props: BTreeSet::new(),
            axioms: IndexSet::new(),
            abox: ABox::default(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn classes(&self) -> &BTreeSet<String> {
        &self.classes
    }

    pub fn object_properties(&self) -> &BTreeSet<String> {
        &self.object_props
    }

    pub fn data_properties(&self) -> &BTreeSet<String> {
        &self.data_props
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> {
        self.axioms.iter()
    }

    pub fn axiom_count(&self) -> usize {
        self.axioms.len()
    }

    pub fn abox(&self) -> &ABox {
        &self.abox
    }

    pub fn individuals(&self) -> &BTreeSet<String> {
        &self.abox.individuals
    }

    pub fn kind_of(&self, name: &str) -> Option<NameKind> {
        if self.classes.contains(name) {
            Some(NameKind::Class)
        } else if self.object_props.contains(name) {
            Some(NameKind::ObjectProperty)
        } else if self.data_props.contains(name) {
            Some(NameKind::DataProperty)
        } else if self.abox.individuals.contains(name) {
            Some(NameKind::Individual)
        } else {
            None
        }
    }

    pub fn is_class(&self, name: &str) -> bool {
        name == THING || self.classes.contains(name)
    }

    /// Declared domain, if any.
    pub fn domain(&self, prop: &str) -> Option<&ClassExpr> {
        self.axioms.iter().find_map(|ax| match ax {
            Axiom::ObjectPropertyDomain(p, c) | Axiom::DataPropertyDomain(p, c) if p == prop => Some(c),
            _ => None,
        })
    }

    /// Domain used for instance checks: the declared one or `Thing`.
    pub fn effective_domain(&self, prop: &str) -> ClassExpr {
        self.domain(prop).cloned().unwrap_or(ClassExpr::Thing)
    }

    pub fn range(&self, prop: &str) -> Option<&Facet> {
        self.axioms.iter().find_map(|ax| match ax {
            Axiom::DataPropertyRange(p, f) if p == prop => Some(f),
            _ => None,
        })
    }

    pub fn declare(&mut self, kind: NameKind, name: &str) -> Result<(), ModelError> {
        if !is_valid_name(name) {
            return Err(ModelError::InvalidName(name.to_string()));
        }
        if name == THING {
            return Err(ModelError::ReservedName(name.to_string()));
        }
        if let Some(existing) = self.kind_of(name) {
            return Err(if existing == kind {
                ModelError::DuplicateDeclaration(name.to_string())
            } else {
                ModelError::KindConflict {
                    name: name.to_string(),
                    existing: existing.describe(),
                    requested: kind.describe(),
                }
            });
        }
        let set = match kind {
            NameKind::Class => &mut self.classes,
            NameKind::ObjectProperty => &mut self.object_props,
            NameKind::DataProperty => &mut self.data_props,
            NameKind::Individual => &mut self.abox.individuals,
        };
        set.insert(name.to_string());
        Ok(())
    }

    /// Declares `name` unless it is already declared with the same kind.
    pub fn ensure_declared(&mut self, kind: NameKind, name: &str) -> Result<(), ModelError> {
        match self.declare(kind, name) {
            Err(ModelError::DuplicateDeclaration(_)) => Ok(()),
            other => other,
        }
    }

    fn expect_kind(&self, name: &str, kind: NameKind) -> Result<(), ModelError> {
        match self.kind_of(name) {
            Some(k) if k == kind => Ok(()),
            Some(k) => Err(ModelError::KindMismatch {
                name: name.to_string(),
                expected: kind.describe(),
                found: k.describe(),
            }),
            None => Err(ModelError::UndeclaredName(name.to_string())),
        }
    }

    pub fn check_expr(&self, expr: &ClassExpr) -> Result<(), ModelError> {
        match expr {
            ClassExpr::Thing => Ok(()),
            ClassExpr::Atomic(name) => self.expect_kind(name, NameKind::Class),
            ClassExpr::IntersectionOf(parts) => {
                if parts.len() < 2 {
                    return Err(ModelError::ShortIntersection);
                }
                parts.iter().try_for_each(|p| self.check_expr(p))
            }
            ClassExpr::ObjectSome(prop, filler) => {
                self.expect_kind(prop, NameKind::ObjectProperty)?;
                self.check_expr(filler)
            }
            ClassExpr::DataSome(prop, _) => self.expect_kind(prop, NameKind::DataProperty),
        }
    }

    /// Adds an axiom. Returns false when an identical axiom was already present.
    pub fn add_axiom(&mut self, axiom: Axiom) -> Result<bool, ModelError> {
        if self.axioms.contains(&axiom) {
            return Ok(false);
        }
        match &axiom {
            Axiom::SubClassOf(a, b) | Axiom::EquivalentClasses(a, b) => {
                self.check_expr(a)?;
                self.check_expr(b)?;
            }
            Axiom::ObjectPropertyDomain(p, c) => {
                self.expect_kind(p, NameKind::ObjectProperty)?;
                self.check_expr(c)?;
                if self.domain(p).is_some() {
                    return Err(ModelError::MultipleDomains(p.clone()));
                }
            }
            Axiom::DataPropertyDomain(p, c) => {
                self.expect_kind(p, NameKind::DataProperty)?;
                self.check_expr(c)?;
                if self.domain(p).is_some() {
                    return Err(ModelError::MultipleDomains(p.clone()));
                }
            }
            Axiom::DataPropertyRange(p, facet) => {
                self.expect_kind(p, NameKind::DataProperty)?;
                if self.range(p).is_some() {
                    return Err(ModelError::MultipleRanges(p.clone()));
                }
                if let Some((_, ind, value)) = self
                    .abox
                    .data_assertions()
                    .find(|(q, _, v)| *q == p && !facet.satisfied_by(v))
                {
                    return Err(ModelError::RangeViolation {
                        prop: p.clone(),
                        individual: ind.to_string(),
                        value: value.to_string(),
                    });
                }
            }
        }
        self.axioms.insert(axiom);
        Ok(true)
    }

    fn touch_individual(&mut self, name: &str) -> Result<(), ModelError> {
        self.ensure_declared(NameKind::Individual, name)
    }

    pub fn assert_class(&mut self, expr: ClassExpr, individual: &str) -> Result<(), ModelError> {
        self.check_expr(&expr)?;
        self.touch_individual(individual)?;
        self.abox.class_assertions.insert((expr, individual.to_string()));
        Ok(())
    }

    pub fn assert_object(&mut self, prop: &str, subject: &str, object: &str) -> Result<(), ModelError> {
        self.expect_kind(prop, NameKind::ObjectProperty)?;
        self.touch_individual(subject)?;
        self.touch_individual(object)?;
        self.abox.object_assertions.insert(ObjectAssertion {
            prop: prop.to_string(),
            subject: subject.to_string(),
            object: object.to_string(),
        });
        Ok(())
    }

    /// Checks that `value` may be stored for `prop` without mutating anything.
    pub fn check_data_value(&self, prop: &str, individual: &str, value: &Literal) -> Result<(), ModelError> {
        self.expect_kind(prop, NameKind::DataProperty)?;
        if let Some(range) = self.range(prop) {
            if !range.satisfied_by(value) {
                return Err(ModelError::RangeViolation {
                    prop: prop.to_string(),
                    individual: individual.to_string(),
                    value: value.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn assert_data(&mut self, prop: &str, individual: &str, value: Literal) -> Result<(), ModelError> {
        self.check_data_value(prop, individual, &value)?;
        let key = (prop.to_string(), individual.to_string());
        match self.abox.data_assertions.get(&key) {
            Some(existing) if *existing == value => return Ok(()),
            Some(_) => {
                return Err(ModelError::DuplicateDataAssertion {
                    prop: prop.to_string(),
                    individual: individual.to_string(),
                })
            }
            None => {}
        }
        self.touch_individual(individual)?;
        self.abox.data_assertions.insert(key, value);
        Ok(())
    }

    /// Overwrites the value of a single-valued data property.
    pub fn set_data(&mut self, prop: &str, individual: &str, value: Literal) -> Result<(), ModelError> {
        self.check_data_value(prop, individual, &value)?;
        self.touch_individual(individual)?;
        self.abox
            .data_assertions
            .insert((prop.to_string(), individual.to_string()), value);
        Ok(())
    }
}
