use std::fmt;

use thiserror::Error;

/// Violations of the ontology invariants, independent of any source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("undeclared name `{0}`")]
    UndeclaredName(String),
    #[error("`{0}` is declared more than once")]
    DuplicateDeclaration(String),
    #[error("`{name}` is already declared as {existing}, cannot redeclare as {requested}")]
    KindConflict {
        name: String,
        existing: &'static str,
        requested: &'static str,
    },
    #[error("`{name}` is a {found}, expected {expected}")]
    KindMismatch {
        name: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("invalid name `{0}`")]
    InvalidName(String),
    #[error("`{0}` is reserved")]
    ReservedName(String),
    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: String, hi: String },
    #[error("OneOf needs at least one literal")]
    EmptyOneOf,
    #[error("ObjectIntersectionOf needs at least two operands")]
    ShortIntersection,
    #[error("property `{0}` already has a domain")]
    MultipleDomains(String),
    #[error("property `{0}` already has a range")]
    MultipleRanges(String),
    #[error("two widget rules share priority {0}")]
    DuplicateRulePriority(i64),
    #[error("second value for `{prop}` on `{individual}`")]
    DuplicateDataAssertion { prop: String, individual: String },
    #[error("value {value} for `{prop}` on `{individual}` violates the declared range")]
    RangeViolation {
        prop: String,
        individual: String,
        value: String,
    },
}

impl ModelError {
    pub fn category(&self) -> &'static str {
        match self {
            ModelError::UndeclaredName(_) => "undeclared_name",
            ModelError::DuplicateDeclaration(_) => "duplicate_declaration",
            ModelError::KindConflict { .. } => "kind_conflict",
            ModelError::KindMismatch { .. } => "kind_mismatch",
            ModelError::InvalidName(_) | ModelError::ReservedName(_) => "invalid_name",
            ModelError::EmptyInterval { .. } => "empty_interval",
            ModelError::EmptyOneOf | ModelError::ShortIntersection => "syntax",
            ModelError::MultipleDomains(_) | ModelError::MultipleRanges(_) => "multiple_domain_or_range",
            ModelError::DuplicateRulePriority(_) => "duplicate_priority",
            ModelError::DuplicateDataAssertion { .. } => "duplicate_data_assertion",
            ModelError::RangeViolation { .. } => "range_violation",
        }
    }
}

/// 1-based position in a source document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{location}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub location: Location,
}

impl ParseError {
    pub fn syntax(location: Location, message: impl Into<String>) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Syntax(message.into()),
            location,
        }
    }

    pub fn model(location: Location, error: ModelError) -> ParseError {
        ParseError {
            kind: ParseErrorKind::Model(error),
            location,
        }
    }

    pub fn category(&self) -> &'static str {
        match &self.kind {
            ParseErrorKind::Syntax(_) => "syntax",
            ParseErrorKind::Model(e) => e.category(),
        }
    }
}

/// Errors raised by reasoning, decision, form and session operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("unknown individual `{0}`")]
    UnknownIndividual(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("unknown ontology `{0}`")]
    UnknownOntology(String),
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("`{0}` is not among the recommended treatments")]
    NotRecommended(String),
    #[error("property `{0}` is not visible for the edited instance")]
    PropertyNotVisible(String),
    #[error("invalid value for `{prop}`: {message}")]
    InvalidValue { prop: String, message: String },
    #[error("invalid decision configuration: {0}")]
    DecisionConfig(String),
    #[error("ui config `{0}` extends itself")]
    CyclicExtends(String),
    #[error("unknown ui config `{0}`")]
    UnknownUiConfig(String),
    #[error("unknown widget `{0}`")]
    UnknownWidget(String),
    #[error("journal line {line}: {message}")]
    Journal { line: usize, message: String },
    #[error("session limit of {0} reached")]
    SessionLimit(usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parse(e) => e.category(),
            Error::Model(e) => e.category(),
            Error::UnknownIndividual(_) => "unknown_individual",
            Error::UnknownClass(_) => "unknown_class",
            Error::UnknownProperty(_) => "unknown_property",
            Error::UnknownOntology(_) => "unknown_ontology",
            Error::UnknownSession(_) => "unknown_session",
            Error::NotRecommended(_) => "not_recommended",
            Error::PropertyNotVisible(_) => "property_not_visible",
            Error::InvalidValue { .. } => "range_violation",
            Error::DecisionConfig(_) => "decision_config",
            Error::CyclicExtends(_) => "cyclic_extends",
            Error::UnknownUiConfig(_) => "unknown_ui_config",
            Error::UnknownWidget(_) => "unknown_widget",
            Error::Journal { .. } => "corrupt_journal",
            Error::SessionLimit(_) => "session_limit",
            Error::Io(_) => "io",
        }
    }

    pub fn location(&self) -> Option<Location> {
        match self {
            Error::Parse(e) => Some(e.location),
            Error::Journal { line, .. } => Some(Location { line: *line, column: 1 }),
            _ => None,
        }
    }

    /// True for faults caused by the caller's input rather than the engine.
    pub fn is_client_fault(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
