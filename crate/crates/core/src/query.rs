//! Conjunctive queries over entailed facts.
//!
//! ```text
//! query := atom ("," atom)*
//! atom  := Type(term, class) | PropertyValue(term, prop, term-or-literal)
//!        | SubClassOf(class, class)
//! ```
//! Variables are written `?name`; every other term is a constant.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{Map, Value};

use crate::error::{Error, Location, ParseError, Result};
use crate::ontology::syntax::parse_number;
use crate::ontology::{ClassExpr, Literal, NameKind, Ontology};
use crate::reasoner::Taxonomy;

pub const MAX_VARIABLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarKind {
    Individual,
    Class,
    Literal,
}

impl VarKind {
    fn describe(self) -> &'static str {
        match self {
            VarKind::Individual => "individual",
            VarKind::Class => "class",
            VarKind::Literal => "literal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constant {
    Individual(String),
    Class(String),
    Literal(Literal),
}

impl Constant {
    pub fn to_json(&self) -> Value {
        match self {
            Constant::Individual(s) | Constant::Class(s) => Value::String(s.clone()),
            Constant::Literal(Literal::Str(s)) => Value::String(s.clone()),
            Constant::Literal(Literal::Bool(b)) => Value::Bool(*b),
            Constant::Literal(Literal::Number(n)) => {
                let v = n.value();
                // integral values print without a fraction; infinities have no JSON form
                if !n.is_finite() {
                    Value::String(n.to_string())
                } else if v.fract() == 0.0 && v.abs() < 9.0e15 {
                    Value::from(v as i64)
                } else {
                    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
                }
            }
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Individual(s) | Constant::Class(s) => f.write_str(s),
            Constant::Literal(l) => write!(f, "{l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    /// Variable name without the leading `?`.
    Var(String),
    Const(Constant),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Type(Term, Term),
    PropertyValue(Term, String, Term),
    SubClassOf(Term, Term),
}

impl Atom {
    fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Type(a, b) | Atom::SubClassOf(a, b) | Atom::PropertyValue(a, _, b) => vec![a, b],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub atoms: Vec<Atom>,
    /// Every variable with the kind its positions force, sorted by name.
    pub variables: BTreeMap<String, VarKind>,
}

pub type Solution = BTreeMap<String, Constant>;

/// Deduplicated solutions in sorted order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BindingSet {
    pub solutions: Vec<Solution>,
}

impl BindingSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn to_json_value(&self) -> Value {
        Value::Array(
            self.solutions
                .iter()
                .map(|s| Value::Object(s.iter().map(|(k, v)| (k.clone(), v.to_json())).collect::<Map<_, _>>()))
                .collect(),
        )
    }

    /// Compact JSON array of solution objects keyed by variable name.
    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }
}

impl FromIterator<Solution> for BindingSet {
    fn from_iter<I: IntoIterator<Item = Solution>>(iter: I) -> Self {
        let set: BTreeSet<Solution> = iter.into_iter().collect();
        BindingSet {
            solutions: set.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Number(String),
    Str(String),
    LParen,
    RParen,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Location)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    let ident_char = |c: char| c.is_ascii_alphanumeric() || c == '_';
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let loc = Location { line, column };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '(' | ')' | ',' => {
                bump!();
                out.push((
                    match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        _ => Tok::Comma,
                    },
                    loc,
                ));
            }
            '?' => {
                bump!();
                let mut name = String::new();
                while let Some(&c) = chars.peek().filter(|c| ident_char(**c)) {
                    name.push(c);
                    bump!();
                }
                if name.is_empty() || name.starts_with(|c: char| c.is_ascii_digit()) {
                    return Err(ParseError::syntax(loc, "expected a variable name after `?`"));
                }
                out.push((Tok::Var(name), loc));
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        None => return Err(ParseError::syntax(loc, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => match bump!() {
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some('r') => s.push('\r'),
                            Some(c @ ('"' | '\\')) => s.push(c),
                            _ => return Err(ParseError::syntax(loc, "invalid escape in string")),
                        },
                        Some(c) => s.push(c),
                    }
                }
                out.push((Tok::Str(s), loc));
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek().filter(|c| ident_char(**c) || matches!(c, '.' | '-' | '+')) {
                    s.push(c);
                    bump!();
                }
                out.push((Tok::Number(s), loc));
            }
            c if ident_char(c) => {
                let mut s = String::new();
                while let Some(&c) = chars.peek().filter(|c| ident_char(**c)) {
                    s.push(c);
                    bump!();
                }
                out.push((Tok::Ident(s), loc));
            }
            c => return Err(ParseError::syntax(loc, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Location)>,
    pos: usize,
    end: Location,
    o: &'a Ontology,
    vars: BTreeMap<String, VarKind>,
}

impl Parser<'_> {
    fn loc(&self) -> Location {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(Tok, Location)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let loc = self.loc();
        match self.next() {
            Some((t, _)) if t == want => Ok(()),
            _ => Err(ParseError::syntax(loc, format!("expected {what}"))),
        }
    }

    fn bind(&mut self, name: String, kind: VarKind, loc: Location) -> Result<Term, ParseError> {
        match self.vars.get(&name) {
            Some(&k) if k != kind => Err(ParseError::syntax(
                loc,
                format!("variable ?{name} used both as {} and {}", k.describe(), kind.describe()),
            )),
            Some(_) => Ok(Term::Var(name)),
            None => {
                if self.vars.len() == MAX_VARIABLES {
                    return Err(ParseError::syntax(loc, format!("more than {MAX_VARIABLES} variables")));
                }
                self.vars.insert(name.clone(), kind);
                Ok(Term::Var(name))
            }
        }
    }

    fn term(&mut self, kind: VarKind) -> Result<Term> {
        let loc = self.loc();
        match self.next() {
            Some((Tok::Var(v), _)) => Ok(self.bind(v, kind, loc)?),
            Some((Tok::Ident(name), _)) => match kind {
                VarKind::Class => {
                    if ClassExpr::atomic(&name) != ClassExpr::Thing && !self.o.is_class(&name) {
                        return Err(Error::UnknownClass(name));
                    }
                    Ok(Term::Const(Constant::Class(name)))
                }
                VarKind::Individual => {
                    if !self.o.individuals().contains(&name) {
                        return Err(Error::UnknownIndividual(name));
                    }
                    Ok(Term::Const(Constant::Individual(name)))
                }
                VarKind::Literal => match name.as_str() {
                    "true" => Ok(Term::Const(Constant::Literal(Literal::Bool(true)))),
                    "false" => Ok(Term::Const(Constant::Literal(Literal::Bool(false)))),
                    _ => Err(ParseError::syntax(loc, "expected a literal").into()),
                },
            },
            Some((Tok::Number(n), _)) if kind == VarKind::Literal => match parse_number(&n) {
                Some(v) => Ok(Term::Const(Constant::Literal(Literal::Number(v)))),
                None => Err(ParseError::syntax(loc, format!("invalid number `{n}`")).into()),
            },
            Some((Tok::Str(s), _)) if kind == VarKind::Literal => Ok(Term::Const(Constant::Literal(Literal::Str(s)))),
            _ => Err(ParseError::syntax(loc, format!("expected a variable or {} name", kind.describe())).into()),
        }
    }

    fn atom(&mut self) -> Result<Atom> {
        let loc = self.loc();
        let Some((Tok::Ident(head), _)) = self.next() else {
            return Err(ParseError::syntax(loc, "expected an atom").into());
        };
        self.expect(Tok::LParen, "`(`")?;
        let atom = match head.as_str() {
            "Type" => {
                let a = self.term(VarKind::Individual)?;
                self.expect(Tok::Comma, "`,`")?;
                Atom::Type(a, self.term(VarKind::Class)?)
            }
            "SubClassOf" => {
                let a = self.term(VarKind::Class)?;
                self.expect(Tok::Comma, "`,`")?;
                Atom::SubClassOf(a, self.term(VarKind::Class)?)
            }
            "PropertyValue" => {
                let a = self.term(VarKind::Individual)?;
                self.expect(Tok::Comma, "`,`")?;
                let ploc = self.loc();
                let prop = match self.next() {
                    Some((Tok::Ident(p), _)) => p,
                    _ => return Err(ParseError::syntax(ploc, "expected a property name").into()),
                };
                let kind = match self.o.kind_of(&prop) {
                    Some(NameKind::ObjectProperty) => VarKind::Individual,
                    Some(NameKind::DataProperty) => VarKind::Literal,
                    _ => return Err(Error::UnknownProperty(prop)),
                };
                self.expect(Tok::Comma, "`,`")?;
                Atom::PropertyValue(a, prop, self.term(kind)?)
            }
            other => return Err(ParseError::syntax(loc, format!("unknown atom `{other}`")).into()),
        };
        self.expect(Tok::RParen, "`)`")?;
        Ok(atom)
    }
}

/// Parses a query against the vocabulary of `o`.
pub fn parse_query(text: &str, o: &Ontology) -> Result<Query> {
    let toks = tokenize(text)?;
    let end = text.lines().enumerate().last().map_or(Location { line: 1, column: 1 }, |(i, l)| Location {
        line: i + 1,
        column: l.chars().count() + 1,
    });
    let mut p = Parser {
        toks,
        pos: 0,
        end,
        o,
        vars: BTreeMap::new(),
    };
    let mut atoms = vec![p.atom()?];
    while p.pos < p.toks.len() {
        p.expect(Tok::Comma, "`,` between atoms")?;
        atoms.push(p.atom()?);
    }
    Ok(Query {
        atoms,
        variables: p.vars,
    })
}

fn resolve<'a>(t: &'a Term, s: &'a Solution) -> Option<&'a Constant> {
    match t {
        Term::Const(c) => Some(c),
        Term::Var(v) => s.get(v),
    }
}

/// Whether `atom` is entailed once every term is bound.
pub fn atom_holds(t: &Taxonomy, atom: &Atom, s: &Solution) -> Result<bool> {
    let get = |term| resolve(term, s).expect("all terms bound");
    Ok(match atom {
        Atom::Type(a, c) => {
            let (Constant::Individual(i), Constant::Class(c)) = (get(a), get(c)) else {
                return Ok(false);
            };
            t.entails_instance(&ClassExpr::atomic(c), i)?
        }
        Atom::SubClassOf(a, b) => {
            let (Constant::Class(a), Constant::Class(b)) = (get(a), get(b)) else {
                return Ok(false);
            };
            t.entails_subclass(a, b)?
        }
        Atom::PropertyValue(a, p, b) => {
            let Constant::Individual(i) = get(a) else { return Ok(false) };
            match get(b) {
                Constant::Individual(j) => t.related_individuals(i, p)?.contains(j.as_str()),
                Constant::Literal(v) => t.data_values(i)?.iter().any(|(q, w)| q == p && w == v),
                Constant::Class(_) => false,
            }
        }
    })
}

/// Candidate values for a variable of the given kind: named individuals,
/// declared classes (not `Thing`), or every literal asserted in the ABox.
pub fn domain(t: &Taxonomy, o: &Ontology, kind: VarKind) -> Vec<Constant> {
    match kind {
        VarKind::Individual => t.individual_names().map(|s| Constant::Individual(s.into())).collect(),
        VarKind::Class => t.class_names().map(|s| Constant::Class(s.into())).collect(),
        VarKind::Literal => {
            let set: BTreeSet<&Literal> = o.abox().data_assertions().map(|(_, _, v)| v).collect();
            set.into_iter().map(|v| Constant::Literal(v.clone())).collect()
        }
    }
}

/// Nested-loop join in atom order: each atom extends the partial solutions
/// by enumerating its still-unbound variables.
pub fn answer(t: &Taxonomy, o: &Ontology, q: &Query) -> Result<BindingSet> {
    let mut partial: Vec<Solution> = vec![Solution::new()];
    for atom in &q.atoms {
        let mut next = Vec::new();
        for s in &partial {
            let unbound: Vec<&String> = atom
                .terms()
                .into_iter()
                .filter_map(|term| match term {
                    Term::Var(v) if !s.contains_key(v) => Some(v),
                    _ => None,
                })
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            extend(t, o, q, atom, s.clone(), &unbound, &mut next)?;
        }
        partial = next;
        if partial.is_empty() {
            break;
        }
    }
    Ok(partial.into_iter().collect())
}

fn extend(
    t: &Taxonomy,
    o: &Ontology,
    q: &Query,
    atom: &Atom,
    s: Solution,
    unbound: &[&String],
    out: &mut Vec<Solution>,
) -> Result<()> {
    let Some((var, rest)) = unbound.split_first() else {
        if atom_holds(t, atom, &s)? {
            out.push(s);
        }
        return Ok(());
    };
    for value in domain(t, o, q.variables[*var]) {
        let mut s = s.clone();
        s.insert((*var).clone(), value);
        extend(t, o, q, atom, s, rest, out)?;
    }
    Ok(())
}
