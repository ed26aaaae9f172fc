//! The knowledge server: an ontology cache plus editing sessions that
//! re-reason from scratch after every change.

mod journal;

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use chrono::{DateTime, Utc};
use parking_lot::RwLock;
use serde::Serialize;

use crate::decision::{DecisionConfig, Recommendation};
use crate::error::{Error, Location, ParseError, Result};
use crate::form::{build_form, default_ui_config, emit_xml, resolve_config, FormModel, ResolvedUiConfig};
use crate::ontology::syntax::parse_number;
use crate::ontology::{parse_literal, parse_ontology, ClassExpr, Facet, Literal, NameKind, Ontology};
use crate::query::{answer, parse_query};
use crate::reasoner::{classify, Taxonomy};

pub use journal::{event_line, header_line, parse_journal, EventKind, JournalEvent, JournalHeader};

pub const DEFAULT_SESSION_LIMIT: usize = 1024;
pub const JOURNAL_EXTENSION: &str = "journal";

/// A parsed ontology with its saturation. Immutable once built.
#[derive(Debug)]
pub struct KnowledgeBase {
    pub ontology: Ontology,
    pub taxonomy: Taxonomy,
}

impl KnowledgeBase {
    pub fn new(ontology: Ontology) -> KnowledgeBase {
        let taxonomy = classify(&ontology);
        KnowledgeBase { ontology, taxonomy }
    }

    pub fn summary(&self, name: &str) -> OntologySummary {
        let roots = self
            .taxonomy
            .hierarchy()
            .iter()
            .filter(|n| n.parents.len() == 1 && n.parents[0] == crate::ontology::THING)
            .flat_map(|n| n.classes.iter().cloned())
            .collect();
        OntologySummary {
            name: name.to_string(),
            classes: self.ontology.classes().len(),
            object_properties: self.ontology.object_properties().len(),
            data_properties: self.ontology.data_properties().len(),
            axioms: self.ontology.axiom_count(),
            assertions: self.ontology.abox().assertion_count(),
            individuals: self.ontology.individuals().len(),
            roots,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OntologySummary {
    pub name: String,
    pub classes: usize,
    pub object_properties: usize,
    pub data_properties: usize,
    pub axioms: usize,
    pub assertions: usize,
    pub individuals: usize,
    /// Classes whose only direct parent is `Thing`.
    pub roots: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SessionValue {
    Data(Literal),
    Object(String),
}

impl SessionValue {
    fn journal_text(&self) -> String {
        match self {
            SessionValue::Data(l) => l.to_string(),
            SessionValue::Object(i) => i.clone(),
        }
    }
}

/// The derived state of a session, rebuilt after every accepted change.
#[derive(Debug)]
struct SessionState {
    ontology: Ontology,
    form: FormModel,
    xml: String,
}

#[derive(Debug)]
struct Session {
    id: String,
    ontology_name: String,
    base: Arc<KnowledgeBase>,
    instance: String,
    class: String,
    values: BTreeMap<String, SessionValue>,
    created: DateTime<Utc>,
    updated: DateTime<Utc>,
    journal: String,
    journal_path: Option<PathBuf>,
    state: SessionState,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SessionInfo {
    pub id: String,
    pub ontology: String,
    pub instance: String,
    pub class: String,
    pub created: DateTime<Utc>,
    pub updated: DateTime<Utc>,
}

impl Session {
    fn info(&self) -> SessionInfo {
        SessionInfo {
            id: self.id.clone(),
            ontology: self.ontology_name.clone(),
            instance: self.instance.clone(),
            class: self.class.clone(),
            created: self.created,
            updated: self.updated,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PortalOptions {
    pub ui: ResolvedUiConfig,
    pub decision: DecisionConfig,
    pub journal_dir: Option<PathBuf>,
    pub session_limit: usize,
}

impl Default for PortalOptions {
    fn default() -> Self {
        PortalOptions {
            ui: resolve_config(&default_ui_config()).expect("default config resolves"),
            decision: DecisionConfig::default(),
            journal_dir: None,
            session_limit: DEFAULT_SESSION_LIMIT,
        }
    }
}

/// Ontology cache and session store. Readers of an ontology see either the
/// old or the new knowledge base across a reload, never a mixture; writes
/// to one session are serialized by that session's lock.
pub struct Portal {
    options: PortalOptions,
    ontologies: RwLock<HashMap<String, Arc<KnowledgeBase>>>,
    sessions: RwLock<HashMap<String, Arc<RwLock<Session>>>>,
    counter: AtomicU64,
}

impl Default for Portal {
    fn default() -> Self {
        Portal::new(PortalOptions::default())
    }
}

fn rebuild(
    base: &KnowledgeBase,
    options: &PortalOptions,
    instance: &str,
    class: &str,
    values: &BTreeMap<String, SessionValue>,
) -> Result<SessionState> {
    let mut o = base.ontology.clone();
    o.assert_class(ClassExpr::atomic(class), instance)?;
    for (prop, v) in values {
        match v {
            SessionValue::Data(l) => o.set_data(prop, instance, l.clone())?,
            SessionValue::Object(j) => o.assert_object(prop, instance, j)?,
        }
    }
    let t = classify(&o);
    let form = build_form(&t, &o, &options.ui, &options.decision, instance)?;
    let xml = emit_xml(&form);
    Ok(SessionState { ontology: o, form, xml })
}

/// Reads free text as a value for a data property, guided by its range:
/// numbers for intervals, booleans for `BoolEq`, strings for `OneOf`, and
/// number, then boolean, then string when no range is declared.
pub fn coerce_data_value(o: &Ontology, prop: &str, text: &str) -> Result<Literal> {
    let invalid = |message: &str| Error::InvalidValue {
        prop: prop.to_string(),
        message: message.to_string(),
    };
    let trimmed = text.trim();
    let number = || parse_number(trimmed).map(Literal::Number);
    let boolean = || match trimmed {
        "true" => Some(Literal::Bool(true)),
        "false" => Some(Literal::Bool(false)),
        _ => None,
    };
    match o.range(prop) {
        Some(Facet::Interval { .. }) => number().ok_or_else(|| invalid(&format!("`{text}` is not a number"))),
        Some(Facet::BoolEq(_)) => boolean().ok_or_else(|| invalid(&format!("`{text}` is not a boolean"))),
        Some(Facet::OneOf(_)) => Ok(Literal::Str(text.to_string())),
        None => {
            if text.is_empty() {
                return Err(invalid("empty value"));
            }
            Ok(number().or_else(boolean).unwrap_or_else(|| Literal::Str(text.to_string())))
        }
    }
}

impl Portal {
    pub fn new(options: PortalOptions) -> Portal {
        Portal {
            options,
            ontologies: RwLock::new(HashMap::new()),
            sessions: RwLock::new(HashMap::new()),
            counter: AtomicU64::new(0),
        }
    }

    pub fn options(&self) -> &PortalOptions {
        &self.options
    }

    /// Parses, saturates and caches `text` under `name` (the document's own
    /// name when absent), replacing any previous ontology of that name in
    /// one step.
    pub fn load_ontology(&self, name: Option<&str>, text: &str) -> Result<OntologySummary> {
        if text.trim().is_empty() {
            return Err(ParseError::syntax(Location { line: 1, column: 1 }, "empty document").into());
        }
        let o = parse_ontology(text)?;
        let name = name.unwrap_or(o.name()).to_string();
        Ok(self.insert_ontology(&name, o))
    }

    pub fn insert_ontology(&self, name: &str, o: Ontology) -> OntologySummary {
        let kb = Arc::new(KnowledgeBase::new(o));
        let summary = kb.summary(name);
        self.ontologies.write().insert(name.to_string(), kb);
        summary
    }

    pub fn knowledge_base(&self, name: &str) -> Result<Arc<KnowledgeBase>> {
        self.ontologies
            .read()
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownOntology(name.to_string()))
    }

    pub fn ontology_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.ontologies.read().keys().cloned().collect();
        names.sort();
        names
    }

    pub fn taxonomy_text(&self, name: &str) -> Result<String> {
        Ok(self.knowledge_base(name)?.taxonomy.hierarchy_text())
    }

    /// Answers a conjunctive query; the result is a JSON array of solutions.
    pub fn query(&self, name: &str, text: &str) -> Result<String> {
        let kb = self.knowledge_base(name)?;
        let q = parse_query(text, &kb.ontology)?;
        Ok(answer(&kb.taxonomy, &kb.ontology, &q)?.to_json())
    }

    fn fresh_instance(&self, o: &Ontology) -> String {
        loop {
            let n = self.counter.fetch_add(1, Ordering::Relaxed) + 1;
            let name = format!("case_{n}");
            if o.kind_of(&name).is_none() {
                return name;
            }
        }
    }

    fn session(&self, id: &str) -> Result<Arc<RwLock<Session>>> {
        self.sessions
            .read()
            .get(id)
            .cloned()
            .ok_or_else(|| Error::UnknownSession(id.to_string()))
    }

    fn register(&self, session: Session) -> Result<SessionInfo> {
        let mut sessions = self.sessions.write();
        if sessions.len() >= self.options.session_limit {
            return Err(Error::SessionLimit(self.options.session_limit));
        }
        let info = session.info();
        sessions.insert(session.id.clone(), Arc::new(RwLock::new(session)));
        Ok(info)
    }

    fn journal_path(&self, id: &str) -> Option<PathBuf> {
        self.options
            .journal_dir
            .as_ref()
            .map(|d| d.join(format!("{id}.{JOURNAL_EXTENSION}")))
    }

    /// Opens a session on a fresh individual asserted into `initial_class`,
    /// or the patient class when none is given.
    pub fn create_session(&self, ontology: &str, initial_class: Option<&str>) -> Result<SessionInfo> {
        if self.sessions.read().len() >= self.options.session_limit {
            return Err(Error::SessionLimit(self.options.session_limit));
        }
        let base = self.knowledge_base(ontology)?;
        self.options.decision.validate(&base.taxonomy)?;
        let class = initial_class.unwrap_or(&self.options.decision.patient_class).to_string();
        if !base.ontology.is_class(&class) {
            return Err(Error::UnknownClass(class));
        }
        let instance = self.fresh_instance(&base.ontology);
        let id = uuid::Uuid::new_v4().simple().to_string();
        let state = rebuild(&base, &self.options, &instance, &class, &BTreeMap::new())?;

        let now = journal::now();
        let mut text = header_line(&JournalHeader {
            id: id.clone(),
            ontology: ontology.to_string(),
            instance: instance.clone(),
        });
        if initial_class.is_some() {
            text.push_str(&event_line(&now, &EventKind::Class(class.clone())));
        }
        let journal_path = self.journal_path(&id);
        if let Some(path) = &journal_path {
            fs::write(path, &text)?;
        }
        self.register(Session {
            id,
            ontology_name: ontology.to_string(),
            base,
            instance,
            class,
            values: BTreeMap::new(),
            created: now,
            updated: now,
            journal: text,
            journal_path,
            state,
        })
    }

    pub fn session_info(&self, id: &str) -> Result<SessionInfo> {
        Ok(self.session(id)?.read().info())
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().len()
    }

    fn parse_value(&self, s: &Session, prop: &str, text: &str, from_journal: bool) -> Result<SessionValue> {
        let o = &s.state.ontology;
        match o.kind_of(prop) {
            Some(NameKind::DataProperty) => {
                let v = if from_journal {
                    parse_literal(text)?
                } else {
                    coerce_data_value(o, prop, text)?
                };
                Ok(SessionValue::Data(v))
            }
            Some(NameKind::ObjectProperty) => {
                let target = text.trim();
                if !o.individuals().contains(target) {
                    return Err(Error::UnknownIndividual(target.to_string()));
                }
                Ok(SessionValue::Object(target.to_string()))
            }
            _ => Err(Error::UnknownProperty(prop.to_string())),
        }
    }

    /// Checks and applies one value, returning the rebuilt state without
    /// touching the session.
    fn apply(&self, s: &Session, prop: &str, value: &SessionValue) -> Result<SessionState> {
        if !s.state.form.components.iter().any(|c| c.property == prop) {
            return Err(Error::PropertyNotVisible(prop.to_string()));
        }
        let mut values = s.values.clone();
        values.insert(prop.to_string(), value.clone());
        rebuild(&s.base, &self.options, &s.instance, &s.class, &values)
    }

    /// Records `prop = value` for the session's instance and returns the
    /// rebuilt form XML. A rejected write leaves the session unchanged.
    pub fn set_value(&self, id: &str, prop: &str, value: &str) -> Result<String> {
        let handle = self.session(id)?;
        let mut s = handle.write();
        let value = self.parse_value(&s, prop, value, false)?;
        let state = self.apply(&s, prop, &value)?;
        let now = journal::now();
        let line = event_line(
            &now,
            &EventKind::Set {
                prop: prop.to_string(),
                value: value.journal_text(),
            },
        );
        if let Some(path) = &s.journal_path {
            OpenOptions::new().append(true).open(path)?.write_all(line.as_bytes())?;
        }
        s.journal.push_str(&line);
        s.values.insert(prop.to_string(), value);
        s.updated = now;
        s.state = state;
        Ok(s.state.xml.clone())
    }

    pub fn form_xml(&self, id: &str) -> Result<String> {
        Ok(self.session(id)?.read().state.xml.clone())
    }

    pub fn form(&self, id: &str) -> Result<FormModel> {
        Ok(self.session(id)?.read().state.form.clone())
    }

    pub fn recommendations(&self, id: &str) -> Result<Recommendation> {
        Ok(self.session(id)?.read().state.form.recommendations.clone())
    }

    pub fn recommendations_json(&self, id: &str) -> Result<String> {
        Ok(self.recommendations(id)?.to_json())
    }

    pub fn journal_text(&self, id: &str) -> Result<String> {
        Ok(self.session(id)?.read().journal.clone())
    }

    /// Replays a journal into a new live session with the recorded id. The
    /// journal's ontology must already be loaded. Subsequent writes append
    /// to `path` when given.
    pub fn restore_journal(&self, text: &str, path: Option<&Path>) -> Result<SessionInfo> {
        let (header, events) = parse_journal(text)?;
        if self.sessions.read().contains_key(&header.id) {
            return Err(Error::Journal {
                line: 1,
                message: format!("session `{}` already exists", header.id),
            });
        }
        let at_line = |line: usize| {
            move |e: Error| Error::Journal {
                line,
                message: e.to_string(),
            }
        };
        let base = self.knowledge_base(&header.ontology).map_err(at_line(1))?;
        if base.ontology.kind_of(&header.instance).is_some() {
            return Err(Error::Journal {
                line: 1,
                message: format!("instance `{}` is not fresh", header.instance),
            });
        }
        let created = events.first().map_or_else(journal::now, |e| e.at);
        let class = self.options.decision.patient_class.clone();
        let state = rebuild(&base, &self.options, &header.instance, &class, &BTreeMap::new()).map_err(at_line(1))?;
        let mut s = Session {
            id: header.id.clone(),
            ontology_name: header.ontology.clone(),
            base,
            instance: header.instance.clone(),
            class,
            values: BTreeMap::new(),
            created,
            updated: created,
            journal: text.to_string(),
            journal_path: path.map(Path::to_path_buf),
            state,
        };
        for ev in &events {
            let wrap = at_line(ev.line);
            match &ev.kind {
                EventKind::Class(c) => {
                    if !s.base.ontology.is_class(c) {
                        return Err(wrap(Error::UnknownClass(c.clone())));
                    }
                    s.state = rebuild(&s.base, &self.options, &s.instance, c, &s.values).map_err(wrap)?;
                    s.class = c.clone();
                }
                EventKind::Set { prop, value } => {
                    let v = self.parse_value(&s, prop, value, true).map_err(at_line(ev.line))?;
                    s.state = self.apply(&s, prop, &v).map_err(wrap)?;
                    s.values.insert(prop.clone(), v);
                }
            }
            s.updated = ev.at;
        }
        self.register(s)
    }

    /// Restores every journal in the journal directory. Each entry reports
    /// the file and either the restored session or why it was skipped.
    pub fn restore_all(&self) -> Vec<(PathBuf, Result<SessionInfo>)> {
        let Some(dir) = &self.options.journal_dir else {
            return Vec::new();
        };
        let mut paths: Vec<PathBuf> = match fs::read_dir(dir) {
            Ok(entries) => entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == JOURNAL_EXTENSION))
                .collect(),
            Err(e) => return vec![(dir.clone(), Err(e.into()))],
        };
        paths.sort();
        paths
            .into_iter()
            .map(|p| {
                let r = fs::read_to_string(&p)
                    .map_err(Error::from)
                    .and_then(|text| self.restore_journal(&text, Some(&p)));
                (p, r)
            })
            .collect()
    }
}

/// Replays a journal against a knowledge base outside any portal and
/// returns the resulting form model.
pub fn replay_journal(base: Arc<KnowledgeBase>, options: &PortalOptions, journal: &str) -> Result<FormModel> {
    let (header, _) = parse_journal(journal)?;
    let portal = Portal::new(PortalOptions {
        journal_dir: None,
        session_limit: 1,
        ..options.clone()
    });
    portal.ontologies.write().insert(header.ontology.clone(), base);
    let info = portal.restore_journal(journal, None)?;
    portal.form(&info.id)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONC: &str = "Ontology(onc) Class(Patient) Class(Treatment) Class(Chemotherapy) \
        Class(GentleChemo) Class(ElderlyPatient) Class(Radiotherapy) Class(CancerPatient) \
        ObjectProperty(reco) DataProperty(age) DataProperty(tumorGrade) DataProperty(er) \
        DataPropertyDomain(age Patient) DataPropertyDomain(tumorGrade CancerPatient) \
        DataPropertyRange(age Interval(0 130)) DataPropertyRange(er OneOf(\"pos\" \"neg\")) \
        SubClassOf(Chemotherapy Treatment) SubClassOf(GentleChemo Chemotherapy) SubClassOf(Radiotherapy Treatment) \
        SubClassOf(CancerPatient Patient) \
        EquivalentClasses(ElderlyPatient ObjectIntersectionOf(Patient DataSomeValuesFrom(age Interval(70 +inf)))) \
        SubClassOf(ElderlyPatient ObjectSomeValuesFrom(reco GentleChemo)) \
        SubClassOf(Patient ObjectSomeValuesFrom(reco Treatment))";

    fn portal() -> Portal {
        let p = Portal::default();
        p.load_ontology(Some("onc"), ONC).unwrap();
        p
    }

    #[test]
    fn summary_counts_and_roots() {
        let s = portal().knowledge_base("onc").unwrap().summary("onc");
        assert_eq!(s.classes, 7);
        assert_eq!(s.data_properties, 3);
        assert_eq!(s.roots, ["Patient", "Treatment"]);
    }

    #[test]
    fn set_value_recomputes_and_overwrites() {
        let p = portal();
        let s = p.create_session("onc", None).unwrap();
        assert_eq!(p.recommendations_json(&s.id).unwrap(), r#"[["Treatment"]]"#);
        let xml = p.set_value(&s.id, "age", "76").unwrap();
        assert!(xml.contains("<treatment class=\"GentleChemo\"/>"));
        p.set_value(&s.id, "age", "60").unwrap();
        assert_eq!(p.recommendations_json(&s.id).unwrap(), r#"[["Treatment"]]"#);
    }

    #[test]
    fn rejected_writes_leave_state_unchanged() {
        let p = portal();
        let s = p.create_session("onc", None).unwrap();
        p.set_value(&s.id, "age", "50").unwrap();
        let before = (p.form_xml(&s.id).unwrap(), p.journal_text(&s.id).unwrap());
        for (prop, v, cat) in [
            ("age", "abc", "range_violation"),
            ("age", "200", "range_violation"),
            ("er", "maybe", "range_violation"),
            ("tumorGrade", "2", "property_not_visible"),
            ("reco", "x", "unknown_individual"),
            ("nope", "1", "unknown_property"),
        ] {
            assert_eq!(p.set_value(&s.id, prop, v).unwrap_err().category(), cat, "{prop}={v}");
        }
        assert_eq!(before, (p.form_xml(&s.id).unwrap(), p.journal_text(&s.id).unwrap()));
    }

    #[test]
    fn initial_class_controls_visibility() {
        let p = portal();
        let plain = p.create_session("onc", None).unwrap();
        let cancer = p.create_session("onc", Some("CancerPatient")).unwrap();
        assert_ne!(plain.id, cancer.id);
        assert_ne!(plain.instance, cancer.instance);
        assert!(!p.form_xml(&plain.id).unwrap().contains("tumorGrade"));
        assert!(p.form_xml(&cancer.id).unwrap().contains("property=\"tumorGrade\""));
        assert_eq!(p.create_session("onc", Some("Nope")).unwrap_err().category(), "unknown_class");
        assert_eq!(p.create_session("zzz", None).unwrap_err().category(), "unknown_ontology");
    }

    #[test]
    fn journal_replay_matches_live_state() {
        let p = portal();
        let s = p.create_session("onc", Some("CancerPatient")).unwrap();
        for (prop, v) in [("age", "76"), ("er", "pos"), ("tumorGrade", "3"), ("age", "65.5"), ("er", "a \"b\"\tc")] {
            let _ = p.set_value(&s.id, prop, v);
        }
        p.set_value(&s.id, "er", "neg").unwrap();
        let journal = p.journal_text(&s.id).unwrap();
        let kb = p.knowledge_base("onc").unwrap();
        assert_eq!(emit_xml(&replay_journal(kb, p.options(), &journal).unwrap()), p.form_xml(&s.id).unwrap());
        assert_eq!(
            p.restore_journal(&journal, None).unwrap_err().category(),
            "corrupt_journal"
        );
    }

    #[test]
    fn journal_errors_carry_line_numbers() {
        let p = portal();
        let bad = "session\tx\tonc\tcase_9\n2026-01-01T00:00:00Z\tset\tage\t500\n";
        let e = p.restore_journal(bad, None).unwrap_err();
        assert_eq!((e.category(), e.location().unwrap().line), ("corrupt_journal", 2));
    }

    #[test]
    fn journal_files_are_written_and_restored() {
        let dir = tempfile::tempdir().unwrap();
        let opts = PortalOptions {
            journal_dir: Some(dir.path().to_path_buf()),
            ..PortalOptions::default()
        };
        let p = Portal::new(opts.clone());
        p.load_ontology(Some("onc"), ONC).unwrap();
        let s = p.create_session("onc", None).unwrap();
        p.set_value(&s.id, "age", "80").unwrap();
        let live = p.form_xml(&s.id).unwrap();

        let q = Portal::new(opts);
        q.load_ontology(Some("onc"), ONC).unwrap();
        let restored = q.restore_all();
        assert_eq!(restored.len(), 1);
        let info = restored[0].1.as_ref().unwrap();
        assert_eq!(q.form_xml(&info.id).unwrap(), live);
        q.set_value(&info.id, "age", "20").unwrap();
        let text = fs::read_to_string(&restored[0].0).unwrap();
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn session_limit() {
        let p = Portal::new(PortalOptions {
            session_limit: 1,
            ..PortalOptions::default()
        });
        p.load_ontology(Some("onc"), ONC).unwrap();
        p.create_session("onc", None).unwrap();
        assert_eq!(p.create_session("onc", None).unwrap_err().category(), "session_limit");
    }

    #[test]
    fn reload_replaces_ontology() {
        let p = portal();
        p.load_ontology(Some("onc"), "Ontology(onc) Class(A)").unwrap();
        assert_eq!(p.taxonomy_text("onc").unwrap(), "Thing\nA: Thing\n");
        assert_eq!(p.load_ontology(Some("onc"), " \n").unwrap_err().category(), "syntax");
        assert_eq!(p.load_ontology(Some("onc"), "Ontology(e)").unwrap().classes, 0);
        assert_eq!(p.query("onc", "SubClassOf(?c, Thing)").unwrap(), "[]");
    }
}
