use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Location, ModelError, ParseError, Result};
use crate::ontology::syntax::{read_forms, Form, Node, Token};

/// Range kinds a widget rule can match on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RangeCondition {
    /// Data property with a `OneOf` range.
    Enum,
    /// Data property with an `Interval` range.
    Numeric,
    /// Data property with a `BoolEq` range.
    Boolean,
    /// Any object property.
    Object,
    /// Every property.
    Any,
}

impl RangeCondition {
    fn keyword(self) -> &'static str {
        match self {
            RangeCondition::Enum => "EnumRange",
            RangeCondition::Numeric => "NumericRange",
            RangeCondition::Boolean => "BooleanRange",
            RangeCondition::Object => "ObjectRange",
            RangeCondition::Any => "Any",
        }
    }

    fn from_keyword(s: &str) -> Option<RangeCondition> {
        Some(match s {
            "EnumRange" => RangeCondition::Enum,
            "NumericRange" => RangeCondition::Numeric,
            "BooleanRange" => RangeCondition::Boolean,
            "ObjectRange" => RangeCondition::Object,
            "Any" => RangeCondition::Any,
            _ => return None,
        })
    }
}

impl fmt::Display for RangeCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidgetRule {
    /// Higher wins.
    pub priority: i64,
    pub condition: RangeCondition,
    pub widget: String,
}

/// One configuration document: a widget catalog, selection rules and
/// per-property bindings, optionally extending another configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UiConfig {
    pub name: String,
    pub extends: Option<String>,
    pub widgets: BTreeMap<String, String>,
    pub rules: Vec<WidgetRule>,
    pub bindings: BTreeMap<String, String>,
}

pub const DEFAULT_CONFIG_NAME: &str = "default";
pub const FALLBACK_WIDGET: &str = "TextField";

/// The configuration every other one ultimately refines.
pub const DEFAULT_UI_CONFIG: &str = r#"UiConfig(default)
Widget(Checkbox "hibou.widgets.Checkbox")
Widget(Dropdown "hibou.widgets.Dropdown")
Widget(InstancePicker "hibou.widgets.InstancePicker")
Widget(NumberField "hibou.widgets.NumberField")
Widget(RadioGroup "hibou.widgets.RadioGroup")
Widget(TextField "hibou.widgets.TextField")
WidgetRule(10 EnumRange Dropdown)
WidgetRule(9 NumericRange NumberField)
WidgetRule(8 BooleanRange Checkbox)
WidgetRule(7 ObjectRange InstancePicker)
WidgetRule(0 Any TextField)
"#;

pub fn default_ui_config() -> UiConfig {
    parse_ui_config(DEFAULT_UI_CONFIG).expect("built-in configuration parses")
}

fn name_arg(node: &Node) -> Result<String, ParseError> {
    match node {
        Node::Atom(s) => match &s.token {
            Token::Ident(n) => Ok(n.clone()),
            _ => Err(ParseError::syntax(s.location, "expected a name")),
        },
        Node::Form(f) => Err(ParseError::syntax(f.location, "expected a name")),
    }
}

fn arity(form: &Form, n: usize) -> Result<(), ParseError> {
    form.expect_arity(n)
}

/// Parses a `.uicfg.hfs` document.
pub fn parse_ui_config(text: &str) -> Result<UiConfig, ParseError> {
    let forms = read_forms(text)?;
    let mut name: Option<String> = None;
    let mut extends = None;
    let mut widgets = BTreeMap::new();
    let mut rules: Vec<WidgetRule> = Vec::new();
    let mut priorities = BTreeSet::new();
    let mut bindings = BTreeMap::new();

    for form in &forms {
        match form.head.as_str() {
            "UiConfig" => {
                arity(form, 1)?;
                if name.is_some() {
                    return Err(ParseError::syntax(form.location, "second UiConfig header"));
                }
                name = Some(name_arg(&form.args[0])?);
            }
            "Extends" => {
                arity(form, 1)?;
                if extends.is_some() {
                    return Err(ParseError::syntax(form.location, "a configuration extends at most one parent"));
                }
                extends = Some(name_arg(&form.args[0])?);
            }
            "Widget" => {
                arity(form, 2)?;
                let widget = name_arg(&form.args[0])?;
                let hint = match &form.args[1] {
                    Node::Atom(s) => match &s.token {
                        Token::Str(h) => h.clone(),
                        _ => return Err(ParseError::syntax(s.location, "expected a quoted implementation hint")),
                    },
                    Node::Form(f) => return Err(ParseError::syntax(f.location, "expected a quoted implementation hint")),
                };
                if widgets.insert(widget.clone(), hint).is_some() {
                    return Err(ParseError::model(form.location, ModelError::DuplicateDeclaration(widget)));
                }
            }
            "WidgetRule" => {
                arity(form, 3)?;
                let priority = match &form.args[0] {
                    Node::Atom(s) => match &s.token {
                        Token::Number(n) if n.is_finite() && n.value().fract() == 0.0 && n.value().abs() < 1e15 => {
                            n.value() as i64
                        }
                        _ => return Err(ParseError::syntax(s.location, "priority must be an integer")),
                    },
                    Node::Form(f) => return Err(ParseError::syntax(f.location, "priority must be an integer")),
                };
                let kw = name_arg(&form.args[1])?;
                let condition = RangeCondition::from_keyword(&kw).ok_or_else(|| {
                    ParseError::syntax(form.args[1].location(), format!("unknown rule condition `{kw}`"))
                })?;
                let widget = name_arg(&form.args[2])?;
                if !priorities.insert(priority) {
                    return Err(ParseError::model(form.location, ModelError::DuplicateRulePriority(priority)));
                }
                rules.push(WidgetRule {
                    priority,
                    condition,
                    widget,
                });
            }
            "BindWidget" => {
                arity(form, 2)?;
                let prop = name_arg(&form.args[0])?;
                let widget = name_arg(&form.args[1])?;
                if bindings.insert(prop.clone(), widget).is_some() {
                    return Err(ParseError::model(form.location, ModelError::DuplicateDeclaration(prop)));
                }
            }
            other => {
                return Err(ParseError::syntax(form.location, format!("unknown construct `{other}`")));
            }
        }
    }
    let name = name.ok_or_else(|| ParseError::syntax(Location { line: 1, column: 1 }, "missing UiConfig header"))?;
    Ok(UiConfig {
        name,
        extends,
        widgets,
        rules,
        bindings,
    })
}

impl fmt::Display for UiConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "UiConfig({})", self.name)?;
        if let Some(parent) = &self.extends {
            writeln!(f, "Extends({parent})")?;
        }
        for (w, hint) in &self.widgets {
            write!(f, "Widget({w} ")?;
            crate::ontology::write_quoted(f, hint)?;
            writeln!(f, ")")?;
        }
        for r in &self.rules {
            writeln!(f, "WidgetRule({} {} {})", r.priority, r.condition, r.widget)?;
        }
        for (p, w) in &self.bindings {
            writeln!(f, "BindWidget({p} {w})")?;
        }
        Ok(())
    }
}

/// A rule after flattening; `depth` 0 is the resolved configuration itself,
/// 1 its parent, and so on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedRule {
    pub priority: i64,
    pub condition: RangeCondition,
    pub widget: String,
    pub depth: usize,
}

/// A configuration with its `Extends` chain folded in. Rules are ordered
/// from strongest to weakest: higher priority first, and on equal priority
/// the more derived configuration first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedUiConfig {
    pub name: String,
    pub widgets: BTreeMap<String, String>,
    pub rules: Vec<ResolvedRule>,
    pub bindings: BTreeMap<String, String>,
}

impl ResolvedUiConfig {
    pub fn impl_hint<'a>(&'a self, widget: &'a str) -> &'a str {
        self.widgets.get(widget).map(String::as_str).unwrap_or(widget)
    }
}

/// Named configurations, always including the built-in default.
#[derive(Debug, Clone)]
pub struct UiConfigSet {
    configs: HashMap<String, UiConfig>,
}

impl Default for UiConfigSet {
    fn default() -> Self {
        let mut configs = HashMap::new();
        let d = default_ui_config();
        configs.insert(d.name.clone(), d);
        UiConfigSet { configs }
    }
}

impl UiConfigSet {
    /// Registers a configuration, replacing any previous one with that name.
    pub fn insert(&mut self, config: UiConfig) {
        self.configs.insert(config.name.clone(), config);
    }

    pub fn get(&self, name: &str) -> Option<&UiConfig> {
        self.configs.get(name)
    }

    pub fn resolve(&self, name: &str) -> Result<ResolvedUiConfig> {
        let mut chain: Vec<&UiConfig> = Vec::new();
        let mut seen = BTreeSet::new();
        let mut next = Some(name.to_string());
        while let Some(current) = next {
            if !seen.insert(current.clone()) {
                return Err(Error::CyclicExtends(current));
            }
            let cfg = self
                .configs
                .get(&current)
                .ok_or_else(|| Error::UnknownUiConfig(current.clone()))?;
            chain.push(cfg);
            next = cfg.extends.clone();
        }

        let mut widgets = BTreeMap::new();
        let mut bindings = BTreeMap::new();
        let mut rules = Vec::new();
        for (depth, cfg) in chain.iter().enumerate().rev() {
            widgets.extend(cfg.widgets.iter().map(|(k, v)| (k.clone(), v.clone())));
            bindings.extend(cfg.bindings.iter().map(|(k, v)| (k.clone(), v.clone())));
            rules.extend(cfg.rules.iter().map(|r| ResolvedRule {
                priority: r.priority,
                condition: r.condition,
                widget: r.widget.clone(),
                depth,
            }));
        }
        rules.sort_by(|a, b| b.priority.cmp(&a.priority).then(a.depth.cmp(&b.depth)));

        for w in rules.iter().map(|r| &r.widget).chain(bindings.values()) {
            if !widgets.contains_key(w) {
                return Err(Error::UnknownWidget(w.clone()));
            }
        }
        Ok(ResolvedUiConfig {
            name: name.to_string(),
            widgets,
            rules,
            bindings,
        })
    }
}

/// Flattens a single configuration against the built-in default.
pub fn resolve_config(config: &UiConfig) -> Result<ResolvedUiConfig> {
    let mut set = UiConfigSet::default();
    set.insert(config.clone());
    set.resolve(&config.name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_resolves_to_itself() {
        let d = default_ui_config();
        let r = resolve_config(&d).unwrap();
        assert_eq!(r.widgets, d.widgets);
        assert_eq!(r.bindings, d.bindings);
        let flat: Vec<WidgetRule> = r
            .rules
            .iter()
            .map(|x| WidgetRule {
                priority: x.priority,
                condition: x.condition,
                widget: x.widget.clone(),
            })
            .collect();
        assert_eq!(flat, d.rules);
        assert_eq!(parse_ui_config(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn child_overrides_bindings_and_outranks_rules() {
        let mut set = UiConfigSet::default();
        let mut mid = parse_ui_config("UiConfig(mid) Extends(default) BindWidget(age NumberField)").unwrap();
        set.insert(mid.clone());
        set.insert(
            parse_ui_config(
                "UiConfig(child) Extends(mid) Widget(Slider \"x.Slider\") BindWidget(age Slider) \
                 WidgetRule(100 EnumRange RadioGroup) WidgetRule(9 NumericRange Slider)",
            )
            .unwrap(),
        );
        assert_eq!(set.resolve("mid").unwrap().bindings["age"], "NumberField");
        let r = set.resolve("child").unwrap();
        assert_eq!(r.bindings["age"], "Slider");
        assert_eq!(r.widgets.len(), 7);
        assert_eq!(r.rules[0].widget, "RadioGroup");
        // priority tie with the default's numeric rule: child first
        let nine: Vec<&str> = r.rules.iter().filter(|x| x.priority == 9).map(|x| x.widget.as_str()).collect();
        assert_eq!(nine, ["Slider", "NumberField"]);

        mid.extends = Some("child".into());
        set.insert(mid);
        assert!(matches!(set.resolve("child"), Err(Error::CyclicExtends(_))));
    }

    #[test]
    fn unknown_widget_and_parent() {
        let bad = parse_ui_config("UiConfig(x) Extends(default) BindWidget(age Sparkline)").unwrap();
        assert!(matches!(resolve_config(&bad), Err(Error::UnknownWidget(_))));
        let orphan = parse_ui_config("UiConfig(x) Extends(nowhere)").unwrap();
        assert!(matches!(resolve_config(&orphan), Err(Error::UnknownUiConfig(_))));
    }

    #[test]
    fn parse_errors() {
        let dup = parse_ui_config("UiConfig(x) Widget(A \"a\") WidgetRule(1 Any A) WidgetRule(1 EnumRange A)");
        assert_eq!(dup.unwrap_err().category(), "duplicate_priority");
        assert_eq!(parse_ui_config("Widget(A \"a\")").unwrap_err().category(), "syntax");
        assert_eq!(
            parse_ui_config("UiConfig(x) WidgetRule(1.5 Any A)").unwrap_err().category(),
            "syntax"
        );
        assert_eq!(
            parse_ui_config("UiConfig(x) WidgetRule(1 Sometimes A)").unwrap_err().category(),
            "syntax"
        );
    }
}
