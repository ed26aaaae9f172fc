use crate::error::Result;
use crate::form::config::{RangeCondition, ResolvedUiConfig, FALLBACK_WIDGET};
use crate::ontology::{Facet, Ontology};
use crate::reasoner::Taxonomy;

/// Properties whose domain the individual is entailed to belong to, sorted.
/// A property without a declared domain has domain `Thing`.
pub fn visible_properties(t: &Taxonomy, o: &Ontology, individual: &str) -> Result<Vec<String>> {
    let mut props: Vec<&String> = o.object_properties().iter().chain(o.data_properties()).collect();
    props.sort();
    let mut out = Vec::new();
    for p in props {
        if t.entails_instance(&o.effective_domain(p), individual)? {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// Kind of a property's range as seen by widget rules; `None` for a data
/// property without a declared range.
pub fn range_condition(o: &Ontology, prop: &str) -> Option<RangeCondition> {
    if o.object_properties().contains(prop) {
        return Some(RangeCondition::Object);
    }
    o.range(prop).map(|f| match f {
        Facet::Interval { .. } => RangeCondition::Numeric,
        Facet::OneOf(_) => RangeCondition::Enum,
        Facet::BoolEq(_) => RangeCondition::Boolean,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidgetChoice {
    pub widget: String,
    pub impl_hint: String,
}

/// Picks the widget for `prop`: an explicit binding, else the strongest
/// matching rule, else the text-field fallback.
pub fn choose_widget(cfg: &ResolvedUiConfig, o: &Ontology, prop: &str) -> WidgetChoice {
    let kind = range_condition(o, prop);
    let widget = cfg
        .bindings
        .get(prop)
        .or_else(|| {
            cfg.rules
                .iter()
                .find(|r| r.condition == RangeCondition::Any || Some(r.condition) == kind)
                .map(|r| &r.widget)
        })
        .map(String::as_str)
        .unwrap_or(FALLBACK_WIDGET);
    WidgetChoice {
        widget: widget.to_string(),
        impl_hint: cfg.impl_hint(widget).to_string(),
    }
}
