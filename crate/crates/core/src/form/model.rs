use std::fmt::Write;

use serde::Serialize;

use crate::decision::{recommend, DecisionConfig, Recommendation};
use crate::error::Result;
use crate::form::ResolvedUiConfig;
use crate::form::{choose_widget, visible_properties};
use crate::ontology::{Facet, Number, Ontology};
use crate::reasoner::Taxonomy;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumericRange {
    pub lo: String,
    pub hi: String,
}

impl NumericRange {
    fn new(lo: Number, hi: Number) -> NumericRange {
        NumericRange {
            lo: lo.to_string(),
            hi: hi.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub property: String,
    pub widget: String,
    pub impl_hint: String,
    pub label: String,
    /// Current value(s); empty when unset. Object properties may hold several.
    pub values: Vec<String>,
    /// Present for enumerated and object ranges.
    pub options: Option<Vec<String>>,
    /// Present for numeric ranges.
    pub range: Option<NumericRange>,
}

/// The view model for one edited individual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormModel {
    pub instance: String,
    pub components: Vec<Component>,
    pub recommendations: Recommendation,
}

/// Assembles the form for `individual`: one component per visible property
/// except the recommendation property, plus the current recommendations.
pub fn build_form(
    t: &Taxonomy,
    o: &Ontology,
    cfg: &ResolvedUiConfig,
    decision: &DecisionConfig,
    individual: &str,
) -> Result<FormModel> {
    let recommendations = recommend(t, decision, individual)?;
    let mut components = Vec::new();
    for prop in visible_properties(t, o, individual)? {
        if prop == decision.reco_prop {
            continue;
        }
        let choice = choose_widget(cfg, o, &prop);
        let (values, options, range) = if o.object_properties().contains(&prop) {
            let values = o
                .abox()
                .object_values(&prop, individual)
                .into_iter()
                .map(str::to_string)
                .collect();
            // object ranges are always Thing, so every named individual qualifies
            let options = t.individual_names().map(str::to_string).collect();
            (values, Some(options), None)
        } else {
            let values = o
                .abox()
                .data_value(&prop, individual)
                .map(|v| vec![v.plain()])
                .unwrap_or_default();
            match o.range(&prop) {
                Some(Facet::OneOf(set)) => (values, Some(set.iter().cloned().collect()), None),
                Some(Facet::Interval { lo, hi }) => (values, None, Some(NumericRange::new(*lo, *hi))),
                _ => (values, None, None),
            }
        };
        components.push(Component {
            label: prop.clone(),
            property: prop,
            widget: choice.widget,
            impl_hint: choice.impl_hint,
            values,
            options,
            range,
        });
    }
    Ok(FormModel {
        instance: individual.to_string(),
        components,
        recommendations,
    })
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Renders the form document: UTF-8, LF line ends, two-space indentation.
pub fn emit_xml(f: &FormModel) -> String {
    let mut x = String::new();
    // writing into a String cannot fail
    let _ = writeln!(x, "<form instance=\"{}\">", escape(&f.instance));
    if f.components.is_empty() {
        x.push_str("  <components/>\n");
    } else {
        x.push_str("  <components>\n");
        for c in &f.components {
            let _ = writeln!(
                x,
                "    <component property=\"{}\" widget=\"{}\" impl=\"{}\">",
                escape(&c.property),
                escape(&c.widget),
                escape(&c.impl_hint)
            );
            let _ = writeln!(x, "      <label>{}</label>", escape(&c.label));
            for v in &c.values {
                let _ = writeln!(x, "      <value>{}</value>", escape(v));
            }
            match &c.options {
                Some(opts) if opts.is_empty() => x.push_str("      <options/>\n"),
                Some(opts) => {
                    x.push_str("      <options>");
                    for o in opts {
                        let _ = write!(x, "<option>{}</option>", escape(o));
                    }
                    x.push_str("</options>\n");
                }
                None => {}
            }
            if let Some(r) = &c.range {
                let _ = writeln!(x, "      <range kind=\"numeric\" lo=\"{}\" hi=\"{}\"/>", r.lo, r.hi);
            }
            x.push_str("    </component>\n");
        }
        x.push_str("  </components>\n");
    }
    x.push_str(&recommendations_xml(&f.recommendations, 1));
    x.push_str("</form>\n");
    x
}

/// `<recommendations>` element indented by `level` steps of two spaces.
pub fn recommendations_xml(r: &Recommendation, level: usize) -> String {
    let pad = "  ".repeat(level);
    if r.groups.is_empty() {
        return format!("{pad}<recommendations/>\n");
    }
    let mut x = format!("{pad}<recommendations>\n");
    for g in &r.groups {
        let _ = write!(x, "{pad}  <group>");
        for class in &g.classes {
            let _ = write!(x, "<treatment class=\"{}\"/>", escape(class));
        }
        x.push_str("</group>\n");
    }
    let _ = writeln!(x, "{pad}</recommendations>");
    x
}
