//! Form generation: which properties to show for an instance, which widget
//! renders each, and the XML document handed to the view.

mod config;
mod model;
mod select;

pub use config::{
    default_ui_config, parse_ui_config, resolve_config, RangeCondition, ResolvedRule, ResolvedUiConfig, UiConfig,
    UiConfigSet, WidgetRule, DEFAULT_CONFIG_NAME, DEFAULT_UI_CONFIG, FALLBACK_WIDGET,
};
pub use model::{build_form, emit_xml, recommendations_xml, Component, FormModel, NumericRange};
pub use select::{choose_widget, range_condition, visible_properties, WidgetChoice};
