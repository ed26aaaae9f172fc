//! Server configuration: `key = value` lines, `#` starts a comment.
//!
//! ```text
//! port = 8080
//! ontology_dir = ./ontologies
//! ui_config = ./custom.uicfg.hfs
//! patient_class = Patient
//! treatment_class = Treatment
//! reco_prop = reco
//! journal_dir = ./journals
//! session_limit = 1024
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use hibou_core::decision::DecisionConfig;
use hibou_core::form::{parse_ui_config, ResolvedUiConfig, UiConfigSet, DEFAULT_CONFIG_NAME};
use hibou_core::portal::{PortalOptions, DEFAULT_SESSION_LIMIT};

pub const DEFAULT_PORT: u16 = 8080;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServerConfig {
    pub port: u16,
    pub ontology_dir: Option<PathBuf>,
    pub ui_config: Option<PathBuf>,
    pub decision: DecisionConfig,
    pub journal_dir: Option<PathBuf>,
    pub session_limit: usize,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            port: DEFAULT_PORT,
            ontology_dir: None,
            ui_config: None,
            decision: DecisionConfig::default(),
            journal_dir: None,
            session_limit: DEFAULT_SESSION_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.line {
            Some(l) => write!(f, "config line {l}: {}", self.message),
            None => write!(f, "config: {}", self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: Option<usize>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

/// Parses a config document. Relative paths resolve against `base`.
pub fn parse_config(text: &str, base: &Path) -> Result<ServerConfig, ConfigError> {
    let mut cfg = ServerConfig::default();
    for (k, raw) in text.lines().enumerate() {
        let line = Some(k + 1);
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(err(line, "expected `key = value`"));
        };
        let (key, value) = (key.trim(), value.trim());
        let path = || base.join(value);
        match key {
            "port" => cfg.port = parse_port(value).map_err(|m| err(line, m))?,
            "ontology_dir" => cfg.ontology_dir = Some(path()),
            "ui_config" => cfg.ui_config = Some(path()),
            "patient_class" => cfg.decision.patient_class = value.to_string(),
            "treatment_class" => cfg.decision.treatment_class = value.to_string(),
            "reco_prop" => cfg.decision.reco_prop = value.to_string(),
            "journal_dir" => cfg.journal_dir = Some(path()),
            "session_limit" => {
                cfg.session_limit = value
                    .parse()
                    .ok()
                    .filter(|&n| n > 0)
                    .ok_or_else(|| err(line, format!("invalid session_limit `{value}`")))?
            }
            other => return Err(err(line, format!("unknown key `{other}`"))),
        }
    }
    Ok(cfg)
}

pub fn parse_port(value: &str) -> Result<u16, String> {
    match value.parse::<u16>() {
        Ok(p) if p >= 1 => Ok(p),
        _ => Err(format!("port must be in 1..=65535, got `{value}`")),
    }
}

pub fn load_config(path: &Path) -> Result<ServerConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|e| err(None, format!("{}: {e}", path.display())))?;
    parse_config(&text, path.parent().unwrap_or(Path::new(".")))
}

/// Loads UI-config files in order and resolves the last one, or the
/// built-in default when none is given. Earlier files may serve as parents.
pub fn load_ui_configs(paths: &[PathBuf]) -> Result<ResolvedUiConfig, String> {
    let mut set = UiConfigSet::default();
    let mut active = DEFAULT_CONFIG_NAME.to_string();
    for p in paths {
        let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
        let cfg = parse_ui_config(&text).map_err(|e| format!("{}:{e}", p.display()))?;
        active = cfg.name.clone();
        set.insert(cfg);
    }
    set.resolve(&active).map_err(|e| e.to_string())
}

impl ServerConfig {
    /// Checks that every configured path exists.
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (key, p) in [
            ("ontology_dir", &self.ontology_dir),
            ("ui_config", &self.ui_config),
            ("journal_dir", &self.journal_dir),
        ] {
            if let Some(p) = p {
                if !p.exists() {
                    return Err(err(None, format!("{key} `{}` does not exist", p.display())));
                }
            }
        }
        Ok(())
    }

    pub fn portal_options(&self) -> Result<PortalOptions, ConfigError> {
        let ui_paths: Vec<PathBuf> = self.ui_config.iter().cloned().collect();
        Ok(PortalOptions {
            ui: load_ui_configs(&ui_paths).map_err(|m| err(None, m))?,
            decision: self.decision.clone(),
            journal_dir: self.journal_dir.clone(),
            session_limit: self.session_limit,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let cfg = parse_config(
            "# demo\nport = 9000\nontology_dir = onts\nreco_prop = recommends # trailing\nsession_limit=3\n",
            Path::new("/srv"),
        )
        .unwrap();
        assert_eq!(cfg.port, 9000);
        assert_eq!(cfg.ontology_dir, Some(PathBuf::from("/srv/onts")));
        assert_eq!(cfg.decision.reco_prop, "recommends");
        assert_eq!(cfg.decision.patient_class, "Patient");
        assert_eq!(cfg.session_limit, 3);
    }

    #[test]
    fn rejects_bad_lines() {
        let base = Path::new(".");
        assert_eq!(parse_config("port = 0", base).unwrap_err().line, Some(1));
        assert_eq!(parse_config("\nport = 70000", base).unwrap_err().line, Some(2));
        assert_eq!(parse_config("colour = red", base).unwrap_err().line, Some(1));
        assert_eq!(parse_config("just text", base).unwrap_err().line, Some(1));
        assert!(parse_config("session_limit = 0", base).is_err());
    }

    #[test]
    fn missing_paths_fail_validation() {
        let cfg = ServerConfig {
            journal_dir: Some(PathBuf::from("/definitely/not/here")),
            ..ServerConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
