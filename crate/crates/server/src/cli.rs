//! The `hibou` command line. Every subcommand goes through the same library
//! calls as the HTTP routes, so outputs match the server byte for byte.

use std::ffi::OsString;
use std::fs;
use std::io::{self, IsTerminal, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use hibou_core::decision::{recommend, DecisionConfig};
use hibou_core::form::{build_form, emit_xml, parse_ui_config, recommendations_xml, FormModel, UiConfigSet};
use hibou_core::ontology::{merge, parse_ontology, Ontology};
use hibou_core::portal::{replay_journal, KnowledgeBase, Portal, PortalOptions, DEFAULT_SESSION_LIMIT};
use hibou_core::query::{answer, parse_query};
use hibou_core::Error;

use crate::config::{load_config, load_ui_configs, parse_port, ServerConfig};
use crate::http::{describe, load_ontology_dir, router};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "hibou", version, about = "Ontology-driven decision support")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Ontologies {
    /// Ontology file; repeat to merge several, the first one names the result.
    #[arg(short = 'o', long = "ontology", value_name = "FILE", required = true)]
    files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Target {
    /// Existing individual to evaluate.
    #[arg(short = 'i', long = "instance", value_name = "NAME")]
    instance: Option<String>,
    /// Session journal to replay.
    #[arg(long, value_name = "FILE")]
    journal: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Decision {
    #[arg(long, value_name = "CLASS", default_value = "Patient")]
    patient: String,
    #[arg(long, value_name = "CLASS", default_value = "Treatment")]
    treatment: String,
    #[arg(long, value_name = "PROP", default_value = "reco")]
    reco: String,
}

impl Decision {
    fn config(&self) -> DecisionConfig {
        DecisionConfig {
            patient_class: self.patient.clone(),
            treatment_class: self.treatment.clone(),
            reco_prop: self.reco.clone(),
        }
    }
}

#[derive(Args, Debug)]
struct Output {
    /// Write the document here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the class hierarchy.
    Classify {
        #[command(flatten)]
        ontologies: Ontologies,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Print the most specific recommended treatments.
    Recommend {
        #[command(flatten)]
        ontologies: Ontologies,
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        decision: Decision,
        #[arg(long)]
        xml: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Print the form document for an instance.
    Form {
        #[command(flatten)]
        ontologies: Ontologies,
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        decision: Decision,
        /// UI configuration file; repeatable, the last one is active.
        #[arg(long = "ui-config", value_name = "FILE")]
        ui_config: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Answer a conjunctive query.
    Query {
        #[command(flatten)]
        ontologies: Ontologies,
        #[arg(short = 'q', long = "query", value_name = "TEXT")]
        query: String,
        #[command(flatten)]
        output: Output,
    },
    /// Check ontology and UI configuration files.
    Validate {
        #[arg(short = 'o', long = "ontology", value_name = "FILE")]
        files: Vec<PathBuf>,
        #[arg(long = "ui-config", value_name = "FILE")]
        ui_config: Vec<PathBuf>,
    },
    /// Run the HTTP portal.
    Serve {
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
        #[arg(long, value_name = "PORT", value_parser = parse_port)]
        port: Option<u16>,
        /// Extra ontology file to load, named by its file stem.
        #[arg(short = 'o', long = "ontology", value_name = "FILE")]
        files: Vec<PathBuf>,
    },
}

/// A failure with its exit code; the message goes to standard error.
struct Failure {
    code: i32,
    message: String,
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_client_fault() { EXIT_INPUT } else { EXIT_INTERNAL },
            message: describe(&e),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_merged(files: &[PathBuf]) -> Result<Ontology, Failure> {
    let mut merged: Option<Ontology> = None;
    for path in files {
        let o = parse_ontology(&read(path)?).map_err(|e| input(format!("{}:{}", path.display(), describe(&e.into()))))?;
        merged = Some(match merged {
            None => o,
            Some(base) => merge(&base, &o).map_err(|e| input(format!("{}: {}", path.display(), describe(&e.into()))))?,
        });
    }
    Ok(merged.expect("clap requires at least one file"))
}

fn emit(output: &Output, doc: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    let internal = |e: io::Error| Failure {
        code: EXIT_INTERNAL,
        message: format!("write failed: {e}"),
    };
    match &output.out {
        Some(path) => fs::write(path, doc).map_err(internal),
        None => {
            stdout.write_all(doc.as_bytes()).map_err(internal)?;
            // keep the prompt on its own line without changing piped bytes
            if !doc.ends_with('\n') && io::stdout().is_terminal() {
                stdout.write_all(b"\n").map_err(internal)?;
            }
            stdout.flush().map_err(internal)
        }
    }
}

fn form_for(
    kb: Arc<KnowledgeBase>,
    target: &Target,
    options: &PortalOptions,
) -> Result<FormModel, Failure> {
    match (&target.instance, &target.journal) {
        (Some(i), _) => Ok(build_form(&kb.taxonomy, &kb.ontology, &options.ui, &options.decision, i)?),
        (None, Some(path)) => Ok(replay_journal(kb, options, &read(path)?)?),
        (None, None) => unreachable!("clap enforces the target group"),
    }
}

fn options(decision: &Decision, ui: &[PathBuf]) -> Result<PortalOptions, Failure> {
    Ok(PortalOptions {
        ui: load_ui_configs(ui).map_err(input)?,
        decision: decision.config(),
        journal_dir: None,
        session_limit: DEFAULT_SESSION_LIMIT,
    })
}

fn validate(files: &[PathBuf], ui_config: &[PathBuf], stdout: &mut dyn Write) -> Result<bool, Failure> {
    if files.is_empty() && ui_config.is_empty() {
        return Err(input("validate needs at least one -o or --ui-config file"));
    }
    let mut problems = Vec::new();
    let mut parsed = Vec::new();
    for path in files {
        match parse_ontology(&read(path)?) {
            Ok(o) => parsed.push((path, o)),
            Err(e) => problems.push(format!("{}:{}", path.display(), describe(&e.into()))),
        }
    }
    if problems.is_empty() {
        let mut iter = parsed.into_iter();
        if let Some((_, mut acc)) = iter.next() {
            for (path, o) in iter {
                match merge(&acc, &o) {
                    Ok(m) => acc = m,
                    Err(e) => {
                        problems.push(format!("{}: {}", path.display(), describe(&e.into())));
                        break;
                    }
                }
            }
        }
    }
    let mut set = UiConfigSet::default();
    let mut names = Vec::new();
    for path in ui_config {
        match parse_ui_config(&read(path)?) {
            Ok(c) => {
                names.push((path, c.name.clone()));
                set.insert(c);
            }
            Err(e) => problems.push(format!("{}:{}", path.display(), describe(&e.into()))),
        }
    }
    for (path, name) in names {
        if let Err(e) = set.resolve(&name) {
            problems.push(format!("{}: {}", path.display(), describe(&e)));
        }
    }
    let doc = if problems.is_empty() {
        "OK\n".to_string()
    } else {
        problems.iter().map(|p| format!("{p}\n")).collect()
    };
    emit(&Output { out: None }, &doc, stdout)?;
    Ok(problems.is_empty())
}

fn serve(config: Option<&Path>, port: Option<u16>, files: &[PathBuf], stderr: &mut dyn Write) -> Result<(), Failure> {
    let mut cfg = match config {
        Some(p) => load_config(p).map_err(|e| input(e.to_string()))?,
        None => ServerConfig::default(),
    };
    if let Some(p) = port {
        cfg.port = p;
    }
    cfg.validate().map_err(|e| input(e.to_string()))?;
    let portal = Arc::new(Portal::new(cfg.portal_options().map_err(|e| input(e.to_string()))?));
    if let Some(dir) = &cfg.ontology_dir {
        for name in load_ontology_dir(&portal, dir).map_err(input)? {
            let _ = writeln!(stderr, "loaded ontology {name}");
        }
    }
    for path in files {
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        portal
            .load_ontology(Some(&name), &read(path)?)
            .map_err(|e| input(format!("{}:{}", path.display(), describe(&e))))?;
        let _ = writeln!(stderr, "loaded ontology {name}");
    }
    for (path, result) in portal.restore_all() {
        match result {
            Ok(info) => {
                let _ = writeln!(stderr, "restored session {}", info.id);
            }
            Err(e) => {
                let _ = writeln!(stderr, "skipped journal {}: {}", path.display(), describe(&e));
            }
        }
    }

    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure {
        code: EXIT_INTERNAL,
        message: format!("runtime: {e}"),
    })?;
    let addr = SocketAddr::from(([0, 0, 0, 0], cfg.port));
    let _ = writeln!(stderr, "listening on {addr}");
    runtime
        .block_on(async move {
            let listener = tokio::net::TcpListener::bind(addr).await?;
            axum::serve(listener, router(portal))
                .with_graceful_shutdown(async {
                    let _ = tokio::signal::ctrl_c().await;
                })
                .await
        })
        .map_err(|e| Failure {
            code: EXIT_INTERNAL,
            message: format!("server: {e}"),
        })
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Classify { ontologies, json, output } => {
            let kb = KnowledgeBase::new(load_merged(&ontologies.files)?);
            let doc = if json {
                kb.taxonomy.hierarchy_json()
            } else {
                kb.taxonomy.hierarchy_text()
            };
            emit(&output, &doc, stdout)?;
        }
        Command::Recommend {
            ontologies,
            target,
            decision,
            xml,
            output,
        } => {
            let kb = Arc::new(KnowledgeBase::new(load_merged(&ontologies.files)?));
            let rec = match &target.instance {
                Some(i) => recommend(&kb.taxonomy, &decision.config(), i)?,
                None => form_for(kb, &target, &options(&decision, &[])?)?.recommendations,
            };
            let doc = if xml {
                recommendations_xml(&rec, 0)
            } else {
                rec.to_json()
            };
            emit(&output, &doc, stdout)?;
        }
        Command::Form {
            ontologies,
            target,
            decision,
            ui_config,
            json,
            output,
        } => {
            let kb = Arc::new(KnowledgeBase::new(load_merged(&ontologies.files)?));
            let form = form_for(kb, &target, &options(&decision, &ui_config)?)?;
            let doc = if json {
                serde_json::to_string(&form).expect("form serializes")
            } else {
                emit_xml(&form)
            };
            emit(&output, &doc, stdout)?;
        }
        Command::Query {
            ontologies,
            query,
            output,
        } => {
            let kb = KnowledgeBase::new(load_merged(&ontologies.files)?);
            let q = parse_query(&query, &kb.ontology)?;
            emit(&output, &answer(&kb.taxonomy, &kb.ontology, &q)?.to_json(), stdout)?;
        }
        Command::Validate { files, ui_config } => {
            if !validate(&files, &ui_config, stdout)? {
                return Ok(EXIT_INPUT);
            }
        }
        Command::Serve { config, port, files } => serve(config.as_deref(), port, &files, stderr)?,
    }
    Ok(EXIT_OK)
}

/// Runs the command line with explicit streams; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_one() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["hibou", "recommend", "-o", "x.hfs"], &mut out, &mut err), EXIT_INPUT);
        assert_eq!(run(["hibou", "frobnicate"], &mut out, &mut err), EXIT_INPUT);
        assert_eq!(run(["hibou", "--help"], &mut out, &mut err), EXIT_OK);
    }
}
