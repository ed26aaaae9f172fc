//! HTTP portal and command line for the hibou decision-support engine.

pub mod cli;
pub mod config;
pub mod http;

pub use http::router;
