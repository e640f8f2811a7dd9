//! IO companion to `rigiditylab-core`: JSON schemas for models and verdicts,
//! SVG figure rendering, report envelopes, seeded lemma suites, and the
//! command implementations behind the `rigiditylab` binary.

pub mod commands;
pub mod json;
pub mod report;
pub mod suites;
pub mod svg;
