//! Serializable wrappers shared by the command-line reports.

use serde::{Deserialize, Serialize};

use crate::planner::GmsVerdict;
use crate::ramification::{RamCheck, RamSequence};
use crate::SCHEMA_VERSION;

/// Top-level JSON object: `{"schema": 1, "command": .., "report": ..}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema: u32,
    pub command: String,
    pub report: T,
}

impl<T> Envelope<T> {
    pub fn new(command: &str, report: T) -> Self {
        Envelope { schema: SCHEMA_VERSION, command: command.to_string(), report }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub p: u64,
    pub n: usize,
    pub cfrak: i128,
    pub u1: i128,
    pub verdict: GmsVerdict,
}

/// Both sequences of a conversion with every inequality instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvertReport {
    pub sequence: RamSequence,
    pub checks: Vec<RamCheck>,
}
