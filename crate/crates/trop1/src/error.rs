//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TropError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero vector has no primitive direction")]
    ZeroVector,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("operation requires genus 1, curve has genus {0}")]
    GenusNotOne(u32),

    #[error("map is not balanced: vertex {vertex} has defect {defect}")]
    Unbalanced { vertex: String, defect: String },

    #[error("moduli cone of the type has empty relative interior: {0}")]
    InfeasibleCone(String),

    #[error("internal consistency violation: {0}")]
    InternalConsistency(String),

    #[error("mixed recession types: {0}")]
    MixedRecession(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
