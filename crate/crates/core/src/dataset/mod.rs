//! Benchmark assembly and persistence.
//!
//! Turns realized problems into the JSONL instance format, applies the
//! augmentation and corruption transforms, verifies every stored answer
//! against the entailment engine, and reads/writes shards with a checksummed
//! manifest.

mod instance;
mod io;
mod transform;
mod verify;

pub use instance::{
    assemble_instance, Answer, InstanceMetadata, ProblemInstance, ProofStepRecord,
};
pub use io::{read_dataset, read_shard, write_dataset, DatasetManifest, ShardInfo};
pub use transform::{
    augment_step_decomposition, augment_uncertain_goal, corrupt_remove_universal,
    variant_no_distractions, variant_ordered,
};
pub use verify::{verify_dataset, verify_instance, VerifyFailure, VerifyReport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("instance {id} failed verification: {reason}")]
    VerificationFailed { id: String, reason: String },
    #[error("no fresh predicate available for goal replacement after {0} tries")]
    ReplacementFailed(u32),
    #[error("{path}:{line}: {message}")]
    Schema { path: String, line: usize, message: String },
    #[error("checksum mismatch for shard {0}")]
    ChecksumMismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Engine(#[from] crate::engine::EngineError),
}
