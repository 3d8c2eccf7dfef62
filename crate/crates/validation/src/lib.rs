//! Holds the workspace acceptance suite in `tests/acceptance.rs`.
//!
//! The suite lives in its own package so that `cargo test --workspace` runs
//! it after every other test target.
