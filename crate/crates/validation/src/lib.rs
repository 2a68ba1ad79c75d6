//! Holds the acceptance suite in `tests/acceptance.rs`, run with
//! `cargo test -p gplan-validation`.
