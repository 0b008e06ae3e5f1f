//! Acceptance checks for the workspace live in `tests/acceptance.rs`; run them
//! with `cargo test -p ruled-validation --test acceptance`.
