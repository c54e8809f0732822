//! Test-only package holding the acceptance suite (tests/acceptance.rs).
