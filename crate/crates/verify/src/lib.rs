//! Home of the workspace acceptance suite; the library itself is empty.
//!
//! Run it with `cargo test -p ringlab-verify --test acceptance`. It prints one
//! PASS/FAIL line per criterion and exits nonzero if any criterion fails.
