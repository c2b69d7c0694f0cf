//! Pipeline behind the `hcs` binary: instance files, Bob's samplers,
//! Alice's verification, relative-entropy sweeps and self-checks.

pub mod args;
pub mod commands;
pub mod instance;
pub mod samples;
pub mod sweep;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const PEAK_FAIL: i32 = 3;
    pub const RED_FAIL: i32 = 4;
    pub const BOTH_FAIL: i32 = 5;
    pub const ORACLE_MISMATCH: i32 = 6;
}
