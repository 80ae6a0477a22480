//! Command-line front end for the `piecewise` crate: named groups, verification suites
//! and the subcommand bodies used by the `piecewise` binary.

pub mod commands;
pub mod registry;
pub mod suites;

use piecewise::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Exit code for an error: 2 for failed validation, 3 for window/cutoff/budget limits,
/// 1 for I/O, 64 for anything attributable to the invocation.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        e if e.is_resource_limit() => EXIT_RESOURCE,
        Error::NonBijective(_)
        | Error::AlphabetCollision(_)
        | Error::LemmaViolation(_)
        | Error::CacheIntegrity(_)
        | Error::MalformedGroup(_)
        | Error::UnstableFarField(_) => EXIT_VALIDATION,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_USAGE,
    }
}
