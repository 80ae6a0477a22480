//! Cache files, CSV helpers and JSON report envelopes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Version written into every JSON report.
pub const SCHEMA_VERSION: u32 = 1;
/// Version written into cache file headers.
pub const CACHE_FORMAT: u32 = 1;
pub const CACHE_DIR_ENV: &str = "PIECEWISE_CACHE_DIR";
const CACHE_MAGIC: &str = "piecewise-cache";

/// Quotes a CSV field when it contains a comma, quote or line break.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// JSON report wrapper carrying the schema version.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub schema_version: u32,
    pub kind: String,
    pub body: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(kind: impl Into<String>, body: T) -> Self {
        Report { schema_version: SCHEMA_VERSION, kind: kind.into(), body }
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Outcome of comparing a closed form against a direct evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_error: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn compare(identity: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let abs_error = (lhs - rhs).abs();
        IdentityReport { identity: identity.into(), lhs, rhs, abs_error, pass: abs_error <= tol }
    }

    /// Passes when `lhs ≤ rhs + tol`; `abs_error` is the excess, or 0.
    pub fn at_most(identity: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let abs_error = (lhs - rhs).max(0.0);
        IdentityReport { identity: identity.into(), lhs, rhs, abs_error, pass: lhs <= rhs + tol }
    }

    pub fn exact(identity: impl Into<String>, lhs: f64, rhs: f64, equal: bool) -> Self {
        IdentityReport { identity: identity.into(), lhs, rhs, abs_error: (lhs - rhs).abs(), pass: equal }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Serializes a cache entry: header line, JSON payload line, checksum line.
pub fn encode_cache<T: Serialize>(kind: &str, payload: &T) -> Result<String> {
    if kind.contains(char::is_whitespace) || kind.is_empty() {
        return Err(Error::InvalidParameter(format!("bad cache kind `{kind}`")));
    }
    let json = serde_json::to_string(payload)?;
    let header = format!("{CACHE_MAGIC} {CACHE_FORMAT} {kind}");
    let digest = sha256_hex(format!("{header}\n{json}\n").as_bytes());
    Ok(format!("{header}\n{json}\nsha256 {digest}\n"))
}

/// Parses a cache entry and checks kind, version and checksum.
pub fn decode_cache<T: DeserializeOwned>(kind: &str, text: &str) -> Result<T> {
    let mut lines = text.split('\n');
    let header = lines.next().unwrap_or_default();
    let json = lines.next().ok_or_else(|| Error::CacheIntegrity("missing payload".into()))?;
    let sum = lines.next().ok_or_else(|| Error::CacheIntegrity("missing checksum".into()))?;
    let fields: Vec<&str> = header.split(' ').collect();
    if fields.len() != 3 || fields[0] != CACHE_MAGIC {
        return Err(Error::CacheIntegrity(format!("bad header `{header}`")));
    }
    if fields[1] != CACHE_FORMAT.to_string() {
        return Err(Error::CacheIntegrity(format!("unsupported cache format {}", fields[1])));
    }
    if fields[2] != kind {
        return Err(Error::CacheIntegrity(format!("expected kind {kind}, found {}", fields[2])));
    }
    let expected = sha256_hex(format!("{header}\n{json}\n").as_bytes());
    match sum.strip_prefix("sha256 ") {
        Some(h) if h == expected => {}
        _ => return Err(Error::CacheIntegrity("checksum mismatch".into())),
    }
    Ok(serde_json::from_str(json)?)
}

/// Cache directory: `$PIECEWISE_CACHE_DIR`, or `./.piecewise-cache`.
pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".piecewise-cache"))
}

/// File name for a cache key, derived from its hash.
pub fn cache_path(dir: &Path, kind: &str, key: &str) -> PathBuf {
    dir.join(format!("{kind}-{}.cache", &sha256_hex(key.as_bytes())[..16]))
}

pub fn write_cache<T: Serialize>(path: &Path, kind: &str, payload: &T) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, encode_cache(kind, payload)?)?;
    Ok(())
}

pub fn read_cache<T: DeserializeOwned>(path: &Path, kind: &str) -> Result<T> {
    let text = fs::read_to_string(path)?;
    decode_cache(kind, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("abc"), "abc");
        assert_eq!(csv_field("{[1,2]}"), "\"{[1,2]}\"");
        assert_eq!(csv_field("a\"b"), "\"a\"\"b\"");
    }

    #[test]
    fn cache_roundtrip_and_tamper() {
        let payload = vec![1u32, 2, 3];
        let text = encode_cache("ball", &payload).unwrap();
        let back: Vec<u32> = decode_cache("ball", &text).unwrap();
        assert_eq!(back, payload);
        let tampered = text.replace("[1,2,3]", "[1,2,4]");
        assert!(matches!(decode_cache::<Vec<u32>>("ball", &tampered), Err(Error::CacheIntegrity(_))));
        assert!(matches!(decode_cache::<Vec<u32>>("table", &text), Err(Error::CacheIntegrity(_))));
    }
}
