//! On-disk cache for computed structures and presentations.
//!
//! Entries are keyed by object name, rank, and degree inside a
//! versioned subdirectory, so bumping [`CACHE_FORMAT_VERSION`]
//! orphans (and thereby invalidates) every old entry without any
//! migration logic. Each entry carries a content-digest sidecar;
//! reads that fail the digest, fail to parse, or are simply missing
//! all report a miss, and the caller recomputes and overwrites.
//! Writes go to a temporary name in the same directory followed by a
//! rename, so readers never observe a half-written entry. A cache
//! that cannot be opened degrades to a disabled one with a warning:
//! caching is a speedup, never a requirement.

use crate::presented::{from_zpres_str, to_zpres_string, Presentation};
use crate::zlinalg::AbelianStructure;
use num_bigint::BigInt;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

/// Bumped whenever any serialized cache entry layout changes.
pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Handle to a cache directory, or a disabled no-op.
pub struct Cache {
    root: Option<PathBuf>,
}

impl Cache {
    /// A cache that stores nothing and never hits.
    pub fn disabled() -> Cache {
        Cache { root: None }
    }

    /// Opens (creating if needed) the versioned cache directory under
    /// `dir`. On failure the cache is disabled and a warning goes to
    /// stderr; the computation proceeds uncached.
    pub fn open(dir: &Path) -> Cache {
        let root = dir.join(format!("v{CACHE_FORMAT_VERSION}"));
        match fs::create_dir_all(&root) {
            Ok(()) => Cache { root: Some(root) },
            Err(e) => {
                eprintln!(
                    "warning: cache directory {} unusable ({e}); continuing without cache",
                    dir.display()
                );
                Cache::disabled()
            }
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.root.is_some()
    }

    fn entry_path(&self, kind: &str, object: &str, n: u32, k: u32) -> Option<PathBuf> {
        self.root
            .as_ref()
            .map(|r| r.join(format!("{object}-n{n}-k{k}.{kind}")))
    }

    fn read_verified(&self, path: &Path) -> Option<String> {
        let body = fs::read(path).ok()?;
        let recorded = fs::read_to_string(digest_path(path)).ok()?;
        if hex_digest(&body) != recorded.trim() {
            return None;
        }
        String::from_utf8(body).ok()
    }

    fn write_entry(&self, path: &Path, body: &str) {
        // Failures here only cost future cache hits.
        let _ = atomic_write(path, body.as_bytes());
        let _ = atomic_write(&digest_path(path), hex_digest(body.as_bytes()).as_bytes());
    }

    /// Cached structure of one group object, if present and intact.
    pub fn get_structure(&self, object: &str, n: u32, k: u32) -> Option<AbelianStructure> {
        let body = self.read_verified(&self.entry_path("struct", object, n, k)?)?;
        parse_structure(&body)
    }

    pub fn put_structure(&self, object: &str, n: u32, k: u32, s: &AbelianStructure) {
        if let Some(path) = self.entry_path("struct", object, n, k) {
            self.write_entry(&path, &render_structure(s));
        }
    }

    /// Cached presentation of one group object, if present and intact.
    pub fn get_presentation(&self, object: &str, n: u32, k: u32) -> Option<Presentation> {
        let body = self.read_verified(&self.entry_path("zpres", object, n, k)?)?;
        from_zpres_str(&body).ok()
    }

    pub fn put_presentation(&self, object: &str, n: u32, k: u32, p: &Presentation) {
        if let Some(path) = self.entry_path("zpres", object, n, k) {
            self.write_entry(&path, &to_zpres_string(p));
        }
    }
}

fn digest_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_os_string();
    os.push(".sha256");
    PathBuf::from(os)
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(digest.len() * 2);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

fn atomic_write(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

fn render_structure(s: &AbelianStructure) -> String {
    let mut out = format!("free {}\ntorsion", s.free_rank());
    for d in s.torsion() {
        out.push(' ');
        out.push_str(&d.to_string());
    }
    out.push('\n');
    out
}

fn parse_structure(body: &str) -> Option<AbelianStructure> {
    let mut lines = body.lines();
    let rank: usize = lines.next()?.strip_prefix("free ")?.trim().parse().ok()?;
    let torsion_line = lines.next()?;
    let rest = torsion_line.strip_prefix("torsion")?;
    let mut factors = Vec::new();
    for tok in rest.split_whitespace() {
        factors.push(tok.parse::<BigInt>().ok()?);
    }
    Some(AbelianStructure::from_factors(rank, factors))
}
