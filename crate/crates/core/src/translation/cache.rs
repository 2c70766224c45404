//! Persistent translation cache.
//!
//! The store is a single append-only file of entries:
//!
//! ```text
//! magic     4 bytes   "CMX1"
//! key      32 bytes   SHA-256 of "source \x1f target \x1f text"
//! req_len   u32 LE    length of the request text
//! resp_len  u32 LE    length of the translated text
//! request   req_len bytes, UTF-8
//! response  resp_len bytes, UTF-8
//! checksum  8 bytes   first 8 bytes of SHA-256(key | request | response)
//! ```
//!
//! Later entries for a key supersede earlier ones. An entry whose checksum
//! does not match is reported as a miss and rewritten on the next fetch. A
//! torn tail (crash mid-append) is cut off when the store is opened.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, RwLock};

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{TranslationBackend, TranslationError, TranslationRequest};

const MAGIC: &[u8; 4] = b"CMX1";
const HEADER_LEN: usize = 4 + 32 + 4 + 4;
const CHECKSUM_LEN: usize = 8;

type Key = [u8; 32];

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("cache store {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("cache entry too large ({0} bytes)")]
    EntryTooLarge(usize),
}

#[derive(Clone, Debug)]
enum Slot {
    Good { request: String, response: String },
    Corrupt,
}

pub struct CacheStore {
    path: PathBuf,
    index: RwLock<HashMap<Key, Slot>>,
    file: Mutex<File>,
    corrupt_reads: AtomicUsize,
}

fn canonical(request: &TranslationRequest) -> String {
    format!("{}\x1f{}\x1f{}", request.source, request.target, request.text)
}

fn key_of(canonical: &str) -> Key {
    Sha256::digest(canonical.as_bytes()).into()
}

fn checksum(key: &Key, request: &[u8], response: &[u8]) -> [u8; CHECKSUM_LEN] {
    let digest = Sha256::new()
        .chain_update(key)
        .chain_update(request)
        .chain_update(response)
        .finalize();
    let mut out = [0u8; CHECKSUM_LEN];
    out.copy_from_slice(&digest[..CHECKSUM_LEN]);
    out
}

fn encode(key: &Key, request: &str, response: &str) -> Result<Vec<u8>, StoreError> {
    let req = request.as_bytes();
    let resp = response.as_bytes();
    let req_len = u32::try_from(req.len()).map_err(|_| StoreError::EntryTooLarge(req.len()))?;
    let resp_len = u32::try_from(resp.len()).map_err(|_| StoreError::EntryTooLarge(resp.len()))?;
    let mut buf = Vec::with_capacity(HEADER_LEN + req.len() + resp.len() + CHECKSUM_LEN);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(key);
    buf.extend_from_slice(&req_len.to_le_bytes());
    buf.extend_from_slice(&resp_len.to_le_bytes());
    buf.extend_from_slice(req);
    buf.extend_from_slice(resp);
    buf.extend_from_slice(&checksum(key, req, resp));
    Ok(buf)
}

/// Decodes entries from `data`; returns the index and the length of the
/// well-framed prefix.
fn decode(data: &[u8]) -> (HashMap<Key, Slot>, usize) {
    let mut index = HashMap::new();
    let mut pos = 0;
    while data.len() - pos >= HEADER_LEN {
        let header = &data[pos..pos + HEADER_LEN];
        if &header[..4] != MAGIC {
            break;
        }
        let key: Key = header[4..36].try_into().expect("32-byte slice");
        let req_len = u32::from_le_bytes(header[36..40].try_into().expect("4 bytes")) as usize;
        let resp_len = u32::from_le_bytes(header[40..44].try_into().expect("4 bytes")) as usize;
        let end = pos + HEADER_LEN + req_len + resp_len + CHECKSUM_LEN;
        if end > data.len() {
            break;
        }
        let body = pos + HEADER_LEN;
        let req = &data[body..body + req_len];
        let resp = &data[body + req_len..body + req_len + resp_len];
        let stored = &data[end - CHECKSUM_LEN..end];

        let slot = match (
            stored == checksum(&key, req, resp),
            std::str::from_utf8(req),
            std::str::from_utf8(resp),
        ) {
            (true, Ok(req), Ok(resp)) => Slot::Good {
                request: req.to_owned(),
                response: resp.to_owned(),
            },
            _ => Slot::Corrupt,
        };
        index.insert(key, slot);
        pos = end;
    }
    (index, pos)
}

impl CacheStore {
    /// Opens (creating if needed) the store at `path`.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref().to_path_buf();
        let io_err = |source| StoreError::Io {
            path: path.clone(),
            source,
        };
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(&path)
            .map_err(io_err)?;
        let mut data = Vec::new();
        file.read_to_end(&mut data).map_err(io_err)?;

        let (index, valid) = decode(&data);
        if valid < data.len() {
            log::warn!(
                "cache store {}: discarding {} trailing bytes of a partial entry",
                path.display(),
                data.len() - valid
            );
            file.set_len(valid as u64).map_err(io_err)?;
        }
        let corrupt = index.values().filter(|s| matches!(s, Slot::Corrupt)).count();
        if corrupt > 0 {
            log::warn!(
                "cache store {}: {} entries failed their checksum and will be refetched",
                path.display(),
                corrupt
            );
        }

        Ok(CacheStore {
            path,
            index: RwLock::new(index),
            file: Mutex::new(file),
            corrupt_reads: AtomicUsize::new(0),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Stored translation for `request`. Corrupt entries read as misses.
    pub fn get(&self, request: &TranslationRequest) -> Option<String> {
        let canonical = canonical(request);
        let index = self.index.read().expect("cache index lock poisoned");
        match index.get(&key_of(&canonical)) {
            Some(Slot::Good {
                request: stored,
                response,
            }) if *stored == canonical => Some(response.clone()),
            Some(Slot::Good { .. }) => None,
            Some(Slot::Corrupt) => {
                self.corrupt_reads.fetch_add(1, Ordering::Relaxed);
                log::warn!(
                    "cache store {}: corrupt entry for {:?}, treating as miss",
                    self.path.display(),
                    request.text
                );
                None
            }
            None => None,
        }
    }

    pub fn put(&self, request: &TranslationRequest, response: &str) -> Result<(), StoreError> {
        let canonical = canonical(request);
        let key = key_of(&canonical);
        let entry = encode(&key, &canonical, response)?;
        {
            let mut file = self.file.lock().expect("cache file lock poisoned");
            file.write_all(&entry)
                .and_then(|_| file.flush())
                .map_err(|source| StoreError::Io {
                    path: self.path.clone(),
                    source,
                })?;
        }
        self.index.write().expect("cache index lock poisoned").insert(
            key,
            Slot::Good {
                request: canonical,
                response: response.to_owned(),
            },
        );
        Ok(())
    }

    /// Number of readable entries.
    pub fn len(&self) -> usize {
        self.index
            .read()
            .expect("cache index lock poisoned")
            .values()
            .filter(|s| matches!(s, Slot::Good { .. }))
            .count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// How many lookups hit a corrupt entry since the store was opened.
    pub fn corrupt_reads(&self) -> usize {
        self.corrupt_reads.load(Ordering::Relaxed)
    }
}

/// A backend that consults a [`CacheStore`] before delegating.
pub struct CachedBackend<B> {
    inner: B,
    store: CacheStore,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl<B: TranslationBackend> CachedBackend<B> {
    pub fn new(inner: B, store: CacheStore) -> Self {
        CachedBackend {
            inner,
            store,
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
        }
    }

    pub fn store(&self) -> &CacheStore {
        &self.store
    }

    pub fn inner(&self) -> &B {
        &self.inner
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }
}

impl<B: TranslationBackend> TranslationBackend for CachedBackend<B> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn translate_text(&self, request: &TranslationRequest) -> Result<String, TranslationError> {
        if let Some(hit) = self.store.get(request) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(hit);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let response = self.inner.translate_text(request)?;
        self.store.put(request, &response)?;
        Ok(response)
    }
}

/// Wraps `backend` so that every request is looked up in `store` first.
pub fn cached<B: TranslationBackend>(backend: B, store: CacheStore) -> CachedBackend<B> {
    CachedBackend::new(backend, store)
}
