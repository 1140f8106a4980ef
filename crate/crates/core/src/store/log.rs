//! Storage backends behind the event store.
//!
//! The file backend is a single append-only file of records, each a 4-byte
//! big-endian length followed by that many bytes of UTF-8 JSON. The first
//! record is a header pinning the format version.

use std::fs::{File, OpenOptions};
use std::io::{BufReader, ErrorKind, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{EventEnvelope, StoreError};

pub const LOG_FORMAT: &str = "swapsim-event-log";
pub const LOG_VERSION: &str = "1";

pub trait EventLog: Send {
    /// Every envelope previously persisted, in order.
    fn load(&mut self) -> Result<Vec<EventEnvelope>, StoreError>;
    /// Persist a batch; on error nothing from the batch may survive.
    fn persist(&mut self, batch: &[EventEnvelope]) -> Result<(), StoreError>;
    fn clear(&mut self) -> Result<(), StoreError>;
}

#[derive(Debug, Default)]
pub struct MemoryLog;

impl EventLog for MemoryLog {
    fn load(&mut self) -> Result<Vec<EventEnvelope>, StoreError> {
        Ok(Vec::new())
    }

    fn persist(&mut self, _batch: &[EventEnvelope]) -> Result<(), StoreError> {
        Ok(())
    }

    fn clear(&mut self) -> Result<(), StoreError> {
        Ok(())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    version: String,
}

#[derive(Debug)]
pub struct FileLog {
    path: PathBuf,
    file: File,
}

fn encode_record(out: &mut Vec<u8>, json: &[u8]) -> Result<(), StoreError> {
    let len = u32::try_from(json.len()).map_err(|_| StoreError::Corrupt("record exceeds 4 GiB".into()))?;
    out.extend_from_slice(&len.to_be_bytes());
    out.extend_from_slice(json);
    Ok(())
}

fn header_record() -> Result<Vec<u8>, StoreError> {
    let header = Header { format: LOG_FORMAT.into(), version: LOG_VERSION.into() };
    let mut out = Vec::new();
    encode_record(&mut out, &serde_json::to_vec(&header)?)?;
    Ok(out)
}

/// Read one record; `Ok(None)` at a clean end of file or a torn tail.
fn read_record(reader: &mut impl Read) -> Result<Option<Vec<u8>>, StoreError> {
    let mut len = [0u8; 4];
    match reader.read_exact(&mut len) {
        Ok(()) => {}
        Err(e) if e.kind() == ErrorKind::UnexpectedEof => return Ok(None),
        Err(e) => return Err(e.into()),
    }
    let mut buf = vec![0u8; u32::from_be_bytes(len) as usize];
    match reader.read_exact(&mut buf) {
        Ok(()) => Ok(Some(buf)),
        Err(e) if e.kind() == ErrorKind::UnexpectedEof => Ok(None),
        Err(e) => Err(e.into()),
    }
}

impl FileLog {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref().to_path_buf();
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let mut file = OpenOptions::new().read(true).append(true).create(true).truncate(false).open(&path)?;
        if file.metadata()?.len() == 0 {
            file.write_all(&header_record()?)?;
            file.sync_data()?;
        }
        Ok(Self { path, file })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

impl EventLog for FileLog {
    fn load(&mut self) -> Result<Vec<EventEnvelope>, StoreError> {
        self.file.seek(SeekFrom::Start(0))?;
        let mut reader = BufReader::new(&self.file);
        let header = read_record(&mut reader)?.ok_or_else(|| StoreError::Corrupt("missing header".into()))?;
        let header: Header = serde_json::from_slice(&header)?;
        if header.format != LOG_FORMAT || header.version != LOG_VERSION {
            return Err(StoreError::UnsupportedFormat(format!("{} v{}", header.format, header.version)));
        }
        let mut good_len = 4 + serde_json::to_vec(&header)?.len() as u64;
        let mut out = Vec::new();
        while let Some(record) = read_record(&mut reader)? {
            match serde_json::from_slice::<EventEnvelope>(&record) {
                Ok(envelope) => out.push(envelope),
                // a half-written final record; anything after it is dropped
                Err(_) => break,
            }
            good_len += 4 + record.len() as u64;
        }
        drop(reader);
        if self.file.metadata()?.len() > good_len {
            self.file.set_len(good_len)?;
        }
        Ok(out)
    }

    fn persist(&mut self, batch: &[EventEnvelope]) -> Result<(), StoreError> {
        let mut buf = Vec::new();
        for envelope in batch {
            encode_record(&mut buf, &serde_json::to_vec(envelope)?)?;
        }
        let before = self.file.metadata()?.len();
        let written = self.file.write_all(&buf).and_then(|()| self.file.sync_data());
        if let Err(e) = written {
            let _ = self.file.set_len(before);
            return Err(e.into());
        }
        Ok(())
    }

    fn clear(&mut self) -> Result<(), StoreError> {
        self.file.set_len(0)?;
        self.file.write_all(&header_record()?)?;
        self.file.sync_data()?;
        Ok(())
    }
}
