//! In-memory, content-addressed image store with a total size budget.

use std::sync::Arc;

use bytes::Bytes;
use lru::LruCache;
use parking_lot::Mutex;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MediaType {
    #[serde(rename = "image/png")]
    Png,
    #[serde(rename = "image/jpeg")]
    Jpeg,
}

impl MediaType {
    /// Parses a `Content-Type` value, ignoring parameters.
    pub fn from_content_type(value: &str) -> Option<Self> {
        match value
            .split(';')
            .next()?
            .trim()
            .to_ascii_lowercase()
            .as_str()
        {
            "image/png" => Some(MediaType::Png),
            "image/jpeg" | "image/jpg" => Some(MediaType::Jpeg),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            MediaType::Png => "image/png",
            MediaType::Jpeg => "image/jpeg",
        }
    }

    fn format(&self) -> image::ImageFormat {
        match self {
            MediaType::Png => image::ImageFormat::Png,
            MediaType::Jpeg => image::ImageFormat::Jpeg,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ImageRecord {
    /// Hex SHA-256 of the payload.
    pub id: String,
    pub bytes: Bytes,
    pub media_type: MediaType,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, thiserror::Error)]
pub enum ImageError {
    #[error("payload is not a decodable {0}: {1}")]
    Undecodable(&'static str, String),
    #[error("image of {size} bytes exceeds the store capacity of {capacity} bytes")]
    TooLarge { size: usize, capacity: usize },
}

/// Least-recently-used records are evicted once the stored payloads exceed
/// `capacity_bytes`. Re-uploading identical bytes returns the existing id.
pub struct ImageStore {
    capacity_bytes: usize,
    inner: Mutex<Inner>,
}

struct Inner {
    records: LruCache<String, Arc<ImageRecord>>,
    total_bytes: usize,
}

impl ImageStore {
    pub fn new(capacity_bytes: usize) -> Self {
        Self {
            capacity_bytes,
            inner: Mutex::new(Inner {
                records: LruCache::unbounded(),
                total_bytes: 0,
            }),
        }
    }

    /// Validates the payload against its declared type and stores it.
    pub fn insert(
        &self,
        bytes: Bytes,
        media_type: MediaType,
    ) -> Result<Arc<ImageRecord>, ImageError> {
        if bytes.len() > self.capacity_bytes {
            return Err(ImageError::TooLarge {
                size: bytes.len(),
                capacity: self.capacity_bytes,
            });
        }
        let id = hex::encode(Sha256::digest(&bytes));
        if let Some(existing) = self.get(&id) {
            return Ok(existing);
        }
        let (width, height) =
            image::ImageReader::with_format(std::io::Cursor::new(&bytes), media_type.format())
                .into_dimensions()
                .map_err(|e| ImageError::Undecodable(media_type.as_str(), e.to_string()))?;
        let record = Arc::new(ImageRecord {
            id: id.clone(),
            bytes,
            media_type,
            width,
            height,
        });

        let mut inner = self.inner.lock();
        if let Some(existing) = inner.records.get(&id) {
            return Ok(existing.clone());
        }
        inner.total_bytes += record.bytes.len();
        inner.records.put(id, record.clone());
        while inner.total_bytes > self.capacity_bytes {
            let Some((_, evicted)) = inner.records.pop_lru() else {
                break;
            };
            inner.total_bytes -= evicted.bytes.len();
        }
        Ok(record)
    }

    pub fn get(&self, id: &str) -> Option<Arc<ImageRecord>> {
        self.inner.lock().records.get(id).cloned()
    }

    pub fn len(&self) -> usize {
        self.inner.lock().records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total_bytes(&self) -> usize {
        self.inner.lock().total_bytes
    }
}
