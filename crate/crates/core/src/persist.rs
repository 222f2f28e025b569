//! Versioned binary container shared by every persisted model.
//!
//! Layout (little endian):
//!
//! ```text
//! magic    4 bytes  "ACPT"
//! version  u16
//! kind     u8       1 = n-gram, 2 = unigram, 3 = holographic model
//! payload  kind-specific
//! ```
//!
//! Payloads are built from the primitives below. Strings are a `u32` byte
//! length followed by UTF-8 bytes; floats are stored as their IEEE-754 bits
//! so that a save/load/save cycle is bit-exact.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::corpus::{Token, Vocabulary};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"ACPT";
pub const VERSION: u16 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum ModelKind {
    NGram = 1,
    Unigram = 2,
    Holographic = 3,
}

impl ModelKind {
    fn from_byte(b: u8) -> Result<Self> {
        match b {
            1 => Ok(ModelKind::NGram),
            2 => Ok(ModelKind::Unigram),
            3 => Ok(ModelKind::Holographic),
            other => Err(Error::Format(format!("unknown model kind {other}"))),
        }
    }
}

pub struct ModelWriter<W: Write> {
    inner: W,
}

impl<W: Write> ModelWriter<W> {
    pub fn new(mut inner: W, kind: ModelKind) -> io::Result<Self> {
        inner.write_all(MAGIC)?;
        inner.write_u16::<LittleEndian>(VERSION)?;
        inner.write_u8(kind as u8)?;
        Ok(ModelWriter { inner })
    }

    pub fn u8(&mut self, v: u8) -> io::Result<()> {
        self.inner.write_u8(v)
    }

    pub fn u32(&mut self, v: u32) -> io::Result<()> {
        self.inner.write_u32::<LittleEndian>(v)
    }

    pub fn u64(&mut self, v: u64) -> io::Result<()> {
        self.inner.write_u64::<LittleEndian>(v)
    }

    pub fn f64(&mut self, v: f64) -> io::Result<()> {
        self.inner.write_u64::<LittleEndian>(v.to_bits())
    }

    pub fn usize(&mut self, n: usize) -> io::Result<()> {
        self.u64(n as u64)
    }

    pub fn str(&mut self, s: &str) -> io::Result<()> {
        self.u32(s.len() as u32)?;
        self.inner.write_all(s.as_bytes())
    }

    pub fn f64s(&mut self, xs: &[f64]) -> io::Result<()> {
        for &x in xs {
            self.f64(x)?;
        }
        Ok(())
    }

    /// Writes the vocabulary in sorted order.
    pub fn vocab(&mut self, vocab: &Vocabulary) -> io::Result<()> {
        self.u64(vocab.min_count())?;
        self.usize(vocab.len())?;
        for t in vocab.iter() {
            self.str(t.as_str())?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.inner.flush()?;
        Ok(self.inner)
    }
}

pub struct ModelReader<R: Read> {
    inner: R,
}

fn truncated(e: io::Error) -> Error {
    if e.kind() == io::ErrorKind::UnexpectedEof {
        Error::Format("truncated model file".into())
    } else {
        Error::Stream(e)
    }
}

impl<R: Read> ModelReader<R> {
    pub fn new(mut inner: R, expected: ModelKind) -> Result<Self> {
        let mut magic = [0u8; 4];
        inner.read_exact(&mut magic).map_err(truncated)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad magic bytes".into()));
        }
        let version = inner.read_u16::<LittleEndian>().map_err(truncated)?;
        if version != VERSION {
            return Err(Error::Format(format!(
                "unsupported format version {version}"
            )));
        }
        let kind = ModelKind::from_byte(inner.read_u8().map_err(truncated)?)?;
        if kind != expected {
            return Err(Error::Format(format!(
                "expected {expected:?} model, found {kind:?}"
            )));
        }
        Ok(ModelReader { inner })
    }

    pub fn u8(&mut self) -> Result<u8> {
        self.inner.read_u8().map_err(truncated)
    }

    pub fn u32(&mut self) -> Result<u32> {
        self.inner.read_u32::<LittleEndian>().map_err(truncated)
    }

    pub fn u64(&mut self) -> Result<u64> {
        self.inner.read_u64::<LittleEndian>().map_err(truncated)
    }

    pub fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_bits(self.u64()?))
    }

    pub fn usize(&mut self) -> Result<usize> {
        usize::try_from(self.u64()?).map_err(|_| Error::Format("length overflows usize".into()))
    }

    pub fn str(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        // no up-front allocation: a corrupt length must not reserve gigabytes
        let mut buf = Vec::new();
        (&mut self.inner).take(n as u64).read_to_end(&mut buf)?;
        if buf.len() != n {
            return Err(Error::Format("truncated model file".into()));
        }
        String::from_utf8(buf).map_err(|_| Error::Format("invalid UTF-8 string".into()))
    }

    pub fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        (0..n).map(|_| self.f64()).collect()
    }

    pub fn token(&mut self) -> Result<Token> {
        let s = self.str()?;
        Token::new(s.clone()).ok_or_else(|| Error::Format(format!("invalid token {s:?}")))
    }

    pub fn vocab(&mut self) -> Result<Vocabulary> {
        let min_count = self.u64()?;
        let n = self.usize()?;
        let words = (0..n).map(|_| self.token()).collect::<Result<Vec<_>>>()?;
        Ok(Vocabulary::from_words(words, min_count))
    }

    /// Fails unless the stream is exhausted.
    pub fn finish(mut self) -> Result<()> {
        let mut probe = [0u8; 1];
        match self.inner.read(&mut probe)? {
            0 => Ok(()),
            _ => Err(Error::Format("trailing bytes after model payload".into())),
        }
    }
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}
