//! Binary model file.
//!
//! All integers are little-endian. Strings are a `u32` byte length followed
//! by UTF-8 bytes.
//!
//! | field        | type                | notes                                  |
//! |--------------|---------------------|----------------------------------------|
//! | magic        | 8 bytes             | `DIALDA\r\n`                           |
//! | version      | u32                 | currently 1                            |
//! | K, V, D      | u32 each            | topics, vocabulary size, documents     |
//! | alpha, beta  | f64 each            |                                        |
//! | seed         | u64                 |                                        |
//! | passes       | u32                 | configured passes                      |
//! | sweeps       | u32                 | sweeps actually run                    |
//! | lang         | string              | empty when unknown                     |
//! | vocab        | V strings           | token for each word id                 |
//! | documents    | D records           | id string, token count `n`, then `n` (word u32, topic u32) pairs |
//! | n_kw         | K*V u32             | topic-major                            |
//! | n_k          | K u32               |                                        |
//! | n_dk         | D*K u32             | document-major                         |
//! | n_d          | D u32               |                                        |
//! | trailer      | 8 bytes             | `ENDLDA\r\n`                           |
//!
//! The count sections are redundant with the assignments; the loader checks
//! that they agree.

use std::fs;
use std::io::{Cursor, Read};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use super::{LdaHyperparams, LdaModel, SavedModel};
use crate::{Error, Result};

pub const MODEL_MAGIC: &[u8; 8] = b"DIALDA\r\n";
const MODEL_TRAILER: &[u8; 8] = b"ENDLDA\r\n";
pub const MODEL_VERSION: u32 = 1;

fn put_str(out: &mut Vec<u8>, s: &str) {
    out.write_u32::<LittleEndian>(s.len() as u32).unwrap();
    out.extend_from_slice(s.as_bytes());
}

impl SavedModel {
    pub fn to_bytes(&self) -> Vec<u8> {
        let m = &self.model;
        let (k, v, d) = (m.num_topics(), m.vocab_size, m.num_docs());
        let mut out = Vec::with_capacity(64 + 4 * (k * v + d * k + 2 * m.total_tokens() as usize));
        // writes into a Vec cannot fail
        out.extend_from_slice(MODEL_MAGIC);
        out.write_u32::<LittleEndian>(MODEL_VERSION).unwrap();
        for n in [k, v, d] {
            out.write_u32::<LittleEndian>(n as u32).unwrap();
        }
        out.write_f64::<LittleEndian>(m.hyper.alpha).unwrap();
        out.write_f64::<LittleEndian>(m.hyper.beta).unwrap();
        out.write_u64::<LittleEndian>(m.hyper.seed).unwrap();
        out.write_u32::<LittleEndian>(m.hyper.passes).unwrap();
        out.write_u32::<LittleEndian>(m.sweeps).unwrap();
        put_str(&mut out, self.lang.as_deref().unwrap_or(""));
        for token in &self.vocab {
            put_str(&mut out, token);
        }
        for ((id, words), z) in m.doc_ids.iter().zip(&m.words).zip(&m.assignments) {
            put_str(&mut out, id);
            out.write_u32::<LittleEndian>(words.len() as u32).unwrap();
            for (&w, &t) in words.iter().zip(z) {
                out.write_u32::<LittleEndian>(w).unwrap();
                out.write_u32::<LittleEndian>(t).unwrap();
            }
        }
        for t in 0..k {
            for w in 0..v {
                out.write_u32::<LittleEndian>(m.word_topic[w * k + t]).unwrap();
            }
        }
        for section in [&m.topic_totals, &m.doc_topic, &m.doc_len] {
            for &n in section.iter() {
                out.write_u32::<LittleEndian>(n).unwrap();
            }
        }
        out.extend_from_slice(MODEL_TRAILER);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader {
            cursor: Cursor::new(bytes),
            len: bytes.len(),
        };
        let magic = r.bytes(8, "magic")?;
        if magic != MODEL_MAGIC {
            return Err(Error::data("not a model file (bad magic at offset 0)"));
        }
        let version = r.u32("version")?;
        if version != MODEL_VERSION {
            return Err(Error::data(format!(
                "model file version {version} is not supported (this build reads version {MODEL_VERSION})"
            )));
        }
        let k = r.u32("K")? as usize;
        let v = r.u32("V")? as usize;
        let d = r.u32("D")? as usize;
        let hyper = LdaHyperparams {
            topics: k,
            alpha: r.f64("alpha")?,
            beta: r.f64("beta")?,
            seed: r.u64("seed")?,
            passes: r.u32("passes")?,
        };
        if let Err(e) = hyper.validate() {
            return Err(Error::data(format!("invalid header: {e}")));
        }
        let sweeps = r.u32("sweeps")?;
        let lang = r.string("lang")?;
        let vocab = (0..v).map(|_| r.string("vocab")).collect::<Result<Vec<_>>>()?;

        let mut doc_ids = Vec::with_capacity(d);
        let mut words = Vec::with_capacity(d);
        let mut assignments = Vec::with_capacity(d);
        for _ in 0..d {
            doc_ids.push(r.string("document id")?);
            let offset = r.offset();
            let n = r.u32("token count")? as usize;
            r.expect_remaining(n * 8, "document tokens", offset)?;
            let mut w = Vec::with_capacity(n);
            let mut z = Vec::with_capacity(n);
            for _ in 0..n {
                w.push(r.u32("word id")?);
                z.push(r.u32("topic")?);
            }
            words.push(w);
            assignments.push(z);
        }
        let counts_offset = r.offset();
        let topic_major = r.u32_vec(k * v, "n_kw")?;
        let mut word_topic = vec![0u32; k * v];
        for t in 0..k {
            for w in 0..v {
                word_topic[w * k + t] = topic_major[t * v + w];
            }
        }
        let topic_totals = r.u32_vec(k, "n_k")?;
        let doc_topic = r.u32_vec(d * k, "n_dk")?;
        let doc_len = r.u32_vec(d, "n_d")?;
        let trailer_offset = r.offset();
        if r.bytes(8, "trailer")? != MODEL_TRAILER {
            return Err(Error::data(format!("bad trailer at offset {trailer_offset}")));
        }
        if r.offset() != bytes.len() {
            return Err(Error::data(format!(
                "{} unexpected bytes after trailer at offset {}",
                bytes.len() - r.offset(),
                r.offset()
            )));
        }

        let model = LdaModel {
            hyper,
            vocab_size: v,
            doc_ids,
            words,
            assignments,
            word_topic,
            topic_totals,
            doc_topic,
            doc_len,
            sweeps,
        };
        model.check_consistency().map_err(|e| {
            Error::data(format!("corrupt model: {e} (count sections start at offset {counts_offset})"))
        })?;
        Ok(SavedModel {
            model,
            lang: (!lang.is_empty()).then_some(lang),
            vocab,
        })
    }
}

struct Reader<'a> {
    cursor: Cursor<&'a [u8]>,
    len: usize,
}

impl Reader<'_> {
    fn offset(&self) -> usize {
        self.cursor.position() as usize
    }

    fn truncated(&self, what: &str, need: usize) -> Error {
        Error::data(format!(
            "truncated model file: reading {what} needs {need} bytes at offset {}, file has {}",
            self.offset(),
            self.len
        ))
    }

    fn expect_remaining(&self, need: usize, what: &str, at: usize) -> Result<()> {
        if self.len - self.offset() < need {
            return Err(Error::data(format!(
                "truncated model file: {what} declared at offset {at} needs {need} bytes, {} remain",
                self.len - self.offset()
            )));
        }
        Ok(())
    }

    fn bytes(&mut self, n: usize, what: &str) -> Result<Vec<u8>> {
        let mut buf = vec![0u8; n];
        self.cursor
            .read_exact(&mut buf)
            .map_err(|_| self.truncated(what, n))?;
        Ok(buf)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        let at = self.offset();
        self.cursor.read_u32::<LittleEndian>().map_err(|_| {
            self.cursor.set_position(at as u64);
            self.truncated(what, 4)
        })
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        let at = self.offset();
        self.cursor.read_u64::<LittleEndian>().map_err(|_| {
            self.cursor.set_position(at as u64);
            self.truncated(what, 8)
        })
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        let at = self.offset();
        self.cursor.read_f64::<LittleEndian>().map_err(|_| {
            self.cursor.set_position(at as u64);
            self.truncated(what, 8)
        })
    }

    fn string(&mut self, what: &str) -> Result<String> {
        let at = self.offset();
        let n = self.u32(what)? as usize;
        self.expect_remaining(n, what, at)?;
        let raw = self.bytes(n, what)?;
        String::from_utf8(raw).map_err(|_| Error::data(format!("invalid UTF-8 in {what} at offset {at}")))
    }

    fn u32_vec(&mut self, n: usize, what: &str) -> Result<Vec<u32>> {
        let at = self.offset();
        self.expect_remaining(n * 4, what, at)?;
        (0..n).map(|_| self.u32(what)).collect()
    }
}

pub fn save_model(saved: &SavedModel, path: &Path) -> Result<()> {
    fs::write(path, saved.to_bytes()).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<SavedModel> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    SavedModel::from_bytes(&bytes).map_err(|e| match e {
        Error::Data(msg) => Error::data(format!("{}: {msg}", path.display())),
        other => other,
    })
}
