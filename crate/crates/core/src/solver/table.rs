//! Win-table cache files.
//!
//! Layout (little-endian): magic `GPWT`, version u32, n u32, k u32, c u32,
//! symmetry u8, has_distances u8, reserved u16, state count u64, then the
//! bit array as u64 words, the optional distance array as u16s, and a
//! trailing FNV-1a checksum over everything before it.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::{Error, Result};

use super::rank::StateSpace;
use super::{SolveStats, Symmetry, WinTable};

const MAGIC: [u8; 4] = *b"GPWT";
const VERSION: u32 = 1;

/// FNV-1a, 64-bit.
pub(crate) struct Fnv(u64);

impl Fnv {
    pub fn new() -> Self {
        Fnv(0xcbf29ce484222325)
    }

    #[inline]
    pub fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x100000001b3);
        }
    }

    #[inline]
    pub fn write_u64(&mut self, v: u64) {
        self.write(&v.to_le_bytes());
    }

    #[inline]
    pub fn write_u16(&mut self, v: u16) {
        self.write(&v.to_le_bytes());
    }

    pub fn finish(&self) -> u64 {
        self.0
    }
}

struct CheckedWriter<W: Write> {
    inner: W,
    hash: Fnv,
}

impl<W: Write> CheckedWriter<W> {
    fn put(&mut self, bytes: &[u8]) -> Result<()> {
        self.hash.write(bytes);
        self.inner.write_all(bytes)?;
        Ok(())
    }
}

struct CheckedReader<R: Read> {
    inner: R,
    hash: Fnv,
}

impl<R: Read> CheckedReader<R> {
    fn take(&mut self, buf: &mut [u8]) -> Result<()> {
        self.inner.read_exact(buf)?;
        self.hash.write(buf);
        Ok(())
    }

    fn take_u32(&mut self) -> Result<u32> {
        let mut b = [0u8; 4];
        self.take(&mut b)?;
        Ok(u32::from_le_bytes(b))
    }

    fn take_u64(&mut self) -> Result<u64> {
        let mut b = [0u8; 8];
        self.take(&mut b)?;
        Ok(u64::from_le_bytes(b))
    }
}

impl WinTable {
    /// Writes the table to `path` in the cache format.
    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let file = File::create(path)?;
        let mut w = CheckedWriter {
            inner: BufWriter::new(file),
            hash: Fnv::new(),
        };
        w.put(&MAGIC)?;
        w.put(&VERSION.to_le_bytes())?;
        w.put(&self.n.to_le_bytes())?;
        w.put(&self.k.to_le_bytes())?;
        w.put(&self.c.to_le_bytes())?;
        w.put(&[matches!(self.symmetry, Symmetry::Dihedral) as u8])?;
        w.put(&[self.dist.is_some() as u8])?;
        w.put(&0u16.to_le_bytes())?;
        w.put(&self.states().to_le_bytes())?;
        for word in &self.bits {
            w.put(&word.to_le_bytes())?;
        }
        if let Some(dist) = &self.dist {
            for d in dist {
                w.put(&d.to_le_bytes())?;
            }
        }
        let checksum = w.hash.finish();
        w.inner.write_all(&checksum.to_le_bytes())?;
        w.inner.flush()?;
        Ok(())
    }

    /// Reads a table back; verifies magic, version and checksum.
    pub fn load(path: &Path) -> Result<WinTable> {
        let file = File::open(path)?;
        let mut r = CheckedReader {
            inner: BufReader::new(file),
            hash: Fnv::new(),
        };
        let mut magic = [0u8; 4];
        r.take(&mut magic)?;
        if magic != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let version = r.take_u32()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let n = r.take_u32()?;
        let k = r.take_u32()?;
        let c = r.take_u32()?;
        let mut flags = [0u8; 2];
        r.take(&mut flags)?;
        let symmetry = if flags[0] != 0 {
            Symmetry::Dihedral
        } else {
            Symmetry::None
        };
        let has_dist = flags[1] != 0;
        let mut pad = [0u8; 2];
        r.take(&mut pad)?;
        let states = r.take_u64()?;

        if n < 5 || c == 0 || c > 4 {
            return Err(Error::Format(format!("implausible header n={n} c={c}")));
        }
        let sp = StateSpace::new(2 * n, c);
        if sp.states != states {
            return Err(Error::Format(format!(
                "state count {} does not match GP({n},{k}) with {c} cops",
                states
            )));
        }

        let words = (states as usize).div_ceil(64);
        let mut bits = vec![0u64; words];
        let mut buf = [0u8; 8];
        for word in bits.iter_mut() {
            r.take(&mut buf)?;
            *word = u64::from_le_bytes(buf);
        }
        let dist = if has_dist {
            let mut dist = vec![0u16; states as usize];
            let mut db = [0u8; 2];
            for d in dist.iter_mut() {
                r.take(&mut db)?;
                *d = u16::from_le_bytes(db);
            }
            Some(dist)
        } else {
            None
        };

        let expected = r.hash.finish();
        let mut tail = [0u8; 8];
        r.inner.read_exact(&mut tail)?;
        if u64::from_le_bytes(tail) != expected {
            return Err(Error::Format("checksum mismatch".into()));
        }

        let copwin_states = bits.iter().map(|w| w.count_ones() as u64).sum();
        Ok(WinTable {
            n,
            k,
            c,
            symmetry,
            bits,
            dist,
            stats: SolveStats {
                states,
                copwin_states,
                levels: 0,
                solve_ms: 0,
                threads: 0,
            },
            sp,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GPGraph;
    use crate::solver::{solve, SolveOptions};

    #[test]
    fn save_load_roundtrip() {
        let g = GPGraph::new(5, 2).unwrap();
        let opts = SolveOptions {
            distances: true,
            ..Default::default()
        };
        let t = solve(&g, 2, &opts).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.bin");
        t.save(&path).unwrap();
        let back = WinTable::load(&path).unwrap();
        assert_eq!(back.n, 5);
        assert_eq!(back.k, 2);
        assert_eq!(back.c, 2);
        assert_eq!(back.checksum(), t.checksum());
        assert!(back.has_distances());
    }

    #[test]
    fn corrupted_file_rejected() {
        let g = GPGraph::new(5, 2).unwrap();
        let t = solve(&g, 1, &SolveOptions::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.bin");
        t.save(&path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0xff;
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(WinTable::load(&path), Err(Error::Format(_))));
    }
}
