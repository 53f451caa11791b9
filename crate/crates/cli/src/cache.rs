//! Content-addressed results cache.
//!
//! Each run is keyed by the SHA-256 of the command name, its arguments, the
//! engine guards and a canonical serialisation of the input. A key `k` owns
//! `k.record` (key=value lines), `k.out` (the exact standard output), an
//! optional `k.cert`, and `k.file.<name>` for every file the command wrote.
//! Every file is written to a temporary name and renamed into place, and
//! `k.record` is renamed last, so a record only exists once its parts do.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

use crate::commands::Outcome;

pub fn key(parts: &[&str]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p.as_bytes());
    }
    hex::encode(h.finalize())
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Cache> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache {}", dir.display()))?;
        Ok(Cache {
            dir: dir.to_path_buf(),
        })
    }

    fn path(&self, key: &str, suffix: &str) -> PathBuf {
        self.dir.join(format!("{key}.{suffix}"))
    }

    fn write_atomic(&self, target: &Path, data: &[u8]) -> Result<()> {
        let tmp = target.with_extension(format!("tmp{}", std::process::id()));
        let mut f = fs::File::create(&tmp).with_context(|| format!("writing {}", tmp.display()))?;
        f.write_all(data)?;
        f.sync_all()?;
        fs::rename(&tmp, target).with_context(|| format!("renaming into {}", target.display()))?;
        Ok(())
    }

    pub fn load(&self, key: &str) -> Result<Option<Outcome>> {
        let record = match fs::read_to_string(self.path(key, "record")) {
            Ok(r) => r,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let mut exit = None;
        let mut meta = Vec::new();
        let mut files = Vec::new();
        let mut certificate = None;
        for line in record.lines() {
            let Some((k, v)) = line.split_once('=') else {
                continue;
            };
            match k {
                "exit" => exit = Some(v.parse().context("cache record exit code")?),
                "file" => {
                    let body = fs::read_to_string(self.path(key, &format!("file.{v}")))?;
                    files.push((v.to_string(), body));
                }
                "certificate" if v != "-" => {
                    certificate = Some(fs::read_to_string(self.dir.join(v))?);
                }
                "hash" | "certificate" => {}
                _ => meta.push((k.to_string(), v.to_string())),
            }
        }
        let stdout = fs::read_to_string(self.path(key, "out"))?;
        Ok(Some(Outcome {
            stdout,
            exit: exit.context("cache record without exit code")?,
            files,
            certificate,
            meta,
        }))
    }

    pub fn store(&self, key: &str, outcome: &Outcome) -> Result<()> {
        self.write_atomic(&self.path(key, "out"), outcome.stdout.as_bytes())?;
        for (name, body) in &outcome.files {
            self.write_atomic(&self.path(key, &format!("file.{name}")), body.as_bytes())?;
        }
        let mut record = format!("hash={key}\nexit={}\n", outcome.exit);
        match &outcome.certificate {
            Some(c) => {
                self.write_atomic(&self.path(key, "cert"), c.as_bytes())?;
                record.push_str(&format!("certificate={key}.cert\n"));
            }
            None => record.push_str("certificate=-\n"),
        }
        for (name, _) in &outcome.files {
            record.push_str(&format!("file={name}\n"));
        }
        for (k, v) in &outcome.meta {
            record.push_str(&format!("{k}={v}\n"));
        }
        self.write_atomic(&self.path(key, "record"), record.as_bytes())
    }
}
