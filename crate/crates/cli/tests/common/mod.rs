#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rdhei_core::{read_pgm, GrayImage, SecretKey};

pub fn testdata_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../testdata")
        .join(name)
}

pub fn load_dir(name: &str) -> Vec<(PathBuf, GrayImage)> {
    let dir = testdata_dir(name);
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "pgm"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let img = read_pgm(&std::fs::read(&p).unwrap()).unwrap();
            (p, img)
        })
        .collect()
}

/// The `rdhei` binary with no key variables inherited from the environment.
pub fn rdhei() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rdhei"));
    cmd.env_remove("RDHEI_KEY1").env_remove("RDHEI_KEY2");
    cmd
}

pub fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("failed to spawn rdhei")
}

pub fn key(byte: u8) -> SecretKey {
    SecretKey::from_bytes([byte; 32])
}

pub fn hex(key: &SecretKey) -> String {
    key.to_hex()
}

pub fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}
