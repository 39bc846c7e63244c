//! The transcribed generator tables match their pinned SHA-256 digests.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

fn pinned() -> BTreeMap<String, String> {
    let text = fs::read_to_string(data_dir().join("SHA256SUMS")).expect("SHA256SUMS is readable");
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (digest, name) = l.split_once(char::is_whitespace).expect("digest and name");
            (name.trim().to_string(), digest.to_string())
        })
        .collect()
}

#[test]
fn every_table_matches_its_digest() {
    for (name, digest) in pinned() {
        let bytes = fs::read(data_dir().join("theta").join(&name)).expect("table is readable");
        let got = format!("{:x}", Sha256::digest(&bytes));
        assert_eq!(got, digest, "{name}");
    }
}

#[test]
fn every_table_is_pinned() {
    let pinned = pinned();
    for entry in fs::read_dir(data_dir().join("theta")).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        assert!(pinned.contains_key(&name), "{name} has no digest");
    }
}

#[test]
fn embedded_sources_are_the_pinned_files() {
    let pinned = pinned();
    for (name, text) in exhopf::liedata::data_sources() {
        let got = format!("{:x}", Sha256::digest(text.as_bytes()));
        assert_eq!(Some(&got), pinned.get(*name), "{name}");
    }
}
