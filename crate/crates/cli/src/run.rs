use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};

use anyhow::{Context, Result};
use lipgraph::io::{self, CubeModelDocument, WitnessDocument};
use lipgraph::{Graph, PointSet, VertexMap};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Everything needed to reproduce one invocation.
#[derive(Debug, Default, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub parameters: BTreeMap<String, String>,
    /// path -> sha256 of the bytes read
    pub inputs: BTreeMap<String, String>,
    /// path -> sha256 of the bytes written
    pub outputs: BTreeMap<String, String>,
    pub verdicts: BTreeMap<String, bool>,
}

pub struct Run {
    pub manifest: RunManifest,
    /// Set when a requested certification did not pass.
    pub failed: bool,
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Run {
    pub fn new(command: Vec<String>) -> Self {
        Run { manifest: RunManifest { command, ..Default::default() }, failed: false }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.manifest.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn verdict(&mut self, name: &str, ok: bool) {
        self.manifest.verdicts.insert(name.to_string(), ok);
        if !ok {
            self.failed = true;
            eprintln!("certification failed: {name}");
        }
    }

    pub fn read(&mut self, path: &str) -> Result<String> {
        let mut text = String::new();
        if path == "-" {
            std::io::stdin().read_to_string(&mut text).context("reading standard input")?;
        } else {
            text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        }
        self.manifest.inputs.insert(path.to_string(), sha256(text.as_bytes()));
        Ok(text)
    }

    pub fn write(&mut self, path: &str, text: &str) -> Result<()> {
        if path == "-" {
            std::io::stdout().write_all(text.as_bytes()).context("writing standard output")?;
        } else {
            fs::write(path, text).with_context(|| format!("writing {path}"))?;
        }
        self.manifest.outputs.insert(path.to_string(), sha256(text.as_bytes()));
        Ok(())
    }

    pub fn write_json<T: Serialize + ?Sized>(&mut self, path: &str, value: &T) -> Result<()> {
        let text = io::to_json(value)?;
        self.write(path, &text)
    }

    pub fn graph(&mut self, path: &str) -> Result<Graph> {
        let text = self.read(path)?;
        io::parse_graph(&text).with_context(|| format!("{path}: invalid graph"))
    }

    pub fn points(&mut self, path: &str) -> Result<PointSet> {
        let text = self.read(path)?;
        io::parse_points(&text).with_context(|| format!("{path}: invalid point set"))
    }

    pub fn map(&mut self, path: &str) -> Result<VertexMap> {
        let text = self.read(path)?;
        io::parse_map(&text).with_context(|| format!("{path}: invalid vertex map"))
    }

    pub fn witness(&mut self, path: &str) -> Result<WitnessDocument> {
        let text = self.read(path)?;
        io::parse_witness(&text).with_context(|| format!("{path}: invalid witness"))
    }

    pub fn cube_model(&mut self, path: &str) -> Result<CubeModelDocument> {
        let text = self.read(path)?;
        io::parse_cube_model(&text).with_context(|| format!("{path}: invalid cube model"))
    }

    pub fn finish(mut self, manifest: Option<&str>) -> Result<bool> {
        if let Some(path) = manifest {
            let text = io::to_json(&self.manifest)?;
            self.write(path, &text)?;
        }
        Ok(!self.failed)
    }
}
