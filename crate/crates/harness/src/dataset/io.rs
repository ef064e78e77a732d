//! Dataset layout on disk: `<env>/manifest.json`, `<env>/samples.jsonl` and
//! `<env>/frames/*.png`.

use super::{Dataset, DatasetError, DatasetManifest, ReasoningSample};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

/// Writes the dataset under `root/<env>` and returns that directory. Sample
/// frame paths are filled in relative to it.
pub fn write_dataset(dataset: &mut Dataset, root: &Path) -> Result<PathBuf, DatasetError> {
    let dir = root.join(&dataset.manifest.env);
    let frames_dir = dir.join("frames");
    fs::create_dir_all(&frames_dir)?;
    for i in 0..dataset.samples.len() {
        let mut paths = Vec::new();
        for (k, png) in dataset.frames(i).into_iter().enumerate() {
            let rel = format!("frames/{:04}_{k}.png", dataset.samples[i].id);
            fs::write(dir.join(&rel), png)?;
            paths.push(rel);
        }
        dataset.samples[i].frames = paths;
    }
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&dataset.manifest)?)?;
    let mut w = BufWriter::new(fs::File::create(dir.join("samples.jsonl"))?);
    for s in &dataset.samples {
        serde_json::to_writer(&mut w, s)?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(dir)
}

pub fn read_manifest(dir: &Path) -> Result<DatasetManifest, DatasetError> {
    Ok(serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?)
}

pub fn read_samples(dir: &Path) -> Result<Vec<ReasoningSample>, DatasetError> {
    let f = fs::File::open(dir.join("samples.jsonl"))?;
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

/// Reads predictions aligned to sample ids. Each line is either a JSON object
/// `{"id": N, "prediction": "<TOKEN>"}` or a bare token for the next sample.
pub fn read_predictions(path: &Path, n: usize) -> Result<Vec<Option<String>>, DatasetError> {
    let text = fs::read_to_string(path)?;
    let mut out = vec![None; n];
    let mut next = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (id, token) = if line.starts_with('{') {
            let v: serde_json::Value = serde_json::from_str(line)?;
            let id = v["id"].as_u64().map(|x| x as usize).unwrap_or(next);
            let token = v["prediction"]
                .as_str()
                .ok_or_else(|| DatasetError::Format(format!("line {}: missing `prediction`", lineno + 1)))?;
            (id, token.to_string())
        } else {
            (next, line.to_string())
        };
        if id >= n {
            return Err(DatasetError::Format(format!("line {}: sample id {id} out of range (0..{n})", lineno + 1)));
        }
        out[id] = Some(token);
        next = id + 1;
    }
    Ok(out)
}
