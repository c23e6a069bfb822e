use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{io_err, BenchError, Result};
use crate::models::{EvaluationRecord, MetricKind, ModelFamily, Tuning};

pub const STORE_FILE: &str = "evaluations.jsonl";

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecordKey {
    pub dataset: String,
    pub encoder: String,
    pub model: ModelFamily,
    pub metric: MetricKind,
    pub tuning: Tuning,
    pub seed: u64,
}

impl RecordKey {
    pub fn of(r: &EvaluationRecord) -> Self {
        RecordKey {
            dataset: r.dataset.clone(),
            encoder: r.encoder.clone(),
            model: r.model,
            metric: r.metric,
            tuning: r.tuning,
            seed: r.seed,
        }
    }
}

/// Append-only JSON-lines file of evaluation records, one per key.
///
/// Opening an existing file replays it; a torn final line left by an
/// interrupted run is cut off so appends stay well formed.
#[derive(Debug)]
pub struct EvaluationStore {
    path: PathBuf,
    records: Vec<EvaluationRecord>,
    index: HashMap<RecordKey, usize>,
    file: Option<File>,
}

impl EvaluationStore {
    /// Opens `dir/evaluations.jsonl` for appending, creating it if needed.
    pub fn open(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let path = dir.join(STORE_FILE);
        let mut store = Self::replay(&path, true)?;
        store.file = Some(
            OpenOptions::new()
                .create(true)
                .append(true)
                .open(&path)
                .map_err(|e| io_err(&path, e))?,
        );
        Ok(store)
    }

    /// Loads a store without opening it for writing.
    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(STORE_FILE);
        if !path.exists() {
            return Err(io_err(&path, "store not found; run an experiment first"));
        }
        Self::replay(&path, false)
    }

    fn replay(path: &Path, repair: bool) -> Result<Self> {
        let mut store = EvaluationStore {
            path: path.to_path_buf(),
            records: Vec::new(),
            index: HashMap::new(),
            file: None,
        };
        let Ok(text) = std::fs::read_to_string(path) else {
            return Ok(store);
        };
        let complete = match text.rfind('\n') {
            Some(end) => &text[..=end],
            None => "",
        };
        if repair && complete.len() != text.len() {
            std::fs::write(path, complete).map_err(|e| io_err(path, e))?;
        }
        for (i, line) in complete
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let record: EvaluationRecord =
                serde_json::from_str(line).map_err(|e| BenchError::Store {
                    line: i + 1,
                    message: e.to_string(),
                })?;
            store.insert(record);
        }
        Ok(store)
    }

    fn insert(&mut self, record: EvaluationRecord) -> bool {
        let key = RecordKey::of(&record);
        if self.index.contains_key(&key) {
            return false;
        }
        self.index.insert(key, self.records.len());
        self.records.push(record);
        true
    }

    /// Appends and flushes one record. Returns `false` if its key is present.
    pub fn append(&mut self, record: EvaluationRecord) -> Result<bool> {
        if self.contains(&RecordKey::of(&record)) {
            return Ok(false);
        }
        let file = self
            .file
            .as_mut()
            .ok_or_else(|| io_err(&self.path, "store opened read-only"))?;
        let mut line = serde_json::to_string(&record).expect("records serialize");
        line.push('\n');
        file.write_all(line.as_bytes())
            .and_then(|_| file.flush())
            .map_err(|e| io_err(&self.path, e))?;
        Ok(self.insert(record))
    }

    pub fn contains(&self, key: &RecordKey) -> bool {
        self.index.contains_key(key)
    }

    pub fn get(&self, key: &RecordKey) -> Option<&EvaluationRecord> {
        self.index.get(key).map(|&i| &self.records[i])
    }

    pub fn records(&self) -> &[EvaluationRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(encoder: &str, value: Option<f64>) -> EvaluationRecord {
        EvaluationRecord {
            dataset: "d".into(),
            encoder: encoder.into(),
            model: ModelFamily::DecisionTree,
            metric: MetricKind::AUC,
            tuning: Tuning::NoTuning,
            seed: 3,
            value,
            reason: value.is_none().then(|| "timeout".to_string()),
            wall_time_s: 0.25,
        }
    }

    #[test]
    fn append_replay_and_dedup() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = EvaluationStore::open(dir.path()).unwrap();
        assert!(s.append(rec("OH", Some(0.75))).unwrap());
        assert!(s.append(rec("Drop", None)).unwrap());
        assert!(!s.append(rec("OH", Some(0.1))).unwrap());
        drop(s);
        let s = EvaluationStore::read(dir.path()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(
            s.get(&RecordKey::of(&rec("OH", None))).unwrap().value,
            Some(0.75)
        );
        assert_eq!(s.records()[1].reason.as_deref(), Some("timeout"));
    }

    #[test]
    fn torn_tail_is_repaired() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = EvaluationStore::open(dir.path()).unwrap();
        s.append(rec("OH", Some(0.5))).unwrap();
        drop(s);
        let path = dir.path().join(STORE_FILE);
        let mut text = std::fs::read_to_string(&path).unwrap();
        text.push_str("{\"dataset\":\"d\",\"enc");
        std::fs::write(&path, text).unwrap();
        let mut s = EvaluationStore::open(dir.path()).unwrap();
        assert_eq!(s.len(), 1);
        s.append(rec("Ord", Some(0.6))).unwrap();
        drop(s);
        assert_eq!(EvaluationStore::read(dir.path()).unwrap().len(), 2);
    }

    #[test]
    fn malformed_line_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join(STORE_FILE), "{}\n").unwrap();
        assert!(matches!(
            EvaluationStore::read(dir.path()),
            Err(BenchError::Store { line: 1, .. })
        ));
    }
}
