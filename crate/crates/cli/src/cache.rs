use std::path::{Path, PathBuf};

use iwalk_core::partition::enumerate_partitions;
use iwalk_core::spectrum::{build_table, eigenvalue_closed_form, EigenvalueTable, TableOptions};
use iwalk_core::WalkParams;
use serde_json::{json, Value};

use crate::output::{write_atomic, CliResult, Failure};
use crate::Settings;

/// Eigenvalue tables on disk, one JSON file per `(n, p)`.
pub struct Cache {
    dir: PathBuf,
}

pub fn file_name(params: &WalkParams) -> String {
    let p = params.p();
    format!("eigen_n{}_p{}-{}.json", params.n(), p.numer(), p.denom())
}

/// Recovers `(n, num, den)` from a cache file name.
fn parse_file_name(name: &str) -> Option<(usize, String, String)> {
    let rest = name.strip_prefix("eigen_n")?.strip_suffix(".json")?;
    let (n, p) = rest.split_once("_p")?;
    let (num, den) = p.split_once('-')?;
    Some((n.parse().ok()?, num.to_string(), den.to_string()))
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, params: &WalkParams) -> PathBuf {
        self.dir.join(file_name(params))
    }

    /// Reads and checks a cached table. `Ok(None)` means no file;
    /// `Err` carries the reason a present file was rejected.
    pub fn load(&self, params: &WalkParams) -> Result<Option<EigenvalueTable>, String> {
        let path = self.path_for(params);
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.to_string()),
        };
        let table = EigenvalueTable::from_json(&text).map_err(|e| e.to_string())?;
        check_table(&table, params)?;
        Ok(Some(table))
    }

    pub fn store(&self, table: &EigenvalueTable) -> std::io::Result<PathBuf> {
        std::fs::create_dir_all(&self.dir)?;
        let path = self.path_for(&table.params);
        write_atomic(&path, table.to_json().as_bytes())?;
        Ok(path)
    }

    pub fn inspect(&self) -> std::io::Result<Vec<Value>> {
        let mut entries = Vec::new();
        let listing = match std::fs::read_dir(&self.dir) {
            Ok(l) => l,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(entries),
            Err(e) => return Err(e),
        };
        let mut names: Vec<String> = listing
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .filter(|name| name.starts_with("eigen_") && name.ends_with(".json"))
            .collect();
        names.sort();
        for name in names {
            let text = std::fs::read_to_string(self.dir.join(&name))?;
            let status = match (parse_file_name(&name), EigenvalueTable::from_json(&text)) {
                (None, _) => Err("unrecognised file name".to_string()),
                (_, Err(e)) => Err(e.to_string()),
                (Some(key), Ok(table)) => {
                    let p = table.params.p();
                    if key != (table.params.n(), p.numer().to_string(), p.denom().to_string()) {
                        Err("file name does not match contents".to_string())
                    } else {
                        check_table(&table, &table.params).map(|_| table)
                    }
                }
            };
            entries.push(match status {
                Ok(table) => json!({
                    "file": name,
                    "n": table.params.n(),
                    "p": iwalk_core::exact::format_rational(table.params.p()),
                    "partitions": table.values.len(),
                    "valid": true,
                }),
                Err(reason) => json!({ "file": name, "valid": false, "reason": reason }),
            });
        }
        Ok(entries)
    }

    pub fn clear(&self) -> std::io::Result<Vec<String>> {
        let mut removed = Vec::new();
        let listing = match std::fs::read_dir(&self.dir) {
            Ok(l) => l,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(removed),
            Err(e) => return Err(e),
        };
        for entry in listing.filter_map(|e| e.ok()) {
            let name = entry.file_name().to_string_lossy().into_owned();
            if name.starts_with("eigen_") && name.ends_with(".json") {
                std::fs::remove_file(entry.path())?;
                removed.push(name);
            }
        }
        removed.sort();
        Ok(removed)
    }
}

/// Rejects tables for other parameters, incomplete tables, and tables whose
/// closed-form entries disagree with a fresh evaluation.
fn check_table(table: &EigenvalueTable, params: &WalkParams) -> Result<(), String> {
    if table.params.n() != params.n() {
        return Err(format!("file holds n = {}, expected {}", table.params.n(), params.n()));
    }
    if table.params.p() != params.p() {
        return Err(format!(
            "file holds p = {}, expected {}",
            iwalk_core::exact::format_rational(table.params.p()),
            iwalk_core::exact::format_rational(params.p())
        ));
    }
    let expected = enumerate_partitions(params.n()).len();
    if table.values.len() != expected {
        return Err(format!("file has {} partitions, expected {expected}", table.values.len()));
    }
    for (lambda, psi) in table.iter() {
        if let Some(c) = eigenvalue_closed_form(lambda, params) {
            if &c != psi {
                return Err(format!("stored value for {lambda} disagrees with its closed form"));
            }
        }
    }
    Ok(())
}

/// Full eigenvalue table, read from the cache when a valid copy exists and
/// written back after a fresh computation.
pub fn table(settings: &Settings, params: &WalkParams) -> CliResult<EigenvalueTable> {
    let start = std::time::Instant::now();
    if let Some(cache) = &settings.cache {
        match cache.load(params) {
            Ok(Some(table)) => {
                settings.note(&format!(
                    "cache hit {} ({:.3} ms)",
                    cache.path_for(params).display(),
                    start.elapsed().as_secs_f64() * 1e3
                ));
                return Ok(table);
            }
            Ok(None) => settings.note(&format!("cache miss {}", cache.path_for(params).display())),
            Err(reason) => eprintln!(
                "iwalk: warning: ignoring cache file {}: {reason}; recomputing",
                cache.path_for(params).display()
            ),
        }
    }
    let options = TableOptions {
        cap: settings.caps.table,
        verify_recursive: false,
    };
    let table = build_table(params, options)?;
    settings.note(&format!(
        "computed table n = {} ({:.3} ms)",
        params.n(),
        start.elapsed().as_secs_f64() * 1e3
    ));
    if let Some(cache) = &settings.cache {
        let path = cache
            .store(&table)
            .map_err(|e| Failure::Usage(format!("cannot write cache file: {e}")))?;
        settings.note(&format!("cache store {}", path.display()));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, num: i64, den: i64) -> WalkParams {
        WalkParams::with_ratio(n, num, den).unwrap()
    }

    #[test]
    fn file_names_roundtrip() {
        let w = params(6, 2, 4);
        assert_eq!(file_name(&w), "eigen_n6_p1-2.json");
        assert_eq!(parse_file_name("eigen_n6_p1-2.json"), Some((6, "1".into(), "2".into())));
        assert_eq!(parse_file_name("other.json"), None);
    }

    #[test]
    fn store_then_load_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().to_path_buf());
        let w = params(6, 1, 2);
        let table = build_table(&w, TableOptions::default()).unwrap();
        cache.store(&table).unwrap();
        assert_eq!(cache.load(&w).unwrap(), Some(table));
    }

    #[test]
    fn mismatched_contents_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().to_path_buf());
        let table = build_table(&params(4, 1, 2), TableOptions::default()).unwrap();
        let six = params(6, 1, 2);
        std::fs::write(cache.path_for(&six), table.to_json()).unwrap();
        assert!(cache.load(&six).unwrap_err().contains("n = 4"));
    }

    #[test]
    fn tampered_values_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().to_path_buf());
        let w = params(6, 1, 2);
        let table = build_table(&w, TableOptions::default()).unwrap();
        let mut value: Value = serde_json::from_str(&table.to_json()).unwrap();
        assert_ne!(value["psi"]["5,1"], "1/3");
        value["psi"]["5,1"] = json!("1/3");
        std::fs::write(cache.path_for(&w), value.to_string()).unwrap();
        assert!(cache.load(&w).is_err());
    }
}
