//! Flat `key = value` configuration files.
//!
//! The loader records only what the file sets; precedence (CLI flag over
//! config value over built-in default) is applied where the effective
//! settings are assembled. Unknown keys are errors — a misspelled `tol`
//! silently falling back to the default would be worse than a refusal.

use std::fs;
use std::path::Path;

/// Settings a config file may supply. Every field is optional; `None` means
/// "the file did not mention it".
#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub step_init: Option<f64>,
    pub seed: Option<u64>,
    pub eps: Option<f64>,
    pub alternate_bb: Option<bool>,
    pub nonmonotone_memory: Option<usize>,
    pub refeasibility_threshold: Option<f64>,
}

/// Parses `path` as lines of `key = value`. Blank lines and `#` comments are
/// skipped; anything else must be a known key.
pub fn load(path: &Path) -> Result<FileConfig, String> {
    let display = path.display();
    let text = fs::read_to_string(path).map_err(|e| format!("{display}: {e}"))?;
    let mut cfg = FileConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!(
                "{display}: line {line_no}: expected `key = value`, got {raw:?}"
            ));
        };
        let key = key.trim();
        let value = value.trim();
        let bad =
            |what: &str| format!("{display}: line {line_no}: {what} for key {key:?}: {value:?}");
        match key {
            "tol" => cfg.tol = Some(value.parse().map_err(|_| bad("invalid real"))?),
            "max_iter" => cfg.max_iter = Some(value.parse().map_err(|_| bad("invalid count"))?),
            "step_init" => cfg.step_init = Some(value.parse().map_err(|_| bad("invalid real"))?),
            "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("invalid seed"))?),
            "eps" => cfg.eps = Some(value.parse().map_err(|_| bad("invalid real"))?),
            "alternate_bb" => {
                cfg.alternate_bb = Some(
                    value
                        .parse()
                        .map_err(|_| bad("invalid flag (true/false)"))?,
                )
            }
            "nonmonotone_memory" => {
                cfg.nonmonotone_memory = Some(value.parse().map_err(|_| bad("invalid count"))?)
            }
            "refeasibility_threshold" => {
                cfg.refeasibility_threshold = Some(value.parse().map_err(|_| bad("invalid real"))?)
            }
            _ => return Err(format!("{display}: line {line_no}: unknown key {key:?}")),
        }
    }
    Ok(cfg)
}
