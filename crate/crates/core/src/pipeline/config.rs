use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::document::LayoutConfig;
use crate::eval::DEFAULT_MAX_DIST;
use crate::extract::RULES_BACKEND;
use crate::lexicon::DEFAULT_MIN_FREQ;
use crate::linking::LinkOptions;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "CERTPIPE_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorrectionConfig {
    /// Frequency floor for replacement candidates.
    pub min_freq: u64,
    /// Largest edit distance counted as a partial name match in evaluation.
    pub max_dist: usize,
}

impl Default for CorrectionConfig {
    fn default() -> Self {
        Self { min_freq: DEFAULT_MIN_FREQ, max_dist: DEFAULT_MAX_DIST }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Directory of HTR documents (`.json` or page `.xml`), searched
    /// recursively.
    pub corpus: PathBuf,
    /// Scan image tree for the inventory stage; skipped when unset.
    pub scans: Option<PathBuf>,
    /// Name lexicon CSV; without it names are neither corrected nor gated.
    pub lexicon: Option<PathBuf>,
    /// Directory overriding the bundled cue and month tables.
    pub tables: Option<PathBuf>,
    /// Evaluation gold CSV; the eval stage is skipped when unset.
    pub gold: Option<PathBuf>,
    pub out: PathBuf,
    /// Review store directory, `<out>/review` when unset.
    pub review_store: Option<PathBuf>,
    pub backend: String,
    /// Worker threads; the number of CPUs when unset.
    pub workers: Option<usize>,
    pub layout: LayoutConfig,
    pub correction: CorrectionConfig,
    pub link: LinkOptions,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            corpus: PathBuf::from("corpus"),
            scans: None,
            lexicon: None,
            tables: None,
            gold: None,
            out: PathBuf::from("out"),
            review_store: None,
            backend: RULES_BACKEND.to_string(),
            workers: None,
            layout: LayoutConfig::default(),
            correction: CorrectionConfig::default(),
            link: LinkOptions::default(),
        }
    }
}

/// Values given on the command line. Set fields replace config values.
#[derive(Debug, Clone, Default)]
pub struct ConfigOverrides {
    pub corpus: Option<PathBuf>,
    pub scans: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub tables: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub review_store: Option<PathBuf>,
    pub backend: Option<String>,
    pub workers: Option<usize>,
    pub min_freq: Option<u64>,
    pub max_dist: Option<usize>,
    pub tolerance: Option<u32>,
    pub any_order: Option<bool>,
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl PipelineConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, PipelineError> {
        toml::from_str(s).map_err(|e| PipelineError::Config(e.to_string()))
    }

    /// Parse a config file. Relative paths are taken relative to the file's
    /// directory.
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("reading {}: {e}", path.display())))?;
        let mut config = Self::from_toml_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.resolve_paths(base);
        Ok(config)
    }

    /// Config from an explicit path, else from `CERTPIPE_CONFIG`, else the
    /// defaults.
    pub fn discover(explicit: Option<&Path>) -> Result<Self, PipelineError> {
        match explicit {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
                _ => Ok(Self::default()),
            },
        }
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        resolve(base, &mut self.corpus);
        resolve(base, &mut self.out);
        for p in [&mut self.scans, &mut self.lexicon, &mut self.tables, &mut self.gold, &mut self.review_store]
            .into_iter()
            .flatten()
        {
            resolve(base, p);
        }
    }

    pub fn apply(&mut self, o: ConfigOverrides) {
        fn set<T>(slot: &mut T, v: Option<T>) {
            if let Some(v) = v {
                *slot = v;
            }
        }
        fn set_opt<T>(slot: &mut Option<T>, v: Option<T>) {
            if v.is_some() {
                *slot = v;
            }
        }
        set(&mut self.corpus, o.corpus);
        set_opt(&mut self.scans, o.scans);
        set_opt(&mut self.lexicon, o.lexicon);
        set_opt(&mut self.tables, o.tables);
        set_opt(&mut self.gold, o.gold);
        set(&mut self.out, o.out);
        set_opt(&mut self.review_store, o.review_store);
        set(&mut self.backend, o.backend);
        set_opt(&mut self.workers, o.workers);
        set(&mut self.correction.min_freq, o.min_freq);
        set(&mut self.correction.max_dist, o.max_dist);
        set(&mut self.link.tolerance, o.tolerance);
        set(&mut self.link.any_order, o.any_order);
    }

    pub fn review_dir(&self) -> PathBuf {
        self.review_store.clone().unwrap_or_else(|| self.out.join("review"))
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        let l = &self.layout;
        if !(0.0..=1.0).contains(&l.margin_min_width) || !(0.0..=1.0).contains(&l.merged_right_edge) {
            return Err(PipelineError::Config("layout thresholds must lie in [0, 1]".into()));
        }
        if self.workers == Some(0) {
            return Err(PipelineError::Config("workers must be at least 1".into()));
        }
        if self.backend.trim().is_empty() {
            return Err(PipelineError::Config("backend must not be empty".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_tables() {
        let c = PipelineConfig::from_toml_str(
            "corpus = \"docs\"\n[layout]\nmerged_right_edge = 0.8\n[link]\ntolerance = 1\n",
        )
        .unwrap();
        assert_eq!(c.corpus, PathBuf::from("docs"));
        assert_eq!(c.layout.merged_right_edge, 0.8);
        assert_eq!(c.layout.margin_min_width, 0.05);
        assert_eq!(c.link.tolerance, 1);
        assert_eq!(c.correction.min_freq, 2);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(PipelineConfig::from_toml_str("corpuss = \"x\"").is_err());
        assert!(PipelineConfig::from_toml_str("[link]\ntolerence = 1").is_err());
    }

    #[test]
    fn overrides_win_and_paths_resolve() {
        let mut c = PipelineConfig::from_toml_str("corpus = \"docs\"\nout = \"/abs/out\"").unwrap();
        c.resolve_paths(Path::new("/cfg"));
        assert_eq!(c.corpus, PathBuf::from("/cfg/docs"));
        assert_eq!(c.out, PathBuf::from("/abs/out"));
        c.apply(ConfigOverrides { out: Some("elsewhere".into()), tolerance: Some(2), ..Default::default() });
        assert_eq!(c.out, PathBuf::from("elsewhere"));
        assert_eq!(c.link.tolerance, 2);
        assert_eq!(c.review_dir(), PathBuf::from("elsewhere/review"));
    }
}
