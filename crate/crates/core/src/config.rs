//! Run configuration, read from a TOML file. Relative paths are resolved
//! against the directory holding the file.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::derivfilter::DEFAULT_AUDIT_SEED;
use crate::error::{Error, Result};
use crate::morphogen::MorphParams;
use crate::qaengine::{Mode, MAX_RANK};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    /// One or more dictionary files, concatenated.
    pub dictionary: Vec<PathBuf>,
    pub inflections: PathBuf,
    pub corpus_lexicon: PathBuf,
    pub synonyms: PathBuf,
    /// Additional synonym tables, used only at the highest enrichment level.
    #[serde(default)]
    pub extra_synonyms: Vec<PathBuf>,
    pub patterns: PathBuf,
    /// Defaults to the bundled code table.
    pub code_table: Option<PathBuf>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunOptions {
    pub mode: String,
    pub k: usize,
    pub require_full_match: bool,
    pub symmetrize: bool,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            mode: Mode::Derivational.as_str().to_owned(),
            k: MAX_RANK,
            require_full_match: false,
            symmetrize: false,
            seed: DEFAULT_AUDIT_SEED,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub paths: Paths,
    #[serde(default)]
    pub morph: MorphParams,
    #[serde(default)]
    pub run: RunOptions,
}

impl PipelineConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut c: PipelineConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let p = &mut c.paths;
        let fix = |path: &mut PathBuf| {
            if path.is_relative() {
                *path = base_dir.join(&*path);
            }
        };
        p.dictionary.iter_mut().for_each(fix);
        p.extra_synonyms.iter_mut().for_each(fix);
        for path in [
            &mut p.inflections,
            &mut p.corpus_lexicon,
            &mut p.synonyms,
            &mut p.patterns,
        ] {
            fix(path);
        }
        if let Some(t) = p.code_table.as_mut() {
            fix(t);
        }
        c.validate_options()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, dir)
    }

    pub fn mode(&self) -> Result<Mode> {
        self.run.mode.parse().map_err(Error::Config)
    }

    pub fn validate_options(&self) -> Result<()> {
        if !(1..=MAX_RANK).contains(&self.run.k) {
            return Err(Error::Config(format!(
                "k must be in 1..={MAX_RANK}, got {}",
                self.run.k
            )));
        }
        self.mode()?;
        if self.paths.dictionary.is_empty() {
            return Err(Error::Config("no dictionary file given".into()));
        }
        Ok(())
    }

    /// Every referenced input exists.
    pub fn check_paths(&self) -> Result<()> {
        let p = &self.paths;
        let all = p
            .dictionary
            .iter()
            .chain(&p.extra_synonyms)
            .chain([&p.inflections, &p.corpus_lexicon, &p.synonyms, &p.patterns])
            .chain(&p.code_table);
        for path in all {
            if !path.is_file() {
                return Err(Error::Config(format!(
                    "missing input file {}",
                    path.display()
                )));
            }
        }
        Ok(())
    }
}
