//! Run configuration: command-line flags layered over an optional TOML file.
//!
//! The file uses the flag names as keys:
//!
//! ```toml
//! input = "corpus.conllu"
//! labels = "corpus.labels.tsv"
//! lexicon = ["hin=lex.hin.tsv"]
//! target = ["hin"]
//! policy = "top-k=1000"
//! clause-only = false
//! other-lexicon = "names.txt"
//! out = "build"
//! workers = 4
//! cache = "mt.cache"
//! seed = 7
//! format = "json"
//! ```
//!
//! Relative paths are resolved against the file's directory. Flags given on
//! the command line win over the file.

use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use codemix::generator::{GenerationPolicy, Mode};
use codemix::LangCode;
use serde::Deserialize;

use crate::CliError;

pub const TARGETS: [&str; 3] = ["hin", "kan", "mar"];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Table,
}

/// Flags shared by every subcommand; each one ignores what it does not use.
#[derive(Clone, Debug, Default, Args)]
pub struct Flags {
    /// Input file (`-` for stdin)
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Sentence label sidecar (TSV: sent_id, label)
    #[arg(long, global = true)]
    pub labels: Option<PathBuf>,

    /// Translation lexicon TSV, optionally prefixed with a target (`hin=lex.tsv`)
    #[arg(long, global = true)]
    pub lexicon: Vec<String>,

    /// Translate through an HTTP endpoint; without a value CODEMIX_MT_URL is used
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "")]
    pub mt: Option<String>,

    /// Target language (repeatable)
    #[arg(long, global = true, value_parser = TARGETS)]
    pub target: Vec<String>,

    /// Variant selection: all, max-cmi or top-k=<k>
    #[arg(long, global = true)]
    pub policy: Option<String>,

    /// Translate independent clauses only
    #[arg(long, global = true)]
    pub clause_only: bool,

    /// File of forms always tagged `other`, one per line
    #[arg(long, global = true)]
    pub other_lexicon: Option<PathBuf>,

    /// Output directory (default: stdout)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// On-disk translation cache
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,

    /// Reserved; every current code path is deterministic
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Report format for `stats`
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// TOML file with default values for the flags above
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    #[default]
    None,
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<String> {
        match self {
            OneOrMany::None => Vec::new(),
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
struct FileConfig {
    input: Option<PathBuf>,
    labels: Option<PathBuf>,
    lexicon: OneOrMany,
    mt: Option<String>,
    target: OneOrMany,
    policy: Option<String>,
    clause_only: bool,
    other_lexicon: Option<PathBuf>,
    out: Option<PathBuf>,
    workers: Option<usize>,
    cache: Option<PathBuf>,
    seed: Option<u64>,
    format: Option<Format>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackendChoice {
    /// (target or `None` for every target, path)
    Lexicon(Vec<(Option<LangCode>, PathBuf)>),
    /// Endpoint URL; `None` reads `CODEMIX_MT_URL`.
    Mt(Option<String>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub backend: Option<BackendChoice>,
    pub targets: Vec<LangCode>,
    pub policy: GenerationPolicy,
    pub other_lexicon: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub workers: usize,
    pub cache: Option<PathBuf>,
    pub seed: Option<u64>,
    pub format: Format,
}

pub fn parse_policy(s: &str) -> Result<Mode, CliError> {
    let bad = || CliError::Usage(format!("invalid policy {:?}: expected all, max-cmi or top-k=<k>", s));
    match s {
        "all" => Ok(Mode::All),
        "max-cmi" => Ok(Mode::MaxCmi),
        _ => {
            let k = s.strip_prefix("top-k=").ok_or_else(bad)?;
            let k = NonZeroUsize::from_str(k).map_err(|_| bad())?;
            Ok(Mode::TopK(k))
        }
    }
}

fn parse_target(s: &str) -> Result<LangCode, CliError> {
    if !TARGETS.contains(&s) {
        return Err(CliError::Usage(format!(
            "unsupported target {:?}: expected one of {}",
            s,
            TARGETS.join(", ")
        )));
    }
    LangCode::new(s).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_lexicon(spec: &str, base: &Path) -> Result<(Option<LangCode>, PathBuf), CliError> {
    match spec.split_once('=') {
        Some((lang, path)) if !lang.contains(['/', '\\']) => {
            Ok((Some(parse_target(lang)?), base.join(path)))
        }
        _ => Ok((None, base.join(spec))),
    }
}

fn read_file_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {}", path.display(), e)))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {}", path.display(), e)))
}

impl RunConfig {
    pub fn resolve(flags: &Flags) -> Result<Self, CliError> {
        let (file, base) = match &flags.config {
            Some(path) => {
                let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
                (read_file_config(path)?, base)
            }
            None => (FileConfig::default(), PathBuf::new()),
        };
        let rebase = |p: Option<PathBuf>| p.map(|p| base.join(p));

        let lexicons: Vec<(Option<LangCode>, PathBuf)> = if flags.lexicon.is_empty() {
            file.lexicon
                .into_vec()
                .iter()
                .map(|s| parse_lexicon(s, &base))
                .collect::<Result<_, _>>()?
        } else {
            flags
                .lexicon
                .iter()
                .map(|s| parse_lexicon(s, Path::new("")))
                .collect::<Result<_, _>>()?
        };
        let mt = flags.mt.clone().or(file.mt);
        let backend = match (lexicons.is_empty(), mt) {
            (true, None) => None,
            (false, None) => Some(BackendChoice::Lexicon(lexicons)),
            (true, Some(url)) => Some(BackendChoice::Mt(Some(url).filter(|u| !u.is_empty()))),
            (false, Some(_)) => {
                return Err(CliError::Usage("choose either --lexicon or --mt, not both".into()))
            }
        };

        let targets = if flags.target.is_empty() { file.target.into_vec() } else { flags.target.clone() };
        let mut targets: Vec<LangCode> = targets.iter().map(|t| parse_target(t)).collect::<Result<_, _>>()?;
        if targets.is_empty() {
            targets.push(LangCode::new("hin").expect("valid code"));
        }
        let mut seen = Vec::new();
        targets.retain(|t| {
            let fresh = !seen.contains(t);
            seen.push(t.clone());
            fresh
        });

        let mode = match flags.policy.as_deref().or(file.policy.as_deref()) {
            Some(p) => parse_policy(p)?,
            None => Mode::All,
        };
        let workers = match flags.workers.or(file.workers) {
            Some(0) => return Err(CliError::Usage("--workers must be at least 1".into())),
            Some(n) => n,
            None => std::thread::available_parallelism().map_or(1, NonZeroUsize::get),
        };

        Ok(RunConfig {
            input: flags.input.clone().or(rebase(file.input)),
            labels: flags.labels.clone().or(rebase(file.labels)),
            backend,
            targets,
            policy: GenerationPolicy {
                mode,
                clause_only: flags.clause_only || file.clause_only,
            },
            other_lexicon: flags.other_lexicon.clone().or(rebase(file.other_lexicon)),
            out: flags.out.clone().or(rebase(file.out)),
            workers,
            cache: flags.cache.clone().or(rebase(file.cache)),
            seed: flags.seed.or(file.seed),
            format: flags.format.or(file.format).unwrap_or_default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies() {
        assert_eq!(parse_policy("all").unwrap(), Mode::All);
        assert_eq!(parse_policy("max-cmi").unwrap(), Mode::MaxCmi);
        assert_eq!(parse_policy("top-k=3").unwrap(), Mode::TopK(NonZeroUsize::new(3).unwrap()));
        for bad in ["top-k=0", "top-k=", "top-k=x", "best", ""] {
            assert!(parse_policy(bad).is_err(), "{}", bad);
        }
    }

    #[test]
    fn defaults() {
        let cfg = RunConfig::resolve(&Flags::default()).unwrap();
        assert_eq!(cfg.targets, [LangCode::new("hin").unwrap()]);
        assert_eq!(cfg.policy, GenerationPolicy::default());
        assert_eq!(cfg.backend, None);
        assert!(cfg.workers >= 1);
    }

    #[test]
    fn both_backends_is_an_error() {
        let flags = Flags {
            lexicon: vec!["lex.tsv".into()],
            mt: Some(String::new()),
            ..Flags::default()
        };
        assert!(matches!(RunConfig::resolve(&flags), Err(CliError::Usage(_))));
    }

    #[test]
    fn file_values_are_rebased_and_overridden() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(
            &path,
            "input = \"in.conllu\"\nlexicon = \"kan=lex.tsv\"\ntarget = [\"kan\", \"mar\"]\npolicy = \"max-cmi\"\nclause-only = true\nworkers = 2\n",
        )
        .unwrap();
        let flags = Flags {
            config: Some(path),
            policy: Some("top-k=5".into()),
            ..Flags::default()
        };
        let cfg = RunConfig::resolve(&flags).unwrap();
        assert_eq!(cfg.input, Some(dir.path().join("in.conllu")));
        assert_eq!(
            cfg.backend,
            Some(BackendChoice::Lexicon(vec![(
                Some(LangCode::new("kan").unwrap()),
                dir.path().join("lex.tsv")
            )]))
        );
        assert_eq!(cfg.targets.len(), 2);
        assert_eq!(cfg.policy.mode, Mode::TopK(NonZeroUsize::new(5).unwrap()));
        assert!(cfg.policy.clause_only);
        assert_eq!(cfg.workers, 2);
    }

    #[test]
    fn unknown_file_keys_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "inptu = \"x\"\n").unwrap();
        let flags = Flags {
            config: Some(path),
            ..Flags::default()
        };
        assert!(matches!(RunConfig::resolve(&flags), Err(CliError::Usage(_))));
    }
}
