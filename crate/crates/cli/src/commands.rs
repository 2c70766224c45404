use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Read};
use std::path::Path;
use std::sync::OnceLock;

use codemix::corpus::{build_graph, parse_conllu, parse_labels, Corpus};
use codemix::generator::{GenerateError, Generator, Tagger, Variant, VariantRecord};
use codemix::metrics::utterance_stats;
use codemix::segmenter::extract_segments;
use codemix::translation::{
    cached, CacheStore, HttpBackend, Lexicon, LexiconBackend, TranslationBackend, TranslationError,
    TranslationRequest, ENV_MT_KEY,
};
use codemix::lang::parse_tagged;
use codemix::{LangCode, TokenTag};
use rayon::prelude::*;

use crate::clean::clean_line;
use crate::config::{BackendChoice, Format, RunConfig};
use crate::CliError;

/// What a command produced: the main output and a human-readable summary
/// for stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub file_name: &'static str,
    pub body: String,
    pub summary: String,
}

fn open(path: &Path, what: &str) -> Result<Box<dyn BufRead>, CliError> {
    if path == Path::new("-") {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let file = File::open(path).map_err(|e| CliError::Input(format!("{} {}: {}", what, path.display(), e)))?;
    Ok(Box::new(BufReader::new(file)))
}

fn input(config: &RunConfig) -> Result<(Box<dyn BufRead>, String), CliError> {
    let path = config
        .input
        .as_deref()
        .ok_or_else(|| CliError::Usage("--input is required".into()))?;
    Ok((open(path, "input")?, path.display().to_string()))
}

fn load_corpus(config: &RunConfig) -> Result<Corpus, CliError> {
    let (reader, name) = input(config)?;
    let mut corpus = parse_conllu(reader, &name).map_err(|e| CliError::Input(format!("{}: {}", name, e)))?;
    if let Some(path) = &config.labels {
        let labels = parse_labels(open(path, "labels")?)
            .map_err(|e| CliError::Input(format!("{}: {}", path.display(), e)))?;
        corpus.attach_labels(&labels);
    }
    Ok(corpus)
}

fn load_tagger(config: &RunConfig) -> Result<Tagger, CliError> {
    match &config.other_lexicon {
        Some(path) => Tagger::new()
            .read_other_forms(open(path, "other-lexicon")?)
            .map_err(|e| CliError::Input(format!("{}: {}", path.display(), e))),
        None => Ok(Tagger::new()),
    }
}

pub fn segment(config: &RunConfig) -> Result<Output, CliError> {
    let corpus = load_corpus(config)?;
    let mut body = String::new();
    let mut summary = String::new();
    let (mut segments, mut clauses, mut diagnostics) = (0, 0, 0);
    for sentence in &corpus.sentences {
        let result = extract_segments(&build_graph(sentence));
        segments += result.segments.len();
        clauses += result.clause_count();
        diagnostics += result.diagnostics.len();
        for d in &result.diagnostics {
            let _ = writeln!(summary, "  {}: {}", sentence.id, d);
        }
        let record = serde_json::to_string(&result.to_record(sentence)).expect("records serialize");
        body.push_str(&record);
        body.push('\n');
    }
    let head = format!(
        "segmented {} sentences into {} segments ({} clauses), {} diagnostics\n",
        corpus.len(),
        segments,
        clauses,
        diagnostics
    );
    Ok(Output {
        file_name: "segments.jsonl",
        body,
        summary: head + &summary,
    })
}

/// Dispatches requests to one lexicon per target language.
struct LexiconRouter {
    backends: BTreeMap<LangCode, LexiconBackend>,
}

impl TranslationBackend for LexiconRouter {
    fn name(&self) -> &str {
        "lexicon"
    }

    fn translate_text(&self, request: &TranslationRequest) -> Result<String, TranslationError> {
        match self.backends.get(&request.target) {
            Some(backend) => backend.translate_text(request),
            None => Err(TranslationError::UnsupportedPair {
                backend: self.name().to_owned(),
                source_lang: request.source.clone(),
                target: request.target.clone(),
            }),
        }
    }
}

/// Stops sending requests after the first backend failure; every later call
/// reports that failure.
struct FailFast<B> {
    inner: B,
    failure: OnceLock<(String, String)>,
}

impl<B: TranslationBackend> TranslationBackend for FailFast<B> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn translate_text(&self, request: &TranslationRequest) -> Result<String, TranslationError> {
        if let Some((backend, reason)) = self.failure.get() {
            return Err(TranslationError::BackendUnavailable {
                backend: backend.clone(),
                reason: reason.clone(),
            });
        }
        let result = self.inner.translate_text(request);
        if let Err(TranslationError::BackendUnavailable { backend, reason }) = &result {
            let _ = self.failure.set((backend.clone(), reason.clone()));
        }
        result
    }
}

fn build_backend(config: &RunConfig) -> Result<Box<dyn TranslationBackend>, CliError> {
    let backend: Box<dyn TranslationBackend> = match &config.backend {
        None => return Err(CliError::Usage("generate needs --lexicon or --mt".into())),
        Some(BackendChoice::Lexicon(specs)) => {
            let mut backends = BTreeMap::new();
            for target in &config.targets {
                let chosen = specs
                    .iter()
                    .rev()
                    .find(|(t, _)| t.as_ref() == Some(target))
                    .or_else(|| specs.iter().rev().find(|(t, _)| t.is_none()))
                    .ok_or_else(|| CliError::Usage(format!("no lexicon given for target {}", target)))?;
                let path = &chosen.1;
                let lexicon = Lexicon::from_tsv(open(path, "lexicon")?)
                    .map_err(|e| CliError::Input(format!("{}: {}", path.display(), e)))?;
                backends.insert(target.clone(), LexiconBackend::new(lexicon, target.clone()));
            }
            Box::new(LexiconRouter { backends })
        }
        Some(BackendChoice::Mt(url)) => match url {
            Some(url) => {
                let key = std::env::var(ENV_MT_KEY).ok().filter(|k| !k.is_empty());
                Box::new(HttpBackend::new(url.clone(), key))
            }
            None => Box::new(HttpBackend::from_env().map_err(|e| CliError::Usage(e.to_string()))?),
        },
    };
    let backend: Box<dyn TranslationBackend> = match &config.cache {
        Some(path) => {
            let store = CacheStore::open(path).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))?;
            Box::new(cached(backend, store))
        }
        None => backend,
    };
    Ok(Box::new(FailFast {
        inner: backend,
        failure: OnceLock::new(),
    }))
}

fn generate_error(e: GenerateError) -> CliError {
    match e {
        GenerateError::Translation(TranslationError::InvalidRequest(m)) => CliError::Input(m),
        GenerateError::Translation(e) => CliError::Backend(e.to_string()),
        GenerateError::TooManySegments { .. } => CliError::Input(e.to_string()),
        e => CliError::Io(e.to_string()),
    }
}

/// Variants for the whole corpus, in input order then target then mask, with
/// the policy's corpus-level selection applied.
pub fn generate_variants(config: &RunConfig) -> Result<Vec<Variant>, CliError> {
    let corpus = load_corpus(config)?;
    let tagger = load_tagger(config)?;
    let backend = build_backend(config)?;
    let generators: Vec<Generator<'_, dyn TranslationBackend>> = config
        .targets
        .iter()
        .map(|t| Generator::new(&*backend, &tagger, config.policy, t.clone()))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let per_sentence: Vec<Result<Vec<Variant>, GenerateError>> = pool.install(|| {
        corpus
            .sentences
            .par_iter()
            .map(|sentence| {
                let mut variants = Vec::new();
                for generator in &generators {
                    variants.extend(generator.sentence(sentence)?);
                }
                Ok(variants)
            })
            .collect()
    });

    let mut all = Vec::new();
    for result in per_sentence {
        all.extend(result.map_err(generate_error)?);
    }
    Ok(generators[0].finish(all))
}

pub fn generate(config: &RunConfig) -> Result<Output, CliError> {
    let variants = generate_variants(config)?;
    let mut body = String::new();
    for variant in &variants {
        body.push_str(&serde_json::to_string(&variant.to_record()).expect("records serialize"));
        body.push('\n');
    }
    Ok(Output {
        file_name: "generated.jsonl",
        body,
        summary: format!("generated {} variants\n", variants.len()),
    })
}

pub fn clean(config: &RunConfig) -> Result<Output, CliError> {
    let (mut reader, name) = input(config)?;
    let mut text = String::new();
    reader
        .read_to_string(&mut text)
        .map_err(|e| CliError::Input(format!("{}: {}", name, e)))?;
    let mut body = String::new();
    let (mut kept, mut dropped) = (0, 0);
    for line in text.lines() {
        match clean_line(line) {
            Some(cleaned) => {
                body.push_str(&cleaned);
                body.push('\n');
                kept += 1;
            }
            None => dropped += 1,
        }
    }
    Ok(Output {
        file_name: "cleaned.txt",
        body,
        summary: format!("kept {} lines, dropped {}\n", kept, dropped),
    })
}

/// One utterance: a JSON object with a `tokens` array (as written by
/// `generate`) or whitespace-separated `form/lang` pairs.
fn parse_utterance(line: &str) -> Result<Vec<TokenTag>, String> {
    if line.starts_with('{') {
        let record: VariantRecord = serde_json::from_str(line).map_err(|e| e.to_string())?;
        return Ok(record.tokens);
    }
    parse_tagged(line).map_err(|e| e.to_string())
}

pub fn stats(config: &RunConfig) -> Result<Output, CliError> {
    let (reader, name) = input(config)?;
    let mut utterances = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| CliError::Input(format!("{}: {}", name, e)))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let tags = parse_utterance(line).map_err(|e| CliError::Input(format!("{}:{}: {}", name, n + 1, e)))?;
        utterances.push(tags);
    }
    let stats = utterance_stats(utterances.iter().map(Vec::as_slice))
        .map_err(|e| CliError::Input(format!("{}: {}", name, e)))?;
    let (file_name, body) = match config.format {
        Format::Json => (
            "stats.json",
            serde_json::to_string_pretty(&stats).expect("stats serialize") + "\n",
        ),
        Format::Table => ("stats.txt", stats.render_table()),
    };
    Ok(Output {
        file_name,
        body,
        summary: String::new(),
    })
}
