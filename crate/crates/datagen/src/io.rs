use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use rgi_automata::Alphabet;

use crate::config::GenConfig;
use crate::dataset::{Dataset, LabeledString, Origin};
use crate::DatagenError;

/// The `#`-prefixed first line of a corpus file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusHeader {
    pub regex: String,
    pub seed: u64,
    pub split: String,
    pub method: String,
}

impl CorpusHeader {
    fn render(&self) -> String {
        format!(
            "# regex={} seed={} split={} method={}",
            self.regex, self.seed, self.split, self.method
        )
    }

    fn parse(line: &str, path: &str) -> Result<Self, DatagenError> {
        let malformed = |message: &str| DatagenError::Malformed {
            path: path.to_string(),
            line: 1,
            message: message.to_string(),
        };
        let rest = line
            .strip_prefix("# regex=")
            .ok_or_else(|| malformed("missing `# regex=` header"))?;
        // the pattern may contain spaces; the remaining fields are fixed
        let seed_at = rest
            .rfind(" seed=")
            .ok_or_else(|| malformed("missing seed field"))?;
        let regex = rest[..seed_at].to_string();
        let mut fields = rest[seed_at + 1..].split_whitespace();
        let mut take = |prefix: &str| -> Result<String, DatagenError> {
            fields
                .next()
                .and_then(|f| f.strip_prefix(prefix))
                .map(str::to_string)
                .ok_or_else(|| malformed(&format!("missing {prefix} field")))
        };
        let seed = take("seed=")?.parse().map_err(|_| malformed("bad seed"))?;
        let split = take("split=")?;
        let method = take("method=")?;
        Ok(CorpusHeader {
            regex,
            seed,
            split,
            method,
        })
    }
}

/// Write one split in corpus format: a header line, then
/// `<label 0|1> TAB <space-separated tokens>` per string (empty token field
/// for the empty string).
pub fn write_corpus_file(
    path: &Path,
    header: &CorpusHeader,
    alphabet: &Alphabet,
    items: &[(Vec<usize>, bool)],
) -> Result<(), DatagenError> {
    let mut out = String::new();
    let _ = writeln!(out, "{}", header.render());
    for (tokens, label) in items {
        let _ = writeln!(out, "{}\t{}", u8::from(*label), alphabet.decode(tokens));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Rows of a corpus file: written tokens (not yet index-encoded) and labels.
pub type CorpusRows = Vec<(Vec<String>, bool)>;

/// Read one corpus file back.
pub fn read_corpus_file(path: &Path) -> Result<(CorpusHeader, CorpusRows), DatagenError> {
    let display = path.display().to_string();
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or_else(|| DatagenError::Malformed {
        path: display.clone(),
        line: 1,
        message: "empty file".into(),
    })?;
    let header = CorpusHeader::parse(first, &display)?;
    let mut items = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let malformed = |message: &str| DatagenError::Malformed {
            path: display.clone(),
            line: line_no,
            message: message.to_string(),
        };
        let (label_field, token_field) = line
            .split_once('\t')
            .ok_or_else(|| malformed("expected `label TAB tokens`"))?;
        let label = match label_field {
            "0" => false,
            "1" => true,
            other => return Err(malformed(&format!("label must be 0 or 1, got \"{other}\""))),
        };
        let tokens: Vec<String> = token_field.split_whitespace().map(str::to_string).collect();
        items.push((tokens, label));
    }
    Ok((header, items))
}

#[derive(Debug, Serialize, Deserialize)]
struct Metadata {
    regex: String,
    alphabet: Vec<String>,
    seed: u64,
    config: GenConfig,
    /// One origin code per string, per split: p / r / m.
    origins: MetadataOrigins,
}

#[derive(Debug, Serialize, Deserialize)]
struct MetadataOrigins {
    train: String,
    validation: String,
    test: String,
}

/// Persist a dataset into `dir`: one TSV per split plus `metadata.json`.
pub fn save_dataset(dataset: &Dataset, dir: &Path) -> Result<(), DatagenError> {
    fs::create_dir_all(dir)?;
    for (name, items) in dataset.splits() {
        let header = CorpusHeader {
            regex: dataset.regex.clone(),
            seed: dataset.seed,
            split: name.to_string(),
            method: dataset.config.method.as_str().to_string(),
        };
        let rows: Vec<(Vec<usize>, bool)> =
            items.iter().map(|s| (s.tokens.clone(), s.label)).collect();
        write_corpus_file(
            &dir.join(format!("{name}.tsv")),
            &header,
            &dataset.alphabet,
            &rows,
        )?;
    }
    let origin_string =
        |items: &[LabeledString]| items.iter().map(|s| s.origin.code()).collect::<String>();
    let metadata = Metadata {
        regex: dataset.regex.clone(),
        alphabet: dataset.alphabet.tokens().to_vec(),
        seed: dataset.seed,
        config: dataset.config.clone(),
        origins: MetadataOrigins {
            train: origin_string(&dataset.train),
            validation: origin_string(&dataset.validation),
            test: origin_string(&dataset.test),
        },
    };
    let json = serde_json::to_string_pretty(&metadata).expect("metadata serializes");
    fs::write(dir.join("metadata.json"), json + "\n")?;
    Ok(())
}

/// Load a dataset previously written by [`save_dataset`].
pub fn load_dataset(dir: &Path) -> Result<Dataset, DatagenError> {
    let meta_path = dir.join("metadata.json");
    let meta_display = meta_path.display().to_string();
    let metadata: Metadata =
        serde_json::from_str(&fs::read_to_string(&meta_path)?).map_err(|e| {
            DatagenError::Metadata {
                path: meta_display.clone(),
                message: e.to_string(),
            }
        })?;
    let alphabet = Alphabet::new(metadata.alphabet.clone())?;

    let mut splits = Vec::new();
    for (name, origins) in [
        ("train", &metadata.origins.train),
        ("validation", &metadata.origins.validation),
        ("test", &metadata.origins.test),
    ] {
        let path = dir.join(format!("{name}.tsv"));
        let display = path.display().to_string();
        let (header, rows) = read_corpus_file(&path)?;
        if header.split != name {
            return Err(DatagenError::Malformed {
                path: display.clone(),
                line: 1,
                message: format!("expected split {name}, found {}", header.split),
            });
        }
        if origins.chars().count() != rows.len() {
            return Err(DatagenError::Metadata {
                path: meta_display.clone(),
                message: format!(
                    "{name}: {} origin codes for {} strings",
                    origins.len(),
                    rows.len()
                ),
            });
        }
        let mut items = Vec::with_capacity(rows.len());
        for (idx, ((tokens, label), code)) in rows.into_iter().zip(origins.chars()).enumerate() {
            let tokens = alphabet
                .encode(&tokens)
                .map_err(|e| DatagenError::Malformed {
                    path: display.clone(),
                    line: idx + 2,
                    message: e.to_string(),
                })?;
            let origin = Origin::from_code(code).ok_or_else(|| DatagenError::Metadata {
                path: meta_display.clone(),
                message: format!("unknown origin code {code:?}"),
            })?;
            items.push(LabeledString {
                tokens,
                label,
                origin,
            });
        }
        splits.push(items);
    }

    let test = splits.pop().unwrap();
    let validation = splits.pop().unwrap();
    let train = splits.pop().unwrap();
    Ok(Dataset {
        train,
        validation,
        test,
        regex: metadata.regex,
        alphabet,
        seed: metadata.seed,
        config: metadata.config,
    })
}
