//! Tidy tokenization: one normalized word per row, tied to its record.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::TextRecord;

static URL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)[a-z][a-z0-9+.\-]*://\S*").unwrap());
static MENTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"@[\p{L}\p{N}_]+").unwrap());

const BUNDLED_STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// Lower-cases `text`, strips URLs and @-mentions, drops apostrophes and
/// turns every other non-alphanumeric character into a single space.
///
/// ```
/// use senti_core::textprep::normalize;
/// assert_eq!(normalize("We the People LOVE you!"), "we the people love you");
/// assert_eq!(normalize("this isn't a test"), "this isnt a test");
/// ```
pub fn normalize(text: &str) -> String {
    let text = URL.replace_all(text, " ");
    let text = MENTION.replace_all(&text, " ");
    let lowered = text.to_lowercase();

    let mut out = String::with_capacity(lowered.len());
    let mut pending_space = false;
    for c in lowered.chars() {
        if c == '\'' || c == '\u{2019}' {
            continue;
        }
        if c.is_alphanumeric() {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(c);
        } else {
            pending_space = true;
        }
    }
    out
}

/// One word of a record in tidy form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub record_id: u32,
    pub position: u32,
    pub word: String,
}

impl Token {
    pub fn new(record_id: u32, position: u32, word: impl Into<String>) -> Self {
        Token {
            record_id,
            position,
            word: word.into(),
        }
    }
}

/// Normalizes a record's text and splits it into positioned tokens.
pub fn tokenize(record: &TextRecord) -> Vec<Token> {
    normalize(&record.text)
        .split(' ')
        .filter(|w| !w.is_empty())
        .enumerate()
        .map(|(i, w)| Token::new(record.id, (i + 1) as u32, w))
        .collect()
}

/// Tokenizes every record, keeping corpus order.
pub fn tokenize_all(records: &[TextRecord]) -> Vec<Token> {
    records.iter().flat_map(tokenize).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopListSource {
    Bundled,
    File,
    Inline,
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopList {
    words: HashSet<String>,
    provenance: StopListSource,
}

impl StopList {
    pub fn empty() -> Self {
        StopList {
            words: HashSet::new(),
            provenance: StopListSource::Empty,
        }
    }

    pub fn bundled() -> Self {
        StopList {
            words: parse_word_list(BUNDLED_STOPWORDS, '#'),
            provenance: StopListSource::Bundled,
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(StopList {
            words: parse_word_list(&text, '#'),
            provenance: StopListSource::File,
        })
    }

    pub fn inline<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopList {
            words: words
                .into_iter()
                .map(|w| w.as_ref().trim().to_lowercase())
                .filter(|w| !w.is_empty())
                .collect(),
            provenance: StopListSource::Inline,
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn provenance(&self) -> StopListSource {
        self.provenance
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// Parses a one-word-per-line list, skipping blank lines and lines that start
/// with `comment`. Words are trimmed and lower-cased.
pub(crate) fn parse_word_list(text: &str, comment: char) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with(comment))
        .map(str::to_lowercase)
        .collect()
}

/// Removes tokens whose word is in `stoplist` or `custom`.
pub fn remove_stopwords(
    tokens: Vec<Token>,
    stoplist: &StopList,
    custom: &HashSet<String>,
) -> Vec<Token> {
    tokens
        .into_iter()
        .filter(|t| !stoplist.contains(&t.word) && !custom.contains(&t.word))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DedupeScope {
    #[default]
    PerRecord,
    Global,
}

/// Keeps the first occurrence of each word within `scope`.
pub fn drop_duplicate_tokens(tokens: Vec<Token>, scope: DedupeScope) -> Vec<Token> {
    let mut seen: HashSet<(u32, String)> = HashSet::new();
    tokens
        .into_iter()
        .filter(|t| {
            let key_id = match scope {
                DedupeScope::PerRecord => t.record_id,
                DedupeScope::Global => 0,
            };
            seen.insert((key_id, t.word.clone()))
        })
        .collect()
}

/// Writes tokens as `record_id,position,word`.
pub fn write_tokens_csv<W: Write>(tokens: &[Token], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["record_id", "position", "word"])?;
    for t in tokens {
        w.write_record([
            t.record_id.to_string(),
            t.position.to_string(),
            t.word.clone(),
        ])?;
    }
    w.flush()
}

pub fn read_tokens_csv<R: std::io::Read>(input: R) -> csv::Result<Vec<Token>> {
    csv::Reader::from_reader(input).deserialize().collect()
}
