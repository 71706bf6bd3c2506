//! NRC emotion and Bing polarity lexicons.
//!
//! NRC files are the standard three-column association layout
//! (`word<TAB>category<TAB>flag`); Bing lexicons come as two word lists.
//! Words are stored lower-case and matched exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::textprep::parse_word_list;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("cannot read lexicon {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{source_name}: malformed line {line}: {message}")]
    MalformedLine {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("{source_name}: unknown category `{category}` on line {line}")]
    UnknownCategory {
        source_name: String,
        line: usize,
        category: String,
    },
    #[error("word `{0}` appears in both the positive and negative lists")]
    ConflictingPolarity(String),
    #[error("{0}: empty lexicon")]
    Empty(String),
}

/// Emotion and polarity categories. Declaration order is the column order
/// used in `metrics.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Trust,
    Negative,
    Positive,
}

impl Category {
    pub const ALL: [Category; 10] = [
        Category::Anger,
        Category::Anticipation,
        Category::Disgust,
        Category::Fear,
        Category::Joy,
        Category::Sadness,
        Category::Surprise,
        Category::Trust,
        Category::Negative,
        Category::Positive,
    ];

    pub const POLARITIES: [Category; 2] = [Category::Negative, Category::Positive];

    pub fn name(self) -> &'static str {
        match self {
            Category::Anger => "anger",
            Category::Anticipation => "anticipation",
            Category::Disgust => "disgust",
            Category::Fear => "fear",
            Category::Joy => "joy",
            Category::Sadness => "sadness",
            Category::Surprise => "surprise",
            Category::Trust => "trust",
            Category::Negative => "negative",
            Category::Positive => "positive",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| s.to_string())
    }
}

/// A set of categories packed into a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CategorySet(u16);

impl CategorySet {
    pub const EMPTY: CategorySet = CategorySet(0);

    pub fn insert(&mut self, c: Category) -> bool {
        let bit = 1 << c.index();
        let fresh = self.0 & bit == 0;
        self.0 |= bit;
        fresh
    }

    pub fn contains(self, c: Category) -> bool {
        self.0 & (1 << c.index()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: CategorySet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Category> {
        Category::ALL.into_iter().filter(move |&c| self.contains(c))
    }
}

impl FromIterator<Category> for CategorySet {
    fn from_iter<I: IntoIterator<Item = Category>>(iter: I) -> Self {
        let mut set = CategorySet::EMPTY;
        for c in iter {
            set.insert(c);
        }
        set
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LexiconKind {
    Nrc,
    Bing,
}

impl LexiconKind {
    /// The categories a lexicon of this kind may assign.
    pub fn legal(self) -> CategorySet {
        match self {
            LexiconKind::Nrc => Category::ALL.into_iter().collect(),
            LexiconKind::Bing => Category::POLARITIES.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    kind: LexiconKind,
    entries: BTreeMap<String, CategorySet>,
}

impl Lexicon {
    pub fn kind(&self) -> LexiconKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Exact-match lookup; unknown words map to the empty set.
    pub fn lookup(&self, word: &str) -> CategorySet {
        self.entries.get(word).copied().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, CategorySet)> {
        self.entries.iter().map(|(w, &c)| (w.as_str(), c))
    }

    /// Parses NRC association text. Returns the lexicon and any warnings
    /// (currently only duplicate `(word, category)` lines).
    pub fn parse_nrc(
        text: &str,
        source_name: &str,
    ) -> Result<(Lexicon, Vec<String>), LexiconError> {
        let mut entries: BTreeMap<String, CategorySet> = BTreeMap::new();
        let mut seen: BTreeMap<(String, Category), usize> = BTreeMap::new();
        let mut warnings = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.trim_end_matches('\r');
            if raw.trim().is_empty() {
                continue;
            }
            let malformed = |message: String| LexiconError::MalformedLine {
                source_name: source_name.to_string(),
                line,
                message,
            };
            let fields: Vec<&str> = raw.split('\t').collect();
            let [word, category, flag] = fields[..] else {
                return Err(malformed(format!(
                    "expected 3 tab-separated fields, found {}",
                    fields.len()
                )));
            };
            let word = word.trim().to_lowercase();
            if word.is_empty() {
                return Err(malformed("empty word".to_string()));
            }
            let category: Category =
                category
                    .trim()
                    .parse()
                    .map_err(|category| LexiconError::UnknownCategory {
                        source_name: source_name.to_string(),
                        line,
                        category,
                    })?;
            let flag = match flag.trim() {
                "0" => false,
                "1" => true,
                other => return Err(malformed(format!("flag must be 0 or 1, found `{other}`"))),
            };
            if let Some(first) = seen.insert((word.clone(), category), line) {
                warnings.push(format!(
                    "{source_name}: duplicate entry ({word}, {category}) on line {line}, first seen on line {first}"
                ));
            }
            if flag {
                entries.entry(word).or_default().insert(category);
            }
        }

        if entries.is_empty() {
            return Err(LexiconError::Empty(source_name.to_string()));
        }
        Ok((
            Lexicon {
                kind: LexiconKind::Nrc,
                entries,
            },
            warnings,
        ))
    }

    /// Builds a Bing lexicon from the two word-list texts.
    pub fn parse_bing(
        positive: &str,
        negative: &str,
        source_name: &str,
    ) -> Result<Lexicon, LexiconError> {
        let pos = parse_word_list(positive, ';');
        let neg = parse_word_list(negative, ';');
        if let Some(word) = pos.intersection(&neg).min() {
            return Err(LexiconError::ConflictingPolarity(word.clone()));
        }
        let tagged = |words: std::collections::HashSet<String>, c: Category| {
            words
                .into_iter()
                .map(move |w| (w, [c].into_iter().collect::<CategorySet>()))
        };
        let entries: BTreeMap<String, CategorySet> = tagged(pos, Category::Positive)
            .chain(tagged(neg, Category::Negative))
            .collect();
        if entries.is_empty() {
            return Err(LexiconError::Empty(source_name.to_string()));
        }
        Ok(Lexicon {
            kind: LexiconKind::Bing,
            entries,
        })
    }
}

fn read(path: &Path) -> Result<String, LexiconError> {
    std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads an NRC lexicon file, logging duplicate-line warnings.
pub fn load_nrc(path: impl AsRef<Path>) -> Result<Lexicon, LexiconError> {
    let path = path.as_ref();
    let (lexicon, warnings) = Lexicon::parse_nrc(&read(path)?, &path.display().to_string())?;
    for w in warnings {
        log::warn!("{w}");
    }
    Ok(lexicon)
}

pub fn load_bing(
    positive: impl AsRef<Path>,
    negative: impl AsRef<Path>,
) -> Result<Lexicon, LexiconError> {
    let (pos, neg) = (positive.as_ref(), negative.as_ref());
    let name = format!("{} + {}", pos.display(), neg.display());
    Lexicon::parse_bing(&read(pos)?, &read(neg)?, &name)
}
