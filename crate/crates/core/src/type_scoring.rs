//! Concept typing from rank-weighted WordNet senses, and the per-sieve
//! comparison matrices that decide which concept types may be compared.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::{Chain, CorpusIndex};

/// NE labels that count as evidence for a country reading of a location.
pub const COUNTRY_NE_LABELS: &[&str] = &["GPE", "COUNTRY"];

#[derive(Debug, Error)]
pub enum TypeError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("comparison matrix is not symmetric at ({0}, {1})")]
    Asymmetric(ConceptType, ConceptType),
    #[error("comparison matrix has no entry for ({0}, {1})")]
    MissingEntry(ConceptType, ConceptType),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseType {
    Person,
    Group,
    Country,
    Misc,
}

impl BaseType {
    pub const ALL: [BaseType; 4] = [
        BaseType::Person,
        BaseType::Group,
        BaseType::Country,
        BaseType::Misc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseType::Person => "PERSON",
            BaseType::Group => "GROUP",
            BaseType::Country => "COUNTRY",
            BaseType::Misc => "MISC",
        }
    }
}

impl FromStr for BaseType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BaseType::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown base type {s:?}"))
    }
}

/// One of the eight engine types: a base type plus its NE / non-NE variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConceptType {
    pub base: BaseType,
    pub is_ne: bool,
}

impl ConceptType {
    pub const fn new(base: BaseType, is_ne: bool) -> Self {
        ConceptType { base, is_ne }
    }

    pub fn all() -> impl Iterator<Item = ConceptType> {
        BaseType::ALL
            .into_iter()
            .flat_map(|b| [ConceptType::new(b, true), ConceptType::new(b, false)])
    }
}

impl fmt::Display for ConceptType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let variant = if self.is_ne { "NE" } else { "NN" };
        write!(f, "{}-{}", self.base.name(), variant)
    }
}

impl FromStr for ConceptType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (base, variant) = s
            .rsplit_once('-')
            .ok_or_else(|| format!("type {s:?} lacks an -NE/-NN suffix"))?;
        let is_ne = match variant {
            "NE" => true,
            "NN" => false,
            other => return Err(format!("unknown type variant {other:?}")),
        };
        Ok(ConceptType::new(base.parse()?, is_ne))
    }
}

/// Accumulated sense weights per lexicographer category.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TypeScore {
    weights: BTreeMap<String, f64>,
}

impl TypeScore {
    pub fn add(&mut self, category: &str, weight: f64) {
        *self.weights.entry(category.to_string()).or_insert(0.0) += weight;
    }

    pub fn get(&self, category: &str) -> f64 {
        self.weights.get(category).copied().unwrap_or(0.0)
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.weights.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn scaled(&self, factor: f64) -> TypeScore {
        TypeScore {
            weights: self
                .weights
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        }
    }
}

impl FromIterator<(String, f64)> for TypeScore {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        let mut score = TypeScore::default();
        for (k, v) in iter {
            score.add(&k, v);
        }
        score
    }
}

/// Weight of a sense at the given 1-based rank.
pub fn rank_weight(rank: u32) -> f64 {
    1.0 / f64::from(rank.max(1))
}

/// Sums `1/rank` per category over the head senses of every chain member.
pub fn score_types(chain: &Chain, index: &CorpusIndex<'_>) -> TypeScore {
    let mut score = TypeScore::default();
    for mention in index.chain_mentions(chain) {
        for sense in &mention.sense_ranks {
            score.add(&sense.category, rank_weight(sense.rank));
        }
    }
    score
}

/// Category → base type table. Line order doubles as the tie-break order.
#[derive(Debug, Clone)]
pub struct CategoryMap {
    order: HashMap<String, usize>,
    base: HashMap<String, BaseType>,
}

const DEFAULT_CATEGORIES: &str = include_str!("../data/categories.txt");

impl Default for CategoryMap {
    fn default() -> Self {
        CategoryMap::parse(DEFAULT_CATEGORIES).expect("bundled category map is valid")
    }
}

impl CategoryMap {
    pub fn parse(text: &str) -> Result<Self, TypeError> {
        let mut order = HashMap::new();
        let mut base = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(cat), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(TypeError::Parse {
                    line: i + 1,
                    message: "expected `category base`".into(),
                });
            };
            let b: BaseType = b.parse().map_err(|message| TypeError::Parse {
                line: i + 1,
                message,
            })?;
            let next = order.len();
            order.entry(cat.to_string()).or_insert(next);
            base.insert(cat.to_string(), b);
        }
        Ok(CategoryMap { order, base })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TypeError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| TypeError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Unmapped categories fall back to MISC.
    pub fn base_of(&self, category: &str) -> BaseType {
        self.base.get(category).copied().unwrap_or(BaseType::Misc)
    }

    /// Category with the highest weight; ties go to the category listed
    /// first in the table, then (for unlisted ones) to the smaller name.
    pub fn argmax<'s>(&self, score: &'s TypeScore) -> Option<&'s str> {
        let key = |cat: &str| (self.order.get(cat).copied().unwrap_or(usize::MAX), cat.to_string());
        score
            .iter()
            .filter(|(_, w)| *w > 0.0)
            .min_by(|(ca, wa), (cb, wb)| {
                wb.total_cmp(wa).then_with(|| key(ca).cmp(&key(cb)))
            })
            .map(|(c, _)| c)
    }
}

/// Turns a chain's sense score into its concept type.
#[derive(Debug, Clone, Default)]
pub struct TypeAssigner {
    pub categories: CategoryMap,
}

impl TypeAssigner {
    pub fn new(categories: CategoryMap) -> Self {
        TypeAssigner { categories }
    }

    /// Base type from the arg-max category; NE variant when at least half of
    /// the chain's mentions carry an NE label. A location only becomes
    /// COUNTRY when some member is labelled as a country-like entity.
    pub fn assign(&self, score: &TypeScore, chain: &Chain, index: &CorpusIndex<'_>) -> ConceptType {
        let members = index.chain_mentions(chain);
        let ne_count = members.iter().filter(|m| m.is_ne()).count();
        let is_ne = !members.is_empty() && 2 * ne_count >= members.len();

        let base = match self.categories.argmax(score) {
            None => BaseType::Misc,
            Some(cat) => match self.categories.base_of(cat) {
                BaseType::Country => {
                    let country_evidence = members.iter().any(|m| {
                        m.ne_type
                            .as_deref()
                            .is_some_and(|ne| COUNTRY_NE_LABELS.contains(&ne))
                    });
                    if country_evidence {
                        BaseType::Country
                    } else {
                        BaseType::Misc
                    }
                }
                other => other,
            },
        };
        ConceptType::new(base, is_ne)
    }

    pub fn type_chain(&self, chain: &Chain, index: &CorpusIndex<'_>) -> ConceptType {
        self.assign(&score_types(chain, index), chain, index)
    }
}

/// Which pairs of concept types one sieve may compare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonMatrix {
    pub sieve_id: u8,
    entries: HashMap<(ConceptType, ConceptType), bool>,
}

impl ComparisonMatrix {
    /// Builds a matrix from a predicate, which must be symmetric.
    pub fn from_fn(sieve_id: u8, allowed: impl Fn(ConceptType, ConceptType) -> bool) -> Self {
        let mut entries = HashMap::new();
        for x in ConceptType::all() {
            for y in ConceptType::all() {
                entries.insert((x, y), allowed(x, y));
            }
        }
        ComparisonMatrix { sieve_id, entries }
    }

    /// Parses the whitespace-separated matrix format: a header row of type
    /// names (first cell is a corner label), then one row per type. Cells
    /// `>= 1` allow comparison. Unknown type names are skipped.
    pub fn parse(sieve_id: u8, text: &str) -> Result<Self, TypeError> {
        let mut rows = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (_, header) = rows.next().ok_or(TypeError::Parse {
            line: 0,
            message: "empty matrix file".into(),
        })?;
        let columns: Vec<Option<ConceptType>> = header
            .split_whitespace()
            .skip(1)
            .map(|name| name.parse().ok())
            .collect();

        let mut entries = HashMap::new();
        for (line, row) in rows {
            let mut cells = row.split_whitespace();
            let name = cells.next().unwrap_or_default();
            let values: Vec<&str> = cells.collect();
            if values.len() != columns.len() {
                return Err(TypeError::Parse {
                    line,
                    message: format!("expected {} cells, found {}", columns.len(), values.len()),
                });
            }
            let Ok(x) = name.parse::<ConceptType>() else {
                continue;
            };
            for (col, value) in columns.iter().zip(values) {
                let v: i64 = value.parse().map_err(|_| TypeError::Parse {
                    line,
                    message: format!("cell {value:?} is not an integer"),
                })?;
                if let Some(y) = col {
                    entries.insert((x, *y), v >= 1);
                }
            }
        }

        for (&(x, y), &v) in &entries {
            if let Some(&w) = entries.get(&(y, x)) {
                if v != w {
                    let (a, b) = if x <= y { (x, y) } else { (y, x) };
                    return Err(TypeError::Asymmetric(a, b));
                }
            }
        }
        Ok(ComparisonMatrix { sieve_id, entries })
    }

    pub fn load(sieve_id: u8, path: impl AsRef<Path>) -> Result<Self, TypeError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| TypeError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(sieve_id, &text)
    }

    pub fn comparable(&self, x: ConceptType, y: ConceptType) -> Result<bool, TypeError> {
        match (self.entries.get(&(x, y)), self.entries.get(&(y, x))) {
            (Some(&v), _) | (None, Some(&v)) => Ok(v),
            (None, None) => Err(TypeError::MissingEntry(x, y)),
        }
    }

    /// Lenient form used inside sieves: an absent entry forbids comparison.
    pub fn allows(&self, x: ConceptType, y: ConceptType) -> bool {
        self.comparable(x, y).unwrap_or(false)
    }

    /// True when the type may be compared with at least one type.
    pub fn participates(&self, x: ConceptType) -> bool {
        ConceptType::all().any(|y| self.allows(x, y))
    }

    /// Every type pair must have an entry.
    pub fn check_complete(&self) -> Result<(), TypeError> {
        for x in ConceptType::all() {
            for y in ConceptType::all() {
                self.comparable(x, y)?;
            }
        }
        Ok(())
    }
}

/// The five per-sieve matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveMatrices([ComparisonMatrix; 5]);

const DEFAULT_MATRICES: [&str; 5] = [
    include_str!("../data/cm1.txt"),
    include_str!("../data/cm2.txt"),
    include_str!("../data/cm3.txt"),
    include_str!("../data/cm4.txt"),
    include_str!("../data/cm5.txt"),
];

impl Default for SieveMatrices {
    fn default() -> Self {
        SieveMatrices(std::array::from_fn(|i| {
            ComparisonMatrix::parse(i as u8 + 1, DEFAULT_MATRICES[i])
                .expect("bundled matrices are valid")
        }))
    }
}

impl SieveMatrices {
    pub fn new(matrices: [ComparisonMatrix; 5]) -> Self {
        SieveMatrices(matrices)
    }

    /// Matrix of sieve `1..=5`.
    pub fn get(&self, sieve: u8) -> &ComparisonMatrix {
        &self.0[usize::from(sieve.clamp(1, 5)) - 1]
    }

    pub fn set(&mut self, sieve: u8, matrix: ComparisonMatrix) {
        self.0[usize::from(sieve.clamp(1, 5)) - 1] = matrix;
    }

    /// Text of the bundled default matrix for a sieve.
    pub fn default_text(sieve: u8) -> &'static str {
        DEFAULT_MATRICES[usize::from(sieve.clamp(1, 5)) - 1]
    }
}
