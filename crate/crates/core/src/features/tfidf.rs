use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{tokenize, SparseVector};
use crate::{Error, Result};

/// A tokenized document made of independent segments (utterances).
/// N-grams never span two segments.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TokenDoc {
    pub segments: Vec<Vec<String>>,
}

impl TokenDoc {
    /// Tokenizes each line of `text` as its own segment.
    pub fn from_lines(text: &str) -> Self {
        Self { segments: text.lines().map(tokenize).filter(|s| !s.is_empty()).collect() }
    }

    pub fn n_tokens(&self) -> usize {
        self.segments.iter().map(Vec::len).sum()
    }

    pub fn tokens(&self) -> impl Iterator<Item = &String> {
        self.segments.iter().flatten()
    }

    /// All n-grams of length `1..=n_max`, joined by a single space.
    pub fn ngrams(&self, n_max: usize) -> impl Iterator<Item = String> + '_ {
        self.segments.iter().flat_map(move |seg| {
            (1..=n_max).flat_map(move |n| seg.windows(n).map(|w| w.join(" ")))
        })
    }
}

impl From<Vec<String>> for TokenDoc {
    fn from(tokens: Vec<String>) -> Self {
        Self { segments: vec![tokens] }
    }
}

impl From<Vec<&str>> for TokenDoc {
    fn from(tokens: Vec<&str>) -> Self {
        Self { segments: vec![tokens.into_iter().map(str::to_owned).collect()] }
    }
}

/// Fitted n-gram vocabulary with smoothed idf weights
/// `ln((1 + N) / (1 + df)) + 1`. Terms are indexed in lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "VocabularyRepr", into = "VocabularyRepr")]
pub struct Vocabulary {
    terms: Vec<String>,
    df: Vec<u32>,
    idf: Vec<f64>,
    n_docs: usize,
    n_max: usize,
    min_df: u32,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct VocabularyRepr {
    n_max: usize,
    min_df: u32,
    n_docs: usize,
    terms: Vec<String>,
    df: Vec<u32>,
    idf: Vec<f64>,
}

impl From<VocabularyRepr> for Vocabulary {
    fn from(r: VocabularyRepr) -> Self {
        let index = r.terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Self { terms: r.terms, df: r.df, idf: r.idf, n_docs: r.n_docs, n_max: r.n_max, min_df: r.min_df, index }
    }
}

impl From<Vocabulary> for VocabularyRepr {
    fn from(v: Vocabulary) -> Self {
        Self { n_max: v.n_max, min_df: v.min_df, n_docs: v.n_docs, terms: v.terms, df: v.df, idf: v.idf }
    }
}

pub fn smoothed_idf(n_docs: usize, df: u32) -> f64 {
    ((1.0 + n_docs as f64) / (1.0 + df as f64)).ln() + 1.0
}

/// Fits a vocabulary over all n-grams of length `1..=n_max` appearing in at
/// least `min_df` documents.
pub fn fit_tfidf(docs: &[TokenDoc], n_max: usize, min_df: u32) -> Result<Vocabulary> {
    if !(1..=3).contains(&n_max) {
        return Err(Error::invalid(format!("n_max must be in 1..=3, got {n_max}")));
    }
    if docs.is_empty() || docs.iter().all(|d| d.n_tokens() == 0) {
        return Err(Error::invalid("cannot fit tf-idf on an empty corpus"));
    }
    let mut df: BTreeMap<String, u32> = BTreeMap::new();
    for doc in docs {
        let unique: HashSet<String> = doc.ngrams(n_max).collect();
        for term in unique {
            *df.entry(term).or_insert(0) += 1;
        }
    }
    let n_docs = docs.len();
    let (terms, dfs): (Vec<String>, Vec<u32>) =
        df.into_iter().filter(|&(_, d)| d >= min_df.max(1)).unzip();
    let idf = dfs.iter().map(|&d| smoothed_idf(n_docs, d)).collect();
    let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    Ok(Vocabulary { terms, df: dfs, idf, n_docs, n_max, min_df, index })
}

/// Term counts times idf, L2-normalized. Out-of-vocabulary n-grams are
/// ignored; a document with no known n-gram maps to the zero vector.
pub fn transform_tfidf(vocab: &Vocabulary, doc: &TokenDoc) -> SparseVector {
    vocab.transform(doc)
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn min_df(&self) -> u32 {
        self.min_df
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term(&self, index: usize) -> &str {
        &self.terms[index]
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn df(&self, index: usize) -> u32 {
        self.df[index]
    }

    pub fn idf(&self, index: usize) -> f64 {
        self.idf[index]
    }

    pub fn transform(&self, doc: &TokenDoc) -> SparseVector {
        let mut counts: HashMap<usize, f64> = HashMap::new();
        for gram in doc.ngrams(self.n_max) {
            if let Some(&i) = self.index.get(&gram) {
                *counts.entry(i).or_insert(0.0) += 1.0;
            }
        }
        let mut pairs: Vec<(usize, f64)> =
            counts.into_iter().map(|(i, c)| (i, c * self.idf[i])).collect();
        pairs.sort_unstable_by_key(|&(i, _)| i);
        let norm = pairs.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
        if norm > 0.0 {
            pairs.iter_mut().for_each(|(_, w)| *w /= norm);
        }
        SparseVector::from_pairs(self.len(), pairs).expect("indices come from the vocabulary")
    }
}
