//! Text features: a shared tokenizer, n-gram tf-idf vectors and
//! category-dictionary (LIWC-style) features.

mod dictionary;
mod sparse;
mod tfidf;
mod tokenize;

pub use dictionary::{dict_features, CategoryDictionary};
pub use sparse::SparseVector;
pub use tfidf::{fit_tfidf, transform_tfidf, TokenDoc, Vocabulary};
pub use tokenize::tokenize;
