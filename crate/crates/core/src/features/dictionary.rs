use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Word-category dictionary in the `.dic` layout used by LIWC-style lexica:
///
/// ```text
/// %
/// 1	posemo
/// 2	family
/// %
/// good	1
/// famil*	2
/// ```
///
/// Entry lines hold a pattern followed by category references (ids or names)
/// separated by tabs or commas. A trailing `*` turns the pattern into a
/// prefix match.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryDictionary {
    categories: Vec<String>,
    literals: BTreeMap<String, Vec<usize>>,
    prefixes: Vec<(String, Vec<usize>)>,
}

impl CategoryDictionary {
    pub fn parse(src: &str) -> Result<Self> {
        let mut lines = src.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
        let mut seen_open = false;
        let mut categories = Vec::new();
        let mut by_ref: HashMap<String, usize> = HashMap::new();
        for (line_no, line) in lines.by_ref() {
            if line.trim().is_empty() {
                continue;
            }
            if line.trim() == "%" {
                if seen_open {
                    break;
                }
                seen_open = true;
                continue;
            }
            if !seen_open {
                return Err(Error::Parse { line: line_no, message: "expected `%` opening the category section".into() });
            }
            let mut parts = line.split('\t').map(str::trim).filter(|s| !s.is_empty());
            let (id, name) = match (parts.next(), parts.next()) {
                (Some(id), Some(name)) => (id, name),
                _ => return Err(Error::Parse { line: line_no, message: "category line must be `id<TAB>name`".into() }),
            };
            let slot = categories.len();
            categories.push(name.to_string());
            by_ref.insert(id.to_string(), slot);
            by_ref.entry(name.to_string()).or_insert(slot);
        }
        if categories.is_empty() {
            return Err(Error::invalid("dictionary declares no categories"));
        }

        let mut literal_map: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut prefix_map: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (line_no, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(['\t', ',']).map(str::trim).filter(|s| !s.is_empty());
            let pattern = fields.next().unwrap().to_lowercase();
            let mut cats = Vec::new();
            for r in fields {
                let c = by_ref.get(r).ok_or_else(|| Error::Parse {
                    line: line_no,
                    message: format!("unknown category `{r}`"),
                })?;
                cats.push(*c);
            }
            if cats.is_empty() {
                return Err(Error::Parse { line: line_no, message: format!("pattern `{pattern}` has no category") });
            }
            let target = match pattern.strip_suffix('*') {
                Some(stem) => prefix_map.entry(stem.to_string()).or_default(),
                None => literal_map.entry(pattern).or_default(),
            };
            target.extend(cats);
        }
        let dedup = |mut v: Vec<usize>| {
            v.sort_unstable();
            v.dedup();
            v
        };
        Ok(Self {
            categories,
            literals: literal_map.into_iter().map(|(k, v)| (k, dedup(v))).collect(),
            prefixes: prefix_map.into_iter().map(|(k, v)| (k, dedup(v))).collect(),
        })
    }

    /// A small demo lexicon; real LIWC dictionaries are licensed separately.
    pub fn demo() -> Self {
        Self::parse(include_str!("../../data/demo.dic")).expect("bundled dictionary parses")
    }

    pub fn categories(&self) -> &[String] {
        &self.categories
    }

    /// Feature names in the order produced by [`dict_features`].
    pub fn feature_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.categories.iter().map(|c| format!("dict:{c}")).collect();
        names.push("dict:token_count".into());
        names
    }

    /// Categories matched by one token.
    pub fn matches(&self, token: &str) -> Vec<usize> {
        let mut out: Vec<usize> = self.literals.get(token).cloned().unwrap_or_default();
        for (stem, cats) in &self.prefixes {
            if token.starts_with(stem.as_str()) {
                out.extend(cats);
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Per-category share of tokens matching any of the category's patterns,
/// followed by the raw token count.
pub fn dict_features<'a, I>(dict: &CategoryDictionary, tokens: I) -> Vec<f64>
where
    I: IntoIterator<Item = &'a String>,
{
    let k = dict.categories.len();
    let mut hits = vec![0usize; k];
    let mut total = 0usize;
    for token in tokens {
        total += 1;
        for c in dict.matches(token) {
            hits[c] += 1;
        }
    }
    let mut out: Vec<f64> = hits
        .into_iter()
        .map(|h| if total == 0 { 0.0 } else { h as f64 / total as f64 })
        .collect();
    out.push(total as f64);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn literal_fraction() {
        let d = CategoryDictionary::parse("%\n1\tpos\n%\ngood\t1\n").unwrap();
        let f = dict_features(&d, &toks(&["good", "bad", "good"]));
        assert!((f[0] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(f[1], 3.0);
    }

    #[test]
    fn wildcard_prefix() {
        let d = CategoryDictionary::parse("%\n1\tfam\n%\nfamil*\t1\n").unwrap();
        assert_eq!(dict_features(&d, &toks(&["families"]))[0], 1.0);
        assert_eq!(dict_features(&d, &toks(&["fame"]))[0], 0.0);
    }

    #[test]
    fn empty_doc_is_all_zero() {
        let d = CategoryDictionary::demo();
        let f = dict_features(&d, &Vec::<String>::new());
        assert!(f.iter().all(|&x| x == 0.0));
        assert_eq!(f.len(), d.categories().len() + 1);
    }

    #[test]
    fn multi_category_by_name_and_id() {
        let d = CategoryDictionary::parse("%\n1\tpos\n2\taffect\n%\nHappy\t1,affect\nsad\t2\n").unwrap();
        assert_eq!(d.matches("happy"), vec![0, 1]);
        let f = dict_features(&d, &toks(&["happy", "sad"]));
        assert_eq!(&f[..2], &[0.5, 1.0]);
    }

    #[test]
    fn token_counted_once_per_category() {
        let d = CategoryDictionary::parse("%\n1\tx\n%\nab*\t1\nabc\t1\n").unwrap();
        assert_eq!(dict_features(&d, &toks(&["abc"]))[0], 1.0);
    }

    #[test]
    fn malformed_inputs() {
        assert!(CategoryDictionary::parse("good\t1\n").is_err());
        assert!(CategoryDictionary::parse("%\n%\n").is_err());
        assert!(matches!(
            CategoryDictionary::parse("%\n1\tpos\n%\ngood\t7\n"),
            Err(Error::Parse { line: 4, .. })
        ));
    }
}
