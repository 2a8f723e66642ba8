fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Lowercased word tokens split on non-alphanumeric boundaries.
///
/// An apostrophe survives only between two alphanumeric characters, so
/// `we've` stays one token while quotes around a word are dropped. Curly
/// apostrophes are folded to `'`.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c.is_alphanumeric() {
            current.extend(c.to_lowercase());
        } else if is_apostrophe(c)
            && !current.is_empty()
            && chars.peek().is_some_and(|n| n.is_alphanumeric())
        {
            current.push('\'');
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_internal_apostrophes() {
        assert_eq!(tokenize("We've learned a lot"), ["we've", "learned", "a", "lot"]);
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  ,;  ").is_empty());
    }

    #[test]
    fn drops_punctuation_and_symbols() {
        assert_eq!(tokenize("GAAP net income, 20%"), ["gaap", "net", "income", "20"]);
    }

    #[test]
    fn edge_apostrophes_dropped() {
        assert_eq!(tokenize("'quoted' rock'n'roll it\u{2019}s"), ["quoted", "rock'n'roll", "it's"]);
        assert_eq!(tokenize("dogs' bowls"), ["dogs", "bowls"]);
    }

    #[test]
    fn newlines_are_boundaries() {
        assert_eq!(tokenize("end.\nStart"), ["end", "start"]);
    }
}
