use crate::{Error, Result};

const TITLES: &[&str] = &["dr", "mr", "mrs", "ms", "sir", "prof"];

fn is_title(token: &str) -> bool {
    let bare = token.strip_suffix('.').unwrap_or(token);
    TITLES.iter().any(|t| bare.eq_ignore_ascii_case(t))
}

fn is_initial(token: &str) -> bool {
    let bare = token.strip_suffix('.').unwrap_or(token);
    let mut chars = bare.chars();
    matches!((chars.next(), chars.next()), (Some(c), None) if c.is_alphabetic())
}

/// Canonical CEO name: leading titles and single-letter initials dropped,
/// whitespace collapsed, case preserved.
///
/// `"Dr. Lisa Su"` becomes `"Lisa Su"` and `"Elon R. Musk"` becomes `"Elon Musk"`.
pub fn normalize_name(raw: &str) -> Result<String> {
    let mut tokens: Vec<&str> = raw.split_whitespace().collect();
    let leading_titles = tokens.iter().take_while(|t| is_title(t)).count();
    tokens.drain(..leading_titles);
    tokens.retain(|t| !is_initial(t));
    if tokens.is_empty() {
        return Err(Error::EmptyName(raw.to_string()));
    }
    Ok(tokens.join(" "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_middle_initial() {
        assert_eq!(normalize_name("Elon R. Musk").unwrap(), "Elon Musk");
        assert_eq!(normalize_name("Elon R Musk").unwrap(), "Elon Musk");
    }

    #[test]
    fn strips_titles() {
        assert_eq!(normalize_name("Dr. Lisa Su").unwrap(), "Lisa Su");
        assert_eq!(normalize_name("Sir  Richard   Branson").unwrap(), "Richard Branson");
        assert_eq!(normalize_name("MR Tim Cook").unwrap(), "Tim Cook");
    }

    #[test]
    fn lone_initial_is_error() {
        assert!(matches!(normalize_name("J."), Err(Error::EmptyName(_))));
        assert!(normalize_name("   ").is_err());
        assert!(normalize_name("Dr.").is_err());
    }

    #[test]
    fn case_preserved_and_idempotent() {
        let once = normalize_name("Dr. mary T. barra").unwrap();
        assert_eq!(once, "mary barra");
        assert_eq!(normalize_name(&once).unwrap(), once);
    }
}
