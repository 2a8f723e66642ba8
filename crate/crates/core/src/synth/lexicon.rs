//! Built-in word lists for synthetic transcripts.

use crate::labels::Scale;

/// Words for the (left, right) pole of each scale.
pub(crate) const POLES: [(&[&str], &[&str]); 4] = [
    (
        &[
            "excited", "thrilled", "together", "celebrate", "energy", "people", "chat", "fantastic", "everyone",
            "team", "cheer", "party", "loud", "crowd", "meet", "talk", "outgoing", "social", "engage", "rally",
            "enthusiastic", "proud", "amazing", "fun",
        ],
        &[
            "consider", "reflect", "quietly", "thoughtful", "privately", "internally", "ponder", "calm", "alone",
            "reserved", "modest", "measured", "inward", "solitude", "listen", "patient", "restrained", "subtle",
            "discreet", "contemplate", "softly", "focused", "independent", "myself",
        ],
    ),
    (
        &[
            "concrete", "practical", "facts", "details", "specific", "actual", "tangible", "numbers", "precise",
            "literal", "observed", "routine", "proven", "steady", "realistic", "measurable", "present", "hands",
            "exact", "physical", "current", "existing", "experience", "data",
        ],
        &[
            "vision", "imagine", "future", "possibilities", "innovation", "transform", "potential", "patterns",
            "ideas", "conceptual", "abstract", "theory", "breakthrough", "reinvent", "horizon", "dream",
            "disrupt", "novel", "inspire", "envision", "creative", "paradigm", "frontier", "insightful",
        ],
    ),
    (
        &[
            "logic", "analysis", "efficiency", "objective", "rational", "metrics", "criteria", "optimize", "evaluate",
            "systematic", "cost", "benchmark", "accuracy", "decisive", "principle", "tradeoff", "calculate",
            "quantify", "leverage", "discipline", "critique", "consistent", "framework", "impartial",
        ],
        &[
            "values", "care", "feel", "empathy", "harmony", "compassion", "grateful", "heart", "kindness", "support",
            "family", "community", "warm", "trust", "appreciate", "personal", "gentle", "wellbeing", "thankful",
            "belonging", "hope", "fairness", "loyal", "cherish",
        ],
    ),
    (
        &[
            "plan", "schedule", "deadline", "organized", "structure", "decided", "complete", "orderly", "control",
            "commitment", "milestones", "closure", "prepared", "timeline", "roadmap", "finalize", "settled",
            "deliberate", "procedure", "agenda", "punctual", "regulated", "target", "method",
        ],
        &[
            "flexible", "adapt", "spontaneous", "open", "explore", "improvise", "options", "casual", "pivot",
            "experiment", "curious", "adjust", "evolving", "wander", "tentative", "loose", "playful", "changeable",
            "unplanned", "freedom", "discover", "maybe", "perhaps", "whenever",
        ],
    ),
];

/// Dictionary category names of the (left, right) poles.
pub(crate) const POLE_CATEGORIES: [(&str, &str); 4] = [
    ("extraversion", "introversion"),
    ("sensing", "intuition"),
    ("thinking", "feeling"),
    ("judging", "perceiving"),
];

/// Neutral earnings-call vocabulary.
pub(crate) const GENERIC: &[&str] = &[
    "the", "we", "our", "and", "to", "of", "in", "a", "for", "this", "that", "quarter", "year", "revenue", "growth",
    "customers", "market", "business", "products", "sales", "operating", "results", "first", "second", "third",
    "fourth", "fiscal", "guidance", "continue", "expect", "percent", "million", "billion", "strong", "demand",
    "capital", "cash", "flow", "investment", "segment", "region", "margin", "expenses", "income", "earnings",
    "share", "per", "basis", "points", "compared", "prior", "period", "increase", "decrease", "higher", "lower",
    "pricing", "supply", "chain", "inventory", "costs", "headwinds", "tailwinds", "momentum", "pipeline",
    "launch", "platform", "digital", "services", "solutions", "portfolio", "acquisition", "integration", "returns",
    "shareholders", "dividend", "buyback", "balance", "sheet", "debt", "liquidity", "outlook", "environment",
    "macro", "currency", "impact", "volume", "mix", "orders", "backlog", "contracts", "clients", "partners",
    "channel", "retail", "online", "store", "stores", "manufacturing", "capacity", "production", "plant",
    "facility", "regulatory", "approval", "program", "initiative", "strategy", "execution", "performance",
    "quarterly", "annual", "forward", "statements", "call", "questions", "thank", "you", "good", "morning",
    "afternoon", "today", "will", "have", "has", "been", "is", "are", "was", "were", "with", "on", "as", "at",
    "by", "from", "an", "it", "its", "be", "which", "also", "more", "than", "about", "over", "into", "across",
    "each", "new", "well", "very", "so", "now", "up", "down", "out", "just", "all", "some", "there", "their",
    "they", "what", "when", "how", "where", "these", "those", "both", "other", "any", "only", "again", "still",
];

/// Sample SIC code for each FF12 industry, in industry order.
pub(crate) const INDUSTRY_SIC: [u32; 12] = [2011, 3711, 3561, 1311, 2821, 3571, 4813, 4911, 5311, 2834, 6021, 9999];

pub(crate) const FIRST_NAMES: &[&str] = &[
    "James", "Mary", "Robert", "Patricia", "John", "Jennifer", "Michael", "Linda", "David", "Elizabeth", "William",
    "Barbara", "Richard", "Susan", "Joseph", "Jessica", "Thomas", "Sarah", "Charles", "Karen", "Daniel", "Lisa",
    "Matthew", "Nancy", "Anthony", "Betty", "Mark", "Sandra", "Steven", "Ashley", "Paul", "Emily", "Andrew",
    "Donna", "Joshua", "Michelle", "Kenneth", "Carol", "Kevin", "Amanda", "Brian", "Melissa", "George", "Deborah",
    "Timothy", "Stephanie", "Ronald", "Rebecca", "Jason", "Laura",
];

pub(crate) const LAST_NAMES: &[&str] = &[
    "Smith", "Johnson", "Williams", "Brown", "Jones", "Garcia", "Miller", "Davis", "Rodriguez", "Martinez",
    "Hernandez", "Lopez", "Gonzalez", "Wilson", "Anderson", "Taylor", "Moore", "Jackson", "Martin", "Lee",
    "Perez", "Thompson", "White", "Harris", "Sanchez", "Clark", "Ramirez", "Lewis", "Robinson", "Walker", "Young",
    "Allen", "King", "Wright", "Scott", "Torres", "Nguyen", "Hill", "Flores", "Green", "Adams", "Nelson", "Baker",
    "Hall", "Rivera", "Campbell", "Mitchell", "Carter", "Roberts", "Okafor",
];

/// Lexicon of the given scale and pole as owned strings.
pub(crate) fn pole_words(scale: Scale, right: bool) -> Vec<String> {
    let (l, r) = POLES[scale.index()];
    (if right { r } else { l }).iter().map(|w| w.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn word_lists_are_disjoint_single_tokens() {
        let mut seen = BTreeSet::new();
        for (l, r) in POLES {
            for w in l.iter().chain(r.iter()) {
                assert!(seen.insert(*w), "duplicate {w}");
                assert_eq!(crate::features::tokenize(w), vec![w.to_string()]);
            }
        }
        for w in GENERIC {
            assert!(!seen.contains(w), "generic word {w} is also a pole word");
        }
    }
}
