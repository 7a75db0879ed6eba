use std::sync::LazyLock;

use regex::Regex;

static NUMBERING: LazyLock<Regex> = LazyLock::new(|| {
    // A numeric first component, then dot-separated numeric or single-letter components.
    Regex::new(r"^\s*(\d+(?:\.(?:\d+|[A-Za-z]))*)(\.?)(?:\s+|$)").unwrap()
});

static LEADER_TAIL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?:\s*(?:\.\s*){2,}|\s*…+)\s*\d*\s*$|\s+\d+\s*$").unwrap());

/// Depth of the leading numbering: `1.` → 1, `1.1` → 2, `1.1.a` → 3.
pub fn infer_numbering_level(title: &str) -> Option<usize> {
    let caps = NUMBERING.captures(title)?;
    Some(caps[1].split('.').count())
}

/// Case-folded, whitespace-folded title without leading numbering or
/// trailing dot leaders and page numbers.
pub fn normalize_title(text: &str) -> String {
    let folded = text.split_whitespace().collect::<Vec<_>>().join(" ");
    let without_tail = LEADER_TAIL.replace(&folded, "");
    let without_num = NUMBERING.replace(&without_tail, "");
    without_num.trim().to_lowercase()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_patterns() {
        assert_eq!(infer_numbering_level("1. Introduction"), Some(1));
        assert_eq!(infer_numbering_level("1."), Some(1));
        assert_eq!(infer_numbering_level("1.1"), Some(2));
        assert_eq!(infer_numbering_level("1.1 Scope"), Some(2));
        assert_eq!(infer_numbering_level("1.1.a Case study"), Some(3));
        assert_eq!(infer_numbering_level("1.1.a"), Some(3));
        assert_eq!(infer_numbering_level("Introduction"), None);
        assert_eq!(infer_numbering_level("2020s in review"), None);
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_title("1.1  Scope ....... 4"), "scope");
        assert_eq!(normalize_title("SCOPE"), "scope");
        assert_eq!(normalize_title("2. Methods 7"), "methods");
        assert_eq!(normalize_title("Results"), "results");
    }
}
