//! Treebank metadata and subset definitions bundled with the crate.

use crate::error::{Error, Result};
use crate::model::{CodeMap, Metadata, SubsetDef};

const TREEBANKS: &str = include_str!("../../../data/treebanks.tsv");
const CODES: &str = include_str!("../../../data/codes.tsv");

const SUBSETS: [(&str, &str); 8] = [
    ("Ma18", include_str!("../../../data/subsets/Ma18.json")),
    ("Lh16", include_str!("../../../data/subsets/Lh16.json")),
    ("SA17", include_str!("../../../data/subsets/SA17.json")),
    ("Sm18", include_str!("../../../data/subsets/Sm18.json")),
    ("Ku19", include_str!("../../../data/subsets/Ku19.json")),
    ("AG20", include_str!("../../../data/subsets/AG20.json")),
    ("D21", include_str!("../../../data/subsets/D21.json")),
    ("Easy", include_str!("../../../data/subsets/Easy.json")),
];

/// Names of the bundled subsets.
pub fn subset_names() -> impl Iterator<Item = &'static str> {
    SUBSETS.iter().map(|(n, _)| *n)
}

pub fn subset(name: &str) -> Result<SubsetDef> {
    SUBSETS
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::Invalid(format!("no bundled subset named `{name}`")))
        .and_then(|(n, text)| SubsetDef::parse(text, n))
}

pub fn subsets() -> Vec<SubsetDef> {
    subset_names().map(|n| subset(n).expect("bundled subsets parse")).collect()
}

pub fn metadata() -> Metadata {
    Metadata::read(TREEBANKS.as_bytes()).expect("bundled metadata parses")
}

pub fn code_map() -> CodeMap {
    CodeMap::read(CODES.as_bytes()).expect("bundled code map parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_subsets_resolve() {
        let meta = metadata();
        for s in subsets() {
            s.validate(&meta).unwrap();
        }
        let sizes: Vec<_> = subsets().iter().map(|s| (s.name.clone(), s.size())).collect();
        assert!(sizes.contains(&("Ku19".to_string(), 13)));
        assert!(sizes.contains(&("Easy".to_string(), 10)));
    }

    #[test]
    fn easy_has_no_repeated_language() {
        let meta = metadata();
        let easy = subset("easy").unwrap();
        let mut langs: Vec<_> = easy.members.iter().map(|m| &meta.get(m).unwrap().language).collect();
        langs.sort();
        langs.dedup();
        assert_eq!(langs.len(), 10);
    }

    #[test]
    fn appendix_sizes() {
        let meta = metadata();
        assert_eq!(meta.get("Tamil-TTB").unwrap().size_tokens, 9_000);
        assert_eq!(meta.get("Czech-PDT").unwrap().size_tokens, 1_509_000);
        assert_eq!(meta.get("Arabic-PADT").unwrap().size_tokens, 282_000);
    }

    #[test]
    fn codes_point_at_metadata() {
        let meta = metadata();
        let codes = code_map();
        assert!(!codes.is_empty());
        for line in CODES.lines().skip(1) {
            let code = line.split('\t').next().unwrap();
            assert!(meta.get(codes.resolve(code)).is_some(), "{code}");
        }
    }
}
