//! `key = value` text files: one pair per line, `#` starts a comment.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct KeyValueError {
    pub line: usize,
    pub reason: String,
}

impl KeyValueError {
    pub fn new(line: usize, reason: impl fmt::Display) -> Self {
        Self { line, reason: reason.to_string() }
    }
}

/// Parses every non-blank, non-comment line. Keys must be unique.
pub fn parse(text: &str) -> Result<Vec<Entry>, KeyValueError> {
    let mut entries: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| KeyValueError::new(line, "expected key = value"))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(KeyValueError::new(line, "empty key"));
        }
        if let Some(first) = entries.iter().find(|e| e.key == key) {
            return Err(KeyValueError::new(line, format!("{key} already set on line {}", first.line)));
        }
        entries.push(Entry { line, key: key.to_string(), value: value.trim().to_string() });
    }
    Ok(entries)
}

/// Splits a comma-joined list, dropping empty items.
pub fn list(value: &str) -> Vec<&str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_skips_comments() {
        let e = parse("# header\n a = 1 \n\nb=two # trailing\n").unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!((e[0].line, e[0].key.as_str(), e[0].value.as_str()), (2, "a", "1"));
        assert_eq!((e[1].line, e[1].key.as_str(), e[1].value.as_str()), (4, "b", "two"));
    }

    #[test]
    fn rejects_bad_lines() {
        assert_eq!(parse("a = 1\nnonsense").unwrap_err().line, 2);
        assert_eq!(parse(" = 1").unwrap_err().line, 1);
        assert!(parse("a=1\na=2").unwrap_err().reason.contains("line 1"));
    }

    #[test]
    fn lists() {
        assert_eq!(list(" a, b ,,c"), vec!["a", "b", "c"]);
        assert!(list("").is_empty());
    }
}
