//! Tokenization shared by the BM25 channel and answer normalization.
//!
//! Documentation text is full of flags, paths and dotted field names, so the
//! characters `-`, `_`, `.`, `/` and `:` survive inside a token.

/// Characters kept inside tokens.
pub const KEEP: [char; 5] = ['-', '_', '.', '/', ':'];

fn is_keep(c: char) -> bool {
    KEEP.contains(&c)
}

/// BM25 tokens: lowercase, split on whitespace, trim leading and trailing
/// punctuation, and split on any internal punctuation outside [`KEEP`].
pub fn bm25_tokens(text: &str) -> Vec<String> {
    let lower = text.to_lowercase();
    let mut out = Vec::new();
    for word in lower.split_whitespace() {
        for piece in word.split(|c: char| !c.is_alphanumeric() && !is_keep(c)) {
            let t = piece.trim_matches(|c: char| !c.is_alphanumeric());
            if !t.is_empty() {
                out.push(t.to_string());
            }
        }
    }
    out
}

/// Answer tokens before article removal: lowercase, split on whitespace,
/// delete punctuation outside [`KEEP`], trim trailing `.`/`:`, drop tokens
/// made only of kept punctuation.
///
/// Leading `-` and `/` stay so that `--flag` and `/etc/kubernetes` compare
/// literally.
pub fn answer_tokens(text: &str) -> Vec<String> {
    let lower = text.to_lowercase();
    let mut out = Vec::new();
    for word in lower.split_whitespace() {
        let kept: String = word
            .chars()
            .filter(|&c| c.is_alphanumeric() || is_keep(c))
            .collect();
        let t = kept.trim_end_matches(['.', ':']);
        if t.chars().any(char::is_alphanumeric) {
            out.push(t.to_string());
        }
    }
    out
}
