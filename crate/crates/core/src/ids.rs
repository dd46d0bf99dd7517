//! Deterministic identifier encoding shared by every derived construction.

/// Encodes an ordered pair of identifiers as `"(a,b)"`.
pub fn pair(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

/// Splits a `"(a,b)"` key using membership predicates for each half.
///
/// Identifiers may themselves contain commas and parentheses, so every comma
/// is tried as the separator; the split must be unique.
pub fn split_pair(
    key: &str,
    left: impl Fn(&str) -> bool,
    right: impl Fn(&str) -> bool,
) -> Option<(&str, &str)> {
    let inner = key.strip_prefix('(')?.strip_suffix(')')?;
    let mut found = None;
    for (i, ch) in inner.char_indices() {
        if ch != ',' {
            continue;
        }
        let (a, b) = (&inner[..i], &inner[i + 1..]);
        if left(a) && right(b) {
            if found.is_some() {
                return None;
            }
            found = Some((a, b));
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_pairs_split_by_membership() {
        let key = pair("(x,y)", "z");
        assert_eq!(key, "((x,y),z)");
        let got = split_pair(&key, |a| a == "(x,y)", |b| b == "z");
        assert_eq!(got, Some(("(x,y)", "z")));
        assert_eq!(split_pair(&key, |_| false, |_| true), None);
        assert_eq!(split_pair("x,y", |_| true, |_| true), None);
    }
}
