//! Variable names and fresh-name generation.

use std::collections::BTreeSet;
use std::rc::Rc;

pub type Name = Rc<str>;

/// Returns `base` if it is not in `avoid`, otherwise the first `base<n>`
/// (n = 1, 2, ...) that is not.
pub fn fresh(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    if !avoid.contains(base) {
        return Name::from(base);
    }
    (1..)
        .map(|n| format!("{stem}{n}"))
        .find(|cand| !avoid.contains(cand.as_str()))
        .map(|s| Name::from(s.as_str()))
        .expect("an unbounded range always yields a fresh name")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_skips_taken_names() {
        let avoid: BTreeSet<Name> = ["k", "k1", "x"].iter().map(|s| Name::from(*s)).collect();
        assert_eq!(&*fresh("k", &avoid), "k2");
        assert_eq!(&*fresh("y", &avoid), "y");
        assert_eq!(&*fresh("x", &avoid), "x1");
    }
}
