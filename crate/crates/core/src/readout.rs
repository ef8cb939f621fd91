//! Shared vote-counting helpers.
//!
//! Every approach that aggregates label sets (leaf readouts, forest votes,
//! nearest-neighbour votes, rule extraction) uses the same rule: keep the
//! labels appearing in strictly more than half of the contributing sets,
//! and if none clears that bar fall back to the most frequent label,
//! breaking frequency ties lexicographically.

use alloc::collections::BTreeMap;
use alloc::string::String;

use crate::record::LabelSet;

/// Occurrence counts over a collection of label sets, keyed by label.
pub(crate) fn count_labels<'a, I>(sets: I) -> (BTreeMap<&'a str, usize>, usize)
where
    I: IntoIterator<Item = &'a LabelSet>,
{
    let mut counts: BTreeMap<&'a str, usize> = BTreeMap::new();
    let mut total = 0usize;
    for set in sets {
        total += 1;
        for label in set {
            *counts.entry(label.as_str()).or_insert(0) += 1;
        }
    }
    (counts, total)
}

/// Thresholded majority over pre-counted votes: labels with strictly more
/// than `total / 2` votes, falling back to the single most frequent label
/// (lexicographically first on ties) when nothing clears the threshold.
pub(crate) fn majority_from_counts(counts: &BTreeMap<&str, usize>, total: usize) -> LabelSet {
    let mut winners = LabelSet::new();
    for (label, &count) in counts {
        if 2 * count > total {
            winners.insert(String::from(*label));
        }
    }
    if winners.is_empty() {
        if let Some(best) = modal_from_counts(counts) {
            winners.insert(best);
        }
    }
    winners
}

/// Thresholded majority over label sets; see [`majority_from_counts`].
pub(crate) fn majority_labels<'a, I>(sets: I) -> LabelSet
where
    I: IntoIterator<Item = &'a LabelSet>,
{
    let (counts, total) = count_labels(sets);
    majority_from_counts(&counts, total)
}

/// Most frequent key, lexicographically first on ties. BTreeMap iteration
/// is ordered, so the strict `>` comparison does the tie-breaking.
pub(crate) fn modal_from_counts(counts: &BTreeMap<&str, usize>) -> Option<String> {
    let mut best: Option<(&str, usize)> = None;
    for (label, &count) in counts {
        match best {
            Some((_, best_count)) if count <= best_count => {}
            _ => best = Some((label, count)),
        }
    }
    best.map(|(label, _)| String::from(label))
}

/// Most frequent value among plain strings, lexicographically first on ties.
pub(crate) fn modal_value<'a, I>(values: I) -> Option<String>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut counts: BTreeMap<&'a str, usize> = BTreeMap::new();
    for value in values {
        *counts.entry(value).or_insert(0) += 1;
    }
    modal_from_counts(&counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn set(labels: &[&str]) -> LabelSet {
        labels.iter().map(|l| String::from(*l)).collect()
    }

    #[test]
    fn strict_majority_keeps_only_labels_above_half() {
        let sets = [set(&["a", "b"]), set(&["a"]), set(&["a", "c"])];
        assert_eq!(majority_labels(sets.iter()), set(&["a"]));
    }

    #[test]
    fn exact_half_does_not_qualify() {
        // Two sets, each label appears once: 1 > 2/2 is false, so the
        // fallback picks the lexicographically first most frequent label.
        let sets = [set(&["a"]), set(&["b"])];
        assert_eq!(majority_labels(sets.iter()), set(&["a"]));
    }

    #[test]
    fn fallback_prefers_higher_frequency_before_lexicographic_order() {
        let sets = [
            set(&["b"]),
            set(&["b"]),
            set(&["a"]),
            set(&["c"]),
            set(&["c"]),
        ];
        // b and c both appear twice out of five; neither clears 2.5, and b
        // sorts before c.
        assert_eq!(majority_labels(sets.iter()), set(&["b"]));
    }

    #[test]
    fn empty_input_yields_empty_set() {
        let sets: Vec<LabelSet> = Vec::new();
        assert_eq!(majority_labels(sets.iter()), LabelSet::new());
    }

    #[test]
    fn modal_value_breaks_ties_lexicographically() {
        let values = ["regression", "classification"];
        assert_eq!(
            modal_value(values.iter().copied()),
            Some(String::from("classification"))
        );
        assert_eq!(modal_value([].iter().copied()), None);
    }
}
