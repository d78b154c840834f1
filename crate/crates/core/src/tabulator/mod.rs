//! Knot tables: enumeration, naming, invariant records, distinguishing
//! reports and JSONL persistence.

pub mod battery;
pub mod enumerate;
pub mod record;

pub use battery::{
    distinguish_lazy, distinguish_report, fill_invariants, parse_battery, record_for_class,
    record_for_diagram, DistinguishReport, Invariant, InvariantOptions,
};
pub use enumerate::{enumerate_knots, lyndon_words, ClassFilter, KnotClass};
pub use record::{KnotRecord, Table, TableHeader, SCHEMA_VERSION};

use crate::error::Result;

/// Name of the `rank`-th (1-based) knot with `n` crossings in a table of
/// the given class.
pub fn knot_name(filter: ClassFilter, n: usize, rank: usize) -> String {
    format!("{}{n}.{rank}", filter.prefix())
}

/// Tabulates all flat knots with `1..=max` crossings passing `filter`,
/// named by rank of their class key within each crossing number.
pub fn tabulate(max: usize, filter: ClassFilter, opts: &InvariantOptions) -> Result<Table> {
    tabulate_with_progress(max, filter, opts, |_, _| {})
}

/// [`tabulate`] reporting `(crossings, knots found)` after each crossing
/// number is enumerated.
pub fn tabulate_with_progress(
    max: usize,
    filter: ClassFilter,
    opts: &InvariantOptions,
    mut progress: impl FnMut(usize, usize),
) -> Result<Table> {
    let mut records = Vec::new();
    for n in 1..=max {
        let classes = enumerate_knots(n, filter);
        progress(n, classes.len());
        for (i, c) in classes.iter().enumerate() {
            records.push(record_for_class(&knot_name(filter, n, i + 1), c, opts)?);
        }
    }
    Ok(Table { max_crossings: max, class: filter.prefix().to_string(), records })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table_round_trips() {
        let t = tabulate(4, ClassFilter::All, &InvariantOptions::standard()).unwrap();
        assert_eq!(t.counts().into_iter().collect::<Vec<_>>(), vec![(3, 1), (4, 11)]);
        assert_eq!(t.records[0].name, "3.1");
        assert_eq!(t.records[0].gauss_code, "O1O2O3U1U3U2");
        let text = t.to_jsonl();
        assert!(text.starts_with("{\"schema_version\":1"));
        assert_eq!(Table::from_jsonl(&text).unwrap(), t);
    }

    #[test]
    fn import_rejects_edited_crossings() {
        let t = tabulate(3, ClassFilter::All, &InvariantOptions::default()).unwrap();
        let text = t.to_jsonl().replace("\"crossings\":3", "\"crossings\":4");
        match Table::from_jsonl(&text) {
            Err(crate::Error::InvalidRecord { name, .. }) => assert_eq!(name, "3.1"),
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn import_rejects_garbage_lines() {
        let t = tabulate(3, ClassFilter::All, &InvariantOptions::default()).unwrap();
        let text = format!("{}not json\n", t.to_jsonl());
        assert!(matches!(Table::from_jsonl(&text), Err(crate::Error::MalformedLine { line: 3, .. })));
        assert!(matches!(Table::from_jsonl(""), Err(crate::Error::MalformedLine { .. })));
    }

    #[test]
    fn optional_columns_are_omitted() {
        let t = tabulate(3, ClassFilter::All, &InvariantOptions::default()).unwrap();
        let line = t.to_jsonl().lines().nth(1).unwrap().to_string();
        assert!(!line.contains("jk_enhanced"));
        assert!(!line.contains("arrow_cable3_const"));
        assert!(line.contains("\"arrow_poly\":\"2*K1^2 - K2\""));
    }

    #[test]
    fn missing_column_is_reported() {
        let t = tabulate(4, ClassFilter::All, &InvariantOptions::default()).unwrap();
        let err = distinguish_report(&t, &[Invariant::JkEnhanced]).unwrap_err();
        assert_eq!(err, crate::Error::MissingInvariant("jk_enhanced".into()));
    }

    #[test]
    fn lazy_and_eager_reports_agree() {
        let battery = [Invariant::Phi, Invariant::Arrow, Invariant::JkEnhanced];
        let eager = tabulate(4, ClassFilter::All, &InvariantOptions::standard()).unwrap();
        let mut lazy = tabulate(4, ClassFilter::All, &InvariantOptions::default()).unwrap();
        let a = distinguish_report(&eager, &battery).unwrap();
        let b = distinguish_lazy(&mut lazy, &battery).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.values().sum::<usize>(), 0);
    }

    #[test]
    fn battery_parsing() {
        assert_eq!(
            parse_battery("phi,arrow2,jk_en").unwrap(),
            vec![Invariant::Phi, Invariant::Arrow2, Invariant::JkEnhanced]
        );
        assert!(parse_battery("phi,nope").is_err());
    }
}
