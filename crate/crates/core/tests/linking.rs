mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use certpipe::extract::Role;
use certpipe::linking::{
    birth_interval, build_link_groups, link_stats, load_gold_rows, load_gold_rows_from_reader, name_key,
    parse_birth_year, row_interval, ColumnMap, GroupVerdict, LinkError, LinkOptions, PersonRow, RowSource,
    SuspectReason,
};
use common::fixture;

const NAMES: [&str; 4] = ["Johan Frederik Garmers", "Louis Martis", "Maria de Windt", "Anna Isenia"];
const ROLES: [Role; 6] = [Role::Deceased, Role::Father, Role::Mother, Role::Spouse, Role::Witness, Role::Informant];

fn row(name: &str, role: Role, year: i32, age: Option<u32>, line: u64) -> PersonRow {
    PersonRow {
        name: name.split(' ').map(String::from).collect(),
        role,
        cert_year: year,
        age,
        profession: None,
        other: None,
        source: RowSource::Gold(line),
    }
}

fn rows_strategy() -> impl Strategy<Value = Vec<PersonRow>> {
    prop::collection::vec((0..NAMES.len(), 0..ROLES.len(), 1831..=1950i32, prop::option::weighted(0.9, 0..100u32)), 0..40)
        .prop_map(|specs| {
            specs
                .into_iter()
                .enumerate()
                .map(|(i, (n, r, y, a))| row(NAMES[n], ROLES[r], y, a, i as u64 + 2))
                .collect()
        })
}

proptest! {
    #[test]
    fn interval_brackets_the_age(year in 1831..=1950i32, age in 0..120i64) {
        let iv = birth_interval(year, age).unwrap();
        prop_assert_eq!(iv.high - iv.low, 1);
        prop_assert_eq!(iv.high, year - age as i32);
        prop_assert!(iv.overlaps(&iv, 0));
    }

    #[test]
    fn groups_are_mutually_overlapping(rows in rows_strategy(), tolerance in 0..3u32, seed in any::<u64>()) {
        let options = LinkOptions { tolerance, any_order: false };
        let groups = build_link_groups(&rows, &options);
        let mut seen = BTreeSet::new();
        for g in &groups {
            prop_assert!(g.members.len() >= 2);
            for (i, a) in g.members.iter().enumerate() {
                prop_assert_eq!(name_key(&a.name, false), g.key.name.clone());
                prop_assert!(seen.insert(a.source.clone()), "row in two groups");
                let ia = row_interval(a).unwrap();
                if tolerance == 0 {
                    prop_assert!(ia.contains(g.key.birth_year));
                }
                for b in &g.members[i + 1..] {
                    prop_assert!(ia.overlaps(&row_interval(b).unwrap(), tolerance));
                }
            }
            let deaths = g.members.iter().filter(|m| m.role == Role::Deceased).count();
            prop_assert_eq!(deaths > 1, g.reasons.contains(&SuspectReason::MultipleDeaths));
            prop_assert_eq!(g.verdict == GroupVerdict::Suspect, !g.reasons.is_empty());
        }

        let stats = link_stats(&groups, &rows, &options);
        prop_assert_eq!(stats.linkable_rows, rows.iter().filter(|r| r.age.is_some()).count());
        prop_assert_eq!(stats.singleton_rows + seen.len(), stats.linkable_rows);

        let mut shuffled = rows.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(build_link_groups(&shuffled, &options), groups);
    }
}

#[test]
fn published_example_groups() {
    let loaded = load_gold_rows(&fixture("linking_example.csv"), &ColumnMap::default()).unwrap();
    assert!(loaded.malformed.is_empty());
    let groups = build_link_groups(&loaded.rows, &LinkOptions::default());
    let summary: Vec<(String, i32, usize, GroupVerdict)> =
        groups.iter().map(|g| (g.key.name.clone(), g.key.birth_year, g.members.len(), g.verdict)).collect();
    assert_eq!(
        summary,
        [
            ("johan frederik garmers".to_string(), 1841, 3, GroupVerdict::Plausible),
            ("louis martis".to_string(), 1837, 3, GroupVerdict::Suspect),
        ]
    );
    assert_eq!(groups[1].reasons, [SuspectReason::MultipleDeaths]);
    for r in &loaded.rows {
        if let Some(b) = r.recorded_birth_year() {
            assert!(row_interval(r).unwrap().contains(b), "{r:?}");
        }
    }
    let stats = link_stats(&groups, &loaded.rows, &LinkOptions::default());
    assert_eq!((stats.reporter_names, stats.reporter_deceased_matches), (2, 1));
    assert_eq!(stats.role_pairs.get("witness->deceased"), Some(&1));
}

#[test]
fn token_order_matters_unless_any_order() {
    let rows = [
        row("Garmers Johan", Role::Witness, 1873, Some(31), 2),
        row("Johan Garmers", Role::Deceased, 1901, Some(59), 3),
    ];
    assert!(build_link_groups(&rows, &LinkOptions::default()).is_empty());
    let groups = build_link_groups(&rows, &LinkOptions { tolerance: 0, any_order: true });
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].key.name, "garmers johan");
}

#[test]
fn tolerance_bridges_a_gap() {
    let rows = [
        row("Anna Isenia", Role::Mother, 1870, Some(30), 2),
        row("Anna Isenia", Role::Deceased, 1900, Some(58), 3),
    ];
    assert!(build_link_groups(&rows, &LinkOptions::default()).is_empty());
    let groups = build_link_groups(&rows, &LinkOptions { tolerance: 1, any_order: false });
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].verdict, GroupVerdict::Plausible);
}

#[test]
fn activity_after_death_is_suspect() {
    let rows = [
        row("Louis Martis", Role::Deceased, 1878, Some(41), 2),
        row("Louis Martis", Role::Witness, 1880, Some(43), 3),
    ];
    let groups = build_link_groups(&rows, &LinkOptions::default());
    assert_eq!(groups[0].reasons, [SuspectReason::ActivityAfterDeath]);
}

#[test]
fn rows_without_age_use_a_recorded_birth_year() {
    let mut a = row("Maria de Windt", Role::Mother, 1860, None, 2);
    a.other = Some("3/4/1830".into());
    let b = row("Maria de Windt", Role::Deceased, 1890, Some(60), 3);
    let c = row("Maria de Windt", Role::Witness, 1880, None, 4);
    let groups = build_link_groups(&[a, b, c], &LinkOptions::default());
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].members.len(), 2);
    assert_eq!(parse_birth_year("07-12-1841"), Some(1841));
    assert_eq!(parse_birth_year("Maria Nicolina Garmers"), None);
}

#[test]
fn loader_reports_bad_rows_and_headers() {
    let csv = "Naam,Rol,Jaar,Leeftijd\nJan Koster,getuige,1880,40\n,vader,1880,1\nJan Koster,vader,18x0,2\nJan Koster,vader,1880,-3\n";
    let loaded = load_gold_rows_from_reader(csv.as_bytes(), &ColumnMap::default()).unwrap();
    assert_eq!(loaded.rows.len(), 1);
    assert_eq!(loaded.rows[0].role, Role::Witness);
    assert_eq!(loaded.malformed.iter().map(|m| m.line).collect::<Vec<_>>(), [3, 4, 5]);
    assert!(matches!(
        load_gold_rows_from_reader("name,year\nA,1880\n".as_bytes(), &ColumnMap::default()),
        Err(LinkError::MissingColumn("role"))
    ));
    assert!(matches!(
        load_gold_rows_from_reader("name,role,year\n".as_bytes(), &ColumnMap::default()),
        Err(LinkError::EmptyFile)
    ));
    assert!(matches!(load_gold_rows(&fixture("absent.csv"), &ColumnMap::default()), Err(LinkError::Io { .. })));
}
