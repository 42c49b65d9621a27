use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use loadshape::dwelling::{load_dataset, parse_dwelling_file, write_dwelling_file, LoadError, SchemaMap};
use loadshape_core::synth::{generate, Masking, SynthSpec};
use loadshape_core::PropertyId;

const HEADER: &str = "date,hour,kwh,temperature,wind_speed,rainfall\n";

fn write(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn parse(body: &str) -> Result<(Vec<loadshape_core::RawHourRow>, loadshape::dwelling::ParseReport), LoadError> {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "p1.csv", body);
    parse_dwelling_file(&path, &PropertyId::new("p1"), &SchemaMap::default())
}

#[test]
fn two_line_file() {
    let (rows, report) = parse(&format!("{HEADER}1990-01-01,0,0.4,3.5,2,0\n1990-01-01,1,0.3,3.1,2,0\n")).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].kwh, Some(0.4));
    assert_eq!(rows[1].kwh, Some(0.3));
    assert_eq!(rows[1].hour, 1);
    assert_eq!(report.rows, 2);
    assert!(report.issues.is_empty());
}

#[test]
fn na_cell_is_absent_and_reported() {
    let (rows, report) = parse(&format!("{HEADER}1990-01-01,0,NA,3.5,2,0\n1990-01-01,1,0.3,,2,0\n")).unwrap();
    assert_eq!(rows[0].kwh, None);
    assert_eq!(rows[1].temperature, None);
    assert_eq!(report.issues.len(), 1);
    assert_eq!((report.issues[0].line, report.issues[0].column), (2, "kwh"));
    assert_eq!(report.absent_cells, 1);
}

#[test]
fn bad_numbers_degrade_to_absent() {
    let (rows, report) = parse(&format!("{HEADER}1990-01-01,0,-0.5,-3,x,0\n")).unwrap();
    assert_eq!(rows[0].kwh, None);
    assert_eq!(rows[0].temperature, Some(-3.0));
    assert_eq!(rows[0].wind_speed, None);
    let columns: Vec<_> = report.issues.iter().map(|i| i.column).collect();
    assert_eq!(columns, ["kwh", "wind_speed"]);
}

#[test]
fn duplicate_timestamp_names_both_lines() {
    let err = parse(&format!("{HEADER}1990-01-01,5,0.4,,,\n1990-01-01,6,0.4,,,\n1990-01-01,5,0.2,,,\n")).unwrap_err();
    match err {
        LoadError::DuplicateTimestamp { line, first, hour, .. } => assert_eq!((line, first, hour), (4, 2, 5)),
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn structural_errors() {
    assert!(matches!(parse("date,hour,energy\n1990-01-01,0,1\n"), Err(LoadError::Header { .. })));
    assert!(matches!(parse(&format!("{HEADER}1990-13-01,0,1,,,\n")), Err(LoadError::Line { line: 2, .. })));
    assert!(matches!(parse(&format!("{HEADER}1990-01-01,24,1,,,\n")), Err(LoadError::Line { line: 2, .. })));
    let missing = parse_dwelling_file(Path::new("/nonexistent/p.csv"), &PropertyId::new("p"), &SchemaMap::default());
    assert!(matches!(missing, Err(LoadError::Io { .. })));
}

#[test]
fn schema_map_reads_renamed_and_reordered_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "p.csv", "Hour,Day,Energy\n3,1990-02-01,1.5\n");
    let schema = SchemaMap::parse("date = Day\nhour = @0\nkwh = Energy\ntemperature = -\nwind_speed = -\nrainfall = -\n").unwrap();
    let (rows, _) = parse_dwelling_file(&path, &PropertyId::new("p"), &schema).unwrap();
    assert_eq!(rows[0].date, NaiveDate::from_ymd_opt(1990, 2, 1).unwrap());
    assert_eq!((rows[0].hour, rows[0].kwh, rows[0].temperature), (3, Some(1.5), None));
}

#[test]
fn directory_of_93_dwellings() {
    let spec = SynthSpec { days: 3, masking: Masking::NONE, ..SynthSpec::default() };
    let out = generate(&spec).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for id in out.dataset.property_ids() {
        let path = dir.path().join(format!("{id}.csv"));
        write_dwelling_file(&path, out.dataset.days_of(id), |d| out.dataset.environment(d).cloned()).unwrap();
    }
    fs::write(dir.path().join("README.txt"), "not a dwelling").unwrap();
    let loaded = load_dataset(dir.path(), &SchemaMap::default()).unwrap();
    assert_eq!(loaded.dataset.property_ids().len(), 93);
    assert_eq!(loaded.dataset.days().len(), 93 * 3);
    assert_eq!(loaded.reports.len(), 93);
    assert!(loaded.merge.conflicts.is_empty());
    assert_eq!(loaded.dataset, out.dataset);
}

#[test]
fn empty_directory_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(load_dataset(dir.path(), &SchemaMap::default()), Err(LoadError::EmptyDirectory(_))));
}

#[test]
fn failures_are_aggregated_with_file_names() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "good.csv", &format!("{HEADER}1990-01-01,0,0.4,,,\n"));
    write(dir.path(), "bad.csv", "when,what\n");
    write(dir.path(), "worse.csv", &format!("{HEADER}1990-01-01,0,0.4,,,\n1990-01-01,0,0.4,,,\n"));
    let err = load_dataset(dir.path(), &SchemaMap::default()).unwrap_err();
    let LoadError::Failed { files, failures } = &err else { panic!("unexpected {err}") };
    assert_eq!((*files, failures.len()), (3, 2));
    let text = err.to_string();
    assert!(text.contains("bad.csv") && text.contains("worse.csv") && !text.contains("good.csv"), "{text}");
}

#[test]
fn weather_disagreement_is_averaged_and_flagged() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.csv", &format!("{HEADER}1990-01-01,0,0.4,4.0,1,0\n"));
    write(dir.path(), "b.csv", &format!("{HEADER}1990-01-01,0,0.5,6.0,1,0\n"));
    let loaded = load_dataset(dir.path(), &SchemaMap::default()).unwrap();
    let env = loaded.dataset.environment(NaiveDate::from_ymd_opt(1990, 1, 1).unwrap()).unwrap();
    assert_eq!(env.temperature[0], Some(5.0));
    assert_eq!(env.wind_speed[0], Some(1.0));
    assert_eq!(env.temperature[1], None);
    assert_eq!(loaded.merge.conflicts.len(), 1);
}
