use std::path::Path;

use loadshape_core::report::{PlotRole, PlotSeries, ReferenceProfile, ReferenceProfileSet};
use loadshape_core::HOURS;

use super::{csv_err, csv_reader, csv_writer, expect_header, hour_columns, line_of, parse_f64, FormatError};

const PLOT_HEADER: [&str; 4] = ["series", "role", "x", "y"];

/// `series,role,x,y`, one line per point, series in order.
pub fn write_plot_csv(path: &Path, series: &[PlotSeries]) -> Result<(), FormatError> {
    let mut w = csv_writer(path)?;
    w.write_record(PLOT_HEADER).map_err(csv_err(path))?;
    for s in series {
        for (x, y) in s.points() {
            w.write_record([s.name(), s.role().name(), &x.to_string(), &y.to_string()]).map_err(csv_err(path))?;
        }
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

/// Reads series back; consecutive lines with the same name and role form one series.
pub fn read_plot_csv(path: &Path) -> Result<Vec<PlotSeries>, FormatError> {
    let mut r = csv_reader(path)?;
    expect_header(path, &mut r, &PLOT_HEADER.map(String::from))?;
    type Group = (String, PlotRole, Vec<f64>, Vec<f64>, Option<u64>);
    let mut groups: Vec<Group> = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_err(path))?;
        let role = PlotRole::parse(&record[1])
            .ok_or_else(|| FormatError::invalid(path, line_of(&record), format!("bad role {:?}", &record[1])))?;
        let (x, y) = (parse_f64(path, &record, 2)?, parse_f64(path, &record, 3)?);
        match groups.last_mut() {
            Some((name, r, xs, ys, _)) if name == &record[0] && *r == role => {
                xs.push(x);
                ys.push(y);
            }
            _ => groups.push((record[0].to_string(), role, vec![x], vec![y], line_of(&record))),
        }
    }
    groups
        .into_iter()
        .map(|(name, role, x, y, line)| PlotSeries::new(name, role, x, y).map_err(|e| FormatError::invalid(path, line, e)))
        .collect()
}

/// Reads `name,h00..h23` (hourly) or `name,p00..p47` (half-hourly) reference profiles.
pub fn read_references(path: &Path) -> Result<ReferenceProfileSet, FormatError> {
    let mut r = csv_reader(path)?;
    let header = r.headers().map_err(csv_err(path))?.clone();
    let hourly: Vec<String> = std::iter::once("name".to_string()).chain(hour_columns()).collect();
    let half_hourly: Vec<String> =
        std::iter::once("name".to_string()).chain((0..2 * HOURS).map(|p| format!("p{p:02}"))).collect();
    if header.iter().ne(hourly.iter().map(String::as_str)) && header.iter().ne(half_hourly.iter().map(String::as_str)) {
        return Err(FormatError::invalid(path, Some(1), "expected header name,h00..h23 or name,p00..p47"));
    }
    let mut profiles = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_err(path))?;
        let points = (1..record.len()).map(|i| parse_f64(path, &record, i)).collect::<Result<Vec<_>, _>>()?;
        profiles.push(ReferenceProfile::new(&record[0], points).map_err(|e| FormatError::invalid(path, line_of(&record), e))?);
    }
    ReferenceProfileSet::new(profiles).map_err(|e| FormatError::invalid(path, None, e))
}

/// Writes profiles that all have the same resolution.
pub fn write_references(path: &Path, refs: &ReferenceProfileSet) -> Result<(), FormatError> {
    let points = refs.profiles()[0].points().len();
    if refs.profiles().iter().any(|p| p.points().len() != points) {
        return Err(FormatError::invalid(path, None, "mixed hourly and half-hourly profiles"));
    }
    let columns: Vec<String> = if points == HOURS { hour_columns() } else { (0..points).map(|p| format!("p{p:02}")).collect() };
    let mut w = csv_writer(path)?;
    w.write_record(std::iter::once("name".to_string()).chain(columns)).map_err(csv_err(path))?;
    for p in refs.profiles() {
        w.write_record(std::iter::once(p.name().to_string()).chain(p.points().iter().map(f64::to_string)))
            .map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}
