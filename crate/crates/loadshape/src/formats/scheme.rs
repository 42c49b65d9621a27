use std::path::Path;

use chrono::NaiveDate;
use loadshape_core::daytype::{Axes, Band, Bands, DayTypeScheme, Season};

use super::{read_text, FormatError};
use crate::keyvalue::{self, KeyValueError};

fn bands(line: usize, value: &str) -> Result<Bands, KeyValueError> {
    let list = keyvalue::list(value)
        .into_iter()
        .map(|item| {
            let (name, bound) = item.split_once(':').ok_or_else(|| KeyValueError::new(line, format!("band {item:?} is not name:bound")))?;
            let upper = bound.trim().parse::<f64>().map_err(|_| KeyValueError::new(line, format!("bad bound {bound:?}")))?;
            Ok(Band { name: name.trim().to_string(), upper })
        })
        .collect::<Result<Vec<_>, KeyValueError>>()?;
    Bands::new(list).map_err(|e| KeyValueError::new(line, e))
}

/// Applies `key = value` scheme settings on top of `scheme`.
///
/// Keys: `axes` (any of `day_class,season,temperature,wind`), `weekend` (ISO
/// weekday numbers, Monday = 1), `temperature_bands` and `wind_bands`
/// (`name:bound` list, the last bound `inf`), `seasons` (twelve season names,
/// January first).
pub fn apply_scheme<'a>(
    scheme: &mut DayTypeScheme,
    entries: impl IntoIterator<Item = (usize, &'a str, &'a str)>,
) -> Result<(), KeyValueError> {
    for (line, key, value) in entries {
        match key {
            "axes" => {
                let mut axes = Axes { day_class: false, season: false, temperature: false, wind: false };
                for name in keyvalue::list(value) {
                    match name {
                        "day_class" => axes.day_class = true,
                        "season" => axes.season = true,
                        "temperature" => axes.temperature = true,
                        "wind" => axes.wind = true,
                        other => return Err(KeyValueError::new(line, format!("unknown axis {other:?}"))),
                    }
                }
                scheme.set_axes(axes).map_err(|e| KeyValueError::new(line, e))?;
            }
            "weekend" => {
                scheme.weekend = keyvalue::list(value)
                    .into_iter()
                    .map(|d| d.parse::<u32>().ok().filter(|d| (1..=7).contains(d)))
                    .collect::<Option<_>>()
                    .ok_or_else(|| KeyValueError::new(line, "weekend days are ISO weekday numbers 1..=7"))?;
            }
            "temperature_bands" => scheme.temperature_bands = bands(line, value)?,
            "wind_bands" => scheme.wind_bands = bands(line, value)?,
            "seasons" => {
                let names = keyvalue::list(value);
                let seasons: Vec<Season> = names
                    .iter()
                    .map(|s| Season::parse(s).ok_or_else(|| KeyValueError::new(line, format!("unknown season {s:?}"))))
                    .collect::<Result<_, _>>()?;
                scheme.seasons = seasons.try_into().map_err(|_| KeyValueError::new(line, "seasons needs 12 entries"))?;
            }
            other => return Err(KeyValueError::new(line, format!("unknown scheme key {other:?}"))),
        }
    }
    Ok(())
}

pub fn read_scheme(path: &Path, mut scheme: DayTypeScheme) -> Result<DayTypeScheme, FormatError> {
    let text = read_text(path)?;
    let err = |e: KeyValueError| FormatError::invalid(path, Some(e.line as u64), e.reason);
    let entries = keyvalue::parse(&text).map_err(err)?;
    apply_scheme(&mut scheme, entries.iter().map(|e| (e.line, e.key.as_str(), e.value.as_str()))).map_err(err)?;
    Ok(scheme)
}

/// One ISO date per line; blank lines and `#` comments are ignored.
pub fn parse_holidays(text: &str) -> Result<Vec<NaiveDate>, KeyValueError> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(line, l)| NaiveDate::parse_from_str(l, "%Y-%m-%d").map_err(|_| KeyValueError::new(line, format!("bad date {l:?}"))))
        .collect()
}

pub fn read_holidays(path: &Path) -> Result<Vec<NaiveDate>, FormatError> {
    parse_holidays(&read_text(path)?).map_err(|e| FormatError::invalid(path, Some(e.line as u64), e.reason))
}
