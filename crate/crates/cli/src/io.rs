//! Point-file ingestion.
//!
//! Format: UTF-8 text, one point per line as two whitespace-separated
//! reals `x y`; blank lines and lines starting with `#` are ignored.
//! Line order defines sequence order.

use std::path::Path;

use interpoint::{Point, PointSequence, PointSet};

pub fn read_points(path: &Path) -> Result<Vec<Point>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut pts = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let x = it.next();
        let y = it.next();
        let (Some(x), Some(y)) = (x, y) else {
            return Err(format!(
                "{}:{}: expected `x y`, got {line:?}",
                path.display(),
                lineno + 1
            ));
        };
        if it.next().is_some() {
            return Err(format!(
                "{}:{}: trailing tokens after `x y` in {line:?}",
                path.display(),
                lineno + 1
            ));
        }
        let parse = |tok: &str| -> Result<f64, String> {
            tok.parse::<f64>().map_err(|e| {
                format!("{}:{}: bad coordinate {tok:?}: {e}", path.display(), lineno + 1)
            })
        };
        pts.push(Point::new(parse(x)?, parse(y)?));
    }
    Ok(pts)
}

pub fn read_point_set(path: &Path) -> Result<PointSet, String> {
    PointSet::new(read_points(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn read_point_sequence(path: &Path) -> Result<PointSequence, String> {
    PointSequence::new(read_points(path)?).map_err(|e| format!("{}: {e}", path.display()))
}
