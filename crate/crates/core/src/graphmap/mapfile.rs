//! The 2D map text format.
//!
//! ```text
//! type octile
//! height 2
//! width 3
//! map
//! ..@
//! T..
//! ```
//!
//! `.` is free, `@` and `T` are occupied. Serialization writes `.` and `@`
//! only, one `\n`-terminated line per row.

use crate::{Error, Result};

use super::GridMap;

pub fn parse_map_text(text: &str) -> Result<GridMap> {
    let mut lines = text.lines().enumerate().map(|(n, l)| (n + 1, l.trim_end_matches('\r')));

    let mut header = |keyword: &str| -> Result<(usize, String)> {
        let (line, content) = lines.next().ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("missing `{keyword}` header line"),
        })?;
        let mut parts = content.split_whitespace();
        if parts.next() != Some(keyword) {
            return Err(Error::Parse {
                line,
                message: format!("expected `{keyword}` header, found `{content}`"),
            });
        }
        let value: Vec<&str> = parts.collect();
        Ok((line, value.join(" ")))
    };

    let (line, kind) = header("type")?;
    if kind.is_empty() {
        return Err(Error::Parse { line, message: "missing map type".into() });
    }
    let height = dimension(header("height")?)?;
    let width = dimension(header("width")?)?;
    let (line, rest) = header("map")?;
    if !rest.is_empty() {
        return Err(Error::Parse { line, message: format!("unexpected text after `map`: `{rest}`") });
    }

    let mut occupied = Vec::with_capacity(width * height);
    let mut rows = 0;
    for (line, row) in lines {
        if rows == height {
            if row.trim().is_empty() {
                continue;
            }
            return Err(Error::Parse {
                line,
                message: format!("extra row beyond declared height {height}"),
            });
        }
        let len = row.chars().count();
        if len != width {
            return Err(Error::Parse {
                line,
                message: format!("row has {len} cells, expected {width}"),
            });
        }
        for (col, c) in row.chars().enumerate() {
            occupied.push(match c {
                '.' => false,
                '@' | 'T' => true,
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unknown cell character `{other}` at column {}", col + 1),
                    })
                }
            });
        }
        rows += 1;
    }
    if rows != height {
        return Err(Error::Parse {
            line: 4 + rows,
            message: format!("expected {height} rows, found {rows}"),
        });
    }
    GridMap::from_occupancy(width, height, 1, 1.0, occupied)
}

fn dimension((line, value): (usize, String)) -> Result<usize> {
    match value.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(Error::Parse { line, message: format!("invalid dimension `{value}`") }),
    }
}

impl GridMap {
    /// Normalized map text; only single-layer maps have a text form.
    pub fn to_map_text(&self) -> Result<String> {
        if self.depth() != 1 {
            return Err(Error::InvalidParameter(format!(
                "map text holds a single layer, map has depth {}",
                self.depth()
            )));
        }
        let mut out = format!("type octile\nheight {}\nwidth {}\nmap\n", self.height(), self.width());
        for j in 0..self.height() {
            for i in 0..self.width() {
                out.push(if self.is_occupied(i, j, 0) { '@' } else { '.' });
            }
            out.push('\n');
        }
        Ok(out)
    }
}
