//! Parsers for the compact argument forms (`A..B`, `WxHxD`, `x,y[,z]`).

use std::ops::Range;

use variastar_core::{HeuristicSpec, Vec3};

/// `A..B` (exclusive) or `A..=B` (inclusive).
pub fn parse_seeds(s: &str) -> Result<Range<u64>, String> {
    let (lo, hi, inclusive) = if let Some((lo, hi)) = s.split_once("..=") {
        (lo, hi, true)
    } else if let Some((lo, hi)) = s.split_once("..") {
        (lo, hi, false)
    } else {
        return Err(format!("expected A..B or A..=B, got `{s}`"));
    };
    let lo: u64 = lo.trim().parse().map_err(|e| format!("bad seed `{lo}`: {e}"))?;
    let hi: u64 = hi.trim().parse().map_err(|e| format!("bad seed `{hi}`: {e}"))?;
    let end = if inclusive { hi.checked_add(1).ok_or("seed range overflows")? } else { hi };
    if end <= lo {
        return Err(format!("seed range `{s}` is empty"));
    }
    Ok(lo..end)
}

/// `WxH` or `WxHxD`.
pub fn parse_dims(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<usize> = s
        .split(['x', 'X'])
        .map(|p| p.trim().parse().map_err(|e| format!("bad dimension `{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [w, h] => Ok((w, h, 1)),
        [w, h, d] => Ok((w, h, d)),
        _ => Err(format!("expected WxH or WxHxD, got `{s}`")),
    }
}

/// `x,y` (z = 0) or `x,y,z`.
pub fn parse_point(s: &str) -> Result<Vec3, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse().map_err(|e| format!("bad coordinate `{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x, y] => Ok(Vec3::planar(x, y)),
        [x, y, z] => Ok(Vec3::new(x, y, z)),
        _ => Err(format!("expected x,y or x,y,z, got `{s}`")),
    }
}

/// Heuristic list items, split on `;`. `dijkstra` is dropped since the
/// oracle always runs.
pub fn parse_heuristics(items: &[String]) -> Result<Vec<HeuristicSpec>, String> {
    items
        .iter()
        .flat_map(|item| item.split(';'))
        .map(str::trim)
        .filter(|s| !s.is_empty() && !s.eq_ignore_ascii_case("dijkstra"))
        .map(|s| s.parse::<HeuristicSpec>().map_err(|e| format!("heuristic `{s}`: {e}")))
        .collect()
}
