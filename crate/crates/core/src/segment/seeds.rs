//! Seed files: a `radius r` header, then `O x y` / `B x y` lines with
//! zero-based coordinates (`x` is the column). `#` starts a comment.

use super::{SeedSet, SegmentError};

pub fn parse_seeds(text: &str) -> Result<SeedSet, SegmentError> {
    let mut seeds = SeedSet::default();
    let mut radius = None;
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let err = |message: String| SegmentError::Parse {
            line: line_no,
            message,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let number = |tok: &str| {
            tok.parse::<usize>()
                .map_err(|_| err(format!("expected a non-negative integer, found `{tok}`")))
        };
        match fields.as_slice() {
            ["radius", r] => {
                if radius.is_some() {
                    return Err(err("duplicate radius line".into()));
                }
                radius = Some(number(r)?);
            }
            [kind @ ("O" | "B"), x, y] => {
                let point = (number(x)?, number(y)?);
                if *kind == "O" {
                    seeds.object.push(point);
                } else {
                    seeds.background.push(point);
                }
            }
            _ => return Err(err(format!("unrecognised seed line `{line}`"))),
        }
    }
    seeds.radius = radius.ok_or(SegmentError::Parse {
        line: 0,
        message: "missing `radius` line".into(),
    })?;
    Ok(seeds)
}

pub fn write_seeds(seeds: &SeedSet) -> String {
    let mut out = format!("radius {}\n", seeds.radius);
    for &(x, y) in &seeds.object {
        out.push_str(&format!("O {x} {y}\n"));
    }
    for &(x, y) in &seeds.background {
        out.push_str(&format!("B {x} {y}\n"));
    }
    out
}
