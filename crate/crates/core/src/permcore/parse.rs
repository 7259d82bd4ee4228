//! Cycle notation and the `.gens` generator file format.
//!
//! ```text
//! # comment
//! degree 5
//! (1 2 3 4 5)
//! (1 2 3)
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::permcore::Permutation;

/// Parses disjoint cycles of 1-based points, e.g. `"(1 2 3)(4 5)"`.
/// `"()"` and `"id"` denote the identity. Commas may separate points.
pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation> {
    let text = text.trim();
    let mut images: Vec<u32> = (0..degree as u32).collect();
    if text == "id" {
        return Ok(Permutation::from_images_unchecked(images));
    }
    let mut used = vec![false; degree];
    let mut rest = text;
    while !rest.is_empty() {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        if !rest.starts_with('(') {
            return Err(Error::Malformed(format!("expected '(' in {text:?}")));
        }
        let close = rest
            .find(')')
            .ok_or_else(|| Error::Malformed(format!("unclosed '(' in {text:?}")))?;
        let body = &rest[1..close];
        if body.contains('(') {
            return Err(Error::Malformed(format!("nested '(' in {text:?}")));
        }
        let mut cycle = Vec::new();
        for tok in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let point: usize = tok
                .parse()
                .map_err(|_| Error::Malformed(format!("bad point {tok:?} in {text:?}")))?;
            if point == 0 || point > degree {
                return Err(Error::PointOutOfRange { point, degree });
            }
            if used[point - 1] {
                return Err(Error::RepeatedPoint(point));
            }
            used[point - 1] = true;
            cycle.push(point - 1);
        }
        for (i, &x) in cycle.iter().enumerate() {
            images[x] = cycle[(i + 1) % cycle.len()] as u32;
        }
        rest = &rest[close + 1..];
    }
    Ok(Permutation::from_images_unchecked(images))
}

/// Parses `.gens` text: `degree N` then one permutation per line.
pub fn parse_gens(text: &str) -> Result<(usize, Vec<Permutation>)> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or_else(|| Error::Malformed("empty generator file".into()))?;
    let degree = header
        .strip_prefix("degree")
        .and_then(|d| d.trim().parse::<usize>().ok())
        .filter(|&d| d > 0)
        .ok_or_else(|| Error::Malformed(format!("expected `degree N`, found {header:?}")))?;
    let mut gens = Vec::new();
    for (lineno, line) in lines {
        let g = parse_cycles(line, degree).map_err(|e| match e {
            Error::Malformed(m) => Error::Malformed(format!("line {}: {m}", lineno + 1)),
            other => other,
        })?;
        gens.push(g);
    }
    Ok((degree, gens))
}

pub fn read_gens_file(path: impl AsRef<Path>) -> Result<(usize, Vec<Permutation>)> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_gens(&text)
}

pub fn format_gens(degree: usize, gens: &[Permutation]) -> String {
    let mut out = format!("degree {degree}\n");
    for g in gens {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_disjoint_cycles() {
        let x = parse_cycles("(1 2 3)(4 5)", 5).unwrap();
        assert_eq!(x.to_one_based(), vec![2, 3, 1, 5, 4]);
        let y = parse_cycles("(1,2,3) (4,5)", 5).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn identity_tokens() {
        assert!(parse_cycles("id", 4).unwrap().is_identity());
        assert!(parse_cycles("()", 4).unwrap().is_identity());
        assert_eq!(parse_cycles("()", 4).unwrap().degree(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_cycles("(1 6)", 5), Err(Error::PointOutOfRange { point: 6, degree: 5 }));
        assert_eq!(parse_cycles("(1 2)(2 3)", 5), Err(Error::RepeatedPoint(2)));
        assert!(matches!(parse_cycles("(1 2", 5), Err(Error::Malformed(_))));
        assert!(matches!(parse_cycles("1 2)", 5), Err(Error::Malformed(_))));
        assert!(matches!(parse_cycles("((1 2))", 5), Err(Error::Malformed(_))));
        assert!(matches!(parse_cycles("(1 x)", 5), Err(Error::Malformed(_))));
        assert!(matches!(parse_cycles("(0 1)", 5), Err(Error::PointOutOfRange { .. })));
    }

    #[test]
    fn gens_file_round_trip() {
        let text = "# A5\n\ndegree 5\n(1 2 3 4 5)\n# three-cycle\n(1 2 3)\n";
        let (n, gens) = parse_gens(text).unwrap();
        assert_eq!(n, 5);
        assert_eq!(gens.len(), 2);
        let again = parse_gens(&format_gens(n, &gens)).unwrap();
        assert_eq!(again, (n, gens));
    }

    #[test]
    fn gens_file_errors() {
        assert!(parse_gens("").is_err());
        assert!(parse_gens("deg 5\n(1 2)").is_err());
        let err = parse_gens("degree 3\n(1 2)\n(1 4)").unwrap_err();
        assert_eq!(err, Error::PointOutOfRange { point: 4, degree: 3 });
    }
}
