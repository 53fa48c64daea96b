//! Reader and writer for the GTSP instance library text format.
//!
//! ```text
//! NAME: 150wop30
//! TYPE: GTSP
//! COMMENT: ...
//! DIMENSION: 150
//! GTSP_SETS: 30
//! EDGE_WEIGHT_TYPE: MAN_2D
//! NODE_COORD_SECTION
//! 1 17 140
//! ...
//! GTSP_SET_SECTION
//! 1 1 34 77 -1
//! ...
//! EOF
//! ```
//!
//! Node and set ids are 1-based on disk and 0-based in memory. `EUC_2D`
//! coordinates and explicit `FULL_MATRIX` weights are also accepted.

use std::fmt::Write as _;
use std::io::{self, Read, Write};

use crate::error::FormatError;
use crate::instance::{EdgeWeightType, Instance, Point};

const SET_TERMINATOR: i64 = -1;

/// Serializes an instance. Instances without coordinates are written with an
/// explicit full matrix.
pub fn to_string(instance: &Instance) -> String {
    let mut out = String::new();
    let n = instance.n();
    let _ = writeln!(out, "NAME: {}", instance.name());
    out.push_str("TYPE: GTSP\n");
    if let Some(c) = instance.comment() {
        let _ = writeln!(out, "COMMENT: {c}");
    }
    let _ = writeln!(out, "DIMENSION: {n}");
    let _ = writeln!(out, "GTSP_SETS: {}", instance.m());
    match (instance.weight_type(), instance.coords()) {
        (EdgeWeightType::Manhattan | EdgeWeightType::Euclidean, Some(coords)) => {
            let kind = if instance.weight_type() == EdgeWeightType::Manhattan {
                "MAN_2D"
            } else {
                "EUC_2D"
            };
            let _ = writeln!(out, "EDGE_WEIGHT_TYPE: {kind}");
            out.push_str("NODE_COORD_SECTION\n");
            for (i, p) in coords.iter().enumerate() {
                let _ = writeln!(out, "{} {} {}", i + 1, p.x, p.y);
            }
        }
        _ => {
            out.push_str("EDGE_WEIGHT_TYPE: EXPLICIT\n");
            out.push_str("EDGE_WEIGHT_FORMAT: FULL_MATRIX\n");
            out.push_str("EDGE_WEIGHT_SECTION\n");
            for row in instance.matrix().chunks(n) {
                let line: Vec<String> = row.iter().map(u32::to_string).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
    }
    out.push_str("GTSP_SET_SECTION\n");
    for (k, members) in instance.clusters().iter().enumerate() {
        let _ = write!(out, "{}", k + 1);
        for &v in members {
            let _ = write!(out, " {}", v + 1);
        }
        let _ = writeln!(out, " {SET_TERMINATOR}");
    }
    out.push_str("EOF\n");
    out
}

pub fn write<W: Write>(instance: &Instance, mut sink: W) -> io::Result<()> {
    sink.write_all(to_string(instance).as_bytes())
}

pub fn read<R: Read>(mut source: R) -> Result<Instance, FormatError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    parse(&text)
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Header,
    Coords,
    Weights,
    Sets,
    Done,
}

fn header_error(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::MalformedHeader {
        line,
        msg: msg.into(),
    }
}

fn data_error(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::MalformedData {
        line,
        msg: msg.into(),
    }
}

fn nint(x: f64) -> u32 {
    (x + 0.5).floor() as u32
}

/// Parses GTSPLIB text.
pub fn parse(text: &str) -> Result<Instance, FormatError> {
    let mut name = None;
    let mut comment = None;
    let mut dimension: Option<usize> = None;
    let mut sets: Option<usize> = None;
    let mut weight_type: Option<EdgeWeightType> = None;
    let mut full_matrix = false;

    let mut coords: Vec<Option<(f64, f64)>> = Vec::new();
    let mut weights: Vec<u32> = Vec::new();
    let mut set_tokens: Vec<(usize, i64)> = Vec::new();

    let mut section = Section::Header;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || section == Section::Done {
            continue;
        }
        if line.starts_with(|ch: char| ch.is_ascii_alphabetic()) {
            let (key, value) = match line.split_once(':') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => (line, ""),
            };
            match key {
                "NODE_COORD_SECTION" => {
                    let n = dimension.ok_or(FormatError::MissingField("DIMENSION"))?;
                    coords = vec![None; n];
                    section = Section::Coords;
                }
                "EDGE_WEIGHT_SECTION" => section = Section::Weights,
                "GTSP_SET_SECTION" => section = Section::Sets,
                "EOF" => section = Section::Done,
                "NAME" => name = Some(value.to_string()),
                "COMMENT" => comment = Some(value.to_string()),
                "TYPE" => {
                    if !matches!(value, "GTSP" | "AGTSP") {
                        return Err(header_error(lineno, format!("TYPE {value:?} is not GTSP")));
                    }
                }
                "DIMENSION" => {
                    dimension = Some(
                        value
                            .parse()
                            .map_err(|_| header_error(lineno, "DIMENSION is not an integer"))?,
                    )
                }
                "GTSP_SETS" => {
                    sets = Some(
                        value
                            .parse()
                            .map_err(|_| header_error(lineno, "GTSP_SETS is not an integer"))?,
                    )
                }
                "EDGE_WEIGHT_TYPE" => {
                    weight_type = Some(match value {
                        "MAN_2D" => EdgeWeightType::Manhattan,
                        "EUC_2D" => EdgeWeightType::Euclidean,
                        "EXPLICIT" => EdgeWeightType::Explicit,
                        other => return Err(FormatError::UnknownEdgeWeightType(other.into())),
                    })
                }
                "EDGE_WEIGHT_FORMAT" => {
                    if value != "FULL_MATRIX" {
                        return Err(header_error(
                            lineno,
                            format!("EDGE_WEIGHT_FORMAT {value:?} unsupported"),
                        ));
                    }
                    full_matrix = true;
                }
                "DISPLAY_DATA_TYPE" | "NODE_COORD_TYPE" => {}
                other => return Err(header_error(lineno, format!("unknown keyword {other:?}"))),
            }
            continue;
        }
        match section {
            Section::Header | Section::Done => {
                return Err(header_error(lineno, "data outside of a section"));
            }
            Section::Coords => {
                let f: Vec<&str> = line.split_whitespace().collect();
                if f.len() != 3 {
                    return Err(data_error(lineno, "expected `id x y`"));
                }
                let id: usize = f[0]
                    .parse()
                    .map_err(|_| data_error(lineno, "bad node id"))?;
                let x: f64 = f[1].parse().map_err(|_| data_error(lineno, "bad x"))?;
                let y: f64 = f[2].parse().map_err(|_| data_error(lineno, "bad y"))?;
                if id == 0 || id > coords.len() {
                    return Err(FormatError::NodeCountMismatch {
                        declared: coords.len(),
                        found: id,
                    });
                }
                if coords[id - 1].replace((x, y)).is_some() {
                    return Err(data_error(lineno, format!("node {id} listed twice")));
                }
            }
            Section::Weights => {
                for tok in line.split_whitespace() {
                    let w: f64 = tok
                        .parse()
                        .map_err(|_| data_error(lineno, format!("bad weight {tok:?}")))?;
                    if w < 0.0 || w > u32::MAX as f64 {
                        return Err(data_error(lineno, format!("weight {tok} out of range")));
                    }
                    weights.push(nint(w));
                }
            }
            Section::Sets => {
                for tok in line.split_whitespace() {
                    let v: i64 = tok
                        .parse()
                        .map_err(|_| data_error(lineno, format!("bad set token {tok:?}")))?;
                    set_tokens.push((lineno, v));
                }
            }
        }
    }

    let n = dimension.ok_or(FormatError::MissingField("DIMENSION"))?;
    let m = sets.ok_or(FormatError::MissingField("GTSP_SETS"))?;
    let weight_type = weight_type.ok_or(FormatError::MissingField("EDGE_WEIGHT_TYPE"))?;
    let clusters = parse_sets(&set_tokens, n, m)?;
    let name = name.unwrap_or_default();

    let instance = match weight_type {
        EdgeWeightType::Explicit => {
            if !full_matrix {
                return Err(FormatError::MissingField("EDGE_WEIGHT_FORMAT"));
            }
            if weights.len() != n * n {
                return Err(FormatError::NodeCountMismatch {
                    declared: n,
                    found: (weights.len() as f64).sqrt() as usize,
                });
            }
            Instance::from_matrix(name, n, weights, clusters).map_err(classify)?
        }
        metric => {
            let found = coords.iter().filter(|c| c.is_some()).count();
            if found != n {
                return Err(FormatError::NodeCountMismatch { declared: n, found });
            }
            let pts: Vec<(f64, f64)> = coords.into_iter().flatten().collect();
            let integral = pts.iter().all(|&(x, y)| {
                x.fract() == 0.0 && y.fract() == 0.0 && x.abs() < 1e15 && y.abs() < 1e15
            });
            if integral && metric == EdgeWeightType::Manhattan {
                let points = pts
                    .iter()
                    .map(|&(x, y)| Point::new(x as i64, y as i64))
                    .collect();
                Instance::from_points(name, points, clusters).map_err(classify)?
            } else {
                let mut dist = vec![0u32; n * n];
                for a in 0..n {
                    for b in a + 1..n {
                        let (dx, dy) = ((pts[a].0 - pts[b].0).abs(), (pts[a].1 - pts[b].1).abs());
                        let d = match metric {
                            EdgeWeightType::Manhattan => nint(dx + dy),
                            _ => nint((dx * dx + dy * dy).sqrt()),
                        };
                        dist[a * n + b] = d;
                        dist[b * n + a] = d;
                    }
                }
                let points = integral.then(|| {
                    pts.iter()
                        .map(|&(x, y)| Point::new(x as i64, y as i64))
                        .collect()
                });
                let kind = if integral {
                    metric
                } else {
                    EdgeWeightType::Explicit
                };
                Instance::from_parts(name, kind, points, clusters, dist, n).map_err(classify)?
            }
        }
    };
    Ok(match comment {
        Some(c) => instance.with_comment(c),
        None => instance,
    })
}

fn classify(e: crate::error::InstanceError) -> FormatError {
    use crate::error::InstanceError::*;
    match e {
        EmptyCluster(_)
        | NodeOutOfRange { .. }
        | NodeInTwoClusters(_)
        | UnclusteredNode(_)
        | TooManyClusters { .. } => FormatError::NotAPartition(e),
        other => FormatError::Instance(other),
    }
}

fn parse_sets(tokens: &[(usize, i64)], n: usize, m: usize) -> Result<Vec<Vec<usize>>, FormatError> {
    let mut clusters: Vec<Option<Vec<usize>>> = vec![None; m];
    let mut it = tokens.iter();
    while let Some(&(line, id)) = it.next() {
        if id < 1 || id as usize > m {
            return Err(data_error(line, format!("set id {id} outside 1..={m}")));
        }
        let mut members = Vec::new();
        loop {
            match it.next() {
                Some(&(_, SET_TERMINATOR)) => break,
                Some(&(_, v)) => {
                    if v < 1 || v as usize > n {
                        return Err(FormatError::NotAPartition(
                            crate::error::InstanceError::NodeOutOfRange {
                                node: v.max(0) as usize,
                                nodes: n,
                            },
                        ));
                    }
                    members.push(v as usize - 1);
                }
                None => return Err(data_error(line, format!("set {id} lacks a -1 terminator"))),
            }
        }
        if clusters[id as usize - 1].replace(members).is_some() {
            return Err(data_error(line, format!("set {id} defined twice")));
        }
    }
    clusters
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            c.ok_or(FormatError::NotAPartition(
                crate::error::InstanceError::EmptyCluster(k),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, GeneratorParams};

    fn tiny() -> Instance {
        Instance::from_points(
            "3wop3",
            vec![Point::new(0, 0), Point::new(10, 0), Point::new(0, 10)],
            vec![vec![0], vec![1], vec![2]],
        )
        .unwrap()
    }

    #[test]
    fn singleton_set_lines() {
        let text = to_string(&tiny());
        assert!(text.contains("GTSP_SET_SECTION\n1 1 -1\n2 2 -1\n3 3 -1\nEOF\n"));
    }

    #[test]
    fn header_fields() {
        let inst = generate(GeneratorParams::new(150, 30, 3)).unwrap();
        let text = to_string(&inst);
        assert!(text.starts_with("NAME: 150wop30\nTYPE: GTSP\nCOMMENT: "));
        assert!(text.contains("\nDIMENSION: 150\n"));
        assert!(text.contains("\nGTSP_SETS: 30\n"));
        assert!(text.contains("\nEDGE_WEIGHT_TYPE: MAN_2D\n"));
    }

    #[test]
    fn round_trip() {
        let inst = generate(GeneratorParams::new(40, 9, 11)).unwrap();
        let text = to_string(&inst);
        let back = parse(&text).unwrap();
        assert!(back.same_problem(&inst));
        assert_eq!(to_string(&back), text);
    }

    #[test]
    fn explicit_matrix_round_trip() {
        let inst = Instance::from_matrix(
            "m",
            3,
            vec![0, 4, 6, 4, 0, 9, 6, 9, 0],
            vec![vec![0, 2], vec![1]],
        )
        .unwrap();
        let text = to_string(&inst);
        assert!(text.contains("EDGE_WEIGHT_FORMAT: FULL_MATRIX"));
        let back = parse(&text).unwrap();
        assert!(back.same_problem(&inst));
        assert!(back.coords().is_none());
    }

    #[test]
    fn euclidean_with_loose_spacing() {
        let text = "NAME : e3\nTYPE : GTSP\nDIMENSION : 3\nGTSP_SETS : 2\n\
                    EDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 4\n3 1.5 0\n\
                    GTSP_SET_SECTION:\n1 1 3 -1\n2 2 -1\nEOF\n";
        let inst = parse(text).unwrap();
        assert_eq!(inst.dist(0, 1), 5);
        assert_eq!(inst.dist(0, 2), 2);
        assert_eq!(inst.clusters(), &[vec![0, 2], vec![1]]);
        assert!(inst.coords().is_none());
    }

    #[test]
    fn distinct_diagnostics() {
        let good = to_string(&tiny());
        let bad_header = good.replace("DIMENSION: 3", "DIMENSION: three");
        assert!(matches!(
            parse(&bad_header),
            Err(FormatError::MalformedHeader { .. })
        ));

        let mismatch = good.replace("DIMENSION: 3", "DIMENSION: 4");
        assert!(matches!(
            parse(&mismatch),
            Err(FormatError::NodeCountMismatch {
                declared: 4,
                found: 3
            })
        ));

        let overlap = good.replace("2 2 -1", "2 2 1 -1");
        assert!(matches!(
            parse(&overlap),
            Err(FormatError::NotAPartition(_))
        ));

        let unknown = good.replace("MAN_2D", "GEO");
        assert!(
            matches!(parse(&unknown), Err(FormatError::UnknownEdgeWeightType(t)) if t == "GEO")
        );
    }
}
