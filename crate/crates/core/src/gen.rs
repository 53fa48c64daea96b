//! Pseudo-random warehouse instances and the Medium/Large testbeds.
//!
//! Stock locations are scattered uniformly over a 201 × 201 integer grid and
//! travel is measured with the Manhattan metric. Each cluster (item) gets one
//! seed location; the remaining locations are assigned to clusters uniformly
//! at random, so an item's stock is spread over the whole floor rather than
//! kept compact.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::GenError;
use crate::instance::{Instance, Point};

/// Largest coordinate value (inclusive); the smallest is 0.
pub const COORD_MAX: i64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorParams {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

impl GeneratorParams {
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        GeneratorParams { n, m, seed }
    }
}

/// Instance name in the `<n>wop<m>` convention.
pub fn instance_name(n: usize, m: usize) -> String {
    format!("{n}wop{m}")
}

fn random_point<R: Rng>(rng: &mut R) -> Point {
    Point::new(
        rng.random_range(0..=COORD_MAX),
        rng.random_range(0..=COORD_MAX),
    )
}

/// Generates a warehouse instance. Identical parameters always give an
/// identical instance.
pub fn generate(params: GeneratorParams) -> Result<Instance, GenError> {
    let GeneratorParams { n, m, seed } = params;
    if m < 3 || n < m {
        return Err(GenError::BadParams { n, m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<Point> = (0..n).map(|_| random_point(&mut rng)).collect();
    let mut clusters: Vec<Vec<usize>> = (0..m).map(|c| vec![c]).collect();
    for v in m..n {
        clusters[rng.random_range(0..m)].push(v);
    }
    let inst = Instance::from_points(instance_name(n, m), coords, clusters)
        .expect("generated clusters partition the nodes");
    Ok(inst.with_comment(format!("warehouse order picking, seed {seed}")))
}

/// Desk-scale random instance with `m` clusters whose sizes are drawn
/// uniformly from `1..=max_cluster_size`. Used for exhaustive checks.
pub fn generate_bounded(m: usize, max_cluster_size: usize, seed: u64) -> Instance {
    assert!(m >= 1 && max_cluster_size >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut clusters = Vec::with_capacity(m);
    let mut n = 0;
    for _ in 0..m {
        let size = rng.random_range(1..=max_cluster_size);
        clusters.push((n..n + size).collect::<Vec<_>>());
        n += size;
    }
    let coords = (0..n).map(|_| random_point(&mut rng)).collect();
    Instance::from_points(
        format!("rand{m}x{max_cluster_size}s{seed}"),
        coords,
        clusters,
    )
    .expect("consecutive blocks partition the nodes")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestbedKind {
    Medium,
    Large,
}

impl TestbedKind {
    /// The 30 `(n, m)` pairs of the testbed, in table order.
    pub fn pairs(self) -> &'static [(usize, usize); 30] {
        match self {
            TestbedKind::Medium => &MEDIUM_PAIRS,
            TestbedKind::Large => &LARGE_PAIRS,
        }
    }

    /// Time-budget coefficient: seconds per node per cluster.
    pub fn alpha(self) -> f64 {
        match self {
            TestbedKind::Medium => 1.8e-5,
            TestbedKind::Large => 3.6e-6,
        }
    }
}

impl fmt::Display for TestbedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestbedKind::Medium => "medium",
            TestbedKind::Large => "large",
        })
    }
}

impl FromStr for TestbedKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "medium" => Ok(TestbedKind::Medium),
            "large" => Ok(TestbedKind::Large),
            other => Err(format!(
                "unknown testbed {other:?} (expected medium or large)"
            )),
        }
    }
}

#[rustfmt::skip]
pub const MEDIUM_PAIRS: [(usize, usize); 30] = [
    (150, 30), (151, 30), (153, 31), (155, 31), (157, 32), (159, 32),
    (160, 33), (162, 33), (164, 34), (166, 34), (168, 35), (169, 35),
    (171, 36), (173, 36), (175, 37), (177, 37), (178, 38), (180, 38),
    (182, 39), (184, 39), (186, 40), (187, 40), (189, 41), (191, 41),
    (193, 42), (195, 42), (196, 43), (198, 43), (200, 44), (202, 44),
];

#[rustfmt::skip]
pub const LARGE_PAIRS: [(usize, usize); 30] = [
    (550, 105), (551, 105), (553, 106), (555, 106), (557, 107), (559, 107),
    (560, 108), (562, 108), (564, 109), (566, 109), (568, 110), (569, 110),
    (571, 111), (573, 111), (575, 112), (577, 112), (578, 113), (580, 113),
    (582, 114), (584, 114), (586, 115), (587, 115), (589, 116), (591, 116),
    (593, 117), (595, 117), (596, 118), (598, 118), (600, 119), (602, 119),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestbedSpec {
    pub kind: TestbedKind,
    pub pairs: Vec<(usize, usize)>,
    pub base_seed: u64,
}

impl TestbedSpec {
    pub fn new(kind: TestbedKind, base_seed: u64) -> Self {
        TestbedSpec {
            kind,
            pairs: kind.pairs().to_vec(),
            base_seed,
        }
    }

    pub fn manifest(&self) -> Vec<ManifestEntry> {
        self.pairs
            .iter()
            .enumerate()
            .map(|(k, &(n, m))| ManifestEntry {
                name: instance_name(n, m),
                n,
                m,
                seed: self.base_seed.wrapping_add(k as u64),
            })
            .collect()
    }
}

/// Generates every instance of the testbed; instance `k` uses seed
/// `base_seed + k`.
pub fn build_testbed(spec: &TestbedSpec) -> Result<Vec<Instance>, GenError> {
    spec.manifest()
        .iter()
        .map(|e| generate(GeneratorParams::new(e.n, e.m, e.seed)))
        .collect()
}

/// One line of a testbed manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

pub const MANIFEST_HEADER: &str = "name\tn\tm\tseed";

/// Tab-separated manifest with a header line.
pub fn write_manifest(entries: &[ManifestEntry]) -> String {
    let mut out = String::from(MANIFEST_HEADER);
    out.push('\n');
    for e in entries {
        out.push_str(&format!("{}\t{}\t{}\t{}\n", e.name, e.n, e.m, e.seed));
    }
    out
}

pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == MANIFEST_HEADER => {}
        _ => return Err("missing manifest header".into()),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split('\t').collect();
            let bad = || format!("manifest line {}: {line:?}", i + 2);
            if f.len() != 4 {
                return Err(bad());
            }
            Ok(ManifestEntry {
                name: f[0].to_string(),
                n: f[1].parse().map_err(|_| bad())?,
                m: f[2].parse().map_err(|_| bad())?,
                seed: f[3].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_singletons_when_n_equals_m() {
        let inst = generate(GeneratorParams::new(30, 30, 5)).unwrap();
        assert!(inst.clusters().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn partition_and_bounds() {
        for seed in 0..20 {
            let inst = generate(GeneratorParams::new(150, 30, seed)).unwrap();
            assert_eq!(inst.name(), "150wop30");
            assert_eq!(inst.clusters().iter().map(Vec::len).sum::<usize>(), 150);
            assert!(inst.clusters().iter().all(|c| !c.is_empty()));
            for (c, members) in inst.clusters().iter().enumerate() {
                assert!(members.iter().all(|&v| inst.cluster_of(v) == c));
            }
            assert!(inst
                .coords()
                .unwrap()
                .iter()
                .all(|p| (0..=COORD_MAX).contains(&p.x) && (0..=COORD_MAX).contains(&p.y)));
        }
    }

    #[test]
    fn seeded_determinism() {
        let a = generate(GeneratorParams::new(160, 33, 42)).unwrap();
        let b = generate(GeneratorParams::new(160, 33, 42)).unwrap();
        let c = generate(GeneratorParams::new(160, 33, 43)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(generate(GeneratorParams::new(10, 2, 0)).is_err());
        assert!(generate(GeneratorParams::new(4, 5, 0)).is_err());
    }

    #[test]
    fn coordinates_look_uniform() {
        // 500 instances of 100 nodes = 10^5 points, 2·10^5 coordinate draws.
        let mut hist = [0u64; (COORD_MAX + 1) as usize];
        for seed in 0..500 {
            let inst = generate(GeneratorParams::new(100, 10, seed)).unwrap();
            for p in inst.coords().unwrap() {
                hist[p.x as usize] += 1;
                hist[p.y as usize] += 1;
            }
        }
        let total: u64 = hist.iter().sum();
        let expected = total as f64 / hist.len() as f64;
        let chi2: f64 = hist
            .iter()
            .map(|&o| (o as f64 - expected).powi(2) / expected)
            .sum();
        // 200 degrees of freedom: mean 200, sd 20.
        assert!(chi2 < 320.0, "chi-square {chi2}");
        assert!(hist[0] > 0 && hist[COORD_MAX as usize] > 0);
    }

    #[test]
    fn testbed_names() {
        let medium = build_testbed(&TestbedSpec::new(TestbedKind::Medium, 1)).unwrap();
        assert_eq!(medium.len(), 30);
        assert_eq!(medium[0].name(), "150wop30");
        assert_eq!(medium[29].name(), "202wop44");
        let large = TestbedSpec::new(TestbedKind::Large, 1).manifest();
        assert_eq!(large[0].name, "550wop105");
        assert_eq!(large[29].name, "602wop119");
        assert_eq!(large[29].seed, 30);
    }

    #[test]
    fn manifest_round_trip() {
        let entries = TestbedSpec::new(TestbedKind::Medium, 77).manifest();
        let text = write_manifest(&entries);
        assert_eq!(parse_manifest(&text).unwrap(), entries);
        assert_eq!(write_manifest(&parse_manifest(&text).unwrap()), text);
    }

    #[test]
    fn bounded_instances_respect_sizes() {
        for seed in 0..50 {
            let inst = generate_bounded(6, 4, seed);
            assert_eq!(inst.m(), 6);
            assert!(inst.clusters().iter().all(|c| (1..=4).contains(&c.len())));
        }
    }
}
