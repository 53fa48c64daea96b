//! GTSP instances: node coordinates, the cluster partition and a dense
//! integer distance matrix.

use std::fmt;

use crate::error::InstanceError;

/// A location on the warehouse floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Rectilinear distance between two points.
pub fn manhattan_distance(a: Point, b: Point) -> i64 {
    (a.x - b.x).abs() + (a.y - b.y).abs()
}

/// How the distance matrix of an instance was (or should be) obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeWeightType {
    /// `MAN_2D`: rounded Manhattan distance between coordinates.
    Manhattan,
    /// `EUC_2D`: rounded Euclidean distance between coordinates.
    Euclidean,
    /// Explicit full matrix, no coordinates.
    Explicit,
}

/// An immutable GTSP instance.
///
/// Nodes are numbered `0..n`, clusters `0..m`. Every node belongs to exactly
/// one cluster and every cluster is non-empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    name: String,
    comment: Option<String>,
    weight_type: EdgeWeightType,
    coords: Option<Vec<Point>>,
    clusters: Vec<Vec<usize>>,
    cluster_of: Vec<usize>,
    dist: Vec<u32>,
}

impl Instance {
    /// Builds an instance with Manhattan distances over integer points.
    pub fn from_points(
        name: impl Into<String>,
        coords: Vec<Point>,
        clusters: Vec<Vec<usize>>,
    ) -> Result<Self, InstanceError> {
        let n = coords.len();
        let mut dist = vec![0u32; n * n];
        for (a, pa) in coords.iter().enumerate() {
            for (b, pb) in coords.iter().enumerate().skip(a + 1) {
                let d = u32::try_from(manhattan_distance(*pa, *pb))
                    .map_err(|_| InstanceError::DistanceOverflow)?;
                dist[a * n + b] = d;
                dist[b * n + a] = d;
            }
        }
        Self::assemble(
            name.into(),
            EdgeWeightType::Manhattan,
            Some(coords),
            clusters,
            dist,
            n,
        )
    }

    /// Builds an instance from an explicit row-major `n × n` matrix.
    ///
    /// The matrix must be symmetric with a zero diagonal.
    pub fn from_matrix(
        name: impl Into<String>,
        n: usize,
        dist: Vec<u32>,
        clusters: Vec<Vec<usize>>,
    ) -> Result<Self, InstanceError> {
        if dist.len() != n * n {
            return Err(InstanceError::MatrixShape {
                expected: n * n,
                found: dist.len(),
            });
        }
        for a in 0..n {
            if dist[a * n + a] != 0 {
                return Err(InstanceError::NonZeroDiagonal(a));
            }
            for b in a + 1..n {
                if dist[a * n + b] != dist[b * n + a] {
                    return Err(InstanceError::Asymmetric(a, b));
                }
            }
        }
        Self::assemble(
            name.into(),
            EdgeWeightType::Explicit,
            None,
            clusters,
            dist,
            n,
        )
    }

    /// Builds an instance from coordinates and a matrix computed elsewhere,
    /// e.g. rounded Euclidean distances read from a file.
    pub(crate) fn from_parts(
        name: String,
        weight_type: EdgeWeightType,
        coords: Option<Vec<Point>>,
        clusters: Vec<Vec<usize>>,
        dist: Vec<u32>,
        n: usize,
    ) -> Result<Self, InstanceError> {
        Self::assemble(name, weight_type, coords, clusters, dist, n)
    }

    fn assemble(
        name: String,
        weight_type: EdgeWeightType,
        coords: Option<Vec<Point>>,
        clusters: Vec<Vec<usize>>,
        dist: Vec<u32>,
        n: usize,
    ) -> Result<Self, InstanceError> {
        if n == 0 {
            return Err(InstanceError::Empty);
        }
        if clusters.len() > n {
            return Err(InstanceError::TooManyClusters {
                nodes: n,
                clusters: clusters.len(),
            });
        }
        let mut cluster_of = vec![usize::MAX; n];
        for (c, members) in clusters.iter().enumerate() {
            if members.is_empty() {
                return Err(InstanceError::EmptyCluster(c));
            }
            for &v in members {
                if v >= n {
                    return Err(InstanceError::NodeOutOfRange { node: v, nodes: n });
                }
                if cluster_of[v] != usize::MAX {
                    return Err(InstanceError::NodeInTwoClusters(v));
                }
                cluster_of[v] = c;
            }
        }
        if let Some(v) = cluster_of.iter().position(|&c| c == usize::MAX) {
            return Err(InstanceError::UnclusteredNode(v));
        }
        Ok(Instance {
            name,
            comment: None,
            weight_type,
            coords,
            clusters,
            cluster_of,
            dist,
        })
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comment = Some(comment.into());
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn comment(&self) -> Option<&str> {
        self.comment.as_deref()
    }

    pub fn weight_type(&self) -> EdgeWeightType {
        self.weight_type
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.cluster_of.len()
    }

    /// Number of clusters.
    pub fn m(&self) -> usize {
        self.clusters.len()
    }

    pub fn coords(&self) -> Option<&[Point]> {
        self.coords.as_deref()
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn cluster(&self, c: usize) -> &[usize] {
        &self.clusters[c]
    }

    pub fn cluster_of(&self, node: usize) -> usize {
        self.cluster_of[node]
    }

    #[inline]
    pub fn dist(&self, a: usize, b: usize) -> i64 {
        self.dist[a * self.n() + b] as i64
    }

    /// Row-major distance matrix.
    pub fn matrix(&self) -> &[u32] {
        &self.dist
    }

    /// Whether two instances describe the same problem, ignoring name and
    /// comment.
    pub fn same_problem(&self, other: &Instance) -> bool {
        self.weight_type == other.weight_type
            && self.coords == other.coords
            && self.clusters == other.clusters
            && self.dist == other.dist
    }
}
