//! Instances, tours, and tour-length arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generate::GeneratorConfig;
use crate::geom::{Metric, Point};
use crate::stats::pairwise_sum;

/// How an instance was generated, sufficient to rebuild it exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(flatten)]
    pub config: GeneratorConfig,
    pub seed: u64,
}

/// A labeled set of points with a distance convention.
///
/// Duplicate points are permitted (real TSPLIB files contain them).
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    nodes: Vec<Point>,
    metric: Metric,
    provenance: Option<Provenance>,
}

impl Instance {
    pub fn new(name: impl Into<String>, nodes: Vec<Point>, metric: Metric) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "instance needs at least 3 nodes, got {}",
                nodes.len()
            )));
        }
        for (i, p) in nodes.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "node {i} has non-finite coordinates"
                )));
            }
            if metric == Metric::Torus
                && (!(0.0..=1.0).contains(&p.x) || !(0.0..=1.0).contains(&p.y))
            {
                return Err(Error::InvalidInput(format!(
                    "torus metric requires coordinates in [0,1]; node {i} is ({}, {})",
                    p.x, p.y
                )));
            }
        }
        Ok(Self { name: name.into(), nodes, metric, provenance: None })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Point {
        self.nodes[i]
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Distance between nodes `i` and `j` under the instance metric.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.metric.dist(self.nodes[i], self.nodes[j])
    }

    /// Full distance matrix, row-major `n × n`.
    pub fn distance_matrix(&self) -> Vec<f64> {
        let n = self.n();
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = self.dist(i, j);
                m[i * n + j] = d;
                m[j * n + i] = d;
            }
        }
        m
    }
}

/// A closed tour: a permutation of `0..n` plus its cached length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tour {
    order: Vec<usize>,
    length: f64,
}

impl Tour {
    /// Validate `order` against `instance` and cache the canonical length.
    pub fn new(instance: &Instance, order: Vec<usize>) -> Result<Self> {
        let length = tour_length(instance, &order)?;
        Ok(Self { order, length })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// The two tour-adjacent nodes of each node: `adj[i] = (prev, next)`.
    pub fn adjacency(&self) -> Vec<(usize, usize)> {
        let n = self.order.len();
        let mut adj = vec![(usize::MAX, usize::MAX); n];
        for (k, &v) in self.order.iter().enumerate() {
            let prev = self.order[(k + n - 1) % n];
            let next = self.order[(k + 1) % n];
            adj[v] = (prev, next);
        }
        adj
    }
}

pub(crate) fn validate_permutation(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::InvalidTour(format!(
            "tour has {} entries, instance has {n} nodes",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n {
            return Err(Error::InvalidTour(format!("index {v} out of range 0..{n}")));
        }
        if seen[v] {
            return Err(Error::InvalidTour(format!("index {v} repeated")));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Length of the closed tour visiting `order`, including the return edge.
///
/// Edges are accumulated in a canonical traversal (starting at node 0,
/// heading toward the smaller of its two tour neighbors) with pairwise
/// summation, so rotations and reversals of `order` produce bit-identical
/// lengths.
pub fn tour_length(instance: &Instance, order: &[usize]) -> Result<f64> {
    validate_permutation(order, instance.n())?;
    let n = order.len();
    let p0 = order.iter().position(|&v| v == 0).expect("validated");
    let next = order[(p0 + 1) % n];
    let prev = order[(p0 + n - 1) % n];
    let forward = next <= prev;
    let mut edges = Vec::with_capacity(n);
    let mut pos = p0;
    for _ in 0..n {
        let npos = if forward { (pos + 1) % n } else { (pos + n - 1) % n };
        edges.push(instance.dist(order[pos], order[npos]));
        pos = npos;
    }
    Ok(pairwise_sum(&edges))
}

/// Relative slack below which a candidate shorter than its reference is
/// treated as fp noise rather than warned about.
const GAP_WARN_SLACK: f64 = 1e-12;

/// Fractional optimality gap `candidate / reference − 1`.
///
/// A candidate slightly below the reference yields a negative gap with a
/// warning (the reference may itself be heuristic), not an error.
pub fn optimality_gap(candidate_length: f64, reference_length: f64) -> Result<f64> {
    if !candidate_length.is_finite() || !reference_length.is_finite() {
        return Err(Error::InvalidInput("non-finite length in gap".into()));
    }
    if reference_length <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "reference length must be positive, got {reference_length}"
        )));
    }
    let gap = candidate_length / reference_length - 1.0;
    if gap < -GAP_WARN_SLACK {
        log::warn!(
            "candidate ({candidate_length}) is shorter than reference ({reference_length}); \
             the reference may not be optimal"
        );
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;

    fn square() -> Instance {
        let pts = vec![
            Point::new(0.0, 0.0).unwrap(),
            Point::new(1.0, 0.0).unwrap(),
            Point::new(1.0, 1.0).unwrap(),
            Point::new(0.0, 1.0).unwrap(),
        ];
        Instance::new("square", pts, Metric::Euclidean).unwrap()
    }

    #[test]
    fn unit_square_cycle_length() {
        let inst = square();
        assert_eq!(tour_length(&inst, &[0, 1, 2, 3]).unwrap(), 4.0);
    }

    #[test]
    fn all_three_node_tours_are_the_perimeter() {
        let pts = vec![
            Point::new(0.1, 0.2).unwrap(),
            Point::new(0.9, 0.3).unwrap(),
            Point::new(0.4, 0.8).unwrap(),
        ];
        let inst = Instance::new("tri", pts, Metric::Euclidean).unwrap();
        let perimeter = inst.dist(0, 1) + inst.dist(1, 2) + inst.dist(2, 0);
        for order in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let len = tour_length(&inst, &order).unwrap();
            assert!((len - perimeter).abs() < 1e-12);
        }
    }

    #[test]
    fn length_matches_independent_pairwise_loop() {
        // independent oracle: plain running sum over the written order
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Point> = (0..7)
            .map(|_| Point::new(rng.random(), rng.random()).unwrap())
            .collect();
        let inst = Instance::new("r7", pts, Metric::Euclidean).unwrap();
        let order = [3, 1, 6, 0, 2, 5, 4];
        let mut oracle = 0.0;
        for i in 0..order.len() {
            let j = (i + 1) % order.len();
            oracle += inst.dist(order[i], order[j]);
        }
        let got = tour_length(&inst, &order).unwrap();
        assert!((got - oracle).abs() < 1e-12);
    }

    #[test]
    fn rotation_and_reversal_are_bit_exact() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<Point> = (0..9)
            .map(|_| Point::new(rng.random(), rng.random()).unwrap())
            .collect();
        let inst = Instance::new("r9", pts, Metric::Euclidean).unwrap();
        let order: Vec<usize> = vec![4, 7, 1, 0, 8, 2, 6, 3, 5];
        let base = tour_length(&inst, &order).unwrap();
        for rot in 0..order.len() {
            let rotated: Vec<usize> =
                (0..order.len()).map(|i| order[(i + rot) % order.len()]).collect();
            assert_eq!(tour_length(&inst, &rotated).unwrap(), base);
            let mut reversed = rotated.clone();
            reversed.reverse();
            assert_eq!(tour_length(&inst, &reversed).unwrap(), base);
        }
    }

    #[test]
    fn non_permutations_are_rejected() {
        let inst = square();
        assert!(tour_length(&inst, &[0, 1, 2]).is_err());
        assert!(tour_length(&inst, &[0, 1, 2, 2]).is_err());
        assert!(tour_length(&inst, &[0, 1, 2, 4]).is_err());
    }

    #[test]
    fn gap_examples() {
        let g = optimality_gap(5.928, 5.688).unwrap();
        assert!((g - 0.04219).abs() < 5e-5, "got {g}");
        assert_eq!(optimality_gap(3.5, 3.5).unwrap(), 0.0);
        assert_eq!(optimality_gap(2.0, 1.0).unwrap(), 1.0);
        assert!(optimality_gap(1.0, 0.0).is_err());
        assert!(optimality_gap(1.0, -2.0).is_err());
        // slightly-below reference warns but succeeds
        assert!(optimality_gap(0.9, 1.0).unwrap() < 0.0);
    }

    #[test]
    fn tiny_instances_are_rejected() {
        let pts = vec![Point::new(0.0, 0.0).unwrap(), Point::new(1.0, 0.0).unwrap()];
        assert!(Instance::new("two", pts, Metric::Euclidean).is_err());
    }

    #[test]
    fn adjacency_pairs_up() {
        let inst = square();
        let tour = Tour::new(&inst, vec![2, 0, 3, 1]).unwrap();
        let adj = tour.adjacency();
        assert_eq!(adj[2], (1, 0));
        assert_eq!(adj[0], (2, 3));
        assert_eq!(adj[3], (0, 1));
        assert_eq!(adj[1], (3, 2));
    }
}
