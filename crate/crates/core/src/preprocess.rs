//! 2D segment post-processing: merge near-collinear fragments and drop
//! short segments.
//!
//! Two segments are mergeable when the closest pair among their four
//! endpoints is under the distance threshold and the acute angle between
//! their (undirected) directions is under the angle threshold. Merging is
//! the transitive closure of that relation, computed with union-find, so the
//! result does not depend on input order. Each cluster is replaced by a
//! single segment: endpoints are projected onto the cluster's principal
//! axis and the two extremal projections are kept.

use nalgebra::{Matrix2, Vector2};

use crate::geometry::LineSegment2d;
use crate::{cast, Scalar};

/// A set of segments together with the merge/filter thresholds.
#[derive(Clone, Debug)]
pub struct SegmentSet<S: Scalar> {
    pub segments: Vec<LineSegment2d<S>>,
    /// Endpoint-gap threshold in pixels.
    pub merge_dist_px: S,
    /// Acute-angle threshold in degrees.
    pub merge_angle_deg: S,
    /// Minimum surviving segment length in pixels.
    pub min_length_px: S,
}

impl<S: Scalar> SegmentSet<S> {
    pub fn new(segments: Vec<LineSegment2d<S>>) -> Self {
        Self {
            segments,
            merge_dist_px: cast(5.0),
            merge_angle_deg: cast(2.0),
            min_length_px: cast(20.0),
        }
    }

    pub fn with_thresholds(mut self, dist_px: S, angle_deg: S, min_length_px: S) -> Self {
        self.merge_dist_px = dist_px;
        self.merge_angle_deg = angle_deg;
        self.min_length_px = min_length_px;
        self
    }
}

/// Acute angle between undirected segment directions, degrees.
fn acute_angle_deg<S: Scalar>(a: &LineSegment2d<S>, b: &LineSegment2d<S>) -> S {
    let da = a.direction().normalize();
    let db = b.direction().normalize();
    let cos = da.dot(&db).abs().clamp(S::zero(), S::one());
    cos.acos() * cast::<S>(180.0) / S::pi()
}

/// Minimum Euclidean distance over the four endpoint pairs.
fn min_endpoint_gap<S: Scalar>(a: &LineSegment2d<S>, b: &LineSegment2d<S>) -> S {
    let pts_a = [a.start(), a.end()];
    let pts_b = [b.start(), b.end()];
    let mut best = (pts_a[0] - pts_b[0]).norm();
    for pa in &pts_a {
        for pb in &pts_b {
            best = best.min((pa - pb).norm());
        }
    }
    best
}

/// Merge criterion: endpoint gap under the distance threshold and angle
/// under the angle threshold.
pub fn should_merge<S: Scalar>(
    a: &LineSegment2d<S>,
    b: &LineSegment2d<S>,
    set: &SegmentSet<S>,
) -> bool {
    min_endpoint_gap(a, b) < set.merge_dist_px && acute_angle_deg(a, b) < set.merge_angle_deg
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Replace one cluster of fragments by a single spanning segment.
fn fuse_cluster<S: Scalar>(cluster: &[&LineSegment2d<S>]) -> Option<LineSegment2d<S>> {
    if cluster.len() == 1 {
        return Some(*cluster[0]);
    }
    let mut points: Vec<Vector2<S>> = Vec::with_capacity(cluster.len() * 2);
    for seg in cluster {
        points.push(seg.start());
        points.push(seg.end());
    }
    let n = cast::<S>(points.len() as f64);
    let centroid = points.iter().fold(Vector2::zeros(), |a, p| a + p) / n;
    let mut cov = Matrix2::zeros();
    for p in &points {
        let d = p - centroid;
        cov += d * d.transpose();
    }
    // Principal axis of the 2x2 covariance.
    let two = cast::<S>(2.0);
    let angle = (two * cov[(0, 1)]).atan2(cov[(0, 0)] - cov[(1, 1)]) / two;
    let axis = Vector2::new(angle.cos(), angle.sin());

    let mut lo = S::max_value().unwrap();
    let mut hi = -S::max_value().unwrap();
    for p in &points {
        let t = (p - centroid).dot(&axis);
        lo = lo.min(t);
        hi = hi.max(t);
    }
    let a = centroid + axis * lo;
    let b = centroid + axis * hi;
    LineSegment2d::from_pixels(a.x, a.y, b.x, b.y).ok()
}

/// Merge the transitive closure of [`should_merge`] and drop segments
/// shorter than the minimum length. Idempotent.
pub fn merge_all<S: Scalar>(set: &SegmentSet<S>) -> SegmentSet<S> {
    let segs = &set.segments;
    let mut uf = UnionFind::new(segs.len());
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if should_merge(&segs[i], &segs[j], set) {
                uf.union(i, j);
            }
        }
    }

    let mut clusters: Vec<Vec<&LineSegment2d<S>>> = vec![Vec::new(); segs.len()];
    for (i, seg) in segs.iter().enumerate() {
        let root = uf.find(i);
        clusters[root].push(seg);
    }

    let merged = clusters
        .iter()
        .filter(|c| !c.is_empty())
        .filter_map(|c| fuse_cluster(c))
        .filter(|seg| seg.length() >= set.min_length_px)
        .collect();

    SegmentSet {
        segments: merged,
        merge_dist_px: set.merge_dist_px,
        merge_angle_deg: set.merge_angle_deg,
        min_length_px: set.min_length_px,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: (f64, f64), b: (f64, f64)) -> LineSegment2d<f64> {
        LineSegment2d::from_pixels(a.0, a.1, b.0, b.1).unwrap()
    }

    fn defaults() -> SegmentSet<f64> {
        SegmentSet::new(Vec::new())
    }

    #[test]
    fn merge_criteria_thresholds() {
        let cfg = defaults();
        // Collinear abutting fragments, 3 px gap, zero angle.
        let a = seg((0.0, 0.0), (30.0, 0.0));
        let b = seg((33.0, 0.0), (60.0, 0.0));
        assert!(should_merge(&a, &b, &cfg));

        // Gap fine, angle 5 degrees: rejected.
        let tilt = 5.0_f64.to_radians();
        let c = seg((33.0, 0.0), (33.0 + 30.0 * tilt.cos(), 30.0 * tilt.sin()));
        assert!(!should_merge(&a, &c, &cfg));

        // Angle fine, gap 10 px: rejected.
        let d = seg((40.0, 0.0), (70.0, 0.0));
        assert!(!should_merge(&a, &d, &cfg));
    }

    #[test]
    fn merge_boundary_cases() {
        let cfg = defaults();
        let a = seg((0.0, 0.0), (30.0, 0.0));
        let gap_49 = seg((34.9, 0.0), (64.9, 0.0));
        let gap_51 = seg((35.1, 0.0), (65.1, 0.0));
        assert!(should_merge(&a, &gap_49, &cfg));
        assert!(!should_merge(&a, &gap_51, &cfg));

        let angle = |deg: f64| {
            let t = deg.to_radians();
            seg((33.0, 0.0), (33.0 + 40.0 * t.cos(), 40.0 * t.sin()))
        };
        assert!(should_merge(&a, &angle(1.9), &cfg));
        assert!(!should_merge(&a, &angle(2.1), &cfg));
    }

    #[test]
    fn merge_all_empty_and_filter() {
        let out = merge_all(&defaults());
        assert!(out.segments.is_empty());

        // 15 px isolated fragment removed, 21 px kept, 19 px dropped.
        let set = SegmentSet::new(vec![
            seg((0.0, 0.0), (15.0, 0.0)),
            seg((100.0, 100.0), (100.0, 121.0)),
            seg((200.0, 50.0), (219.0, 50.0)),
        ]);
        let out = merge_all(&set);
        assert_eq!(out.segments.len(), 1);
        assert!((out.segments[0].length() - 21.0).abs() < 1e-9);
    }

    #[test]
    fn fragments_merge_to_spanning_segment() {
        // Extremal-projection oracle: two fragments of one line produce a
        // segment spanning the extreme endpoints.
        let set = SegmentSet::new(vec![
            seg((0.0, 0.0), (40.0, 0.0)),
            seg((43.0, 0.0), (90.0, 0.0)),
        ]);
        let out = merge_all(&set);
        assert_eq!(out.segments.len(), 1);
        let s = &out.segments[0];
        let (lo, hi) = if s.start().x < s.end().x {
            (s.start(), s.end())
        } else {
            (s.end(), s.start())
        };
        assert!((lo - Vector2::new(0.0, 0.0)).norm() < 1e-9);
        assert!((hi - Vector2::new(90.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn chains_merge_transitively() {
        // A-B and B-C mergeable, A-C alone too far apart: one output.
        let set = SegmentSet::new(vec![
            seg((0.0, 0.0), (30.0, 0.0)),
            seg((33.0, 0.0), (63.0, 0.0)),
            seg((66.0, 0.0), (96.0, 0.0)),
        ]);
        let out = merge_all(&set);
        assert_eq!(out.segments.len(), 1);
        assert!((out.segments[0].length() - 96.0).abs() < 1e-9);
    }

    #[test]
    fn idempotent_and_order_independent() {
        let base = vec![
            seg((0.0, 0.0), (30.0, 1.0)),
            seg((33.0, 1.1), (63.0, 2.0)),
            seg((100.0, 200.0), (140.0, 250.0)),
            seg((300.0, 10.0), (300.0, 60.0)),
            seg((300.5, 62.0), (300.9, 110.0)),
        ];
        let once = merge_all(&SegmentSet::new(base.clone()));
        let twice = merge_all(&once);
        assert_eq!(once.segments.len(), twice.segments.len());
        for (a, b) in once.segments.iter().zip(&twice.segments) {
            assert!((a.start() - b.start()).norm() < 1e-9);
            assert!((a.end() - b.end()).norm() < 1e-9);
        }

        let mut rev = base.clone();
        rev.reverse();
        let out_rev = merge_all(&SegmentSet::new(rev));
        assert_eq!(once.segments.len(), out_rev.segments.len());
        let mut lengths_a: Vec<f64> = once.segments.iter().map(|s| s.length()).collect();
        let mut lengths_b: Vec<f64> = out_rev.segments.iter().map(|s| s.length()).collect();
        lengths_a.sort_by(|a, b| a.partial_cmp(b).unwrap());
        lengths_b.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in lengths_a.iter().zip(&lengths_b) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn output_count_and_direction_bounds() {
        let base = vec![
            seg((0.0, 0.0), (50.0, 0.3)),
            seg((52.0, 0.3), (110.0, 0.8)),
            seg((10.0, 300.0), (80.0, 340.0)),
        ];
        let set = SegmentSet::new(base.clone());
        let out = merge_all(&set);
        assert!(out.segments.len() <= base.len());
        for s in &out.segments {
            assert!(s.length() >= 20.0);
        }
        // Merged direction stays within the angle threshold of each input.
        let merged = &out.segments[0];
        for input in &base[..2] {
            assert!(acute_angle_deg(merged, input) < set.merge_angle_deg);
        }
    }
}
