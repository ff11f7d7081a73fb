//! Seeded Lloyd's k-means with farthest-point initialization.
//!
//! Initialization picks the first centroid uniformly at random from the
//! input and each subsequent centroid as the point farthest from its
//! nearest already-chosen centroid, which makes the procedure fully
//! deterministic under the seed. Empty clusters are respawned at the point
//! farthest from its nearest centroid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Group;
use crate::geometry::Point2D;

const MAX_LLOYD_ITERATIONS: usize = 300;

/// Partitions `points` into `k` nonempty groups.
///
/// Panics if `k == 0` or `k > points.len()`.
pub fn kmeans_cluster(points: &[Point2D], k: usize, seed: u64) -> Vec<Group> {
    let assignment = kmeans_assign(points, k, seed);
    groups_from_assignment(points, k, &assignment)
}

/// Runs Lloyd's algorithm and returns the per-point cluster index.
pub(crate) fn kmeans_assign(points: &[Point2D], k: usize, seed: u64) -> Vec<usize> {
    assert!(k >= 1 && k <= points.len(), "need 1 <= k <= |points|");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = init_farthest_point(points, k, rng.gen_range(0..points.len()));

    let mut assignment = vec![usize::MAX; points.len()];
    for _ in 0..MAX_LLOYD_ITERATIONS {
        let new_assignment: Vec<usize> = points
            .iter()
            .map(|p| nearest_index(p, &centroids))
            .collect();

        // Respawn any empty cluster at the globally worst-covered point.
        let mut counts = vec![0usize; k];
        for &a in &new_assignment {
            counts[a] += 1;
        }
        if let Some(empty) = counts.iter().position(|&c| c == 0) {
            let far = farthest_from_centroids(points, &centroids);
            centroids[empty] = points[far];
            continue;
        }

        if new_assignment == assignment {
            break;
        }
        assignment = new_assignment;

        let mut sums = vec![(0.0f64, 0.0f64, 0usize); k];
        for (p, &a) in points.iter().zip(&assignment) {
            sums[a].0 += p.x;
            sums[a].1 += p.y;
            sums[a].2 += 1;
        }
        for (c, &(sx, sy, n)) in centroids.iter_mut().zip(&sums) {
            *c = Point2D::new(sx / n as f64, sy / n as f64);
        }
    }
    assignment
}

fn init_farthest_point(points: &[Point2D], k: usize, first: usize) -> Vec<Point2D> {
    let mut centroids = vec![points[first]];
    while centroids.len() < k {
        let far = farthest_from_centroids(points, &centroids);
        centroids.push(points[far]);
    }
    centroids
}

/// Index of the point maximizing distance to its nearest centroid
/// (ties broken by lowest index).
fn farthest_from_centroids(points: &[Point2D], centroids: &[Point2D]) -> usize {
    let mut best = 0;
    let mut best_d = f64::NEG_INFINITY;
    for (i, p) in points.iter().enumerate() {
        let d = centroids
            .iter()
            .map(|c| p.distance(c))
            .fold(f64::INFINITY, f64::min);
        if d > best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Nearest centroid index, ties broken by lowest index.
fn nearest_index(p: &Point2D, centroids: &[Point2D]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in centroids.iter().enumerate() {
        let d = p.distance(c);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

fn groups_from_assignment(points: &[Point2D], k: usize, assignment: &[usize]) -> Vec<Group> {
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &a) in assignment.iter().enumerate() {
        members[a].push(i);
    }
    members
        .into_iter()
        .enumerate()
        .map(|(id, m)| Group::new(id, m, points))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_corner_points_form_singleton_clusters() {
        let pts = vec![
            Point2D::new(0.0, 0.0),
            Point2D::new(100.0, 0.0),
            Point2D::new(0.0, 100.0),
            Point2D::new(100.0, 100.0),
        ];
        let groups = kmeans_cluster(&pts, 4, 7);
        assert_eq!(groups.len(), 4);
        for g in &groups {
            assert_eq!(g.members.len(), 1);
        }
    }

    #[test]
    fn k_one_yields_global_centroid() {
        let pts = vec![
            Point2D::new(0.0, 0.0),
            Point2D::new(4.0, 0.0),
            Point2D::new(2.0, 6.0),
        ];
        let groups = kmeans_cluster(&pts, 1, 0);
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].members, vec![0, 1, 2]);
        assert!((groups[0].centroid.x - 2.0).abs() < 1e-12);
        assert!((groups[0].centroid.y - 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_separated_blobs_recover_blob_membership() {
        // Two 50-point blobs with gap far exceeding blob radius; the blob
        // labels serve as the oracle partition.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut pts = Vec::new();
        for _ in 0..50 {
            pts.push(Point2D::new(rng.gen::<f64>() * 10.0, rng.gen::<f64>() * 10.0));
        }
        for _ in 0..50 {
            pts.push(Point2D::new(
                1000.0 + rng.gen::<f64>() * 10.0,
                rng.gen::<f64>() * 10.0,
            ));
        }
        let groups = kmeans_cluster(&pts, 2, 3);
        for g in &groups {
            assert_eq!(g.members.len(), 50);
            let all_left = g.members.iter().all(|&i| i < 50);
            let all_right = g.members.iter().all(|&i| i >= 50);
            assert!(all_left || all_right);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pts: Vec<Point2D> = (0..200)
            .map(|_| Point2D::new(rng.gen::<f64>() * 500.0, rng.gen::<f64>() * 500.0))
            .collect();
        let a = kmeans_cluster(&pts, 12, 99);
        let b = kmeans_cluster(&pts, 12, 99);
        assert_eq!(a.len(), b.len());
        for (ga, gb) in a.iter().zip(&b) {
            assert_eq!(ga.members, gb.members);
        }
    }
}
