use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ExtractionError;

const MAX_ITERATIONS: usize = 300;

/// A k-means clustering of the state cloud.
#[derive(Debug, Clone)]
pub struct Clustering {
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    /// point index -> cluster id; every point sits in its nearest centroid
    /// (ties to the lowest id)
    pub assignment: Vec<usize>,
    /// total squared Euclidean distance of points to their centroids
    pub inertia: f64,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in centroids.iter().enumerate() {
        let d = squared_distance(point, c);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    (best, best_d)
}

/// Lloyd's algorithm with k-means++ seeding.
///
/// Runs until the assignment stops changing (or 300 iterations). Clusters
/// that empty out are repaired by re-seeding them on the farthest point of
/// the highest-inertia cluster, so the result never has an empty cluster.
/// Deterministic in `seed`.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Result<Clustering, ExtractionError> {
    if points.is_empty() {
        return Err(ExtractionError::EmptyCollection);
    }
    assert!(k >= 1);
    let distinct = {
        let mut sorted: Vec<&Vec<f64>> = points.iter().collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite points"));
        sorted.dedup();
        sorted.len()
    };
    if k > distinct {
        return Err(ExtractionError::KTooLarge { k, distinct });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = plus_plus_seeds(points, k, &mut rng);
    let mut assignment = vec![usize::MAX; points.len()];

    for _ in 0..MAX_ITERATIONS {
        // assign
        let mut changed = false;
        for (i, point) in points.iter().enumerate() {
            let (c, _) = nearest(point, &centroids);
            if assignment[i] != c {
                assignment[i] = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        // update
        let dim = points[0].len();
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (point, &c) in points.iter().zip(&assignment) {
            counts[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(point) {
                *s += v;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                for s in sums[c].iter_mut() {
                    *s /= counts[c] as f64;
                }
                centroids[c] = sums[c].clone();
            }
        }
        repair_empty_clusters(points, &mut centroids, &mut assignment, &counts);
    }

    let inertia = points
        .iter()
        .zip(&assignment)
        .map(|(p, &c)| squared_distance(p, &centroids[c]))
        .sum();
    Ok(Clustering {
        k,
        centroids,
        assignment,
        inertia,
    })
}

/// k-means++: first centroid uniform, the rest proportional to the squared
/// distance from the nearest chosen centroid.
fn plus_plus_seeds(points: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut centroids = Vec::with_capacity(k);
    centroids.push(points[rng.random_range(0..points.len())].clone());
    let mut best_d: Vec<f64> = points
        .iter()
        .map(|p| squared_distance(p, &centroids[0]))
        .collect();
    while centroids.len() < k {
        let total: f64 = best_d.iter().sum();
        let chosen = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut idx = 0;
            for (i, &d) in best_d.iter().enumerate() {
                target -= d;
                if target <= 0.0 {
                    idx = i;
                    break;
                }
            }
            idx
        } else {
            // all remaining mass at distance zero; fall back to uniform
            rng.random_range(0..points.len())
        };
        centroids.push(points[chosen].clone());
        for (d, p) in best_d.iter_mut().zip(points) {
            *d = d.min(squared_distance(p, centroids.last().unwrap()));
        }
    }
    centroids
}

/// Re-seed any empty cluster on the farthest point of the cluster with the
/// highest within-cluster inertia.
fn repair_empty_clusters(
    points: &[Vec<f64>],
    centroids: &mut [Vec<f64>],
    assignment: &mut [usize],
    counts: &[usize],
) {
    let k = centroids.len();
    let mut counts = counts.to_vec();
    for empty in 0..k {
        if counts[empty] > 0 {
            continue;
        }
        // per-cluster inertia with current assignment
        let mut inertia = vec![0.0; k];
        for (point, &c) in points.iter().zip(assignment.iter()) {
            inertia[c] += squared_distance(point, &centroids[c]);
        }
        let donor = (0..k)
            .filter(|&c| counts[c] > 1)
            .max_by(|&a, &b| inertia[a].total_cmp(&inertia[b]));
        let Some(donor) = donor else { break };
        let (farthest, _) = points
            .iter()
            .enumerate()
            .filter(|(i, _)| assignment[*i] == donor)
            .map(|(i, p)| (i, squared_distance(p, &centroids[donor])))
            .max_by(|(_, a), (_, b)| a.total_cmp(b))
            .expect("donor is nonempty");
        centroids[empty] = points[farthest].clone();
        assignment[farthest] = empty;
        counts[empty] = 1;
        counts[donor] -= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_blobs() -> Vec<Vec<f64>> {
        let mut points = Vec::new();
        for _ in 0..10 {
            points.push(vec![0.0, 0.0]);
        }
        for _ in 0..10 {
            points.push(vec![5.0, 5.0]);
        }
        points
    }

    #[test]
    fn separated_duplicates_cluster_exactly() {
        let clustering = kmeans(&two_blobs(), 2, 1).unwrap();
        assert_eq!(clustering.inertia, 0.0);
        let mut centroids = clustering.centroids.clone();
        centroids.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(centroids, vec![vec![0.0, 0.0], vec![5.0, 5.0]]);
        // one side together, other side together
        let first = clustering.assignment[0];
        assert!(clustering.assignment[..10].iter().all(|&c| c == first));
        assert!(clustering.assignment[10..].iter().all(|&c| c != first));
    }

    #[test]
    fn k_one_returns_the_mean() {
        let points = vec![vec![1.0, 0.0], vec![3.0, 0.0], vec![5.0, 6.0]];
        let clustering = kmeans(&points, 1, 0).unwrap();
        assert_eq!(clustering.centroids, vec![vec![3.0, 2.0]]);
    }

    #[test]
    fn every_point_sits_in_its_nearest_centroid() {
        let points: Vec<Vec<f64>> = (0..50)
            .map(|i| vec![(i as f64 * 0.7).sin() * 3.0, (i as f64 * 1.3).cos() * 2.0])
            .collect();
        let clustering = kmeans(&points, 5, 3).unwrap();
        for (point, &c) in points.iter().zip(&clustering.assignment) {
            let (nearest_c, _) = nearest(point, &clustering.centroids);
            assert_eq!(
                squared_distance(point, &clustering.centroids[c]),
                squared_distance(point, &clustering.centroids[nearest_c])
            );
        }
        // no empty clusters
        for c in 0..clustering.k {
            assert!(clustering.assignment.contains(&c), "cluster {c} empty");
        }
    }

    #[test]
    fn inertia_does_not_grow_with_k_on_best_of_five() {
        let points: Vec<Vec<f64>> = (0..60)
            .map(|i| {
                vec![
                    (i % 4) as f64 * 4.0 + (i as f64 * 0.11).sin() * 0.2,
                    (i / 4) as f64 * 0.1,
                ]
            })
            .collect();
        let best = |k: usize| -> f64 {
            (0..5)
                .map(|r| kmeans(&points, k, 100 + r).unwrap().inertia)
                .fold(f64::INFINITY, f64::min)
        };
        let mut previous = f64::INFINITY;
        for k in 1..=6 {
            let inertia = best(k);
            assert!(
                inertia <= previous + 1e-9,
                "inertia rose from {previous} to {inertia} at K={k}"
            );
            previous = inertia;
        }
    }

    #[test]
    fn k_larger_than_distinct_points_is_an_error() {
        let points = vec![vec![1.0], vec![1.0], vec![2.0]];
        assert!(matches!(
            kmeans(&points, 3, 0),
            Err(ExtractionError::KTooLarge { k: 3, distinct: 2 })
        ));
    }

    #[test]
    fn clustering_is_deterministic() {
        let points = two_blobs();
        let a = kmeans(&points, 2, 42).unwrap();
        let b = kmeans(&points, 2, 42).unwrap();
        assert_eq!(a.assignment, b.assignment);
        assert_eq!(a.centroids, b.centroids);
    }
}
