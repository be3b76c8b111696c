// Indexed loops mirror the usual statement of the covariance and Jacobi
// updates.
#![allow(clippy::needless_range_loop)]

use crate::AnalysisError;

/// Principal-component projection of a point cloud.
#[derive(Debug, Clone)]
pub struct Pca {
    /// n x out_dims projected coordinates
    pub projection: Vec<Vec<f64>>,
    /// fraction of total variance per kept component, non-increasing
    pub explained: Vec<f64>,
    /// eigenvalues of the covariance for the kept components
    pub eigenvalues: Vec<f64>,
    /// kept eigenvectors, one per row, unit norm
    pub components: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    /// all points identical: zero variance, projection all zeros
    pub degenerate: bool,
}

impl Pca {
    /// Project a new point with the fitted mean and components.
    pub fn project_point(&self, point: &[f64]) -> Vec<f64> {
        let centered: Vec<f64> = point.iter().zip(&self.mean).map(|(p, m)| p - m).collect();
        self.components.iter().map(|c| dot(c, &centered)).collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Mean-center, eigendecompose the sample covariance (Jacobi rotations), and
/// project onto the top `out_dims` components.
///
/// Components are ordered by descending eigenvalue with a fixed sign
/// convention: the largest-magnitude coordinate of each component is
/// positive. Explained ratios are eigenvalue fractions of the total variance.
pub fn pca_project(points: &[Vec<f64>], out_dims: usize) -> Result<Pca, AnalysisError> {
    let n = points.len();
    if n < 2 {
        return Err(AnalysisError::TooFewPoints(n));
    }
    let dim = points[0].len();
    if out_dims > dim {
        return Err(AnalysisError::TooManyComponents {
            requested: out_dims,
            available: dim,
        });
    }

    let mut mean = vec![0.0; dim];
    for point in points {
        for (m, v) in mean.iter_mut().zip(point) {
            *m += v;
        }
    }
    for m in mean.iter_mut() {
        *m /= n as f64;
    }

    // sample covariance
    let mut cov = vec![vec![0.0; dim]; dim];
    for point in points {
        let centered: Vec<f64> = point.iter().zip(&mean).map(|(p, m)| p - m).collect();
        for i in 0..dim {
            for j in i..dim {
                cov[i][j] += centered[i] * centered[j];
            }
        }
    }
    for i in 0..dim {
        for j in i..dim {
            cov[i][j] /= (n - 1) as f64;
            cov[j][i] = cov[i][j];
        }
    }

    let total_variance: f64 = (0..dim).map(|i| cov[i][i]).sum();
    if total_variance == 0.0 {
        return Ok(Pca {
            projection: vec![vec![0.0; out_dims]; n],
            explained: vec![0.0; out_dims],
            eigenvalues: vec![0.0; out_dims],
            components: identity_rows(dim, out_dims),
            mean,
            degenerate: true,
        });
    }

    let (mut eigenvalues, mut eigenvectors) = jacobi_eigen(&cov);
    // sort by descending eigenvalue; clamp the tiny negatives Jacobi leaves
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eigenvalues[b].total_cmp(&eigenvalues[a]));
    eigenvalues = order.iter().map(|&i| eigenvalues[i].max(0.0)).collect();
    eigenvectors = order.iter().map(|&i| eigenvectors[i].clone()).collect();

    // sign convention: largest-magnitude coordinate positive
    for vector in eigenvectors.iter_mut() {
        let lead = vector
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.abs().total_cmp(&b.abs()))
            .map(|(i, _)| i)
            .unwrap();
        if vector[lead] < 0.0 {
            for v in vector.iter_mut() {
                *v = -*v;
            }
        }
    }

    let components: Vec<Vec<f64>> = eigenvectors.into_iter().take(out_dims).collect();
    let eigenvalues: Vec<f64> = eigenvalues.into_iter().take(out_dims).collect();
    let explained: Vec<f64> = eigenvalues.iter().map(|l| l / total_variance).collect();
    let projection: Vec<Vec<f64>> = points
        .iter()
        .map(|point| {
            let centered: Vec<f64> = point.iter().zip(&mean).map(|(p, m)| p - m).collect();
            components.iter().map(|c| dot(c, &centered)).collect()
        })
        .collect();

    Ok(Pca {
        projection,
        explained,
        eigenvalues,
        components,
        mean,
        degenerate: false,
    })
}

fn identity_rows(dim: usize, rows: usize) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|r| (0..dim).map(|c| if r == c { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Cyclic Jacobi eigendecomposition for a symmetric matrix. Returns
/// (eigenvalues, eigenvectors-as-rows). Plenty at these dimensions.
fn jacobi_eigen(matrix: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let dim = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    // accumulated rotations, columns are eigenvectors
    let mut v = identity_rows(dim, dim);

    for _sweep in 0..100 {
        let off: f64 = (0..dim)
            .flat_map(|i| ((i + 1)..dim).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-24 {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..dim {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..dim {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let eigenvalues: Vec<f64> = (0..dim).map(|i| a[i][i]).collect();
    // transpose: eigenvectors as rows
    let eigenvectors: Vec<Vec<f64>> = (0..dim)
        .map(|col| (0..dim).map(|row| v[row][col]).collect())
        .collect();
    (eigenvalues, eigenvectors)
}
