//! Leading singular values of the node-hyperedge incidence matrix.
//!
//! The incidence matrix is tall, sparse, and only available as an
//! operator, so the spectrum comes from block subspace iteration on the
//! Gram operator of the smaller side (MMᵀ or MᵀM), with Rayleigh-Ritz
//! extraction by a cyclic Jacobi eigensolver on the projected block.
//! When the smaller dimension is itself small the block spans the whole
//! space and one projection is exact, no iteration. Singular values are
//! recomputed as ‖M v‖ from the Ritz vectors, which keeps zero singular
//! values exact on rank-deficient inputs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::PatternError;
use crate::hypergraph::{SparseIncidence, TemporalHypergraph};

/// Block spans the whole space up to this dimension; the projection is
/// then exact and no power iteration runs.
const FULL_BLOCK_LIMIT: usize = 64;
const OVERSAMPLE: usize = 8;
const MAX_SWEEPS: usize = 500;
const SWEEP_TOLERANCE: f64 = 1e-13;

/// Top-k singular values of the incidence matrix, descending.
///
/// k is clipped to min(n, m). Fails on a hypergraph with no nodes or no
/// hyperedges.
pub fn singular_value_spectrum(
    h: &TemporalHypergraph,
    k: usize,
) -> Result<Vec<f64>, PatternError> {
    assert!(k >= 1, "asked for zero singular values");
    let mat = h.incidence_matrix();
    if mat.n_rows() == 0 || mat.n_cols() == 0 {
        return Err(PatternError::EmptyHypergraph);
    }
    let k = k.min(mat.n_rows()).min(mat.n_cols());
    Ok(top_singular_values(&mat, k))
}

/// Which side the Gram operator acts on.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    /// dim = n_rows, G = M Mᵀ.
    Node,
    /// dim = n_cols, G = Mᵀ M.
    Edge,
}

pub(crate) fn top_singular_values(mat: &SparseIncidence, k: usize) -> Vec<f64> {
    let (side, dim) = if mat.n_rows() <= mat.n_cols() {
        (Side::Node, mat.n_rows())
    } else {
        (Side::Edge, mat.n_cols())
    };
    let block = if dim <= FULL_BLOCK_LIMIT {
        dim
    } else {
        dim.min(k + OVERSAMPLE)
    };

    let mut rng = ChaCha12Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15);
    let mut basis: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    orthonormalize(&mut basis, &mut rng);

    let mut previous: Option<Vec<f64>> = None;
    let mut ritz_vectors: Vec<Vec<f64>> = Vec::new();
    for _sweep in 0..MAX_SWEEPS {
        let image: Vec<Vec<f64>> = basis.iter().map(|b| gram_apply(mat, side, b)).collect();
        let mut projected = vec![vec![0.0; block]; block];
        for p in 0..block {
            for q in p..block {
                let v = dot(&basis[p], &image[q]);
                projected[p][q] = v;
                projected[q][p] = v;
            }
        }
        let (eigenvalues, rotation) = symmetric_eigen(projected);
        ritz_vectors = (0..block)
            .map(|j| {
                let mut v = vec![0.0; dim];
                for (p, b) in basis.iter().enumerate() {
                    let w = rotation[p][j];
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi += w * bi;
                    }
                }
                v
            })
            .collect();

        if block == dim {
            break;
        }
        let sigma: Vec<f64> = eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
        let scale = sigma[0].max(1.0);
        let converged = previous.is_some_and(|prev| {
            sigma
                .iter()
                .take(k)
                .zip(&prev)
                .all(|(s, p)| (s - p).abs() <= SWEEP_TOLERANCE * scale)
        });
        if converged {
            break;
        }
        previous = Some(sigma);
        basis = image;
        orthonormalize(&mut basis, &mut rng);
    }

    let mut sigma: Vec<f64> = ritz_vectors
        .iter()
        .map(|v| match side {
            Side::Node => {
                let mut y = vec![0.0; mat.n_cols()];
                mat.apply_transpose(v, &mut y);
                norm(&y)
            }
            Side::Edge => {
                let mut y = vec![0.0; mat.n_rows()];
                mat.apply(v, &mut y);
                norm(&y)
            }
        })
        .collect();
    sigma.sort_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    sigma.truncate(k);
    sigma
}

/// y = G x for the chosen side's Gram operator.
fn gram_apply(mat: &SparseIncidence, side: Side, x: &[f64]) -> Vec<f64> {
    match side {
        Side::Node => {
            let mut mid = vec![0.0; mat.n_cols()];
            mat.apply_transpose(x, &mut mid);
            let mut out = vec![0.0; mat.n_rows()];
            mat.apply(&mid, &mut out);
            out
        }
        Side::Edge => {
            let mut mid = vec![0.0; mat.n_rows()];
            mat.apply(x, &mut mid);
            let mut out = vec![0.0; mat.n_cols()];
            mat.apply_transpose(&mid, &mut out);
            out
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Modified Gram-Schmidt with a second pass; columns that collapse to
/// zero (rank deficiency in the iterate) are replaced by fresh random
/// directions so the block keeps full rank.
fn orthonormalize(cols: &mut [Vec<f64>], rng: &mut ChaCha12Rng) {
    for j in 0..cols.len() {
        let (head, tail) = cols.split_at_mut(j);
        let col = &mut tail[0];
        for _ in 0..2 {
            for prev in head.iter() {
                let d = dot(prev, col);
                for (c, p) in col.iter_mut().zip(prev) {
                    *c -= d * p;
                }
            }
        }
        let mut len = norm(col);
        if len < 1e-150 {
            for c in col.iter_mut() {
                *c = rng.gen_range(-1.0..1.0);
            }
            for prev in head.iter() {
                let d = dot(prev, col);
                for (c, p) in col.iter_mut().zip(prev) {
                    *c -= d * p;
                }
            }
            len = norm(col);
        }
        for c in col.iter_mut() {
            *c /= len;
        }
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Returns eigenvalues descending and the matching eigenvector columns
/// (rotation[row][column]).
fn symmetric_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    for _sweep in 0..100 {
        let mut off = 0.0;
        let mut scale = 0.0;
        for p in 0..n {
            for q in 0..n {
                let x = a[p][q] * a[p][q];
                scale += x;
                if p != q {
                    off += x;
                }
            }
        }
        if off <= 1e-28 * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[p][i];
                    let aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for row in v.iter_mut() {
                    let vip = row[p];
                    let viq = row[q];
                    row[p] = c * vip - s * viq;
                    row[q] = s * vip + c * viq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).expect("finite eigenvalues"));
    let eigenvalues = order.iter().map(|&i| a[i][i]).collect();
    let vectors = v
        .iter()
        .map(|row| order.iter().map(|&j| row[j]).collect())
        .collect();
    (eigenvalues, vectors)
}
