//! Adjacency spectrum via cyclic Jacobi rotations.

use super::Graph;
use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm at which Jacobi iteration stops.
pub const EIGEN_TOLERANCE: f64 = 1e-9;

/// Two eigenvalues closer than this count as one repeated eigenvalue.
pub const TIE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues within [`TIE_TOLERANCE`] of the largest one.
    pub multiplicity_of_top: usize,
}

impl Spectrum {
    pub fn of(g: &Graph) -> Result<Self> {
        let n = g.n();
        let eigenvalues =
            symmetric_eigenvalues(g.adjacency_matrix(), n, EIGEN_TOLERANCE, 100 * n * n)?;
        Ok(Self::from_eigenvalues(eigenvalues))
    }

    fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let top = eigenvalues[0];
        let multiplicity_of_top = eigenvalues
            .iter()
            .filter(|&&l| (top - l).abs() <= TIE_TOLERANCE)
            .count();
        Self {
            eigenvalues,
            multiplicity_of_top,
        }
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues[0]
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            s += 2.0 * a[p * n + q] * a[p * n + q];
        }
    }
    s.sqrt()
}

/// Eigenvalues (unsorted) of the dense symmetric row-major `n × n` matrix
/// `a`. Sweeps rows cyclically until the off-diagonal norm drops to `tol`;
/// fails after `max_rotations` plane rotations.
pub fn symmetric_eigenvalues(
    mut a: Vec<f64>,
    n: usize,
    tol: f64,
    max_rotations: usize,
) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let mut rotations = 0;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                if rotations >= max_rotations {
                    return Err(Error::ConvergenceFailure {
                        rotations,
                        off_norm: off_diagonal_norm(&a, n),
                    });
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = c * arp - s * arq;
                    let new_rq = s * arp + c * arq;
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                rotations += 1;
            }
        }
    }
    Ok((0..n).map(|i| a[i * n + i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use std::f64::consts::PI;

    /// Circulant eigenvalues: `Σ_d 2cos(2πjd/n)` over the ± offset pairs,
    /// plus `cos(πj)` for the antipodal offset.
    fn circulant_oracle(n: usize, k: usize) -> Vec<f64> {
        let mut ev: Vec<f64> = (0..n)
            .map(|j| {
                let mut l: f64 = (1..=k / 2)
                    .map(|d| 2.0 * (2.0 * PI * (j * d) as f64 / n as f64).cos())
                    .sum();
                if k % 2 == 1 {
                    l += (PI * j as f64).cos();
                }
                l
            })
            .collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    fn assert_close(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() <= tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn four_cycle() {
        let s = Graph::circulant(4, 2).unwrap().spectrum().unwrap().clone();
        assert_close(&s.eigenvalues, &[2.0, 0.0, 0.0, -2.0], 1e-9);
        assert_eq!(s.multiplicity_of_top, 1);
    }

    #[test]
    fn complete_graph_k4() {
        let g = Graph::circulant(4, 3).unwrap();
        assert_close(
            &g.spectrum().unwrap().eigenvalues,
            &[3.0, -1.0, -1.0, -1.0],
            1e-9,
        );
    }

    #[test]
    fn matches_circulant_formula() {
        for n in 3..=30 {
            for k in 2..n {
                let Ok(g) = Graph::circulant(n, k) else {
                    continue;
                };
                let s = g.spectrum().unwrap();
                assert_close(&s.eigenvalues, &circulant_oracle(n, k), 1e-8);
            }
        }
    }

    #[test]
    fn twenty_vertex_top_eigenvalue_simple() {
        let g = Graph::circulant(20, 10).unwrap();
        let s = g.spectrum().unwrap();
        assert!((s.largest() - 10.0).abs() <= 1e-7);
        assert_eq!(s.multiplicity_of_top, 1);
    }

    #[test]
    fn petersen_spectrum() {
        let mut want = vec![3.0];
        want.extend([1.0; 5]);
        want.extend([-2.0; 4]);
        assert_close(
            &named::petersen().spectrum().unwrap().eigenvalues,
            &want,
            1e-9,
        );
    }

    #[test]
    fn disconnected_top_multiplicity() {
        let s = named::two_triangles().spectrum().unwrap().clone();
        assert_eq!(s.multiplicity_of_top, 2);
        assert!((s.largest() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn spectrum_invariants() {
        let mut corpus = vec![
            named::petersen(),
            named::cube(),
            named::prism(),
            named::two_triangles(),
        ];
        for (n, k) in [(10, 4), (12, 5), (9, 4), (16, 3)] {
            let g = Graph::circulant(n, k).unwrap();
            corpus.push(g.augment_degree().unwrap());
            corpus.push(g);
        }
        for g in &corpus {
            let s = g.spectrum().unwrap();
            let k = g.k() as f64;
            assert!((s.largest() - k).abs() <= 1e-7);
            assert!(s.eigenvalues.iter().all(|l| l.abs() <= k + 1e-7));
            assert_eq!(s.multiplicity_of_top == 1, g.is_connected());
            let trace: f64 = s.eigenvalues.iter().sum();
            assert!(trace.abs() < 1e-8);
        }
    }

    #[test]
    fn rotation_cap_reports_failure() {
        let g = Graph::circulant(12, 4).unwrap();
        let err = symmetric_eigenvalues(g.adjacency_matrix(), 12, 1e-9, 3).unwrap_err();
        assert!(matches!(
            err,
            Error::ConvergenceFailure { rotations: 3, .. }
        ));
    }
}
