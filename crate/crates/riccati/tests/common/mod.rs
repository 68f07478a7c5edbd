//! Shared oracles for the integration suites. Everything here is
//! implemented on plain `f64` row-major buffers, independent of the crate's
//! own SVD/eigen machinery, so the checks are genuinely two-route.

#![allow(dead_code)]

/// Minimal dense real matrix: row-major, no frills.
#[derive(Clone, Debug, PartialEq)]
pub struct RMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl RMat {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        RMat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMat::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn t(&self) -> RMat {
        let mut out = RMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn mul(&self, rhs: &RMat) -> RMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = RMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &RMat) -> RMat {
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        RMat::new(self.rows, self.cols, data)
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn dist(&self, rhs: &RMat) -> f64 {
        self.sub(rhs).norm()
    }
}

/// Residual vector of the polynomial system `X W W^T W X - W^T = 0` for a
/// real `W`, flattened row-major over the entries of `X`.
pub fn equation_residual(w: &RMat, x_entries: &[f64]) -> Vec<f64> {
    let (m, n) = (w.rows, w.cols);
    let x = RMat::new(n, m, x_entries.to_vec());
    let www = w.mul(&w.t()).mul(w);
    let lhs = x.mul(&www).mul(&x);
    lhs.sub(&w.t()).data
}

/// Solves the square linear system `(J^T J + ridge I) d = -J^T f` by
/// Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn damped_normal_step(jac: &[Vec<f64>], f: &[f64], ridge: f64) -> Vec<f64> {
    let k = jac[0].len();
    let mut a = vec![vec![0.0; k + 1]; k];
    for p in 0..k {
        for q in 0..k {
            let s: f64 = jac.iter().map(|row| row[p] * row[q]).sum();
            a[p][q] = s + if p == q { ridge } else { 0.0 };
        }
        let mut rhs = 0.0;
        for (row, fi) in jac.iter().zip(f) {
            rhs -= row[p] * fi;
        }
        a[p][k] = rhs;
    }
    // Elimination.
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        let diag = a[col][col];
        if diag.abs() < 1e-300 {
            continue;
        }
        for row in 0..k {
            if row == col {
                continue;
            }
            let factor = a[row][col] / diag;
            if factor == 0.0 {
                continue;
            }
            for q in col..=k {
                a[row][q] -= factor * a[col][q];
            }
        }
    }
    (0..k)
        .map(|p| {
            if a[p][p].abs() < 1e-300 {
                0.0
            } else {
                a[p][k] / a[p][p]
            }
        })
        .collect()
}

/// Gauss-Newton iteration from one starting point; returns the refined
/// entries when the residual drops to `f_tol`.
pub fn newton_from(w: &RMat, start: &[f64], f_tol: f64) -> Option<Vec<f64>> {
    let k = start.len();
    let mut x = start.to_vec();
    for _ in 0..80 {
        let f = equation_residual(w, &x);
        let fnorm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
        if fnorm <= f_tol {
            return Some(x);
        }
        // Forward-difference Jacobian, rows indexed by residual entries.
        let h = 1e-7;
        let mut jac = vec![vec![0.0; k]; f.len()];
        for p in 0..k {
            let mut xp = x.clone();
            xp[p] += h;
            let fp = equation_residual(w, &xp);
            for (row, (&fpv, &fv)) in jac.iter_mut().zip(fp.iter().zip(&f)) {
                row[p] = (fpv - fv) / h;
            }
        }
        let step = damped_normal_step(&jac, &f, 1e-12);
        let step_norm = step.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !step_norm.is_finite() || step_norm > 1e3 {
            return None;
        }
        for (xi, si) in x.iter_mut().zip(&step) {
            *xi += si;
        }
        if step_norm < 1e-14 {
            break;
        }
    }
    let f = equation_residual(w, &x);
    let fnorm = f.iter().map(|v| v * v).sum::<f64>().sqrt();
    (fnorm <= f_tol).then_some(x)
}

/// Multi-start brute-force root search over the real entries of `X`.
/// `extra_starts` lets the caller seed the search with structured points.
pub fn root_search(
    w: &RMat,
    random_starts: usize,
    seed: u64,
    extra_starts: &[Vec<f64>],
    f_tol: f64,
    dedup_tol: f64,
) -> Vec<Vec<f64>> {
    let k = w.rows * w.cols;
    let mut starts: Vec<Vec<f64>> = Vec::new();

    // Coarse grid over {-1, 0, 1}^k.
    let grid_points = 3usize.pow(k as u32);
    if grid_points <= 1_000 {
        for idx in 0..grid_points {
            let mut point = Vec::with_capacity(k);
            let mut rest = idx;
            for _ in 0..k {
                point.push((rest % 3) as f64 - 1.0);
                rest /= 3;
            }
            starts.push(point);
        }
    }
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z = z ^ (z >> 31);
        (z >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    };
    for _ in 0..random_starts {
        starts.push((0..k).map(|_| 4.0 * next() - 2.0).collect());
    }
    starts.extend_from_slice(extra_starts);

    let mut roots: Vec<Vec<f64>> = Vec::new();
    for start in &starts {
        let Some(root) = newton_from(w, start, f_tol) else {
            continue;
        };
        let duplicate = roots.iter().any(|r| {
            r.iter()
                .zip(&root)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
                < dedup_tol
        });
        if !duplicate {
            roots.push(root);
        }
    }
    roots
}

/// Bridges to the crate's matrix type (real part only).
pub fn to_rmat(m: &riccati::Matrix) -> RMat {
    let mut out = RMat::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            out.set(i, j, m.get(i, j).re);
        }
    }
    out
}

pub fn to_matrix(m: &RMat) -> riccati::Matrix {
    riccati::Matrix::from_real(m.rows, m.cols, &m.data).unwrap()
}
