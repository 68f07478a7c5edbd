//! Seeded 64-bit generator (splitmix finalizer) used by every randomized
//! experiment in this crate. Reruns with the same seed produce identical
//! matrices on every platform.

use num_complex::Complex64;

use crate::mat::Matrix;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller.
    pub fn next_normal(&mut self) -> f64 {
        let u1 = (1.0 - self.next_f64()).max(f64::MIN_POSITIVE);
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Fair sign, +1 or -1.
    pub fn next_sign(&mut self) -> i8 {
        if self.next_u64() & 1 == 0 {
            1
        } else {
            -1
        }
    }

    /// Real matrix with entries uniform on `[0, 1)`, matching the usual
    /// `rand(m, n)` of numerical environments.
    pub fn uniform_matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| Complex64::new(self.next_f64(), 0.0))
            .expect("desk-scale dims")
    }

    /// Complex matrix with independent standard-normal parts.
    pub fn complex_matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| {
            Complex64::new(self.next_normal(), self.next_normal())
        })
        .expect("desk-scale dims")
    }

    /// Real matrix with standard-normal entries.
    pub fn normal_matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| Complex64::new(self.next_normal(), 0.0))
            .expect("desk-scale dims")
    }

    /// `rand(m, k) * rand(k, n)`: a seeded rank-at-most-k product.
    pub fn low_rank_product(&mut self, rows: usize, inner: usize, cols: usize) -> Matrix {
        let left = self.uniform_matrix(rows, inner);
        let right = self.uniform_matrix(inner, cols);
        &left * &right
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_streams() {
        let mut a = SplitMix64::new(1234);
        let mut b = SplitMix64::new(1234);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let x = a.next_f64();
        assert!((0.0..1.0).contains(&x));
    }

    #[test]
    fn normals_have_sane_moments() {
        let mut rng = SplitMix64::new(99);
        let samples: Vec<f64> = (0..20_000).map(|_| rng.next_normal()).collect();
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
            / samples.len() as f64;
        assert!(mean.abs() < 0.05, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "variance {var}");
    }
}
