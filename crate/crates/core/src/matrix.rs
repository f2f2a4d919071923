//! Small dense complex matrices.
//!
//! The order `n` is a runtime value so that scalar (`n = 1`) and matrix cases
//! share one code path. Storage is row-major.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::{Float, One, Zero};

use crate::{Error, Result};

/// Pivots smaller than this are treated as exact zeros.
pub const PIVOT_FLOOR: f64 = 1e-300;

const EXP_SCALE_TARGET: f64 = 0.5;
const EXP_TERM_CUTOFF: f64 = 1e-17;
const LOG_TERM_CUTOFF: f64 = 1e-15;
const LOG_MAX_TERMS: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    n: usize,
    data: Vec<Complex64>,
}

impl Mat {
    /// Builds an `n x n` matrix from row-major entries.
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("matrix order must be positive"));
        }
        if data.len() != n * n {
            return Err(Error::invalid(format!("expected {} entries for a {n}x{n} matrix, got {}", n * n, data.len())));
        }
        if !data.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(Mat { n, data })
    }

    /// Builds a matrix from real row-major rows. Panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), n, "rows must have length {n}");
                row.iter().map(|&x| Complex64::new(x, 0.0))
            })
            .collect();
        Mat { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        Mat { n, data: vec![Complex64::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::one();
        }
        m
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn scalar(value: Complex64) -> Self {
        Mat { n: 1, data: vec![value] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.n + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn scale(&self, s: Complex64) -> Mat {
        Mat { n: self.n, data: self.data.iter().map(|&c| c * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Mat {
        Mat { n: self.n, data: self.data.iter().map(|&c| c * s).collect() }
    }

    pub fn conj_transpose(&self) -> Mat {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    /// `sqrt(Trace(a^† a))`, computed as the root sum of squared moduli.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance `‖self − other‖_F`.
    pub fn dist(&self, other: &Mat) -> f64 {
        assert_eq!(self.n, other.n, "order mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    /// Determinant by partially pivoted elimination.
    pub fn det(&self) -> Complex64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = Complex64::one();
        for col in 0..n {
            let pivot_row =
                (col..n).max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm())).unwrap_or(col);
            let pivot = a[pivot_row * n + col];
            if pivot.is_zero() {
                return Complex64::zero();
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(pivot_row * n + j, col * n + j);
                }
                det = -det;
            }
            det *= pivot;
            for row in col + 1..n {
                let factor = a[row * n + col] / pivot;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[row * n + j] -= factor * v;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inv(&self) -> Result<Mat> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for col in 0..n {
            let pivot_row =
                (col..n).max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm())).unwrap_or(col);
            let pivot = a[pivot_row * n + col];
            if pivot.norm() < PIVOT_FLOOR {
                return Err(Error::Singular(format!("pivot {:e} in column {col}", pivot.norm())));
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(pivot_row * n + j, col * n + j);
                    inv.swap(pivot_row * n + j, col * n + j);
                }
            }
            let p_inv = pivot.inv();
            for j in 0..n {
                a[col * n + j] *= p_inv;
                inv[col * n + j] *= p_inv;
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = a[row * n + col];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let (av, iv) = (a[col * n + j], inv[col * n + j]);
                    a[row * n + j] -= factor * av;
                    inv[row * n + j] -= factor * iv;
                }
            }
        }
        Ok(Mat { n, data: inv })
    }

    /// Matrix exponential by scaling and squaring around a Taylor series.
    ///
    /// The argument is halved until its Frobenius norm is at most 1/2, the
    /// series is summed until a term drops below `1e-17`, and the result is
    /// squared back.
    pub fn exp(&self) -> Mat {
        let norm = self.frobenius_norm();
        let mut squarings = 0u32;
        let mut scaled_norm = norm;
        while scaled_norm > EXP_SCALE_TARGET {
            scaled_norm *= 0.5;
            squarings += 1;
        }
        let a = self.scale_real(Float::powi(0.5, squarings as i32));

        let mut sum = Self::identity(self.n);
        let mut term = Self::identity(self.n);
        for j in 1..64 {
            term = (&term * &a).scale_real(1.0 / j as f64);
            sum = &sum + &term;
            if term.frobenius_norm() < EXP_TERM_CUTOFF {
                break;
            }
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    /// Principal logarithm via `log(I + Δ) = Σ (−1)^{m+1} Δ^m / m`.
    ///
    /// Only defined on the series disk `‖self − I‖_F < 1`; anything else is a
    /// [`Error::Domain`].
    pub fn log(&self) -> Result<Mat> {
        let delta = self - &Self::identity(self.n);
        let radius = delta.frobenius_norm();
        if radius.is_nan() || radius >= 1.0 {
            return Err(Error::domain(format!("matrix logarithm needs ‖A − I‖_F < 1, got {radius}")));
        }
        let mut sum = Self::zeros(self.n);
        let mut power = delta.clone();
        for m in 1..=LOG_MAX_TERMS {
            let coeff = if m % 2 == 1 { 1.0 } else { -1.0 } / m as f64;
            let term = power.scale_real(coeff);
            sum = &sum + &term;
            if term.frobenius_norm() < LOG_TERM_CUTOFF {
                return Ok(sum);
            }
            power = &power * &delta;
        }
        Err(Error::domain(format!(
            "logarithm series did not settle within {LOG_MAX_TERMS} terms (‖A − I‖_F = {radius})"
        )))
    }
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn mul(self, rhs: &'a Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "order mismatch");
        let n = self.n;
        let mut out = vec![Complex64::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Mat { n, data: out }
    }
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn add(self, rhs: &'a Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "order mismatch");
        Mat { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;

    fn sub(self, rhs: &'a Mat) -> Mat {
        assert_eq!(self.n, rhs.n, "order mismatch");
        Mat { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Ordered product `m_k ··· m_2 m_1` of factors listed first-to-last.
pub fn ordered_product<'a, I>(n: usize, factors: I) -> Mat
where
    I: IntoIterator<Item = &'a Mat>,
{
    factors.into_iter().fold(Mat::identity(n), |acc, f| f * &acc)
}
