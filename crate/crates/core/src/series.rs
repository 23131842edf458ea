//! Truncated power series on the unit disk.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::inverse_dft;

/// Largest modulus at which interior evaluation is permitted, `1 - 2^-40`.
pub const EVAL_RADIUS_LIMIT: f64 = 1.0 - 1.0 / (1u64 << 40) as f64;

pub(crate) fn check_interior(z: Complex64) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > EVAL_RADIUS_LIMIT {
        return Err(Error::OutsideDisk { z });
    }
    Ok(())
}

/// Anything that can be evaluated at interior points of the unit disk.
pub trait HolomorphicFn {
    fn eval(&self, z: Complex64) -> Result<Complex64>;

    /// Values at `r * exp(2 pi i j / n)`, `j = 0..n`.
    fn eval_on_circle(&self, r: f64, n: usize) -> Result<Vec<Complex64>> {
        (0..n)
            .map(|j| {
                let theta = std::f64::consts::TAU * j as f64 / n as f64;
                self.eval(Complex64::from_polar(r, theta))
            })
            .collect()
    }
}

impl<F: HolomorphicFn + ?Sized> HolomorphicFn for &F {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        (**self).eval(z)
    }

    fn eval_on_circle(&self, r: f64, n: usize) -> Result<Vec<Complex64>> {
        (**self).eval_on_circle(r, n)
    }
}

/// `sum_k a_k z^k`, truncated at degree `m = coeffs.len() - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticDiskFunction {
    coeffs: Vec<Complex64>,
}

impl AnalyticDiskFunction {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::param("coeffs", "at least one coefficient required"));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite("power series coefficients"));
        }
        Ok(Self { coeffs })
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    /// The identity `z`.
    pub fn identity() -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Horner evaluation; `|z|` must not exceed [`EVAL_RADIUS_LIMIT`].
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        check_interior(z)?;
        Ok(self.horner(z))
    }

    /// Horner evaluation without the radius check, for closed boundary maps.
    pub(crate) fn horner(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self {
            coeffs: (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn add_constant(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// Cauchy product, kept to full degree `deg(self) + deg(other)`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    pub fn truncate(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(degree + 1);
        Self { coeffs }
    }

    /// `d/dz`.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &a)| a * k as f64)
                .collect(),
        }
    }

    /// `exp(self)` as a power series truncated at `degree`.
    ///
    /// Uses `E' = E * h'`, i.e. `k E_k = sum_{j=1..k} j h_j E_{k-j}`.
    pub fn exp(&self, degree: usize) -> Self {
        let h = &self.coeffs;
        let mut e = Vec::with_capacity(degree + 1);
        e.push(h[0].exp());
        for k in 1..=degree {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k.min(h.len() - 1) {
                acc += h[j] * e[k - j] * j as f64;
            }
            e.push(acc / k as f64);
        }
        Self { coeffs: e }
    }

    /// Values on the circle of radius `r` at `n` equispaced angles, via one
    /// inverse FFT. Coefficients above `n` fold onto their residue class,
    /// which is exact for equispaced evaluation.
    pub fn circle_values(&self, r: f64, n: usize) -> Result<Vec<Complex64>> {
        if !(0.0..=EVAL_RADIUS_LIMIT).contains(&r) {
            return Err(Error::OutsideDisk {
                z: Complex64::new(r, 0.0),
            });
        }
        Ok(self.circle_values_unchecked(r, n))
    }

    pub(crate) fn circle_values_unchecked(&self, r: f64, n: usize) -> Vec<Complex64> {
        let mut folded = vec![Complex64::new(0.0, 0.0); n];
        let mut rk = 1.0;
        for (k, &a) in self.coeffs.iter().enumerate() {
            folded[k % n] += a * rk;
            rk *= r;
        }
        inverse_dft(folded)
    }
}

impl HolomorphicFn for AnalyticDiskFunction {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.evaluate(z)
    }

    fn eval_on_circle(&self, r: f64, n: usize) -> Result<Vec<Complex64>> {
        self.circle_values(r, n)
    }
}
