//! Uniform boundary grids, trigonometric spectra, and the Poisson/Schwarz
//! extensions into the disk.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::series::{check_interior, AnalyticDiskFunction};

pub(crate) fn forward_dft(mut buf: Vec<Complex64>) -> Vec<Complex64> {
    let fft = FftPlanner::new().plan_fft_forward(buf.len());
    fft.process(&mut buf);
    buf
}

/// Unnormalized inverse transform: `t_j = sum_k c_k e^{2 pi i jk/n}`.
pub(crate) fn inverse_dft(mut buf: Vec<Complex64>) -> Vec<Complex64> {
    let fft = FftPlanner::new().plan_fft_inverse(buf.len());
    fft.process(&mut buf);
    buf
}

/// `n` equispaced angles `2 pi j / n` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleGrid {
    n: usize,
}

impl CircleGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.n as f64
    }

    pub fn theta(&self, j: usize) -> f64 {
        TAU * j as f64 / self.n as f64
    }

    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.theta(j))
    }

    /// Default truncation degree of extensions built on this grid.
    pub fn default_degree(&self) -> usize {
        self.n / 2 - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    Real,
    Complex,
}

/// Samples of a boundary function on a [`CircleGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryTrace {
    grid: CircleGrid,
    values: Vec<Complex64>,
    kind: TraceKind,
}

impl BoundaryTrace {
    pub fn from_real(grid: CircleGrid, values: Vec<f64>) -> Result<Self> {
        Self::check_len(grid, values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("real trace"));
        }
        Ok(Self {
            grid,
            values: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            kind: TraceKind::Real,
        })
    }

    pub fn from_complex(grid: CircleGrid, values: Vec<Complex64>) -> Result<Self> {
        Self::check_len(grid, values.len())?;
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite("complex trace"));
        }
        Ok(Self {
            grid,
            values,
            kind: TraceKind::Complex,
        })
    }

    pub fn sample_real(grid: CircleGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_real(grid, grid.angles().map(f).collect())
    }

    pub fn sample_complex(grid: CircleGrid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::from_complex(grid, grid.angles().map(f).collect())
    }

    fn check_len(grid: CircleGrid, len: usize) -> Result<()> {
        if len != grid.n() {
            return Err(Error::LengthMismatch {
                expected: grid.n(),
                actual: len,
            });
        }
        Ok(())
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn kind(&self) -> TraceKind {
        self.kind
    }

    pub fn is_real(&self) -> bool {
        self.kind == TraceKind::Real
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    pub(crate) fn require_real(&self, what: &'static str) -> Result<()> {
        if self.is_real() {
            Ok(())
        } else {
            Err(Error::NotReal(what))
        }
    }

    pub(crate) fn require_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(self.grid.n(), other.grid.n()));
        }
        Ok(())
    }
}

/// Trigonometric coefficients `c[k]`, `k` in `[-n/2, n/2)`, stored in FFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoeffs {
    c: Vec<Complex64>,
}

impl FourierCoeffs {
    pub fn zeros(n: usize) -> Self {
        Self {
            c: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Coefficients given in FFT order (`0, 1, .., n/2 - 1, -n/2, .., -1`).
    pub fn from_fft_order(c: Vec<Complex64>) -> Result<Self> {
        CircleGrid::new(c.len())?;
        Ok(Self { c })
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    fn index(&self, k: i64) -> usize {
        let n = self.c.len() as i64;
        assert!(
            -n / 2 <= k && k < n / 2,
            "frequency {k} outside [-{}, {})",
            n / 2,
            n / 2
        );
        k.rem_euclid(n) as usize
    }

    pub fn get(&self, k: i64) -> Complex64 {
        self.c[self.index(k)]
    }

    pub fn set(&mut self, k: i64, v: Complex64) {
        let i = self.index(k);
        self.c[i] = v;
    }

    /// Signed frequency of FFT slot `i`.
    pub fn frequency(&self, i: usize) -> i64 {
        let n = self.c.len();
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    pub fn as_fft_order(&self) -> &[Complex64] {
        &self.c
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.c.iter().enumerate().map(|(i, &v)| (self.frequency(i), v))
    }

    /// `sum_k |c[k]|^2`.
    pub fn energy(&self) -> f64 {
        self.c.iter().map(|v| v.norm_sqr()).sum()
    }

    /// Largest deviation from `c[-k] = conj(c[k])` over representable `k`;
    /// the Nyquist slot must be real.
    pub fn hermitian_defect(&self) -> f64 {
        let half = (self.n() / 2) as i64;
        let mut worst = self.get(-half).im.abs();
        for k in 0..half {
            worst = worst.max((self.get(-k) - self.get(k).conj()).norm());
        }
        worst
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            c: self.c.iter().map(|&v| v * s).collect(),
        }
    }
}

/// `c[k] = (1/n) sum_j t_j exp(-i k theta_j)`.
pub fn trace_to_spectrum(t: &BoundaryTrace) -> FourierCoeffs {
    let n = t.len() as f64;
    let c = forward_dft(t.values.clone()).into_iter().map(|v| v / n).collect();
    FourierCoeffs { c }
}

/// `t_j = sum_k c[k] exp(i k theta_j)`, returned as a complex trace.
pub fn spectrum_to_trace(c: &FourierCoeffs) -> BoundaryTrace {
    let grid = CircleGrid { n: c.n() };
    BoundaryTrace {
        grid,
        values: inverse_dft(c.c.clone()),
        kind: TraceKind::Complex,
    }
}

/// Inverse transform of a Hermitian spectrum, keeping real parts only.
pub fn spectrum_to_real_trace(c: &FourierCoeffs) -> BoundaryTrace {
    let mut t = spectrum_to_trace(c);
    for v in &mut t.values {
        v.im = 0.0;
    }
    t.kind = TraceKind::Real;
    t
}

/// Schwarz integral of real boundary data: `a_0 = c[0]`, `a_k = 2 c[k]`
/// for `1 <= k <= n/2 - 1`. The real part is the Poisson extension and the
/// imaginary part vanishes at the origin.
pub fn schwarz_extend(alpha: &BoundaryTrace) -> Result<AnalyticDiskFunction> {
    alpha.require_real("schwarz_extend input")?;
    let spec = trace_to_spectrum(alpha);
    schwarz_from_spectrum(&spec)
}

pub(crate) fn schwarz_from_spectrum(spec: &FourierCoeffs) -> Result<AnalyticDiskFunction> {
    let m = spec.n() / 2 - 1;
    let mut a = Vec::with_capacity(m + 1);
    a.push(Complex64::new(spec.get(0).re, 0.0));
    for k in 1..=m as i64 {
        a.push(spec.get(k) * 2.0);
    }
    AnalyticDiskFunction::new(a)
}

/// Trapezoidal quadrature of the Poisson integral of `phi` at `z`.
///
/// This is the direct-kernel route; [`schwarz_extend`] is the spectral one.
pub fn poisson_value(phi: &BoundaryTrace, z: Complex64) -> Result<f64> {
    phi.require_real("poisson_value input")?;
    check_interior(z)?;
    let (r, theta) = z.to_polar();
    let one_minus_r2 = 1.0 - r * r;
    let grid = phi.grid();
    let sum: f64 = phi
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let kernel = one_minus_r2 / (1.0 - 2.0 * r * (theta - grid.theta(j)).cos() + r * r);
            kernel * v.re
        })
        .sum();
    Ok(sum / grid.n() as f64)
}

/// Harmonic-conjugate multiplier `-i sign(k)`, with the mean and the
/// Nyquist slot sent to zero so that real data stay real.
pub fn conjugate_spectrum(u: &FourierCoeffs) -> FourierCoeffs {
    let n = u.n();
    let mut out = FourierCoeffs::zeros(n);
    let minus_i = Complex64::new(0.0, -1.0);
    for (i, &v) in u.c.iter().enumerate() {
        let k = u.frequency(i);
        if k == 0 || k == -(n as i64) / 2 {
            continue;
        }
        out.c[i] = minus_i * (k.signum() as f64) * v;
    }
    out
}

/// Boundary trace of the conjugate function of real data (mean dropped).
pub fn conjugate_trace(u: &BoundaryTrace) -> Result<BoundaryTrace> {
    u.require_real("conjugate_trace input")?;
    Ok(spectrum_to_real_trace(&conjugate_spectrum(&trace_to_spectrum(u))))
}

/// `d/dtheta` of `sum_k a_k r^k e^{ik theta}`: `a_k -> i k a_k`.
pub fn angular_derivative(g: &AnalyticDiskFunction) -> AnalyticDiskFunction {
    let coeffs = g
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &a)| Complex64::new(0.0, k as f64) * a)
        .collect();
    AnalyticDiskFunction::new(coeffs).expect("finite coefficients stay finite")
}

/// Evaluate an analytic function at an interior point.
pub fn evaluate(f: &AnalyticDiskFunction, z: Complex64) -> Result<Complex64> {
    f.evaluate(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// O(n^2) reference DFT.
    fn naive_spectrum(t: &[Complex64]) -> Vec<Complex64> {
        let n = t.len();
        (0..n)
            .map(|i| {
                let k = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
                t.iter()
                    .enumerate()
                    .map(|(j, &v)| v * Complex64::from_polar(1.0, -k * TAU * j as f64 / n as f64))
                    .sum::<Complex64>()
                    / n as f64
            })
            .collect()
    }

    fn naive_synthesis(c: &[Complex64]) -> Vec<Complex64> {
        let n = c.len();
        (0..n)
            .map(|j| {
                c.iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        let k = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
                        v * Complex64::from_polar(1.0, k * TAU * j as f64 / n as f64)
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn grid_validation() {
        assert!(CircleGrid::new(8).is_ok());
        assert_eq!(CircleGrid::new(4), Err(Error::InvalidGrid(4)));
        assert_eq!(CircleGrid::new(24), Err(Error::InvalidGrid(24)));
        let g = CircleGrid::new(16).unwrap();
        assert_eq!(g.theta(4), TAU / 4.0);
        assert_eq!(g.default_degree(), 7);
        assert!(BoundaryTrace::from_real(g, vec![0.0; 15]).is_err());
        assert!(BoundaryTrace::from_real(g, vec![f64::NAN; 16]).is_err());
    }

    #[test]
    fn spectrum_of_constant_and_cosine() {
        let g = CircleGrid::new(32).unwrap();
        let one = BoundaryTrace::sample_real(g, |_| 1.0).unwrap();
        let s = trace_to_spectrum(&one);
        assert_abs_diff_eq!((s.get(0) - 1.0).norm(), 0.0, epsilon = 1e-15);
        for k in 1..16 {
            assert_abs_diff_eq!(s.get(k).norm() + s.get(-k).norm(), 0.0, epsilon = 1e-15);
        }

        let cos = BoundaryTrace::sample_real(g, f64::cos).unwrap();
        let s = trace_to_spectrum(&cos);
        for (k, v) in s.iter() {
            let expected = if k.abs() == 1 { 0.5 } else { 0.0 };
            assert_abs_diff_eq!((v - expected).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn spectrum_matches_direct_summation() {
        let g = CircleGrid::new(16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = BoundaryTrace::from_real(g, (0..16).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
        let s = trace_to_spectrum(&t);
        let oracle = naive_spectrum(t.values());
        for (a, b) in s.as_fft_order().iter().zip(&oracle) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-14);
        }
        assert!(s.hermitian_defect() < 1e-15);
    }

    #[test]
    fn synthesis_matches_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let raw: Vec<Complex64> = (0..16)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let spec = FourierCoeffs::from_fft_order(raw.clone()).unwrap();
        let t = spectrum_to_trace(&spec);
        for (a, b) in t.values().iter().zip(naive_synthesis(&raw)) {
            assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-13);
        }

        let mut only_dc = FourierCoeffs::zeros(16);
        only_dc.set(0, c(1.0, 0.0));
        assert!(spectrum_to_trace(&only_dc)
            .values()
            .iter()
            .all(|v| (v - 1.0).norm() < 1e-15));

        let mut cos = FourierCoeffs::zeros(16);
        cos.set(1, c(0.5, 0.0));
        cos.set(-1, c(0.5, 0.0));
        let g = CircleGrid::new(16).unwrap();
        for (j, v) in spectrum_to_trace(&cos).values().iter().enumerate() {
            assert_abs_diff_eq!((v - g.theta(j).cos()).norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn schwarz_examples() {
        let g = CircleGrid::new(64).unwrap();
        let one = schwarz_extend(&BoundaryTrace::sample_real(g, |_| 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!((one.coeff(0) - 1.0).norm(), 0.0, epsilon = 1e-15);
        assert!(one.coeffs()[1..].iter().all(|a| a.norm() < 1e-15));

        let z = schwarz_extend(&BoundaryTrace::sample_real(g, f64::cos).unwrap()).unwrap();
        assert_eq!(z.degree(), 31);
        for (k, a) in z.coeffs().iter().enumerate() {
            let expected = if k == 1 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!((a - expected).norm(), 0.0, epsilon = 1e-15);
        }

        let upper = BoundaryTrace::sample_real(g, |t| if t < std::f64::consts::PI { 1.0 } else { 0.0 }).unwrap();
        let h = schwarz_extend(&upper).unwrap();
        let at0 = h.evaluate(c(0.0, 0.0)).unwrap();
        assert_eq!(at0.re, 0.5);
        assert_eq!(at0.im, 0.0);

        let complex = BoundaryTrace::sample_complex(g, |t| c(t.cos(), 1.0)).unwrap();
        assert_eq!(schwarz_extend(&complex), Err(Error::NotReal("schwarz_extend input")));
    }

    #[test]
    fn poisson_examples() {
        let g = CircleGrid::new(64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let phi = BoundaryTrace::from_real(g, (0..64).map(|_| rng.random_range(-2.0..2.0)).collect()).unwrap();
        let mean = phi.mean().re;
        assert_abs_diff_eq!(poisson_value(&phi, c(0.0, 0.0)).unwrap(), mean, epsilon = 1e-14);

        let cos = BoundaryTrace::sample_real(g, f64::cos).unwrap();
        // r cos(theta) at theta = 0
        assert_abs_diff_eq!(poisson_value(&cos, c(0.5, 0.0)).unwrap(), 0.5, epsilon = 1e-14);

        let three = BoundaryTrace::sample_real(CircleGrid::new(256).unwrap(), |_| 3.0).unwrap();
        assert_abs_diff_eq!(poisson_value(&three, c(-0.2, 0.7)).unwrap(), 3.0, epsilon = 1e-13);

        assert!(matches!(
            poisson_value(&three, c(1.0, 0.0)),
            Err(Error::OutsideDisk { .. })
        ));
    }

    #[test]
    fn poisson_quadrature_agrees_with_spectral_route() {
        let g = CircleGrid::new(256).unwrap();
        let phi = BoundaryTrace::sample_real(g, |t| (t.sin() + 0.3 * (3.0 * t).cos()).exp()).unwrap();
        let ext = schwarz_extend(&phi).unwrap();
        for &z in &[c(0.1, 0.2), c(-0.5, 0.3), c(0.0, -0.8), c(0.6, 0.6)] {
            let a = poisson_value(&phi, z).unwrap();
            let b = ext.evaluate(z).unwrap().re;
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
    }

    #[test]
    fn conjugate_examples() {
        let g = CircleGrid::new(32).unwrap();
        let cos = trace_to_spectrum(&BoundaryTrace::sample_real(g, f64::cos).unwrap());
        let sin = trace_to_spectrum(&BoundaryTrace::sample_real(g, f64::sin).unwrap());
        let neg_cos = trace_to_spectrum(&BoundaryTrace::sample_real(g, |t| -t.cos()).unwrap());
        let v = conjugate_spectrum(&cos);
        for k in -16..16 {
            assert_abs_diff_eq!((v.get(k) - sin.get(k)).norm(), 0.0, epsilon = 1e-15);
        }
        let w = conjugate_spectrum(&sin);
        for k in -16..16 {
            assert_abs_diff_eq!((w.get(k) - neg_cos.get(k)).norm(), 0.0, epsilon = 1e-15);
        }
        let k = conjugate_spectrum(&trace_to_spectrum(&BoundaryTrace::sample_real(g, |_| 4.0).unwrap()));
        assert_eq!(k.energy(), 0.0);
    }

    #[test]
    fn angular_derivative_examples() {
        let z = AnalyticDiskFunction::identity();
        let dz = angular_derivative(&z);
        assert_eq!(dz.coeff(1), c(0.0, 1.0));
        assert_eq!(
            angular_derivative(&AnalyticDiskFunction::constant(c(3.0, 1.0))).coeff(0),
            c(0.0, 0.0)
        );

        // z^2 against a central finite difference in theta at r = 0.7
        let z2 = AnalyticDiskFunction::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let d = angular_derivative(&z2);
        assert_eq!(d.coeff(2), c(0.0, 2.0));
        let r = 0.7;
        let h = 1e-5;
        for &theta in &[0.0, 0.4, 2.0, 5.5] {
            let fd = (z2.evaluate(Complex64::from_polar(r, theta + h)).unwrap()
                - z2.evaluate(Complex64::from_polar(r, theta - h)).unwrap())
                / (2.0 * h);
            let exact = d.evaluate(Complex64::from_polar(r, theta)).unwrap();
            assert_abs_diff_eq!((fd - exact).norm(), 0.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn schwarz_boundary_convergence_for_trig_polynomials() {
        let g = CircleGrid::new(64).unwrap();
        // degree 16 = n/4
        let alpha =
            BoundaryTrace::sample_real(g, |t| t.cos() - 0.5 * (7.0 * t).sin() + 0.25 * (16.0 * t).cos()).unwrap();
        let ext = schwarz_extend(&alpha).unwrap();
        // |1 - r^k| <= k (1 - r), so the error is at most (1 - r) sum k |a_k|
        let slope = 1.0 + 0.5 * 7.0 + 0.25 * 16.0;
        let mut last = f64::INFINITY;
        let mut r = 0.0;
        for radius in [0.9, 0.95, 0.99, 0.999, 1.0 - 2f64.powi(-20)] {
            r = radius;
            let vals = ext.circle_values(r, 64).unwrap();
            let err = vals
                .iter()
                .zip(alpha.values())
                .map(|(v, a)| (v.re - a.re).abs())
                .fold(0.0, f64::max);
            assert!(err <= last, "not monotone at r = {r}");
            assert!(err <= slope * (1.0 - r) * (1.0 + 1e-9));
            last = err;
        }
        assert!(last <= slope * (1.0 - r), "final error {last}");
    }

    fn real_trace(n: usize) -> impl Strategy<Value = BoundaryTrace> {
        prop::collection::vec(-5.0f64..5.0, n)
            .prop_map(move |v| BoundaryTrace::from_real(CircleGrid::new(n).unwrap(), v).unwrap())
    }

    /// Hermitian spectrum with an empty Nyquist slot.
    fn real_spectrum(n: usize) -> impl Strategy<Value = FourierCoeffs> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n / 2).prop_map(move |pairs| {
            let mut s = FourierCoeffs::zeros(n);
            s.set(0, c(pairs[0].0, 0.0));
            for (k, &(re, im)) in pairs.iter().enumerate().skip(1) {
                let v = c(re, im);
                s.set(k as i64, v);
                s.set(-(k as i64), v.conj());
            }
            s
        })
    }

    proptest! {
        #[test]
        fn round_trip_and_parseval(t in real_trace(64)) {
            let s = trace_to_spectrum(&t);
            let back = spectrum_to_trace(&s);
            let scale = t.values().iter().map(|v| v.norm()).fold(1.0, f64::max);
            for (a, b) in back.values().iter().zip(t.values()) {
                prop_assert!((a - b).norm() <= 1e-12 * scale);
            }
            let lhs: f64 = t.values().iter().map(|v| v.norm_sqr()).sum::<f64>() / 64.0;
            prop_assert!((lhs - s.energy()).abs() <= 1e-10 * lhs.max(1e-300));
            prop_assert!(s.hermitian_defect() <= 1e-14 * scale);
        }

        #[test]
        fn conjugation_is_an_isometry_on_mean_free_part(s in real_spectrum(64)) {
            let v = conjugate_spectrum(&s);
            let mean_free = s.energy() - s.get(0).norm_sqr();
            prop_assert!((v.energy().sqrt() - mean_free.sqrt()).abs() <= 1e-12);
            prop_assert!(v.hermitian_defect() == 0.0);
            let vv = conjugate_spectrum(&v);
            for k in 1..32i64 {
                prop_assert_eq!(vv.get(k), -s.get(k));
                prop_assert_eq!(vv.get(-k), -s.get(-k));
            }
            prop_assert_eq!(vv.get(0), c(0.0, 0.0));
        }

        #[test]
        fn schwarz_imaginary_part_vanishes_at_origin(t in real_trace(32)) {
            let g = schwarz_extend(&t).unwrap();
            prop_assert_eq!(g.evaluate(c(0.0, 0.0)).unwrap().im, 0.0);
        }
    }
}
