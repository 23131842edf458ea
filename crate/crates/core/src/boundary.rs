//! Boundary data: unimodular coefficients and their principal argument,
//! the principal-value conjugate integral, the periodic primitive used by
//! the Gehring construction, and piecewise/expression data specs.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{spectrum_to_real_trace, trace_to_spectrum, BoundaryTrace, CircleGrid, FourierCoeffs};

pub const UNIMODULAR_TOL: f64 = 1e-9;

/// A complex trace with `|value_j| = 1` up to `1e-9`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnimodularTrace {
    inner: BoundaryTrace,
}

impl UnimodularTrace {
    pub fn new(inner: BoundaryTrace) -> Result<Self> {
        for (index, v) in inner.values().iter().enumerate() {
            let modulus = v.norm();
            if modulus == 0.0 {
                return Err(Error::ZeroMagnitude(index));
            }
            if (modulus - 1.0).abs() > UNIMODULAR_TOL {
                return Err(Error::NotUnimodular { index, modulus });
            }
        }
        Ok(Self { inner })
    }

    /// Divides every sample by its modulus; zero samples are rejected.
    pub fn normalized(trace: &BoundaryTrace) -> Result<Self> {
        let mut values = Vec::with_capacity(trace.len());
        for (index, v) in trace.values().iter().enumerate() {
            let m = v.norm();
            if m == 0.0 {
                return Err(Error::ZeroMagnitude(index));
            }
            values.push(v / m);
        }
        Self::new(BoundaryTrace::from_complex(trace.grid(), values)?)
    }

    pub fn constant(grid: CircleGrid, value: Complex64) -> Result<Self> {
        Self::new(BoundaryTrace::sample_complex(grid, |_| value)?)
    }

    pub fn trace(&self) -> &BoundaryTrace {
        &self.inner
    }

    pub fn grid(&self) -> CircleGrid {
        self.inner.grid()
    }

    pub fn values(&self) -> &[Complex64] {
        self.inner.values()
    }
}

/// Principal argument in `(-pi, pi]` of each renormalized sample.
pub fn principal_arg(lambda: &UnimodularTrace) -> BoundaryTrace {
    let alpha = lambda
        .values()
        .iter()
        .map(|v| {
            let u = v / v.norm();
            let a = u.im.atan2(u.re);
            // atan2(-0.0, -1) = -pi
            if a <= -PI {
                PI
            } else {
                a
            }
        })
        .collect();
    BoundaryTrace::from_real(lambda.grid(), alpha).expect("arguments are finite")
}

/// Periodic piecewise-linear interpolation of grid samples.
pub(crate) fn periodic_lerp(values: &[f64], spacing: f64, theta: f64) -> f64 {
    let n = values.len();
    let x = theta.rem_euclid(TAU) / spacing;
    let i = (x.floor() as usize).min(n - 1);
    let frac = x - i as f64;
    let a = values[i];
    let b = values[(i + 1) % n];
    a + (b - a) * frac
}

/// Truncated principal-value conjugate integral
///
/// `beta(theta) = (1/pi) int_eps^pi [alpha(theta - t) - alpha(theta + t)] / (2 tan(t/2)) dt`
///
/// by the trapezoidal rule on `n/2` panels of `[eps, pi]`, with `alpha`
/// linearly interpolated off the grid. `eps` must lie in `(2 pi / n, pi / 4)`.
pub fn hilbert_singular(alpha: &BoundaryTrace, eps: f64) -> Result<BoundaryTrace> {
    alpha.require_real("hilbert_singular input")?;
    let grid = alpha.grid();
    let h = grid.spacing();
    if !(eps > h && eps < PI / 4.0) {
        return Err(Error::param(
            "eps",
            format!("{eps} outside ({h:e}, pi/4) for n = {}", grid.n()),
        ));
    }
    let samples = alpha.real_values();
    let panels = grid.n() / 2;
    let dt = (PI - eps) / panels as f64;
    let nodes: Vec<(f64, f64)> = (0..=panels)
        .map(|i| {
            let t = eps + dt * i as f64;
            let w = if i == 0 || i == panels { 0.5 * dt } else { dt };
            (t, w / (2.0 * (0.5 * t).tan()))
        })
        .collect();

    let beta = grid
        .angles()
        .map(|theta| {
            let sum: f64 = nodes
                .iter()
                .map(|&(t, w)| w * (periodic_lerp(&samples, h, theta - t) - periodic_lerp(&samples, h, theta + t)))
                .sum();
            sum / PI
        })
        .collect();
    BoundaryTrace::from_real(grid, beta)
}

/// Continuous periodic primitive of `phi - mean(phi)`, normalized to
/// vanish at `theta = 0`. Returns the primitive and the mean.
///
/// The primitive is taken on the trigonometric interpolant of the samples
/// (coefficient division by `i k`), so its angular derivative reproduces
/// the mean-free data exactly in spectrum space.
pub fn lusin_primitive(phi: &BoundaryTrace) -> Result<(BoundaryTrace, f64)> {
    phi.require_real("lusin_primitive input")?;
    let spec = trace_to_spectrum(phi);
    let mean = spec.get(0).re;
    let n = spec.n();
    let mut prim = FourierCoeffs::zeros(n);
    for k in 1..(n / 2) as i64 {
        let div = Complex64::new(0.0, k as f64);
        prim.set(k, spec.get(k) / div);
        prim.set(-k, spec.get(-k) / -div);
    }
    let mut values = spectrum_to_real_trace(&prim).real_values();
    let offset = values[0];
    for v in &mut values {
        *v -= offset;
    }
    Ok((BoundaryTrace::from_real(phi.grid(), values)?, mean))
}

/// Closed-form boundary expression in one real variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Expr {
    Const {
        re: f64,
        #[serde(default)]
        im: f64,
    },
    Cos {
        #[serde(default = "one")]
        freq: f64,
        #[serde(default = "one")]
        amp: f64,
    },
    Sin {
        #[serde(default = "one")]
        freq: f64,
        #[serde(default = "one")]
        amp: f64,
    },
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    /// `exp(i * inner)`
    ExpI(Box<Expr>),
    Exp(Box<Expr>),
}

fn one() -> f64 {
    1.0
}

impl Expr {
    pub fn constant(re: f64, im: f64) -> Self {
        Expr::Const { re, im }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            Expr::Const { re, im } => Complex64::new(*re, *im),
            Expr::Cos { freq, amp } => Complex64::new(amp * (freq * x).cos(), 0.0),
            Expr::Sin { freq, amp } => Complex64::new(amp * (freq * x).sin(), 0.0),
            Expr::Sum(terms) => terms.iter().map(|t| t.eval(x)).sum(),
            Expr::Product(terms) => terms.iter().map(|t| t.eval(x)).product(),
            Expr::ExpI(inner) => (Complex64::i() * inner.eval(x)).exp(),
            Expr::Exp(inner) => inner.eval(x).exp(),
        }
    }
}

/// One half-open arc `[from, to)` carrying an expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcPiece {
    pub from: f64,
    pub to: f64,
    pub value: Expr,
}

/// Disjoint half-open arcs covering one period `[0, period)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseSpec {
    pieces: Vec<ArcPiece>,
    period: f64,
}

impl PiecewiseSpec {
    pub fn new(mut pieces: Vec<ArcPiece>, period: f64) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::param("piecewise", "no arcs"));
        }
        pieces.sort_by(|a, b| a.from.total_cmp(&b.from));
        let mut cursor = 0.0;
        for p in &pieces {
            if !(p.from.is_finite() && p.to.is_finite()) || p.to <= p.from {
                return Err(Error::param(
                    "piecewise",
                    format!("empty or invalid arc [{}, {})", p.from, p.to),
                ));
            }
            if (p.from - cursor).abs() > 1e-12 * period.max(1.0) {
                return Err(Error::param(
                    "piecewise",
                    format!("arcs must tile [0, {period}) without gaps or overlaps; gap at {cursor}"),
                ));
            }
            cursor = p.to;
        }
        if (cursor - period).abs() > 1e-12 * period.max(1.0) {
            return Err(Error::param(
                "piecewise",
                format!("arcs end at {cursor}, expected {period}"),
            ));
        }
        Ok(Self { pieces, period })
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Arc endpoints other than `0`, i.e. the potential jump locations.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.pieces.iter().map(|p| p.from).collect();
        pts.retain(|&x| x > 0.0);
        pts.insert(0, 0.0);
        pts.dedup();
        pts
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let x = x.rem_euclid(self.period);
        let piece = self
            .pieces
            .iter()
            .rev()
            .find(|p| p.from <= x)
            .unwrap_or(&self.pieces[0]);
        piece.value.eval(x)
    }
}

/// Boundary data either as a single expression or as a piecewise spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    Expr(Expr),
    Piecewise(Vec<ArcPiece>),
}

impl DataSpec {
    /// Resolves into an evaluator over one period.
    pub fn compile(&self, period: f64) -> Result<CompiledData> {
        Ok(match self {
            DataSpec::Expr(e) => CompiledData::Expr(e.clone()),
            DataSpec::Piecewise(p) => CompiledData::Piecewise(PiecewiseSpec::new(p.clone(), period)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CompiledData {
    Expr(Expr),
    Piecewise(PiecewiseSpec),
}

impl CompiledData {
    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            CompiledData::Expr(e) => e.eval(x),
            CompiledData::Piecewise(p) => p.eval(x),
        }
    }

    pub fn sample_real(&self, grid: CircleGrid) -> Result<BoundaryTrace> {
        BoundaryTrace::sample_real(grid, |t| self.eval(t).re)
    }

    pub fn sample_complex(&self, grid: CircleGrid) -> Result<BoundaryTrace> {
        BoundaryTrace::sample_complex(grid, |t| self.eval(t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::conjugate_trace;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn grid(n: usize) -> CircleGrid {
        CircleGrid::new(n).unwrap()
    }

    fn max_abs_diff(a: &BoundaryTrace, f: impl Fn(f64) -> f64) -> f64 {
        a.grid()
            .angles()
            .zip(a.values())
            .map(|(t, v)| (v.re - f(t)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn principal_arg_examples() {
        let g = grid(16);
        let i = UnimodularTrace::constant(g, Complex64::i()).unwrap();
        assert!(principal_arg(&i).values().iter().all(|v| v.re == PI / 2.0));

        let minus_one = UnimodularTrace::constant(g, Complex64::new(-1.0, 0.0)).unwrap();
        assert!(principal_arg(&minus_one).values().iter().all(|v| v.re == PI));
        let minus_one_neg_zero = UnimodularTrace::constant(g, Complex64::new(-1.0, -0.0)).unwrap();
        assert!(principal_arg(&minus_one_neg_zero).values().iter().all(|v| v.re == PI));

        let rot =
            UnimodularTrace::new(BoundaryTrace::sample_complex(g, |t| Complex64::from_polar(1.0, t)).unwrap()).unwrap();
        let alpha = principal_arg(&rot);
        for (t, a) in g.angles().zip(alpha.values()) {
            // wrap oracle
            let wrapped = if t > PI { t - TAU } else { t };
            assert_abs_diff_eq!(a.re, wrapped, epsilon = 1e-15);
            assert!(a.re > -PI && a.re <= PI);
        }
    }

    #[test]
    fn unimodular_validation() {
        let g = grid(8);
        let bad = BoundaryTrace::sample_complex(g, |_| Complex64::new(2.0, 0.0)).unwrap();
        assert!(matches!(
            UnimodularTrace::new(bad.clone()),
            Err(Error::NotUnimodular { index: 0, .. })
        ));
        assert!(UnimodularTrace::normalized(&bad).is_ok());
        let zero = BoundaryTrace::sample_complex(g, |t| Complex64::new(if t == 0.0 { 0.0 } else { 1.0 }, 0.0)).unwrap();
        assert_eq!(UnimodularTrace::normalized(&zero), Err(Error::ZeroMagnitude(0)));
    }

    #[test]
    fn hilbert_singular_constant_is_zero() {
        let g = grid(256);
        let beta = hilbert_singular(&BoundaryTrace::sample_real(g, |_| 2.5).unwrap(), 0.1).unwrap();
        assert!(beta.values().iter().all(|v| v.re.abs() < 1e-14));
    }

    #[test]
    fn hilbert_singular_conjugate_pairs() {
        let g = grid(8192);
        let cos = BoundaryTrace::sample_real(g, f64::cos).unwrap();
        let beta = hilbert_singular(&cos, 1e-3).unwrap();
        assert!(max_abs_diff(&beta, f64::sin) <= 1e-3);

        let sin = BoundaryTrace::sample_real(g, f64::sin).unwrap();
        let beta = hilbert_singular(&sin, 1e-3).unwrap();
        assert!(max_abs_diff(&beta, |t| -t.cos()) <= 1e-3);
    }

    #[test]
    fn hilbert_singular_rejects_bad_eps() {
        let g = grid(64);
        let a = BoundaryTrace::sample_real(g, f64::cos).unwrap();
        assert!(hilbert_singular(&a, 0.05).is_err()); // below 2 pi / 64
        assert!(hilbert_singular(&a, 1.0).is_err());
        assert!(hilbert_singular(&a, 0.2).is_ok());
    }

    #[test]
    fn hilbert_singular_converges_to_spectral_conjugate() {
        let g = grid(8192);
        let alpha = BoundaryTrace::sample_real(g, |t| (t.cos() + 0.5 * (2.0 * t).sin()).exp()).unwrap();
        let exact = conjugate_trace(&alpha).unwrap();
        let mut last = f64::INFINITY;
        for eps in [1e-1, 1e-2, 1e-3] {
            let beta = hilbert_singular(&alpha, eps).unwrap();
            let l2: f64 = beta
                .values()
                .iter()
                .zip(exact.values())
                .map(|(a, b)| (a.re - b.re).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(l2 < last, "eps {eps}: {l2} >= {last}");
            last = l2;
        }
    }

    #[test]
    fn lusin_examples() {
        let g = grid(64);
        let (p, mean) = lusin_primitive(&BoundaryTrace::sample_real(g, |_| 5.0).unwrap()).unwrap();
        assert_eq!(mean, 5.0);
        assert!(p.values().iter().all(|v| v.re.abs() < 1e-14));

        let g = grid(4096);
        let (p, mean) = lusin_primitive(&BoundaryTrace::sample_real(g, f64::cos).unwrap()).unwrap();
        assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-15);
        assert!(max_abs_diff(&p, f64::sin) <= 1e-6);
    }

    #[test]
    fn lusin_square_wave_gives_triangle() {
        let g = grid(4096);
        let h = g.spacing();
        let square = BoundaryTrace::sample_real(g, |t| if t < PI { 1.0 } else { -1.0 }).unwrap();
        let (p, mean) = lusin_primitive(&square).unwrap();
        assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-15);
        // exact piecewise integral of the square wave from 0
        let triangle = |t: f64| if t <= PI { t } else { TAU - t };
        let err = max_abs_diff(&p, triangle);
        assert!(err <= 2.0 * h, "triangle error {err} vs h {h}");
    }

    #[test]
    fn fatou_step_reproduces_poisson_extension() {
        use crate::spectral::{angular_derivative, schwarz_extend};
        let g = grid(4096);
        let phi = BoundaryTrace::sample_real(g, |t| 0.3 + t.sin() * (2.0 * t).cos() + (5.0 * t).cos()).unwrap();
        let (prim, mean) = lusin_primitive(&phi).unwrap();
        let u = angular_derivative(&schwarz_extend(&prim).unwrap());
        let direct = schwarz_extend(&phi).unwrap();
        for j in 0..32 {
            let z = Complex64::from_polar(0.9, TAU * j as f64 / 32.0);
            let a = u.evaluate(z).unwrap().re + mean;
            let b = direct.evaluate(z).unwrap().re;
            assert_abs_diff_eq!(a, b, epsilon = 1e-6);
        }
    }

    #[test]
    fn piecewise_spec_validation_and_eval() {
        let pieces = vec![
            ArcPiece {
                from: PI,
                to: TAU,
                value: Expr::constant(0.0, 1.0),
            },
            ArcPiece {
                from: 0.0,
                to: PI,
                value: Expr::constant(1.0, 0.0),
            },
        ];
        let spec = PiecewiseSpec::new(pieces.clone(), TAU).unwrap();
        assert_eq!(spec.eval(0.5), Complex64::new(1.0, 0.0));
        assert_eq!(spec.eval(PI), Complex64::new(0.0, 1.0));
        assert_eq!(spec.eval(TAU + 0.1), Complex64::new(1.0, 0.0));
        assert_eq!(spec.breakpoints(), vec![0.0, PI]);

        let gap = vec![ArcPiece {
            from: 0.0,
            to: 1.0,
            value: Expr::constant(1.0, 0.0),
        }];
        assert!(PiecewiseSpec::new(gap, TAU).is_err());
        let overlap = vec![
            ArcPiece {
                from: 0.0,
                to: 4.0,
                value: Expr::constant(1.0, 0.0),
            },
            ArcPiece {
                from: 3.0,
                to: TAU,
                value: Expr::constant(1.0, 0.0),
            },
        ];
        assert!(PiecewiseSpec::new(overlap, TAU).is_err());
    }

    #[test]
    fn data_spec_json() {
        let json = r#"{"expr": {"exp_i": {"cos": {}}}}"#;
        let spec: DataSpec = serde_json::from_str(json).unwrap();
        let data = spec.compile(TAU).unwrap();
        assert_abs_diff_eq!(
            (data.eval(0.3) - Complex64::new(0.0, 0.3f64.cos()).exp()).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert!(serde_json::from_str::<DataSpec>(r#"{"expr": {"cos": {"frq": 1}}}"#).is_err());
    }

    proptest! {
        #[test]
        fn arg_inverts_exp_i(vals in prop::collection::vec(-PI + 1e-12..=PI, 16)) {
            let g = grid(16);
            let lambda = UnimodularTrace::new(
                BoundaryTrace::from_complex(g, vals.iter().map(|&a| Complex64::from_polar(1.0, a)).collect()).unwrap()
            ).unwrap();
            let alpha = principal_arg(&lambda);
            for (a, b) in alpha.values().iter().zip(&vals) {
                prop_assert!((a.re - b).abs() <= 1e-14);
            }
        }

        #[test]
        fn primitive_is_periodic(vals in prop::collection::vec(-3.0f64..3.0, 64)) {
            let phi = BoundaryTrace::from_real(grid(64), vals).unwrap();
            let (p, _) = lusin_primitive(&phi).unwrap();
            prop_assert_eq!(p.values()[0].re, 0.0);
            // the full-period integral of the mean-free interpolant is zero,
            // so the primitive closes up: its own mean-free spectrum has no
            // secular part and re-deriving it returns the data.
            let spec = trace_to_spectrum(&p);
            let rederived: Vec<f64> = {
                let mut d = FourierCoeffs::zeros(64);
                for k in 1..32i64 {
                    d.set(k, spec.get(k) * Complex64::new(0.0, k as f64));
                    d.set(-k, spec.get(-k) * Complex64::new(0.0, -(k as f64)));
                }
                spectrum_to_real_trace(&d).real_values()
            };
            let data_spec = trace_to_spectrum(&phi);
            let mut mean_free = data_spec.clone();
            mean_free.set(0, Complex64::new(0.0, 0.0));
            mean_free.set(-32, Complex64::new(0.0, 0.0));
            let expected = spectrum_to_real_trace(&mean_free).real_values();
            for (a, b) in rederived.iter().zip(&expected) {
                prop_assert!((a - b).abs() <= 1e-11);
            }
        }
    }
}
