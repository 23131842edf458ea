//! Concrete conformal maps onto the disk.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Deserialize;

use super::{check_closed_disk, tabulate, BoundaryCorrespondence, ConformalMap, JordanBoundary, MapKind};
use crate::error::{Error, Result};
use crate::series::AnalyticDiskFunction;
use crate::spectral::{conjugate_trace, schwarz_extend, trace_to_spectrum, BoundaryTrace, CircleGrid, FourierCoeffs};

pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX: usize = 50;
pub const CONTINUATION_STEPS: usize = 16;
/// Slack on `|w| <= 1` when accepting an inverse image.
pub const CLOSURE_SLACK: f64 = 1e-9;

/// Solves `F(w) = z` by Newton from `w0`; `fd` returns `(F(w), F'(w))`.
fn newton(fd: &impl Fn(Complex64) -> (Complex64, Complex64), z: Complex64, w0: Complex64) -> Option<Complex64> {
    let mut w = w0;
    for _ in 0..NEWTON_MAX {
        let (f, d) = fd(w);
        let step = (f - z) / d;
        w -= step;
        if !(w.re.is_finite() && w.im.is_finite()) {
            return None;
        }
        if step.norm() <= NEWTON_TOL * w.norm().max(1.0) {
            return Some(w);
        }
    }
    None
}

/// Newton from `w0`, falling back to continuation along `t z`, `t: 0 -> 1`,
/// for maps with `F(0) = 0`.
fn invert(fd: impl Fn(Complex64) -> (Complex64, Complex64), z: Complex64, w0: Complex64) -> Result<Complex64> {
    let inside = |w: &Complex64| w.norm() <= 1.0 + CLOSURE_SLACK;
    if let Some(w) = newton(&fd, z, w0).filter(inside) {
        return Ok(w);
    }
    let mut w = Complex64::new(0.0, 0.0);
    for k in 1..=CONTINUATION_STEPS {
        let t = k as f64 / CONTINUATION_STEPS as f64;
        w = newton(&fd, z * t, w).ok_or(Error::NonConvergence {
            what: "inverse map continuation",
            iterations: NEWTON_MAX,
            residual: f64::NAN,
        })?;
    }
    if inside(&w) {
        Ok(w)
    } else {
        Err(Error::OutsideDomain { z })
    }
}

/// `w -> R w`, exact in both directions and along the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledDisk {
    radius: f64,
    boundary: JordanBoundary,
    corr: BoundaryCorrespondence,
}

impl ScaledDisk {
    pub fn new(radius: f64, table_size: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::param("radius", format!("{radius} is not positive")));
        }
        let (boundary, corr) = tabulate(table_size, |t| Complex64::from_polar(radius, t))?;
        Ok(Self { radius, boundary, corr })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl ConformalMap for ScaledDisk {
    fn name(&self) -> &'static str {
        "disk"
    }

    fn kind(&self) -> MapKind {
        MapKind::AnalyticClosedForm
    }

    fn to_disk(&self, z: Complex64) -> Result<Complex64> {
        let w = z / self.radius;
        if !(w.norm() <= 1.0 + CLOSURE_SLACK) {
            return Err(Error::OutsideDomain { z });
        }
        Ok(w)
    }

    fn from_disk(&self, w: Complex64) -> Result<Complex64> {
        check_closed_disk(w)?;
        Ok(w * self.radius)
    }

    fn boundary(&self) -> &JordanBoundary {
        &self.boundary
    }

    fn correspondence(&self) -> &BoundaryCorrespondence {
        &self.corr
    }

    fn total_length(&self) -> f64 {
        TAU * self.radius
    }

    fn arc_length_of_angle(&self, theta: f64) -> f64 {
        theta.rem_euclid(TAU) * self.radius
    }

    fn angle_of_arc_length(&self, s: f64) -> f64 {
        (s / self.radius).rem_euclid(TAU)
    }
}

/// `w -> w + c w^2`, univalent on the closed disk for `|c| < 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialMap {
    c: Complex64,
    boundary: JordanBoundary,
    corr: BoundaryCorrespondence,
}

impl PolynomialMap {
    pub fn new(c: Complex64, table_size: usize) -> Result<Self> {
        if !(c.norm() < 0.5) {
            return Err(Error::param("c", format!("|c| = {} must be below 1/2", c.norm())));
        }
        let (boundary, corr) = tabulate(table_size, |t| {
            let w = Complex64::from_polar(1.0, t);
            w + c * w * w
        })?;
        Ok(Self { c, boundary, corr })
    }

    pub fn c(&self) -> Complex64 {
        self.c
    }
}

impl ConformalMap for PolynomialMap {
    fn name(&self) -> &'static str {
        "polynomial"
    }

    fn kind(&self) -> MapKind {
        MapKind::Polynomial
    }

    fn to_disk(&self, z: Complex64) -> Result<Complex64> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::OutsideDomain { z });
        }
        let c = self.c;
        invert(|w| (w + c * w * w, 1.0 + 2.0 * c * w), z, z)
    }

    fn from_disk(&self, w: Complex64) -> Result<Complex64> {
        check_closed_disk(w)?;
        Ok(w + self.c * w * w)
    }

    fn boundary(&self) -> &JordanBoundary {
        &self.boundary
    }

    fn correspondence(&self) -> &BoundaryCorrespondence {
        &self.corr
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TheodorsenOptions {
    /// Stop once `max |tau_new - tau|` falls to this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Under-relaxation in `(0, 1]`; below one helps near corners.
    pub relaxation: f64,
    /// Boundary table size, a power of two at least the radius grid size.
    /// Defaults to the radius grid size.
    pub table_size: Option<usize>,
}

impl Default for TheodorsenOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 200,
            relaxation: 1.0,
            table_size: None,
        }
    }
}

/// Map of a domain star-like about `0`, `dD = {rho(tau) e^{i tau}}`, built
/// by Theodorsen's iteration `tau = theta + K[log rho(tau)]`.
///
/// `from_disk(w) = w exp(S(w))` with `S` the Schwarz integral of
/// `log rho(tau(theta))`, so `F(0) = 0` and `F'(0) > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TheodorsenMap {
    name: &'static str,
    log_rho: FourierCoeffs,
    tau: Vec<f64>,
    s: AnalyticDiskFunction,
    ds: AnalyticDiskFunction,
    iterations: usize,
    last_change: f64,
    epsilon: f64,
    boundary: JordanBoundary,
    corr: BoundaryCorrespondence,
}

/// `sum_k c_k e^{i k tau}` of a real trigonometric interpolant, the
/// Nyquist term read as a cosine.
fn interpolate_real(c: &FourierCoeffs, tau: f64) -> f64 {
    let n = c.n();
    let half = (n / 2) as i64;
    let e = Complex64::from_polar(1.0, tau);
    let mut p = e;
    let mut sum = c.get(0).re;
    for k in 1..half {
        sum += 2.0 * (c.get(k) * p).re;
        p *= e;
    }
    sum + c.get(-half).re * (half as f64 * tau).cos()
}

impl TheodorsenMap {
    pub fn new(rho: Vec<f64>, options: TheodorsenOptions) -> Result<Self> {
        Self::named("theodorsen", rho, options)
    }

    pub(crate) fn named(name: &'static str, rho: Vec<f64>, options: TheodorsenOptions) -> Result<Self> {
        let grid = CircleGrid::new(rho.len())?;
        if let Some((j, r)) = rho.iter().enumerate().find(|(_, r)| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::param("rho", format!("sample {j} = {r} is not positive")));
        }
        if !(options.relaxation > 0.0 && options.relaxation <= 1.0) {
            return Err(Error::param("relaxation", "must lie in (0, 1]"));
        }
        if !(options.tolerance > 0.0) || options.max_iterations == 0 {
            return Err(Error::param("options", "tolerance and max_iterations must be positive"));
        }
        let table_size = options.table_size.unwrap_or(grid.n());
        if table_size < grid.n() {
            return Err(Error::param("table_size", "must be at least the radius grid size"));
        }

        let log_rho = trace_to_spectrum(&BoundaryTrace::from_real(grid, rho.iter().map(|r| r.ln()).collect())?);
        let epsilon = {
            let d = crate::spectral::spectrum_to_real_trace(&{
                let mut dc = FourierCoeffs::zeros(grid.n());
                for k in 1..(grid.n() / 2) as i64 {
                    dc.set(k, log_rho.get(k) * Complex64::new(0.0, k as f64));
                    dc.set(-k, log_rho.get(-k) * Complex64::new(0.0, -(k as f64)));
                }
                dc
            });
            d.values().iter().map(|v| v.re.abs()).fold(0.0, f64::max)
        };

        let theta: Vec<f64> = grid.angles().collect();
        let mut tau = theta.clone();
        let mut iterations = 0;
        let mut change = f64::INFINITY;
        while iterations < options.max_iterations {
            iterations += 1;
            let lr = BoundaryTrace::from_real(grid, tau.iter().map(|&t| interpolate_real(&log_rho, t)).collect())?;
            let k = conjugate_trace(&lr)?;
            change = 0.0;
            for ((t, th), kv) in tau.iter_mut().zip(&theta).zip(k.values()) {
                let target = th + kv.re;
                let step = options.relaxation * (target - *t);
                change = f64::max(change, (target - *t).abs());
                *t += step;
            }
            if !change.is_finite() {
                break;
            }
            if change <= options.tolerance {
                break;
            }
        }
        if !(change <= options.tolerance) {
            return Err(Error::NonConvergence {
                what: "Theodorsen iteration",
                iterations,
                residual: change,
            });
        }

        let lr = BoundaryTrace::from_real(grid, tau.iter().map(|&t| interpolate_real(&log_rho, t)).collect())?;
        let s = schwarz_extend(&lr)?;
        let ds = s.derivative();
        let s_on_circle = s.circle_values_unchecked(1.0, table_size);
        let (boundary, corr) = {
            let table = CircleGrid::new(table_size)?;
            let pts: Vec<Complex64> = table
                .angles()
                .zip(&s_on_circle)
                .map(|(t, sv)| (Complex64::new(0.0, t) + sv).exp())
                .collect();
            let b = super::natural_parameter(&pts)?;
            let c = BoundaryCorrespondence::from_boundary(&b);
            (b, c)
        };
        Ok(Self {
            name,
            log_rho,
            tau,
            s,
            ds,
            iterations,
            last_change: change,
            epsilon,
            boundary,
            corr,
        })
    }

    /// Boundary correspondence `tau(theta_j)` on the radius grid.
    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn last_change(&self) -> f64 {
        self.last_change
    }

    /// `sup |rho'/rho|` of the interpolant at the grid nodes; below one the
    /// iteration is a contraction.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `rho` of the interpolant at `tau`.
    pub fn rho(&self, tau: f64) -> f64 {
        interpolate_real(&self.log_rho, tau).exp()
    }

    fn eval_with_derivative(&self, w: Complex64) -> (Complex64, Complex64) {
        let e = self.s.horner(w).exp();
        (w * e, e * (1.0 + w * self.ds.horner(w)))
    }
}

impl ConformalMap for TheodorsenMap {
    fn name(&self) -> &'static str {
        self.name
    }

    fn kind(&self) -> MapKind {
        MapKind::Theodorsen
    }

    fn to_disk(&self, z: Complex64) -> Result<Complex64> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::OutsideDomain { z });
        }
        let w0 = z * (-self.s.coeff(0)).exp();
        invert(|w| self.eval_with_derivative(w), z, w0)
    }

    fn from_disk(&self, w: Complex64) -> Result<Complex64> {
        check_closed_disk(w)?;
        Ok(w * self.s.horner(w).exp())
    }

    fn boundary(&self) -> &JordanBoundary {
        &self.boundary
    }

    fn correspondence(&self) -> &BoundaryCorrespondence {
        &self.corr
    }

    fn diagnostics(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("iterations", self.iterations as f64),
            ("last_change", self.last_change),
            ("epsilon", self.epsilon),
        ]
    }
}

/// Radius function of a polygon star-like about the origin, sampled at
/// `m` equispaced directions by ray casting.
pub fn polyline_radius(vertices: &[Complex64], m: usize) -> Result<Vec<f64>> {
    let boundary = super::natural_parameter(vertices)?;
    let pts = boundary.points();
    let grid = CircleGrid::new(m)?;
    let k = pts.len();
    grid.angles()
        .map(|t| {
            let d = Complex64::from_polar(1.0, t);
            let mut hits: Vec<f64> = Vec::new();
            for j in 0..k {
                let a = pts[j];
                let e = pts[(j + 1) % k] - a;
                // solve r d = a + u e
                let den = d.re * e.im - d.im * e.re;
                if den == 0.0 {
                    continue;
                }
                let r = (a.re * e.im - a.im * e.re) / den;
                let u = (a.re * d.im - a.im * d.re) / den;
                if r > 0.0 && (-1e-12..=1.0 + 1e-12).contains(&u) {
                    hits.push(r);
                }
            }
            hits.sort_by(f64::total_cmp);
            hits.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.max(1.0));
            match hits.as_slice() {
                [r] => Ok(*r),
                [] => Err(Error::param("vertices", "origin is not inside the polygon")),
                _ => Err(Error::param(
                    "vertices",
                    format!("polygon is not star-shaped about the origin (direction {t})"),
                )),
            }
        })
        .collect()
}
