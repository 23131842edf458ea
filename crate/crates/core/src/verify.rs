//! Boundary-limit verification along Stolz paths and boundary residuals.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rh::{RHProblem, RHSolution};
use crate::series::{HolomorphicFn, EVAL_RADIUS_LIMIT};

pub const MIN_GAP: f64 = 1.0 / (1u64 << 40) as f64;

/// Relative growth tolerated between successive increments before a path
/// is flagged as non-monotone.
pub const INCREMENT_SLACK: f64 = 0.1;

/// Approach to `e^{i vertex}` along the ray leaving the vertex at angle
/// `side_offset * aperture` from the inward normal, sampled at the gaps
/// `|1 - conj(zeta) z|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StolzPath {
    vertex: f64,
    aperture: f64,
    side_offset: f64,
    gaps: Vec<f64>,
}

impl StolzPath {
    pub fn new(vertex: f64, aperture: f64, side_offset: f64, gaps: Vec<f64>) -> Result<Self> {
        if !(aperture > 0.0 && aperture < FRAC_PI_2) {
            return Err(Error::param("aperture", format!("{aperture} outside (0, pi/2)")));
        }
        if !(-1.0..=1.0).contains(&side_offset) {
            return Err(Error::param("side_offset", format!("{side_offset} outside [-1, 1]")));
        }
        validate_gaps(&gaps)?;
        if !vertex.is_finite() {
            return Err(Error::param("vertex", "not finite"));
        }
        Ok(Self {
            vertex,
            aperture,
            side_offset,
            gaps,
        })
    }

    pub fn radial(vertex: f64, gaps: Vec<f64>) -> Result<Self> {
        Self::new(vertex, 0.5, 0.0, gaps)
    }

    pub fn vertex(&self) -> f64 {
        self.vertex
    }

    pub fn aperture(&self) -> f64 {
        self.aperture
    }

    pub fn side_offset(&self) -> f64 {
        self.side_offset
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    /// Whether `z` lies in the closed Stolz sector of this path's vertex and
    /// aperture, allowing `slack` radians of angular error.
    pub fn sector_contains(&self, z: Complex64, slack: f64) -> bool {
        let zeta = Complex64::from_polar(1.0, self.vertex);
        let w = (zeta - z) * zeta.conj();
        z.norm() < 1.0 && w.arg().abs() <= self.aperture + slack
    }
}

fn validate_gaps(gaps: &[f64]) -> Result<()> {
    if gaps.len() < 2 {
        return Err(Error::param("gaps", "need at least two gaps"));
    }
    if gaps.iter().any(|&g| !(MIN_GAP..=1.0).contains(&g)) {
        return Err(Error::param("gaps", "gaps must lie in [2^-40, 1]"));
    }
    if gaps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::param("gaps", "gaps must be strictly decreasing"));
    }
    Ok(())
}

/// `z_k = zeta (1 - g_k e^{i eta kappa})`; the angle is clamped where the
/// raw point would leave the evaluation disk, and points are finally pulled
/// inside `|z| <= 1 - 2^-40`.
pub fn path_points(p: &StolzPath) -> Vec<Complex64> {
    let zeta = Complex64::from_polar(1.0, p.vertex);
    let margin = 4.0 * MIN_GAP;
    p.gaps
        .iter()
        .map(|&g| {
            let raw = p.side_offset * p.aperture;
            let max_angle = ((margin + g * g) / (2.0 * g)).min(1.0).acos();
            let phi = raw.clamp(-max_angle, max_angle);
            let mut z = zeta * (1.0 - g * Complex64::from_polar(1.0, phi));
            let m = z.norm();
            if m > EVAL_RADIUS_LIMIT {
                z *= EVAL_RADIUS_LIMIT / m;
            }
            z
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathReport {
    pub aperture: f64,
    pub side_offset: f64,
    pub values: Vec<Complex64>,
    /// `|v_k - v_{k-1}|`; the first entry repeats the second.
    pub increments: Vec<f64>,
    pub estimate: Complex64,
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub vertex: f64,
    pub gaps: Vec<f64>,
    pub paths: Vec<PathReport>,
    /// Largest pairwise distance between per-path estimates.
    pub agreement: f64,
    pub tolerance: f64,
    /// Common limit, declared when every path is monotone and the estimates
    /// agree within `tolerance`.
    pub principal_value: Option<Complex64>,
}

impl ConvergenceReport {
    pub fn converged(&self) -> bool {
        self.principal_value.is_some()
    }
}

/// Evaluates `f` along every `(aperture, offset)` Stolz path to `vertex`.
pub fn nt_limit(
    f: &dyn HolomorphicFn,
    vertex: f64,
    apertures: &[f64],
    offsets: &[f64],
    gaps: &[f64],
    tolerance: f64,
) -> Result<ConvergenceReport> {
    if apertures.is_empty() || offsets.is_empty() {
        return Err(Error::param("apertures/offsets", "empty schedule"));
    }
    let mut paths = Vec::with_capacity(apertures.len() * offsets.len());
    for &aperture in apertures {
        for &offset in offsets {
            let path = StolzPath::new(vertex, aperture, offset, gaps.to_vec())?;
            let values = path_points(&path)
                .into_iter()
                .map(|z| f.eval(z))
                .collect::<Result<Vec<_>>>()?;
            let mut increments: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
            increments.insert(0, increments[0]);
            let monotone = increments
                .windows(2)
                .all(|w| w[1] <= (1.0 + INCREMENT_SLACK) * w[0] + 1e-15);
            paths.push(PathReport {
                aperture,
                side_offset: offset,
                estimate: *values.last().expect("at least two gaps"),
                values,
                increments,
                monotone,
            });
        }
    }
    let mut agreement = 0.0f64;
    for (i, a) in paths.iter().enumerate() {
        for b in &paths[i + 1..] {
            agreement = agreement.max((a.estimate - b.estimate).norm());
        }
    }
    let principal_value = (agreement <= tolerance && paths.iter().all(|p| p.monotone)).then(|| paths[0].estimate);
    Ok(ConvergenceReport {
        vertex,
        gaps: gaps.to_vec(),
        paths,
        agreement,
        tolerance,
        principal_value,
    })
}

/// `Re(conj(lambda_j) f)` minus the data, per radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualRow {
    pub r: f64,
    /// Mean absolute residual over admitted grid points.
    pub l1: f64,
    pub linf: f64,
    pub admitted: usize,
}

pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Grid points farther than `radius` from every center.
pub fn admitted_mask(n: usize, centers: &[f64], radius: f64) -> Vec<bool> {
    (0..n)
        .map(|j| {
            let theta = TAU * j as f64 / n as f64;
            centers.iter().all(|&c| circular_distance(theta, c) > radius)
        })
        .collect()
}

pub fn boundary_residual(
    sol: &RHSolution,
    problem: &RHProblem,
    r_schedule: &[f64],
    exclusion_radius: f64,
) -> Result<Vec<ResidualRow>> {
    boundary_residual_of(&sol.f, problem, r_schedule, &problem.declared_jumps, exclusion_radius)
}

/// Residual of an arbitrary candidate `f`, excluding neighborhoods of the
/// given centers.
pub fn boundary_residual_of(
    f: &dyn HolomorphicFn,
    problem: &RHProblem,
    r_schedule: &[f64],
    exclusion_centers: &[f64],
    exclusion_radius: f64,
) -> Result<Vec<ResidualRow>> {
    if !(exclusion_radius >= 0.0) {
        return Err(Error::param("exclusion_radius", format!("{exclusion_radius} < 0")));
    }
    let n = problem.phi.len();
    let mask = admitted_mask(n, exclusion_centers, exclusion_radius);
    let admitted = mask.iter().filter(|&&m| m).count();
    if admitted == 0 {
        return Err(Error::EmptyAdmittedSet);
    }
    r_schedule
        .iter()
        .map(|&r| {
            let vals = f.eval_on_circle(r, n)?;
            let (mut sum, mut worst) = (0.0, 0.0f64);
            for (j, v) in vals.iter().enumerate() {
                if !mask[j] {
                    continue;
                }
                let res = ((problem.lambda.values()[j].conj() * v).re - problem.phi.values()[j].re).abs();
                sum += res;
                worst = worst.max(res);
            }
            Ok(ResidualRow {
                r,
                l1: sum / admitted as f64,
                linf: worst,
                admitted,
            })
        })
        .collect()
}

/// `Re(conj(lambda) f)`, the part of `f` fixed by the boundary condition
/// where the coefficient takes the value `lambda`. Evaluates to a real
/// number stored in a complex.
#[derive(Debug, Clone, Copy)]
pub struct ProjectedReal<F> {
    pub f: F,
    pub lambda: Complex64,
}

impl<F: HolomorphicFn> HolomorphicFn for ProjectedReal<F> {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(Complex64::new((self.lambda.conj() * self.f.eval(z)?).re, 0.0))
    }
}

/// Whether `values` never grow by more than `slack` (relative) step to step.
pub fn nonincreasing_within(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack))
}
