//! Transplantation of boundary problems from a Jordan domain `D` to the disk.
//!
//! A [`ConformalMap`] carries `D` onto the disk together with a tabulated
//! boundary correspondence between disk angles and arc length on `dD`.
//! Data given along `dD` is pulled back through that table, solved on the
//! disk, and composed with `to_disk`. Harmonic measure of boundary arcs is
//! the angular length of their image after moving the base point to `0`.

mod maps;

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::boundary::{CompiledData, DataSpec, UnimodularTrace};
use crate::dirichlet::ExtensionRoute;
use crate::error::{Error, Result};
use crate::registry::{parse_params, Registry};
use crate::rh::{solve, RHProblem, RHSolution, SolverConfig};
use crate::series::HolomorphicFn;
use crate::spectral::{BoundaryTrace, CircleGrid};

pub use maps::{
    polyline_radius, PolynomialMap, ScaledDisk, TheodorsenMap, TheodorsenOptions, CLOSURE_SLACK, CONTINUATION_STEPS,
    NEWTON_MAX, NEWTON_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MapKind {
    AnalyticClosedForm,
    Polynomial,
    Theodorsen,
}

/// Closed polyline `p_0, .., p_{m-1}` (closing edge `p_{m-1} -> p_0`) with
/// cumulative chord length `s_0 = 0 < s_1 < .. < s_m = total_length`.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanBoundary {
    points: Vec<Complex64>,
    s: Vec<f64>,
}

impl JordanBoundary {
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// `m + 1` cumulative lengths; the last one closes the curve.
    pub fn arc_lengths(&self) -> &[f64] {
        &self.s
    }

    pub fn total_length(&self) -> f64 {
        self.s[self.points.len()]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point at arc length `s` (mod total length) along the polyline.
    pub fn point_at(&self, s: f64) -> Complex64 {
        let s = s.rem_euclid(self.total_length());
        let j = self.s.partition_point(|&x| x <= s).clamp(1, self.points.len()) - 1;
        let t = (s - self.s[j]) / (self.s[j + 1] - self.s[j]);
        let a = self.points[j];
        let b = self.points[(j + 1) % self.points.len()];
        a + (b - a) * t
    }
}

/// Cumulative chord-length parameterization of a closed polyline.
///
/// Rejects fewer than three points, non-finite points, zero-length edges,
/// and edges that cross or overlap a non-adjacent edge.
pub fn natural_parameter(points: &[Complex64]) -> Result<JordanBoundary> {
    let m = points.len();
    if m < 3 {
        return Err(Error::param("boundary", format!("{m} points, need at least 3")));
    }
    if points.iter().any(|p| !(p.re.is_finite() && p.im.is_finite())) {
        return Err(Error::NonFinite("boundary points"));
    }
    let mut s = Vec::with_capacity(m + 1);
    s.push(0.0);
    for j in 0..m {
        let d = (points[(j + 1) % m] - points[j]).norm();
        if d == 0.0 {
            return Err(Error::param("boundary", format!("zero-length edge at point {j}")));
        }
        s.push(s[j] + d);
    }
    if let Some((a, b)) = first_crossing(points) {
        return Err(Error::param("boundary", format!("edges {a} and {b} intersect")));
    }
    Ok(JordanBoundary {
        points: points.to_vec(),
        s,
    })
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    (b - a).im * (c - a).re - (b - a).re * (c - a).im
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
}

fn segments_meet(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Sweep over edges sorted by their left end; only edges whose x-ranges
/// overlap are tested.
fn first_crossing(points: &[Complex64]) -> Option<(usize, usize)> {
    let m = points.len();
    let edge = |i: usize| (points[i], points[(i + 1) % m]);
    let mut order: Vec<usize> = (0..m).collect();
    let left = |i: usize| {
        let (a, b) = edge(i);
        a.re.min(b.re)
    };
    let right = |i: usize| {
        let (a, b) = edge(i);
        a.re.max(b.re)
    };
    order.sort_by(|&i, &j| left(i).total_cmp(&left(j)));
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let x = left(i);
        active.retain(|&j| right(j) >= x);
        let (p1, p2) = edge(i);
        for &j in &active {
            let adjacent = (i + 1) % m == j || (j + 1) % m == i;
            if adjacent {
                continue;
            }
            let (q1, q2) = edge(j);
            if segments_meet(p1, p2, q1, q2) {
                return Some((i.min(j), i.max(j)));
            }
        }
        active.push(i);
    }
    None
}

/// Monotone table `theta_j = 2 pi j / m -> s_j`, where `s_j` is the arc
/// length of `from_disk(e^{i theta_j})` along the tabulated boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCorrespondence {
    arc: Vec<f64>,
}

impl BoundaryCorrespondence {
    /// The boundary points must be the images of `m` equispaced angles.
    pub fn from_boundary(boundary: &JordanBoundary) -> Self {
        Self {
            arc: boundary.arc_lengths().to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.arc.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total_length(&self) -> f64 {
        self.arc[self.len()]
    }

    fn spacing(&self) -> f64 {
        TAU / self.len() as f64
    }

    pub fn angle(&self, j: usize) -> f64 {
        self.spacing() * j as f64
    }

    /// `m + 1` arc lengths, the last equal to the total length.
    pub fn arc_lengths(&self) -> &[f64] {
        &self.arc
    }

    pub fn is_strictly_monotone(&self) -> bool {
        self.arc.windows(2).all(|w| w[1] > w[0])
    }

    /// Periodic linear interpolation of the table at `theta`.
    pub fn arc_length_at(&self, theta: f64) -> f64 {
        let x = theta.rem_euclid(TAU) / self.spacing();
        let j = (x.floor() as usize).min(self.len() - 1);
        let t = x - j as f64;
        let s = self.arc[j] + (self.arc[j + 1] - self.arc[j]) * t;
        if s >= self.total_length() {
            s - self.total_length()
        } else {
            s
        }
    }

    /// Inverse of [`Self::arc_length_at`], returning an angle in `[0, 2 pi)`.
    pub fn angle_at(&self, s: f64) -> f64 {
        let s = s.rem_euclid(self.total_length());
        let j = self.arc.partition_point(|&x| x <= s).clamp(1, self.len()) - 1;
        let t = (s - self.arc[j]) / (self.arc[j + 1] - self.arc[j]);
        let theta = self.spacing() * (j as f64 + t);
        if theta >= TAU {
            theta - TAU
        } else {
            theta
        }
    }
}

/// A conformal map of a Jordan domain `D` onto the unit disk, with its
/// boundary extension tabulated.
pub trait ConformalMap: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    fn kind(&self) -> MapKind;

    /// `D -> disk`. Points outside `D` are reported as [`Error::OutsideDomain`].
    fn to_disk(&self, z: Complex64) -> Result<Complex64>;

    /// `closed disk -> closure of D`.
    #[allow(clippy::wrong_self_convention)]
    fn from_disk(&self, w: Complex64) -> Result<Complex64>;

    /// Images of `m` equispaced boundary angles.
    fn boundary(&self) -> &JordanBoundary;

    fn correspondence(&self) -> &BoundaryCorrespondence;

    fn total_length(&self) -> f64 {
        self.correspondence().total_length()
    }

    fn arc_length_of_angle(&self, theta: f64) -> f64 {
        self.correspondence().arc_length_at(theta)
    }

    fn angle_of_arc_length(&self, s: f64) -> f64 {
        self.correspondence().angle_at(s)
    }

    /// Construction statistics worth reporting, if any.
    fn diagnostics(&self) -> Vec<(&'static str, f64)> {
        Vec::new()
    }
}

pub(crate) fn check_closed_disk(w: Complex64) -> Result<()> {
    if !(w.re.is_finite() && w.im.is_finite()) || w.norm() > 1.0 + 1e-12 {
        return Err(Error::OutsideDisk { z: w });
    }
    Ok(())
}

/// Tabulates `boundary_point(2 pi j / m)` and its chord-length parameter.
pub(crate) fn tabulate(
    m: usize,
    boundary_point: impl Fn(f64) -> Complex64,
) -> Result<(JordanBoundary, BoundaryCorrespondence)> {
    let grid = CircleGrid::new(m)?;
    let points: Vec<Complex64> = grid.angles().map(boundary_point).collect();
    let boundary = natural_parameter(&points)?;
    let corr = BoundaryCorrespondence::from_boundary(&boundary);
    Ok((boundary, corr))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiskParams {
    #[serde(default = "unit")]
    radius: f64,
    #[serde(default = "default_table")]
    table_size: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialParams {
    c: [f64; 2],
    #[serde(default = "default_table")]
    table_size: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TheodorsenParams {
    #[serde(default)]
    rho: Option<DataSpec>,
    #[serde(default)]
    rho_samples: Option<Vec<f64>>,
    #[serde(default = "default_theodorsen_grid")]
    m: usize,
    #[serde(default)]
    options: TheodorsenOptions,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolylineParams {
    vertices: Vec<[f64; 2]>,
    #[serde(default = "default_theodorsen_grid")]
    m: usize,
    #[serde(default)]
    options: TheodorsenOptions,
}

fn unit() -> f64 {
    1.0
}

fn default_table() -> usize {
    8192
}

fn default_theodorsen_grid() -> usize {
    1024
}

fn build_disk(params: &Value) -> Result<Box<dyn ConformalMap>> {
    let p: DiskParams = parse_params("disk", params)?;
    Ok(Box::new(ScaledDisk::new(p.radius, p.table_size)?))
}

fn build_polynomial(params: &Value) -> Result<Box<dyn ConformalMap>> {
    let p: PolynomialParams = parse_params("polynomial", params)?;
    Ok(Box::new(PolynomialMap::new(
        Complex64::new(p.c[0], p.c[1]),
        p.table_size,
    )?))
}

fn build_theodorsen(params: &Value) -> Result<Box<dyn ConformalMap>> {
    let p: TheodorsenParams = parse_params("theodorsen", params)?;
    let rho = match (p.rho, p.rho_samples) {
        (Some(spec), None) => {
            let f = spec.compile(TAU)?;
            CircleGrid::new(p.m)?.angles().map(|t| f.eval(t).re).collect()
        }
        (None, Some(samples)) => samples,
        _ => return Err(Error::param("theodorsen", "give exactly one of rho, rho_samples")),
    };
    Ok(Box::new(TheodorsenMap::new(rho, p.options)?))
}

fn build_polyline(params: &Value) -> Result<Box<dyn ConformalMap>> {
    let p: PolylineParams = parse_params("polyline", params)?;
    let vertices: Vec<Complex64> = p.vertices.iter().map(|v| Complex64::new(v[0], v[1])).collect();
    let rho = polyline_radius(&vertices, p.m)?;
    Ok(Box::new(TheodorsenMap::named("polyline", rho, p.options)?))
}

/// `disk`, `polynomial`, `theodorsen`, `polyline`.
pub fn map_registry() -> Registry<dyn ConformalMap> {
    let mut reg = Registry::new("map");
    reg.register("disk", build_disk)
        .register("polynomial", build_polynomial)
        .register("theodorsen", build_theodorsen)
        .register("polyline", build_polyline);
    reg
}

/// Coordinate in which domain data is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataCoordinate {
    /// Angle of the disk preimage; pulled back as is.
    DiskAngle,
    /// Arc length along `dD` from `from_disk(1)`.
    #[default]
    ArcLength,
}

/// `lambda`, `phi` along `dD`, with declared jumps in the same coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainData {
    pub lambda: CompiledData,
    pub phi: CompiledData,
    pub coordinate: DataCoordinate,
    pub declared_jumps: Vec<f64>,
}

impl DomainData {
    /// Compiles the specs over the period of `coordinate` on `map`.
    pub fn compile(
        lambda: &DataSpec,
        phi: &DataSpec,
        coordinate: DataCoordinate,
        declared_jumps: Vec<f64>,
        map: &dyn ConformalMap,
    ) -> Result<Self> {
        let period = match coordinate {
            DataCoordinate::DiskAngle => TAU,
            DataCoordinate::ArcLength => map.total_length(),
        };
        Ok(Self {
            lambda: lambda.compile(period)?,
            phi: phi.compile(period)?,
            coordinate,
            declared_jumps,
        })
    }
}

/// Samples `lambda o omega^{-1}` and `phi o omega^{-1}` on the disk grid.
pub fn transport_problem(data: &DomainData, map: &dyn ConformalMap, grid: CircleGrid) -> Result<RHProblem> {
    let table = map.correspondence().len();
    if table < grid.n() {
        return Err(Error::CorrespondenceTooCoarse { table, grid: grid.n() });
    }
    let coord = |theta: f64| match data.coordinate {
        DataCoordinate::DiskAngle => theta,
        DataCoordinate::ArcLength => map.arc_length_of_angle(theta),
    };
    let lambda = BoundaryTrace::sample_complex(grid, |t| data.lambda.eval(coord(t)))?;
    let phi = BoundaryTrace::sample_real(grid, |t| data.phi.eval(coord(t)).re)?;
    let jumps = data
        .declared_jumps
        .iter()
        .map(|&x| match data.coordinate {
            DataCoordinate::DiskAngle => x.rem_euclid(TAU),
            DataCoordinate::ArcLength => map.angle_of_arc_length(x),
        })
        .collect();
    RHProblem::new(UnimodularTrace::new(lambda)?, phi, jumps)
}

/// A disk solution read through `to_disk`.
#[derive(Debug)]
pub struct TransplantedSolution<'m> {
    pub map: &'m dyn ConformalMap,
    pub problem: RHProblem,
    pub disk: RHSolution,
}

impl TransplantedSolution<'_> {
    /// `f_D(z) = f(to_disk(z))`.
    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        self.disk.f.eval(self.map.to_disk(z)?)
    }
}

pub fn solve_jordan<'m>(
    data: &DomainData,
    map: &'m dyn ConformalMap,
    grid: CircleGrid,
    route: &dyn ExtensionRoute,
    config: &SolverConfig,
) -> Result<TransplantedSolution<'m>> {
    let problem = transport_problem(data, map, grid)?;
    let disk = solve(&problem, route, config)?;
    Ok(TransplantedSolution { map, problem, disk })
}

/// Boundary arc `[start, start + length)` in arc length along `dD`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryArc {
    pub start: f64,
    pub length: f64,
}

/// Disk automorphism `(w - a) / (1 - conj(a) w)`, sending `a` to `0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: Complex64,
}

impl Mobius {
    pub fn to_origin(a: Complex64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::OutsideDisk { z: a });
        }
        Ok(Self { a })
    }

    pub fn apply(&self, w: Complex64) -> Complex64 {
        (w - self.a) / (1.0 - self.a.conj() * w)
    }
}

fn check_arcs(arcs: &[BoundaryArc], total: f64) -> Result<()> {
    if arcs.is_empty() {
        return Err(Error::param("arcs", "empty arc set"));
    }
    let mut spans: Vec<(f64, f64)> = Vec::with_capacity(arcs.len());
    for a in arcs {
        if !(a.start.is_finite() && a.length > 0.0 && a.length <= total) {
            return Err(Error::param("arcs", format!("invalid arc {a:?}")));
        }
        let s = a.start.rem_euclid(total);
        spans.push((s, s + a.length));
    }
    spans.sort_by(|x, y| x.0.total_cmp(&y.0));
    let slack = 1e-12 * total;
    for w in spans.windows(2) {
        if w[1].0 < w[0].1 - slack {
            return Err(Error::param("arcs", "arcs overlap"));
        }
    }
    let (first, last) = (spans[0], spans[spans.len() - 1]);
    if last.1 - total > first.0 + slack {
        return Err(Error::param("arcs", "arcs overlap across the origin of the parameter"));
    }
    Ok(())
}

/// Arcs on `dD` as counterclockwise angle intervals `(start, end)` on the
/// unit circle, `end - start` in `(0, 2 pi]`.
pub fn transported_arcs(arcs: &[BoundaryArc], map: &dyn ConformalMap) -> Vec<(f64, f64)> {
    let total = map.total_length();
    arcs.iter()
        .map(|a| {
            let start = map.angle_of_arc_length(a.start);
            if a.length >= total {
                return (start, start + TAU);
            }
            let mut end = map.angle_of_arc_length(a.start + a.length);
            if end <= start {
                end += TAU;
            }
            (start, end)
        })
        .collect()
}

/// Harmonic measure of the arc set at `z0` relative to `D`.
pub fn harmonic_measure(arcs: &[BoundaryArc], z0: Complex64, map: &dyn ConformalMap) -> Result<f64> {
    let total = map.total_length();
    check_arcs(arcs, total)?;
    let w0 = map.to_disk(z0)?;
    if !(w0.norm() < 1.0 - 1e-12) {
        return Err(Error::param("z0", format!("{z0} is not an interior point")));
    }
    let mobius = Mobius::to_origin(w0)?;
    let mut measure = 0.0;
    for (a, b) in transported_arcs(arcs, map) {
        if b - a >= TAU {
            return Ok(1.0);
        }
        let pa = mobius.apply(Complex64::from_polar(1.0, a)).arg();
        let pb = mobius.apply(Complex64::from_polar(1.0, b)).arg();
        measure += (pb - pa).rem_euclid(TAU);
    }
    Ok((measure / TAU).min(1.0))
}

/// Poisson integral of the arc indicator at `w0` by composite Simpson on
/// `panels` (even) panels per arc. Independent of the Mobius route.
pub fn poisson_indicator_measure(circle_arcs: &[(f64, f64)], w0: Complex64, panels: usize) -> Result<f64> {
    if !(w0.norm() < 1.0) {
        return Err(Error::OutsideDisk { z: w0 });
    }
    if panels == 0 || panels % 2 == 1 {
        return Err(Error::param("panels", "must be a positive even number"));
    }
    let kernel = |t: f64| (1.0 - w0.norm_sqr()) / (Complex64::from_polar(1.0, t) - w0).norm_sqr();
    let mut total = 0.0;
    for &(a, b) in circle_arcs {
        let h = (b - a) / panels as f64;
        let mut sum = kernel(a) + kernel(b);
        for i in 1..panels {
            sum += kernel(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        total += sum * h / 3.0;
    }
    Ok(total / TAU)
}
