//! The Riemann-Hilbert pipeline on the disk.
//!
//! For `Re(conj(lambda) f) = phi` with `|lambda| = 1`:
//!
//! 1. `alpha = arg lambda` (principal branch) and `g` its Schwarz integral;
//!    `A = exp(i g)`, so `conj(lambda) A -> exp(-beta)` on the boundary,
//!    where `beta` is the boundary value of `Im g`.
//! 2. `B` is an analytic extension of `phi * exp(beta)`.
//! 3. `f = A * B`.
//!
//! Adding `A * sum c_k C_k`, with `Re C_k` vanishing nontangentially almost
//! everywhere, gives further solutions.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::boundary::{principal_arg, UnimodularTrace};
use crate::dirichlet::ExtensionRoute;
use crate::error::{Error, Result};
use crate::series::{check_interior, AnalyticDiskFunction, HolomorphicFn};
use crate::spectral::{conjugate_trace, schwarz_extend, BoundaryTrace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Bound on `max |g|` near the boundary and on `max beta`; beyond it the
    /// exponentials are reported as overflow.
    pub max_exponent: f64,
    /// `1 - r` of the circle on which `|g|` is probed.
    pub growth_probe_gap: f64,
    /// `A` is expanded to `a_degree_multiple * (n/2 - 1)`. Its coefficients
    /// decay slowly when `lambda` jumps, and stopping at `n/2 - 1` leaves a
    /// tail that dominates the residual once `1 - r` nears the grid spacing.
    pub a_degree_multiple: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_exponent: 40.0,
            growth_probe_gap: 2f64.powi(-10),
            a_degree_multiple: 2,
        }
    }
}

/// `Re(conj(lambda) f) -> phi` on a shared grid. Declared jumps are angles
/// in `[0, 2 pi)` used only to build exclusion zones during verification.
#[derive(Debug, Clone, PartialEq)]
pub struct RHProblem {
    pub lambda: UnimodularTrace,
    pub phi: BoundaryTrace,
    pub declared_jumps: Vec<f64>,
}

impl RHProblem {
    pub fn new(lambda: UnimodularTrace, phi: BoundaryTrace, mut declared_jumps: Vec<f64>) -> Result<Self> {
        phi.require_real("phi")?;
        lambda.trace().require_same_grid(&phi)?;
        if let Some(bad) = declared_jumps.iter().find(|&&a| !(0.0..TAU).contains(&a)) {
            return Err(Error::param("declared_jumps", format!("{bad} outside [0, 2 pi)")));
        }
        declared_jumps.sort_by(f64::total_cmp);
        Ok(Self {
            lambda,
            phi,
            declared_jumps,
        })
    }
}

/// `(zeta + z) / (zeta - z)` for `zeta = e^{i anchor}`; its real part is
/// the Poisson kernel, whose nontangential limit is zero away from `zeta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelAtom {
    pub anchor: f64,
    pub zeta: Complex64,
}

impl KernelAtom {
    pub fn new(anchor: f64) -> Self {
        Self {
            anchor,
            zeta: Complex64::from_polar(1.0, anchor),
        }
    }

    /// Geometric expansion `1 + 2 sum_{k=1..m} (z / zeta)^k`.
    pub fn series(&self, degree: usize) -> AnalyticDiskFunction {
        let inv = self.zeta.conj();
        let mut coeffs = Vec::with_capacity(degree + 1);
        coeffs.push(Complex64::new(1.0, 0.0));
        let mut p = Complex64::new(2.0, 0.0);
        for _ in 1..=degree {
            p *= inv;
            coeffs.push(p);
        }
        AnalyticDiskFunction::new(coeffs).expect("finite")
    }

    fn closed_form(&self, z: Complex64) -> Complex64 {
        (self.zeta + z) / (self.zeta - z)
    }
}

impl HolomorphicFn for KernelAtom {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_interior(z)?;
        Ok(self.closed_form(z))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelTerm {
    pub weight: AnalyticDiskFunction,
    pub atom: KernelAtom,
}

/// `base(z) + sum_k weight_k(z) * atom_k(z)`.
///
/// Kernel atoms stay in closed form: their truncated expansions do not
/// decay near the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskExpansion {
    pub base: AnalyticDiskFunction,
    pub kernel_terms: Vec<KernelTerm>,
}

impl DiskExpansion {
    pub fn from_series(base: AnalyticDiskFunction) -> Self {
        Self {
            base,
            kernel_terms: Vec::new(),
        }
    }

    pub fn is_series(&self) -> bool {
        self.kernel_terms.is_empty()
    }
}

impl HolomorphicFn for DiskExpansion {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut v = self.base.evaluate(z)?;
        for t in &self.kernel_terms {
            v += t.weight.evaluate(z)? * t.atom.closed_form(z);
        }
        Ok(v)
    }

    fn eval_on_circle(&self, r: f64, n: usize) -> Result<Vec<Complex64>> {
        let mut vals = self.base.circle_values(r, n)?;
        for t in &self.kernel_terms {
            let w = t.weight.circle_values(r, n)?;
            for (j, (v, wj)) in vals.iter_mut().zip(w).enumerate() {
                let z = Complex64::from_polar(r, TAU * j as f64 / n as f64);
                *v += wj * t.atom.closed_form(z);
            }
        }
        Ok(vals)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RHSolution {
    pub f: DiskExpansion,
    pub a: AnalyticDiskFunction,
    pub b: AnalyticDiskFunction,
    pub alpha: BoundaryTrace,
    pub beta: BoundaryTrace,
    pub b_boundary: BoundaryTrace,
}

/// Returns `(A, alpha, beta)` with `A = exp(i g)`, `g` the Schwarz integral
/// of `alpha = arg lambda`, and `beta` the boundary trace of `Im g`.
pub fn build_a(
    lambda: &UnimodularTrace,
    config: &SolverConfig,
) -> Result<(AnalyticDiskFunction, BoundaryTrace, BoundaryTrace)> {
    let alpha = principal_arg(lambda);
    let g = schwarz_extend(&alpha)?;
    let grid = alpha.grid();
    let probe = g.circle_values(1.0 - config.growth_probe_gap, grid.n())?;
    let peak = probe.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if !(peak <= config.max_exponent) {
        return Err(Error::Overflow {
            what: "max |g| near the boundary",
            value: peak,
            bound: config.max_exponent,
        });
    }
    if config.a_degree_multiple == 0 {
        return Err(Error::param("a_degree_multiple", "must be positive"));
    }
    let a = g
        .scale(Complex64::i())
        .exp(config.a_degree_multiple * grid.default_degree());
    let beta = conjugate_trace(&alpha)?;
    Ok((a, alpha, beta))
}

/// Returns `(B, phi * exp(beta))` with `Re B -> phi * exp(beta)`.
pub fn build_b(
    phi: &BoundaryTrace,
    beta: &BoundaryTrace,
    route: &dyn ExtensionRoute,
    config: &SolverConfig,
) -> Result<(AnalyticDiskFunction, BoundaryTrace)> {
    phi.require_real("phi")?;
    beta.require_real("beta")?;
    phi.require_same_grid(beta)?;
    let peak = beta.values().iter().map(|v| v.re).fold(f64::NEG_INFINITY, f64::max);
    if !(peak <= config.max_exponent) {
        return Err(Error::Overflow {
            what: "max beta",
            value: peak,
            bound: config.max_exponent,
        });
    }
    let data = phi
        .values()
        .iter()
        .zip(beta.values())
        .map(|(p, b)| p.re * b.re.exp())
        .collect();
    let b_boundary = BoundaryTrace::from_real(phi.grid(), data)?;
    let b = route.extend(&b_boundary)?;
    Ok((b, b_boundary))
}

pub fn solve(problem: &RHProblem, route: &dyn ExtensionRoute, config: &SolverConfig) -> Result<RHSolution> {
    let (a, alpha, beta) = build_a(&problem.lambda, config)?;
    let (b, b_boundary) = build_b(&problem.phi, &beta, route, config)?;
    Ok(RHSolution {
        f: DiskExpansion::from_series(a.mul(&b)),
        a,
        b,
        alpha,
        beta,
        b_boundary,
    })
}

/// Homogeneous-solution generators anchored at distinct boundary angles.
#[derive(Debug, Clone, PartialEq)]
pub struct NullFamily {
    pub generators: Vec<KernelAtom>,
    pub anchors: Vec<f64>,
}

impl NullFamily {
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Samples `S[k, j] = C_k(r e^{2 pi i j / samples})`.
    pub fn sample_matrix(&self, radius: f64, samples: usize) -> Result<DMatrix<Complex64>> {
        let mut s = DMatrix::zeros(self.len(), samples);
        for (k, atom) in self.generators.iter().enumerate() {
            for j in 0..samples {
                let z = Complex64::from_polar(radius, TAU * j as f64 / samples as f64);
                s[(k, j)] = atom.eval(z)?;
            }
        }
        Ok(s)
    }

    /// `G = S S^H / samples`, the discrete L2 Gram matrix on `|z| = radius`.
    pub fn gram_matrix(&self, radius: f64, samples: usize) -> Result<DMatrix<Complex64>> {
        let s = self.sample_matrix(radius, samples)?;
        Ok(&s * s.adjoint() / Complex64::new(samples as f64, 0.0))
    }
}

pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

pub fn numerical_rank(singular_values: &[f64], tol: f64) -> usize {
    singular_values.iter().filter(|&&s| s > tol).count()
}

pub fn null_generators(k_max: usize, anchors: &[f64]) -> Result<NullFamily> {
    if k_max == 0 || anchors.len() != k_max {
        return Err(Error::param(
            "anchors",
            format!("expected {k_max} anchors, got {}", anchors.len()),
        ));
    }
    for (i, &a) in anchors.iter().enumerate() {
        if !(0.0..TAU).contains(&a) {
            return Err(Error::param("anchors", format!("{a} outside [0, 2 pi)")));
        }
        for &b in &anchors[..i] {
            let d = (a - b).rem_euclid(TAU);
            if d.min(TAU - d) < 1e-12 {
                return Err(Error::param("anchors", format!("duplicate anchor {a}")));
            }
        }
    }
    Ok(NullFamily {
        generators: anchors.iter().map(|&a| KernelAtom::new(a)).collect(),
        anchors: anchors.to_vec(),
    })
}

/// `f = A (B + sum c_k C_k)`, kept as `A B + sum (c_k A) C_k`.
pub fn solve_family(
    problem: &RHProblem,
    coeffs: &[f64],
    family: &NullFamily,
    route: &dyn ExtensionRoute,
    config: &SolverConfig,
) -> Result<RHSolution> {
    if coeffs.len() != family.len() {
        return Err(Error::param(
            "coeffs",
            format!("{} coefficients for {} generators", coeffs.len(), family.len()),
        ));
    }
    let mut sol = solve(problem, route, config)?;
    sol.f.kernel_terms = coeffs
        .iter()
        .zip(&family.generators)
        .filter(|(&c, _)| c != 0.0)
        .map(|(&c, &atom)| KernelTerm {
            weight: sol.a.scale(Complex64::new(c, 0.0)),
            atom,
        })
        .collect();
    Ok(sol)
}
