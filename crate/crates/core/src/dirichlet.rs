//! Dirichlet problem on the disk: direct Poisson route and the Gehring
//! route through a periodic primitive, plus conjugates and h^p means.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde_json::Value;

use crate::boundary::lusin_primitive;
use crate::error::{Error, Result};
use crate::registry::Registry;
use crate::series::AnalyticDiskFunction;
use crate::spectral::{angular_derivative, schwarz_extend, BoundaryTrace};

/// Builds an analytic function on the disk whose real part has the given
/// nontangential boundary values.
pub trait ExtensionRoute: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    fn extend(&self, data: &BoundaryTrace) -> Result<AnalyticDiskFunction>;
}

/// Schwarz integral of the data.
#[derive(Debug, Clone, Copy, Default)]
pub struct PoissonRoute;

impl ExtensionRoute for PoissonRoute {
    fn name(&self) -> &'static str {
        "direct"
    }

    fn extend(&self, data: &BoundaryTrace) -> Result<AnalyticDiskFunction> {
        schwarz_extend(data)
    }
}

/// Angular derivative of the Schwarz integral of a periodic primitive,
/// plus the mean that was split off before integrating.
#[derive(Debug, Clone, Copy, Default)]
pub struct LusinRoute;

impl ExtensionRoute for LusinRoute {
    fn name(&self) -> &'static str {
        "lusin"
    }

    fn extend(&self, data: &BoundaryTrace) -> Result<AnalyticDiskFunction> {
        let (primitive, mean) = lusin_primitive(data)?;
        let g = schwarz_extend(&primitive)?;
        Ok(angular_derivative(&g).add_constant(Complex64::new(mean, 0.0)))
    }
}

fn build_poisson(_: &Value) -> Result<Box<dyn ExtensionRoute>> {
    Ok(Box::new(PoissonRoute))
}

fn build_lusin(_: &Value) -> Result<Box<dyn ExtensionRoute>> {
    Ok(Box::new(LusinRoute))
}

/// `direct`/`poisson` and `lusin`/`gehring`.
pub fn route_registry() -> Registry<dyn ExtensionRoute> {
    let mut reg = Registry::new("route");
    reg.register("direct", build_poisson)
        .register("poisson", build_poisson)
        .register("lusin", build_lusin)
        .register("gehring", build_lusin);
    reg
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DirichletRoute {
    Direct,
    Gehring,
}

/// Harmonic function represented as the real part of an analytic one.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicDiskFunction {
    pub re_part: AnalyticDiskFunction,
    pub route: DirichletRoute,
}

impl HarmonicDiskFunction {
    pub fn value(&self, z: Complex64) -> Result<f64> {
        Ok(self.re_part.evaluate(z)?.re)
    }

    pub fn circle_values(&self, r: f64, n: usize) -> Result<Vec<f64>> {
        Ok(self.re_part.circle_values(r, n)?.into_iter().map(|v| v.re).collect())
    }
}

pub fn solve_direct(phi: &BoundaryTrace) -> Result<HarmonicDiskFunction> {
    Ok(HarmonicDiskFunction {
        re_part: PoissonRoute.extend(phi)?,
        route: DirichletRoute::Direct,
    })
}

pub fn solve_gehring(phi: &BoundaryTrace) -> Result<HarmonicDiskFunction> {
    Ok(HarmonicDiskFunction {
        re_part: LusinRoute.extend(phi)?,
        route: DirichletRoute::Gehring,
    })
}

/// Harmonic conjugate normalized by `v(0) = 0`.
pub fn conjugate(u: &HarmonicDiskFunction) -> HarmonicDiskFunction {
    let f = &u.re_part;
    let centered = f.add_constant(-f.coeff(0));
    HarmonicDiskFunction {
        re_part: centered.scale(Complex64::new(0.0, -1.0)),
        route: u.route,
    }
}

/// `max_r (int_0^{2pi} |u(r e^{it})|^p dt)^{1/p}` over the given radii, by
/// the trapezoidal rule on a grid fine enough for the series degree.
pub fn hp_norm(u: &HarmonicDiskFunction, p: f64, radii: &[f64]) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::param("p", format!("{p} < 1")));
    }
    if radii.is_empty() {
        return Err(Error::param("radii", "empty radius schedule"));
    }
    let n = (4 * (u.re_part.degree() + 1)).next_power_of_two().max(64);
    let mut best = 0.0f64;
    for &r in radii {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::param("radii", format!("{r} outside (0, 1)")));
        }
        let vals = u.circle_values(r, n)?;
        let integral: f64 = vals.iter().map(|v| v.abs().powf(p)).sum::<f64>() * TAU / n as f64;
        best = best.max(integral.powf(1.0 / p));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::CircleGrid;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn grid(n: usize) -> CircleGrid {
        CircleGrid::new(n).unwrap()
    }

    #[test]
    fn registry_names() {
        let reg = route_registry();
        assert_eq!(reg.build("gehring", &Value::Null).unwrap().name(), "lusin");
        assert_eq!(reg.build("direct", &Value::Null).unwrap().name(), "direct");
        assert!(reg.build("spline", &Value::Null).is_err());
    }

    #[test]
    fn direct_examples() {
        let g = grid(128);
        let u = solve_direct(&BoundaryTrace::sample_real(g, |_| 2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(u.value(Complex64::new(0.4, -0.5)).unwrap(), 2.0, epsilon = 1e-14);

        let u = solve_direct(&BoundaryTrace::sample_real(g, f64::cos).unwrap()).unwrap();
        let z = Complex64::from_polar(0.8, 1.1);
        assert_abs_diff_eq!(u.value(z).unwrap(), 0.8 * 1.1f64.cos(), epsilon = 1e-14);

        // arc [0, l): harmonic measure at the centre
        let l = 1.5;
        let arc = BoundaryTrace::sample_real(grid(1024), |t| if t < l { 1.0 } else { 0.0 }).unwrap();
        let u = solve_direct(&arc).unwrap();
        let count = (0..1024).filter(|&j| grid(1024).theta(j) < l).count();
        assert_abs_diff_eq!(
            u.value(Complex64::new(0.0, 0.0)).unwrap(),
            count as f64 / 1024.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            u.value(Complex64::new(0.0, 0.0)).unwrap(),
            l / TAU,
            epsilon = TAU / 1024.0
        );
    }

    #[test]
    fn gehring_examples() {
        let g = grid(256);
        let u = solve_gehring(&BoundaryTrace::sample_real(g, |_| -1.5).unwrap()).unwrap();
        assert_abs_diff_eq!(u.value(Complex64::new(0.3, 0.3)).unwrap(), -1.5, epsilon = 1e-14);

        let u = solve_gehring(&BoundaryTrace::sample_real(g, f64::cos).unwrap()).unwrap();
        for &(r, t) in &[(0.5, 0.2), (0.9, 2.0), (0.99, 4.0)] {
            assert_abs_diff_eq!(
                u.value(Complex64::from_polar(r, t)).unwrap(),
                r * t.cos(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn gehring_matches_direct_on_square_wave() {
        let g = grid(4096);
        let sq = BoundaryTrace::sample_real(g, |t| if t < PI { 1.0 } else { -1.0 }).unwrap();
        let a = solve_direct(&sq).unwrap().circle_values(0.9, 4096).unwrap();
        let b = solve_gehring(&sq).unwrap().circle_values(0.9, 4096).unwrap();
        let diff = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(diff <= 1e-6, "{diff}");
    }

    #[test]
    fn conjugate_examples() {
        let g = grid(64);
        let u = solve_direct(&BoundaryTrace::sample_real(g, f64::cos).unwrap()).unwrap();
        let v = conjugate(&u);
        let z = Complex64::from_polar(0.6, 0.7);
        assert_abs_diff_eq!(v.value(z).unwrap(), 0.6 * 0.7f64.sin(), epsilon = 1e-14);
        assert_eq!(v.value(Complex64::new(0.0, 0.0)).unwrap(), 0.0);

        let c = conjugate(&solve_direct(&BoundaryTrace::sample_real(g, |_| 7.0).unwrap()).unwrap());
        assert_abs_diff_eq!(c.value(z).unwrap(), 0.0, epsilon = 1e-14);

        let u2 = solve_direct(&BoundaryTrace::sample_real(g, |t| (2.0 * t).cos()).unwrap()).unwrap();
        let v2 = conjugate(&u2);
        assert_abs_diff_eq!(v2.value(z).unwrap(), 0.36 * 1.4f64.sin(), epsilon = 1e-14);
    }

    #[test]
    fn hp_examples() {
        let g = grid(64);
        let one = solve_direct(&BoundaryTrace::sample_real(g, |_| 1.0).unwrap()).unwrap();
        assert_abs_diff_eq!(hp_norm(&one, 2.0, &[0.5]).unwrap(), TAU.sqrt(), epsilon = 1e-14);

        let cos = solve_direct(&BoundaryTrace::sample_real(g, f64::cos).unwrap()).unwrap();
        let near = hp_norm(&cos, 2.0, &[0.5, 0.9, 0.999999]).unwrap();
        assert_abs_diff_eq!(near, PI.sqrt(), epsilon = 1e-5);

        let zero = solve_direct(&BoundaryTrace::sample_real(g, |_| 0.0).unwrap()).unwrap();
        assert_eq!(hp_norm(&zero, 3.0, &[0.9]).unwrap(), 0.0);

        assert!(hp_norm(&one, 0.5, &[0.5]).is_err());
        assert!(hp_norm(&one, 2.0, &[]).is_err());
        assert!(hp_norm(&one, 2.0, &[1.0]).is_err());
    }

    fn trig_poly(n: usize) -> impl Strategy<Value = BoundaryTrace> {
        let deg = n / 4;
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), deg + 1).prop_map(move |c| {
            BoundaryTrace::sample_real(CircleGrid::new(n).unwrap(), |t| {
                c.iter()
                    .enumerate()
                    .map(|(k, (a, b))| a * (k as f64 * t).cos() + b * (k as f64 * t).sin())
                    .sum()
            })
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn routes_agree_on_trig_polynomials(phi in trig_poly(128)) {
            let a = solve_direct(&phi).unwrap();
            let b = solve_gehring(&phi).unwrap();
            for r in [0.3, 0.7, 0.99] {
                let va = a.circle_values(r, 128).unwrap();
                let vb = b.circle_values(r, 128).unwrap();
                for (x, y) in va.iter().zip(&vb) {
                    prop_assert!((x - y).abs() <= 1e-8);
                }
            }
        }

        #[test]
        fn mean_value_at_origin(phi in trig_poly(64)) {
            let mean = phi.mean().re;
            for u in [solve_direct(&phi).unwrap(), solve_gehring(&phi).unwrap()] {
                prop_assert!((u.value(Complex64::new(0.0, 0.0)).unwrap() - mean).abs() <= 1e-12);
            }
        }

        #[test]
        fn conjugate_l2_bound(phi in trig_poly(64)) {
            let u = solve_direct(&phi).unwrap();
            let v = conjugate(&u);
            let radii = [0.2, 0.6, 0.95];
            let mean = phi.mean().re.abs();
            prop_assert!(hp_norm(&v, 2.0, &radii).unwrap() <= hp_norm(&u, 2.0, &radii).unwrap() + mean * TAU.sqrt() + 1e-12);
        }

        #[test]
        fn hp_means_nondecreasing_in_r(phi in trig_poly(64), p in 1.0f64..4.0) {
            let u = solve_direct(&phi).unwrap();
            let mut last = 0.0;
            for r in [0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
                let m = hp_norm(&u, p, &[r]).unwrap();
                prop_assert!(m + 1e-10 >= last);
                last = m;
            }
        }
    }
}
