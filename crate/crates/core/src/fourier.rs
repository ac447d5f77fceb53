//! Trigonometric polynomials on (−π, π), the Fourier coefficients of sgn,
//! and a composite midpoint rule that respects jump points.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::seqcore::LateralSequence;

/// Highest coefficient index compared by the coefficient-level check unless
/// configured otherwise.
pub const DEFAULT_MAX_COEFFICIENT: i64 = 64;

/// x̂(t) = Σ_m x(m) e^{imt}.
pub fn trig_eval(x: &LateralSequence, t: f64) -> Complex64 {
    x.nonzero()
        .map(|(m, v)| v * Complex64::from_polar(1.0, m as f64 * t))
        .sum()
}

/// ∫_{−π}^{π} sgn(t) e^{ikt} dt: zero for even k, 4i/k for odd k.
pub fn sgn_fourier_coefficient(k: i64) -> Complex64 {
    if k.rem_euclid(2) == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, 4.0 / k as f64)
    }
}

/// Composite midpoint rule over [−π, π] with `panels` panels on every
/// subinterval cut out by the interior `breakpoints`.
///
/// Midpoints never land on a breakpoint, so an integrand that is smooth on
/// each side of every breakpoint converges at O(panels⁻²) regardless of
/// its jumps. Panel sums are accumulated in a fixed order.
pub fn piecewise_quadrature<F>(f: F, breakpoints: &[f64], panels: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    if panels == 0 {
        return Err(Error::NoPanels);
    }
    if breakpoints.iter().any(|b| !(-PI..=PI).contains(b))
        || breakpoints.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::UnsortedBreakpoints);
    }
    let mut edges = Vec::with_capacity(breakpoints.len() + 2);
    edges.push(-PI);
    edges.extend(breakpoints.iter().copied().filter(|&b| b > -PI && b < PI));
    edges.push(PI);

    let mut total = Complex64::new(0.0, 0.0);
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = (b - a) / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..panels {
            acc += f(a + (j as f64 + 0.5) * h);
        }
        total += acc * h;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn trig_eval_examples() {
        assert_eq!(trig_eval(&LateralSequence::delta(0), 1.234), Complex64::new(1.0, 0.0));
        let z = trig_eval(&LateralSequence::delta(1), PI / 2.0);
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let cos2 = LateralSequence::delta(1).add(&LateralSequence::delta(-1));
        assert_eq!(trig_eval(&cos2, 0.0), Complex64::new(2.0, 0.0));
        for t in [-3.0, -1.0, 0.3, 2.5] {
            assert!((trig_eval(&cos2, t) - Complex64::new(2.0 * f64::cos(t), 0.0)).norm() < 1e-14);
        }
    }

    /// ∫_0^π e^{ikt} dt − ∫_{−π}^0 e^{ikt} dt from antiderivatives.
    fn two_panel_analytic(k: i64) -> Complex64 {
        if k == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let kf = k as f64;
        let prim = |t: f64| Complex64::from_polar(1.0, kf * t) / Complex64::new(0.0, kf);
        (prim(PI) - prim(0.0)) - (prim(0.0) - prim(-PI))
    }

    #[test]
    fn sgn_coefficient_examples() {
        assert_eq!(sgn_fourier_coefficient(2), Complex64::new(0.0, 0.0));
        assert_eq!(sgn_fourier_coefficient(0), Complex64::new(0.0, 0.0));
        assert_eq!(sgn_fourier_coefficient(1), Complex64::new(0.0, 4.0));
        assert_eq!(sgn_fourier_coefficient(-3), Complex64::new(0.0, -4.0 / 3.0));
        for k in -20..=20 {
            assert!((sgn_fourier_coefficient(k) - two_panel_analytic(k)).norm() < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn quadrature_examples() {
        let one = piecewise_quadrature(|_| Complex64::new(1.0, 0.0), &[], 64).unwrap();
        assert!((one - Complex64::new(2.0 * PI, 0.0)).norm() < 1e-12);
        let sgn = |t: f64| Complex64::new(t.signum(), 0.0);
        assert!(piecewise_quadrature(sgn, &[0.0], 33).unwrap().norm() < 1e-12);
        let z = piecewise_quadrature(
            |t| t.signum() * Complex64::from_polar(1.0, t),
            &[0.0],
            1 << 16,
        )
        .unwrap();
        assert!((z - sgn_fourier_coefficient(1)).norm() < 1e-8);
    }

    #[test]
    fn quadrature_rejects_bad_breakpoints() {
        let f = |_| Complex64::new(1.0, 0.0);
        assert!(matches!(piecewise_quadrature(f, &[0.5, 0.1], 4), Err(Error::UnsortedBreakpoints)));
        assert!(matches!(piecewise_quadrature(f, &[4.0], 4), Err(Error::UnsortedBreakpoints)));
        assert!(matches!(piecewise_quadrature(f, &[0.0], 0), Err(Error::NoPanels)));
    }

    #[test]
    fn midpoint_error_is_second_order() {
        let f = |t: f64| t.signum() * Complex64::from_polar(1.0, 3.0 * t);
        let exact = sgn_fourier_coefficient(3);
        let e1 = (piecewise_quadrature(f, &[0.0], 64).unwrap() - exact).norm();
        let e2 = (piecewise_quadrature(f, &[0.0], 128).unwrap() - exact).norm();
        let order = (e1 / e2).log2();
        assert!((order - 2.0).abs() < 0.05, "observed order {order}");
    }

    proptest! {
        #[test]
        fn even_frequencies_are_pi_periodic(
            vals in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..8),
            lo in -6i64..6,
            t in -PI..0.0,
        ) {
            let x = LateralSequence::from_pairs(
                vals.into_iter().enumerate().map(|(k, (a, b))| (2 * (lo + k as i64), Complex64::new(a, b))),
            );
            let d = trig_eval(&x, t + PI) - trig_eval(&x, t);
            prop_assert!(d.norm() <= 1e-12 * (1.0 + x.l1_norm()));
        }

        #[test]
        fn real_sequences_are_conjugate_symmetric(
            vals in prop::collection::vec(-2.0f64..2.0, 1..10),
            lo in -8i64..8,
            t in -PI..PI,
        ) {
            let x = LateralSequence::from_real(lo, &vals);
            let d = trig_eval(&x, -t) - trig_eval(&x, t).conj();
            prop_assert!(d.norm() <= 1e-12 * (1.0 + x.l1_norm()));
        }
    }
}
