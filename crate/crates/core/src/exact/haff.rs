/// Temperature of the homogeneous cooling state.
///
/// Solves `dT/dt = -lambda * rho0 * T^(3/2)` exactly:
/// `T(t) = (lambda * rho0 * t / 2 + T0^(-1/2))^(-2)`.
pub fn haff_temperature(t: f64, rho0: f64, t0: f64, lambda: f64) -> f64 {
    let inv_sqrt = 0.5 * lambda * rho0 * t + t0.powf(-0.5);
    inv_sqrt.powi(-2)
}

/// Exact pressure after cooling for `dt` with density frozen:
/// solution of `dp/dt = -lambda * rho^(1/2) * p^(3/2)`.
#[inline]
pub fn cooled_pressure(rho: f64, p: f64, dt: f64, lambda: f64) -> f64 {
    if p <= 0.0 || lambda == 0.0 || dt == 0.0 {
        return p;
    }
    let inv_sqrt = 1.0 / p.sqrt() + 0.5 * lambda * rho.sqrt() * dt;
    1.0 / (inv_sqrt * inv_sqrt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Classical RK4 with a fine fixed step: independent of the closed form.
    fn integrate(rho0: f64, t0: f64, lambda: f64, t_end: f64, steps: usize) -> f64 {
        let f = |y: f64| -lambda * rho0 * y.max(0.0).powf(1.5);
        let h = t_end / steps as f64;
        let mut y = t0;
        for _ in 0..steps {
            let k1 = f(y);
            let k2 = f(y + 0.5 * h * k1);
            let k3 = f(y + 0.5 * h * k2);
            let k4 = f(y + h * k3);
            y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        y
    }

    #[test]
    fn examples() {
        assert_eq!(haff_temperature(0.0, 1.3, 2.5, 0.7), 2.5);
        assert_eq!(haff_temperature(10.0, 1.3, 2.5, 0.0), 2.5);
        let numeric = integrate(1.0, 1.0, 2.0, 1.0, 20_000);
        assert_relative_eq!(numeric, 0.25, max_relative = 1e-12);
        assert_relative_eq!(haff_temperature(1.0, 1.0, 1.0, 2.0), 0.25, max_relative = 1e-15);
    }

    #[test]
    fn satisfies_ode_by_central_difference() {
        let (rho0, t0, lambda) = (1.7, 0.8, 1.3);
        let h = 1e-4;
        for k in 1..50 {
            let t = 0.2 * k as f64;
            let d = (haff_temperature(t + h, rho0, t0, lambda)
                - haff_temperature(t - h, rho0, t0, lambda))
                / (2.0 * h);
            let rhs = -lambda * rho0 * haff_temperature(t, rho0, t0, lambda).powf(1.5);
            assert_relative_eq!(d, rhs, max_relative = 1e-6);
        }
    }

    #[test]
    fn monotone_non_increasing() {
        let mut prev = f64::INFINITY;
        for k in 0..200 {
            let v = haff_temperature(0.05 * k as f64, 2.0, 3.0, 0.4);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn cooled_pressure_matches_haff() {
        let (rho, p, lambda, dt) = (1.0, 1.0, 2.0, 1.0);
        assert_relative_eq!(cooled_pressure(rho, p, dt, lambda), 0.25, max_relative = 1e-15);
        assert_eq!(cooled_pressure(2.0, 0.0, 1.0, 1.0), 0.0);
        assert_eq!(cooled_pressure(2.0, 3.0, 0.0, 1.0), 3.0);
        // two half steps compose to one full step
        let half = cooled_pressure(1.3, 0.9, 0.25, 0.8);
        assert_relative_eq!(
            cooled_pressure(1.3, half, 0.25, 0.8),
            cooled_pressure(1.3, 0.9, 0.5, 0.8),
            max_relative = 1e-14
        );
    }
}
