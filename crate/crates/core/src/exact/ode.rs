//! Dormand-Prince 5(4) embedded pair with proportional step-size control.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    /// Steps smaller than `h_min_rel * max(1, |t|)` count as underflow.
    pub h_min_rel: f64,
    pub max_steps: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions { rtol: 1e-10, atol: 1e-14, h_init: 1e-4, h_min_rel: 1e-15, max_steps: 2_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Reached,
    /// The stop predicate returned true on an accepted state.
    Event,
    StepUnderflow,
    NonFinite,
    MaxSteps,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `t0` to `t_end`, recording every accepted step.
///
/// `stop` is checked after each accepted step; `project` may adjust an
/// accepted state (e.g. clip a component onto an invariant set).
pub fn integrate<const N: usize, F, S, P>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &AdaptiveOptions,
    stop: S,
    project: P,
) -> (Vec<(f64, [f64; N])>, StopReason)
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    S: Fn(f64, &[f64; N]) -> bool,
    P: Fn(&mut [f64; N]),
{
    let mut out = vec![(t0, y0)];
    let mut t = t0;
    let mut y = y0;
    let mut h = opts.h_init.min(t_end - t0);
    if t_end <= t0 {
        return (out, StopReason::Reached);
    }
    if stop(t, &y) {
        return (out, StopReason::Event);
    }
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, &y);
    let mut steps = 0usize;
    loop {
        if steps >= opts.max_steps {
            return (out, StopReason::MaxSteps);
        }
        if h < opts.h_min_rel * t.abs().max(1.0) {
            return (out, StopReason::StepUnderflow);
        }
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            k[s] = f(t + C[s] * h, &ys);
        }
        let mut y_new = y;
        for i in 0..N {
            let mut acc = 0.0;
            for s in 0..6 {
                acc += A[6][s] * k[s][i];
            }
            y_new[i] += h * acc;
        }
        let mut err = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for s in 0..7 {
                e += E[s] * k[s][i];
            }
            let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err += (h * e / scale).powi(2);
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            // shrink and retry; repeated failure ends in underflow
            h *= 0.1;
            steps += 1;
            if h < opts.h_min_rel * t.abs().max(1.0) {
                return (out, StopReason::NonFinite);
            }
            continue;
        }
        steps += 1;
        if err <= 1.0 {
            t = if last { t_end } else { t + h };
            y = y_new;
            project(&mut y);
            out.push((t, y));
            if stop(t, &y) {
                return (out, StopReason::Event);
            }
            if last {
                return (out, StopReason::Reached);
            }
            // FSAL: the seventh stage is f at the new point unless projected
            k[0] = f(t, &y);
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let (path, why) = integrate(
            |_, y: &[f64; 1]| [-y[0]],
            0.0,
            [1.0],
            3.0,
            &AdaptiveOptions::default(),
            |_, _| false,
            |_| {},
        );
        assert_eq!(why, StopReason::Reached);
        let (t, y) = *path.last().unwrap();
        assert_eq!(t, 3.0);
        assert!((y[0] - (-3f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let (path, _) = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            0.0,
            [1.0, 0.0],
            20.0,
            &AdaptiveOptions::default(),
            |_, _| false,
            |_| {},
        );
        for (t, y) in path {
            assert!((y[0] - t.cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn finite_time_pole_underflows_or_stops() {
        // y' = y^2, y(0) = 1 has a pole at t = 1
        let (path, why) = integrate(
            |_, y: &[f64; 1]| [y[0] * y[0]],
            0.0,
            [1.0],
            2.0,
            &AdaptiveOptions::default(),
            |_, y| y[0] > 1e8,
            |_| {},
        );
        assert_eq!(why, StopReason::Event);
        let (t, _) = *path.last().unwrap();
        assert!(t < 1.0 && t > 1.0 - 1e-7);
    }
}
