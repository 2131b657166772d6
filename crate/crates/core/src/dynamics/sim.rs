//! Fixed-step RK4 integration of the x-axis (tenseness force) and y-axis
//! (harmonic) mass-point models, plus trajectory synthesis for round trips.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::ingest::{FormantTrack, Frame};
use crate::num::{c, Real};
use crate::scales::{bark_to_hz, hz_to_bark, BARK_MAX, BARK_MIN};
use crate::tenseness::MS_PER_DS;

use super::ForceConstants;

/// State of the articulator mass point. `x` points down from the palate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SimState<T = f64> {
    pub x_cm: T,
    pub vx: T,
    pub y_cm: T,
    pub vy: T,
    pub t_ds: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XSample<T = f64> {
    pub t_ds: T,
    pub x: T,
    pub vx: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YSample<T = f64> {
    pub t_ds: T,
    pub y: T,
    pub vy: T,
}

/// Spring `p` pulling toward `y0`: `F_y = −p (y − y0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams<T = f64> {
    pub spring_p: T,
    pub equilibrium_y0: T,
}

impl<T: Real> OscillatorParams<T> {
    pub fn new(spring_p: T, equilibrium_y0: T) -> Result<Self> {
        if !spring_p.is_finite() || spring_p <= T::zero() || !equilibrium_y0.is_finite() {
            return Err(Error::Config(format!("spring constant must be positive, got {spring_p}")));
        }
        Ok(Self { spring_p, equilibrium_y0 })
    }

    pub fn period(&self, mass: T) -> T {
        c::<T>(2.0) * T::PI() * (mass / self.spring_p).sqrt()
    }
}

/// `½ m vy² + ½ p (y − y0)²`.
pub fn oscillator_energy<T: Real>(params: &OscillatorParams<T>, mass: T, y: T, vy: T) -> T {
    let half = c::<T>(0.5);
    half * mass * vy * vy + half * params.spring_p * (y - params.equilibrium_y0).powi(2)
}

/// Integrates `q̈ = accel(t, q, q̇)` from `t0` to `t_end`. The last step is
/// shortened to land on `t_end`. Returns every step including the start.
fn rk4<T: Real>(
    accel: impl Fn(T, T, T) -> T,
    t0: T,
    q0: T,
    v0: T,
    t_end: T,
    step: T,
) -> Result<Vec<(T, T, T)>> {
    if !(step > T::zero()) || !step.is_finite() {
        return Err(Error::Config(format!("step must be positive, got {step}")));
    }
    if !(t_end > t0) || !t_end.is_finite() {
        return Err(Error::Config(format!("end time {t_end} must exceed start time {t0}")));
    }
    let span = t_end - t0;
    let raw = (span / step).to_f64().unwrap_or(f64::INFINITY);
    if raw > 1e8 {
        return Err(Error::Config(format!("{raw:.0} steps requested; increase the step")));
    }
    // Absorb floating error so span = k·step gives exactly k steps.
    let n_steps = (raw - 1e-9).ceil().max(1.0) as usize;
    let half = c::<T>(0.5);
    let sixth = T::one() / c(6.0);
    let two = c::<T>(2.0);

    let mut out = Vec::with_capacity(n_steps + 1);
    let (mut q, mut v) = (q0, v0);
    out.push((t0, q, v));
    for i in 0..n_steps {
        let t = t0 + step * T::from_usize_lossy(i);
        let t_next = if i + 1 == n_steps { t_end } else { t0 + step * T::from_usize_lossy(i + 1) };
        let h = t_next - t;
        let a1 = accel(t, q, v);
        let (q2, v2) = (q + half * h * v, v + half * h * a1);
        let a2 = accel(t + half * h, q2, v2);
        let (q3, v3) = (q + half * h * v2, v + half * h * a2);
        let a3 = accel(t + half * h, q3, v3);
        let (q4, v4) = (q + h * v3, v + h * a3);
        let a4 = accel(t_next, q4, v4);
        q += h * sixth * (v + two * v2 + two * v3 + v4);
        v += h * sixth * (a1 + two * a2 + two * a3 + a4);
        if !q.is_finite() || !v.is_finite() {
            return Err(Error::Simulation { t: t_next.as_f64(), msg: "state became non-finite".into() });
        }
        out.push((t_next, q, v));
    }
    Ok(out)
}

/// x-axis model `m·k·ẍ = F(t)`, with no gravity or other loads.
pub fn simulate_x<T: Real>(
    force: impl Fn(T) -> T,
    constants: &ForceConstants<T>,
    init: &SimState<T>,
    t_end_ds: T,
    step_ds: T,
) -> Result<Vec<XSample<T>>> {
    if !init.x_cm.is_finite() || init.x_cm < T::zero() || !init.vx.is_finite() {
        return Err(Error::Config(format!("initial x must be finite and >= 0, got {}", init.x_cm)));
    }
    let mk = constants.mass_m * constants.coeff_k;
    let traj = rk4(|t, _, _| force(t) / mk, init.t_ds, init.x_cm, init.vx, t_end_ds, step_ds)?;
    Ok(traj.into_iter().map(|(t_ds, x, vx)| XSample { t_ds, x, vx }).collect())
}

/// y-axis model `m·ÿ = −p (y − y0)`.
pub fn simulate_y_oscillator<T: Real>(
    params: &OscillatorParams<T>,
    mass: T,
    init: &SimState<T>,
    t_end_ds: T,
    step_ds: T,
) -> Result<Vec<YSample<T>>> {
    if !mass.is_finite() || mass <= T::zero() {
        return Err(Error::Config(format!("mass must be positive, got {mass}")));
    }
    let p = *params;
    let traj = rk4(
        move |_, y, _| -p.spring_p * (y - p.equilibrium_y0) / mass,
        init.t_ds,
        init.y_cm,
        init.vy,
        t_end_ds,
        step_ds,
    )?;
    Ok(traj.into_iter().map(|(t_ds, y, vy)| YSample { t_ds, y, vy }).collect())
}

/// Builds an F1 track whose Bark trajectory is the double integral of
/// `accel` (Bark/ds², time in ds from the start), starting at `z_start` with
/// slope `zslope_start`. Frames fall every `frame_step_ms`, plus one at
/// `duration_ms` when the step does not divide it.
pub fn synth_track<T: Real>(
    accel: impl Fn(T) -> T,
    z_start: T,
    zslope_start: T,
    duration_ms: T,
    frame_step_ms: T,
) -> Result<FormantTrack<T>> {
    if !(frame_step_ms > T::zero()) || !(duration_ms > frame_step_ms) {
        return Err(Error::Config(format!(
            "need duration ({duration_ms} ms) > frame step ({frame_step_ms} ms) > 0"
        )));
    }
    let ms = c::<T>(MS_PER_DS);
    let traj = rk4(|t, _, _| accel(t), T::zero(), z_start, zslope_start, duration_ms / ms, frame_step_ms / ms)?;
    let mut frames = Vec::with_capacity(traj.len());
    for (i, (t_ds, z, _)) in traj.iter().enumerate() {
        let t_ms = if i + 1 == traj.len() { duration_ms } else { frame_step_ms * T::from_usize_lossy(i) };
        if !(*z > c(BARK_MIN) && *z < c(BARK_MAX)) {
            return Err(Error::Synthesis {
                t_ms: (*t_ds * ms).as_f64(),
                msg: format!("Z = {z} Bark leaves ({BARK_MIN}, {BARK_MAX})"),
            });
        }
        frames.push(Frame { f1_hz: Some(bark_to_hz(*z)?), ..Frame::new(t_ms) });
    }
    FormantTrack::new(frames, "synthetic")
}

/// Adds seeded Gaussian noise of `sigma_bark` to F1 in the Bark domain.
pub fn add_bark_noise<T: Real>(track: &FormantTrack<T>, sigma_bark: f64, seed: u64) -> Result<FormantTrack<T>> {
    if !(sigma_bark >= 0.0) {
        return Err(Error::Config(format!("noise sigma must be >= 0, got {sigma_bark}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma_bark).map_err(|e| Error::Config(e.to_string()))?;
    let mut frames = track.frames().to_vec();
    for fr in &mut frames {
        if let Some(f1) = fr.f1_hz {
            let z = hz_to_bark(f1)? + T::lit(normal.sample(&mut rng));
            fr.f1_hz = Some(bark_to_hz(z).map_err(|e| Error::Synthesis { t_ms: fr.time_ms.as_f64(), msg: e.to_string() })?);
        }
    }
    FormantTrack::new(frames, track.source_id())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn start(x: f64, vx: f64) -> SimState {
        SimState { x_cm: x, vx, ..Default::default() }
    }

    #[test]
    fn no_force_keeps_position() {
        let traj = simulate_x(|_| 0.0, &ForceConstants::unit(), &start(2.5, 0.0), 3.0, 0.1).unwrap();
        assert_eq!(traj.len(), 31);
        assert!(traj.iter().all(|s| s.x == 2.5 && s.vx == 0.0));
        assert!((traj.last().unwrap().t_ds - 3.0).abs() < 1e-15);
    }

    #[test]
    fn constant_force_kinematics() {
        let traj = simulate_x(|_| 0.8, &ForceConstants::unit(), &start(1.0, 0.3), 2.0, 0.05).unwrap();
        for s in traj {
            let want = 1.0 + 0.3 * s.t_ds + 0.4 * s.t_ds * s.t_ds;
            assert!((s.x - want).abs() < 1e-8);
        }
    }

    #[test]
    fn linear_force_gives_cubic() {
        let traj = simulate_x(|t| 6.0 * t, &ForceConstants::unit(), &start(0.5, -0.2), 2.0, 0.01).unwrap();
        for s in traj {
            let want = 0.5 - 0.2 * s.t_ds + s.t_ds.powi(3);
            assert!((s.x - want).abs() < 1e-8);
        }
    }

    #[test]
    fn mass_and_k_scale_acceleration() {
        let k = ForceConstants::new(2.0, 2.0).unwrap();
        let traj = simulate_x(|_| 4.0, &k, &start(0.0, 0.0), 1.0, 0.1).unwrap();
        assert!((traj.last().unwrap().x - 0.5).abs() < 1e-12);
    }

    #[test]
    fn uneven_step_lands_on_end() {
        let traj = simulate_x(|_| 1.0, &ForceConstants::unit(), &start(0.0, 0.0), 1.0, 0.3).unwrap();
        assert_eq!(traj.len(), 5);
        let last = traj.last().unwrap();
        assert_eq!(last.t_ds, 1.0);
        assert!((last.x - 0.5).abs() < 1e-12);
    }

    #[test]
    fn blow_up_reports_time() {
        let err = simulate_x(|t| 1e308 * (t + 1.0), &ForceConstants::unit(), &start(0.0, 1e308), 1.0, 0.1).unwrap_err();
        assert!(matches!(err, Error::Simulation { .. }), "{err:?}");
    }

    #[test]
    fn bad_arguments() {
        assert!(simulate_x(|_| 0.0, &ForceConstants::unit(), &start(0.0, 0.0), 1.0, 0.0).is_err());
        assert!(simulate_x(|_| 0.0, &ForceConstants::unit(), &start(0.0, 0.0), 0.0, 0.1).is_err());
        assert!(simulate_x(|_| 0.0, &ForceConstants::unit(), &start(-1.0, 0.0), 1.0, 0.1).is_err());
    }

    #[test]
    fn harmonic_period() {
        let p = OscillatorParams::new(4.0_f64, 0.0).unwrap();
        assert!((p.period(1.0) - PI).abs() < 1e-15);
        let init = SimState { y_cm: 1.0, ..Default::default() };
        let traj = simulate_y_oscillator(&p, 1.0, &init, PI, PI / 1000.0).unwrap();
        assert!((traj.last().unwrap().y - 1.0).abs() < 1e-6);
    }

    #[test]
    fn equilibrium_is_fixed() {
        let p = OscillatorParams::new(3.0, 0.7).unwrap();
        let init = SimState { y_cm: 0.7, ..Default::default() };
        let traj = simulate_y_oscillator(&p, 2.0, &init, 10.0, 0.01).unwrap();
        assert!(traj.iter().all(|s| s.y == 0.7 && s.vy == 0.0));
    }

    #[test]
    fn energy_and_amplitude_conserved_over_ten_periods() {
        let p = OscillatorParams::new(4.0_f64, 0.0).unwrap();
        let period = p.period(1.0);
        let init = SimState { y_cm: 1.0, ..Default::default() };
        let traj = simulate_y_oscillator(&p, 1.0, &init, 10.0 * period, period / 100.0).unwrap();
        let e0 = oscillator_energy(&p, 1.0, 1.0, 0.0);
        let drift = traj
            .iter()
            .map(|s| ((oscillator_energy(&p, 1.0, s.y, s.vy) - e0) / e0).abs())
            .fold(0.0, f64::max);
        assert!(drift < 1e-6, "{drift}");
        for k in 0..10 {
            let cycle = &traj[k * 100..=(k + 1) * 100];
            let amp = cycle.iter().map(|s| s.y.abs()).fold(0.0, f64::max);
            assert!((amp - 1.0).abs() < 1e-6, "period {k}: {amp}");
        }
    }

    #[test]
    fn synthesized_track_follows_double_integral() {
        let t = synth_track(|_| 0.8_f64, 5.0, -0.2, 300.0, 10.0).unwrap();
        assert_eq!(t.len(), 31);
        for fr in t.frames() {
            let s = fr.time_ms / 100.0;
            let z = hz_to_bark(fr.f1_hz.unwrap()).unwrap();
            assert!((z - (5.0 - 0.2 * s + 0.4 * s * s)).abs() < 1e-9);
        }
    }

    #[test]
    fn synthesis_partial_last_frame() {
        let t = synth_track(|_| 0.0, 5.0, 0.0, 25.0, 10.0).unwrap();
        let times: Vec<f64> = t.frames().iter().map(|f| f.time_ms).collect();
        assert_eq!(times, vec![0.0, 10.0, 20.0, 25.0]);
    }

    #[test]
    fn synthesis_leaving_bark_range_errors() {
        let err = synth_track(|_| 10.0, 20.0, 0.0, 500.0, 10.0).unwrap_err();
        assert!(matches!(err, Error::Synthesis { .. }), "{err:?}");
    }

    #[test]
    fn noise_is_seeded() {
        let t = synth_track(|_| 0.0, 5.0, 0.0, 100.0, 10.0).unwrap();
        let a = add_bark_noise(&t, 0.02, 7).unwrap();
        let b = add_bark_noise(&t, 0.02, 7).unwrap();
        let other = add_bark_noise(&t, 0.02, 8).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, other);
        assert_eq!(add_bark_noise(&t, 0.0, 1).unwrap(), t);
    }
}
