use std::fmt::Write as _;
use std::str::FromStr;

use serde::Deserialize;

use super::RunConfig;
use crate::dynamics::{add_bark_noise, simulate_y_oscillator, synth_track, OscillatorParams, SimState};
use crate::error::{Error, Result};
use crate::num::fmt_g17;
use crate::tenseness::MS_PER_DS;

/// Prescribed Bark acceleration `a(t)`, t in ds from the track start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AccelSpec {
    /// `a(t) = α`.
    Const(f64),
    /// `a(t) = α + β·t`.
    Linear(f64, f64),
}

impl AccelSpec {
    pub fn at(&self, t_ds: f64) -> f64 {
        match *self {
            Self::Const(a) => a,
            Self::Linear(a, b) => a + b * t_ds,
        }
    }
}

impl FromStr for AccelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("accel `{s}`: expected `const:α` or `linear:α,β`"));
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<f64> = args
            .split(',')
            .map(|v| v.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
            .collect::<Option<_>>()
            .ok_or_else(bad)?;
        match (kind.trim(), nums.as_slice()) {
            ("const", [a]) => Ok(Self::Const(*a)),
            ("linear", [a, b]) => Ok(Self::Linear(*a, *b)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorSpec {
    pub p: f64,
    #[serde(default)]
    pub y0: f64,
    #[serde(default)]
    pub y_start: f64,
    #[serde(default)]
    pub vy_start: f64,
    /// Defaults to the run's `mass_m`.
    pub mass: Option<f64>,
}

/// A TOML simulation scenario.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub accel: String,
    pub z_start: f64,
    #[serde(default)]
    pub zslope_start: f64,
    pub duration_ms: f64,
    #[serde(default = "default_frame_step")]
    pub frame_step_ms: f64,
    #[serde(default)]
    pub noise_sigma: f64,
    /// Falls back to the run seed.
    pub seed: Option<u64>,
    pub oscillator: Option<OscillatorSpec>,
}

fn default_frame_step() -> f64 {
    1.0
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(format!("scenario: {}", e.message())))
    }
}

/// Runs a scenario and returns a track CSV readable by the analyzer. With an
/// oscillator, `y_cm` and `vy` columns follow the track columns.
pub fn run_simulate(scenario_text: &str, config: &RunConfig) -> Result<String> {
    let sc: Scenario = scenario_text.parse()?;
    let accel: AccelSpec = sc.accel.parse()?;
    let mut track = synth_track(|t| accel.at(t), sc.z_start, sc.zslope_start, sc.duration_ms, sc.frame_step_ms)?;
    let seed = sc.seed.unwrap_or(config.seed);
    if sc.noise_sigma > 0.0 {
        track = add_bark_noise(&track, sc.noise_sigma, seed)?;
    }
    let mut out = String::new();
    let _ = writeln!(out, "# accel,{}", sc.accel);
    let _ = writeln!(out, "# z_start,{}", fmt_g17(sc.z_start));
    let _ = writeln!(out, "# zslope_start,{}", fmt_g17(sc.zslope_start));
    let _ = writeln!(out, "# noise_sigma,{}", fmt_g17(sc.noise_sigma));
    let _ = writeln!(out, "# seed,{seed}");
    let _ = writeln!(out, "# config_hash,{}", config.hash());
    let body = track.to_csv();
    let Some(osc) = &sc.oscillator else {
        out.push_str(&body);
        return Ok(out);
    };
    let params = OscillatorParams::new(osc.p, osc.y0)?;
    let mass = osc.mass.unwrap_or(config.mass_m);
    let init = SimState { y_cm: osc.y_start, vy: osc.vy_start, ..SimState::default() };
    let ys = simulate_y_oscillator(&params, mass, &init, sc.duration_ms / MS_PER_DS, sc.frame_step_ms / MS_PER_DS)?;
    if ys.len() != track.len() {
        return Err(Error::Simulation {
            t: sc.duration_ms / MS_PER_DS,
            msg: format!("oscillator grid has {} samples, track {}", ys.len(), track.len()),
        });
    }
    let _ = writeln!(out, "# oscillator_period_ds,{}", fmt_g17(params.period(mass)));
    let mut lines = body.lines();
    let _ = writeln!(out, "{},y_cm,vy", lines.next().expect("header"));
    for (line, y) in lines.zip(&ys) {
        let _ = writeln!(out, "{line},{},{}", fmt_g17(y.y), fmt_g17(y.vy));
    }
    Ok(out)
}
