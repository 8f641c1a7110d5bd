use rand::Rng;

use crate::error::{Error, Result};

fn check_probability(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("{p} is not a probability") })
    }
}

/// Depolarizing noise applied after every unitary gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntrinsicNoiseConfig {
    p: f64,
}

impl IntrinsicNoiseConfig {
    pub fn new(p: f64) -> Result<Self> {
        check_probability("physical_error_rate", p)?;
        Ok(Self { p })
    }

    pub fn noiseless() -> Self {
        Self { p: 0.0 }
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

impl Default for IntrinsicNoiseConfig {
    fn default() -> Self {
        Self { p: 0.01 }
    }
}

/// Radiation strike parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiationFaultConfig {
    pub gamma: f64,
    pub n_s: usize,
    pub n_spatial: usize,
    /// Physical qubit hit by the particle.
    pub root_qubit: usize,
    pub peak_probability: f64,
}

impl RadiationFaultConfig {
    pub fn at(root_qubit: usize) -> Self {
        Self { gamma: 10.0, n_s: 10, n_spatial: 1, root_qubit, peak_probability: 1.0 }
    }

    pub fn with_peak(mut self, peak: f64) -> Self {
        self.peak_probability = peak;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter { name: "gamma", reason: format!("{} must be > 0", self.gamma) });
        }
        if self.n_s == 0 {
            return Err(Error::InvalidParameter { name: "n_s", reason: "must be >= 1".into() });
        }
        if self.n_spatial == 0 {
            return Err(Error::InvalidParameter { name: "n_spatial", reason: "must be >= 1".into() });
        }
        check_probability("peak_probability", self.peak_probability)
    }
}

/// Single-qubit Pauli.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Draws one Pauli per qubit: identity with probability `1 - p`, otherwise
/// X, Y or Z with probability `p/3` each. Qubits are independent.
pub fn sample_depolarize<R: Rng + ?Sized>(p: f64, arity: usize, rng: &mut R) -> Vec<Pauli> {
    (0..arity).map(|_| sample_pauli(p, rng)).collect()
}

#[inline]
pub(crate) fn sample_pauli<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Pauli {
    if p <= 0.0 {
        return Pauli::I;
    }
    let u: f64 = rng.gen();
    if u >= p {
        return Pauli::I;
    }
    match rng.gen_range(0..3) {
        0 => Pauli::X,
        1 => Pauli::Y,
        _ => Pauli::Z,
    }
}

/// `T(t) = exp(-gamma t)` for normalized time `t` in `[0, 1]`.
pub fn temporal_decay(t: f64, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidParameter { name: "t", reason: format!("{t} outside [0, 1]") });
    }
    Ok((-gamma * t).exp())
}

/// Step approximation of [`temporal_decay`]: bin `k` of `n_s` takes the
/// value at its left edge `k / n_s`.
pub fn step_temporal_decay(k: usize, gamma: f64, n_s: usize) -> Result<f64> {
    if k >= n_s {
        return Err(Error::InvalidParameter { name: "time_bin", reason: format!("{k} not in 0..{n_s}") });
    }
    temporal_decay(k as f64 / n_s as f64, gamma)
}

/// `S(d) = n^2 / (d + n)^2`.
pub fn spatial_decay(d: usize, n_spatial: usize) -> f64 {
    let n = n_spatial as f64;
    n * n / ((d as f64 + n) * (d as f64 + n))
}

/// Reset probability of a qubit at graph distance `d` from the root during bin `k`.
pub fn fault_intensity(k: usize, d: usize, config: &RadiationFaultConfig) -> Result<f64> {
    config.validate()?;
    Ok(config.peak_probability * step_temporal_decay(k, config.gamma, config.n_s)? * spatial_decay(d, config.n_spatial))
}
