use crate::error::{invalid, Result};

/// Parameters of one repeated-interaction process.
///
/// `potential` is the matrix element V (a probability amplitude in `[0, 1]`),
/// `energy` the propagating level ε_k, `energy_chain` the ordered levels
/// visited by an open-oyster chain, `delta_t` the interval `t - t0`, `reps`
/// the repetition count n and `delta` the damping infinitesimal δ.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionSpec {
    pub potential: f64,
    pub energy: f64,
    pub energy_chain: Vec<f64>,
    pub delta_t: f64,
    pub reps: u32,
    pub delta: f64,
}

impl InteractionSpec {
    pub const DEFAULT_DELTA: f64 = 1e-3;

    pub fn new(
        potential: f64,
        energy: f64,
        energy_chain: Vec<f64>,
        delta_t: f64,
        reps: u32,
        delta: f64,
    ) -> Result<Self> {
        let spec = Self {
            potential,
            energy,
            energy_chain,
            delta_t,
            reps,
            delta,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Bubble-process parameters: no energy chain, default δ.
    pub fn bubble(potential: f64, energy: f64, delta_t: f64, reps: u32) -> Result<Self> {
        Self::new(potential, energy, Vec::new(), delta_t, reps, Self::DEFAULT_DELTA)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.potential) {
            return Err(invalid("potential", format!("{} is outside [0, 1]", self.potential)));
        }
        if !self.energy.is_finite() {
            return Err(invalid("energy", "must be finite"));
        }
        if self.energy_chain.iter().any(|e| !e.is_finite()) {
            return Err(invalid("energy_chain", "levels must be finite"));
        }
        if !(self.delta_t >= 0.0 && self.delta_t.is_finite()) {
            return Err(invalid("delta_t", format!("{} must be finite and >= 0", self.delta_t)));
        }
        if self.reps < 1 {
            return Err(invalid("reps", "must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(invalid("delta", format!("{} must be finite and > 0", self.delta)));
        }
        Ok(())
    }

    pub fn with_reps(&self, reps: u32) -> Result<Self> {
        let mut next = self.clone();
        next.reps = reps;
        next.validate()?;
        Ok(next)
    }
}
