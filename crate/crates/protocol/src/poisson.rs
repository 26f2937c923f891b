use crate::ModelError;

/// Photon-number distribution of a phase-randomized weak coherent source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Poisson {
    mu: f64,
}

impl Poisson {
    pub fn new(mu: f64) -> Result<Self, ModelError> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(ModelError::BadMeanPhotonNumber(mu));
        }
        Ok(Self { mu })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// P(n) computed by the stable recurrence r₀ = e^(−μ), rₙ = rₙ₋₁ μ/n.
    pub fn pmf(&self, n: usize) -> f64 {
        let mut r = (-self.mu).exp();
        for k in 1..=n {
            r *= self.mu / k as f64;
        }
        r
    }

    /// Weights 0..=n_max in one pass.
    pub fn pmf_upto(&self, n_max: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n_max + 1);
        let mut r = (-self.mu).exp();
        out.push(r);
        for k in 1..=n_max {
            r *= self.mu / k as f64;
            out.push(r);
        }
        out
    }
}
