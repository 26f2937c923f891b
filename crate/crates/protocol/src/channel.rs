use crate::ModelError;

/// Loss-independent detector parameters of the link.
///
/// `y0` is the background click probability per pulse (dark counts plus
/// stray light), `e_det` the misalignment error probability of a detected
/// signal photon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    y0: f64,
    e_det: f64,
}

impl ChannelModel {
    pub fn new(y0: f64, e_det: f64) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&y0) || !y0.is_finite() {
            return Err(ModelError::BadBackgroundYield(y0));
        }
        if !(0.0..=0.5).contains(&e_det) || !e_det.is_finite() {
            return Err(ModelError::BadMisalignment(e_det));
        }
        Ok(Self { y0, e_det })
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub fn e_det(&self) -> f64 {
        self.e_det
    }

    /// Click probability for an `n`-photon signal at transmittance `eta`,
    /// assuming independent photon losses and background counts:
    /// `min(1, y0 + 1 − (1−η)ⁿ)`.
    pub fn yield_n(&self, eta: f64, n: usize) -> f64 {
        (self.y0 + transmitted_fraction(eta, n)).min(1.0)
    }

    /// Error rate of an `n`-photon signal conditioned on a click. Background
    /// clicks are random (error 1/2), detected photons err with `e_det`.
    /// When nothing ever clicks the conditional error is defined as 1/2.
    pub fn error_n(&self, eta: f64, n: usize) -> f64 {
        let t = transmitted_fraction(eta, n);
        let denom = self.y0 + t;
        if denom == 0.0 {
            0.5
        } else {
            (self.e_det * t + self.y0 / 2.0) / denom
        }
    }
}

fn transmitted_fraction(eta: f64, n: usize) -> f64 {
    1.0 - (1.0 - eta).powi(n as i32)
}

/// Convert a total loss figure in dB to a transmittance.
pub fn transmittance_from_db(total_db: f64) -> f64 {
    10f64.powf(-total_db / 10.0)
}

pub fn db_from_transmittance(eta: f64) -> f64 {
    -10.0 * eta.log10()
}

/// Total loss budget for a fiber of length `km`: attenuation plus the
/// detector's quantum efficiency folded in as extra loss.
pub fn total_db_for_distance(km: f64, alpha_db_per_km: f64, detector_efficiency: f64) -> f64 {
    alpha_db_per_km * km - 10.0 * detector_efficiency.log10()
}

pub fn distance_for_total_db(total_db: f64, alpha_db_per_km: f64, detector_efficiency: f64) -> f64 {
    (total_db + 10.0 * detector_efficiency.log10()) / alpha_db_per_km
}
