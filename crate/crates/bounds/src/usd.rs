//! Truncation of the photon-number sum by the unambiguous-discrimination
//! attack.
//!
//! An `n`-photon four-state signal can be unambiguously identified with
//! some probability; when channel losses are deep enough, an eavesdropper
//! can measure every pulse, forward a perfect copy on success, and hide her
//! failures inside the expected loss. Signals for which that works carry no
//! key, so they are dropped from the sum (recorded with weight λ = 1).

/// Probability of unambiguously discriminating the four `n`-photon
/// signal states. Zero through n = 2, then 1 − 2^{1−n/2} for even n and
/// 1 − 2^{(1−n)/2} for odd n.
pub fn usd_success_probability(n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let exponent = if n % 2 == 0 {
        1.0 - n as f64 / 2.0
    } else {
        (1.0 - n as f64) / 2.0
    };
    1.0 - 2f64.powf(exponent)
}

/// Transmittance below which the attack reproduces the expected yield of
/// `n`-photon signals: 1 − (1 − P_usd)^(1/n). Not monotone in n: odd
/// photon numbers discriminate better per photon than the following even
/// one.
pub fn usd_eta_threshold(n: usize) -> f64 {
    assert!(n >= 1, "threshold needs a photon");
    1.0 - (1.0 - usd_success_probability(n)).powf(1.0 / n as f64)
}

/// Whether `n`-photon signals can contribute key at transmittance `eta`.
pub fn usd_allowed(eta: f64, n: usize) -> bool {
    n >= 1 && eta > usd_eta_threshold(n)
}

/// Largest photon number up to `cap` that survives the attack; 0 when none
/// does. The allowed set need not be contiguous, so callers filtering terms
/// should test each n with [`usd_allowed`] rather than cut at this value.
pub fn usd_max_allowed(eta: f64, cap: usize) -> usize {
    (1..=cap).filter(|&n| usd_allowed(eta, n)).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn success_probabilities() {
        assert_eq!(usd_success_probability(1), 0.0);
        assert_eq!(usd_success_probability(2), 0.0);
        assert_abs_diff_eq!(usd_success_probability(3), 0.5);
        assert_abs_diff_eq!(usd_success_probability(4), 0.5);
        assert_abs_diff_eq!(usd_success_probability(5), 0.75);
        assert_abs_diff_eq!(usd_success_probability(6), 0.75);
    }

    #[test]
    fn thresholds_are_not_monotone() {
        assert_eq!(usd_eta_threshold(1), 0.0);
        assert_eq!(usd_eta_threshold(2), 0.0);
        assert_abs_diff_eq!(usd_eta_threshold(3), 1.0 - 0.5f64.powf(1.0 / 3.0), epsilon = 1e-15);
        assert_abs_diff_eq!(usd_eta_threshold(4), 1.0 - 0.5f64.powf(0.25), epsilon = 1e-15);
        // 5 needs more transmittance than 6
        assert!(usd_eta_threshold(5) > usd_eta_threshold(6));
        // thresholds approach 1 − 2^(−1/2) from below
        let lim = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
        for n in 3..60 {
            assert!(usd_eta_threshold(n) < lim);
        }
        assert!(usd_eta_threshold(59) > lim - 1e-2);
    }

    #[test]
    fn allowed_sets_can_have_holes() {
        let allowed: Vec<usize> = (1..=8).filter(|&n| usd_allowed(0.22, n)).collect();
        assert_eq!(allowed, vec![1, 2, 3, 4, 6]);
        assert_eq!(usd_max_allowed(0.22, 8), 6);

        let low: Vec<usize> = (1..=8).filter(|&n| usd_allowed(0.1, n)).collect();
        assert_eq!(low, vec![1, 2]);
        assert_eq!(usd_max_allowed(0.1, 8), 2);

        // above the limiting threshold nothing is ever excluded
        assert_eq!(usd_max_allowed(0.30, 25), 25);
        // and with no transmittance nothing survives
        assert_eq!(usd_max_allowed(0.0, 25), 0);
    }
}
