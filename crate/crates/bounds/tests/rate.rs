use bounds_engine::{rate_upper_bound, Mode, RateOptions};
use protocol_model::ChannelModel;

fn capped(n_cap: usize) -> RateOptions {
    RateOptions {
        n_cap,
        ..RateOptions::default()
    }
}

#[test]
fn noiseless_link_keeps_key() {
    let ch = ChannelModel::new(0.0, 0.0).unwrap();
    let bound = rate_upper_bound(Mode::TwoWay, &ch, 1.0, &capped(3)).unwrap();
    println!(
        "total={:.6} terms={:?}",
        bound.total_bits_per_pulse,
        bound
            .terms
            .iter()
            .map(|t| (t.n, t.lambda, t.mutual_info))
            .collect::<Vec<_>>()
    );
    assert!(bound.warnings.is_empty(), "{:?}", bound.warnings);
    assert!(!bound.hit_numerical_limit);
    // vacuum pulses never contribute
    assert_eq!(bound.terms[0].lambda, 1.0);
    assert_eq!(bound.terms[0].contribution, 0.0);
    // the single-photon term alone is weight 0.303 × 0.5 bits; its
    // remainder is read off the solved decomposition, so solver-level
    // noise is expected
    assert!(bound.terms[1].lambda < 1e-4, "{}", bound.terms[1].lambda);
    assert!((bound.terms[1].mutual_info - 0.5).abs() < 1e-6);
    assert!(bound.total_bits_per_pulse > 0.1);
}

#[test]
fn deep_loss_excludes_discriminable_photon_numbers() {
    let ch = ChannelModel::new(1.7e-6, 0.033).unwrap();
    let bound = rate_upper_bound(Mode::TwoWay, &ch, 0.1, &capped(6)).unwrap();
    assert!(bound.warnings.is_empty(), "{:?}", bound.warnings);
    assert_eq!(bound.terms.len(), 7);
    for t in &bound.terms {
        match t.n {
            0 => {
                assert!(!t.excluded_by_usd);
                assert_eq!(t.lambda, 1.0);
            }
            1 | 2 => {
                assert!(!t.excluded_by_usd, "n={}", t.n);
                assert!(t.iterations > 0, "n={}", t.n);
            }
            _ => {
                assert!(t.excluded_by_usd, "n={}", t.n);
                assert_eq!(t.lambda, 1.0);
                assert_eq!(t.contribution, 0.0);
                assert_eq!(t.iterations, 0);
            }
        }
    }
    assert!(bound.total_bits_per_pulse > 0.0);
}

#[test]
fn truncation_follows_the_weight_floor_and_the_cap() {
    let ch = ChannelModel::new(0.0, 0.01).unwrap();
    let opts = RateOptions {
        mu: 0.1,
        weight_floor: 1e-3,
        ..RateOptions::default()
    };
    let bound = rate_upper_bound(Mode::OneWayRr, &ch, 0.3, &opts).unwrap();
    // weights 0.905, 0.0905, 0.0045, then 1.5e-4 < 1e-3 stops the sum
    assert_eq!(bound.terms.len(), 3);
    assert_eq!(bound.terms.last().unwrap().n, 2);

    let hard_capped = rate_upper_bound(Mode::OneWayRr, &ch, 0.3, &RateOptions { n_cap: 1, ..opts })
        .unwrap();
    assert_eq!(hard_capped.terms.len(), 2);
}

#[test]
fn announcing_clicks_can_only_weaken_the_one_way_bound() {
    let ch = ChannelModel::new(1e-5, 0.03).unwrap();
    let opts = capped(2);
    // moderate loss: the unannounced bound is already near its cutoff
    // (the mostly-vacuum state extends easily), the announced one is not
    let plain = rate_upper_bound(Mode::OneWayDr, &ch, 0.5, &opts).unwrap();
    let announced = rate_upper_bound(Mode::OneWayDrAnnounced, &ch, 0.5, &opts).unwrap();
    println!(
        "plain={:.6} announced={:.6}",
        plain.total_bits_per_pulse, announced.total_bits_per_pulse
    );
    assert!(announced.total_bits_per_pulse > 0.0);
    assert!(
        announced.total_bits_per_pulse >= plain.total_bits_per_pulse - 5e-4,
        "{} vs {}",
        announced.total_bits_per_pulse,
        plain.total_bits_per_pulse
    );

    // at very low loss the unannounced bound is still positive
    let low_loss = rate_upper_bound(Mode::OneWayDr, &ch, 0.95, &opts).unwrap();
    println!("low-loss plain={:.6}", low_loss.total_bits_per_pulse);
    assert!(low_loss.total_bits_per_pulse > 0.0);
}

#[test]
fn opaque_link_carries_nothing() {
    let ch = ChannelModel::new(1e-4, 0.02).unwrap();
    let bound = rate_upper_bound(Mode::TwoWay, &ch, 0.0, &capped(10)).unwrap();
    assert_eq!(bound.total_bits_per_pulse, 0.0);
    for t in &bound.terms {
        assert_eq!(t.contribution, 0.0);
        if t.n >= 1 {
            assert!(t.excluded_by_usd);
        }
    }
}
