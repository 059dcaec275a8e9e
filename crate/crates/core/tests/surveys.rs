use lpflux::bilinear::{inequality_report, paraproduct_residual, paraproduct_split, EnsembleSpec, INEQUALITY_NAMES};
use lpflux::constructions::{eyink_energy_field, random_spectrum_field, EnvelopeVariant};
use lpflux::triad::triad_sparsity;
use lpflux::{make_chi_profile, make_filter_bank, Grid};

#[test]
fn eyink_triad_census_is_independent_of_q() {
    let g = Grid::new(3, &[64, 64, 4], 1).unwrap();
    let bank = make_filter_bank(g, make_chi_profile()).unwrap();
    let u = eyink_energy_field(g, 1, 4, EnvelopeVariant::Torus).unwrap();
    let reports: Vec<_> = (1..=3).map(|q| triad_sparsity(&u, q, &bank).unwrap()).collect();
    for r in &reports {
        println!(
            "Q = {}: {} contributing of {} candidate triads",
            r.q, r.contributing, r.candidates
        );
        assert!(r.contributing > 0);
        assert!(r.contributing < r.candidates);
    }
    assert!(reports.windows(2).all(|w| w[0].contributing == w[1].contributing));
}

#[test]
fn inequality_constants_are_stable_across_grids() {
    let spec = EnsembleSpec {
        count: 1,
        seed: 11,
        profile: vec![1.0, 1.0, 1.0],
    };
    let reports: Vec<_> = [32usize, 64]
        .iter()
        .map(|&n| {
            let g = Grid::new(3, &[n; 3], 1).unwrap();
            inequality_report(&spec, &make_filter_bank(g, make_chi_profile()).unwrap()).unwrap()
        })
        .collect();
    for name in INEQUALITY_NAMES {
        let (a, b) = (reports[0].get(name).unwrap(), reports[1].get(name).unwrap());
        println!("{name}: N=32 {:.6e}, N=64 {:.6e}", a.max_ratio, b.max_ratio);
        assert!(a.max_ratio.is_finite() && a.max_ratio > 0.0);
        assert!((a.max_ratio / b.max_ratio - 1.0).abs() <= 0.2, "{name}");
    }
}

/// The split is measured, not asserted: only the lowest blocks are exact.
#[test]
fn paraproduct_residual_report() {
    let g = Grid::new(3, &[32; 3], 1).unwrap();
    let bank = make_filter_bank(g, make_chi_profile()).unwrap();
    let u = random_spectrum_field(g, &[1.0, 1.0, 1.0], 1).unwrap();
    let v = random_spectrum_field(g, &[1.0, 1.0, 1.0], 2).unwrap();
    for q in -1..=bank.q_max() {
        let split = paraproduct_split(&u, &v, q, &bank).unwrap();
        let r = paraproduct_residual(&u, &v, &split, &bank).unwrap();
        println!("q = {q}: relative residual {r:.3e}");
        assert!(r.is_finite());
        if q == -1 {
            assert!(r <= 1e-8);
        }
    }
}
