//! Acceptance criteria 1 to 13, one PASS/FAIL line each.
//!
//! Criteria that the constructions do not meet are reported as FAIL without
//! failing the target; an internal error is reported the same way.

use std::time::{Duration, Instant};

use lpflux::besov::{dyadic_coefficients, lp_norm, DyadicCoefficients};
use lpflux::bilinear::{advective_term, divergence_growth, hodge_form, trilinear};
use lpflux::cli::run;
use lpflux::constructions::{
    enstrophy_nonlocal_field, enstrophy_nonlocal_partial, envelope_rho, eyink_energy_field, eyink_helicity_field,
    random_spectrum_field, EnvelopeParams, EnvelopeVariant,
};
use lpflux::flux::{
    energy_bound_from, enstrophy_bound, enstrophy_nonlocality_bound, helicity_bound_from, shell_identity_terms,
    TransferDensity,
};
use lpflux::io::{read_field, write_field};
use lpflux::littlewood_paley::{lambda, low_pass};
use lpflux::triad::{
    lemma_local_check, triad_energy_flux, triad_enstrophy_flux, triad_helicity_flux, triad_shell_flux,
};
use lpflux::{make_chi_profile, make_filter_bank, Field, FilterBank, Grid, Result, WaveVector};

const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn bank(g: Grid) -> Result<FilterBank> {
    make_filter_bank(g, make_chi_profile())
}

fn cube(n: usize, l: u32) -> Result<Grid> {
    Grid::new(3, &[n; 3], l)
}

fn within(elapsed: Duration, secs: u64) -> bool {
    elapsed <= Duration::from_secs(secs)
}

fn criterion_1(t: Instant) -> Result<Outcome> {
    let b = bank(cube(64, 1)?)?;
    let (res, dis) = (b.partition_residual(), b.disjointness_defect());
    let el = t.elapsed();
    outcome(
        res <= 1e-12 && dis == 0.0 && within(el, 5),
        format!("partition residual {res:.3e} (<= 1e-12), disjointness {dis:.3e} (== 0), {el:.2?} (< 5 s)"),
    )
}

fn criterion_2(t: Instant) -> Result<Outcome> {
    let g = cube(32, 1)?;
    let b = bank(g)?;
    let ones = vec![1.0; g.len()];
    let mut worst = 0.0f64;
    for seed in SEEDS {
        let u = random_spectrum_field(g, &[1.0, 0.9, 0.8], seed)?;
        let d = TransferDensity::energy(&u)?;
        let scale = d.abs_weighted(&ones);
        for q1 in 1..b.q_max() {
            for q0 in 1..=q1 {
                worst = worst.max(shell_identity_terms(&d, q0, q1, &b)?.0 / scale);
            }
        }
    }
    let el = t.elapsed();
    outcome(
        worst <= 1e-9 && within(el, 60),
        format!("max relative residual {worst:.3e} (<= 1e-9), {el:.2?} (< 60 s)"),
    )
}

/// Single low shell on `L = 2`: `|xi| < sqrt 2`, so `u (x) u` lives where `S_2` is the identity.
fn criterion_3(t: Instant) -> Result<Outcome> {
    let mut worst = 0.0f64;
    let g = cube(32, 2)?;
    let b = bank(g)?;
    let m = b.low_pass_multiplier(2)?;
    let ones = vec![1.0; g.len()];
    for seed in SEEDS {
        let u = random_spectrum_field(g, &[1.0], seed)?;
        for d in [TransferDensity::energy(&u)?, TransferDensity::helicity(&u)?] {
            worst = worst.max(d.weighted(&m).abs() / d.abs_weighted(&ones));
        }
    }
    let g = Grid::new(2, &[32, 32], 2)?;
    let b = bank(g)?;
    let m = b.low_pass_multiplier(2)?;
    let ones = vec![1.0; g.len()];
    for seed in SEEDS {
        let d = TransferDensity::enstrophy(&random_spectrum_field(g, &[1.0], seed)?)?;
        worst = worst.max(d.weighted(&m).abs() / d.abs_weighted(&ones));
    }
    let el = t.elapsed();
    outcome(
        worst <= 1e-10 && within(el, 30),
        format!("max flux / natural scale {worst:.3e} (<= 1e-10), {el:.2?} (< 30 s)"),
    )
}

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

fn criterion_4(t: Instant) -> Result<Outcome> {
    let g = cube(16, 1)?;
    let b = bank(g)?;
    let mut worst = 0.0f64;
    for seed in SEEDS {
        let u = random_spectrum_field(g, &[1.0, 0.7], seed)?;
        let de = TransferDensity::energy(&u)?;
        let dh = TransferDensity::helicity(&u)?;
        for q in 0..b.q_max() {
            let m = b.low_pass_multiplier(q)?;
            worst = worst.max(rel(
                de.weighted(&m),
                triad_energy_flux(&u, q, &b)?.value,
                de.abs_weighted(&m),
            ));
            worst = worst.max(rel(
                dh.weighted(&m),
                triad_helicity_flux(&u, q, &b)?.value,
                dh.abs_weighted(&m),
            ));
            for q0 in 0..=q {
                let m = if q0 == 0 {
                    b.low_pass_multiplier(q)?
                } else {
                    b.band_multiplier(q0, q)?
                };
                let t = triad_shell_flux(&u, q0, q, &b)?.value;
                worst = worst.max(rel(de.weighted(&m), t, de.abs_weighted(&m)));
            }
        }
    }
    let g = Grid::new(2, &[64, 64], 1)?;
    let b = bank(g)?;
    for seed in SEEDS {
        let u = random_spectrum_field(g, &[1.0, 0.9, 0.7], seed)?;
        let d = TransferDensity::enstrophy(&u)?;
        for q in 0..b.q_max() {
            let m = b.low_pass_multiplier(q)?;
            worst = worst.max(rel(
                d.weighted(&m),
                triad_enstrophy_flux(&u, q, &b)?.value,
                d.abs_weighted(&m),
            ));
        }
    }
    let el = t.elapsed();
    outcome(
        worst <= 1e-8 && within(el, 120),
        format!("max relative disagreement {worst:.3e} (<= 1e-8), {el:.2?} (< 120 s)"),
    )
}

/// Volume-normalized flux of a torus-variant field at each `Q`.
fn normalized_fluxes(u: &Field, d: &TransferDensity, qs: &[i32], b: &FilterBank) -> Result<Vec<f64>> {
    qs.iter()
        .map(|&q| Ok(d.weighted(&b.low_pass_multiplier(q)?) / u.grid().volume()))
        .collect()
}

fn criterion_5(t: Instant) -> Result<Outcome> {
    let g = Grid::new(3, &[512, 512, 4], 1)?;
    let b = bank(g)?;
    let u = eyink_energy_field(g, 2, 7, EnvelopeVariant::Torus)?;
    let pi = normalized_fluxes(&u, &TransferDensity::energy(&u)?, &[4, 5], &b)?;
    let el = t.elapsed();
    let floor = 4.0 * (1.0 - 1e-3);
    outcome(
        pi.iter().all(|&p| p >= floor) && within(el, 60),
        format!(
            "Pi_4 = {:.6}, Pi_5 = {:.6} (>= {floor}), {el:.2?} (< 60 s)",
            pi[0], pi[1]
        ),
    )
}

fn criterion_6(t: Instant) -> Result<Outcome> {
    let qs = [2, 3, 4];
    let gt = Grid::new(3, &[128, 128, 4], 1)?;
    let ut = eyink_energy_field(gt, 1, 5, EnvelopeVariant::Torus)?;
    let tilde = normalized_fluxes(&ut, &TransferDensity::energy(&ut)?, &qs, &bank(gt)?)?;
    let g = Grid::new(3, &[1024, 1024, 8], 8)?;
    let b = bank(g)?;
    let u = eyink_energy_field(g, 1, 5, EnvelopeVariant::Localized)?;
    let (_, a) = envelope_rho(&EnvelopeParams::new(EnvelopeVariant::Localized, g))?;
    let d = TransferDensity::energy(&u)?;
    let mut errs = Vec::new();
    for (&q, &pt) in qs.iter().zip(&tilde) {
        errs.push((d.weighted(&b.low_pass_multiplier(q)?) / a - pt).abs());
    }
    let factors: Vec<f64> = errs.windows(2).map(|w| w[0] / w[1]).collect();
    let el = t.elapsed();
    outcome(
        factors.iter().all(|f| (1.5..=3.0).contains(f)) && within(el, 300),
        format!(
            "|Pi_Q/A - tilde Pi_Q| for Q = 2,3,4: {:.3e}, {:.3e}, {:.3e}; decay factors {:.3}, {:.3} (in [1.5, 3]), {el:.2?} (< 5 min)",
            errs[0], errs[1], errs[2], factors[0], factors[1]
        ),
    )
}

fn criterion_7(t: Instant) -> Result<Outcome> {
    let g = Grid::new(3, &[512, 512, 4], 1)?;
    let b = bank(g)?;
    let u = eyink_helicity_field(g, 2, 7, EnvelopeVariant::Torus)?;
    let h = normalized_fluxes(&u, &TransferDensity::helicity(&u)?, &[4, 5], &b)?;
    let el = t.elapsed();
    outcome(
        h.iter().all(|x| x.abs() >= 3.6) && within(el, 60),
        format!(
            "|H_4| = {:.6}, |H_5| = {:.6} (>= 3.6), {el:.2?} (< 60 s)",
            h[0].abs(),
            h[1].abs()
        ),
    )
}

fn criterion_8(t: Instant) -> Result<Outcome> {
    let q_top = 6;
    let g = Grid::new(2, &[1024, 1024], 1)?;
    let b = bank(g)?;
    let m = b.low_pass_multiplier(q_top)?;
    let u = enstrophy_nonlocal_field(g, q_top, None)?;
    let omega = TransferDensity::enstrophy(&u)?.weighted(&m) / g.volume();
    let bound = enstrophy_nonlocality_bound(&u, q_top, &b)?;
    let mut cumulative = Vec::new();
    for last in 0..=q_top {
        let part = enstrophy_nonlocal_partial(g, q_top, last, None)?;
        cumulative.push(TransferDensity::enstrophy(&part)?.weighted(&m) / g.volume());
    }
    let monotone = cumulative[0] > 0.0 && cumulative.windows(2).all(|w| w[1] > w[0]);
    let el = t.elapsed();
    let ratio = omega / bound;
    let series: Vec<String> = cumulative.iter().map(|x| format!("{x:.3e}")).collect();
    outcome(
        ratio >= 0.5 && monotone && within(el, 120),
        format!(
            "Omega_6 / bound = {ratio:.4e} (>= 0.5); cumulative Omega_6 over q <= 0..6: [{}] (strictly increasing from 0: {monotone}), {el:.2?} (< 120 s)",
            series.join(", ")
        ),
    )
}

/// Largest flux/bound ratios `(energy, helicity, enstrophy)` over an ensemble on one grid size.
fn survey(n: usize, members: u64) -> Result<[f64; 3]> {
    let g = cube(n, 1)?;
    let b = bank(g)?;
    let g2 = Grid::new(2, &[n, n], 1)?;
    let b2 = bank(g2)?;
    let profile = [1.0, 0.8, 0.6];
    let mut worst = [0.0f64; 3];
    for seed in 0..members {
        let u = random_spectrum_field(g, &profile, 1000 + seed)?;
        let de = TransferDensity::energy(&u)?;
        let dh = TransferDensity::helicity(&u)?;
        let d = dyadic_coefficients(&u, 1.0 / 3.0, 3.0, &b)?;
        // b_q = lambda_q^{2/3} ||Delta_q u||_3 = lambda_q^{1/3} d_q
        let bq = DyadicCoefficients::from_values(2.0 / 3.0, 3.0, d.iter().map(|(q, x)| x * lambda(q).cbrt()).collect());
        for q in 0..b.q_max() {
            let m = b.low_pass_multiplier(q)?;
            worst[0] = worst[0].max(de.weighted(&m).abs() / energy_bound_from(&d, q));
            worst[1] = worst[1].max(dh.weighted(&m).abs() / helicity_bound_from(&bq, q));
        }
        let u2 = random_spectrum_field(g2, &profile, 1000 + seed)?;
        let dz = TransferDensity::enstrophy(&u2)?;
        for q in 0..b2.q_max() {
            let m = b2.low_pass_multiplier(q)?;
            worst[2] = worst[2].max(dz.weighted(&m).abs() / enstrophy_bound(&u2, q, &b2)?);
        }
    }
    Ok(worst)
}

fn criterion_9(t: Instant) -> Result<Outcome> {
    let small = survey(32, 50)?;
    let large = survey(64, 50)?;
    let names = ["energy", "helicity", "enstrophy"];
    let mut pass = within(t.elapsed(), 600);
    let mut parts = Vec::new();
    for i in 0..3 {
        let drift = large[i] / small[i] - 1.0;
        pass &= small[i].is_finite() && large[i].is_finite() && drift.abs() <= 0.2;
        parts.push(format!(
            "{} {:.4e} vs {:.4e} ({:+.2}%)",
            names[i],
            small[i],
            large[i],
            100.0 * drift
        ));
    }
    let el = t.elapsed();
    outcome(
        pass,
        format!(
            "max |flux|/bound at 32 vs 64: {} (within 20%), {el:.2?} (< 10 min)",
            parts.join("; ")
        ),
    )
}

fn criterion_10(t: Instant) -> Result<Outcome> {
    // 2048 points along x are the fewest that resolve lambda_6 on L = 8
    let g = Grid::new(3, &[2048, 16, 16], 8)?;
    let s = divergence_growth(g, 6, 1)?;
    let mut strict = true;
    let mut close = true;
    let mut ratios = Vec::new();
    for w in s.points.windows(2) {
        let inc = w[1].value - w[0].value;
        if w[1].n >= 2 {
            strict &= inc > 0.0;
        }
        if w[1].n >= 3 {
            let r = inc * w[1].n as f64 / s.a;
            ratios.push(format!("{r:.4}"));
            close &= (r - 1.0).abs() <= 0.15;
        }
    }
    let el = t.elapsed();
    outcome(
        strict && close && within(el, 300),
        format!(
            "strictly increasing n = 2..6: {strict}; increment / (A/n) for n = 3..6: [{}] (within 15% of 1), {el:.2?} (< 5 min)",
            ratios.join(", ")
        ),
    )
}

fn criterion_11(_t: Instant) -> Result<Outcome> {
    let g = cube(32, 1)?;
    let b = bank(g)?;
    let (mut forms, mut skew, mut flux) = (0.0f64, 0.0f64, 0.0f64);
    for seed in SEEDS {
        let u = random_spectrum_field(g, &[1.0, 0.9, 0.8], seed)?;
        let v = random_spectrum_field(g, &[1.0, 0.9, 0.8], seed + 100)?;
        let a = advective_term(&u, &v)?;
        let h = hodge_form(&u, &v)?;
        let an = lp_norm(&a, 2.0)?;
        forms = forms.max(lp_norm(&a.sub(&h)?, 2.0)? / an);
        skew = skew.max(trilinear(&u, &v, &v)?.abs() / (an * lp_norm(&v, 2.0)?));
        let d = TransferDensity::energy(&u)?;
        for q in 0..b.q_max() {
            let m = b.low_pass_multiplier(q)?;
            let s2u = low_pass(&low_pass(&u, q, &b)?, q, &b)?;
            flux = flux.max(rel(d.weighted(&m), -trilinear(&u, &u, &s2u)?, d.abs_weighted(&m)));
        }
    }
    outcome(
        forms <= 1e-10 && skew <= 1e-10 && flux <= 1e-9,
        format!("advective vs Hodge {forms:.3e} (<= 1e-10); <B(u,v),v> {skew:.3e} (<= 1e-10); Pi_Q vs -<B(u,u),S_Q^2 u> {flux:.3e} (<= 1e-9)"),
    )
}

fn criterion_12(_t: Instant) -> Result<Outcome> {
    let g = Grid::new(3, &[128, 32, 32], 8)?;
    let b = bank(g)?;
    let (rho, _) = envelope_rho(&EnvelopeParams::new(EnvelopeVariant::Localized, g))?;
    let r = rho.spectral()[0].clone();
    let phi = Field::from_spectral(g, vec![r.clone(), r, vec![Default::default(); g.len()]])?;
    let mut holds = true;
    let mut first = Vec::new();
    let mut parts = Vec::new();
    for m in [8, 16] {
        let k = WaveVector::new([m, 0, 0], 8);
        for q in [0, 1] {
            let rep = lemma_local_check(&phi, k, q, &b)?;
            holds &= rep.holds;
            parts.push(format!(
                "k = {m}/8, Q = {q}: {:.3e} < {:.3e}, {:.3e} < {:.3e}",
                rep.first_error, rep.first_bound, rep.second_error, rep.second_bound
            ));
            if q == 0 {
                first.push(rep.first_error);
            }
        }
    }
    let decay = first[0] / first[1];
    let rate_ok = (1.0..=4.0).contains(&decay);
    outcome(
        holds && rate_ok,
        format!(
            "{}; first-error ratio for doubled |k| {decay:.3} (1/|k| rate 2, within factor 2)",
            parts.join("; ")
        ),
    )
}

fn criterion_13(_t: Instant) -> Result<Outcome> {
    let mut exact = true;
    for (n, l) in [(16usize, 1u32), (32, 2)] {
        let u = random_spectrum_field(cube(n, l)?, &[1.0, 0.5], 7)?;
        for f in [u.clone(), u.to_physical()?] {
            let mut buf = Vec::new();
            write_field(&f, &mut buf)?;
            exact &= read_field(buf.as_slice())? == f;
        }
    }
    let dir = std::env::temp_dir().join(format!("lpflux-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = |s: &str| dir.join(s).to_string_lossy().into_owned();
    let mut identical = true;
    for (field, out) in [("a.lpf", "a.csv"), ("b.lpf", "b.csv")] {
        let gen = [
            "lpflux",
            "generate",
            "--example",
            "random",
            "--n",
            "16",
            "--q-lo",
            "0",
            "--q-hi",
            "1",
            "--seed",
            "42",
            "--out",
        ];
        let code = run(gen.iter().map(|s| s.to_string()).chain([path(field)]));
        let flux = ["lpflux", "flux", "--kind", "energy", "--q-range", "0..1", "--in"];
        let code2 = run(flux
            .iter()
            .map(|s| s.to_string())
            .chain([path(field), "--out".into(), path(out)]));
        identical &= code == 0 && code2 == 0;
    }
    identical &= std::fs::read(path("a.lpf"))? == std::fs::read(path("b.lpf"))?;
    identical &= std::fs::read(path("a.csv"))? == std::fs::read(path("b.csv"))?;
    std::fs::remove_dir_all(&dir)?;
    outcome(
        exact && identical,
        format!("bit-exact round trips: {exact}; byte-identical CLI outputs: {identical}"),
    )
}

fn main() {
    type Criterion = fn(Instant) -> Result<Outcome>;
    let criteria: [(u32, &str, Criterion); 13] = [
        (1, "filter exactness", criterion_1),
        (2, "shell-flux identity", criterion_2),
        (3, "conservation degeneracy", criterion_3),
        (4, "oracle equivalence", criterion_4),
        (5, "energy lower bound", criterion_5),
        (6, "envelope error decay", criterion_6),
        (7, "helicity example", criterion_7),
        (8, "enstrophy infrared nonlocality", criterion_8),
        (9, "locality-bound survey", criterion_9),
        (10, "trilinear growth", criterion_10),
        (11, "bilinear consistency", criterion_11),
        (12, "local approximation bounds", criterion_12),
        (13, "IO determinism", criterion_13),
    ];
    let only: Option<u32> = std::env::var("LPFLUX_CRITERION").ok().and_then(|s| s.parse().ok());
    let mut passed = 0;
    let mut ran = 0;
    for (id, name, f) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        ran += 1;
        let (pass, detail) = match f(Instant::now()) {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        passed += pass as u32;
        println!(
            "criterion {id:>2} [{}] {name}: {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {passed}/{ran} criteria pass");
}
