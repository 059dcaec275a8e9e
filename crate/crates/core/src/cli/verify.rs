//! Verification suites behind `lpflux verify`.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::besov::lp_norm;
use crate::bilinear::{advective_term, divergence_growth, hodge_form, trilinear};
use crate::constructions::{
    enstrophy_nonlocal_field, enstrophy_nonlocal_partial, eyink_energy_field, eyink_helicity_field,
    random_spectrum_field, EnvelopeVariant,
};
use crate::error::Result;
use crate::flux::{energy_bound, enstrophy_nonlocality_bound, FluxKind, TransferDensity};
use crate::littlewood_paley::{low_pass, make_chi_profile, make_filter_bank, FilterBank};
use crate::spectral::{Field, Grid};
use crate::triad::{triad_energy_flux, triad_enstrophy_flux, triad_helicity_flux, triad_shell_flux, triad_trilinear};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Oracle,
    Examples,
    Locality,
    Bilinear,
    All,
}

/// One verified quantity. `bound` is set for one-sided checks and
/// `expected` for two-sided ones; `tolerance` is relative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    pub tolerance: f64,
    pub relation: String,
    pub pass: bool,
}

impl Check {
    /// `measured <= bound (1 + tolerance)`.
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound: Some(bound),
            expected: None,
            tolerance,
            relation: "at_most".into(),
            pass: measured <= bound * (1.0 + tolerance),
        }
    }

    /// `measured >= bound (1 - tolerance)`.
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound: Some(bound),
            expected: None,
            tolerance,
            relation: "at_least".into(),
            pass: measured >= bound * (1.0 - tolerance),
        }
    }

    /// `|measured - expected| <= tolerance |expected|`.
    pub fn close(name: impl Into<String>, measured: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound: None,
            expected: Some(expected),
            tolerance,
            relation: "close".into(),
            pass: (measured - expected).abs() <= tolerance * expected.abs(),
        }
    }

    /// A finite measurement, reported against no bound.
    pub fn finite(name: impl Into<String>, measured: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound: None,
            expected: None,
            tolerance: 0.0,
            relation: "finite".into(),
            pass: measured.is_finite(),
        }
    }

    /// Turns a one-sided check into a strict comparison against `bound`.
    pub fn strict(mut self) -> Self {
        let b = self.bound.unwrap_or(0.0);
        match self.relation.as_str() {
            "at_least" => {
                self.relation = "greater".into();
                self.pass = self.measured > b;
            }
            "at_most" => {
                self.relation = "less".into();
                self.pass = self.measured < b;
            }
            _ => {}
        }
        self
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Identities => identities(seed)?,
        Suite::Oracle => oracle(seed)?,
        Suite::Examples => examples()?,
        Suite::Locality => locality(seed)?,
        Suite::Bilinear => bilinear(seed)?,
        Suite::All => {
            let mut all = identities(seed)?;
            all.extend(oracle(seed)?);
            all.extend(examples()?);
            all.extend(locality(seed)?);
            all.extend(bilinear(seed)?);
            all
        }
    })
}

fn cube(n: usize, l: u32) -> Result<(Grid, FilterBank)> {
    let g = Grid::new(3, &[n; 3], l)?;
    Ok((g, make_filter_bank(g, make_chi_profile())?))
}

fn square(n: usize, l: u32) -> Result<(Grid, FilterBank)> {
    let g = Grid::new(2, &[n; 2], l)?;
    Ok((g, make_filter_bank(g, make_chi_profile())?))
}

fn relative(a: f64, b: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        (a - b).abs()
    } else {
        (a - b).abs() / scale
    }
}

fn identities(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let (_, bank) = cube(64, 1)?;
    checks.push(Check::at_most(
        "partition_of_unity",
        bank.partition_residual(),
        1e-12,
        0.0,
    ));
    checks.push(Check::at_most(
        "support_disjointness",
        bank.disjointness_defect(),
        0.0,
        0.0,
    ));
    let mut worst = 0.0f64;
    for q1 in 1..=bank.q_max() {
        for q0 in 1..=q1 {
            worst = worst.max(crate::littlewood_paley::multiplier_identity_residual(q0, q1, &bank)?);
        }
    }
    checks.push(Check::at_most("shell_multiplier_identity", worst, 1e-12, 0.0));

    let (g, bank) = cube(32, 1)?;
    let u = random_spectrum_field(g, &[1.0, 1.0, 1.0], seed)?;
    let d = TransferDensity::energy(&u)?;
    let scale = d.abs_weighted(&vec![1.0; g.len()]);
    let mut worst = 0.0f64;
    for q1 in 1..bank.q_max() {
        for q0 in 1..=q1 {
            let (res, _) = crate::flux::shell_identity_terms(&d, q0, q1, &bank)?;
            worst = worst.max(res / scale);
        }
    }
    checks.push(Check::at_most("shell_flux_identity", worst, 1e-9, 0.0));
    Ok(checks)
}

/// Worst relative disagreement between the FFT pathway and the triad oracle.
fn oracle(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let (g, bank) = cube(16, 1)?;
    let u = random_spectrum_field(g, &[1.0, 0.5], seed)?;
    let de = TransferDensity::energy(&u)?;
    let dh = TransferDensity::helicity(&u)?;
    let (mut e, mut h, mut s) = (0.0f64, 0.0f64, 0.0f64);
    for q in 0..bank.q_max() {
        let m = bank.low_pass_multiplier(q)?;
        let t = triad_energy_flux(&u, q, &bank)?.value;
        e = e.max(relative(de.weighted(&m), t, de.abs_weighted(&m)));
        let t = triad_helicity_flux(&u, q, &bank)?.value;
        h = h.max(relative(dh.weighted(&m), t, dh.abs_weighted(&m)));
        for q0 in 0..=q {
            let m = if q0 == 0 {
                bank.low_pass_multiplier(q)?
            } else {
                bank.band_multiplier(q0, q)?
            };
            let t = triad_shell_flux(&u, q0, q, &bank)?.value;
            s = s.max(relative(de.weighted(&m), t, de.abs_weighted(&m)));
        }
    }
    checks.push(Check::at_most("oracle_energy_flux", e, 1e-8, 0.0));
    checks.push(Check::at_most("oracle_shell_flux", s, 1e-8, 0.0));
    checks.push(Check::at_most("oracle_helicity_flux", h, 1e-8, 0.0));

    let v = random_spectrum_field(g, &[1.0, 0.5], seed + 1)?;
    let w = random_spectrum_field(g, &[1.0, 0.5], seed + 2)?;
    let fft = trilinear(&u, &v, &w)?;
    let tri = triad_trilinear(&u, &v, &w)?.value;
    let scale = lp_norm(&u, 2.0)? * lp_norm(&v, 2.0)? * lp_norm(&w, 2.0)?;
    checks.push(Check::at_most("oracle_trilinear", relative(fft, tri, scale), 1e-8, 0.0));

    let (g, bank) = square(64, 1)?;
    let u = random_spectrum_field(g, &[1.0, 1.0, 0.5], seed)?;
    let dz = TransferDensity::enstrophy(&u)?;
    let mut z = 0.0f64;
    for q in 0..bank.q_max() {
        let m = bank.low_pass_multiplier(q)?;
        let t = triad_enstrophy_flux(&u, q, &bank)?.value;
        z = z.max(relative(dz.weighted(&m), t, dz.abs_weighted(&m)));
    }
    checks.push(Check::at_most("oracle_enstrophy_flux", z, 1e-8, 0.0));
    Ok(checks)
}

/// Normalized flux of an explicit family field at an interior `Q`.
fn family_flux(u: &Field, kind: FluxKind, q: i32, bank: &FilterBank) -> Result<f64> {
    let m = bank.low_pass_multiplier(q)?;
    Ok(TransferDensity::for_kind(u, kind)?.weighted(&m) / u.grid().volume())
}

fn examples() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let g = Grid::new(3, &[128, 128, 4], 1)?;
    let bank = make_filter_bank(g, make_chi_profile())?;
    let u = eyink_energy_field(g, 1, 5, EnvelopeVariant::Torus)?;
    let pi = family_flux(&u, FluxKind::Energy, 3, &bank)?;
    checks.push(Check::at_least("eyink_energy_flux_q3", pi, 4.0, 1e-3));
    let u = eyink_helicity_field(g, 1, 5, EnvelopeVariant::Torus)?;
    let h = family_flux(&u, FluxKind::Helicity, 3, &bank)?;
    checks.push(Check::at_least("eyink_helicity_flux_q3", h.abs(), 4.0, 0.1));

    let q_top = 3;
    let (g, bank) = square(128, 1)?;
    let u = enstrophy_nonlocal_field(g, q_top, None)?;
    let omega = family_flux(&u, FluxKind::Enstrophy, q_top, &bank)?;
    let bound = enstrophy_nonlocality_bound(&u, q_top, &bank)?;
    checks.push(Check::at_least("enstrophy_nonlocal_ratio", omega / bound, 0.5, 0.0));
    // with no low shell no triad straddles lambda_Q, so the flux starts from zero
    let mut prev = 0.0;
    for last in 0..=q_top {
        let partial = enstrophy_nonlocal_partial(g, q_top, last, None)?;
        let o = family_flux(&partial, FluxKind::Enstrophy, q_top, &bank)?;
        checks.push(Check::at_least(format!("enstrophy_cumulative_q{last}"), o, prev, 0.0).strict());
        prev = o;
    }
    Ok(checks)
}

fn locality(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    // one low shell on L = 2 keeps u (x) u inside the band where S_2 is the identity
    let (g, bank) = cube(32, 2)?;
    let u = random_spectrum_field(g, &[1.0], seed)?;
    let ones = vec![1.0; g.len()];
    let m = bank.low_pass_multiplier(2)?;
    for (name, kind) in [
        ("degenerate_energy_flux", FluxKind::Energy),
        ("degenerate_helicity_flux", FluxKind::Helicity),
    ] {
        let d = TransferDensity::for_kind(&u, kind)?;
        checks.push(Check::at_most(
            name,
            relative(d.weighted(&m), 0.0, d.abs_weighted(&ones)),
            1e-10,
            0.0,
        ));
    }
    let (g2, bank2) = square(32, 2)?;
    let u2 = random_spectrum_field(g2, &[1.0], seed)?;
    let d = TransferDensity::enstrophy(&u2)?;
    let m = bank2.low_pass_multiplier(2)?;
    let scale = d.abs_weighted(&vec![1.0; g2.len()]);
    checks.push(Check::at_most(
        "degenerate_enstrophy_flux",
        relative(d.weighted(&m), 0.0, scale),
        1e-10,
        0.0,
    ));

    let (g, bank) = cube(32, 1)?;
    let u = random_spectrum_field(g, &[1.0, 0.8, 0.6], seed)?;
    let d = TransferDensity::energy(&u)?;
    let mut worst = 0.0f64;
    for q in 0..bank.q_max() {
        let b = energy_bound(&u, q, &bank)?;
        worst = worst.max(d.weighted(&bank.low_pass_multiplier(q)?).abs() / b);
    }
    checks.push(Check::finite("energy_locality_ratio", worst));
    Ok(checks)
}

fn bilinear(seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let (g, bank) = cube(16, 1)?;
    let u = random_spectrum_field(g, &[1.0, 0.8], seed)?;
    let v = random_spectrum_field(g, &[1.0, 0.8], seed + 1)?;
    let a = advective_term(&u, &v)?;
    let h = hodge_form(&u, &v)?;
    let forms = lp_norm(&a.sub(&h)?, 2.0)? / lp_norm(&a, 2.0)?;
    checks.push(Check::at_most("advective_vs_hodge", forms, 1e-10, 0.0));
    let scale = lp_norm(&a, 2.0)? * lp_norm(&v, 2.0)?;
    checks.push(Check::at_most(
        "skew_symmetry",
        trilinear(&u, &v, &v)?.abs() / scale,
        1e-10,
        0.0,
    ));
    let q = 1;
    let s2u = low_pass(&low_pass(&u, q, &bank)?, q, &bank)?;
    let pi = TransferDensity::energy(&u)?.weighted(&bank.low_pass_multiplier(q)?);
    let pairing = -trilinear(&u, &u, &s2u)?;
    let natural = TransferDensity::energy(&u)?.abs_weighted(&bank.low_pass_multiplier(q)?);
    checks.push(Check::at_most(
        "flux_as_trilinear",
        relative(pi, pairing, natural),
        1e-9,
        0.0,
    ));

    let grid = Grid::new(3, &[256, 16, 16], 8)?;
    let series = divergence_growth(grid, 3, seed)?;
    for w in series.points.windows(2) {
        if w[1].n >= 2 {
            let inc = w[1].value - w[0].value;
            checks.push(Check::at_least(format!("growth_strict_n{}", w[1].n), inc, 0.0, 0.0).strict());
        }
    }
    Ok(checks)
}
