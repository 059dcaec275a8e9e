//! The advective term `B(u, v) = P(u.grad v)`, its Riesz-transform form,
//! the trilinear pairing, the paraproduct split and empirical constants
//! for the Besov estimates on `B`.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::besov::{besov_norm, lp_norm, BesovParams};
use crate::constructions::{random_spectrum_field, ParaproductBase};
use crate::error::{check_index, Error, Result};
use crate::littlewood_paley::{dyadic_block, lambda, low_pass, FilterBank};
use crate::spectral::products::{padded_physical, padded_spectral, padded_spectral_visit};
use crate::spectral::{project_mode, require_divergence_free, spectral_pairing, Field, Grid};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn wavevectors(grid: &Grid) -> Vec<[f64; 3]> {
    let mut out = vec![[0.0; 3]; grid.len()];
    grid.for_each_mode(|off, k| out[off] = k);
    out
}

fn refs(v: &[Vec<Complex64>]) -> Vec<&[Complex64]> {
    v.iter().map(Vec::as_slice).collect()
}

fn check_pair(u: &Field, v: &Field) -> Result<()> {
    if u.grid() != v.grid() {
        return Err(Error::GridMismatch);
    }
    let d = u.grid().dim();
    for f in [u, v] {
        if f.ncomp() != d {
            return Err(Error::Arity {
                expected: d,
                found: f.ncomp(),
            });
        }
    }
    require_divergence_free(u)
}

/// Spectra of `sum_i u_i d_i v_j`, products formed on the padded grid.
fn convective_spectra(u: &Field, v: &Field) -> Vec<Vec<Complex64>> {
    let grid = *u.grid();
    let d = grid.dim();
    let ks = wavevectors(&grid);
    let su = u.spectral();
    let up = padded_physical(&grid, &refs(&su));
    let sv = v.spectral();
    padded_spectral(&grid, d, |j, buf| {
        let grads: Vec<Vec<Complex64>> = (0..d)
            .map(|i| sv[j].iter().zip(&ks).map(|(c, k)| I * k[i] * c).collect())
            .collect();
        let gp = padded_physical(&grid, &refs(&grads));
        buf.iter_mut().for_each(|b| *b = 0.0);
        for (ui, gi) in up.iter().zip(&gp) {
            for ((b, x), y) in buf.iter_mut().zip(ui).zip(gi) {
                *b += x * y;
            }
        }
    })
}

/// `B(u, v) = P(u.grad v)`.
pub fn advective_term(u: &Field, v: &Field) -> Result<Field> {
    check_pair(u, v)?;
    let grid = *u.grid();
    let mut comps = convective_spectra(u, v);
    let mut buf = vec![Complex64::default(); grid.dim()];
    grid.for_each_mode(|off, k| {
        for (b, c) in buf.iter_mut().zip(&comps) {
            *b = c[off];
        }
        project_mode(k, &mut buf);
        for (c, b) in comps.iter_mut().zip(&buf) {
            c[off] = *b;
        }
    });
    Field::from_spectral(grid, comps)
}

/// `Lambda H(a (x) b)` with `[H(T)]_i = R_j T_ji + R_i R_k R_l T_kl`,
/// `R_k` the Riesz transforms. No solenoidality check.
fn hodge_raw(a: &Field, b: &Field) -> Field {
    let grid = *a.grid();
    let d = grid.dim();
    if a.max_abs() == 0.0 || b.max_abs() == 0.0 {
        return Field::zeros(grid, d);
    }
    let ks = wavevectors(&grid);
    let (sa, sb) = (a.spectral(), b.spectral());
    let pa = padded_physical(&grid, &refs(&sa));
    let pb = padded_physical(&grid, &refs(&sb));
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|k| (0..d).map(move |l| (k, l))).collect();
    let mut out = vec![vec![Complex64::default(); grid.len()]; d];
    padded_spectral_visit(
        &grid,
        pairs.len(),
        |t, buf| {
            let (k, l) = pairs[t];
            for ((o, x), y) in buf.iter_mut().zip(&pa[k]).zip(&pb[l]) {
                *o = x * y;
            }
        },
        |t, tkl| {
            let (k, l) = pairs[t];
            for (off, kv) in ks.iter().enumerate() {
                let k2 = kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2];
                if k2 == 0.0 {
                    continue;
                }
                let c = tkl[off];
                out[l][off] += I * kv[k] * c;
                let s = -I * kv[k] * kv[l] * c / k2;
                for (i, comp) in out.iter_mut().enumerate() {
                    comp[off] += s * kv[i];
                }
            }
        },
    );
    Field::from_spectral(grid, out).expect("shape matches grid")
}

/// `Lambda H(u (x) v)`; equals [`advective_term`] when `div u = 0`.
pub fn hodge_form(u: &Field, v: &Field) -> Result<Field> {
    check_pair(u, v)?;
    Ok(hodge_raw(u, v))
}

/// `<B(u, v), w> = int (u.grad v).w dx`, exact for band-limited inputs.
pub fn trilinear(u: &Field, v: &Field, w: &Field) -> Result<f64> {
    check_pair(u, v)?;
    if w.grid() != u.grid() {
        return Err(Error::GridMismatch);
    }
    if w.ncomp() != u.ncomp() {
        return Err(Error::Arity {
            expected: u.ncomp(),
            found: w.ncomp(),
        });
    }
    let conv = convective_spectra(u, v);
    let sw = w.spectral();
    Ok(conv
        .iter()
        .zip(sw.iter())
        .map(|(a, b)| spectral_pairing(u.grid(), a, b, |_| 1.0))
        .sum())
}

/// `Delta_q B(u, v) ~ C_q(u, v) + I_q(u, v)`.
#[derive(Clone, Debug)]
pub struct ParaproductSplit {
    pub q: i32,
    pub c_part: Field,
    pub i_part: Field,
}

struct Blocks {
    du: Vec<Field>,
    dv: Vec<Field>,
    su: Vec<Field>,
    sv: Vec<Field>,
}

impl Blocks {
    fn new(u: &Field, v: &Field, bank: &FilterBank) -> Result<Self> {
        let qs = -1..=bank.q_max();
        Ok(Self {
            du: qs.clone().map(|q| dyadic_block(u, q, bank)).collect::<Result<_>>()?,
            dv: qs.clone().map(|q| dyadic_block(v, q, bank)).collect::<Result<_>>()?,
            su: qs.clone().map(|q| low_pass(u, q, bank)).collect::<Result<_>>()?,
            sv: qs.map(|q| low_pass(v, q, bank)).collect::<Result<_>>()?,
        })
    }

    fn at(v: &[Field], q: i32) -> &Field {
        &v[(q + 1) as usize]
    }
}

fn accumulate(acc: &mut Field, term: &Field) -> Result<()> {
    *acc = acc.add(term)?;
    Ok(())
}

/// `C_q = sum_{p >= q-2, |p-p'| <= 2} Delta_q Lambda H(Delta_p u, Delta_p' v)` and
/// `I_q = sum_{|j| <= 2} Delta_q [Lambda H(S_{q+j-2} u, Delta_{q+j} v) + Lambda H(S_{q+j-2} v, Delta_{q+j} u)]`.
pub fn paraproduct_split(u: &Field, v: &Field, q: i32, bank: &FilterBank) -> Result<ParaproductSplit> {
    check_index("q", q, -1, bank.q_max())?;
    bank.check_grid(u)?;
    check_pair(u, v)?;
    let top = bank.q_max();
    let b = Blocks::new(u, v, bank)?;
    let grid = *u.grid();
    let d = grid.dim();
    let mut c = Field::zeros(grid, d);
    for p in (q - 2).max(-1)..=top {
        for pp in (p - 2).max(-1)..=(p + 2).min(top) {
            accumulate(&mut c, &hodge_raw(Blocks::at(&b.du, p), Blocks::at(&b.dv, pp)))?;
        }
    }
    let mut i = Field::zeros(grid, d);
    for m in (q - 2)..=(q + 2) {
        if m < 1 || m > top {
            continue;
        }
        accumulate(&mut i, &hodge_raw(Blocks::at(&b.su, m - 2), Blocks::at(&b.dv, m)))?;
        accumulate(&mut i, &hodge_raw(Blocks::at(&b.sv, m - 2), Blocks::at(&b.du, m)))?;
    }
    Ok(ParaproductSplit {
        q,
        c_part: dyadic_block(&c, q, bank)?,
        i_part: dyadic_block(&i, q, bank)?,
    })
}

fn l2_spectral(f: &Field) -> f64 {
    f.spectral().iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `||Delta_q B(u,v) - C_q - I_q||_2 / ||Delta_q B(u,v)||_2` (zero when both vanish).
pub fn paraproduct_residual(u: &Field, v: &Field, split: &ParaproductSplit, bank: &FilterBank) -> Result<f64> {
    let reference = dyadic_block(&hodge_form(u, v)?, split.q, bank)?;
    let diff = reference.sub(&split.c_part)?.sub(&split.i_part)?;
    let den = l2_spectral(&reference);
    let num = l2_spectral(&diff);
    Ok(if den == 0.0 { num } else { num / den })
}

/// The aggregates `C(u, v) = sum_q C_q` and `I(u, v) = sum_q I_q`.
///
/// Summing `Delta_q` over the admissible `q` of each pair collapses to a
/// single band multiplier per pair, so each product is formed once.
pub fn paraproduct_aggregates(u: &Field, v: &Field, bank: &FilterBank) -> Result<(Field, Field)> {
    bank.check_grid(u)?;
    check_pair(u, v)?;
    let top = bank.q_max();
    let b = Blocks::new(u, v, bank)?;
    let grid = *u.grid();
    let d = grid.dim();
    let mut c = Field::zeros(grid, d);
    for p in -1..=top {
        let mut pair_sum = Field::zeros(grid, d);
        for pp in (p - 2).max(-1)..=(p + 2).min(top) {
            accumulate(&mut pair_sum, &hodge_raw(Blocks::at(&b.du, p), Blocks::at(&b.dv, pp)))?;
        }
        accumulate(
            &mut c,
            &pair_sum.apply_multiplier(&bank.low_pass_multiplier((p + 2).min(top))?),
        )?;
    }
    let mut i = Field::zeros(grid, d);
    for m in 1..=top {
        let mut t = hodge_raw(Blocks::at(&b.su, m - 2), Blocks::at(&b.dv, m));
        t = t.add(&hodge_raw(Blocks::at(&b.sv, m - 2), Blocks::at(&b.du, m)))?;
        let band = bank.band_multiplier((m - 2).max(-1), (m + 2).min(top))?;
        accumulate(&mut i, &t.apply_multiplier(&band))?;
    }
    Ok((c, i))
}

/// Seeded random fields for the inequality survey: member `i` uses
/// seeds `seed + 3i`, `seed + 3i + 1`, `seed + 3i + 2` for `(u, v, w)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub count: usize,
    pub seed: u64,
    /// Target `lambda_q^{1/3} ||Delta_q u||_3` for `q = 0, 1, ...`.
    pub profile: Vec<f64>,
}

/// Largest observed LHS/RHS ratio of one inequality over the ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityRatio {
    pub name: String,
    pub max_ratio: f64,
    pub evaluated: usize,
    /// Cases whose right-hand side vanished.
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub entries: Vec<InequalityRatio>,
}

impl InequalityReport {
    pub fn get(&self, name: &str) -> Option<&InequalityRatio> {
        self.entries.iter().find(|e| e.name == name)
    }
}

pub const INEQUALITY_NAMES: [&str; 8] = [
    "inec",
    "inei",
    "tri",
    "low_pass_9_2",
    "bernstein_2_3",
    "bernstein_3_6",
    "bernstein_2_inf",
    "embedding_h56",
];

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > 0.0).then(|| num / den)
}

fn besov(u: &Field, s: f64, p: f64, bank: &FilterBank) -> Result<f64> {
    besov_norm(u, BesovParams::new(s, p, 2.0)?, bank)
}

fn bernstein(u: &Field, a: f64, b: f64, bank: &FilterBank) -> Result<Option<f64>> {
    let d = u.grid().dim() as f64;
    let mut worst: Option<f64> = None;
    for q in 0..=bank.q_max() {
        let block = dyadic_block(u, q, bank)?;
        let den = lambda(q).powf(d * (1.0 / a - 1.0 / b)) * lp_norm(&block, a)?;
        if let Some(r) = ratio(lp_norm(&block, b)?, den) {
            worst = Some(worst.map_or(r, |w: f64| w.max(r)));
        }
    }
    Ok(worst)
}

/// LHS/RHS of each inequality in [`INEQUALITY_NAMES`] for one triple;
/// `None` where the right-hand side vanishes.
pub fn inequality_ratios(
    u: &Field,
    v: &Field,
    w: &Field,
    bank: &FilterBank,
) -> Result<Vec<(&'static str, Option<f64>)>> {
    let third = 1.0 / 3.0;
    let (nu, nv) = (besov(u, third, 3.0, bank)?, besov(v, third, 3.0, bank)?);
    let (c, i) = paraproduct_aggregates(u, v, bank)?;
    let inec = ratio(besov(&c, -third, 1.5, bank)?, nu * nv);
    let inei = ratio(besov(&i, -2.0 * third, 1.8, bank)?, nu * nv);
    let tri_den = [u, v, w]
        .iter()
        .map(|f| besov(f, 0.5, 18.0 / 7.0, bank))
        .product::<Result<f64>>()?;
    let tri = ratio(trilinear(u, v, w)?.abs(), tri_den);
    let mut low = 0.0f64;
    for q in 0..=bank.q_max() {
        low = low.max(lp_norm(&low_pass(u, q, bank)?, 4.5)?);
    }
    let aux = ratio(low, nu);
    let max_over = |pairs: [Option<f64>; 3]| pairs.into_iter().flatten().reduce(f64::max);
    let mut bern = Vec::new();
    for (a, b) in [(2.0, 3.0), (3.0, 6.0), (2.0, f64::INFINITY)] {
        bern.push(max_over([
            bernstein(u, a, b, bank)?,
            bernstein(v, a, b, bank)?,
            bernstein(w, a, b, bank)?,
        ]));
    }
    let embed = ratio(besov(u, 0.5, 18.0 / 7.0, bank)?, besov(u, 5.0 / 6.0, 2.0, bank)?);
    let values = [inec, inei, tri, aux, bern[0], bern[1], bern[2], embed];
    Ok(INEQUALITY_NAMES.iter().copied().zip(values).collect())
}

/// Empirical constants of the estimates on `B` over a seeded ensemble.
pub fn inequality_report(spec: &EnsembleSpec, bank: &FilterBank) -> Result<InequalityReport> {
    let mut entries: Vec<InequalityRatio> = INEQUALITY_NAMES
        .iter()
        .map(|n| InequalityRatio {
            name: n.to_string(),
            max_ratio: 0.0,
            evaluated: 0,
            skipped: 0,
        })
        .collect();
    let grid = *bank.grid();
    for m in 0..spec.count as u64 {
        let base = spec.seed.wrapping_add(3 * m);
        let u = random_spectrum_field(grid, &spec.profile, base)?;
        let v = random_spectrum_field(grid, &spec.profile, base + 1)?;
        let w = random_spectrum_field(grid, &spec.profile, base + 2)?;
        for (e, (_, r)) in entries.iter_mut().zip(inequality_ratios(&u, &v, &w, bank)?) {
            match r {
                Some(r) => {
                    e.max_ratio = e.max_ratio.max(r);
                    e.evaluated += 1;
                }
                None => e.skipped += 1,
            }
        }
    }
    Ok(InequalityReport { entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub n: i32,
    /// `<B(u, v_n), w_n>`.
    pub value: f64,
    /// `A sum_{q <= n} a_q^2`.
    pub predicted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthSeries {
    pub a: f64,
    pub points: Vec<GrowthPoint>,
}

/// `n -> <B(u, v_n), w_n>` for `n = 1..=n_max` along the divergent sequence.
pub fn divergence_growth(grid: Grid, n_max: i32, seed: u64) -> Result<GrowthSeries> {
    let base = ParaproductBase::new(grid, seed)?;
    let mut v = Field::zeros(grid, 3);
    let mut w = Field::zeros(grid, 3);
    let mut points = Vec::new();
    let mut predicted = 0.0;
    for n in 1..=n_max {
        let (vn, wn) = base.terms(n)?;
        v = v.add(&vn)?;
        w = w.add(&wn)?;
        predicted += base.a * ParaproductBase::amplitude(n).powi(2);
        points.push(GrowthPoint {
            n,
            value: trilinear(&base.u, &v, &w)?,
            predicted,
        });
    }
    Ok(GrowthSeries { a: base.a, points })
}
