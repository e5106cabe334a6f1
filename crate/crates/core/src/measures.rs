//! Entanglement and correlation measures for two-qubit states.
//!
//! X-form states get closed forms; general 4×4 matrices (from exact
//! diagonalization) go through dense Hermitian eigensolves. All entropies are
//! in bits.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::correlators::{
    aux_sums_with, two_site_rdm_from, SingleSiteRdm, SumMode, XStateRdm, C64,
};
use crate::error::{Error, Result};
use crate::model::{ground_energy, ground_level, sector_level, ModelParams, Sector};

const EIG_TOL: f64 = 1e-10;
const ZETA_TOL: f64 = 1e-9;
const SQRT_FLOOR: f64 = 1e-14;

/// Spectral data of an X-state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateSpectrum {
    pub joint_eigs: [f64; 4],
    /// Square roots of the eigenvalues of `√ρ ρ̃ √ρ`, descending.
    pub conc_lambdas: [f64; 4],
}

pub fn spectrum(rdm: &XStateRdm) -> XStateSpectrum {
    XStateSpectrum {
        joint_eigs: rdm.eigenvalues(),
        conc_lambdas: wootters_lambdas(&rdm.to_matrix()),
    }
}

/// `C = 2 max(0, |x| - w, |z| - √(uv))`.
pub fn concurrence(rdm: &XStateRdm) -> Result<f64> {
    let vals = [rdm.u, rdm.v, rdm.w, rdm.x.re, rdm.x.im, rdm.z.re, rdm.z.im];
    if vals.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidParams("NaN in density matrix".into()));
    }
    let uv = (rdm.u * rdm.v).max(0.0).sqrt();
    Ok(2.0 * (rdm.x.norm() - rdm.w).max(rdm.z.norm() - uv).max(0.0))
}

fn wootters_lambdas(rho: &Matrix4<C64>) -> [f64; 4] {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    #[rustfmt::skip]
    let yy = Matrix4::new(
        o, o, o, -one,
        o, o, one, o,
        o, one, o, o,
        -one, o, o, o,
    );
    // √ρ̃ = (σʸσʸ) √ρ* (σʸσʸ), so the λ are the singular values of √ρ √ρ̃.
    // This avoids taking square roots of the (possibly zero) eigenvalues of
    // √ρ ρ̃ √ρ, which would amplify roundoff to ~1e-8.
    let sqrt_rho = hermitian_sqrt(rho);
    let m = sqrt_rho * (yy * sqrt_rho.conjugate() * yy);
    let mut l: Vec<f64> = m.singular_values().iter().copied().collect();
    l.sort_by(|a, b| b.total_cmp(a));
    [l[0], l[1], l[2], l[3]]
}

/// Positive square root; eigenvalues below roundoff of the trace are treated as zero.
fn hermitian_sqrt(m: &Matrix4<C64>) -> Matrix4<C64> {
    let eig = SymmetricEigen::new((m + m.adjoint()).unscale(2.0));
    let floor = SQRT_FLOOR * m.trace().re.abs().max(f64::MIN_POSITIVE);
    let d = Matrix4::from_diagonal(&eig.eigenvalues.map(|e| {
        C64::new(if e > floor { e.sqrt() } else { 0.0 }, 0.0)
    }));
    eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Wootters concurrence `max(0, λ1 - λ2 - λ3 - λ4)` of any two-qubit matrix.
pub fn concurrence_general(rho: &Matrix4<C64>) -> f64 {
    let l = wootters_lambdas(rho);
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Shannon entropy in bits. Slightly negative inputs are clamped to zero.
pub fn entropy(eigs: &[f64]) -> f64 {
    eigs.iter()
        .map(|&p| p.clamp(0.0, 1.0))
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

pub fn binary_entropy(p: f64) -> f64 {
    entropy(&[p, 1.0 - p])
}

fn check_marginal(rdm: &XStateRdm, single: &SingleSiteRdm) -> Result<()> {
    let m = rdm.marginal_l();
    if (m.p_up - single.p_up).abs() > EIG_TOL || (m.p_down - single.p_down).abs() > EIG_TOL {
        return Err(Error::Consistency(format!(
            "single-site marginal {single:?} does not match pair state {m:?}"
        )));
    }
    Ok(())
}

/// `I = S(ρ_l) + S(ρ_m) - S(ρ_lm)`.
pub fn mutual_information(
    rdm: &XStateRdm,
    single_l: &SingleSiteRdm,
    single_m: &SingleSiteRdm,
) -> Result<f64> {
    check_marginal(rdm, single_l)?;
    check_marginal(rdm, single_m)?;
    Ok(entropy(&single_l.eigenvalues()) + entropy(&single_m.eigenvalues())
        - entropy(&rdm.eigenvalues()))
}

/// Projective measurement of qubit `m` onto
/// `|0̃⟩ = cos(θ/2)|↑⟩ + e^{iφ} sin(θ/2)|↓⟩` and its orthogonal partner.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Self {
        MeasurementBasis { theta, phi }
    }

    fn vectors(&self) -> [[C64; 2]; 2] {
        let (s, c) = (0.5 * self.theta).sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [[C64::new(c, 0.0), e * s], [C64::new(s, 0.0), -e * c]]
    }
}

fn entropy2(m: &Matrix2<C64>) -> f64 {
    let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
    let r = ((a - d).powi(2) + 4.0 * m[(0, 1)].norm_sqr()).sqrt();
    entropy(&[0.5 * (a + d + r), 0.5 * (a + d - r)])
}

/// Average entropy of qubit `l` after measuring qubit `m` in `basis`.
pub fn conditional_entropy_general(rho: &Matrix4<C64>, basis: MeasurementBasis) -> f64 {
    let mut q = 0.0;
    for b in basis.vectors() {
        let mut post = Matrix2::<C64>::zeros();
        for a in 0..2 {
            for a2 in 0..2 {
                let mut acc = C64::new(0.0, 0.0);
                for s in 0..2 {
                    for s2 in 0..2 {
                        acc += b[s].conj() * rho[(2 * a + s, 2 * a2 + s2)] * b[s2];
                    }
                }
                post[(a, a2)] = acc;
            }
        }
        let p = post.trace().re;
        if p < 1e-14 {
            continue;
        }
        q += p * entropy2(&(post / C64::new(p, 0.0)));
    }
    q
}

pub fn conditional_entropy(rdm: &XStateRdm, basis: MeasurementBasis) -> f64 {
    conditional_entropy_general(&rdm.to_matrix(), basis)
}

/// `ζ = 1/2 + √(((u-v)/2)² + (|x|+|z|)²)`, clamped to `[0, 1]` within 1e-9.
pub fn zeta(rdm: &XStateRdm) -> Result<f64> {
    let z = 0.5 + (0.25 * (rdm.u - rdm.v).powi(2) + (rdm.x.norm() + rdm.z.norm()).powi(2)).sqrt();
    if !(-ZETA_TOL..=1.0 + ZETA_TOL).contains(&z) {
        return Err(Error::Consistency(format!("zeta = {z} outside [0, 1]")));
    }
    Ok(z.clamp(0.0, 1.0))
}

/// Equatorial basis whose phase lines up the `x` and `z` coherences.
/// Its conditional entropy is `H(ζ)`.
pub fn aligned_equatorial_basis(rdm: &XStateRdm) -> MeasurementBasis {
    MeasurementBasis::new(PI / 2.0, 0.5 * (rdm.x.arg() - rdm.z.arg()))
}

/// Closed form `H(ζ)` of the equatorial conditional entropy.
pub fn conditional_entropy_equatorial(rdm: &XStateRdm) -> Result<f64> {
    Ok(binary_entropy(zeta(rdm)?))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiscordMode {
    /// Equatorial measurement, `Q = H(ζ)`.
    #[default]
    #[serde(rename = "fixed")]
    FixedBasis,
    /// 17×17 `(θ, φ)` scan followed by alternating golden-section refinement.
    #[serde(rename = "grid")]
    GridMinimize,
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimum of the conditional entropy over all projective measurements on `m`.
pub fn minimize_conditional_entropy(rho: &Matrix4<C64>) -> (MeasurementBasis, f64) {
    const STEPS: usize = 17;
    let q = |t: f64, p: f64| conditional_entropy_general(rho, MeasurementBasis::new(t, p));
    let (dt, dp) = (PI / (STEPS - 1) as f64, 2.0 * PI / STEPS as f64);

    let mut grid: Vec<(f64, f64, f64)> = Vec::with_capacity(STEPS * STEPS);
    for i in 0..STEPS {
        for j in 0..STEPS {
            let (t, p) = (i as f64 * dt, j as f64 * dp);
            grid.push((q(t, p), t, p));
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best = (MeasurementBasis::new(grid[0].1, grid[0].2), grid[0].0);
    for &(mut val, mut t, mut p) in grid.iter().take(3) {
        for _ in 0..40 {
            let prev = val;
            let (t2, _) = golden_min(|x| q(x, p), (t - dt).max(0.0), (t + dt).min(PI), 1e-10);
            t = t2;
            let (p2, v2) = golden_min(|y| q(t, y), p - dp, p + dp, 1e-10);
            p = p2;
            val = v2;
            if (prev - val).abs() < 1e-15 {
                break;
            }
        }
        if val < best.1 {
            best = (MeasurementBasis::new(t, p), val);
        }
    }
    best
}

/// `D = min Q + S(ρ_m) - S(ρ_lm)`.
pub fn discord(rdm: &XStateRdm, single_m: &SingleSiteRdm, mode: DiscordMode) -> Result<f64> {
    check_marginal(rdm, single_m)?;
    let equatorial = conditional_entropy_equatorial(rdm)?;
    let q = match mode {
        DiscordMode::FixedBasis => equatorial,
        DiscordMode::GridMinimize => minimize_conditional_entropy(&rdm.to_matrix()).1.min(equatorial),
    };
    Ok(q + entropy(&single_m.eigenvalues()) - entropy(&rdm.eigenvalues()))
}

/// `E = 4n(1-n)`.
pub fn global_entanglement(n: f64) -> f64 {
    4.0 * n * (1.0 - n)
}

// General two-qubit matrices, used with exact-diagonalization states.

pub fn hermitian_eigenvalues(rho: &Matrix4<C64>) -> [f64; 4] {
    let e = SymmetricEigen::new((rho + rho.adjoint()).unscale(2.0)).eigenvalues;
    [e[0], e[1], e[2], e[3]]
}

/// Reduced single-qubit matrices `(ρ_l, ρ_m)`.
pub fn marginals(rho: &Matrix4<C64>) -> (Matrix2<C64>, Matrix2<C64>) {
    let mut l = Matrix2::zeros();
    let mut m = Matrix2::zeros();
    for a in 0..2 {
        for b in 0..2 {
            for s in 0..2 {
                l[(a, b)] += rho[(2 * a + s, 2 * b + s)];
                m[(a, b)] += rho[(2 * s + a, 2 * s + b)];
            }
        }
    }
    (l, m)
}

pub fn mutual_information_general(rho: &Matrix4<C64>) -> f64 {
    let (l, m) = marginals(rho);
    entropy2(&l) + entropy2(&m) - entropy(&hermitian_eigenvalues(rho))
}

pub fn discord_general(rho: &Matrix4<C64>) -> f64 {
    let (_, m) = marginals(rho);
    minimize_conditional_entropy(rho).1 + entropy2(&m) - entropy(&hermitian_eigenvalues(rho))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReportOptions {
    pub discord: DiscordMode,
    /// Zero-mode threshold; `None` uses the parameters' default.
    pub tol_zero: Option<f64>,
    pub sum_mode: SumMode,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            discord: DiscordMode::FixedBasis,
            tol_zero: None,
            sum_mode: SumMode::Grid,
        }
    }
}

/// Every scalar observable at one parameter point.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationReport {
    pub params: ModelParams,
    /// Lowest energy within the parameters' sector.
    pub energy: f64,
    pub energy_even: f64,
    pub energy_odd: f64,
    /// Multiplicity of the true ground level over both sectors.
    pub ground_multiplicity: u64,
    /// The other parity sector lies at or below this one.
    pub sector_competition: bool,
    pub n: f64,
    pub mz: f64,
    pub c12: f64,
    pub c13: f64,
    pub i12: f64,
    pub i13: f64,
    pub d12: f64,
    pub d13: f64,
    pub e_global: f64,
    pub gamma: Vec<f64>,
    pub xi: Vec<f64>,
    pub rdm12: XStateRdm,
    pub rdm13: XStateRdm,
    /// Zero modes on the grid or a degenerate ground level.
    pub degenerate: bool,
}

pub fn report(params: &ModelParams, options: &ReportOptions) -> Result<CorrelationReport> {
    report_with_p(params, options, 2)
}

/// As [`report`], carrying `γ(p)`, `ξ(p)` up to `p_max`.
pub fn report_with_p(
    params: &ModelParams,
    options: &ReportOptions,
    p_max: usize,
) -> Result<CorrelationReport> {
    let tol = options.tol_zero.unwrap_or_else(|| params.default_tol_zero());
    let sums = aux_sums_with(params, p_max, tol, options.sum_mode);
    let rdm12 = two_site_rdm_from(&sums, 1)?;
    let rdm13 = two_site_rdm_from(&sums, 2)?;
    let single = SingleSiteRdm::from_occupation(sums.n);

    let ground = ground_level(params, tol);
    let own = sector_level(params, params.sector(), tol);
    let other = match params.sector() {
        Sector::EvenNF => ground.odd,
        Sector::OddNF => ground.even,
    };
    let tie = 1e-9 * params.energy_scale() * params.n() as f64;
    let zero_modes = match options.sum_mode {
        SumMode::Grid => sums.zero_modes,
        SumMode::Thermodynamic => aux_sums_with(params, 2, tol, SumMode::Grid).zero_modes,
    };

    Ok(CorrelationReport {
        params: *params,
        energy: ground_energy(params),
        energy_even: ground.even.energy,
        energy_odd: ground.odd.energy,
        ground_multiplicity: ground.multiplicity,
        sector_competition: other.energy <= own.energy + tie,
        n: sums.n,
        mz: 2.0 * sums.n - 1.0,
        c12: concurrence(&rdm12)?,
        c13: concurrence(&rdm13)?,
        i12: mutual_information(&rdm12, &single, &single)?,
        i13: mutual_information(&rdm13, &single, &single)?,
        d12: discord(&rdm12, &single, options.discord)?,
        d13: discord(&rdm13, &single, options.discord)?,
        e_global: global_entanglement(sums.n),
        gamma: sums.gamma,
        xi: sums.xi,
        rdm12,
        rdm13,
        degenerate: zero_modes > 0 || own.multiplicity > 1 || ground.multiplicity > 1,
    })
}
