//! Momentum-space solution of the cluster chain
//!
//! ```text
//! H = -Jx Σ σˣ_{l-1} σᶻ_l σˣ_{l+1} - Jy Σ σʸ_{l-1} σᶻ_l σʸ_{l+1} - h Σ σᶻ_l
//! ```
//!
//! After the Jordan-Wigner map the chain is quadratic in fermions with couplings
//! only between sites `l-1` and `l+1`. Every momentum pair `(k, -k)` decouples
//! with `A_k = -h + (Jx+Jy) cos 2k` and `B_k = (Jx-Jy) sin 2k`.
//!
//! The fermion-parity sector fixes the boundary condition and hence the grid:
//! even parity is antiperiodic (`k = nπ/N`, `n` odd), odd parity is periodic
//! (`k = nπ/N`, `n` even, including the unpaired edges `k = 0, π`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fermion-number parity sector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    #[default]
    #[serde(rename = "even")]
    EvenNF,
    #[serde(rename = "odd")]
    OddNF,
}

impl Sector {
    pub fn name(self) -> &'static str {
        match self {
            Sector::EvenNF => "even",
            Sector::OddNF => "odd",
        }
    }
}

impl std::str::FromStr for Sector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even" => Ok(Sector::EvenNF),
            "odd" => Ok(Sector::OddNF),
            other => Err(Error::InvalidParams(format!("unknown sector `{other}`"))),
        }
    }
}

/// A scalar model parameter, used to address sweep axes and derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    Jx,
    Jy,
    H,
    N,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::Jx => "jx",
            Parameter::Jy => "jy",
            Parameter::H => "h",
            Parameter::N => "n",
        }
    }
}

/// Couplings, field, chain length and parity sector. Always valid once built.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ModelParams {
    jx: f64,
    jy: f64,
    h: f64,
    n: usize,
    sector: Sector,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    jx: f64,
    jy: f64,
    h: f64,
    n: usize,
    #[serde(default)]
    sector: Sector,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Ok(ModelParams::new(raw.jx, raw.jy, raw.h, raw.n)?.with_sector(raw.sector))
    }
}

impl From<ModelParams> for RawParams {
    fn from(p: ModelParams) -> Self {
        RawParams {
            jx: p.jx,
            jy: p.jy,
            h: p.h,
            n: p.n,
            sector: p.sector,
        }
    }
}

impl ModelParams {
    /// Even-sector parameters. `n` must be even and at least 4.
    pub fn new(jx: f64, jy: f64, h: f64, n: usize) -> Result<Self> {
        let p = ModelParams {
            jx,
            jy,
            h,
            n,
            sector: Sector::EvenNF,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 4 || self.n % 2 != 0 {
            return Err(Error::InvalidParams(format!(
                "chain length must be even and >= 4, got {}",
                self.n
            )));
        }
        for (name, v) in [("jx", self.jx), ("jy", self.jy), ("h", self.h)] {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {v}")));
            }
        }
        if self.jx == 0.0 && self.jy == 0.0 && self.h == 0.0 {
            return Err(Error::InvalidParams(
                "at least one of jx, jy, h must be nonzero".into(),
            ));
        }
        Ok(())
    }

    pub fn with_sector(mut self, sector: Sector) -> Self {
        self.sector = sector;
        self
    }

    /// Returns a copy with one parameter replaced, re-validated.
    pub fn with(self, param: Parameter, value: f64) -> Result<Self> {
        let mut p = self;
        match param {
            Parameter::Jx => p.jx = value,
            Parameter::Jy => p.jy = value,
            Parameter::H => p.h = value,
            Parameter::N => {
                if value.fract() != 0.0 || value < 0.0 {
                    return Err(Error::InvalidParams(format!(
                        "chain length must be a non-negative integer, got {value}"
                    )));
                }
                p.n = value as usize;
            }
        }
        p.validate()?;
        Ok(p)
    }

    pub fn get(&self, param: Parameter) -> f64 {
        match param {
            Parameter::Jx => self.jx,
            Parameter::Jy => self.jy,
            Parameter::H => self.h,
            Parameter::N => self.n as f64,
        }
    }

    pub fn jx(&self) -> f64 {
        self.jx
    }

    pub fn jy(&self) -> f64 {
        self.jy
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    /// `max(|Jx|+|Jy|, |h|, 1)`, the scale all absolute tolerances are taken relative to.
    pub fn energy_scale(&self) -> f64 {
        (self.jx.abs() + self.jy.abs()).max(self.h.abs()).max(1.0)
    }

    /// Default threshold below which a mode energy counts as a zero mode.
    pub fn default_tol_zero(&self) -> f64 {
        1e-12 * self.energy_scale()
    }

    /// Tolerance for deciding that two many-body levels coincide.
    pub(crate) fn level_tol(&self) -> f64 {
        1e-9 * self.energy_scale() * self.n as f64
    }
}

/// Momenta of one parity sector: paired `k ∈ (0, π)` ascending, plus unpaired edges.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumGrid {
    pub paired: Vec<f64>,
    /// `[0, π]` in the odd sector, empty in the even sector.
    pub edges: Vec<f64>,
}

impl MomentumGrid {
    pub fn for_sector(n: usize, sector: Sector) -> Self {
        let nf = n as f64;
        let k = |m: usize| m as f64 * PI / nf;
        match sector {
            Sector::EvenNF => MomentumGrid {
                paired: (1..n).step_by(2).map(k).collect(),
                edges: Vec::new(),
            },
            Sector::OddNF => MomentumGrid {
                paired: (2..n - 1).step_by(2).map(k).collect(),
                edges: vec![0.0, PI],
            },
        }
    }

    /// Every momentum of both sectors, `k = mπ/N` for `m = 0..=N`.
    pub fn union(n: usize) -> Vec<f64> {
        (0..=n).map(|m| m as f64 * PI / n as f64).collect()
    }
}

/// Allowed momenta of the parameters' sector.
pub fn allowed_momenta(params: &ModelParams) -> MomentumGrid {
    MomentumGrid::for_sector(params.n, params.sector)
}

/// `(A_k, B_k)`.
pub fn couplings(params: &ModelParams, k: f64) -> (f64, f64) {
    let two_k = 2.0 * k;
    (
        -params.h + (params.jx + params.jy) * two_k.cos(),
        (params.jx - params.jy) * two_k.sin(),
    )
}

/// One decoupled momentum block after the Bogoliubov rotation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumMode {
    pub k: f64,
    pub a: f64,
    pub b: f64,
    /// `sqrt(A² + B²)`
    pub omega: f64,
    /// Bogoliubov angle with `cos θ = A/ω`, `sin θ = -B/ω`.
    pub theta: f64,
    /// `sin²(θ/2)`, the pair occupation probability.
    pub occ_amp2: f64,
    /// Anomalous amplitude `sin θ` entering ξ(p). Zero on flagged zero modes.
    pub sin_theta: f64,
    /// `ω < tol_zero`; the mode is then taken as the equal mixture of the
    /// empty and doubly occupied pair (occupation 1/2, no anomalous part).
    pub zero_mode: bool,
}

pub fn mode(params: &ModelParams, k: f64, tol_zero: f64) -> MomentumMode {
    let (a, b) = couplings(params, k);
    let omega = a.hypot(b);
    if omega < tol_zero {
        return MomentumMode {
            k,
            a,
            b,
            omega,
            theta: PI / 2.0,
            occ_amp2: 0.5,
            sin_theta: 0.0,
            zero_mode: true,
        };
    }
    let cos_theta = a / omega;
    let sin_theta = -b / omega;
    MomentumMode {
        k,
        a,
        b,
        omega,
        theta: sin_theta.atan2(cos_theta),
        occ_amp2: 0.5 * (1.0 - cos_theta),
        sin_theta,
        zero_mode: false,
    }
}

/// All modes of the parameters' sector, paired modes first then edges.
pub fn modes(params: &ModelParams, tol_zero: f64) -> (Vec<MomentumMode>, Vec<MomentumMode>) {
    let grid = allowed_momenta(params);
    let paired = grid.paired.iter().map(|&k| mode(params, k, tol_zero)).collect();
    let edges = grid.edges.iter().map(|&k| mode(params, k, tol_zero)).collect();
    (paired, edges)
}

/// Lowest level of one parity sector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorLevel {
    pub sector: Sector,
    pub energy: f64,
    /// Number of degenerate parity-allowed eigenstates at `energy`.
    pub multiplicity: u64,
}

pub fn sector_level(params: &ModelParams, sector: Sector, tol_zero: f64) -> SectorLevel {
    let p = params.with_sector(sector);
    let tie = p.level_tol();
    let grid = allowed_momenta(&p);
    let omegas: Vec<f64> = grid.paired.iter().map(|&k| mode(&p, k, tol_zero).omega).collect();
    let pair_sum: f64 = omegas.iter().sum();
    let zero_pairs = omegas.iter().filter(|&&w| w < tol_zero).count() as u32;
    let half_pow4 = |l: u32| 4u64.saturating_pow(l) / 2;

    match sector {
        Sector::EvenNF => SectorLevel {
            sector,
            energy: -2.0 * pair_sum,
            multiplicity: if zero_pairs == 0 { 1 } else { half_pow4(zero_pairs) },
        },
        Sector::OddNF => {
            // k = 0 and k = π carry the same A and no pairing partner.
            let (edge_a, _) = couplings(&p, 0.0);
            let edge_a = if edge_a.abs() < tol_zero { 0.0 } else { edge_a };
            let base = -2.0 * pair_sum - 2.0 * edge_a;
            // (energy, odd fermion parity, count) for empty / one / both edges.
            let edge_configs = [(0.0, false, 1u64), (2.0 * edge_a, true, 2), (4.0 * edge_a, false, 1)];
            let mut candidates: Vec<(f64, u64)> = Vec::new();
            if zero_pairs > 0 {
                // A zero pair supplies either parity at no cost.
                for (e, _, m) in edge_configs {
                    candidates.push((base + e, m * half_pow4(zero_pairs)));
                }
            } else {
                let w_min = omegas.iter().copied().fold(f64::INFINITY, f64::min);
                let n_min = omegas.iter().filter(|&&w| w < w_min + tie).count() as u64;
                for (e, odd, m) in edge_configs {
                    if odd {
                        candidates.push((base + e, m));
                    } else if w_min.is_finite() {
                        // Break the softest pair into |10> or |01>.
                        candidates.push((base + e + 2.0 * w_min, m * 2 * n_min));
                    }
                }
            }
            let energy = candidates.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
            let multiplicity = candidates
                .iter()
                .filter(|c| c.0 <= energy + tie)
                .map(|c| c.1)
                .sum();
            SectorLevel {
                sector,
                energy,
                multiplicity,
            }
        }
    }
}

/// Ground-state energy within the parameters' sector: `-2 Σ_{k>0} ω_k` for even
/// parity, the parity-projected minimum for odd parity.
pub fn ground_energy(params: &ModelParams) -> f64 {
    sector_level(params, params.sector, params.default_tol_zero()).energy
}

/// The true many-body ground level, comparing both parity sectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GroundLevel {
    pub energy: f64,
    pub multiplicity: u64,
    pub even: SectorLevel,
    pub odd: SectorLevel,
}

impl GroundLevel {
    /// Sector holding the ground state; `None` on an exact tie.
    pub fn winning_sector(&self, tie: f64) -> Option<Sector> {
        if (self.even.energy - self.odd.energy).abs() <= tie {
            None
        } else if self.even.energy < self.odd.energy {
            Some(Sector::EvenNF)
        } else {
            Some(Sector::OddNF)
        }
    }
}

pub fn ground_level(params: &ModelParams, tol_zero: f64) -> GroundLevel {
    let even = sector_level(params, Sector::EvenNF, tol_zero);
    let odd = sector_level(params, Sector::OddNF, tol_zero);
    let tie = params.level_tol();
    let energy = even.energy.min(odd.energy);
    let multiplicity = [even, odd]
        .iter()
        .filter(|s| s.energy <= energy + tie)
        .map(|s| s.multiplicity)
        .sum();
    GroundLevel {
        energy,
        multiplicity,
        even,
        odd,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegeneracyKind {
    None,
    LineSpinConserving,
    IsolatedPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegeneracyReport {
    /// Grid momenta of the parameters' sector with `ω < tol_zero`.
    pub zero_modes: Vec<f64>,
    /// `4^l` with `l = zero_modes.len()`, counting η-states of both pair parities.
    pub degeneracy: u64,
    pub kind: DegeneracyKind,
    /// Smallest mode energy on the sector grid.
    pub min_omega: f64,
    /// Parity-resolved multiplicity of the true ground level (both sectors).
    pub ground_multiplicity: u64,
}

pub fn classify_degeneracy(params: &ModelParams, tol_zero: f64) -> DegeneracyReport {
    let (paired, edges) = modes(params, tol_zero);
    let all = paired.iter().chain(edges.iter());
    let zero_modes: Vec<f64> = all.clone().filter(|m| m.omega < tol_zero).map(|m| m.k).collect();
    let min_omega = all.map(|m| m.omega).fold(f64::INFINITY, f64::min);
    let degeneracy = 4u64.saturating_pow(zero_modes.len() as u32);

    let kind = if zero_modes.is_empty() {
        DegeneracyKind::None
    } else if (params.jx - params.jy).abs() <= tol_zero && params.h.abs() < 2.0 * params.jx.abs() {
        DegeneracyKind::LineSpinConserving
    } else {
        // Away from the line ω vanishes only where sin 2k = 0, which forces
        // h = ±(Jx+Jy) (or Jx = -Jy with h = 0).
        DegeneracyKind::IsolatedPoint
    };
    DegeneracyReport {
        zero_modes,
        degeneracy,
        kind,
        min_omega,
        ground_multiplicity: ground_level(params, tol_zero).multiplicity,
    }
}
