//! Momentum sums and the one- and two-site reduced density matrices.
//!
//! Site occupation `n_l = ⟨c†_l c_l⟩` is the probability of spin up. Pair
//! correlators between sites `l` and `l+p` follow from
//!
//! ```text
//! γ(p) = (2/N) Σ_{k>0} cos(pk) sin²(θ_k/2)
//! ξ(p) = -(1/N) Σ_{k>0} sin(pk) sin θ_k
//! ```
//!
//! Odd separations vanish identically on every grid since the chain splits
//! into two decoupled sublattices.

use std::f64::consts::PI;

use nalgebra::{Complex, Matrix4};

use crate::error::{Error, Result};
use crate::model::{allowed_momenta, couplings, mode, ModelParams};

pub type C64 = Complex<f64>;

/// How momentum sums are evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SumMode {
    /// Direct sum over the sector's finite-N grid.
    #[default]
    Grid,
    /// `N → ∞`: sums become integrals over `k ∈ (0, π)`.
    Thermodynamic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuxSums {
    /// `gamma[p]` for `p = 0..=p_max`.
    pub gamma: Vec<f64>,
    pub xi: Vec<f64>,
    /// Site occupation, identical to `gamma[0]`.
    pub n: f64,
    /// Number of grid modes treated with the zero-mode convention.
    pub zero_modes: usize,
}

impl AuxSums {
    pub fn gamma(&self, p: usize) -> f64 {
        self.gamma[p]
    }

    pub fn xi(&self, p: usize) -> f64 {
        self.xi[p]
    }
}

pub fn aux_sums(params: &ModelParams, p_max: usize) -> AuxSums {
    aux_sums_with(params, p_max, params.default_tol_zero(), SumMode::Grid)
}

pub fn aux_sums_with(params: &ModelParams, p_max: usize, tol_zero: f64, sum_mode: SumMode) -> AuxSums {
    let p_max = p_max.max(2);
    match sum_mode {
        SumMode::Grid => grid_sums(params, p_max, tol_zero),
        SumMode::Thermodynamic => integral_sums(params, p_max, tol_zero),
    }
}

fn grid_sums(params: &ModelParams, p_max: usize, tol_zero: f64) -> AuxSums {
    let nf = params.n() as f64;
    let grid = allowed_momenta(params);
    let mut gamma = vec![0.0; p_max + 1];
    let mut xi = vec![0.0; p_max + 1];
    let mut zero_modes = 0;

    // Accumulate unscaled so that saturated occupations divide out exactly.
    for &k in &grid.paired {
        let m = mode(params, k, tol_zero);
        zero_modes += m.zero_mode as usize;
        for p in 0..=p_max {
            let pk = p as f64 * k;
            gamma[p] += 2.0 * pk.cos() * m.occ_amp2;
            xi[p] -= pk.sin() * m.sin_theta;
        }
    }
    // Unpaired edge modes count once and carry no anomalous part.
    for &k in &grid.edges {
        let m = mode(params, k, tol_zero);
        zero_modes += m.zero_mode as usize;
        for (p, g) in gamma.iter_mut().enumerate() {
            *g += (p as f64 * k).cos() * m.occ_amp2;
        }
    }
    for v in gamma.iter_mut().chain(xi.iter_mut()) {
        *v /= nf;
    }
    AuxSums {
        n: gamma[0],
        gamma,
        xi,
        zero_modes,
    }
}

fn integral_sums(params: &ModelParams, p_max: usize, tol_zero: f64) -> AuxSums {
    // Integrands jump or kink where A_k changes sign; split there.
    let mut cuts = vec![0.0, PI];
    let s = params.jx() + params.jy();
    if s != 0.0 && (params.h() / s).abs() <= 1.0 {
        let k0 = 0.5 * (params.h() / s).acos();
        cuts.extend([k0, PI - k0]);
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let integrate = |f: &dyn Fn(f64) -> f64| -> f64 {
        cuts.windows(2)
            .map(|w| quadrature::integrate(f, w[0], w[1], 1e-14).integral)
            .sum()
    };

    let mut gamma = Vec::with_capacity(p_max + 1);
    let mut xi = Vec::with_capacity(p_max + 1);
    for p in 0..=p_max {
        let pf = p as f64;
        gamma.push(integrate(&|k| (pf * k).cos() * mode(params, k, tol_zero).occ_amp2) / PI);
        xi.push(-integrate(&|k| (pf * k).sin() * mode(params, k, tol_zero).sin_theta) / (2.0 * PI));
    }
    AuxSums {
        n: gamma[0],
        gamma,
        xi,
        zero_modes: 0,
    }
}

/// Fraction of spin-up sites.
pub fn occupation(params: &ModelParams) -> f64 {
    aux_sums(params, 2).n
}

/// `M^z = 2n - 1`.
pub fn magnetisation(params: &ModelParams) -> f64 {
    2.0 * occupation(params) - 1.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleSiteRdm {
    pub p_up: f64,
    pub p_down: f64,
}

impl SingleSiteRdm {
    pub fn from_occupation(n: f64) -> Self {
        SingleSiteRdm {
            p_up: n,
            p_down: 1.0 - n,
        }
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        [self.p_up, self.p_down]
    }
}

/// Two-qubit state with nonzero entries only on the diagonal and anti-diagonal.
///
/// In the basis `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` of sites `(l, m)`:
///
/// ```text
///     ⎡ u   0   0   x*⎤
/// ρ = ⎢ 0   w   z*  0 ⎥
///     ⎢ 0   z   w   0 ⎥
///     ⎣ x   0   0   v ⎦
/// ```
///
/// so `x = ⟨σ⁺_l σ⁺_m⟩` and `z = ⟨σ⁺_l σ⁻_m⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateRdm {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub x: C64,
    pub z: C64,
    pub separation: usize,
}

const PSD_TOL: f64 = 1e-10;

impl XStateRdm {
    pub fn to_matrix(&self) -> Matrix4<C64> {
        let r = |v: f64| C64::new(v, 0.0);
        let o = C64::new(0.0, 0.0);
        Matrix4::new(
            r(self.u), o, o, self.x.conj(),
            o, r(self.w), self.z.conj(), o,
            o, self.z, r(self.w), o,
            self.x, o, o, r(self.v),
        )
    }

    /// Reads the X-form elements of a translation-invariant two-site matrix.
    /// The two middle diagonal entries are averaged.
    pub fn from_matrix(m: &Matrix4<C64>, separation: usize) -> Self {
        XStateRdm {
            u: m[(0, 0)].re,
            v: m[(3, 3)].re,
            w: 0.5 * (m[(1, 1)].re + m[(2, 2)].re),
            x: m[(3, 0)],
            z: m[(2, 1)],
            separation,
        }
    }

    /// `[(u+v) ± √((u−v)² + 4|x|²)]/2` then `w ± |z|`.
    pub fn eigenvalues(&self) -> [f64; 4] {
        let root = ((self.u - self.v).powi(2) + 4.0 * self.x.norm_sqr()).sqrt();
        let z = self.z.norm();
        [
            0.5 * (self.u + self.v + root),
            0.5 * (self.u + self.v - root),
            self.w + z,
            self.w - z,
        ]
    }

    pub fn marginal_l(&self) -> SingleSiteRdm {
        SingleSiteRdm {
            p_up: self.u + self.w,
            p_down: self.w + self.v,
        }
    }

    pub fn marginal_m(&self) -> SingleSiteRdm {
        self.marginal_l()
    }

    /// Trace, positivity and block conditions.
    pub fn check(&self) -> Result<()> {
        let vals = [self.u, self.v, self.w, self.x.re, self.x.im, self.z.re, self.z.im];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Consistency(format!("non-finite rdm element: {self:?}")));
        }
        let trace = self.u + self.v + 2.0 * self.w;
        if (trace - 1.0).abs() > 1e-12 {
            return Err(Error::Consistency(format!("rdm trace {trace} != 1")));
        }
        if self.eigenvalues().iter().any(|&e| e < -PSD_TOL) {
            return Err(Error::Consistency(format!(
                "rdm not positive: eigenvalues {:?}",
                self.eigenvalues()
            )));
        }
        Ok(())
    }
}

/// Two-site matrix for `separation ∈ {1, 2}` from precomputed sums.
pub fn two_site_rdm_from(sums: &AuxSums, separation: usize) -> Result<XStateRdm> {
    let n = sums.n;
    let (g, xi) = match separation {
        1 | 2 => (sums.gamma[separation], sums.xi[separation]),
        other => {
            return Err(Error::InvalidParams(format!(
                "separation must be 1 or 2, got {other}"
            )))
        }
    };
    // Between l and l+2 the Jordan-Wigner string crosses one site: factor (1-2n).
    let (z, x) = if separation == 1 {
        (g, -xi)
    } else {
        let g1 = sums.gamma[1];
        (g * (1.0 - 2.0 * n) + 2.0 * g1 * g1, -xi * (1.0 - 2.0 * n))
    };
    let u = n * n - g * g + xi * xi;
    let w = n - u;
    let rdm = XStateRdm {
        u,
        v: 1.0 - u - 2.0 * w,
        w,
        x: C64::new(x, 0.0),
        z: C64::new(z, 0.0),
        separation,
    };
    rdm.check()?;
    Ok(rdm)
}

pub fn two_site_rdm(params: &ModelParams, separation: usize) -> Result<XStateRdm> {
    two_site_rdm_from(&aux_sums(params, 2), separation)
}

/// Mode energy on a fine uniform k grid, for reporting the gap outside grid momenta.
pub fn min_omega_continuum(params: &ModelParams, samples: usize) -> f64 {
    (0..=samples)
        .map(|i| {
            let (a, b) = couplings(params, PI * i as f64 / samples as f64);
            a.hypot(b)
        })
        .fold(f64::INFINITY, f64::min)
}
