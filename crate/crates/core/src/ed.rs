//! Exact diagonalization of the spin Hamiltonian on small periodic chains.
//!
//! Basis convention: site `j` is bit `j` of the basis index (site 0 least
//! significant), bit value 0 is spin up. Two-site matrices use the index
//! `2·bit(l) + bit(m)`, matching [`XStateRdm`](crate::correlators::XStateRdm).
//!
//! The spectrum is computed block by block: the Hamiltonian conserves the
//! parity of the up-spin count and commutes with translations, so each
//! (parity, lattice momentum) block is diagonalized densely. A plain dense
//! build of the full matrix is kept for cross-checks on short chains.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4, SymmetricEigen};

use crate::correlators::C64;
use crate::error::{Error, Result};
use crate::measures::{concurrence_general, discord_general, mutual_information_general};
use crate::model::ModelParams;

pub const MAX_SITES: usize = 12;

/// Default window for counting a level as part of the ground manifold.
pub const DEG_TOL: f64 = 1e-8;

fn check_size(n: usize) -> Result<()> {
    if !(4..=MAX_SITES).contains(&n) || n % 2 != 0 {
        return Err(Error::InvalidParams(format!(
            "exact diagonalization needs an even chain length in 4..={MAX_SITES}, got {n}"
        )));
    }
    Ok(())
}

/// Matrix elements of `H` acting on one basis state: `(diagonal, [(target, value)])`.
fn row(params: &ModelParams, s: usize) -> (f64, Vec<(usize, f64)>) {
    let n = params.n();
    let bit = |j: usize| (s >> (j % n)) & 1;
    let diag = -params.h() * (0..n).map(|j| 1.0 - 2.0 * bit(j) as f64).sum::<f64>();
    let mut off = Vec::with_capacity(n);
    for l in 0..n {
        let (a, b) = ((l + n - 1) % n, (l + 1) % n);
        let zl = 1.0 - 2.0 * bit(l) as f64;
        // σʸσʸ gives -1 on equal bits and +1 on opposite bits.
        let c = if bit(a) == bit(b) {
            -zl * (params.jx() - params.jy())
        } else {
            -zl * (params.jx() + params.jy())
        };
        if c != 0.0 {
            off.push((s ^ (1 << a) ^ (1 << b), c));
        }
    }
    (diag, off)
}

/// Full `2^N × 2^N` Hamiltonian, real and symmetric in the σᶻ basis.
pub fn build_hamiltonian(params: &ModelParams) -> Result<DMatrix<f64>> {
    check_size(params.n())?;
    let dim = 1 << params.n();
    let mut h = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let (d, off) = row(params, s);
        h[(s, s)] += d;
        for (t, c) in off {
            h[(t, s)] += c;
        }
    }
    Ok(h)
}

/// `H|ψ⟩` without building the matrix.
pub fn apply(params: &ModelParams, psi: &DVector<C64>) -> Result<DVector<C64>> {
    check_size(params.n())?;
    let mut out = DVector::zeros(psi.len());
    for s in 0..psi.len() {
        if psi[s] == C64::new(0.0, 0.0) {
            continue;
        }
        let (d, off) = row(params, s);
        out[s] += psi[s] * d;
        for (t, c) in off {
            out[t] += psi[s] * c;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    pub n: usize,
    pub amplitudes: DVector<C64>,
}

impl DenseState {
    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn overlap(&self, other: &DenseState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub ground_energy: f64,
    /// Number of levels within the tolerance of the ground energy.
    pub multiplicity: usize,
    pub states: Vec<DenseState>,
}

fn rotate(s: usize, n: usize) -> usize {
    ((s << 1) | (s >> (n - 1))) & ((1 << n) - 1)
}

/// Orbit representative (smallest member) of every state plus the shift
/// taking the representative to it, and the orbit period.
struct Orbits {
    rep: Vec<usize>,
    shift: Vec<usize>,
    period: Vec<usize>,
}

impl Orbits {
    fn new(n: usize) -> Self {
        let dim = 1 << n;
        let mut rep = vec![usize::MAX; dim];
        let mut shift = vec![0; dim];
        let mut period = vec![0; dim];
        for s in 0..dim {
            if rep[s] != usize::MAX {
                continue;
            }
            // s is the smallest unvisited state, hence the representative.
            let mut t = s;
            let mut r = 0;
            loop {
                if rep[t] == usize::MAX {
                    rep[t] = s;
                    shift[t] = r;
                }
                t = rotate(t, n);
                r += 1;
                if t == s {
                    break;
                }
            }
            period[s] = r;
        }
        Orbits { rep, shift, period }
    }
}

struct Block {
    parity: u32,
    momentum: usize,
    reps: Vec<usize>,
    matrix: DMatrix<C64>,
}

fn blocks(params: &ModelParams, orbits: &Orbits) -> Vec<Block> {
    let n = params.n();
    let dim = 1usize << n;
    let mut out = Vec::new();
    let rows: HashMap<usize, (f64, Vec<(usize, f64)>)> = (0..dim)
        .filter(|&s| orbits.rep[s] == s)
        .map(|s| (s, row(params, s)))
        .collect();

    for parity in 0..2u32 {
        for m in 0..n {
            let q = 2.0 * PI * m as f64 / n as f64;
            let reps: Vec<usize> = (0..dim)
                .filter(|&s| orbits.rep[s] == s && s.count_ones() % 2 == parity)
                .filter(|&s| (m * orbits.period[s]) % n == 0)
                .collect();
            if reps.is_empty() {
                continue;
            }
            let index: HashMap<usize, usize> = reps.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let mut h = DMatrix::<C64>::zeros(reps.len(), reps.len());
            for (ia, &a) in reps.iter().enumerate() {
                let (d, off) = &rows[&a];
                h[(ia, ia)] += C64::new(*d, 0.0);
                let ra = orbits.period[a] as f64;
                for &(t, c) in off {
                    let b = orbits.rep[t];
                    let Some(&ib) = index.get(&b) else { continue };
                    let rb = orbits.period[b] as f64;
                    let phase = C64::from_polar(1.0, q * orbits.shift[t] as f64);
                    h[(ib, ia)] += phase * (c * (ra / rb).sqrt());
                }
            }
            out.push(Block {
                parity,
                momentum: m,
                reps,
                matrix: h,
            });
        }
    }
    out
}

fn expand(block: &Block, coeffs: &[C64], orbits: &Orbits, n: usize) -> DenseState {
    let q = 2.0 * PI * block.momentum as f64 / n as f64;
    let mut amp = DVector::zeros(1 << n);
    for (&a, &c) in block.reps.iter().zip(coeffs) {
        let period = orbits.period[a];
        let norm = (period as f64).sqrt();
        let mut t = a;
        for r in 0..period {
            amp[t] = c * C64::from_polar(1.0, -q * r as f64) / norm;
            t = rotate(t, n);
        }
    }
    DenseState { n, amplitudes: amp }
}

/// All `2^N` eigenvalues, ascending, from the symmetry blocks.
pub fn spectrum(params: &ModelParams) -> Result<Vec<f64>> {
    check_size(params.n())?;
    let orbits = Orbits::new(params.n());
    let mut levels: Vec<f64> = blocks(params, &orbits)
        .into_iter()
        .flat_map(|b| b.matrix.symmetric_eigenvalues().iter().copied().collect::<Vec<_>>())
        .collect();
    levels.sort_by(f64::total_cmp);
    Ok(levels)
}

/// All eigenvalues of one parity sector (`parity` = up-spin count mod 2).
pub fn sector_spectrum(params: &ModelParams, parity: u32) -> Result<Vec<f64>> {
    check_size(params.n())?;
    let orbits = Orbits::new(params.n());
    let mut levels: Vec<f64> = blocks(params, &orbits)
        .into_iter()
        .filter(|b| b.parity == parity)
        .flat_map(|b| b.matrix.symmetric_eigenvalues().iter().copied().collect::<Vec<_>>())
        .collect();
    levels.sort_by(f64::total_cmp);
    Ok(levels)
}

/// Ground energy, multiplicity and an orthonormal basis of the ground manifold.
pub fn ground_space(params: &ModelParams, deg_tol: f64) -> Result<SpectrumResult> {
    check_size(params.n())?;
    let n = params.n();
    let orbits = Orbits::new(n);
    let blocks = blocks(params, &orbits);
    let eigs: Vec<DVector<f64>> = blocks.iter().map(|b| b.matrix.symmetric_eigenvalues()).collect();
    let e0 = eigs
        .iter()
        .flat_map(|e| e.iter().copied())
        .fold(f64::INFINITY, f64::min);
    if !e0.is_finite() {
        return Err(Error::Numerical("eigensolver returned no finite level".into()));
    }

    let mut states = Vec::new();
    for (block, e) in blocks.iter().zip(&eigs) {
        if e.iter().all(|&v| v > e0 + deg_tol) {
            continue;
        }
        let full = SymmetricEigen::new(block.matrix.clone());
        for (i, &val) in full.eigenvalues.iter().enumerate() {
            if val <= e0 + deg_tol {
                let col: Vec<C64> = full.eigenvectors.column(i).iter().copied().collect();
                states.push(expand(block, &col, &orbits, n));
            }
        }
    }
    Ok(SpectrumResult {
        ground_energy: e0,
        multiplicity: states.len(),
        states,
    })
}

/// Ground manifold from one dense diagonalization of the full matrix.
pub fn ground_space_dense(params: &ModelParams, deg_tol: f64) -> Result<SpectrumResult> {
    let h = build_hamiltonian(params)?;
    let eig = SymmetricEigen::new(h);
    let e0 = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let states: Vec<DenseState> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &v)| v <= e0 + deg_tol)
        .map(|(i, _)| DenseState {
            n: params.n(),
            amplitudes: eig.eigenvectors.column(i).map(|v| C64::new(v, 0.0)),
        })
        .collect();
    Ok(SpectrumResult {
        ground_energy: e0,
        multiplicity: states.len(),
        states,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClusterFlavor {
    X,
    Y,
}

/// Applies `a` to qubit `j`; `a[out][in]` in the (up, down) basis.
fn apply_site(psi: &DVector<C64>, j: usize, a: &Matrix2<C64>) -> DVector<C64> {
    let mut out = DVector::zeros(psi.len());
    for s in 0..psi.len() {
        let b = (s >> j) & 1;
        for b2 in 0..2 {
            let t = (s & !(1 << j)) | (b2 << j);
            out[t] += a[(b2, b)] * psi[s];
        }
    }
    out
}

fn pauli(flavor: ClusterFlavor) -> Matrix2<C64> {
    let o = C64::new(0.0, 0.0);
    match flavor {
        ClusterFlavor::X => Matrix2::new(o, C64::new(1.0, 0.0), C64::new(1.0, 0.0), o),
        ClusterFlavor::Y => Matrix2::new(o, C64::new(0.0, -1.0), C64::new(0.0, 1.0), o),
    }
}

/// `Π_i ½(1 + σ_i + σ_{i+1} - σ_i σ_{i+1})` over all periodic bonds, applied to all-up.
pub fn cluster_state(n: usize, flavor: ClusterFlavor) -> Result<DenseState> {
    check_size(n)?;
    let s = pauli(flavor);
    let mut psi = DVector::zeros(1 << n);
    psi[0] = C64::new(1.0, 0.0);
    for i in 0..n {
        let j = (i + 1) % n;
        let a = apply_site(&psi, i, &s);
        let b = apply_site(&psi, j, &s);
        let ab = apply_site(&a, j, &s);
        psi = (psi + a + b - ab).unscale(2.0);
    }
    let norm = psi.norm();
    Ok(DenseState {
        n,
        amplitudes: psi.unscale(norm),
    })
}

/// Partial trace keeping `sites` (one or two), ordered as given.
pub fn reduce(state: &DenseState, sites: &[usize]) -> DMatrix<C64> {
    let k = sites.len();
    let dim = 1 << k;
    let mask: usize = sites.iter().map(|&j| 1 << j).sum();
    let sub = |s: usize| {
        sites
            .iter()
            .fold(0, |acc, &j| (acc << 1) | ((s >> j) & 1))
    };
    let embed = |rest: usize, i: usize| {
        sites.iter().enumerate().fold(rest, |acc, (pos, &j)| {
            acc | (((i >> (k - 1 - pos)) & 1) << j)
        })
    };
    let mut rho = DMatrix::zeros(dim, dim);
    let psi = &state.amplitudes;
    for s in 0..psi.len() {
        if psi[s] == C64::new(0.0, 0.0) {
            continue;
        }
        let i = sub(s);
        let rest = s & !mask;
        for j in 0..dim {
            rho[(i, j)] += psi[s] * psi[embed(rest, j)].conj();
        }
    }
    rho
}

/// Equal-weight mixture over the ground manifold, reduced to `sites`.
pub fn reduce_mixed(ground: &SpectrumResult, sites: &[usize]) -> DMatrix<C64> {
    let m = ground.states.len() as f64;
    ground
        .states
        .iter()
        .map(|s| reduce(s, sites))
        .fold(DMatrix::zeros(1 << sites.len(), 1 << sites.len()), |acc, r| acc + r)
        .unscale(m)
}

fn to4(m: &DMatrix<C64>) -> Matrix4<C64> {
    Matrix4::from_fn(|i, j| m[(i, j)])
}

#[derive(Clone, Debug)]
pub struct PairMeasures {
    pub rdm: Matrix4<C64>,
    pub concurrence: f64,
    pub mutual_information: f64,
    pub discord: f64,
}

pub fn measure_pair(ground: &SpectrumResult, pair: (usize, usize)) -> PairMeasures {
    let rdm = to4(&reduce_mixed(ground, &[pair.0, pair.1]));
    PairMeasures {
        concurrence: concurrence_general(&rdm),
        mutual_information: mutual_information_general(&rdm),
        discord: discord_general(&rdm),
        rdm,
    }
}

/// Observables of the (mixed, if degenerate) ground manifold.
#[derive(Clone, Debug)]
pub struct EdReport {
    pub energy: f64,
    pub multiplicity: usize,
    pub n: f64,
    pub mz: f64,
    pub e_global: f64,
    pub nearest: PairMeasures,
    pub next_nearest: PairMeasures,
    pub degenerate: bool,
}

pub fn measure_all(ground: &SpectrumResult) -> EdReport {
    let n_sites = ground.states[0].n;
    let n = (0..n_sites)
        .map(|j| reduce_mixed(ground, &[j])[(0, 0)].re)
        .sum::<f64>()
        / n_sites as f64;
    EdReport {
        energy: ground.ground_energy,
        multiplicity: ground.multiplicity,
        n,
        mz: 2.0 * n - 1.0,
        e_global: 4.0 * n * (1.0 - n),
        nearest: measure_pair(ground, (0, 1)),
        next_nearest: measure_pair(ground, (0, 2)),
        degenerate: ground.multiplicity > 1,
    }
}

pub fn report(params: &ModelParams) -> Result<EdReport> {
    Ok(measure_all(&ground_space(params, DEG_TOL)?))
}
