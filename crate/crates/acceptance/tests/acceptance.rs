//! Acceptance run. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails. Criteria that cannot hold for this model are kept
//! at full strength and are expected to fail.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cluster_chain::correlators::{XStateRdm, C64};
use cluster_chain::ed::{self, ClusterFlavor, DEG_TOL};
use cluster_chain::measures::{
    aligned_equatorial_basis, binary_entropy, concurrence, concurrence_general, conditional_entropy,
    discord, report, zeta, CorrelationReport, DiscordMode, MeasurementBasis, ReportOptions,
};
use cluster_chain::sweep::{
    self, derivative, scan_degeneracy, Axis, DerivativeSpec, Fixed, Observable, OutputSpec, ScanSpec,
    SweepSpec,
};
use cluster_chain::{
    ground_energy, ground_level, validation, ModelParams, MomentumGrid, Parameter, Result, Sector,
};
use cluster_chain_acceptance::{run_all, Check, Outcome};

fn p(jx: f64, jy: f64, h: f64, n: usize) -> Result<ModelParams> {
    ModelParams::new(jx, jy, h, n)
}

fn at(params: &ModelParams) -> Result<CorrelationReport> {
    report(params, &ReportOptions::default())
}

fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    Axis::linear(Parameter::H, a, b, count).points().expect("valid axis")
}

fn oracle_equivalence() -> Result<Outcome> {
    let summary = validation::run(&[8, 10, 12], 50, 2024)?;
    let (name, worst) = summary
        .max_deviation
        .iter()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, v)| (*k, *v))
        .unwrap_or(("none", 0.0));
    let fast = summary.elapsed < Duration::from_secs(60);
    Ok(Outcome::new(
        worst <= 1e-8 && fast && summary.compared == 150,
        format!(
            "{} points ({} degenerate skipped), worst |Δ| = {worst:.2e} ({name}), {:.1?}",
            summary.compared, summary.skipped_degenerate, summary.elapsed
        ),
    ))
}

fn cluster_limit() -> Result<Outcome> {
    let mut ok = true;
    let mut notes = Vec::new();
    for (jx, jy, flavor) in [(1.0, 0.0, ClusterFlavor::X), (0.0, 1.0, ClusterFlavor::Y)] {
        for n in [8, 12, 100] {
            let e = ground_energy(&p(jx, jy, 0.0, n)?);
            let err = (e + n as f64).abs();
            ok &= err <= 1e-12 * n as f64;
            if n == 100 {
                notes.push(format!("|E+N| = {err:.1e} at N=100"));
            }
        }
        let params = p(jx, jy, 0.0, 8)?;
        let ground = ed::ground_space(&params, DEG_TOL)?;
        let cluster = ed::cluster_state(8, flavor)?;
        let weight: f64 = ground.states.iter().map(|g| g.overlap(&cluster).norm_sqr()).sum();
        ok &= ground.multiplicity == 1 && weight >= 1.0 - 1e-10;
        notes.push(format!("{flavor:?}: overlap {weight:.15}, ED multiplicity {}", ground.multiplicity));
    }
    Ok(Outcome::new(ok, notes.join("; ")))
}

fn product_regime() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in [8, 100] {
        for h in [2.01, 2.5, 3.0, 5.0, 20.0] {
            for sign in [1.0, -1.0] {
                let r = at(&p(1.0, 1.0, sign * h, n)?)?;
                let devs = [r.mz - sign, r.e_global, r.c13, r.i13, r.d13];
                worst = devs.iter().fold(worst, |m, d| m.max(d.abs()));
            }
        }
    }
    Ok(Outcome::new(worst <= 1e-12, format!("max deviation {worst:.1e} over |h| in (2, 20], N = 8, 100")))
}

fn zero_field() -> Result<Outcome> {
    // ρ13 is diagonal at h = 0, so the optimal measurement is σᶻ rather than
    // the equatorial one: use the minimized discord.
    let options = ReportOptions { discord: DiscordMode::GridMinimize, ..ReportOptions::default() };
    let (mut flat, mut corr): (f64, f64) = (0.0, 0.0);
    for jy in linspace(-3.0, 3.0, 61) {
        for n in [8, 100] {
            let r = report(&p(1.0, jy, 0.0, n)?, &options)?;
            flat = flat.max(r.mz.abs()).max((r.e_global - 1.0).abs());
            corr = corr.max(r.c13.abs()).max(r.d13.abs());
        }
    }
    Ok(Outcome::new(
        flat <= 1e-12 && corr <= 1e-9,
        format!("max |Mz|, |Eglobal-1| = {flat:.1e}; max C13, D13 = {corr:.1e}"),
    ))
}

fn nearest_neighbour() -> Result<Outcome> {
    let mut c_d: f64 = 0.0;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for jy in linspace(-3.0, 3.0, 101) {
        for h in linspace(-3.0, 3.0, 101) {
            let r = at(&p(1.0, jy, h, 100)?)?;
            c_d = c_d.max(r.c12.abs()).max(r.d12.abs());
            if r.i12 > best.0 {
                best = (r.i12, jy, h);
            }
        }
    }
    let (max_i, jy, h) = best;
    // A located maximum needs a value above roundoff, sitting near Jy = Jx, h = 0.
    let located = max_i > 1e-12 && (jy - 1.0).abs() <= 0.25 && h.abs() <= 0.25;
    Ok(Outcome::new(
        c_d <= 1e-12 && max_i <= 2e-3 && located,
        format!(
            "max |C12|, |D12| = {c_d:.1e}; max I12 = {max_i:.1e} at (Jy, h) = ({jy:.2}, {h:.2}); \
             bound {}, located near (1, 0): {located}",
            if max_i <= 2e-3 { "holds" } else { "violated" }
        ),
    ))
}

/// Distinct `h = 2(Jx) cos 2k` over the even grid inside `(lo, hi)`, ascending.
fn staircase_jumps(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut jumps: Vec<f64> = MomentumGrid::for_sector(n, Sector::EvenNF)
        .paired
        .iter()
        .map(|k| 2.0 * (2.0 * k).cos())
        .filter(|h| *h > lo + 1e-9 && *h < hi - 1e-9)
        .collect();
    jumps.sort_by(f64::total_cmp);
    jumps.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    jumps
}

fn staircase() -> Result<Outcome> {
    let n = 100;
    let jumps = staircase_jumps(n, 0.0, 2.0);
    let steps = 4000;
    let hs: Vec<f64> = (0..steps).map(|i| (i as f64 + 0.5) * 2.0 / steps as f64).collect();
    let spec = SweepSpec {
        axis1: Axis::list(Parameter::Jy, vec![1.0]),
        axis2: Axis::list(Parameter::H, hs.clone()),
        fixed: Fixed { jx: Some(1.0), n: Some(n), ..Fixed::default() },
        observables: vec![Observable::Mz],
        derivatives: Vec::new(),
        sector: Sector::EvenNF,
        output: OutputSpec::default(),
        discord: DiscordMode::FixedBasis,
        tol_zero: None,
        thermodynamic: false,
    };
    let table = sweep::run_sweep(&spec)?;
    let mz: Vec<f64> = table.rows.iter().map(|r| r.values[0]).collect();

    let mut observed = Vec::new();
    let mut plateau_spread: f64 = 0.0;
    let mut start = 0;
    for i in 1..mz.len() {
        if (mz[i] - mz[i - 1]).abs() > 1e-12 {
            observed.push((hs[i - 1], hs[i]));
            start = i;
        } else {
            let lo = mz[start..=i].iter().copied().fold(f64::INFINITY, f64::min);
            let hi = mz[start..=i].iter().copied().fold(f64::NEG_INFINITY, f64::max);
            plateau_spread = plateau_spread.max(hi - lo);
        }
    }
    let matched = observed.len() == jumps.len()
        && observed.iter().zip(&jumps).all(|((a, b), j)| a < j && j < b);
    Ok(Outcome::new(
        matched && plateau_spread <= 1e-12,
        format!(
            "{} predicted jumps, {} observed in a {steps}-point sweep, all bracketed: {matched}; \
             plateau spread {plateau_spread:.1e}",
            jumps.len(),
            observed.len()
        ),
    ))
}

/// On-grid zero modes at `N`: points where some grid momentum has `ω = 0` exactly.
fn zero_mode_points(n: usize) -> Result<Vec<ModelParams>> {
    let mut out = Vec::new();
    for jy in [-0.5, 0.0, 0.5, 2.0] {
        for sign in [1.0, -1.0] {
            out.push(p(1.0, jy, sign * (1.0 + jy), n)?);
        }
    }
    for k in MomentumGrid::union(n) {
        let h = 2.0 * (2.0 * k).cos();
        if h.abs() < 2.0 - 1e-9 {
            out.push(p(1.0, 1.0, h, n)?);
        }
    }
    out.push(p(1.0, -1.0, 0.0, n)?);
    Ok(out)
}

fn degeneracy_loci() -> Result<Outcome> {
    let (jys, hs) = (linspace(-2.0, 2.0, 201), linspace(-3.0, 3.0, 201));
    let spec = ScanSpec {
        axis1: Axis::linear(Parameter::Jy, -2.0, 2.0, 201),
        axis2: Axis::linear(Parameter::H, -3.0, 3.0, 201),
        fixed: Fixed { jx: Some(1.0), n: Some(100), ..Fixed::default() },
        threshold: None,
        output: OutputSpec::default(),
    };
    let hits = scan_degeneracy(&spec)?;
    let dh = hs[1] - hs[0];
    let djy = jys[1] - jys[0];

    let mut expected = 0;
    let mut found = 0;
    for &jy in &jys {
        for line in [1.0 + jy, -(1.0 + jy)] {
            if line.abs() > 3.0 {
                continue;
            }
            expected += 1;
            if hits.iter().any(|h| h.coords[0] == jy && (h.coords[1] - line).abs() <= dh) {
                found += 1;
            }
        }
    }
    // Hits off the h = ±(Jx+Jy) lines come from the soft modes around Jy = Jx.
    let off_line: Vec<f64> = hits
        .iter()
        .filter(|h| (h.coords[1].abs() - (1.0 + h.coords[0]).abs()).abs() > dh)
        .map(|h| (h.coords[0] - 1.0).abs())
        .collect();
    let spread = off_line.iter().copied().fold(0.0, f64::max);
    let scan_ok = found == expected;

    // ED ground manifolds at N = 8: 4-fold exactly at on-grid zero modes.
    let n = 8;
    let mut on_grid = Vec::new();
    for params in zero_mode_points(n)? {
        let g = ed::ground_space(&params, DEG_TOL)?;
        let analytic = ground_level(&params, params.default_tol_zero()).multiplicity;
        on_grid.push((params, g.multiplicity, analytic));
    }
    let mut off_grid_four = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let params = p(1.0, rng.random_range(-2.0..=2.0), rng.random_range(-3.0..=3.0), n)?;
        if ed::ground_space(&params, DEG_TOL)?.multiplicity == 4 {
            off_grid_four += 1;
        }
    }
    let four_fold = on_grid.iter().filter(|(_, m, _)| *m == 4).count();
    let ed_ok = four_fold == on_grid.len() && off_grid_four == 0;
    let agree = on_grid.iter().all(|(_, m, a)| *m as u64 == *a);
    let mut mults: Vec<usize> = on_grid.iter().map(|(_, m, _)| *m).collect();
    mults.sort_unstable();
    mults.dedup();

    Ok(Outcome::new(
        scan_ok && ed_ok,
        format!(
            "scan: {found}/{expected} line cells recovered, {} hits, {} off-line within |Jy-Jx| <= {spread:.2} ({:.0} cells); \
             ED N=8: {four_fold}/{} zero-mode points 4-fold (multiplicities seen {mults:?}), \
             ED = parity-resolved analytic multiplicity: {agree}",
            hits.len(),
            off_line.len(),
            spread / djy,
            on_grid.len()
        ),
    ))
}

fn derivative_null() -> Result<Outcome> {
    let options = ReportOptions::default();
    let jumps = staircase_jumps(100, -2.0, 2.0);
    let interiors: Vec<f64> = jumps.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();

    let mut null: f64 = 0.0;
    let mut unexplained = 0;
    for &h in &interiors {
        let params = p(1.0, 1.0, h, 100)?;
        for wrt in [Parameter::Jy, Parameter::H] {
            let fine = derivative(&params, Observable::C13, wrt, 1e-6, &options)?;
            null = null.max(fine.value.abs());
            // At the default step the truncation error must be covered by the estimate.
            let coarse = derivative(&params, Observable::C13, wrt, 1e-4, &options)?;
            if coarse.value.abs() > coarse.error + 1e-8 {
                unexplained += 1;
            }
        }
    }

    // Peak of |dC13/dJy| across h = Jx + Jy as N and the Jy grid double together.
    let mut peaks = Vec::new();
    for (n, count) in [(100, 41), (200, 81), (400, 161), (800, 321), (1600, 641)] {
        let spec = SweepSpec {
            axis1: Axis::list(Parameter::H, vec![1.5]),
            axis2: Axis::linear(Parameter::Jy, 0.3, 0.7, count),
            fixed: Fixed { jx: Some(1.0), n: Some(n), ..Fixed::default() },
            observables: Vec::new(),
            derivatives: vec![DerivativeSpec {
                observable: Observable::C13,
                with_respect_to: Parameter::Jy,
                step: 1e-4,
            }],
            sector: Sector::EvenNF,
            output: OutputSpec::default(),
            discord: DiscordMode::FixedBasis,
            tol_zero: None,
            thermodynamic: false,
        };
        let table = sweep::run_sweep(&spec)?;
        peaks.push(table.rows.iter().map(|r| r.values[0].abs()).fold(0.0, f64::max));
    }
    let growing = peaks.windows(2).all(|w| w[1] > w[0]);
    let peaks_txt: Vec<String> = peaks.iter().map(|v| format!("{v:.3}")).collect();
    Ok(Outcome::new(
        null <= 1e-8 && unexplained == 0 && growing,
        format!(
            "{} plateau interiors: max |dC13| = {null:.1e} (step 1e-6), {unexplained} unexplained at step 1e-4; \
             peaks {} increasing: {growing}",
            interiors.len(),
            peaks_txt.join(" < ")
        ),
    ))
}

fn random_x_state(rng: &mut ChaCha8Rng) -> XStateRdm {
    let a: [f64; 3] = [rng.random(), rng.random(), rng.random()];
    let total = a[0] + a[1] + 2.0 * a[2];
    let (u, v, w) = (a[0] / total, a[1] / total, a[2] / total);
    // Sometimes saturate the coherences (rank-deficient states).
    let mut radius = || if rng.random_bool(0.1) { 1.0 } else { rng.random::<f64>() };
    let (rx, rz) = (radius(), radius());
    let x = C64::from_polar(rx * (u * v).sqrt(), rng.random_range(-PI..PI));
    let z = C64::from_polar(rz * w, rng.random_range(-PI..PI));
    XStateRdm { u, v, w, x, z, separation: 2 }
}

fn measure_identities() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut conc, mut canon, mut aligned): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let mut excess = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let rdm = random_x_state(&mut rng);
        rdm.check()?;
        conc = conc.max((concurrence(&rdm)? - concurrence_general(&rdm.to_matrix())).abs());

        let h_zeta = binary_entropy(zeta(&rdm)?);
        let real = XStateRdm { x: C64::new(rdm.x.norm(), 0.0), z: C64::new(rdm.z.norm(), 0.0), ..rdm };
        canon = canon.max((h_zeta - conditional_entropy(&real, MeasurementBasis::new(PI / 2.0, 0.0))).abs());
        aligned = aligned.max((h_zeta - conditional_entropy(&rdm, aligned_equatorial_basis(&rdm))).abs());

        let single = rdm.marginal_m();
        let grid = discord(&rdm, &single, DiscordMode::GridMinimize)?;
        let fixed = discord(&rdm, &single, DiscordMode::FixedBasis)?;
        excess = excess.max(grid - fixed);
    }
    Ok(Outcome::new(
        conc <= 1e-10 && canon <= 1e-10 && aligned <= 1e-10 && excess <= 1e-9,
        format!(
            "10000 states: concurrence {conc:.1e}, H(ζ) vs Q(π/2,0) {canon:.1e} (aligned phase {aligned:.1e}), \
             max(grid - fixed) = {excess:.1e}"
        ),
    ))
}

fn field_reversal() -> Result<Outcome> {
    let mut even: f64 = 0.0;
    let mut odd: f64 = 0.0;
    for jy in [-2.0, -0.5, 0.5, 1.0, 2.5] {
        for h in linspace(-3.0, 3.0, 41) {
            let a = at(&p(1.0, jy, h, 100)?)?;
            let b = at(&p(1.0, jy, -h, 100)?)?;
            let pairs = [
                (a.energy, b.energy),
                (a.c12, b.c12),
                (a.c13, b.c13),
                (a.i12, b.i12),
                (a.i13, b.i13),
                (a.d12, b.d12),
                (a.d13, b.d13),
                (a.e_global, b.e_global),
            ];
            even = pairs.iter().fold(even, |m, (x, y)| m.max((x - y).abs()));
            odd = odd.max((a.mz + b.mz).abs());
        }
    }
    Ok(Outcome::new(
        even <= 1e-10 && odd <= 1e-10,
        format!("N=100: max |f(h) - f(-h)| = {even:.1e}, max |Mz(h) + Mz(-h)| = {odd:.1e}"),
    ))
}

fn main() -> ExitCode {
    let checks = [
        Check { id: "1", title: "analytic vs exact diagonalization", run: || Outcome::from_result(oracle_equivalence()) },
        Check { id: "2", title: "cluster-state limit", run: || Outcome::from_result(cluster_limit()) },
        Check { id: "3", title: "product-state regime", run: || Outcome::from_result(product_regime()) },
        Check { id: "4", title: "zero-field values", run: || Outcome::from_result(zero_field()) },
        Check { id: "5", title: "nearest-neighbour suppression", run: || Outcome::from_result(nearest_neighbour()) },
        Check { id: "6", title: "magnetisation staircase", run: || Outcome::from_result(staircase()) },
        Check { id: "7", title: "degeneracy loci", run: || Outcome::from_result(degeneracy_loci()) },
        Check { id: "8", title: "derivative null and peak growth", run: || Outcome::from_result(derivative_null()) },
        Check { id: "9", title: "two-qubit measure identities", run: || Outcome::from_result(measure_identities()) },
        Check { id: "10", title: "field-reversal symmetry", run: || Outcome::from_result(field_reversal()) },
    ];
    if run_all(&checks) == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
