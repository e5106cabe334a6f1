//! Analytic solution versus exact diagonalization at random parameter points.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::correlators::XStateRdm;
use crate::ed;
use crate::error::Result;
use crate::measures::{self, DiscordMode, ReportOptions};
use crate::model::ModelParams;

/// Absolute differences of every compared quantity at one point.
#[derive(Clone, Debug)]
pub struct PointComparison {
    pub params: ModelParams,
    pub deviations: Vec<(&'static str, f64)>,
}

fn rdm_deviations(tag: [&'static str; 5], a: &XStateRdm, b: &XStateRdm) -> [(&'static str, f64); 5] {
    [
        (tag[0], (a.u - b.u).abs()),
        (tag[1], (a.v - b.v).abs()),
        (tag[2], (a.w - b.w).abs()),
        (tag[3], (a.x - b.x).norm()),
        (tag[4], (a.z - b.z).norm()),
    ]
}

/// Compares all observables at one point. `None` if either side is degenerate.
pub fn compare_point(params: &ModelParams) -> Result<Option<PointComparison>> {
    let options = ReportOptions {
        discord: DiscordMode::GridMinimize,
        ..ReportOptions::default()
    };
    let analytic = measures::report(params, &options)?;
    if analytic.degenerate {
        return Ok(None);
    }
    let ground = ed::ground_space(params, ed::DEG_TOL)?;
    if ground.multiplicity > 1 {
        return Ok(None);
    }
    let oracle = ed::measure_all(&ground);
    let ed12 = XStateRdm::from_matrix(&oracle.nearest.rdm, 1);
    let ed13 = XStateRdm::from_matrix(&oracle.next_nearest.rdm, 2);

    let mut deviations = vec![
        ("E", (analytic.energy - oracle.energy).abs()),
        ("Mz", (analytic.mz - oracle.mz).abs()),
        ("Eglobal", (analytic.e_global - oracle.e_global).abs()),
        ("C12", (analytic.c12 - oracle.nearest.concurrence).abs()),
        ("C13", (analytic.c13 - oracle.next_nearest.concurrence).abs()),
        ("I13", (analytic.i13 - oracle.next_nearest.mutual_information).abs()),
        ("D13", (analytic.d13 - oracle.next_nearest.discord).abs()),
    ];
    deviations.extend(rdm_deviations(["u12", "v12", "w12", "x12", "z12"], &analytic.rdm12, &ed12));
    deviations.extend(rdm_deviations(["u13", "v13", "w13", "x13", "z13"], &analytic.rdm13, &ed13));
    Ok(Some(PointComparison {
        params: *params,
        deviations,
    }))
}

#[derive(Clone, Debug)]
pub struct ValidationSummary {
    pub compared: usize,
    pub skipped_degenerate: usize,
    /// Largest deviation per quantity over all compared points.
    pub max_deviation: BTreeMap<&'static str, f64>,
    pub elapsed: Duration,
}

impl ValidationSummary {
    pub fn worst(&self) -> f64 {
        self.max_deviation.values().copied().fold(0.0, f64::max)
    }
}

/// `points` nondegenerate random points per chain length with `Jx = 1`,
/// `Jy ∈ [-2, 2]`, `h ∈ [-3, 3]`.
pub fn run(lengths: &[usize], points: usize, seed: u64) -> Result<ValidationSummary> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = ValidationSummary {
        compared: 0,
        skipped_degenerate: 0,
        max_deviation: BTreeMap::new(),
        elapsed: Duration::ZERO,
    };
    for &n in lengths {
        let mut done = 0;
        while done < points {
            let jy = rng.random_range(-2.0..=2.0);
            let h = rng.random_range(-3.0..=3.0);
            let params = ModelParams::new(1.0, jy, h, n)?;
            match compare_point(&params)? {
                None => summary.skipped_degenerate += 1,
                Some(cmp) => {
                    for (name, d) in cmp.deviations {
                        let e = summary.max_deviation.entry(name).or_insert(0.0);
                        *e = e.max(d);
                    }
                    done += 1;
                }
            }
        }
        summary.compared += done;
    }
    summary.elapsed = start.elapsed();
    Ok(summary)
}
