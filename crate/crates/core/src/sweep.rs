//! Parameter sweeps, finite-difference derivatives, degeneracy scans and
//! their CSV / JSON-lines serialization.

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::correlators::SumMode;
use crate::error::{Error, Result};
use crate::measures::{report_with_p, CorrelationReport, DiscordMode, ReportOptions};
use crate::model::{
    classify_degeneracy, ground_level, mode, DegeneracyKind, ModelParams, MomentumGrid, Parameter,
    Sector,
};

/// One swept parameter: either `count` evenly spaced values from `start` to
/// `stop` inclusive, or an explicit list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub parameter: Parameter,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
}

impl Axis {
    pub fn linear(parameter: Parameter, start: f64, stop: f64, count: usize) -> Self {
        Axis {
            parameter,
            start: Some(start),
            stop: Some(stop),
            count: Some(count),
            values: None,
        }
    }

    pub fn list(parameter: Parameter, values: Vec<f64>) -> Self {
        Axis {
            parameter,
            start: None,
            stop: None,
            count: None,
            values: Some(values),
        }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        match (self.start, self.stop, self.count, &self.values) {
            (Some(a), Some(b), Some(c), None) => {
                if c < 2 {
                    return Err(Error::Config(format!("axis `{}`: count must be >= 2", self.parameter.name())));
                }
                if !a.is_finite() || !b.is_finite() {
                    return Err(Error::Config(format!("axis `{}`: non-finite bounds", self.parameter.name())));
                }
                let step = (b - a) / (c - 1) as f64;
                Ok((0..c)
                    .map(|i| if i == c - 1 { b } else { a + step * i as f64 })
                    .collect())
            }
            (None, None, None, Some(v)) if !v.is_empty() => Ok(v.clone()),
            _ => Err(Error::Config(format!(
                "axis `{}` needs either start/stop/count or a non-empty values list",
                self.parameter.name()
            ))),
        }
    }

    /// Spacing of a linear axis, zero for single-valued lists.
    pub fn spacing(&self) -> Result<f64> {
        let p = self.points()?;
        Ok(p.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max))
    }
}

/// Values of the parameters not swept.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixed {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jx: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

impl Fixed {
    fn get(&self, p: Parameter) -> Option<f64> {
        match p {
            Parameter::Jx => self.jx,
            Parameter::Jy => self.jy,
            Parameter::H => self.h,
            Parameter::N => self.n.map(|n| n as f64),
        }
    }
}

const ALL_PARAMS: [Parameter; 4] = [Parameter::Jx, Parameter::Jy, Parameter::H, Parameter::N];

/// Builds the base parameters from two axes and the fixed values, checking
/// that every parameter is given exactly once.
fn base_params(axes: [&Axis; 2], fixed: &Fixed, sector: Sector) -> Result<ModelParams> {
    if axes[0].parameter == axes[1].parameter {
        return Err(Error::Config(format!(
            "both axes sweep `{}`",
            axes[0].parameter.name()
        )));
    }
    let mut vals = [0.0; 4];
    for (slot, p) in vals.iter_mut().zip(ALL_PARAMS) {
        let swept = axes.iter().find(|a| a.parameter == p);
        *slot = match (swept, fixed.get(p)) {
            (Some(a), None) => a.points()?[0],
            (None, Some(v)) => v,
            (Some(_), Some(_)) => {
                return Err(Error::Config(format!("`{}` is both swept and fixed", p.name())))
            }
            (None, None) => return Err(Error::Config(format!("`{}` is neither swept nor fixed", p.name()))),
        };
    }
    if vals[3].fract() != 0.0 || vals[3] < 0.0 {
        return Err(Error::Config(format!("chain length {} is not an integer", vals[3])));
    }
    Ok(ModelParams::new(vals[0], vals[1], vals[2], vals[3] as usize)?.with_sector(sector))
}

/// A scalar column of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Observable {
    Mz,
    Occupation,
    Energy,
    C12,
    C13,
    I12,
    I13,
    D12,
    D13,
    Eglobal,
    Gamma(usize),
    Xi(usize),
    /// `⟨σᶻ_l σᶻ_{l+s}⟩` for separation `s`.
    CorrZZ(usize),
    /// `⟨σ⁺_l σ⁺_{l+s}⟩`
    CorrPP(usize),
    /// `⟨σ⁺_l σ⁻_{l+s}⟩`
    CorrPM(usize),
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Observable::*;
        let pair = |s: usize| if s == 1 { "12" } else { "13" };
        match self {
            Mz => write!(f, "Mz"),
            Occupation => write!(f, "n"),
            Energy => write!(f, "E0"),
            C12 => write!(f, "C12"),
            C13 => write!(f, "C13"),
            I12 => write!(f, "I12"),
            I13 => write!(f, "I13"),
            D12 => write!(f, "D12"),
            D13 => write!(f, "D13"),
            Eglobal => write!(f, "Eglobal"),
            Gamma(p) => write!(f, "gamma_{p}"),
            Xi(p) => write!(f, "xi_{p}"),
            CorrZZ(s) => write!(f, "corrZZ_{}", pair(*s)),
            CorrPP(s) => write!(f, "corrPP_{}", pair(*s)),
            CorrPM(s) => write!(f, "corrPM_{}", pair(*s)),
        }
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use Observable::*;
        let bad = || Error::Config(format!("unknown observable `{s}`"));
        let sep = |suffix: &str| match suffix {
            "" | "_13" => Ok(2),
            "_12" => Ok(1),
            _ => Err(bad()),
        };
        Ok(match s {
            "Mz" => Mz,
            "n" => Occupation,
            "E0" => Energy,
            "C12" => C12,
            "C13" => C13,
            "I12" => I12,
            "I13" => I13,
            "D12" => D12,
            "D13" => D13,
            "Eglobal" => Eglobal,
            _ => {
                if let Some(p) = s.strip_prefix("gamma_") {
                    Gamma(p.parse().map_err(|_| bad())?)
                } else if let Some(p) = s.strip_prefix("xi_") {
                    Xi(p.parse().map_err(|_| bad())?)
                } else if let Some(r) = s.strip_prefix("corrZZ") {
                    CorrZZ(sep(r)?)
                } else if let Some(r) = s.strip_prefix("corrPP") {
                    CorrPP(sep(r)?)
                } else if let Some(r) = s.strip_prefix("corrPM") {
                    CorrPM(sep(r)?)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

impl Serialize for Observable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Observable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Observable {
    /// Highest γ/ξ order needed.
    fn p_max(&self) -> usize {
        match self {
            Observable::Gamma(p) | Observable::Xi(p) => *p,
            _ => 2,
        }
    }

    pub fn evaluate(&self, r: &CorrelationReport) -> f64 {
        use Observable::*;
        let rdm = |s: usize| if s == 1 { &r.rdm12 } else { &r.rdm13 };
        match self {
            Mz => r.mz,
            Occupation => r.n,
            Energy => r.energy,
            C12 => r.c12,
            C13 => r.c13,
            I12 => r.i12,
            I13 => r.i13,
            D12 => r.d12,
            D13 => r.d13,
            Eglobal => r.e_global,
            Gamma(p) => r.gamma[*p],
            Xi(p) => r.xi[*p],
            CorrZZ(s) => {
                let m = rdm(*s);
                m.u + m.v - 2.0 * m.w
            }
            CorrPP(s) => rdm(*s).x.re,
            CorrPM(s) => rdm(*s).z.re,
        }
    }
}

fn default_step() -> f64 {
    1e-4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivativeSpec {
    pub observable: Observable,
    pub with_respect_to: Parameter,
    #[serde(default = "default_step")]
    pub step: f64,
}

impl DerivativeSpec {
    pub fn column(&self) -> String {
        format!("d{}/d{}", self.observable, self.with_respect_to.name())
    }

    pub fn error_column(&self) -> String {
        format!("err_{}", self.column())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    /// Destination file; standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis1: Axis,
    pub axis2: Axis,
    pub fixed: Fixed,
    pub observables: Vec<Observable>,
    #[serde(default)]
    pub derivatives: Vec<DerivativeSpec>,
    #[serde(default)]
    pub sector: Sector,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub discord: DiscordMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol_zero: Option<f64>,
    /// Replace grid sums by integrals over the Brillouin zone.
    #[serde(default)]
    pub thermodynamic: bool,
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SweepSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        base_params([&self.axis1, &self.axis2], &self.fixed, self.sector)?;
        if self.observables.is_empty() && self.derivatives.is_empty() {
            return Err(Error::Config("nothing to evaluate".into()));
        }
        for d in &self.derivatives {
            if !(d.step > 0.0 && d.step.is_finite()) {
                return Err(Error::Config(format!("derivative step must be > 0, got {}", d.step)));
            }
            if d.with_respect_to == Parameter::N {
                return Err(Error::Config("derivatives with respect to n are not defined".into()));
            }
        }
        if let Some(t) = self.tol_zero {
            if !(t > 0.0) {
                return Err(Error::Config(format!("tol_zero must be > 0, got {t}")));
            }
        }
        let mut names = self.columns();
        let total = names.len();
        names.sort();
        names.dedup();
        if names.len() != total {
            return Err(Error::Config("duplicate output columns".into()));
        }
        Ok(())
    }

    fn options(&self) -> ReportOptions {
        ReportOptions {
            discord: self.discord,
            tol_zero: self.tol_zero,
            sum_mode: if self.thermodynamic { SumMode::Thermodynamic } else { SumMode::Grid },
        }
    }

    fn p_max(&self) -> usize {
        self.observables
            .iter()
            .chain(self.derivatives.iter().map(|d| &d.observable))
            .map(Observable::p_max)
            .max()
            .unwrap_or(2)
    }

    /// Value columns between the swept parameters and the degeneracy flag.
    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = self.observables.iter().map(|o| o.to_string()).collect();
        for d in &self.derivatives {
            cols.push(d.column());
            cols.push(d.error_column());
        }
        cols
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeEstimate {
    /// Central difference with step δ.
    pub value: f64,
    /// `(4/3)|D(δ) - D(δ/2)|`.
    pub error: f64,
    /// Some stencil point carries a zero mode or a degenerate ground level.
    pub unreliable: bool,
}

/// Central difference of `observable` in `wrt` with a Richardson error estimate.
pub fn derivative(
    params: &ModelParams,
    observable: Observable,
    wrt: Parameter,
    step: f64,
    options: &ReportOptions,
) -> Result<DerivativeEstimate> {
    if !(step > 0.0) {
        return Err(Error::InvalidParams(format!("step must be > 0, got {step}")));
    }
    let p_max = observable.p_max();
    let x0 = params.get(wrt);
    let mut unreliable = false;
    let mut eval = |dx: f64| -> Result<f64> {
        let r = report_with_p(&params.with(wrt, x0 + dx)?, options, p_max)?;
        unreliable |= r.degenerate;
        Ok(observable.evaluate(&r))
    };
    let d1 = (eval(step)? - eval(-step)?) / (2.0 * step);
    let d2 = (eval(0.5 * step)? - eval(-0.5 * step)?) / step;
    Ok(DerivativeEstimate {
        value: d1,
        error: 4.0 / 3.0 * (d1 - d2).abs(),
        unreliable,
    })
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    /// `[axis1, axis2]` values.
    pub params: [f64; 2],
    pub values: Vec<f64>,
    pub degenerate: bool,
}

/// Bitwise equality, so that NaN markers compare equal to themselves.
impl PartialEq for SweepRow {
    fn eq(&self, other: &Self) -> bool {
        let bits = |r: &SweepRow| -> Vec<u64> { r.params.iter().chain(&r.values).map(|v| v.to_bits()).collect() };
        self.degenerate == other.degenerate && bits(self) == bits(other)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec![
            self.spec.axis1.parameter.name().to_string(),
            self.spec.axis2.parameter.name().to_string(),
        ];
        h.extend(self.spec.columns());
        h.push("degenerate".into());
        h
    }

    /// Index of a value column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.spec.columns().iter().position(|c| c == name)
    }
}

/// Evaluates every grid point, axis2 varying fastest.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let base = base_params([&spec.axis1, &spec.axis2], &spec.fixed, spec.sector)?;
    let options = spec.options();
    let p_max = spec.p_max();
    let (a1, a2) = (spec.axis1.points()?, spec.axis2.points()?);
    let mut rows = Vec::with_capacity(a1.len() * a2.len());
    for &v1 in &a1 {
        for &v2 in &a2 {
            let params = base
                .with(spec.axis1.parameter, v1)?
                .with(spec.axis2.parameter, v2)?;
            let report = report_with_p(&params, &options, p_max)?;
            let mut values: Vec<f64> = spec.observables.iter().map(|o| o.evaluate(&report)).collect();
            for d in &spec.derivatives {
                let est = derivative(&params, d.observable, d.with_respect_to, d.step, &options)?;
                values.push(est.value);
                values.push(if est.unreliable { f64::NAN } else { est.error });
            }
            rows.push(SweepRow {
                params: [v1, v2],
                values,
                degenerate: report.degenerate,
            });
        }
    }
    Ok(SweepTable {
        spec: spec.clone(),
        rows,
    })
}

/// 17 significant digits, enough to round-trip any f64.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(table: &SweepTable, out: W) -> Result<()> {
    let mut out = out;
    writeln!(out, "# {}", serde_json::to_string(&table.spec)?)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(table.header())?;
    for row in &table.rows {
        let mut rec: Vec<String> = row.params.iter().map(|&v| format_float(v)).collect();
        rec.extend(row.values.iter().map(|&v| format_float(v)));
        rec.push(if row.degenerate { "1" } else { "0" }.into());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

fn parse_float(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad number `{s}` in table")))
}

pub fn read_csv<R: BufRead>(mut input: R) -> Result<SweepTable> {
    let mut first = String::new();
    input.read_line(&mut first)?;
    let spec_json = first
        .strip_prefix("# ")
        .ok_or_else(|| Error::Config("missing `# {spec}` header line".into()))?;
    let spec: SweepSpec = serde_json::from_str(spec_json.trim_end())?;
    let mut r = csv::Reader::from_reader(input);
    let expected = spec.columns().len() + 3;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != expected {
            return Err(Error::Config(format!("row has {} fields, expected {expected}", rec.len())));
        }
        let nums: Vec<f64> = rec.iter().take(expected - 1).map(parse_float).collect::<Result<_>>()?;
        rows.push(SweepRow {
            params: [nums[0], nums[1]],
            values: nums[2..].to_vec(),
            degenerate: &rec[expected - 1] == "1",
        });
    }
    Ok(SweepTable { spec, rows })
}

fn json_number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

pub fn write_jsonl<W: Write>(table: &SweepTable, mut out: W) -> Result<()> {
    writeln!(out, "{}", json!({ "spec": table.spec }))?;
    let header = table.header();
    for row in &table.rows {
        let mut obj = Map::new();
        let nums = row.params.iter().chain(&row.values);
        for (name, &v) in header.iter().zip(nums) {
            obj.insert(name.clone(), json_number(v));
        }
        obj.insert("degenerate".into(), Value::Bool(row.degenerate));
        writeln!(out, "{}", Value::Object(obj))?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<SweepTable> {
    let mut lines = input.lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Config("empty JSON-lines file".into()))??;
    let head: Value = serde_json::from_str(&first)?;
    let spec: SweepSpec = serde_json::from_value(head["spec"].clone())?;
    let mut table = SweepTable { spec, rows: Vec::new() };
    let header = table.header();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let obj: Value = serde_json::from_str(&line)?;
        let num = |name: &str| match &obj[name] {
            Value::Null => Ok(f64::NAN),
            v => v
                .as_f64()
                .ok_or_else(|| Error::Config(format!("field `{name}` is not a number"))),
        };
        let params = [num(&header[0])?, num(&header[1])?];
        let values = header[2..header.len() - 1]
            .iter()
            .map(|h| num(h))
            .collect::<Result<_>>()?;
        table.rows.push(SweepRow {
            params,
            values,
            degenerate: obj["degenerate"].as_bool().unwrap_or(false),
        });
    }
    Ok(table)
}

pub fn write_table<W: Write>(table: &SweepTable, format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(table, out),
        Format::Jsonl => write_jsonl(table, out),
    }
}

/// Grid of `(Jy, h)`-style points searched for vanishing mode energies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    pub axis1: Axis,
    pub axis2: Axis,
    pub fixed: Fixed,
    /// Flag points with a mode energy at or below this value. Defaults to half
    /// the summed axis spacings, i.e. a zero within about one grid cell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ScanSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ScanSpec = serde_json::from_str(text)?;
        spec.threshold()?;
        base_params([&spec.axis1, &spec.axis2], &spec.fixed, Sector::EvenNF)?;
        Ok(spec)
    }

    pub fn threshold(&self) -> Result<f64> {
        let t = match self.threshold {
            Some(t) => t,
            None => 0.5 * (self.axis1.spacing()? + self.axis2.spacing()?),
        };
        if !(t > 0.0) {
            return Err(Error::Config(format!("scan threshold must be > 0, got {t}")));
        }
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanHit {
    pub params: ModelParams,
    /// `[axis1, axis2]` values.
    pub coords: [f64; 2],
    /// Smallest mode energy over the momenta of both parity sectors.
    pub min_omega: f64,
    /// Momenta (either sector) with `ω ≤ threshold`.
    pub zero_modes: Vec<f64>,
    pub kind: DegeneracyKind,
    /// Ground-level multiplicity from the exact zero-mode classification.
    pub ground_multiplicity: u64,
}

/// All scan points with a (near-)zero mode, in axis order (axis2 fastest).
pub fn scan_degeneracy(spec: &ScanSpec) -> Result<Vec<ScanHit>> {
    let threshold = spec.threshold()?;
    let base = base_params([&spec.axis1, &spec.axis2], &spec.fixed, Sector::EvenNF)?;
    let (a1, a2) = (spec.axis1.points()?, spec.axis2.points()?);
    let mut hits = Vec::new();
    for &v1 in &a1 {
        for &v2 in &a2 {
            let params = base
                .with(spec.axis1.parameter, v1)?
                .with(spec.axis2.parameter, v2)?;
            let tol = params.default_tol_zero();
            let omegas: Vec<(f64, f64)> = MomentumGrid::union(params.n())
                .into_iter()
                .map(|k| (k, mode(&params, k, tol).omega))
                .collect();
            let min_omega = omegas.iter().map(|o| o.1).fold(f64::INFINITY, f64::min);
            if min_omega > threshold {
                continue;
            }
            let even = classify_degeneracy(&params, threshold);
            let odd = classify_degeneracy(&params.with_sector(Sector::OddNF), threshold);
            let kind = if even.kind != DegeneracyKind::None { even.kind } else { odd.kind };
            hits.push(ScanHit {
                params,
                coords: [v1, v2],
                min_omega,
                zero_modes: omegas.iter().filter(|o| o.1 <= threshold).map(|o| o.0).collect(),
                kind,
                ground_multiplicity: ground_level(&params, tol).multiplicity,
            });
        }
    }
    Ok(hits)
}

fn kind_name(k: DegeneracyKind) -> &'static str {
    match k {
        DegeneracyKind::None => "none",
        DegeneracyKind::LineSpinConserving => "line",
        DegeneracyKind::IsolatedPoint => "isolated",
    }
}

pub fn write_scan<W: Write>(spec: &ScanSpec, hits: &[ScanHit], format: Format, mut out: W) -> Result<()> {
    let names = [spec.axis1.parameter.name(), spec.axis2.parameter.name()];
    match format {
        Format::Csv => {
            writeln!(out, "# {}", serde_json::to_string(spec)?)?;
            let mut w = csv::Writer::from_writer(out);
            w.write_record([names[0], names[1], "min_omega", "zero_modes", "kind", "ground_multiplicity"])?;
            for h in hits {
                w.write_record([
                    format_float(h.coords[0]),
                    format_float(h.coords[1]),
                    format_float(h.min_omega),
                    h.zero_modes.len().to_string(),
                    kind_name(h.kind).to_string(),
                    h.ground_multiplicity.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Jsonl => {
            writeln!(out, "{}", json!({ "spec": spec }))?;
            for h in hits {
                let row = json!({
                    names[0]: json_number(h.coords[0]),
                    names[1]: json_number(h.coords[1]),
                    "min_omega": json_number(h.min_omega),
                    "zero_modes": h.zero_modes,
                    "kind": kind_name(h.kind),
                    "ground_multiplicity": h.ground_multiplicity,
                });
                writeln!(out, "{row}")?;
            }
        }
    }
    Ok(())
}
