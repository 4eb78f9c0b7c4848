//! Config-driven parameter sweeps, validation suites and comparison reports.

use crate::error::{Error, Result};
use crate::jost::NU_SPLIT_DEFAULT;
use crate::oracle::OracleConfig;
use crate::potential::{PotentialConfig, PotentialSpec};
use crate::scattering::{self, Pipeline};
use crate::special::{airy, bessel, gamma_one_plus_i_nu};
use crate::{derive_params, Complex};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
pub struct GridConfig {
    #[serde(default)]
    pub values: Vec<f64>,
    #[serde(default)]
    pub min: Option<f64>,
    #[serde(default)]
    pub max: Option<f64>,
    #[serde(default)]
    pub count: Option<usize>,
    /// "linear" or "log"
    #[serde(default)]
    pub spacing: Option<String>,
}

impl GridConfig {
    pub fn expand(&self) -> Result<Vec<f64>> {
        if !self.values.is_empty() {
            if self.values.iter().any(|&v| !(v > 0.0)) {
                return Err(Error::Config("grid values must be positive".into()));
            }
            return Ok(self.values.clone());
        }
        let (lo, hi, n) = match (self.min, self.max, self.count) {
            (Some(a), Some(b), Some(n)) if n >= 1 && b >= a && a > 0.0 => (a, b, n),
            _ => {
                return Err(Error::Config(
                    "grid needs either `values` or positive min/max/count".into(),
                ))
            }
        };
        if n == 1 {
            return Ok(vec![lo]);
        }
        let log = matches!(self.spacing.as_deref(), Some("log"));
        Ok((0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if log {
                    lo * (hi / lo).powf(t)
                } else {
                    lo + (hi - lo) * t
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct SweepConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    pub potential: PotentialConfig,
    pub e_grid: GridConfig,
    pub hbar_grid: GridConfig,
    #[serde(default = "default_pipeline")]
    pub pipeline: String,
    #[serde(default)]
    pub regime_threshold: Option<f64>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}
fn default_pipeline() -> String {
    "oracle".into()
}

#[derive(Debug, Clone, Deserialize)]
pub struct Tolerances {
    #[serde(default = "t_unitarity_oracle")]
    pub unitarity_oracle: f64,
    #[serde(default = "t_unitarity_pert")]
    pub unitarity_perturbative: f64,
    #[serde(default = "t_closed_form")]
    pub closed_form_equivalence: f64,
    #[serde(default = "t_pipeline")]
    pub pipeline_equivalence: f64,
    #[serde(default = "t_special")]
    pub special_functions: f64,
    #[serde(default = "t_wronskian")]
    pub wronskian_drift: f64,
}

fn t_unitarity_oracle() -> f64 {
    1e-8
}
fn t_unitarity_pert() -> f64 {
    1e-6
}
fn t_closed_form() -> f64 {
    1e-8
}
fn t_pipeline() -> f64 {
    1e-6
}
fn t_special() -> f64 {
    1e-10
}
fn t_wronskian() -> f64 {
    1e-8
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unitarity_oracle: t_unitarity_oracle(),
            unitarity_perturbative: t_unitarity_pert(),
            closed_form_equivalence: t_closed_form(),
            pipeline_equivalence: t_pipeline(),
            special_functions: t_special(),
            wronskian_drift: t_wronskian(),
        }
    }
}

pub fn parse_pipeline(name: &str) -> Result<Pipeline> {
    match name {
        "oracle" => Ok(Pipeline::Oracle),
        "perturbative_converged" => Ok(Pipeline::PerturbativeConverged),
        "perturbative_leading" => Ok(Pipeline::PerturbativeLeading),
        "closed_form" => Ok(Pipeline::ClosedForm),
        other => Err(Error::Config(format!("unknown pipeline '{other}'"))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub e: f64,
    pub hbar: f64,
    pub alpha: f64,
    pub nu: f64,
    pub regime: String,
    pub re_t: f64,
    pub im_t: f64,
    pub log10_abs_t: f64,
    pub re_r: f64,
    pub im_r: f64,
    pub unitarity_defect: f64,
    pub e00: f64,
    pub notes: String,
}

pub const CSV_HEADER: &str =
    "e,hbar,alpha,nu,regime,re_t,im_t,log10_abs_t,re_r,im_r,unitarity_defect,e00,notes";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let num = |v: f64| format!("{v:.16e}");
        let notes = if self.notes.contains(',') || self.notes.contains('"') {
            format!("\"{}\"", self.notes.replace('"', "\"\""))
        } else {
            self.notes.clone()
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            num(self.e),
            num(self.hbar),
            num(self.alpha),
            num(self.nu),
            self.regime,
            num(self.re_t),
            num(self.im_t),
            num(self.log10_abs_t),
            num(self.re_r),
            num(self.im_r),
            num(self.unitarity_defect),
            num(self.e00),
            notes
        )
    }
}

/// Run the sweep; per-point failures are recorded in the notes column.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    if config.schema_version != SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            config.schema_version
        )));
    }
    let pipeline = parse_pipeline(&config.pipeline)?;
    let nu_split = config.regime_threshold.unwrap_or(NU_SPLIT_DEFAULT);
    let es = config.e_grid.expand()?;
    let hs = config.hbar_grid.expand()?;
    let cfg = OracleConfig::default();
    let mut points: Vec<(f64, f64)> = Vec::new();
    for &e in &es {
        for &h in &hs {
            points.push((e, h));
        }
    }
    let mut rows: Vec<SweepRow> = points
        .par_iter()
        .map(|&(e, h)| {
            let mut row = SweepRow {
                e,
                hbar: h,
                alpha: f64::NAN,
                nu: f64::NAN,
                regime: String::new(),
                re_t: f64::NAN,
                im_t: f64::NAN,
                log10_abs_t: f64::NAN,
                re_r: f64::NAN,
                im_r: f64::NAN,
                unitarity_defect: f64::NAN,
                e00: f64::NAN,
                notes: String::new(),
            };
            let inner = || -> Result<SweepRow> {
                let params = derive_params(e, h)?;
                let spec = config.potential.build(h)?;
                let res = scattering::scattering_result(&spec, &params, pipeline, nu_split, &cfg)?;
                let t = res.t.to_complex();
                Ok(SweepRow {
                    e,
                    hbar: h,
                    alpha: params.alpha,
                    nu: params.nu,
                    regime: if params.nu <= nu_split {
                        "small_nu".into()
                    } else {
                        "large_nu".into()
                    },
                    re_t: t.re,
                    im_t: t.im,
                    log10_abs_t: res.t.log10_abs(),
                    re_r: res.r.re,
                    im_r: res.r.im,
                    unitarity_defect: res.unitarity_defect,
                    e00: res.e00.to_f64(),
                    notes: if res.cancellation_warning {
                        "cancellation_warning".into()
                    } else {
                        String::new()
                    },
                })
            };
            match inner() {
                Ok(r) => r,
                Err(err) => {
                    row.notes = format!("error: {err}");
                    row
                }
            }
        })
        .collect();
    rows.sort_by(|a, b| (a.e, a.hbar).partial_cmp(&(b.e, b.hbar)).unwrap());
    Ok(rows)
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv());
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonOutput<'a> {
    metadata: JsonMeta,
    rows: &'a [SweepRow],
}

#[derive(Serialize)]
struct JsonMeta {
    schema_version: u32,
    toolkit_version: &'static str,
    pipeline: String,
    potential_family: String,
}

pub fn rows_to_json(config: &SweepConfig, rows: &[SweepRow]) -> String {
    let out = JsonOutput {
        metadata: JsonMeta {
            schema_version: SCHEMA_VERSION,
            toolkit_version: env!("CARGO_PKG_VERSION"),
            pipeline: config.pipeline.clone(),
            potential_family: config.potential.family.clone(),
        },
        rows,
    };
    serde_json::to_string_pretty(&out).expect("serialize rows")
}

/// One check of the validation report.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn check(name: &str, measured: f64, threshold: f64) -> Check {
    Check {
        name: name.into(),
        measured,
        threshold,
        pass: measured <= threshold,
    }
}

/// Run the validation suite for a config; the report lists every check with
/// its measured value and threshold.
pub fn validate(config: &SweepConfig) -> Result<Vec<Check>> {
    let tol = &config.tolerances;
    let mut checks = Vec::new();
    let cfg = OracleConfig::default();

    // parameter identities on a deterministic sample
    let mut worst: f64 = 0.0;
    for i in 1..40 {
        let e = 0.013 * i as f64;
        let h = 0.4 / i as f64;
        let p = derive_params(e, h)?;
        let lhs = p.alpha * p.alpha;
        let rhs = 0.25 * h * h + 4.0 * e * e;
        worst = worst.max((lhs - rhs).abs() / rhs);
        worst = worst.max((p.nu * h - 2.0 * e).abs() / (2.0 * e));
    }
    checks.push(check("params_identities", worst, 1e-14));

    // potential validation (positivity, tail consistency)
    let spec_probe = config.potential.build(0.1);
    match spec_probe {
        Ok(spec) => {
            let mut worst: f64 = 0.0;
            if !spec.is_free() {
                let mut x = spec.cutoff;
                while x <= 50.0 {
                    let u = (-x).exp();
                    let direct =
                        u * (1.0 + spec.tail_epsilon(crate::potential::Side::Plus, u, 0)?);
                    worst = worst.max((spec.eval(x, 0)? - direct).abs());
                    x += 0.61;
                }
            }
            checks.push(check("potential_tail_consistency", worst, 1e-12));
        }
        Err(e) => {
            return Err(e);
        }
    }

    // Airy Wronskian on a deterministic grid
    let mut worst: f64 = 0.0;
    let mut x = -20.0;
    while x <= 20.0 {
        let v = airy(x);
        worst = worst.max((v.ai * v.bi_prime - v.ai_prime * v.bi - 1.0 / std::f64::consts::PI)
            .abs()
            * std::f64::consts::PI);
        x += 0.377;
    }
    checks.push(check("airy_wronskian", worst, 1e-12));

    // Gamma modulus identity
    let mut worst: f64 = 0.0;
    for &nu in &[0.25, 1.0, 3.0, 7.0] {
        let g = gamma_one_plus_i_nu(nu).norm_sqr();
        let expect = std::f64::consts::PI * nu / (std::f64::consts::PI * nu).sinh();
        worst = worst.max((g - expect).abs() / expect);
    }
    checks.push(check("gamma_identity", worst, 1e-12));

    // Bessel series vs integral representation
    let mut worst: f64 = 0.0;
    for &nu in &[0.0, 1.0, 5.0] {
        for &w in &[0.5, 2.0, 10.0] {
            let s = bessel::bessel_i_imag(nu, w)?.value;
            let i = bessel::bessel_i_imag_integral(nu, w)?;
            worst = worst.max((s - i).norm() / s.norm());
        }
    }
    checks.push(check("bessel_series_vs_integral", worst, tol.special_functions));

    // scattering checks on a reduced grid of the configured potential
    let es = config.e_grid.expand()?;
    let hs = config.hbar_grid.expand()?;
    let sub = |v: &Vec<f64>| -> Vec<f64> {
        if v.len() <= 2 {
            v.clone()
        } else {
            vec![v[0], v[v.len() / 2], v[v.len() - 1]]
        }
    };
    let mut worst_uni_o: f64 = 0.0;
    let mut worst_uni_p: f64 = 0.0;
    let mut worst_wb: f64 = 0.0;
    let mut worst_drift: f64 = 0.0;
    for &e in &sub(&es) {
        for &h in &sub(&hs) {
            let params = derive_params(e, h)?;
            let spec = config.potential.build(h)?;
            let ro = scattering::scattering_result(&spec, &params, Pipeline::Oracle, 5.0, &cfg)?;
            worst_uni_o = worst_uni_o.max(ro.unitarity_defect);
            // Wronskian lower bound |W| >= 2E/hbar
            let margin = (2.0 * e / h).ln() - ro.w_mp.ln_abs();
            worst_wb = worst_wb.max(margin);
            let oj = crate::oracle::integrate_jost(
                &spec,
                &params,
                crate::potential::Side::Plus,
                0.0,
                &cfg,
            )?;
            worst_drift = worst_drift.max(oj.wronskian_drift);
            if !spec.is_free() {
                let rp = scattering::scattering_result(
                    &spec,
                    &params,
                    Pipeline::PerturbativeConverged,
                    5.0,
                    &cfg,
                )?;
                worst_uni_p = worst_uni_p.max(rp.unitarity_defect);
            }
        }
    }
    checks.push(check("unitarity_oracle", worst_uni_o, tol.unitarity_oracle));
    checks.push(check(
        "unitarity_perturbative",
        worst_uni_p,
        tol.unitarity_perturbative,
    ));
    checks.push(check("wronskian_lower_bound_margin", worst_wb, 1e-10));
    checks.push(check("oracle_wronskian_drift", worst_drift, tol.wronskian_drift));

    // free-case anchors
    let free = PotentialSpec::free();
    let params = derive_params(0.25, 0.5)?;
    let rf = scattering::scattering_result(&free, &params, Pipeline::Oracle, 5.0, &cfg)?;
    let t = rf.t.to_complex();
    let anchor = (t - Complex::new(1.0, 0.0)).norm().max(rf.r.norm());
    checks.push(check("free_case_t1_r0", anchor, 1e-12));
    checks.push(check(
        "free_case_spectral_measure",
        (rf.e00.to_f64() + 1.0).abs(),
        1e-12,
    ));

    // closed-form equivalence when the potential is the pure exponential
    if config.potential.family == "exponential" {
        let mut worst: f64 = 0.0;
        for &e in &sub(&es) {
            for &h in &sub(&hs) {
                let params = derive_params(e, h)?;
                let spec = PotentialSpec::exponential();
                let a = scattering::scattering_result(&spec, &params, Pipeline::Oracle, 5.0, &cfg)?;
                let b =
                    scattering::scattering_result(&spec, &params, Pipeline::ClosedForm, 5.0, &cfg)?;
                let da = (a.t / b.t).to_complex();
                worst = worst.max((da - 1.0).norm());
            }
        }
        checks.push(check(
            "closed_form_equivalence",
            worst,
            tol.closed_form_equivalence,
        ));
    }

    Ok(checks)
}

/// Compare two sweeps over identical grids: per-row relative differences.
#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub rows: usize,
    pub max_rel_t: f64,
    pub median_rel_t: f64,
    pub max_rel_r: f64,
    pub max_rel_e: f64,
}

pub fn compare(rows_a: &[SweepRow], rows_b: &[SweepRow]) -> Result<CompareReport> {
    if rows_a.len() != rows_b.len() {
        return Err(Error::Usage("compare requires identical grids".into()));
    }
    let mut rel_t = Vec::new();
    let mut rel_r: f64 = 0.0;
    let mut rel_e: f64 = 0.0;
    for (a, b) in rows_a.iter().zip(rows_b.iter()) {
        if (a.e - b.e).abs() > 1e-15 || (a.hbar - b.hbar).abs() > 1e-15 {
            return Err(Error::Usage("compare requires identical grids".into()));
        }
        // |t_a - t_b| / |t_b| from the log10 magnitudes and phases
        let la = a.log10_abs_t * std::f64::consts::LN_10;
        let lb = b.log10_abs_t * std::f64::consts::LN_10;
        let pa = a.im_t.atan2(a.re_t);
        let pb = b.im_t.atan2(b.re_t);
        let ratio = (la - lb).exp() * Complex::new(0.0, pa - pb).exp();
        rel_t.push((ratio - 1.0).norm());
        let rb = Complex::new(b.re_r, b.im_r);
        let ra = Complex::new(a.re_r, a.im_r);
        if rb.norm() > 1e-14 {
            rel_r = rel_r.max((ra - rb).norm() / rb.norm());
        }
        if b.e00.abs() > 0.0 {
            rel_e = rel_e.max((a.e00 - b.e00).abs() / b.e00.abs());
        }
    }
    let max_rel_t = rel_t.iter().cloned().fold(0.0, f64::max);
    let median_rel_t = crate::fit::median(&rel_t);
    Ok(CompareReport {
        rows: rows_a.len(),
        max_rel_t,
        median_rel_t,
        max_rel_r: rel_r,
        max_rel_e: rel_e,
    })
}
