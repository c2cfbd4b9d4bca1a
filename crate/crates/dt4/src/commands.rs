//! Command implementations. Each returns the process exit code; operational
//! errors are returned as `Err` and map to exit code 2.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use dt4_core::combinatorics::omega_c;
use dt4_core::localization::{symbolic_d, tautological_factor, vertex_weight};
use dt4_core::partitions::enumerate_partitions;
use dt4_core::verifier::{
    omega_from_weight, sign_uniqueness, verify_affine, verify_counting, verify_nekrasov,
    verify_specconj, verify_toric, SignAssignment, Target, UniquenessMode, VerificationReport,
    VerifierError, VerifyOptions, WeightEntry, WeightTable,
};
use dt4_core::{BigRational, LocalizationError};
use serde_json::json;

use crate::cache::Cache;
use crate::formats::{
    factored_to_json, parse_charts, parse_partition, parse_signs, partition_to_json,
    rational_to_string, report_to_json, signs_to_lines,
};
use crate::golden::sample_partitions;

/// `println!` that stops quietly when stdout is closed.
macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_ZERO_WEIGHT: i32 = 3;
pub const EXIT_UNPAIRABLE: i32 = 4;
pub const EXIT_SPECIALIZATION: i32 = 5;

fn open_cache() -> anyhow::Result<Option<Cache>> {
    match Cache::from_env() {
        None => Ok(None),
        Some(r) => {
            let cache = r.context("opening the cache named by DT4_CACHE")?;
            for w in cache.warnings() {
                eprintln!("warning: {w}");
            }
            Ok(Some(cache))
        }
    }
}

/// Weights of all solid partitions up to `order`, through the cache if configured.
pub fn weight_table(order: usize) -> anyhow::Result<WeightTable> {
    let cache = open_cache()?;
    let table = match &cache {
        None => WeightTable::build(order)?,
        Some(c) => {
            let mut failure = None;
            let built = WeightTable::build_with(order, &mut |pi| {
                c.weight_entry(pi).or_else(|e| {
                    failure = Some(e);
                    WeightEntry::compute(pi.clone())
                })
            })?;
            if let Some(e) = failure {
                eprintln!("warning: cache lookup failed, recomputed: {e:#}");
            }
            built
        }
    };
    Ok(table)
}

pub fn enumerate(dim: usize, size: u32, as_json: bool) -> anyhow::Result<i32> {
    let parts = enumerate_partitions(dim, size, None)?;
    let mut out = String::new();
    for p in &parts {
        if as_json {
            writeln!(out, "{}", partition_to_json(p))?;
        } else {
            writeln!(out, "{}", p.canonical_key())?;
        }
    }
    outln!("{}", out.trim_end());
    eprintln!("{} partitions", parts.len());
    Ok(EXIT_PASS)
}

fn localization_code(e: &LocalizationError) -> i32 {
    match e {
        LocalizationError::ZeroWeight => EXIT_ZERO_WEIGHT,
        LocalizationError::Unpairable => EXIT_UNPAIRABLE,
        _ => EXIT_SPECIALIZATION,
    }
}

pub fn weight(path: &Path, d: Option<&[i64]>, with_omega: bool) -> anyhow::Result<i32> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let pi = parse_partition(&text).with_context(|| format!("parsing {}", path.display()))?;
    if pi.dim() != 3 {
        bail!("weights are defined for solid partitions (dim 3), got dim {}", pi.dim());
    }
    let w = match vertex_weight(&pi) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(localization_code(&e));
        }
    };
    let mut out = json!({
        "key": pi.canonical_key().as_str(),
        "size": pi.size(),
        "height": pi.height(),
        "weight": factored_to_json(&w),
        "weight_text": w.to_string(),
    });
    let taut = match d {
        Some(d) => {
            let [a, b, c, e] = <[i64; 4]>::try_from(d)
                .map_err(|_| anyhow::anyhow!("--d needs exactly four integers"))?;
            let dr = [a, b, c, e].map(|x| BigRational::from_integer(x.into()));
            let l = tautological_factor(&pi, &dr)?;
            json!({ "d": [a, b, c, e], "value": factored_to_json(&l), "text": l.to_string() })
        }
        None => {
            let l = tautological_factor(&pi, &symbolic_d())?;
            json!({ "d": "symbolic", "value": factored_to_json(&l), "text": l.to_string() })
        }
    };
    out["tautological"] = taut;
    if with_omega {
        match omega_from_weight(&pi, &w) {
            Ok(r) => {
                out["omega"] = json!(rational_to_string(&r.omega));
                out["sign"] = json!(r.sign);
                out["specialization"] = json!(r.limit.to_string());
            }
            Err(e) => {
                eprintln!("error: {e}");
                return Ok(match &e {
                    VerifierError::AtPartition { source, .. } => localization_code(source),
                    _ => EXIT_SPECIALIZATION,
                });
            }
        }
        out["omega_c"] = json!(rational_to_string(&omega_c(&pi)));
    }
    outln!("{}", serde_json::to_string_pretty(&out)?);
    Ok(EXIT_PASS)
}

pub struct VerifyRequest {
    pub target: Target,
    pub order: usize,
    pub trials: usize,
    pub seed: u64,
    pub signs: Option<PathBuf>,
    pub charts: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub unsafe_order: bool,
    pub mode: UniquenessMode,
    pub dim: usize,
    pub dt4_omega: bool,
    pub compare_omega_c: bool,
}

fn signs_for(table: &WeightTable, file: Option<&Path>) -> anyhow::Result<SignAssignment> {
    let base = SignAssignment::from_positivity(table)?;
    match file {
        None => Ok(base),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let user = parse_signs(&text).with_context(|| format!("parsing {}", p.display()))?;
            Ok(base.overridden_by(&user))
        }
    }
}

pub fn verify(req: &VerifyRequest) -> anyhow::Result<i32> {
    let start = Instant::now();
    if req.charts.is_some() && req.target != Target::Toric {
        bail!("--charts only applies to the toric target");
    }
    if req.signs.is_some() && matches!(req.target, Target::Counting | Target::Specconj | Target::Uniqueness) {
        bail!("--signs does not apply to the {} target", req.target.as_str());
    }
    let opts = VerifyOptions {
        order: req.order,
        trials: req.trials,
        seed: req.seed,
        unsafe_order: req.unsafe_order,
    };
    if req.target != Target::Counting && req.order > dt4_core::verifier::DEFAULT_ORDER_CAP && !req.unsafe_order {
        return Err(VerifierError::OrderTooLarge {
            order: req.order,
            cap: dt4_core::verifier::DEFAULT_ORDER_CAP,
        }
        .into());
    }
    let mut report: VerificationReport = match req.target {
        Target::Affine => {
            let t = weight_table(req.order)?;
            verify_affine(&t, &signs_for(&t, req.signs.as_deref())?, &opts)?
        }
        Target::Nekrasov => {
            let t = weight_table(req.order)?;
            verify_nekrasov(&t, &signs_for(&t, req.signs.as_deref())?, &opts)?
        }
        Target::Toric => {
            let path = req
                .charts
                .as_deref()
                .ok_or_else(|| anyhow::anyhow!("the toric target needs --charts FILE"))?;
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let charts = parse_charts(&text).with_context(|| format!("parsing {}", path.display()))?;
            let t = weight_table(req.order)?;
            verify_toric(&t, &signs_for(&t, req.signs.as_deref())?, &charts, &opts)?
        }
        Target::Specconj => {
            let t = weight_table(req.order)?;
            verify_specconj(&t, req.order, req.compare_omega_c)?
        }
        Target::Counting => {
            if req.dt4_omega {
                let t = weight_table(req.order.min(dt4_core::verifier::DEFAULT_ORDER_CAP))?;
                verify_counting(req.dim, req.order, Some(&t))?
            } else {
                verify_counting(req.dim, req.order, None)?
            }
        }
        Target::Uniqueness => {
            let t = weight_table(req.order)?;
            sign_uniqueness(&t, req.mode, req.order, req.trials, req.seed)?
                .to_report(req.seed, req.trials)
        }
    };
    report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    let value = report_to_json(&report);
    if let Some(out) = &req.out {
        fs::write(out, format!("{}\n", serde_json::to_string_pretty(&value)?))
            .with_context(|| format!("writing {}", out.display()))?;
    }
    print_summary(&report);
    Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
}

fn print_summary(r: &VerificationReport) {
    outln!(
        "{} order {}: {} (trials {}, seed {}, {} ms)",
        r.target.as_str(),
        r.order,
        r.status.as_str(),
        r.trials,
        r.seed,
        r.elapsed_ms.unwrap_or(0)
    );
    for n in &r.notes {
        outln!("  note: {n}");
    }
    for w in &r.witnesses {
        let mut line = String::from("  witness:");
        if let Some(q) = w.q_power {
            let _ = write!(line, " q^{q}");
        }
        if let Some(m) = &w.monomial {
            let _ = write!(line, " d^{m:?}");
        }
        if let Some(k) = &w.key {
            let _ = write!(line, " {k}");
        }
        if !w.point.is_empty() {
            let pt: Vec<String> = w.point.iter().map(rational_to_string).collect();
            let _ = write!(line, " at λ = ({})", pt.join(", "));
        }
        let _ = write!(line, " {}", w.detail);
        outln!("{line}");
    }
}

struct SampleRow {
    key: String,
    size: u32,
    height: u32,
    omega: String,
    omega_c: String,
}

fn sample_rows() -> anyhow::Result<Vec<SampleRow>> {
    let cache = open_cache()?;
    let mut rows = Vec::new();
    for pi in sample_partitions() {
        let (omega, omega_c_str) = match &cache {
            Some(c) => {
                let e = c.lookup_or_compute(&pi)?;
                (e.omega.unwrap_or_else(|| "-".into()), e.omega_c)
            }
            None => {
                let omega = match dt4_core::verifier::omega_from_dt4(&pi) {
                    Ok(r) => rational_to_string(&r.omega),
                    Err(_) => "-".into(),
                };
                (omega, rational_to_string(&omega_c(&pi)))
            }
        };
        rows.push(SampleRow {
            key: pi.canonical_key().into_string(),
            size: pi.size(),
            height: pi.height(),
            omega,
            omega_c: omega_c_str,
        });
    }
    Ok(rows)
}

pub fn table_samples(csv: bool) -> anyhow::Result<i32> {
    let rows = sample_rows()?;
    if csv {
        outln!("key,size,height,omega,omega_c");
        for r in &rows {
            outln!("\"{}\",{},{},{},{}", r.key, r.size, r.height, r.omega, r.omega_c);
        }
    } else {
        outln!("{:>4}  {:>6}  {:>6}  {:>6}  key", "size", "height", "|ω|", "ω^c");
        for r in &rows {
            outln!(
                "{:>4}  {:>6}  {:>6}  {:>6}  {}",
                r.size, r.height, r.omega, r.omega_c, r.key
            );
        }
    }
    let agree = rows.iter().all(|r| r.omega == r.omega_c);
    Ok(if agree { EXIT_PASS } else { EXIT_FAIL })
}

/// CSV rows `(key, size, height, ω^c)` for all partitions of a dimension up to a size.
pub fn table_omega_c(dim: usize, max_size: u32) -> anyhow::Result<i32> {
    if dim == 0 {
        bail!("dimension must be at least 1");
    }
    outln!("key,size,height,omega_c");
    for n in 0..=max_size {
        for pi in enumerate_partitions(dim, n, None)? {
            outln!(
                "\"{}\",{},{},{}",
                pi.canonical_key(),
                pi.size(),
                pi.height(),
                rational_to_string(&omega_c(&pi))
            );
        }
    }
    Ok(EXIT_PASS)
}

pub fn signs_build(order: usize, out: &Path, unsafe_order: bool) -> anyhow::Result<i32> {
    if order > dt4_core::verifier::DEFAULT_ORDER_CAP && !unsafe_order {
        return Err(VerifierError::OrderTooLarge {
            order,
            cap: dt4_core::verifier::DEFAULT_ORDER_CAP,
        }
        .into());
    }
    let table = weight_table(order)?;
    let signs = SignAssignment::from_positivity(&table)?;
    fs::write(out, signs_to_lines(&signs)).with_context(|| format!("writing {}", out.display()))?;
    outln!("{} signs written to {}", signs.len(), out.display());
    Ok(EXIT_PASS)
}
