use std::io::Read;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use waring::apolarity::{
    arrangement, derivatives_vanish, incidence_check, is_apolar_power, roots_of_unity_points, verify_vanishing, Variant,
};
use waring::decompose::{
    corollary_representation, count_two_square_decompositions, gauss_newton_powersum, random_real_form, two_squares,
    FitOptions,
};
use waring::hilbert::{compare, default_t_max, full_family, root_of_unity_mismatches};
use waring::regularity::{
    ah_generic_rank, expected_lower_bound, is_t_regular, min_power_generators, GeneratorStyle, PowerIdealSpec,
};
use waring::{dim_space, ComplexField, Domain, Form, PrimeField};

use crate::args::{Command, Common, Format, Nkd, Style};
use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

/// Ranks per second assumed by the up-front estimate (multiply-adds).
const OPS_PER_SECOND: f64 = 1.5e9;
/// Estimated seconds above which `--long-running` is required.
const LONG_RUNNING_SECONDS: f64 = 120.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    ProbableNegative,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::ProbableNegative => 2,
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Success
        } else {
            Status::ProbableNegative
        }
    }
}

/// Every input that determines a report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct JobConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deg: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub style: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairing: Option<String>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    /// `auto-prime`, `modulus`, `complex` or `none`.
    pub domain: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    pub long_running: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub search: bool,
}

pub struct Outcome {
    pub config: JobConfig,
    pub result: Value,
    pub status: Status,
    pub text: String,
    pub csv: Option<String>,
}

impl Outcome {
    fn new(config: JobConfig, result: Value, status: Status) -> Self {
        let text = summary_text(&result);
        Outcome {
            config,
            result,
            status,
            text,
            csv: None,
        }
    }
}

fn summary_text(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}\n"),
                other => format!("{k}: {other}\n"),
            })
            .collect(),
        other => format!("{other}\n"),
    }
}

fn base_config(cmd: &Command, common: &Common) -> JobConfig {
    JobConfig {
        command: cmd.name().to_string(),
        seed: common.seed,
        domain: "none".into(),
        long_running: common.long_running,
        input: common.input.as_ref().map(|p| p.display().to_string()),
        ..Default::default()
    }
}

fn with_nkd(mut c: JobConfig, nkd: &Nkd) -> JobConfig {
    c.n = Some(nkd.n);
    c.k = Some(nkd.k);
    c.d = Some(nkd.d);
    c
}

/// Field with a primitive `congruence`-th root of unity, from `--modulus` or automatic.
fn field(common: &Common, congruence: u64, config: &mut JobConfig) -> Result<PrimeField> {
    let f = match common.modulus {
        Some(m) => {
            let f = PrimeField::new(m)?;
            f.require_root_of_unity(congruence)?;
            config.domain = "modulus".into();
            f
        }
        None => {
            config.domain = "auto-prime".into();
            PrimeField::auto(congruence)?
        }
    };
    config.modulus = Some(f.modulus());
    Ok(f)
}

fn read_input(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|source| CliError::Io {
                path: "standard input".into(),
                source,
            })?;
    } else {
        text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(text)
}

/// Non-empty lines of `--input` that are not `#` comments.
fn input_lines(common: &Common) -> Result<Option<Vec<String>>> {
    let Some(path) = &common.input else { return Ok(None) };
    let lines: Vec<String> = read_input(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect();
    if lines.is_empty() {
        return Err(CliError::Usage(format!("{} holds no forms", path.display())));
    }
    Ok(Some(lines))
}

fn single_input<D: Domain>(common: &Common, domain: &D, num_vars: usize) -> Result<Option<Form<D>>> {
    match input_lines(common)? {
        None => Ok(None),
        Some(lines) if lines.len() == 1 => Ok(Some(Form::parse(domain, num_vars, &lines[0])?)),
        Some(lines) => Err(CliError::Usage(format!("expected one form, found {}", lines.len()))),
    }
}

fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| CliError::Usage(format!("--{flag}: cannot parse {s:?}")))
        })
        .collect()
}

fn generator_style(style: Style) -> GeneratorStyle {
    match style {
        Style::Random => GeneratorStyle::RandomGeneralForms,
        Style::RootOfUnity => GeneratorStyle::RootOfUnityLinearPowers,
        Style::OddSubset => GeneratorStyle::OddSubsetLinearPowers,
    }
}

/// Refuse an elimination of roughly `rows · cols · min(rows, cols)` steps
/// that would take too long unless `--long-running` is set.
fn guard(common: &Common, what: &str, jobs: &[(u64, u64)]) -> Result<()> {
    let ops: f64 = jobs.iter().map(|&(r, c)| r as f64 * c as f64 * r.min(c) as f64).sum();
    let seconds = ops / OPS_PER_SECOND;
    let (rows, cols) = jobs.iter().copied().max_by_key(|&(r, c)| r * c).unwrap_or((0, 0));
    let estimate =
        format!("{what}: largest matrix {rows} x {cols}, about {ops:.2e} field operations, roughly {seconds:.0} s");
    if seconds > LONG_RUNNING_SECONDS {
        if !common.long_running {
            return Err(CliError::LongRunning(format!(
                "{estimate}; rerun with --long-running to start it"
            )));
        }
        eprintln!("{estimate}");
    }
    Ok(())
}

fn dim(n: u32, d: u32) -> Result<u64> {
    Ok(dim_space(n, d)?)
}

fn ideal_spec(nkd: &Nkd, p: Option<usize>, style: GeneratorStyle, seed: u64) -> Result<PowerIdealSpec> {
    let spec = match p {
        Some(p) => PowerIdealSpec::new(nkd.n, nkd.k, nkd.d, p, style, seed)?,
        None => full_family(nkd.n, nkd.k, nkd.d, style, seed)?,
    };
    Ok(spec)
}

pub fn dispatch(cmd: &Command, common: &Common) -> Result<Outcome> {
    let config = base_config(cmd, common);
    match cmd {
        Command::Dims { n, d } => {
            let mut c = config;
            c.n = Some(*n);
            c.d = Some(*d);
            let value = dim(*n, *d)?;
            let mut out = Outcome::new(c, json!(value), Status::Success);
            out.text = format!("{value}\n");
            Ok(out)
        }
        Command::AhRank { n, deg } => {
            let mut c = config;
            c.n = Some(*n);
            c.deg = Some(*deg);
            let value = ah_generic_rank(*n, *deg)?;
            let mut out = Outcome::new(c, json!(value), Status::Success);
            out.text = format!("{value}\n");
            Ok(out)
        }
        Command::Bound(nkd) => {
            let lb = expected_lower_bound(nkd.n, nkd.k, nkd.d)?;
            Ok(Outcome::new(
                with_nkd(config, nkd),
                serde_json::to_value(lb)?,
                Status::Success,
            ))
        }
        Command::Regular { nkd, p, t, style } => regular(with_nkd(config, nkd), common, nkd, *p, *t, *style),
        Command::MinGens { nkd, trials, d_max } => min_gens(with_nkd(config, nkd), common, nkd, *trials, *d_max),
        Command::VerifyVanishing { nkd, variant } => {
            let mut c = with_nkd(config, nkd);
            let v: Variant = variant.parse()?;
            c.variant = Some(variant.clone());
            let f = field(common, nkd.k as u64, &mut c)?;
            let degree = v.degree(nkd.k, nkd.d) as u64;
            let rows = (nkd.k as u64).saturating_pow(nkd.n).saturating_mul(dim(nkd.n, nkd.d)?);
            guard(common, "verify-vanishing", &[(rows, dim(nkd.n, degree as u32)?)])?;
            let report = verify_vanishing(nkd.n, nkd.k, nkd.d, v, &f)?;
            let status = Status::from_bool(report.regular);
            Ok(Outcome::new(c, serde_json::to_value(report)?, status))
        }
        Command::Arrangement { n, k } => {
            let mut c = config;
            c.n = Some(*n);
            c.k = Some(*k);
            let f = field(common, *k as u64, &mut c)?;
            let arr = arrangement(*n, *k, &f)?;
            let points = roots_of_unity_points(*n, *k, &f)?;
            let inc = incidence_check(&arr, &points)?;
            let per_plane = (*k as usize).pow(n.saturating_sub(1));
            let per_point = (*n as usize) * (n.saturating_sub(1) as usize) / 2;
            let uniform = inc.points_per_hyperplane.iter().all(|&x| x == per_plane)
                && inc.hyperplanes_per_point.iter().all(|&x| x == per_point);
            let result = json!({
                "hyperplanes": arr.hyperplanes.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
                "labels": arr.labels,
                "product_degree": arr.product_form.degree(),
                "points": points.coordinate_strings(),
                "primitive_root": f.format_elem(&points.primitive_root),
                "incidence": inc,
                "expected_points_per_hyperplane": per_plane,
                "expected_hyperplanes_per_point": per_point,
                "uniform": uniform,
                "modulus": f.modulus(),
            });
            Ok(Outcome::new(c, result, Status::from_bool(uniform)))
        }
        Command::ApolarCheck { n, point, s } => {
            let mut c = config;
            c.n = Some(*n);
            c.s = Some(*s);
            c.point = Some(point.clone());
            let f = field(common, 1, &mut c)?;
            let num_vars = *n as usize + 1;
            let target = single_input(common, &f, num_vars)?
                .ok_or_else(|| CliError::Usage("apolar-check needs --input with the form f".into()))?;
            let coords: Vec<u64> = parse_list::<i64>("point", point)?
                .into_iter()
                .map(|v| f.from_i64(v))
                .collect();
            if coords.len() != num_vars {
                return Err(CliError::Usage(format!("--point needs {num_vars} coordinates")));
            }
            let l = Form::linear(&f, &coords)?;
            let apolar = is_apolar_power(&target, &l, *s)?;
            let vanish = derivatives_vanish(&target, &coords, *s)?;
            if apolar != vanish {
                return Err(waring::Error::Internal(format!(
                    "apolarity ({apolar}) and derivative vanishing ({vanish}) disagree for f = {target}, l = {l}, s = {s}"
                ))
                .into());
            }
            let result = json!({
                "input": target.to_string(),
                "linear_form": l.to_string(),
                "order": s,
                "apolar": apolar,
                "derivatives_vanish": vanish,
                "modulus": f.modulus(),
            });
            Ok(Outcome::new(c, result, Status::Success))
        }
        Command::TwoSquares { d, pairing } => {
            let mut c = config;
            c.d = *d;
            c.pairing = pairing.clone();
            c.domain = "complex".into();
            let target = binary_target(common, *d)?;
            let picks = pairing
                .as_deref()
                .map(|p| parse_list::<usize>("pairing", p))
                .transpose()?;
            let split = two_squares(&target, picks.as_deref())?;
            let result = json!({ "input": target.to_string(), "decomposition": split });
            Ok(Outcome::new(c, result, Status::Success))
        }
        Command::CountTwoSquares { d } => {
            let mut c = config;
            c.d = *d;
            c.domain = "complex".into();
            let target = binary_target(common, *d)?;
            let count = count_two_square_decompositions(&target)?;
            let status = Status::from_bool(count.count == count.expected);
            let result = json!({ "input": target.to_string(), "count": count });
            Ok(Outcome::new(c, result, status))
        }
        Command::Represent(nkd) => {
            let mut c = with_nkd(config, nkd);
            let f = field(common, nkd.k as u64, &mut c)?;
            let num_vars = nkd.n as usize + 1;
            let target = match single_input(common, &f, num_vars)? {
                Some(t) => t,
                None => waring::random_form(nkd.n, nkd.k * nkd.d, &f, common.seed)?,
            };
            let rows = dim(nkd.n, nkd.k * nkd.d)?;
            let cols = (nkd.k as u64).saturating_pow(nkd.n).saturating_mul(dim(nkd.n, nkd.d)?);
            guard(common, "represent", &[(rows, cols)])?;
            let rep = corollary_representation(&target, nkd.n, nkd.k, nkd.d)?;
            let result =
                json!({ "input": target.to_string(), "verified": true, "representation": rep, "modulus": f.modulus() });
            Ok(Outcome::new(c, result, Status::Success))
        }
        Command::Decompose {
            nkd,
            p,
            tol,
            max_iter,
            restarts,
        } => {
            let mut c = with_nkd(config, nkd);
            let count = match p {
                Some(p) => *p,
                None => (nkd.k as usize)
                    .checked_pow(nkd.n)
                    .ok_or_else(|| CliError::Usage("k^n overflows".into()))?,
            };
            c.p = Some(count);
            c.tol = Some(*tol);
            c.max_iter = Some(*max_iter);
            c.restarts = Some(*restarts);
            c.domain = "complex".into();
            let num_vars = nkd.n as usize + 1;
            let target = match single_input(common, &ComplexField, num_vars)? {
                Some(t) => t,
                None => random_real_form(num_vars, nkd.k * nkd.d, common.seed)?,
            };
            let opts = FitOptions {
                max_iter: *max_iter,
                restarts: *restarts,
                tol: *tol,
                seed: common.seed,
                ..FitOptions::default()
            };
            let fit = gauss_newton_powersum(&target, count, nkd.k, &opts)?;
            let status = Status::from_bool(fit.converged);
            let result = json!({ "input": target.to_string(), "fit": fit });
            Ok(Outcome::new(c, result, status))
        }
        Command::Hilbert {
            nkd,
            p,
            t,
            style,
            search,
        } => hilbert(with_nkd(config, nkd), common, nkd, *p, *t, *style, *search),
    }
}

fn binary_target(common: &Common, d: Option<u32>) -> Result<Form<ComplexField>> {
    match (single_input(common, &ComplexField, 2)?, d) {
        (Some(f), _) => Ok(f),
        (None, Some(d)) => Ok(random_real_form(2, 2 * d, common.seed)?),
        (None, None) => Err(CliError::Usage(
            "give a binary form with --input or a half degree with --d".into(),
        )),
    }
}

fn regular(
    mut c: JobConfig,
    common: &Common,
    nkd: &Nkd,
    p: Option<usize>,
    t: Option<u32>,
    style: Style,
) -> Result<Outcome> {
    let style = match input_lines(common)? {
        Some(lines) => GeneratorStyle::Explicit(lines),
        None => generator_style(style),
    };
    c.style = Some(style.name().to_string());
    let p = p.or(match &style {
        GeneratorStyle::Explicit(lines) => Some(lines.len()),
        _ => None,
    });
    let spec = ideal_spec(nkd, p, style, common.seed)?;
    c.p = Some(spec.p_count);
    let target = t.unwrap_or(nkd.k * nkd.d);
    c.t = Some(target);
    let f = field(common, spec.required_congruence(), &mut c)?;
    let gen_degree = (nkd.k - 1) * nkd.d;
    let cols = (spec.p_count as u64).saturating_mul(dim(nkd.n, target.saturating_sub(gen_degree))?);
    guard(common, "regular", &[(dim(nkd.n, target)?, cols)])?;
    let cert = is_t_regular(&spec, target, &f)?;
    let status = Status::from_bool(cert.regular);
    Ok(Outcome::new(c, serde_json::to_value(cert)?, status))
}

fn min_gens(mut c: JobConfig, common: &Common, nkd: &Nkd, trials: usize, d_max: Option<u32>) -> Result<Outcome> {
    c.trials = Some(trials);
    c.d_max = d_max;
    let f = field(common, 1, &mut c)?;
    let last = d_max.unwrap_or(nkd.d);
    if last < nkd.d {
        return Err(CliError::Usage(format!("--d-max {last} is below --d {}", nkd.d)));
    }
    let mut jobs = Vec::new();
    for d in nkd.d..=last {
        let rows = dim(nkd.n, nkd.k * d)?;
        let upper = (nkd.k as u64).saturating_pow(nkd.n);
        let cols = upper.saturating_mul(dim(nkd.n, d)?);
        jobs.push((rows, cols));
    }
    guard(common, "min-gens", &jobs)?;
    let mut runs = Vec::new();
    for d in nkd.d..=last {
        runs.push(min_power_generators(nkd.n, nkd.k, d, trials, common.seed, &f)?);
    }
    let status = Status::from_bool(runs.iter().all(|r| r.p_min.is_some()));
    let show = |p: Option<u64>| p.map_or_else(|| "none".to_string(), |v| v.to_string());
    let (result, text) = if d_max.is_none() {
        let r = &runs[0];
        (serde_json::to_value(r)?, format!("{}\n", show(r.p_min)))
    } else {
        let text = runs.iter().map(|r| format!("{} {}\n", r.d, show(r.p_min))).collect();
        (serde_json::to_value(&runs)?, text)
    };
    let mut csv = String::from("d,counting_bound,upper_bound,p_min,certainty\n");
    for r in &runs {
        let certainty = serde_json::to_value(r.certainty)?;
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.d,
            r.counting_bound,
            r.upper_bound,
            show(r.p_min),
            certainty.as_str().unwrap_or_default()
        ));
    }
    let mut out = Outcome::new(c, result, status);
    out.text = text;
    out.csv = Some(csv);
    Ok(out)
}

fn hilbert(
    mut c: JobConfig,
    common: &Common,
    nkd: &Nkd,
    p: Option<usize>,
    t: Option<u32>,
    style: Style,
    search: bool,
) -> Result<Outcome> {
    if search {
        c.search = true;
        c.style = Some(GeneratorStyle::RootOfUnityLinearPowers.name().to_string());
        let congruence = (2..=nkd.k as u64).fold(1, lcm);
        let f = field(common, congruence, &mut c)?;
        let found = root_of_unity_mismatches(nkd.n, nkd.k, nkd.d, &f)?;
        let mut csv = String::from("n,k,d,t,hf,conjectured\n");
        for m in &found {
            csv.push_str(&format!("{},{},{},{},{},{}\n", m.n, m.k, m.d, m.t, m.hf, m.conjectured));
        }
        let result = json!({ "mismatches": found, "modulus": f.modulus() });
        let mut out = Outcome::new(c, result, Status::Success);
        out.csv = Some(csv);
        return Ok(out);
    }
    let style = generator_style(style);
    c.style = Some(style.name().to_string());
    let spec = ideal_spec(nkd, p, style, common.seed)?;
    c.p = Some(spec.p_count);
    let t_max = t.unwrap_or_else(|| default_t_max(nkd.k, nkd.d));
    c.t = Some(t_max);
    let f = field(common, spec.required_congruence(), &mut c)?;
    let gen_degree = (nkd.k - 1) * nkd.d;
    let mut jobs = Vec::new();
    for deg in gen_degree..=t_max {
        jobs.push((
            dim(nkd.n, deg)?,
            (spec.p_count as u64).saturating_mul(dim(nkd.n, deg - gen_degree)?),
        ));
    }
    guard(common, "hilbert", &jobs)?;
    let table = compare(&spec, t_max, &f)?;
    let csv = table.to_csv();
    let mut out = Outcome::new(c, serde_json::to_value(&table)?, Status::Success);
    out.text = csv.replace(',', " ");
    out.csv = Some(csv);
    Ok(out)
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

pub fn render(out: &Outcome, command: &str, format: Format, elapsed_ms: u64) -> Result<String> {
    match format {
        Format::Text => Ok(out.text.clone()),
        Format::Csv => out
            .csv
            .clone()
            .ok_or_else(|| CliError::Usage(format!("{command} has no tabular output; use --format json or text"))),
        Format::Json => {
            let envelope = json!({
                "command": command,
                "config": out.config,
                "result": out.result,
                "elapsed_ms": elapsed_ms,
                "version": env!("CARGO_PKG_VERSION"),
            });
            Ok(format!("{}\n", serde_json::to_string_pretty(&envelope)?))
        }
    }
}
