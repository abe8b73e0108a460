use std::path::{Path, PathBuf};

use clap::Args;
use num_complex::Complex64;
use serde::Serialize;
use warpbank::bank::{natural_factors, painless_factors, warped_bandwidth};
use warpbank::diagnostics::{
    decay_check, factor_sweep, frame_report, DecayReport, ReportOptions, SweepRow,
    DEFAULT_MAX_ITER, DEFAULT_OVERSAMPLE, DEFAULT_TOLERANCE,
};
use warpbank::spectrogram::Spectrogram;
use warpbank::{
    container, transform, BankKind, BankSpecFile, ChannelRole, Domain, FactorPolicy, Family,
    FrameReport, GridSpec, PrototypeWindow, WarpError, WarpedBank, WarpingFunction,
};

use crate::error::{CliError, CliResult};
use crate::signal;

#[derive(Args)]
pub struct DesignArgs {
    /// Warping family: log, sympow, erb (erblike) or signedpow.
    #[arg(long)]
    warp: String,
    /// Comma-separated family parameters, e.g. `c=1,d=1,l=0.5`.
    #[arg(long = "warp-params")]
    warp_params: Option<String>,
    /// Prototype window: hann, hamming, blackman, bspline2 or bspline3.
    #[arg(long, default_value = "hann")]
    window: String,
    /// Window stretch R.
    #[arg(long = "R", default_value_t = 3.0)]
    stretch: f64,
    /// painless, tight, natural[=a_tilde] or explicit=m:a,m:a,...
    #[arg(long, default_value = "painless")]
    policy: String,
    /// Keep the raw window with the painless policy instead of normalizing it
    /// to a tight frame.
    #[arg(long)]
    no_normalize: bool,
    /// Signal length L (even).
    #[arg(long = "L")]
    len: usize,
    /// Sample rate in Hz.
    #[arg(long, default_value_t = 44100.0)]
    fs: f64,
    /// Output spec file (JSON).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    bank: PathBuf,
    /// Input signal (.wav, otherwise raw little-endian f64).
    #[arg(long = "in")]
    input: PathBuf,
    /// Output coefficient container.
    #[arg(long)]
    out: PathBuf,
    /// Optional PGM spectrogram; row frequencies go to a CSV next to it.
    #[arg(long)]
    spectrogram: Option<PathBuf>,
    /// Spectrogram width in pixels.
    #[arg(long, default_value_t = 512)]
    width: usize,
    /// Zero-pad shorter signals to L.
    #[arg(long)]
    pad: bool,
}

#[derive(Args)]
pub struct SynthesizeArgs {
    #[arg(long)]
    bank: PathBuf,
    #[arg(long)]
    coeffs: PathBuf,
    /// Output signal (.wav, otherwise raw little-endian f64).
    #[arg(long)]
    out: PathBuf,
    /// Synthesize with the painless dual (always done for analysis banks).
    #[arg(long)]
    dual: bool,
    /// Original signal; the relative reconstruction error is reported.
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(Args)]
pub struct DiagnoseArgs {
    #[arg(long)]
    bank: PathBuf,
    /// Comma-separated factor scales, e.g. `1,2,4`.
    #[arg(long = "sweep-a")]
    sweep_a: Option<String>,
    /// Output report (JSON).
    #[arg(long)]
    report: PathBuf,
    #[arg(long, default_value_t = DEFAULT_OVERSAMPLE)]
    oversample: usize,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long = "max-iter", default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
}

fn parse_params(family: Family, text: Option<&str>) -> CliResult<(f64, f64, f64)> {
    let (mut c, mut d, mut l) = match family {
        Family::ErbLike => (warpbank::warping::ERB_C, warpbank::warping::ERB_D, 1.0),
        _ => (1.0, 1.0, 1.0),
    };
    for item in text
        .unwrap_or("")
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
    {
        let (key, value) = item.split_once('=').ok_or_else(|| {
            CliError::invalid(format!("warp parameter '{item}' is not key=value"))
        })?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::invalid(format!("warp parameter '{item}' is not a number")))?;
        match key.trim() {
            "c" => c = value,
            "d" => d = value,
            "l" => l = value,
            other => {
                return Err(CliError::invalid(format!(
                    "unknown warp parameter '{other}'"
                )))
            }
        }
    }
    Ok((c, d, l))
}

enum PolicyChoice {
    Painless,
    Tight,
    Natural(Option<f64>),
    Explicit(Vec<(i32, usize)>),
}

fn parse_policy(text: &str) -> CliResult<PolicyChoice> {
    let (name, arg) = match text.split_once('=') {
        Some((n, a)) => (n, Some(a)),
        None => (text, None),
    };
    match (name.to_ascii_lowercase().as_str(), arg) {
        ("painless", None) => Ok(PolicyChoice::Painless),
        ("tight", None) => Ok(PolicyChoice::Tight),
        ("natural", None) => Ok(PolicyChoice::Natural(None)),
        ("natural", Some(a)) => a
            .parse()
            .map(|v| PolicyChoice::Natural(Some(v)))
            .map_err(|_| CliError::invalid(format!("natural scale '{a}' is not a number"))),
        ("explicit", Some(list)) => list
            .split(',')
            .map(|pair| {
                let (m, a) = pair.split_once(':').ok_or_else(|| {
                    CliError::invalid(format!("explicit factor '{pair}' is not m:a"))
                })?;
                let m = m
                    .trim()
                    .parse()
                    .map_err(|_| CliError::invalid(format!("bad channel '{m}'")))?;
                let a = a
                    .trim()
                    .parse()
                    .map_err(|_| CliError::invalid(format!("bad factor '{a}'")))?;
                Ok((m, a))
            })
            .collect::<CliResult<Vec<_>>>()
            .map(PolicyChoice::Explicit),
        _ => Err(CliError::invalid(format!(
            "unknown policy '{text}' (painless, tight, natural[=a], explicit=m:a,...)"
        ))),
    }
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn load_bank(path: &Path) -> CliResult<WarpedBank> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let spec = BankSpecFile::from_json(&text)
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    spec.regenerate().map_err(|e| match e {
        WarpError::Format(msg) => CliError::invalid(format!("{}: {msg}", path.display())),
        other => CliError::from_warp(other),
    })
}

pub fn design(args: DesignArgs) -> CliResult<()> {
    let family = Family::parse(&args.warp)
        .ok_or_else(|| CliError::invalid(format!("unknown warping family '{}'", args.warp)))?;
    let (c, d, l) = parse_params(family, args.warp_params.as_deref())?;
    let warping = WarpingFunction::new(family, c, d, l)?;
    let window = PrototypeWindow::by_name(&args.window, args.stretch)?;
    let grid = GridSpec::new(args.len, args.fs, family.domain())?;
    let policy = parse_policy(&args.policy)?;

    let bank = match &policy {
        PolicyChoice::Tight => WarpedBank::design_tight_with(&warping, &grid, &window)?,
        PolicyChoice::Painless if window.is_tight_capable() && !args.no_normalize => {
            WarpedBank::design_tight_with(&warping, &grid, &window)?
        }
        PolicyChoice::Painless => {
            WarpedBank::build(&warping, &window, &grid, FactorPolicy::Painless)?
        }
        PolicyChoice::Natural(a) => WarpedBank::build(
            &warping,
            &window,
            &grid,
            FactorPolicy::Natural { a_tilde: *a },
        )?,
        PolicyChoice::Explicit(factors) => WarpedBank::build(
            &warping,
            &window,
            &grid,
            FactorPolicy::Explicit {
                factors: factors.clone(),
            },
        )?,
    };

    let spec = BankSpecFile::from_bank(&bank);
    write_file(&args.out, spec.to_json())?;

    let support = bank.prototype().support();
    let exact = |m: i32| -> f64 {
        match &policy {
            PolicyChoice::Natural(a) => {
                let a = a.unwrap_or_else(|| 1.0 / warped_bandwidth(&warping, support, 0.0));
                natural_factors(&warping, a, m..=m)[0] * args.fs
            }
            PolicyChoice::Explicit(_) => f64::NAN,
            _ => painless_factors(&warping, support, m..=m)[0] * args.fs,
        }
    };
    println!(
        "{:>11} {:>20} {:>8} {:>14} {:>16} {:>8}",
        "m", "center_hz", "a_m", "a_m_unrounded", "bandwidth_hz", "painless"
    );
    for ch in bank.channels() {
        let (label, unrounded, bandwidth) = match ch.role {
            ChannelRole::Warped => (ch.m.to_string(), exact(ch.m), bank.bandwidth_hz(ch.m)),
            ChannelRole::Mirrored => continue,
            ChannelRole::ResidualDc => ("dc".to_string(), f64::NAN, 0.0),
            ChannelRole::ResidualNyquist => ("nyquist".to_string(), f64::NAN, 0.0),
        };
        println!(
            "{label:>11} {:>20.9} {:>8} {:>14.6} {:>16.6} {:>8}",
            ch.center_hz,
            ch.a,
            unrounded,
            bandwidth,
            ch.is_painless()
        );
    }
    println!(
        "{} channels, {} coefficients for L = {} (redundancy {:.3}), kind {:?}",
        bank.channels().len(),
        bank.coefficient_count(),
        grid.len,
        bank.coefficient_count() as f64 / grid.len as f64,
        bank.kind()
    );
    if grid.domain == Domain::PositiveHalfLine {
        println!("mirrored negative-frequency channels omitted from the table");
    }
    Ok(())
}

pub fn analyze(args: AnalyzeArgs) -> CliResult<()> {
    let bank = load_bank(&args.bank)?;
    let input = signal::read(&args.input)?;
    let fs = bank.grid().sample_rate;
    if let Some(rate) = input.sample_rate {
        if (rate as f64 - fs).abs() > 0.5 {
            eprintln!("warning: input sample rate {rate} Hz differs from the bank's {fs} Hz");
        }
    }
    let mut samples = input.samples;
    let len = bank.len();
    if samples.len() < len && args.pad {
        samples.resize(len, 0.0);
    }
    if samples.len() != len {
        return Err(WarpError::LengthMismatch {
            expected: len,
            got: samples.len(),
        }
        .into());
    }
    let complex: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let coeffs = transform::analyze(&complex, &bank)?;
    write_file(&args.out, container::encode(&coeffs))?;
    eprintln!(
        "{} channels, {} coefficients, energy {:.6e}",
        coeffs.channels.len(),
        coeffs.len(),
        coeffs.energy()
    );
    if let Some(path) = &args.spectrogram {
        if args.width == 0 {
            return Err(CliError::invalid("spectrogram width must be positive"));
        }
        let image = Spectrogram::render(&coeffs, &bank, args.width, true);
        write_file(path, image.to_pgm())?;
        write_file(&path.with_extension("csv"), image.rows_csv())?;
    }
    Ok(())
}

pub fn synthesize(args: SynthesizeArgs) -> CliResult<()> {
    let bank = load_bank(&args.bank)?;
    let bytes = std::fs::read(&args.coeffs).map_err(|e| CliError::io(&args.coeffs, e))?;
    let coeffs = container::decode(&bytes).map_err(CliError::from_container)?;
    let synthesis_bank = match bank.kind() {
        BankKind::Analysis => bank.painless_dual()?,
        BankKind::Tight if args.dual => bank.painless_dual()?,
        _ => bank,
    };
    let out = transform::synthesize(&coeffs, &synthesis_bank)?;
    let samples: Vec<f64> = out.iter().map(|z| z.re).collect();
    let imag = out.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
    signal::write(&args.out, &samples, synthesis_bank.grid().sample_rate)?;
    eprintln!("imaginary residue {imag:.3e}");
    if let Some(path) = &args.reference {
        let reference = signal::read(path)?.samples;
        let mut padded = reference.clone();
        padded.resize(samples.len(), 0.0);
        let diff: f64 = padded
            .iter()
            .zip(&samples)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        let norm: f64 = padded.iter().map(|a| a * a).sum::<f64>().sqrt();
        eprintln!("relative reconstruction error {:.3e}", diff / norm);
    }
    Ok(())
}

#[derive(Serialize)]
struct BankSummary {
    family: Family,
    #[serde(rename = "L")]
    len: usize,
    fs: f64,
    kind: BankKind,
    channels: usize,
    coefficients: usize,
}

#[derive(Serialize)]
struct Report {
    format_version: u32,
    bank: BankSummary,
    frame: FrameReport,
    decay: DecayReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    sweep: Option<Vec<SweepRow>>,
}

fn parse_scales(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v > 0.0)
                .ok_or_else(|| CliError::invalid(format!("bad factor scale '{s}'")))
        })
        .collect()
}

pub fn diagnose(args: DiagnoseArgs) -> CliResult<()> {
    let bank = load_bank(&args.bank)?;
    let scales = args.sweep_a.as_deref().map(parse_scales).transpose()?;
    let options = ReportOptions {
        oversample: args.oversample.max(1),
        tol: args.tol,
        max_iter: args.max_iter,
    };
    let frame = frame_report(&bank, options)?;
    let proto = bank.prototype().clone();
    let decay = decay_check(
        &|t| proto.eval(t),
        Some(proto.support()),
        bank.warping(),
        0.5,
    );
    let sweep = scales
        .map(|s| factor_sweep(&bank, &s, args.tol, args.max_iter))
        .transpose()?;

    println!(
        "diagonal          {:.12} .. {:.12}",
        frame.diag_inf, frame.diag_sup
    );
    println!(
        "sufficient bounds {:.12} .. {:.12}",
        frame.a_suff, frame.b_suff
    );
    println!(
        "empirical bounds  {:.12} .. {:.12} ({:?})",
        frame.a_emp, frame.b_emp, frame.method
    );
    println!("tightness ratio   {:.12}", frame.tightness_ratio);
    println!("painless          {}", frame.painless);
    println!("decay             {}", decay.verdict);
    for w in &frame.warnings {
        println!("warning: {w}");
    }
    if let Some(rows) = &sweep {
        println!(
            "{:>8} {:>16} {:>16} {:>16} {:>9}",
            "scale", "A_emp", "B_emp", "ratio", "painless"
        );
        for r in rows {
            println!(
                "{:>8} {:>16.10} {:>16.10} {:>16.10} {:>9}",
                r.scale, r.a_emp, r.b_emp, r.tightness_ratio, r.painless
            );
        }
    }

    let report = Report {
        format_version: 1,
        bank: BankSummary {
            family: bank.warping().family(),
            len: bank.len(),
            fs: bank.grid().sample_rate,
            kind: bank.kind(),
            channels: bank.channels().len(),
            coefficients: bank.coefficient_count(),
        },
        frame,
        decay,
        sweep,
    };
    let text = serde_json::to_string_pretty(&report).expect("report is serializable");
    write_file(&args.report, text)
}
