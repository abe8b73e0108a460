//! Command-line acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero when any criterion fails.

mod common;

use std::path::Path;
use std::time::Instant;

use common::*;
use warpbank::{container, BankSpecFile, WarpingFunction};

type Check = Result<(), String>;
type Criterion = (&'static str, fn(&Path) -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

/// Unrounded factor printed for channel `m` in a design table.
fn table_factor(stdout: &str, m: &str) -> Option<f64> {
    stdout.lines().find_map(|line| {
        let f: Vec<&str> = line.split_whitespace().collect();
        (f.len() == 6 && f[0] == m)
            .then(|| f[3].parse().ok())
            .flatten()
    })
}

fn table_centers(stdout: &str) -> Vec<(i32, f64)> {
    stdout
        .lines()
        .filter_map(|line| {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 6 {
                return None;
            }
            Some((f[0].parse().ok()?, f[1].parse().ok()?))
        })
        .collect()
}

fn design_examples(dir: &Path) -> Check {
    let (spec, _) = design(
        dir,
        "erblet.json",
        &[
            "--warp", "erb", "--window", "hann", "--R", "3", "--policy", "painless", "--L", "4096",
            "--fs", "44100",
        ],
    )?;
    let text = std::fs::read_to_string(&spec).map_err(|e| e.to_string())?;
    let loaded = BankSpecFile::from_json(&text).map_err(|e| e.to_string())?;
    ensure(format!("{:?}", loaded.kind) == "Tight", || {
        format!("ERBlet design kind {:?}", loaded.kind)
    })?;

    let (_, run) = design(
        dir,
        "wavelet.json",
        &[
            "--warp", "log", "--policy", "natural", "--L", "4096", "--fs", "44100",
        ],
    )?;
    let centers = table_centers(&run.stdout);
    ensure(centers.len() > 4, || {
        "log design printed no channels".into()
    })?;
    for pair in centers.windows(2) {
        let ratio = pair[1].1 / pair[0].1;
        ensure(
            (ratio - std::f64::consts::E).abs() < 1e-6 && pair[1].0 == pair[0].0 + 1,
            || format!("log centers {pair:?} are not a constant-Q progression"),
        )?;
    }

    let fs = 64.0;
    let (_, run) = design(
        dir,
        "signedpow.json",
        &[
            "--warp",
            "signedpow",
            "--warp-params",
            "l=0.5",
            "--window",
            "hann",
            "--R",
            "3",
            "--L",
            "1024",
            "--fs",
            "64",
        ],
    )?;
    let a0 = table_factor(&run.stdout, "0").ok_or("no m = 0 row in the design table")?;
    ensure((a0 - 2.0 / 21.0 * fs).abs() <= 1e-6, || {
        format!("a_0 = {a0}, expected {}", 2.0 / 21.0 * fs)
    })
}

fn design_errors(dir: &Path) -> Check {
    let out = s(&dir.join("bad.json"));
    for args in [
        vec!["--warp", "nope", "--L", "1024"],
        vec!["--warp", "erb", "--R", "2", "--L", "1024"],
        vec!["--warp", "erb", "--L", "1023"],
        vec!["--warp", "sympow", "--warp-params", "l=2", "--L", "1024"],
        vec!["--warp", "erb", "--policy", "sometimes", "--L", "1024"],
    ] {
        let mut full = vec!["design"];
        full.extend(&args);
        full.extend(["--out", &out]);
        let code = run(&full).code;
        ensure(code == 2, || format!("{args:?} exited {code}, expected 2"))?;
    }
    Ok(())
}

fn zero_signal(dir: &Path) -> Check {
    let (spec, _) = design(
        dir,
        "zero.json",
        &["--warp", "erb", "--L", "2048", "--fs", "16000"],
    )?;
    let wav = dir.join("zero.wav");
    write_wav_i16(&wav, &vec![0.0; 2048], 16000);
    let (coeffs, pgm) = (dir.join("zero.wfbc"), dir.join("zero.pgm"));
    run([
        "analyze",
        "--bank",
        &s(&spec),
        "--in",
        &s(&wav),
        "--out",
        &s(&coeffs),
        "--spectrogram",
        &s(&pgm),
    ])
    .expect_ok()?;
    let set = container::decode(&std::fs::read(&coeffs).unwrap()).map_err(|e| e.to_string())?;
    ensure(
        !set.is_empty()
            && set
                .channels
                .iter()
                .all(|(_, d)| d.iter().all(|z| z.re == 0.0 && z.im == 0.0)),
        || "coefficients of a zero signal are not all zero".into(),
    )?;
    let image = read_pgm(&pgm)?;
    ensure(image.pixels.iter().all(|&p| p == 0), || {
        "zero-signal image is not uniformly at the floor".into()
    })?;
    let rows = read_rows(&pgm.with_extension("csv"));
    ensure(rows.len() == image.height, || {
        format!("{} CSV rows for {} image rows", rows.len(), image.height)
    })?;
    ensure(rows.windows(2).all(|w| w[0].1 > w[1].1), || {
        "rows are not ordered by center frequency".into()
    })
}

fn sinusoid(dir: &Path) -> Check {
    let (len, fs) = (8192usize, 44100.0);
    let (spec, _) = design(
        dir,
        "tone.json",
        &["--warp", "erb", "--L", "8192", "--fs", "44100"],
    )?;
    let erb = WarpingFunction::erb();
    for m0 in [5, 12, 20, 28] {
        let bin = (erb.eval_inv(m0 as f64) * len as f64 / fs).round();
        let x: Vec<f64> = (0..len)
            .map(|n| 0.5 * (2.0 * std::f64::consts::PI * bin * n as f64 / len as f64).cos())
            .collect();
        let input = dir.join(format!("tone{m0}.raw"));
        write_raw(&input, &x);
        let (coeffs, pgm) = (dir.join("tone.wfbc"), dir.join(format!("tone{m0}.pgm")));
        run([
            "analyze",
            "--bank",
            &s(&spec),
            "--in",
            &s(&input),
            "--out",
            &s(&coeffs),
            "--spectrogram",
            &s(&pgm),
        ])
        .expect_ok()?;
        let image = read_pgm(&pgm)?;
        let rows = read_rows(&pgm.with_extension("csv"));
        let row_max: Vec<u8> = (0..image.height)
            .map(|r| {
                *image.pixels[r * image.width..(r + 1) * image.width]
                    .iter()
                    .max()
                    .unwrap()
            })
            .collect();
        let best = (0..image.height).max_by_key(|&r| row_max[r]).unwrap();
        ensure(rows[best].0 == m0, || {
            format!(
                "tone at channel {m0} peaks in row of channel {}",
                rows[best].0
            )
        })?;
        let rivals = (0..image.height)
            .filter(|&r| r != best && row_max[r] >= row_max[best])
            .count();
        ensure(rivals == 0, || {
            format!("tone at channel {m0}: {rivals} other rows reach the maximum")
        })?;
    }
    Ok(())
}

fn chirp(dir: &Path) -> Check {
    let (len, fs) = (16384usize, 44100.0);
    let (spec, _) = design(
        dir,
        "chirp.json",
        &["--warp", "erb", "--L", "16384", "--fs", "44100"],
    )?;
    let (f0, f1) = (300.0, 12000.0);
    let duration = len as f64 / fs;
    let x: Vec<f64> = (0..len)
        .map(|n| {
            let t = n as f64 / fs;
            0.8 * (2.0 * std::f64::consts::PI * (f0 * t + (f1 - f0) * t * t / (2.0 * duration)))
                .cos()
        })
        .collect();
    let wav = dir.join("chirp.wav");
    write_wav_i16(&wav, &x, 44100);
    let (coeffs, pgm) = (dir.join("chirp.wfbc"), dir.join("chirp.pgm"));
    run([
        "analyze",
        "--bank",
        &s(&spec),
        "--in",
        &s(&wav),
        "--out",
        &s(&coeffs),
        "--spectrogram",
        &s(&pgm),
        "--width",
        "128",
    ])
    .expect_ok()?;
    let image = read_pgm(&pgm)?;
    let rows = read_rows(&pgm.with_extension("csv"));
    let ridge: Vec<f64> = (0..image.width)
        .map(|col| {
            let column: Vec<u8> = (0..image.height)
                .map(|r| image.pixels[r * image.width + col])
                .collect();
            let peak = *column.iter().max().unwrap();
            let tied: Vec<f64> = (0..image.height)
                .filter(|&r| column[r] == peak)
                .map(|r| rows[r].1)
                .collect();
            tied.iter().sum::<f64>() / tied.len() as f64
        })
        .collect();
    let inner = &ridge[8..image.width - 8];
    ensure(inner.windows(2).all(|p| p[1] >= p[0]), || {
        format!("ridge is not monotone: {inner:?}")
    })?;
    ensure(inner[inner.len() - 1] > 5.0 * inner[0], || {
        format!("ridge barely moves: {inner:?}")
    })
}

fn length_mismatch(dir: &Path) -> Check {
    let (spec, _) = design(
        dir,
        "len.json",
        &["--warp", "erb", "--L", "1024", "--fs", "16000"],
    )?;
    let short = dir.join("short.raw");
    write_raw(&short, &voiced(1000, 16000.0));
    let out = s(&dir.join("len.wfbc"));
    let code = run([
        "analyze",
        "--bank",
        &s(&spec),
        "--in",
        &s(&short),
        "--out",
        &out,
    ])
    .code;
    ensure(code == 4, || {
        format!("short signal exited {code}, expected 4")
    })?;
    run([
        "analyze",
        "--bank",
        &s(&spec),
        "--in",
        &s(&short),
        "--out",
        &out,
        "--pad",
    ])
    .expect_ok()?;
    Ok(())
}

fn round_trip(dir: &Path) -> Check {
    let wav = dir.join("voiced.wav");
    write_wav_i16(&wav, &voiced(8192, 16000.0), 16000);
    for (name, extra) in [
        ("tight", vec![]),
        ("analysis", vec!["--no-normalize"]),
        ("log", vec!["--warp", "log"]),
    ] {
        let mut args = vec!["--L", "8192", "--fs", "16000"];
        if !extra.contains(&"--warp") {
            args.extend(["--warp", "erb"]);
        }
        args.extend(&extra);
        let (spec, _) = design(dir, &format!("rt_{name}.json"), &args)?;
        let coeffs = dir.join(format!("rt_{name}.wfbc"));
        run([
            "analyze",
            "--bank",
            &s(&spec),
            "--in",
            &s(&wav),
            "--out",
            &s(&coeffs),
        ])
        .expect_ok()?;
        let out = dir.join(format!("rt_{name}.wav"));
        let synth = run([
            "synthesize",
            "--bank",
            &s(&spec),
            "--coeffs",
            &s(&coeffs),
            "--out",
            &s(&out),
            "--reference",
            &s(&wav),
        ])
        .expect_ok()?;
        let err = reported(&synth.stderr, "relative reconstruction error")
            .ok_or_else(|| format!("{name}: no error on stderr: {}", synth.stderr))?;
        ensure(err <= 1e-10, || {
            format!("{name}: relative reconstruction error {err:e}")
        })?;
    }
    Ok(())
}

fn tight_dual_flag(dir: &Path) -> Check {
    let (spec, _) = design(
        dir,
        "td.json",
        &[
            "--warp",
            "signedpow",
            "--warp-params",
            "l=0.5",
            "--L",
            "2048",
            "--fs",
            "64",
        ],
    )?;
    let input = dir.join("td.raw");
    write_raw(&input, &voiced(2048, 64.0 * 250.0));
    let coeffs = dir.join("td.wfbc");
    run([
        "analyze",
        "--bank",
        &s(&spec),
        "--in",
        &s(&input),
        "--out",
        &s(&coeffs),
    ])
    .expect_ok()?;
    let (plain, dual) = (dir.join("td_plain.raw"), dir.join("td_dual.raw"));
    run([
        "synthesize",
        "--bank",
        &s(&spec),
        "--coeffs",
        &s(&coeffs),
        "--out",
        &s(&plain),
    ])
    .expect_ok()?;
    run([
        "synthesize",
        "--bank",
        &s(&spec),
        "--coeffs",
        &s(&coeffs),
        "--out",
        &s(&dual),
        "--dual",
    ])
    .expect_ok()?;
    let (a, b) = (read_raw(&plain), read_raw(&dual));
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let diff = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt();
    ensure(a.len() == b.len() && diff <= 1e-12 * norm, || {
        format!("with and without --dual differ by {diff:e}")
    })
}

fn synthesis_errors(dir: &Path) -> Check {
    let (spec, _) = design(
        dir,
        "se.json",
        &["--warp", "erb", "--L", "1024", "--fs", "16000"],
    )?;
    let input = dir.join("se.raw");
    write_raw(&input, &voiced(1024, 16000.0));
    let coeffs = dir.join("se.wfbc");
    run([
        "analyze",
        "--bank",
        &s(&spec),
        "--in",
        &s(&input),
        "--out",
        &s(&coeffs),
    ])
    .expect_ok()?;
    let bytes = std::fs::read(&coeffs).unwrap();
    let truncated = dir.join("se_cut.wfbc");
    std::fs::write(&truncated, &bytes[..bytes.len() - 5]).unwrap();
    let out = s(&dir.join("se.raw.out"));
    let code = run([
        "synthesize",
        "--bank",
        &s(&spec),
        "--coeffs",
        &s(&truncated),
        "--out",
        &out,
    ])
    .code;
    ensure(code == 5, || {
        format!("truncated coefficients exited {code}, expected 5")
    })?;

    let (other, _) = design(
        dir,
        "se_other.json",
        &["--warp", "signedpow", "--L", "1024", "--fs", "16000"],
    )?;
    let code = run([
        "synthesize",
        "--bank",
        &s(&other),
        "--coeffs",
        &s(&coeffs),
        "--out",
        &out,
    ])
    .code;
    ensure(code == 5, || {
        format!("foreign coefficients exited {code}, expected 5")
    })?;

    let (wide, _) = design(
        dir,
        "se_wide.json",
        &[
            "--warp",
            "erb",
            "--L",
            "1024",
            "--fs",
            "44100",
            "--policy",
            "explicit=10:1024,11:1024",
        ],
    )?;
    let wide_coeffs = dir.join("se_wide.wfbc");
    run([
        "analyze",
        "--bank",
        &s(&wide),
        "--in",
        &s(&input),
        "--out",
        &s(&wide_coeffs),
    ])
    .expect_ok()?;
    let failed = run([
        "synthesize",
        "--bank",
        &s(&wide),
        "--coeffs",
        &s(&wide_coeffs),
        "--out",
        &out,
    ]);
    ensure(failed.code == 6, || {
        format!("non-painless synthesis exited {}, expected 6", failed.code)
    })?;
    ensure(failed.stderr.contains("1/a_m"), || {
        format!("message does not name the condition: {}", failed.stderr)
    })
}

fn diagnose_examples(dir: &Path) -> Check {
    let (spec, _) = design(
        dir,
        "dg.json",
        &["--warp", "erb", "--L", "4096", "--fs", "44100"],
    )?;
    let report = dir.join("dg_report.json");
    run([
        "diagnose",
        "--bank",
        &s(&spec),
        "--report",
        &s(&report),
        "--sweep-a",
        "1,2,4",
    ])
    .expect_ok()?;
    let json = report_json(&report);
    let ratio = json["frame"]["tightness_ratio"]
        .as_f64()
        .ok_or("no tightness ratio")?;
    ensure(ratio <= 1.0 + 1e-8, || {
        format!("tight ERBlet ratio {ratio}")
    })?;
    let sweep: Vec<f64> = json["sweep"]
        .as_array()
        .ok_or("no sweep table")?
        .iter()
        .map(|row| row["tightness_ratio"].as_f64().unwrap_or(f64::INFINITY))
        .collect();
    ensure(
        sweep.len() == 3 && sweep.windows(2).all(|w| w[1] >= w[0]),
        || format!("sweep ratios {sweep:?}"),
    )?;

    let (gapped, _) = design(
        dir,
        "dg_gap.json",
        &[
            "--warp",
            "erb",
            "--L",
            "256",
            "--fs",
            "44100",
            "--policy",
            "explicit=-2:64,-1:64,1:64,2:64",
        ],
    )?;
    run(["diagnose", "--bank", &s(&gapped), "--report", &s(&report)]).expect_ok()?;
    let warnings = report_json(&report)["frame"]["warnings"].clone();
    ensure(
        warnings.as_array().is_some_and(|w| {
            w.iter()
                .any(|w| w.as_str().is_some_and(|w| w.starts_with("coverage")))
        }),
        || format!("gapped bank warnings {warnings}"),
    )?;

    let garbage = dir.join("garbage.json");
    std::fs::write(&garbage, "{ not a spec").unwrap();
    let mut tampered: serde_json::Value = report_json(&spec);
    tampered["channels"][3]["center_hz"] = serde_json::json!(1.0);
    let tampered_path = dir.join("tampered.json");
    std::fs::write(&tampered_path, tampered.to_string()).unwrap();
    for bad in [garbage, tampered_path] {
        let code = run(["diagnose", "--bank", &s(&bad), "--report", &s(&report)]).code;
        ensure(code == 2, || {
            format!("{} exited {code}, expected 2", bad.display())
        })?;
    }
    Ok(())
}

fn checked_in_examples(dir: &Path) -> Check {
    let specs = checked_in_specs();
    ensure(specs.len() >= 4, || {
        format!("only {} checked-in specs", specs.len())
    })?;
    for spec in specs {
        let name = spec.file_name().unwrap().to_string_lossy().into_owned();
        let report = dir.join(format!("{name}.report"));
        run(["diagnose", "--bank", &s(&spec), "--report", &s(&report)]).expect_ok()?;
        let json = report_json(&report);
        ensure(json["frame"]["painless"] == serde_json::json!(true), || {
            format!("{name}: not painless")
        })?;
        let ratio = json["frame"]["tightness_ratio"]
            .as_f64()
            .unwrap_or(f64::INFINITY);
        ensure(ratio - 1.0 <= 1e-8, || {
            format!("{name}: tightness ratio {ratio}")
        })?;
    }
    Ok(())
}

fn spec_determinism(dir: &Path) -> Check {
    for spec in checked_in_specs() {
        let text = std::fs::read_to_string(&spec).unwrap();
        let loaded = BankSpecFile::from_json(&text).map_err(|e| e.to_string())?;
        ensure(
            BankSpecFile::from_json(&loaded.to_json()).ok() == Some(loaded.clone()),
            || format!("{}: load(save(spec)) differs", spec.display()),
        )?;
        let bank = loaded.regenerate().map_err(|e| e.to_string())?;
        let again = BankSpecFile::from_json(&text)
            .unwrap()
            .regenerate()
            .unwrap();
        let identical = bank.channels().iter().zip(again.channels()).all(|(a, b)| {
            a.response.len() == b.response.len()
                && a.response
                    .iter()
                    .zip(&b.response)
                    .all(|(x, y)| x.to_bits() == y.to_bits())
        });
        ensure(
            identical && BankSpecFile::from_bank(&bank).to_json() == text.trim_end(),
            || format!("{}: regeneration is not bit-exact", spec.display()),
        )?;
    }
    let args = [
        "--warp",
        "erb",
        "--warp-params",
        "c=1,d=1",
        "--R",
        "3",
        "--L",
        "1024",
        "--fs",
        "64",
    ];
    let (fresh, _) = design(dir, "fresh.json", &args)?;
    ensure(
        std::fs::read(&fresh).unwrap()
            == std::fs::read(specs_dir().join("erblet_hann_r3.json")).unwrap(),
        || "redesigning the checked-in ERBlet example changes the file".into(),
    )
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let criteria: [Criterion; 12] = [
        (
            "design: ERBlet tight, constant-Q log, signed-power a_0 = 2/21 fs",
            design_examples,
        ),
        ("design: invalid parameters exit 2", design_errors),
        (
            "analyze: zero signal gives zero coefficients and a floor image",
            zero_signal,
        ),
        (
            "analyze: a tone at a warped integer peaks in that channel's row",
            sinusoid,
        ),
        ("analyze: a chirp draws a monotone ridge", chirp),
        (
            "analyze: length mismatch exits 4, --pad accepts",
            length_mismatch,
        ),
        ("synthesize: round trip error at most 1e-10", round_trip),
        (
            "synthesize: tight bank gives the same result with and without --dual",
            tight_dual_flag,
        ),
        (
            "synthesize: bad coefficients exit 5, non-painless banks exit 6",
            synthesis_errors,
        ),
        (
            "diagnose: tight ratio, monotone sweep, coverage warning, invalid spec exits 2",
            diagnose_examples,
        ),
        (
            "checked-in examples are painless with tightness ratio 1",
            checked_in_examples,
        ),
        ("spec files regenerate bit for bit", spec_determinism),
    ];
    let mut failed = 0;
    for (label, check) in criteria {
        let start = Instant::now();
        let outcome = check(dir.path());
        let elapsed = start.elapsed();
        match outcome {
            Ok(()) => println!("PASS criterion {label} ({elapsed:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {label} ({elapsed:.2?}): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
