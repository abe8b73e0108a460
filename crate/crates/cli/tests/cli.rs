mod common;

use std::process::Command;

use common::*;

fn s(p: &std::path::Path) -> String {
    p.display().to_string()
}

#[test]
fn gapped_bank_synthesis_is_a_coverage_error() {
    let dir = tempfile::tempdir().unwrap();
    let (spec, _) = design(
        dir.path(),
        "gap.json",
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
    )
    .unwrap();
    let input = dir.path().join("x.raw");
    write_raw(&input, &voiced(256, 44100.0));
    let coeffs = dir.path().join("x.wfbc");
    run([
        "analyze",
        "--bank",
        &s(&spec),
        "--in",
        &s(&input),
        "--out",
        &s(&coeffs),
    ])
    .expect_ok()
    .unwrap();
    let failed = run([
        "synthesize",
        "--bank",
        &s(&spec),
        "--coeffs",
        &s(&coeffs),
        "--out",
        &s(&dir.path().join("y.raw")),
    ]);
    assert_eq!(failed.code, 3, "{}", failed.stderr);
    assert!(failed.stderr.contains("diagonal"), "{}", failed.stderr);
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let spec = specs_dir().join("erblet_hann_r3.json");
    let r = run([
        "analyze",
        "--bank",
        &s(&spec),
        "--in",
        &s(&dir.path().join("nope.wav")),
        "--out",
        &s(&dir.path().join("c")),
    ]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    let r = run([
        "diagnose",
        "--bank",
        &s(&dir.path().join("nope.json")),
        "--report",
        &s(&dir.path().join("r")),
    ]);
    assert_eq!(r.code, 1, "{}", r.stderr);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(["design"]).code, 2);
    assert_eq!(run(["transmogrify"]).code, 2);
    assert_eq!(run(["--help"]).code, 0);
}

#[test]
fn wav_output_round_trips_at_float_precision() {
    let dir = tempfile::tempdir().unwrap();
    let (spec, _) = design(
        dir.path(),
        "b.json",
        &[
            "--warp",
            "sympow",
            "--warp-params",
            "l=0.5",
            "--R",
            "4",
            "--L",
            "4096",
            "--fs",
            "8000",
        ],
    )
    .unwrap();
    let x = voiced(4096, 8000.0);
    let wav = dir.path().join("in.wav");
    write_wav_i16(&wav, &x, 8000);
    let coeffs = dir.path().join("c.wfbc");
    run([
        "analyze",
        "--bank",
        &s(&spec),
        "--in",
        &s(&wav),
        "--out",
        &s(&coeffs),
    ])
    .expect_ok()
    .unwrap();
    let out = dir.path().join("out.wav");
    run([
        "synthesize",
        "--bank",
        &s(&spec),
        "--coeffs",
        &s(&coeffs),
        "--out",
        &s(&out),
    ])
    .expect_ok()
    .unwrap();
    let mut reader = hound::WavReader::open(&out).unwrap();
    assert_eq!(reader.spec().sample_rate, 8000);
    let y: Vec<f32> = reader.samples::<f32>().map(Result::unwrap).collect();
    assert_eq!(y.len(), x.len());
    for (a, b) in x.iter().zip(&y) {
        let quantized = (a * 32767.0).round() / 32768.0;
        assert!((quantized - *b as f64).abs() < 1e-4, "{quantized} vs {b}");
    }
}

#[test]
fn thread_cap_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let spec = specs_dir().join("signedpow_l05_hann_r3.json");
    let input = dir.path().join("x.raw");
    write_raw(&input, &voiced(1024, 64.0));
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(format!("c{threads}.wfbc"));
        let status = Command::new(env!("CARGO_BIN_EXE_warpbank"))
            .env("WARPBANK_THREADS", threads)
            .args([
                "analyze",
                "--bank",
                &s(&spec),
                "--in",
                &s(&input),
                "--out",
                &s(&out),
            ])
            .output()
            .unwrap();
        assert!(status.status.success());
        outputs.push(std::fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn spectrogram_width_must_be_positive() {
    let dir = tempfile::tempdir().unwrap();
    let spec = specs_dir().join("erblet_hann_r3.json");
    let input = dir.path().join("x.raw");
    write_raw(&input, &voiced(1024, 64.0));
    let r = run([
        "analyze",
        "--bank",
        &s(&spec),
        "--in",
        &s(&input),
        "--out",
        &s(&dir.path().join("c")),
        "--spectrogram",
        &s(&dir.path().join("i.pgm")),
        "--width",
        "0",
    ]);
    assert_eq!(r.code, 2);
}
