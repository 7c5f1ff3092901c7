mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::write_frames;
use quatdmd::cli::{EXIT_INGEST, EXIT_METRICS, EXIT_NUMERICAL, EXIT_USAGE};
use quatdmd::image::{Rgb, RgbImage};
use quatdmd::synthetic::{gradient_background, moving_square, static_sequence, SquareMotion};
use serde_json::Value;

fn quatdmd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatdmd"))
        .args(args)
        .output()
        .unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

fn read_json(path: &Path) -> Value {
    json(&std::fs::read(path).unwrap())
}

fn moving_folder(dir: &Path) -> RgbImage {
    let truth = gradient_background(64, 64);
    write_frames(
        &dir.join("frames"),
        &moving_square(&truth, 50, SquareMotion::diagonal(8, Rgb([250, 240, 40]))),
    );
    truth.save(dir.join("gt.png")).unwrap();
    truth
}

#[test]
fn static_folder_background_is_frame_one() {
    let dir = tempfile::tempdir().unwrap();
    let frame = gradient_background(40, 30);
    write_frames(&dir.path().join("frames"), &static_sequence(&frame, 50));
    let out = dir.path().join("out");
    let o = quatdmd(&[
        "extract",
        "--input",
        s(&dir.path().join("frames")),
        "--out",
        s(&out),
        "--dump-spectrum",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let bg = quatdmd::image::open(out.join("background.png"))
        .unwrap()
        .to_rgb8();
    assert_eq!(bg, frame);
    let spectrum = read_json(&out.join("spectrum.json"));
    let rows = spectrum["tables"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert!(rows[0]["omega_magnitude"].as_f64().unwrap() <= 1e-10);
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["models"][0]["effective_rank"], 1);
    assert!(report["timings"]["qsvd"].is_number());
}

#[test]
fn moving_square_qdmd_and_dmd_rgb_are_close_to_truth() {
    let dir = tempfile::tempdir().unwrap();
    moving_folder(dir.path());
    for method in ["qdmd", "dmd-rgb"] {
        let out = dir.path().join(method);
        let o = quatdmd(&[
            "extract",
            "--input",
            s(&dir.path().join("frames")),
            "--out",
            s(&out),
            "--gt",
            s(&dir.path().join("gt.png")),
            "--method",
            method,
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let report = read_json(&out.join("report.json"));
        let age = report["metrics"]["age"].as_f64().unwrap();
        assert!(age < 5.0, "{method}: AGE {age}");
        let models = report["models"].as_array().unwrap();
        assert_eq!(models.len(), if method == "qdmd" { 1 } else { 3 });
        assert!(models
            .iter()
            .all(|m| m["effective_rank"].as_u64().unwrap() <= 49));
    }
}

#[test]
fn missing_input_is_an_ingestion_error_with_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = quatdmd(&[
        "extract",
        "--input",
        s(&dir.path().join("nope")),
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(EXIT_INGEST as i32));
    assert!(!out.exists());
    assert!(!o.stderr.is_empty());
}

#[test]
fn rank_beyond_numerical_rank_fails_without_output() {
    let dir = tempfile::tempdir().unwrap();
    write_frames(
        &dir.path().join("frames"),
        &static_sequence(&gradient_background(16, 16), 5),
    );
    let out = dir.path().join("out");
    let o = quatdmd(&[
        "extract",
        "--input",
        s(&dir.path().join("frames")),
        "--out",
        s(&out),
        "--rank",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(EXIT_NUMERICAL as i32));
    assert!(!out.exists());
}

#[test]
fn bad_flags_are_usage_errors() {
    let o = quatdmd(&["extract", "--input", "x", "--out", "y", "--rank", "0"]);
    assert_eq!(o.status.code(), Some(EXIT_USAGE as i32));
    let o = quatdmd(&["extract", "--method", "svd"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn foreground_frames_and_window() {
    let dir = tempfile::tempdir().unwrap();
    moving_folder(dir.path());
    let out = dir.path().join("out");
    let o = quatdmd(&[
        "extract",
        "--input",
        s(&dir.path().join("frames")),
        "--frames",
        "10..29",
        "--stride",
        "2",
        "--downsample",
        "2",
        "--out",
        s(&out),
        "--dump-foreground",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["frames"]["first_index"], 10);
    assert_eq!(report["frames"]["last_index"], 28);
    assert_eq!(report["frames"]["count"], 10);
    assert_eq!(report["frames"]["width"], 32);
    for idx in (10..=28).step_by(2) {
        assert!(out.join(format!("foreground_{idx:04}.png")).exists());
    }
    let fg = quatdmd::image::open(out.join("foreground_0010.png"))
        .unwrap()
        .to_rgb8();
    assert_eq!(fg.dimensions(), (32, 32));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    moving_folder(dir.path());
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!(
            "input = {:?}\nmethod = \"dmd-gray\"\nframes = \"0..19\"\nstable-output = true\n",
            s(&dir.path().join("frames"))
        ),
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = quatdmd(&[
        "extract",
        "--config",
        s(&cfg),
        "--out",
        s(&out),
        "--frames",
        "0..9",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["method"], "dmd-gray");
    assert_eq!(report["frames"]["count"], 10);
    assert!(report.get("timings").is_none());
}

#[test]
fn evaluate_prints_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let gt = gradient_background(32, 32);
    let plus5 = RgbImage::from_fn(32, 32, |x, y| {
        let p = gt.get_pixel(x, y).0;
        Rgb([p[0] + 5, p[1] + 5, p[2] + 5])
    });
    let (a, b, c) = (
        dir.path().join("a.png"),
        dir.path().join("b.png"),
        dir.path().join("c.png"),
    );
    gt.save(&a).unwrap();
    plus5.save(&b).unwrap();
    gradient_background(16, 32).save(&c).unwrap();

    let o = quatdmd(&["evaluate", "--gt", s(&a), "--cb", s(&a)]);
    assert!(o.status.success());
    let m = json(&o.stdout);
    assert_eq!(m["age"], 0.0);
    assert_eq!(m["peps"], 0.0);
    assert_eq!(m["pceps"], 0.0);
    assert_eq!(m["msssim"], 1.0);
    assert_eq!(m["psnr"], 100.0);
    assert_eq!(m["cqm"], 100.0);

    let m = json(&quatdmd(&["evaluate", "--gt", s(&a), "--cb", s(&b)]).stdout);
    assert!((m["age"].as_f64().unwrap() - 5.0).abs() < 1e-9);

    let o = quatdmd(&["evaluate", "--gt", s(&a), "--cb", s(&c)]);
    assert_eq!(o.status.code(), Some(EXIT_METRICS as i32));
}

fn inspect_rows(frames: &Path) -> Vec<Value> {
    let o = quatdmd(&["inspect", "--input", s(frames)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    json(&o.stdout)["tables"][0]["rows"]
        .as_array()
        .unwrap()
        .clone()
}

#[test]
fn inspect_static_and_moving() {
    let dir = tempfile::tempdir().unwrap();
    write_frames(
        &dir.path().join("static"),
        &static_sequence(&gradient_background(24, 24), 8),
    );
    let rows = inspect_rows(&dir.path().join("static"));
    assert!(rows[0]["omega_magnitude"].as_f64().unwrap() <= 1e-10);
    assert_eq!(rows[0]["selected"], true);

    moving_folder(dir.path());
    let rows = inspect_rows(&dir.path().join("frames"));
    assert_eq!(rows.iter().filter(|r| r["selected"] == true).count(), 1);
    let w: Vec<f64> = rows
        .iter()
        .map(|r| r["omega_magnitude"].as_f64().unwrap())
        .collect();
    assert!(w.windows(2).all(|p| p[0] <= p[1]));
}

#[test]
fn inspect_decaying_sequence_selects_ln_half() {
    let dir = tempfile::tempdir().unwrap();
    // powers of two halve exactly in 8-bit PNGs
    let frames: Vec<RgbImage> = (0..5)
        .map(|l| {
            RgbImage::from_fn(12, 12, |x, y| {
                let base = [64u32, 32, 16];
                let scale = 1 + (x + y) % 2;
                Rgb(base.map(|b| ((b * scale) >> l) as u8))
            })
        })
        .collect();
    write_frames(&dir.path().join("decay"), &frames);
    let rows = inspect_rows(&dir.path().join("decay"));
    let flagged: Vec<&Value> = rows.iter().filter(|r| r["selected"] == true).collect();
    assert_eq!(flagged.len(), 1);
    let w = flagged[0]["omega_magnitude"].as_f64().unwrap();
    assert!((w - 0.5f64.ln().abs()).abs() < 1e-8, "{w}");
}
