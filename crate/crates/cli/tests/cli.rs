mod common;

use std::path::Path;

use blockfuse::format::parse_sig7;
use blockfuse::metrics::{MetricReport, METRIC_CSV_HEADER};
use common::{code, run_in, stderr, stdout};

fn synth(dir: &Path, name: &str, seed: u64, size: usize) {
    let (s, w) = (seed.to_string(), size.to_string());
    let out = run_in(
        dir,
        &[
            "synth",
            "--seed",
            &s,
            "--n",
            "3",
            "--width",
            &w,
            "--height",
            &w,
            "--out-dir",
            name,
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn metrics_identical_files_give_perfect_row() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), "s", 1, 32);
    let out = run_in(
        dir.path(),
        &["metrics", "--gt", "s/gt.pgm", "--pred", "s/gt.pgm"],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        format!("{METRIC_CSV_HEADER}\ninf,1,1,1,1,0,0\n")
    );
    assert!(stderr(&out).contains("mixed_loss=0"));

    let json = run_in(
        dir.path(),
        &[
            "--format", "json", "metrics", "--gt", "s/gt.pgm", "--pred", "s/gt.pgm",
        ],
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v["psnr"], "inf");
    assert_eq!(v["ms_ssim"], 1.0);
}

#[test]
fn metrics_errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), "a", 1, 32);
    synth(dir.path(), "b", 1, 64);
    let out = run_in(
        dir.path(),
        &["metrics", "--gt", "a/gt.pgm", "--pred", "b/gt.pgm"],
    );
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("32x32") && err.contains("64x64"), "{err}");

    let missing = run_in(
        dir.path(),
        &["metrics", "--gt", "nope.pgm", "--pred", "a/gt.pgm"],
    );
    assert_eq!(code(&missing), 1);

    std::fs::write(dir.path().join("bad.pgm"), b"P5\n4 4\n255\nshort").unwrap();
    let bad = run_in(
        dir.path(),
        &["metrics", "--gt", "bad.pgm", "--pred", "a/gt.pgm"],
    );
    assert_eq!(code(&bad), 2);

    let omega = run_in(
        dir.path(),
        &[
            "--omega", "1.5", "metrics", "--gt", "a/gt.pgm", "--pred", "a/gt.pgm",
        ],
    );
    assert_eq!(code(&omega), 2);
}

#[test]
fn metrics_report_written_to_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    synth(dir.path(), "s", 4, 64);
    let out = run_in(
        dir.path(),
        &[
            "metrics",
            "--gt",
            "s/gt.pgm",
            "--pred",
            "s/cand_1.pgm",
            "--out",
            "m.csv",
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(dir.path().join("m.csv")).unwrap();
    let row = text.lines().nth(1).unwrap();
    let report = MetricReport::from_csv_row(row).unwrap();
    assert_eq!(report.to_csv_row(), row);
    assert!(report.ms_ssim < 1.0 && report.psnr.is_finite());
}

#[test]
fn fuse_writes_image_and_winner_map() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth(d, "s", 2, 64);
    let out = run_in(
        d,
        &[
            "fuse",
            "--gt",
            "s/gt.pgm",
            "--candidates",
            "s/cand_0.pgm",
            "s/cand_1.pgm",
            "s/cand_2.pgm",
            "--block",
            "8",
            "--out",
            "f.pgm",
            "--winners",
            "w.json",
            "--winner-pgm",
            "w.pgm",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let map: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.join("w.json")).unwrap()).unwrap();
    assert_eq!(map["block"], 8);
    assert_eq!(
        map["winners"].as_array().unwrap().len(),
        (64 / 8) * (64 / 8)
    );
    // winners come from all three vertical strips
    let mut seen: Vec<u64> = map["winners"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    seen.sort();
    seen.dedup();
    assert_eq!(seen, vec![0, 1, 2]);

    let fused = blockfuse::image::load_image(d.join("f.pgm")).unwrap();
    assert_eq!(fused.dims(), (64, 64));
    let vis = blockfuse::image::load_image(d.join("w.pgm")).unwrap();
    assert_eq!(vis.dims(), (64, 64));
    assert!(stdout(&out).starts_with(METRIC_CSV_HEADER));
}

#[test]
fn fuse_depth_override_and_default() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth(d, "s", 2, 32);
    let args = |depth: Option<&'static str>| {
        let mut v = vec![
            "fuse",
            "--gt",
            "s/gt.pgm",
            "--candidates",
            "s/cand_0.pgm",
            "--block",
            "16",
            "--out",
            "f.pgm",
            "--winners",
            "w.json",
        ];
        if let Some(bits) = depth {
            v.extend(["--depth", bits]);
        }
        v
    };
    assert_eq!(code(&run_in(d, &args(None))), 0);
    let (_, maxval) = blockfuse::image::load_image_with_depth(d.join("f.pgm")).unwrap();
    assert_eq!(maxval, 255);
    assert_eq!(code(&run_in(d, &args(Some("16")))), 0);
    let (_, maxval) = blockfuse::image::load_image_with_depth(d.join("f.pgm")).unwrap();
    assert_eq!(maxval, 65535);
    assert_eq!(code(&run_in(d, &args(Some("12")))), 2);
}

#[test]
fn failed_fuse_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth(d, "s", 2, 64);
    let out = run_in(
        d,
        &[
            "fuse",
            "--gt",
            "s/gt.pgm",
            "--candidates",
            "s/cand_0.pgm",
            "--block",
            "5",
            "--out",
            "f.pgm",
            "--winners",
            "w.json",
        ],
    );
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("does not divide"));
    assert!(!d.join("f.pgm").exists() && !d.join("w.json").exists());
    let leftovers: Vec<_> = std::fs::read_dir(d)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(leftovers, vec![std::ffi::OsString::from("s")]);
}

#[test]
fn sweep_of_perfect_candidates_is_perfect_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    synth(d, "s", 6, 64);
    let out = run_in(
        d,
        &[
            "--blocks",
            "4,8,16,32,64",
            "sweep",
            "--gt",
            "s/gt.pgm",
            "--candidates",
            "s/gt.pgm",
            "s/gt.pgm",
        ],
    );
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    for (row, m) in rows.iter().zip([4, 8, 16, 32, 64]) {
        assert_eq!(*row, format!("{m},inf,0,1,0,1,0,1,0,1,0,0,0,0,0"));
    }
}

#[test]
fn sweep_csv_parses_back() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        code(&run_in(
            d,
            &[
                "synth",
                "--seed",
                "3",
                "--n",
                "3",
                "--width",
                "64",
                "--height",
                "64",
                "--items",
                "4",
                "--out-dir",
                "ds"
            ]
        )),
        0
    );
    let out = run_in(
        d,
        &[
            "--blocks",
            "8,32",
            "sweep",
            "--dataset",
            "ds",
            "--out",
            "s.csv",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = std::fs::read_to_string(d.join("s.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let values: Vec<f64> = line.split(',').map(|v| parse_sig7(v).unwrap()).collect();
        assert_eq!(values.len(), 15);
        let again: Vec<String> = values.iter().map(|&v| blockfuse::format::sig7(v)).collect();
        assert_eq!(again[1..].join(","), line.split_once(',').unwrap().1);
        // four items give a real spread
        assert!(values[2] > 0.0);
    }

    let json = run_in(
        d,
        &[
            "--format",
            "json",
            "--blocks",
            "8",
            "sweep",
            "--dataset",
            "ds",
        ],
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(v[0]["block_size"], 8);
    assert_eq!(v[0]["n_items"], 4);
}

#[test]
fn sweep_rejects_missing_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::create_dir(d.join("empty")).unwrap();
    assert_eq!(code(&run_in(d, &["sweep", "--dataset", "empty"])), 2);
    // clap usage errors also exit 2
    assert_eq!(code(&run_in(d, &["sweep"])), 2);
}

#[test]
fn classify_eval_reports_table_row() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("perfect.csv"),
        "label,score\n1,0.9\n1,0.8\n0,0.2\n0,0.1\n",
    )
    .unwrap();
    let out = run_in(d, &["classify-eval", "--scores", "perfect.csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("1,1,1,1,1,1,1,"), "{row}");

    std::fs::write(
        d.join("inverted.csv"),
        "label,score\n1,0.1\n1,0.2\n0,0.8\n0,0.9\n",
    )
    .unwrap();
    let out = run_in(d, &["classify-eval", "--scores", "inverted.csv"]);
    let row = stdout(&out).lines().nth(1).unwrap().to_string();
    assert!(row.starts_with("0,0,"), "{row}");
    assert!(stderr(&out).contains("f_score"));

    std::fs::write(d.join("one.csv"), "label,score\n1,0.9\n1,0.4\n").unwrap();
    let out = run_in(d, &["classify-eval", "--scores", "one.csv"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("AUROC"));

    std::fs::write(d.join("bad.csv"), "label,score\n1,1.4\n0,0.2\n").unwrap();
    assert_eq!(
        code(&run_in(d, &["classify-eval", "--scores", "bad.csv"])),
        2
    );
}

#[test]
fn stats_report_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("g.csv"),
        "group,value\na,1\na,2\na,3\nb,2\nb,3\nb,4\nc,3\nc,4\nc,5\n",
    )
    .unwrap();
    let out = run_in(d, &["stats", "--groups", "g.csv", "--out", "r.json"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("F(2, 6)=3.000, p=0.125"));
    let v: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(v["summary"], "F(2, 6)=3.000, p=0.125");
    assert!((v["anova"]["f_stat"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert_eq!(v["tukey"].as_array().unwrap().len(), 3);
    assert!(v["levene"]["p_value"].is_number());

    std::fs::write(
        d.join("same.csv"),
        "group,value\na,1\na,2\na,3\nb,1\nb,2\nb,3\n",
    )
    .unwrap();
    let out = run_in(d, &["stats", "--groups", "same.csv"]);
    assert_eq!(code(&out), 0);
    assert!(stderr(&out).contains("F(1, 4)=0.000, p=1.000"));

    // groups of two leave Levene undefined but ANOVA is still reported
    std::fs::write(d.join("pairs.csv"), "group,value\na,1\na,3\nb,5\nb,8\n").unwrap();
    let out = run_in(d, &["stats", "--groups", "pairs.csv"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["levene"].is_null());
    assert!(v["summary"].as_str().unwrap().starts_with("F(1, 2)="));

    std::fs::write(d.join("flat.csv"), "group,value\na,1\na,1\nb,2\nb,2\n").unwrap();
    assert_eq!(code(&run_in(d, &["stats", "--groups", "flat.csv"])), 3);
}

#[test]
fn synth_layout_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(
        code(&run_in(
            d,
            &[
                "synth",
                "--seed",
                "42",
                "--n",
                "4",
                "--width",
                "32",
                "--height",
                "48",
                "--out-dir",
                "o"
            ]
        )),
        0
    );
    for f in [
        "gt.pgm",
        "cand_0.pgm",
        "cand_1.pgm",
        "cand_2.pgm",
        "cand_3.pgm",
        "manifest.json",
    ] {
        assert!(d.join("o").join(f).is_file(), "{f}");
    }
    let m: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.join("o/manifest.json")).unwrap()).unwrap();
    assert_eq!(m["seed"], 42);
    assert_eq!(m["items"][0]["candidates"].as_array().unwrap().len(), 4);
    assert_eq!(
        m["items"][0]["candidates"][2]["specs"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
    let gt = blockfuse::image::load_image(d.join("o/gt.pgm")).unwrap();
    assert_eq!(gt.dims(), (32, 48));

    // too small for a phantom
    assert_eq!(
        code(&run_in(
            d,
            &[
                "synth",
                "--seed",
                "1",
                "--width",
                "8",
                "--height",
                "8",
                "--out-dir",
                "tiny"
            ]
        )),
        2
    );
    assert!(!d.join("tiny").exists());
}

#[test]
fn synth_into_unwritable_location_is_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("file"), b"x").unwrap();
    let out = run_in(
        d,
        &[
            "synth",
            "--seed",
            "1",
            "--width",
            "16",
            "--height",
            "16",
            "--out-dir",
            "file/sub",
        ],
    );
    assert_eq!(code(&out), 1);
}
