//! End-to-end tests of the `mebench` binary: flag handling, the files it
//! writes, and its failure modes. Fixtures are synthesized in tempdirs
//! through the crate's own sequence writers.

mod common;

use common::{moving_object_sequence, smooth_texture, translation_sequence};
use mebench::frame::Frame;
use mebench::io::emit::{write_pgm_dir, write_raw_yuv420, write_y4m};
use std::path::Path;
use std::process::{Command, Output};

fn mebench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mebench"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn stdout_text(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8")
}

fn write_y4m_file(path: &Path, frames: &[Frame]) {
    let mut file = std::fs::File::create(path).unwrap();
    write_y4m(&mut file, frames, (25, 1)).unwrap();
}

#[test]
fn estimate_on_pgm_dir_reports_per_frame_quality() {
    let dir = tempfile::tempdir().unwrap();
    let frames = moving_object_sequence(9, 96, 64, 32, (8, 8), &[(3, 0), (0, 2), (-2, -1)]);
    let seq = dir.path().join("frames");
    std::fs::create_dir(&seq).unwrap();
    write_pgm_dir(&seq, &frames).unwrap();

    let csv = dir.path().join("per_frame.csv");
    let out = mebench(&[
        "estimate",
        "--input",
        seq.to_str().unwrap(),
        "--format",
        "pgm-dir",
        "--algo",
        "fsa",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_text(&out));
    let text = stdout_text(&out);
    assert!(
        text.contains("fsa over 3 predicted 96x64 frames"),
        "summary line missing: {text}"
    );

    let csv = std::fs::read_to_string(csv).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("frame,psnr,mse,total_evaluations,avg_evaluations_per_block")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3, "one row per predicted frame");
    for (i, row) in rows.iter().enumerate() {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 5, "row: {row}");
        assert_eq!(fields[0], (i + 1).to_string(), "frame indices start at 1");
        let psnr: f64 = fields[1].parse().unwrap();
        assert!(
            psnr > 20.0,
            "exhaustive search on mostly static content should predict well, got {psnr}"
        );
        let evals: u64 = fields[3].parse().unwrap();
        assert!(evals > 0);
    }
}

#[test]
fn identical_frames_hit_the_psnr_cap() {
    let dir = tempfile::tempdir().unwrap();
    let frame = smooth_texture(4, 64, 48);
    let input = dir.path().join("still.y4m");
    write_y4m_file(&input, &[frame.clone(), frame]);

    let csv = dir.path().join("still.csv");
    let out = mebench(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "y4m",
        "--algo",
        "fsa",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_text(&out));

    let csv = std::fs::read_to_string(csv).unwrap();
    let row = csv.lines().nth(1).expect("one data row");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[1], "100.000", "capped psnr for a bit-exact prediction");
    assert_eq!(fields[2], "0", "zero mse");
}

#[test]
fn mv_dump_lists_every_block_of_every_pair() {
    let dir = tempfile::tempdir().unwrap();
    // 64x48 at block 16 is a 4x3 grid; three frames make two pairs.
    let frames = translation_sequence(7, 64, 48, 8, &[(1, 0), (0, 1)]);
    let input = dir.path().join("seq.y4m");
    write_y4m_file(&input, &frames);

    let dump = dir.path().join("vectors.mv");
    let out = mebench(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "y4m",
        "--algo",
        "hsbm",
        "--mv-dump",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_text(&out));

    let dump = std::fs::read_to_string(dump).unwrap();
    let mut lines = dump.lines();
    assert_eq!(lines.next(), Some("# frame bx by u v sad evals"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 12, "blocks per pair times pairs");
    for row in rows {
        let fields: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(fields.len(), 7, "row: {row}");
        let frame: usize = fields[0].parse().unwrap();
        assert!(frame == 1 || frame == 2);
        let u: i32 = fields[3].parse().unwrap();
        let v: i32 = fields[4].parse().unwrap();
        assert!(u.abs() <= 8 && v.abs() <= 8, "vector within the window");
    }
}

#[test]
fn surface_dump_scores_every_valid_displacement() {
    let dir = tempfile::tempdir().unwrap();
    let frames = translation_sequence(21, 80, 80, 10, &[(2, -1)]);
    let input = dir.path().join("seq.y4m");
    write_y4m_file(&input, &frames);

    let surface = dir.path().join("surface.csv");
    let out = mebench(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "y4m",
        "--algo",
        "fsa",
        "--dump-surface",
        "1,32,32",
        "--surface-csv",
        surface.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_text(&out));

    let surface = std::fs::read_to_string(surface).unwrap();
    let mut lines = surface.lines();
    assert_eq!(lines.next(), Some("u,v,sad"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 17 * 17, "full window for an interior block");
    let zeros: Vec<&str> = rows.iter().copied().filter(|r| r.ends_with(",0")).collect();
    assert_eq!(
        zeros,
        vec!["2,-1,0"],
        "the planted translation is the unique perfect match"
    );
}

#[test]
fn surface_dump_rejects_bad_specs() {
    let dir = tempfile::tempdir().unwrap();
    let frames = translation_sequence(21, 80, 80, 10, &[(2, -1)]);
    let input = dir.path().join("seq.y4m");
    write_y4m_file(&input, &frames);

    let base = [
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "y4m",
        "--algo",
        "fsa",
        "--dump-surface",
    ];

    // Frame 0 has no predecessor to match against.
    let mut args = base.to_vec();
    args.push("0,32,32");
    let out = mebench(&args);
    assert!(!out.status.success());
    assert!(
        stderr_text(&out).contains("surface frame 0 out of range"),
        "stderr: {}",
        stderr_text(&out)
    );

    // (5, 0) is not a multiple of the block edge.
    let mut args = base.to_vec();
    args.push("1,5,0");
    let out = mebench(&args);
    assert!(!out.status.success());
    assert!(
        stderr_text(&out).contains("not a grid position"),
        "stderr: {}",
        stderr_text(&out)
    );
}

#[test]
fn compare_benchmarks_against_the_exhaustive_reference() {
    let dir = tempfile::tempdir().unwrap();
    let frames = translation_sequence(33, 96, 64, 8, &[(1, 0), (0, 1)]);
    let input = dir.path().join("seq.y4m");
    write_y4m_file(&input, &frames);

    let csv = dir.path().join("compare.csv");
    let out = mebench(&[
        "compare",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "y4m",
        "--algo",
        "fsa",
        "--algo",
        "tss",
        "--algo",
        "ds",
        "--algo",
        "hsbm",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_text(&out));
    let text = stdout_text(&out);
    assert!(text.contains("algorithm"), "table header missing: {text}");

    let csv = std::fs::read_to_string(csv).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("algorithm,mean_psnr,d_psnr,mean_evaluations_per_block,rank")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(
        rows.iter().map(|r| r[0]).collect::<Vec<_>>(),
        vec!["fsa", "tss", "ds", "hsbm"],
        "rows keep the requested order"
    );

    let fsa = &rows[0];
    assert_eq!(fsa[2], "0", "the reference deviates from itself by nothing");
    // Border blocks clip the window, so the mean sits below the interior
    // count of 17*17 but stays within an order of magnitude of it.
    let fsa_evals: f64 = fsa[3].parse().unwrap();
    assert!(
        fsa_evals > 100.0 && fsa_evals <= 289.0,
        "exhaustive search evaluates the (clipped) window, got {fsa_evals}"
    );
    assert_eq!(fsa[4], "4", "most evaluations, so last in the effort ranking");

    let mut ranks: Vec<&str> = rows.iter().map(|r| r[4]).collect();
    ranks.sort_unstable();
    assert_eq!(ranks, vec!["1", "2", "3", "4"]);
    for row in &rows[1..] {
        let d: f64 = row[2].parse().unwrap();
        assert!(d <= 0.0, "no algorithm can beat the exhaustive reference");
        let evals: f64 = row[3].parse().unwrap();
        assert!(evals < fsa_evals);
    }
}

#[test]
fn compare_without_the_reference_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let frames = translation_sequence(3, 64, 48, 8, &[(1, 0)]);
    let input = dir.path().join("seq.y4m");
    write_y4m_file(&input, &frames);

    let out = mebench(&[
        "compare",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "y4m",
        "--algo",
        "tss",
        "--algo",
        "hsbm",
    ]);
    assert!(!out.status.success());
    assert!(
        stderr_text(&out).contains("requires fsa results as the quality reference"),
        "stderr: {}",
        stderr_text(&out)
    );
}

#[test]
fn yuv420_needs_explicit_dimensions() {
    let dir = tempfile::tempdir().unwrap();
    let frames = translation_sequence(5, 64, 48, 8, &[(1, 0)]);
    let input = dir.path().join("seq.yuv");
    let mut file = std::fs::File::create(&input).unwrap();
    write_raw_yuv420(&mut file, &frames).unwrap();
    drop(file);

    let out = mebench(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "yuv420",
        "--algo",
        "fsa",
    ]);
    assert!(!out.status.success());
    assert!(
        stderr_text(&out).contains("yuv420 input needs --width and --height"),
        "stderr: {}",
        stderr_text(&out)
    );

    let out = mebench(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "yuv420",
        "--width",
        "64",
        "--height",
        "48",
        "--algo",
        "fsa",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_text(&out));
    assert!(stdout_text(&out).contains("fsa over 1 predicted 64x48 frames"));
}

#[test]
fn frame_limit_truncates_the_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let frames = translation_sequence(13, 64, 48, 8, &[(1, 0), (0, 1), (-1, 0), (0, -1)]);
    let input = dir.path().join("seq.y4m");
    write_y4m_file(&input, &frames);

    let csv = dir.path().join("limited.csv");
    let out = mebench(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "y4m",
        "--algo",
        "fsa",
        "--frames",
        "3",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_text(&out));
    let csv = std::fs::read_to_string(csv).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2, "three frames make two pairs");
}

#[test]
fn single_frame_inputs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("one.y4m");
    write_y4m_file(&input, &[smooth_texture(2, 64, 48)]);

    let out = mebench(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "y4m",
        "--algo",
        "fsa",
    ]);
    assert!(!out.status.success());
    assert!(
        stderr_text(&out).contains("no frame pairs"),
        "stderr: {}",
        stderr_text(&out)
    );
}

#[test]
fn nonstandard_window_radii_are_rejected_at_parse_time() {
    let out = mebench(&[
        "estimate",
        "--input",
        "ignored.y4m",
        "--format",
        "y4m",
        "--window",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(2), "usage errors exit with 2");
    assert!(
        stderr_text(&out).contains("window radius 7 unsupported, use 8 or 16"),
        "stderr: {}",
        stderr_text(&out)
    );
}

#[test]
fn seed_env_variable_matches_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let frames = translation_sequence(17, 64, 48, 8, &[(2, 0), (0, -1)]);
    let input = dir.path().join("seq.y4m");
    write_y4m_file(&input, &frames);

    let run = |tag: &str, seed_args: &[&str], env: Option<(&str, &str)>| {
        let csv = dir.path().join(format!("{tag}.csv"));
        let mut args = vec![
            "estimate",
            "--input",
            input.to_str().unwrap(),
            "--format",
            "y4m",
            "--algo",
            "hsbm",
            "--csv",
        ];
        let csv_arg = csv.to_str().unwrap().to_string();
        args.push(&csv_arg);
        args.extend_from_slice(seed_args);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_mebench"));
        cmd.args(&args);
        if let Some((k, v)) = env {
            cmd.env(k, v);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success(), "stderr: {}", stderr_text(&out));
        std::fs::read(csv).unwrap()
    };

    let by_flag = run("flag", &["--seed", "31"], None);
    let by_env = run("env", &[], Some(("MEBENCH_SEED", "31")));
    let default = run("default", &[], None);
    assert_eq!(by_flag, by_env, "MEBENCH_SEED stands in for --seed");
    assert_ne!(by_flag, default, "seed 31 differs from the default seed 0");
}
