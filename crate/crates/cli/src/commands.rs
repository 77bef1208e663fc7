use std::path::{Path, PathBuf};

use blockfuse::classify::{self, BinaryEvalSet, TABLE4_CSV_HEADER};
use blockfuse::fusion::{self, AggregateReport, FusionItem, SWEEP_CSV_HEADER};
use blockfuse::image::{load_image, load_image_with_depth, write_pgm, BitDepth};
use blockfuse::metrics::{
    evaluate_pair, mixed_loss, MetricReport, MsSsimParams, METRIC_CSV_HEADER,
};
use blockfuse::stats::{self, GroupData};
use blockfuse::synth::{make_candidate_set, DegradeSpec};
use blockfuse::{Error, GrayImage};
use serde::Serialize;
use serde_json::json;

use crate::args::{Global, OutputFormat};
use crate::output::{emit, to_json, write_atomic};
use crate::CliError;

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| {
        CliError::Lib(Error::Io {
            path: path.to_path_buf(),
            source,
        })
    })
}

fn metric_report_text(report: &MetricReport, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Csv => Ok(format!("{METRIC_CSV_HEADER}\n{}\n", report.to_csv_row())),
        OutputFormat::Json => to_json(report),
    }
}

pub fn metrics(g: &Global, gt: &Path, pred: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let gt = load_image(gt)?;
    let pred = load_image(pred)?;
    let report = evaluate_pair(&gt, &pred)?;
    let loss = mixed_loss(&pred, &gt, g.omega, &MsSsimParams::default())?;
    eprintln!("mixed_loss={}", blockfuse::format::sig7(loss));
    emit(out, &metric_report_text(&report, g.format)?)
}

pub struct FuseArgs<'a> {
    pub gt: &'a Path,
    pub candidates: &'a [PathBuf],
    pub block: usize,
    pub out: &'a Path,
    pub winners: &'a Path,
    pub winner_pgm: Option<&'a Path>,
    pub depth: Option<u32>,
}

pub fn fuse(g: &Global, a: FuseArgs) -> Result<(), CliError> {
    let (gt, maxval) = load_image_with_depth(a.gt)?;
    let candidates = a
        .candidates
        .iter()
        .map(load_image)
        .collect::<blockfuse::Result<Vec<_>>>()?;
    let depth = match a.depth {
        Some(bits) => BitDepth::from_bits(bits)?,
        None => BitDepth::for_maxval(maxval),
    };
    let result = fusion::fuse(&gt, &candidates, a.block, &MsSsimParams::default())?;
    let report = evaluate_pair(&gt, &result.fused)?;

    // Render everything before touching the filesystem.
    let fused_bytes = write_pgm(&result.fused, depth);
    let mut winners_json = result.winner_map().to_json();
    winners_json.push('\n');
    let winner_pgm = a.winner_pgm.map(|p| {
        (
            p,
            write_pgm(
                &result.winner_map().to_image(candidates.len()),
                BitDepth::Eight,
            ),
        )
    });

    write_atomic(a.out, &fused_bytes)?;
    write_atomic(a.winners, winners_json.as_bytes())?;
    if let Some((p, bytes)) = winner_pgm {
        write_atomic(p, &bytes)?;
    }
    emit(None, &metric_report_text(&report, g.format)?)
}

fn candidate_index(name: &str) -> Option<usize> {
    name.strip_prefix("cand_")?
        .strip_suffix(".pgm")?
        .parse()
        .ok()
}

fn load_item(dir: &Path) -> Result<FusionItem, CliError> {
    let gt = load_image(dir.join("gt.pgm"))?;
    let entries = std::fs::read_dir(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut found = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        if let Some(k) = entry.file_name().to_str().and_then(candidate_index) {
            found.push((k, entry.path()));
        }
    }
    if found.is_empty() {
        return Err(Error::Argument(format!("no cand_<k>.pgm files in {}", dir.display())).into());
    }
    found.sort();
    let candidates = found
        .iter()
        .map(|(_, p)| load_image(p))
        .collect::<blockfuse::Result<Vec<_>>>()?;
    Ok((gt, candidates))
}

/// A dataset is either one item directory or a directory of item directories,
/// visited in name order.
fn load_dataset(root: &Path) -> Result<Vec<FusionItem>, CliError> {
    if root.join("gt.pgm").is_file() {
        return Ok(vec![load_item(root)?]);
    }
    let entries = std::fs::read_dir(root).map_err(|source| Error::Io {
        path: root.to_path_buf(),
        source,
    })?;
    let mut dirs = Vec::new();
    for entry in entries {
        let path = entry
            .map_err(|source| Error::Io {
                path: root.to_path_buf(),
                source,
            })?
            .path();
        if path.join("gt.pgm").is_file() {
            dirs.push(path);
        }
    }
    if dirs.is_empty() {
        return Err(Error::Argument(format!("no gt.pgm found under {}", root.display())).into());
    }
    dirs.sort();
    dirs.iter().map(|d| load_item(d)).collect()
}

#[derive(Serialize)]
struct SweepRow {
    block_size: usize,
    #[serde(flatten)]
    report: AggregateReport,
}

pub fn sweep(
    g: &Global,
    gt: Option<&Path>,
    candidates: &[PathBuf],
    dataset: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let items = match (gt, dataset) {
        (Some(gt), None) => {
            let cands = candidates
                .iter()
                .map(load_image)
                .collect::<blockfuse::Result<Vec<_>>>()?;
            vec![(load_image(gt)?, cands)]
        }
        (None, Some(dir)) => load_dataset(dir)?,
        _ => {
            return Err(
                Error::Argument("give either --gt with --candidates, or --dataset".into()).into(),
            )
        }
    };
    let table = fusion::sweep_batch(&items, &g.blocks, &MsSsimParams::default())?;
    let text = match g.format {
        OutputFormat::Csv => {
            let mut s = format!("{SWEEP_CSV_HEADER}\n");
            for (m, agg) in &table {
                s.push_str(&agg.to_sweep_csv_row(*m));
                s.push('\n');
            }
            s
        }
        OutputFormat::Json => {
            let rows: Vec<SweepRow> = table
                .iter()
                .map(|(m, r)| SweepRow {
                    block_size: *m,
                    report: *r,
                })
                .collect();
            to_json(&rows)?
        }
    };
    emit(out, &text)
}

pub fn classify_eval(
    g: &Global,
    scores: &Path,
    threshold: f64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::Argument(format!("threshold {threshold} outside [0, 1]")).into());
    }
    let set = BinaryEvalSet::from_csv(&read_text(scores)?)?;
    let row = classify::table4_report(&set, threshold, g.alpha)?;
    let counts = classify::confusion(&set, threshold);
    let flags = classify::threshold_metrics(&counts).degenerate;
    if !flags.is_empty() {
        eprintln!(
            "warning: zero denominator, reported as 0: {}",
            flags.join(", ")
        );
    }
    let text = match g.format {
        OutputFormat::Csv => format!("{TABLE4_CSV_HEADER}\n{}\n", row.to_csv_row()),
        OutputFormat::Json => to_json(&json!({
            "threshold": threshold,
            "alpha": g.alpha,
            "n": set.len(),
            "confusion": {"tp": counts.tp, "tn": counts.tn, "fp": counts.fp, "fn": counts.fn_},
            "degenerate": flags,
            "metrics": row,
        }))?,
    };
    emit(out, &text)
}

pub fn stats(g: &Global, groups: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let data = GroupData::from_csv(&read_text(groups)?)?;
    let report = stats::analyze(&data, g.alpha)?;
    eprint!("{}", report.summary());
    let text = to_json(&json!({
        "summary": report.anova.summary(),
        "anova": report.anova,
        "levene": report.levene,
        "tukey": report.tukey,
        "descriptive": report.descriptive,
        "alpha": report.alpha,
    }))?;
    emit(out, &text)
}

#[derive(Serialize)]
struct ManifestCandidate {
    file: String,
    specs: Vec<DegradeSpec>,
}

#[derive(Serialize)]
struct ManifestItem {
    dir: String,
    seed: u64,
    gt: String,
    candidates: Vec<ManifestCandidate>,
}

pub struct SynthArgs<'a> {
    pub seed: u64,
    pub n: usize,
    pub width: usize,
    pub height: usize,
    pub out_dir: &'a Path,
    pub items: usize,
}

pub fn synth(a: SynthArgs) -> Result<(), CliError> {
    if a.items == 0 {
        return Err(Error::Argument("--items must be at least 1".into()).into());
    }
    let mkdir = |p: &Path| {
        std::fs::create_dir_all(p).map_err(|source| {
            CliError::Lib(Error::Io {
                path: p.to_path_buf(),
                source,
            })
        })
    };
    // Generate every item first so bad parameters fail before anything is written.
    let sets = (0..a.items)
        .map(|i| {
            let seed = a.seed.wrapping_add(i as u64);
            make_candidate_set(seed, a.n, a.width, a.height).map(|s| (seed, s))
        })
        .collect::<blockfuse::Result<Vec<_>>>()?;

    mkdir(a.out_dir)?;
    let mut manifest_items = Vec::with_capacity(a.items);
    for (i, (seed, set)) in sets.iter().enumerate() {
        let rel = if a.items == 1 {
            ".".to_string()
        } else {
            format!("item_{i:03}")
        };
        let dir = a.out_dir.join(&rel);
        mkdir(&dir)?;
        write_image(&dir.join("gt.pgm"), &set.gt)?;
        let mut cands = Vec::with_capacity(set.candidates.len());
        for (k, (img, specs)) in set.candidates.iter().zip(&set.specs).enumerate() {
            let file = format!("cand_{k}.pgm");
            write_image(&dir.join(&file), img)?;
            cands.push(ManifestCandidate {
                file,
                specs: specs.clone(),
            });
        }
        manifest_items.push(ManifestItem {
            dir: rel,
            seed: *seed,
            gt: "gt.pgm".into(),
            candidates: cands,
        });
    }
    let manifest = json!({
        "seed": a.seed,
        "n_candidates": a.n,
        "width": a.width,
        "height": a.height,
        "depth": 8,
        "items": manifest_items,
    });
    write_atomic(
        &a.out_dir.join("manifest.json"),
        to_json(&manifest)?.as_bytes(),
    )
}

fn write_image(path: &Path, img: &GrayImage) -> Result<(), CliError> {
    write_atomic(path, &write_pgm(img, BitDepth::Eight))
}
