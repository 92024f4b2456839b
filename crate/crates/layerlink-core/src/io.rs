//! File formats: edge, check-in and interaction CSVs, feature matrices with
//! their metadata sidecars, generator manifests and evaluation reports.
//!
//! All files are UTF-8 CSV with a mandatory header. Ingestion errors carry
//! the 1-based line number of the offending row.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::eval::RocPoint;
use crate::features::{FeatureSetKind, LabeledDataset};
use crate::graph::{reciprocal_reduce, BuildReport, MultilayerGraph};
use crate::interaction::{CheckinRecord, HashtagRecord, MentionRecord};

pub const METRICS_SCHEMA_VERSION: u32 = 1;
pub const SIDECAR_SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

/// What ingestion dropped or collapsed.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct IngestReport {
    pub self_loops_dropped: usize,
    pub duplicate_edges_dropped: usize,
    pub self_mentions_dropped: usize,
    /// Directed rows collapsed away by reciprocal reduction, per layer name.
    pub reciprocal_rows_dropped: Vec<(String, usize)>,
}

/// Quote a field if it contains CSV metacharacters; ids are normally plain.
fn csv_field(s: &str) -> std::borrow::Cow<'_, str> {
    if s.contains([',', '"', '\n', '\r']) {
        std::borrow::Cow::Owned(format!("\"{}\"", s.replace('"', "\"\"")))
    } else {
        std::borrow::Cow::Borrowed(s)
    }
}

fn malformed(path: &Path, line: u64, msg: impl Into<String>) -> Error {
    Error::MalformedRow {
        path: path.display().to_string(),
        line,
        msg: msg.into(),
    }
}

fn open_reader(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(file))
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn expect_header(path: &Path, reader: &mut csv::Reader<File>, expected: &[&str]) -> Result<()> {
    let headers = reader.headers().map_err(Error::Csv)?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(malformed(
            path,
            1,
            format!(
                "expected header `{}`, got `{}`",
                expected.join(","),
                got.join(",")
            ),
        ));
    }
    Ok(())
}

/// Read an edge file (`layer,src,dst`) into a multilayer graph.
///
/// `layer_names` fixes the layer universe and their order; a row naming any
/// other layer is an error. Layers listed in `reciprocal` hold directed rows
/// and are collapsed to the undirected pairs present in both directions.
pub fn read_edge_file(
    path: &Path,
    layer_names: &[String],
    reciprocal: &[String],
) -> Result<(MultilayerGraph, IngestReport)> {
    for r in reciprocal {
        if !layer_names.contains(r) {
            return Err(Error::UnknownLayerName(r.clone()));
        }
    }
    let mut reader = open_reader(path)?;
    expect_header(path, &mut reader, &["layer", "src", "dst"])?;

    let mut directed: Vec<Vec<(String, String)>> = vec![Vec::new(); layer_names.len()];
    for record in reader.records() {
        let record = record.map_err(Error::Csv)?;
        let line = record_line(&record);
        if record.len() != 3 {
            return Err(malformed(
                path,
                line,
                format!("expected 3 fields, got {}", record.len()),
            ));
        }
        let layer_name = &record[0];
        let layer = layer_names
            .iter()
            .position(|l| l == layer_name)
            .ok_or_else(|| malformed(path, line, format!("unknown layer name `{layer_name}`")))?;
        let (src, dst) = (record[1].to_string(), record[2].to_string());
        if src.is_empty() || dst.is_empty() {
            return Err(malformed(path, line, "empty node id"));
        }
        directed[layer].push((src, dst));
    }

    let mut report = IngestReport::default();
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    for (layer, rows) in directed.into_iter().enumerate() {
        if reciprocal.contains(&layer_names[layer]) {
            let total = rows.len();
            let reduced = reciprocal_reduce(&rows);
            report
                .reciprocal_rows_dropped
                .push((layer_names[layer].clone(), total - 2 * reduced.len()));
            edges.extend(reduced.into_iter().map(|(a, b)| (layer, a, b)));
        } else {
            edges.extend(rows.into_iter().map(|(a, b)| (layer, a, b)));
        }
    }

    let (graph, build): (MultilayerGraph, BuildReport) =
        MultilayerGraph::build(layer_names, &[], &edges)?;
    report.self_loops_dropped = build.self_loops_dropped;
    report.duplicate_edges_dropped = build.duplicate_edges_dropped;
    Ok((graph, report))
}

/// Write `(layer index, src, dst)` rows under the given layer names.
pub fn write_edge_file(
    path: &Path,
    layer_names: &[&str],
    edges: &[(usize, String, String)],
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "layer,src,dst")?;
    for (layer, src, dst) in edges {
        writeln!(
            w,
            "{},{},{}",
            csv_field(layer_names[*layer]),
            csv_field(src),
            csv_field(dst)
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Read a check-in file (`user,venue,lat,lon,timestamp`).
pub fn read_checkin_file(path: &Path) -> Result<Vec<CheckinRecord>> {
    let mut reader = open_reader(path)?;
    expect_header(
        path,
        &mut reader,
        &["user", "venue", "lat", "lon", "timestamp"],
    )?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(Error::Csv)?;
        let line = record_line(&record);
        if record.len() != 5 {
            return Err(malformed(
                path,
                line,
                format!("expected 5 fields, got {}", record.len()),
            ));
        }
        let lat: f64 = record[2]
            .parse()
            .map_err(|_| malformed(path, line, format!("bad latitude `{}`", &record[2])))?;
        let lon: f64 = record[3]
            .parse()
            .map_err(|_| malformed(path, line, format!("bad longitude `{}`", &record[3])))?;
        if !(-90.0..=90.0).contains(&lat) {
            return Err(malformed(
                path,
                line,
                format!("latitude {lat} out of range"),
            ));
        }
        if !(-180.0..=180.0).contains(&lon) {
            return Err(malformed(
                path,
                line,
                format!("longitude {lon} out of range"),
            ));
        }
        let timestamp: i64 = record[4]
            .parse()
            .map_err(|_| malformed(path, line, format!("bad timestamp `{}`", &record[4])))?;
        if record[0].is_empty() || record[1].is_empty() {
            return Err(malformed(path, line, "empty user or venue id"));
        }
        out.push(CheckinRecord {
            user: record[0].to_string(),
            venue: record[1].to_string(),
            lat,
            lon,
            timestamp,
        });
    }
    Ok(out)
}

pub fn write_checkin_file(path: &Path, records: &[CheckinRecord]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "user,venue,lat,lon,timestamp")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{}",
            csv_field(&r.user),
            csv_field(&r.venue),
            r.lat,
            r.lon,
            r.timestamp
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Read an interaction file (`kind,user_a,user_b_or_tag,timestamp`).
///
/// `kind` is `mention` (columns are source, target) or `hashtag` (columns
/// are user, tag). Self-mentions are dropped and counted; tags are
/// normalized to lowercase.
pub fn read_interaction_file(
    path: &Path,
) -> Result<(Vec<MentionRecord>, Vec<HashtagRecord>, usize)> {
    let mut reader = open_reader(path)?;
    expect_header(
        path,
        &mut reader,
        &["kind", "user_a", "user_b_or_tag", "timestamp"],
    )?;
    let mut mentions = Vec::new();
    let mut hashtags = Vec::new();
    let mut self_mentions = 0;
    for record in reader.records() {
        let record = record.map_err(Error::Csv)?;
        let line = record_line(&record);
        if record.len() != 4 {
            return Err(malformed(
                path,
                line,
                format!("expected 4 fields, got {}", record.len()),
            ));
        }
        let timestamp: i64 = record[3]
            .parse()
            .map_err(|_| malformed(path, line, format!("bad timestamp `{}`", &record[3])))?;
        if record[1].is_empty() {
            return Err(malformed(path, line, "empty user id"));
        }
        match &record[0] {
            "mention" => {
                if record[2].is_empty() {
                    return Err(malformed(path, line, "empty mention target"));
                }
                if record[1] == record[2] {
                    self_mentions += 1;
                    continue;
                }
                mentions.push(MentionRecord {
                    source: record[1].to_string(),
                    target: record[2].to_string(),
                    timestamp,
                });
            }
            "hashtag" => {
                let tag = record[2].trim_start_matches('#').to_lowercase();
                if tag.is_empty() {
                    return Err(malformed(path, line, "empty hashtag"));
                }
                hashtags.push(HashtagRecord {
                    user: record[1].to_string(),
                    tag,
                    timestamp,
                });
            }
            other => {
                return Err(malformed(
                    path,
                    line,
                    format!("unknown interaction kind `{other}`"),
                ));
            }
        }
    }
    Ok((mentions, hashtags, self_mentions))
}

pub fn write_interaction_file(
    path: &Path,
    mentions: &[MentionRecord],
    hashtags: &[HashtagRecord],
) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "kind,user_a,user_b_or_tag,timestamp")?;
    for m in mentions {
        writeln!(
            w,
            "mention,{},{},{}",
            csv_field(&m.source),
            csv_field(&m.target),
            m.timestamp
        )?;
    }
    for h in hashtags {
        writeln!(
            w,
            "hashtag,{},{},{}",
            csv_field(&h.user),
            csv_field(&h.tag),
            h.timestamp
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Metadata written next to a feature CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSidecar {
    pub schema_version: u32,
    pub feature_set: String,
    pub task: String,
    pub feature_names: Vec<String>,
    pub seed: u64,
    pub negative_ratio: f64,
    pub n_pairs: usize,
    pub n_positive: usize,
    pub n_negative: usize,
    pub distance_imputed_count: usize,
    pub median_distance_km: f64,
}

/// Write the feature matrix (`i,j,label,<four feature columns>`) and its
/// sidecar (`<path>.meta.json`).
pub fn write_feature_file(path: &Path, g: &MultilayerGraph, ds: &LabeledDataset) -> Result<()> {
    let names = ds.kind.feature_names();
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "i,j,label,{}", names.join(","))?;
    for p in &ds.pairs {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            csv_field(g.node_name(p.i)),
            csv_field(g.node_name(p.j)),
            p.label,
            p.features[0],
            p.features[1],
            p.features[2],
            p.features[3]
        )?;
    }
    w.flush()?;

    let sidecar = FeatureSidecar {
        schema_version: SIDECAR_SCHEMA_VERSION,
        feature_set: ds.kind.name().to_string(),
        task: ds.task_name.clone(),
        feature_names: names.iter().map(|s| s.to_string()).collect(),
        seed: ds.seed,
        negative_ratio: ds.negative_ratio,
        n_pairs: ds.pairs.len(),
        n_positive: ds.positives(),
        n_negative: ds.negatives(),
        distance_imputed_count: ds.imputed_count(),
        median_distance_km: ds.median_distance_km,
    };
    let json = serde_json::to_string_pretty(&sidecar)?;
    std::fs::write(sidecar_path(path), json)?;
    Ok(())
}

pub fn sidecar_path(feature_path: &Path) -> std::path::PathBuf {
    let mut os = feature_path.as_os_str().to_os_string();
    os.push(".meta.json");
    std::path::PathBuf::from(os)
}

pub fn read_sidecar(feature_path: &Path) -> Option<FeatureSidecar> {
    let text = std::fs::read_to_string(sidecar_path(feature_path)).ok()?;
    serde_json::from_str(&text).ok()
}

/// A feature matrix read back for evaluation.
#[derive(Debug, Clone)]
pub struct FeatureMatrix {
    pub pair_names: Vec<(String, String)>,
    pub feature_names: Vec<String>,
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<i8>,
}

/// Read a feature CSV (`i,j,label,f1..f4`).
pub fn read_feature_file(path: &Path) -> Result<FeatureMatrix> {
    let mut reader = open_reader(path)?;
    let headers = reader.headers().map_err(Error::Csv)?.clone();
    let cols: Vec<&str> = headers.iter().collect();
    if cols.len() < 4 || cols[0] != "i" || cols[1] != "j" || cols[2] != "label" {
        return Err(malformed(
            path,
            1,
            format!(
                "expected header `i,j,label,<features...>`, got `{}`",
                cols.join(",")
            ),
        ));
    }
    let feature_names: Vec<String> = cols[3..].iter().map(|s| s.to_string()).collect();
    let arity = feature_names.len();

    let mut matrix = FeatureMatrix {
        pair_names: Vec::new(),
        feature_names,
        features: Vec::new(),
        labels: Vec::new(),
    };
    for record in reader.records() {
        let record = record.map_err(Error::Csv)?;
        let line = record_line(&record);
        if record.len() != 3 + arity {
            return Err(malformed(
                path,
                line,
                format!("expected {} fields, got {}", 3 + arity, record.len()),
            ));
        }
        let label: i64 = record[2]
            .parse()
            .map_err(|_| malformed(path, line, format!("bad label `{}`", &record[2])))?;
        if label != 1 && label != -1 {
            return Err(malformed(
                path,
                line,
                format!("label must be -1 or 1, got {label}"),
            ));
        }
        let mut row = Vec::with_capacity(arity);
        for k in 0..arity {
            let v: f64 = record[3 + k].parse().map_err(|_| {
                malformed(
                    path,
                    line,
                    format!("bad feature value `{}`", &record[3 + k]),
                )
            })?;
            row.push(v);
        }
        matrix
            .pair_names
            .push((record[0].to_string(), record[1].to_string()));
        matrix.features.push(row);
        matrix.labels.push(label as i8);
    }
    Ok(matrix)
}

/// Evaluation output: config echo, per-fold AUC, dataset shape and timing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema_version: u32,
    pub task: Option<String>,
    pub feature_set: Option<String>,
    pub trees: usize,
    pub depth: usize,
    pub folds: usize,
    pub seed: u64,
    pub n_rows: usize,
    pub n_positive: usize,
    pub n_negative: usize,
    pub per_fold_auc: Vec<f64>,
    pub mean_auc: f64,
    pub elapsed_ms: u64,
}

/// Writer for ROC curve CSVs (`threshold,fpr,tpr`).
pub struct RocPointWriter {
    inner: BufWriter<File>,
}

impl RocPointWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let mut inner = BufWriter::new(File::create(path)?);
        writeln!(inner, "threshold,fpr,tpr")?;
        Ok(RocPointWriter { inner })
    }

    pub fn write(&mut self, p: &RocPoint) -> Result<()> {
        writeln!(self.inner, "{},{},{}", p.threshold, p.fpr, p.tpr)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

/// Manifest written by the generator: config echo plus a SHA-256 per file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerateManifest {
    pub schema_version: u32,
    pub seed: u64,
    pub config: crate::synth::GenConfig,
    pub files: Vec<FileDigest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub name: String,
    pub sha256: String,
    pub bytes: u64,
}

pub fn file_digest(path: &Path) -> Result<FileDigest> {
    let data = std::fs::read(path)?;
    let mut hasher = Sha256::new();
    hasher.update(&data);
    let digest = hasher.finalize();
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    Ok(FileDigest {
        name: path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        sha256: hex,
        bytes: data.len() as u64,
    })
}

/// Check that the ids used by the event files overlap the graph's node set;
/// returns the ids that do not.
pub fn unknown_users<'a>(
    g: &MultilayerGraph,
    checkins: &'a [CheckinRecord],
    mentions: &'a [MentionRecord],
    hashtags: &'a [HashtagRecord],
) -> Vec<&'a str> {
    let mut missing: Vec<&str> = Vec::new();
    let mut seen: HashSet<&str> = HashSet::new();
    let mut check = |user: &'a str, missing: &mut Vec<&'a str>| {
        if seen.insert(user) && g.node_id(user).is_err() {
            missing.push(user);
        }
    };
    for r in checkins {
        check(&r.user, &mut missing);
    }
    for r in mentions {
        check(&r.source, &mut missing);
        check(&r.target, &mut missing);
    }
    for r in hashtags {
        check(&r.user, &mut missing);
    }
    missing.sort_unstable();
    missing
}

/// Mirror of [`FeatureSetKind::feature_names`] for already-written files.
pub fn feature_names_of(kind: FeatureSetKind) -> Vec<String> {
    kind.feature_names().iter().map(|s| s.to_string()).collect()
}
