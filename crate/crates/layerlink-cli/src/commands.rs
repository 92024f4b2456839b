use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use layerlink_core::eval::average_roc;
use layerlink_core::features::{
    assemble, sample_pairs, validate_task_set, FeatureInputs, FeatureSetKind, PredictionTask,
};
use layerlink_core::forest::ForestConfig;
use layerlink_core::graph::MultilayerGraph;
use layerlink_core::interaction::{HashtagIndex, MentionIndex, VenueIndex};
use layerlink_core::io::{
    file_digest, read_checkin_file, read_edge_file, read_feature_file, read_interaction_file,
    read_sidecar, unknown_users, write_checkin_file, write_edge_file, write_feature_file,
    write_interaction_file, GenerateManifest, MetricsReport, RocPointWriter,
    MANIFEST_SCHEMA_VERSION, METRICS_SCHEMA_VERSION,
};
use layerlink_core::synth::{self, GenConfig};
use layerlink_core::{cross_validate, train};

use crate::GraphArgs;

const ROC_GRID_POINTS: usize = 101;

pub fn stats(graph_args: &GraphArgs, json_out: Option<&Path>) -> Result<()> {
    let (graph, report) = read_edge_file(
        &graph_args.edges,
        &graph_args.layers,
        &graph_args.reciprocal,
    )?;
    let stats = graph.dataset_stats();

    println!("{:<24}{}", "nodes", stats.node_count);
    println!("{:<24}{}", "union edges", stats.union_edge_count);
    println!("{:<24}{}", "multiplex edges", stats.multiplex_edge_count);
    for (name, count) in stats.layer_names.iter().zip(&stats.exclusive_edge_counts) {
        println!("{:<24}{}", format!("{name}-only edges"), count);
    }
    // Edges-per-node convention: |E| / |V|, not 2|E| / |V|.
    println!(
        "{:<24}{:.4}",
        "mean global degree", stats.mean_global_degree
    );
    println!("{:<24}{:.4}", "mean core degree", stats.mean_core_degree);
    if report.duplicate_edges_dropped + report.self_loops_dropped > 0 {
        eprintln!(
            "note: dropped {} duplicate edges, {} self-loops",
            report.duplicate_edges_dropped, report.self_loops_dropped
        );
    }

    if let Some(path) = json_out {
        let doc = serde_json::json!({
            "stats": stats,
            "ingest": report,
        });
        fs::write(path, serde_json::to_string_pretty(&doc)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

pub struct FeaturesArgs<'a> {
    pub graph: &'a GraphArgs,
    pub checkins: &'a Path,
    pub interactions: &'a Path,
    pub set: &'a str,
    pub task: &'a str,
    pub neg_ratio: f64,
    pub seed: u64,
    pub social_layer: &'a str,
    pub mobility_layer: &'a str,
    pub out: &'a Path,
}

fn parse_task(raw: &str, g: &MultilayerGraph) -> Result<PredictionTask> {
    if raw == "multiplex" {
        return Ok(PredictionTask::Multiplex);
    }
    let Some(rest) = raw.strip_prefix("cross:") else {
        bail!("task must be `multiplex` or `cross:<from>-><to>`, got `{raw}`");
    };
    let Some((from, to)) = rest.split_once("->") else {
        bail!("cross task must look like `cross:<from>-><to>`, got `{raw}`");
    };
    Ok(PredictionTask::CrossNetwork {
        feature_layer: g.layer_by_name(from.trim())?,
        target_layer: g.layer_by_name(to.trim())?,
    })
}

pub fn features(args: FeaturesArgs) -> Result<()> {
    let (graph, _) = read_edge_file(
        &args.graph.edges,
        &args.graph.layers,
        &args.graph.reciprocal,
    )?;
    let checkins = read_checkin_file(args.checkins)?;
    let (mention_records, hashtag_records, _) = read_interaction_file(args.interactions)?;

    let missing = unknown_users(&graph, &checkins, &mention_records, &hashtag_records);
    if !missing.is_empty() {
        eprintln!(
            "note: {} event user ids do not appear in the graph (first: {})",
            missing.len(),
            missing[0]
        );
    }

    let venues = VenueIndex::build(&checkins)?;
    let mentions = MentionIndex::build(&mention_records);
    let hashtags = HashtagIndex::build(&hashtag_records);
    let inputs = FeatureInputs::new(
        &graph,
        &mentions,
        &hashtags,
        &venues,
        graph.layer_by_name(args.social_layer)?,
        graph.layer_by_name(args.mobility_layer)?,
    );

    let kind: FeatureSetKind = args.set.parse().map_err(|e: String| anyhow!(e))?;
    let task = parse_task(args.task, &graph)?;
    validate_task_set(task, kind, &inputs)?;

    let pairs = sample_pairs(&graph, task, args.neg_ratio, args.seed)?;
    let dataset = assemble(
        &inputs,
        &pairs,
        kind,
        &task.describe(&graph),
        args.seed,
        args.neg_ratio,
    )?;
    write_feature_file(args.out, &graph, &dataset)?;

    println!(
        "wrote {} pairs ({} positive, {} negative) to {}",
        dataset.pairs.len(),
        dataset.positives(),
        dataset.negatives(),
        args.out.display()
    );
    Ok(())
}

pub struct EvaluateArgs<'a> {
    pub features: &'a Path,
    pub trees: usize,
    pub depth: usize,
    pub folds: usize,
    pub seed: u64,
    pub roc_out: Option<&'a Path>,
    pub roc_per_fold: bool,
    pub report_out: Option<&'a Path>,
    pub model_out: Option<&'a Path>,
}

pub fn evaluate(args: EvaluateArgs) -> Result<()> {
    let started = Instant::now();
    let matrix = read_feature_file(args.features)?;
    let sidecar = read_sidecar(args.features);

    let cfg = ForestConfig {
        n_trees: args.trees,
        max_depth: args.depth,
        seed: args.seed,
        ..ForestConfig::default()
    };
    let report = cross_validate(
        &matrix.features,
        &matrix.labels,
        &cfg,
        args.folds,
        args.seed,
    )?;

    let n_positive = matrix.labels.iter().filter(|&&y| y > 0).count();
    let metrics = MetricsReport {
        schema_version: METRICS_SCHEMA_VERSION,
        task: sidecar.as_ref().map(|s| s.task.clone()),
        feature_set: sidecar.as_ref().map(|s| s.feature_set.clone()),
        trees: args.trees,
        depth: args.depth,
        folds: args.folds,
        seed: args.seed,
        n_rows: matrix.labels.len(),
        n_positive,
        n_negative: matrix.labels.len() - n_positive,
        per_fold_auc: report.folds.iter().map(|f| f.auc).collect(),
        mean_auc: report.mean_auc,
        elapsed_ms: started.elapsed().as_millis() as u64,
    };

    for (k, fold) in report.folds.iter().enumerate() {
        println!("fold {k:2}  auc {:.4}", fold.auc);
    }
    println!("mean auc {:.4}", report.mean_auc);

    if let Some(path) = args.report_out {
        fs::write(path, serde_json::to_string_pretty(&metrics)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }

    if let Some(path) = args.roc_out {
        let averaged = average_roc(&report.folds, ROC_GRID_POINTS);
        let mut w = RocPointWriter::create(path)?;
        for p in &averaged {
            w.write(p)?;
        }
        w.finish()?;
        if args.roc_per_fold {
            for (k, fold) in report.folds.iter().enumerate() {
                let fold_path = per_fold_path(path, k);
                let mut w = RocPointWriter::create(&fold_path)?;
                for p in &fold.points {
                    w.write(p)?;
                }
                w.finish()?;
            }
        }
    }

    if let Some(path) = args.model_out {
        let forest = train(&matrix.features, &matrix.labels, &cfg)?;
        forest.save(path)?;
        println!("model written to {}", path.display());
    }
    Ok(())
}

fn per_fold_path(base: &Path, fold: usize) -> std::path::PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("roc");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    base.with_file_name(format!("{stem}_fold{fold}.{ext}"))
}

pub struct GenerateArgs<'a> {
    pub config: Option<&'a Path>,
    pub n_users: Option<usize>,
    pub n_venues: Option<usize>,
    pub mu: Option<f64>,
    pub mean_degree: Option<f64>,
    pub extent_km: Option<f64>,
    pub seed: Option<u64>,
    pub out_dir: &'a Path,
}

pub fn generate(args: GenerateArgs) -> Result<()> {
    let mut cfg = match args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            toml::from_str::<GenConfig>(&text)
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => GenConfig::default(),
    };
    if let Some(v) = args.n_users {
        cfg.n_users = v;
    }
    if let Some(v) = args.n_venues {
        cfg.n_venues = v;
    }
    if let Some(v) = args.mu {
        cfg.multiplex_fraction = v;
    }
    if let Some(v) = args.mean_degree {
        cfg.mean_degree = v;
    }
    if let Some(v) = args.extent_km {
        cfg.city_extent_km = v;
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }

    let dataset = synth::generate(&cfg)?;
    fs::create_dir_all(args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;

    let edges_path = args.out_dir.join("edges.csv");
    let checkins_path = args.out_dir.join("checkins.csv");
    let interactions_path = args.out_dir.join("interactions.csv");
    write_edge_file(&edges_path, &dataset.layer_names, &dataset.edges)?;
    write_checkin_file(&checkins_path, &dataset.checkins)?;
    write_interaction_file(&interactions_path, &dataset.mentions, &dataset.hashtags)?;

    let manifest = GenerateManifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        seed: cfg.seed,
        config: cfg,
        files: vec![
            file_digest(&edges_path)?,
            file_digest(&checkins_path)?,
            file_digest(&interactions_path)?,
        ],
    };
    let manifest_path = args.out_dir.join("manifest.json");
    let mut w = BufWriter::new(File::create(&manifest_path)?);
    w.write_all(serde_json::to_string_pretty(&manifest)?.as_bytes())?;
    w.write_all(b"\n")?;
    w.flush()?;

    let stats = dataset.graph.dataset_stats();
    println!(
        "generated {} users, {} union edges ({} multiplex), {} checkins, {} mentions, {} hashtag records",
        stats.node_count,
        stats.union_edge_count,
        stats.multiplex_edge_count,
        dataset.checkins.len(),
        dataset.mentions.len(),
        dataset.hashtags.len()
    );
    println!("wrote {}", manifest_path.display());
    Ok(())
}
