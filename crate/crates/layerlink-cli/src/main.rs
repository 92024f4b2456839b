//! Batch CLI over the layerlink library: dataset statistics, feature
//! extraction, supervised evaluation and synthetic data generation.
//!
//! Exit codes: 0 on success, 2 for unreadable or malformed input, 3 for
//! unusable data shapes (single-class labels, starved folds, unachievable
//! sampling ratios). Errors are single lines on stderr.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "layerlink",
    version,
    about = "Multilayer social graph analytics and link prediction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GraphArgs {
    /// Edge CSV (`layer,src,dst`).
    #[arg(long)]
    edges: std::path::PathBuf,

    /// Ordered layer names defining the layer universe.
    #[arg(long, value_delimiter = ',', default_value = "twitter,foursquare")]
    layers: Vec<String>,

    /// Layers whose rows are directed and must be reduced to reciprocal
    /// pairs (repeatable).
    #[arg(long)]
    reciprocal: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Node, edge-set and degree statistics of an edge file.
    Stats {
        #[command(flatten)]
        graph: GraphArgs,

        /// Also write the statistics as JSON.
        #[arg(long)]
        json_out: Option<std::path::PathBuf>,
    },

    /// Assemble a labeled feature CSV for one task and feature set.
    Features {
        #[command(flatten)]
        graph: GraphArgs,

        /// Check-in CSV (`user,venue,lat,lon,timestamp`).
        #[arg(long)]
        checkins: std::path::PathBuf,

        /// Interaction CSV (`kind,user_a,user_b_or_tag,timestamp`).
        #[arg(long)]
        interactions: std::path::PathBuf,

        /// Feature set: twitter, foursquare or multilayer.
        #[arg(long)]
        set: String,

        /// Task: `multiplex` or `cross:<from>-><to>` over layer names.
        #[arg(long)]
        task: String,

        /// Negatives sampled per positive.
        #[arg(long, default_value_t = 1.0)]
        neg_ratio: f64,

        #[arg(long, default_value_t = 42)]
        seed: u64,

        /// Layer carrying mentions/hashtags (structure of the twitter set).
        #[arg(long, default_value = "twitter")]
        social_layer: String,

        /// Layer carrying check-ins (structure of the foursquare set).
        #[arg(long, default_value = "foursquare")]
        mobility_layer: String,

        /// Output feature CSV; a `<out>.meta.json` sidecar is written too.
        #[arg(long)]
        out: std::path::PathBuf,
    },

    /// Cross-validate a random forest on a feature CSV and report ROC/AUC.
    Evaluate {
        /// Feature CSV produced by `features`.
        features: std::path::PathBuf,

        #[arg(long, default_value_t = 45)]
        trees: usize,

        #[arg(long, default_value_t = 25)]
        depth: usize,

        #[arg(long, default_value_t = 10)]
        folds: usize,

        #[arg(long, default_value_t = 42)]
        seed: u64,

        /// Write the fold-averaged ROC curve (`threshold,fpr,tpr`).
        #[arg(long)]
        roc_out: Option<std::path::PathBuf>,

        /// Also write each fold's raw curve next to `--roc-out`.
        #[arg(long)]
        roc_per_fold: bool,

        /// Write the JSON metrics report.
        #[arg(long)]
        report_out: Option<std::path::PathBuf>,

        /// Train on the full dataset and save the model as JSON.
        #[arg(long)]
        model_out: Option<std::path::PathBuf>,
    },

    /// Generate a synthetic two-layer geo-social dataset.
    Generate {
        /// TOML config; flags below override its values.
        #[arg(long)]
        config: Option<std::path::PathBuf>,

        #[arg(long)]
        n_users: Option<usize>,

        #[arg(long)]
        n_venues: Option<usize>,

        /// Fraction of base links promoted to multiplex links.
        #[arg(long)]
        mu: Option<f64>,

        #[arg(long)]
        mean_degree: Option<f64>,

        #[arg(long)]
        extent_km: Option<f64>,

        #[arg(long)]
        seed: Option<u64>,

        /// Directory for edges.csv, checkins.csv, interactions.csv and
        /// manifest.json.
        #[arg(long)]
        out_dir: std::path::PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Stats { graph, json_out } => commands::stats(&graph, json_out.as_deref()),
        Command::Features {
            graph,
            checkins,
            interactions,
            set,
            task,
            neg_ratio,
            seed,
            social_layer,
            mobility_layer,
            out,
        } => commands::features(commands::FeaturesArgs {
            graph: &graph,
            checkins: &checkins,
            interactions: &interactions,
            set: &set,
            task: &task,
            neg_ratio,
            seed,
            social_layer: &social_layer,
            mobility_layer: &mobility_layer,
            out: &out,
        }),
        Command::Evaluate {
            features,
            trees,
            depth,
            folds,
            seed,
            roc_out,
            roc_per_fold,
            report_out,
            model_out,
        } => commands::evaluate(commands::EvaluateArgs {
            features: &features,
            trees,
            depth,
            folds,
            seed,
            roc_out: roc_out.as_deref(),
            roc_per_fold,
            report_out: report_out.as_deref(),
            model_out: model_out.as_deref(),
        }),
        Command::Generate {
            config,
            n_users,
            n_venues,
            mu,
            mean_degree,
            extent_km,
            seed,
            out_dir,
        } => commands::generate(commands::GenerateArgs {
            config: config.as_deref(),
            n_users,
            n_venues,
            mu,
            mean_degree,
            extent_km,
            seed,
            out_dir: &out_dir,
        }),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(core) = cause.downcast_ref::<layerlink_core::Error>() {
            return if core.is_data_shape() { 3 } else { 2 };
        }
    }
    2
}
