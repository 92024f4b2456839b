use thiserror::Error;

/// Errors surfaced by graph construction, feature computation, sampling,
/// training and file ingestion.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown layer id {layer} at edge record {record}")]
    UnknownLayer { layer: usize, record: usize },

    #[error("unknown layer name `{0}`")]
    UnknownLayerName(String),

    #[error("duplicate layer name `{0}`")]
    DuplicateLayerName(String),

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("node id {0} out of range")]
    NodeOutOfRange(usize),

    #[error("layer arguments must differ (both were {0})")]
    IdenticalLayers(usize),

    #[error("operation on a node pair requires two distinct nodes")]
    IdenticalNodes,

    #[error("edge-set layer {kind_layer} is neither of the queried layers ({a}, {b})")]
    EdgeSetLayerMismatch {
        kind_layer: usize,
        a: usize,
        b: usize,
    },

    #[error("{0} must be non-negative, got {1}")]
    NegativeInput(&'static str, f64),

    #[error("negative ratio {requested} unachievable: at most {achievable} negatives exist for {positives} positives (max ratio {max_ratio:.4})")]
    NegativeRatioUnachievable {
        requested: f64,
        achievable: usize,
        positives: usize,
        max_ratio: f64,
    },

    #[error("no positive pairs available for this task")]
    NoPositivePairs,

    #[error("training data contains a single class only")]
    SingleClass,

    #[error("feature vector has {got} entries, model expects {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("scores and labels have different lengths ({scores} vs {labels})")]
    LengthMismatch { scores: usize, labels: usize },

    #[error("label must be -1 or +1, got {0}")]
    InvalidLabel(i64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("dataset too small for {folds} stratified folds (positives {positives}, negatives {negatives})")]
    TooSmallForFolds {
        folds: usize,
        positives: usize,
        negatives: usize,
    },

    #[error("fold count must be at least 2, got {0}")]
    BadFoldCount(usize),

    #[error("infeasible generator config: {0}")]
    BadGenConfig(String),

    #[error("venue `{0}` appears with conflicting coordinates")]
    VenueCoordConflict(String),

    #[error("{path}:{line}: {msg}")]
    MalformedRow {
        path: String,
        line: u64,
        msg: String,
    },

    #[error("model file is not compatible: {0}")]
    BadModelFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that describe unusable *data shapes* (single-class
    /// labels, unachievable sampling ratios, fold starvation) rather than
    /// unreadable or malformed input. CLI exit codes map shape errors to 3
    /// and input errors to 2.
    pub fn is_data_shape(&self) -> bool {
        matches!(
            self,
            Error::SingleClass
                | Error::NegativeRatioUnachievable { .. }
                | Error::NoPositivePairs
                | Error::TooSmallForFolds { .. }
                | Error::ArityMismatch { .. }
                | Error::LengthMismatch { .. }
        )
    }
}
