use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid bounds {text:?}: {reason}")]
    Bounds { text: String, reason: &'static str },

    #[error("malformed hierarchy XML: {0}")]
    Xml(#[from] roxmltree::Error),

    #[error("no GUI nodes")]
    NoGuiNodes,

    #[error("invalid metadata sidecar {path}: {source}")]
    Metadata {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: zero complete triples")]
    NoCaptures { path: PathBuf },

    #[error("image has zero width or height")]
    EmptyImage,

    #[error("histogram is empty")]
    EmptyHistogram,

    #[error("component bounds have zero area")]
    ZeroAreaCrop,

    #[error("no positioned changes to localize")]
    NothingToLocalize,

    #[error("mutation not applicable: {0}")]
    Mutation(String),

    #[error("invalid layout: {0}")]
    Layout(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("image error at {path}: {source}")]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("{0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
