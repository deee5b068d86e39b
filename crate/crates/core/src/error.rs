use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("space declares no decision makers")]
    NoDms,
    #[error("dm {dm} declares no menus")]
    NoMenus { dm: usize },
    #[error("dm {dm}, menu {menu} is empty")]
    EmptyMenu { dm: usize, menu: usize },
    #[error("dm {dm}: alternative {label:?} appears twice in {context}")]
    DuplicateAlternative {
        dm: usize,
        context: String,
        label: String,
    },
    #[error("dm {dm}, menu {menu}: unknown alternative {label:?}")]
    UnknownAlternative {
        dm: usize,
        menu: usize,
        label: String,
    },
    #[error("dm {dm}: menu {menu} repeats menu {first}")]
    DuplicateMenu { dm: usize, menu: usize, first: usize },
    #[error("dm {dm}: alternative label {label:?} is empty or contains '|'")]
    BadLabel { dm: usize, label: String },
    #[error("dm index {dm} out of range ({count} dms)")]
    BadDm { dm: usize, count: usize },
    #[error("allowed rule set for dm {dm} is empty")]
    EmptyAllowedSet { dm: usize },
    #[error("rule index {index} invalid for dm {dm} ({count} rules)")]
    BadIndex { dm: usize, index: usize, count: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid rational {0:?}")]
    BadRational(String),
    #[error("invalid joint choice rule: {0}")]
    InvalidRule(String),
    #[error("operation needs 2 dms with 2 binary menus each")]
    NotChshScenario,
    #[error("extension test needs exactly 2 dms, got {0}")]
    NotTwoDms(usize),
    #[error("restricted type matrix is not generating")]
    NotGenerating,
    #[error("double description exceeded the cap of {cap} rays")]
    TooLarge { cap: usize },
    #[error("alpha = {0} outside [0, 1/2]")]
    BadAlpha(String),
    #[error("bad mixture weights: {0}")]
    BadWeights(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("bad input: {0}")]
    Parse(String),
    #[error("certificate failed re-verification: {0}")]
    CertificateCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
