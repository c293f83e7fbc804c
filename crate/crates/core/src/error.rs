use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KmError {
    #[error("invalid Cartan type `{0}` (expected A1+, B2+, C3+, D4+, E6-E8, F4 or G2)")]
    InvalidType(String),
    #[error("index {index} out of range (maximum {max})")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("weight difference is not in the affine root lattice")]
    NotIntegral,
    #[error("highest weight {0} is not dominant integral")]
    NotDominant(String),
    #[error("weight {0} is not regular dominant after the rho shift")]
    NotRegularDominant(String),
    #[error(
        "Weyl group frontier at length {max_len} still reaches depth {reached} <= {depth}; \
         increase max_len"
    )]
    FrontierTooShallow {
        max_len: usize,
        depth: u32,
        reached: i64,
    },
    #[error("weight {0} lies outside the realized module")]
    WeightOutOfRange(String),
    #[error("module depth {available} is insufficient; depth {required} is required")]
    DepthInsufficient { required: u32, available: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, KmError>;
