use thiserror::Error;
use torsion_scope_core::Error as CoreError;

use crate::catalog_io::CatalogError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

impl CliError {
    /// 3 when a closure or ambient cap was hit, 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(
                CoreError::ClosureTooLarge { .. } | CoreError::AmbientTooLarge { .. },
            ) => 3,
            CliError::Catalog(CatalogError::Invalid {
                source: Some(CoreError::ClosureTooLarge { .. }),
                ..
            }) => 3,
            _ => 2,
        }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
