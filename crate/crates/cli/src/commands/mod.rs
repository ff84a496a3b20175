pub mod design;
pub mod fit_load;
pub mod fit_motor;
pub mod metrics;
pub mod model;
pub mod pattern;
pub mod simulate;

use crate::CliError;
use std::path::Path;

pub(crate) fn ensure_out_dir(out_dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::data(format!("cannot create {}: {e}", out_dir.display())))
}
