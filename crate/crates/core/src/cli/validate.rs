// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::Args;

use super::read_input;
use crate::error::Result;
use crate::io::{validate_document, DocumentKind};

#[derive(Clone, Debug, Args)]
pub struct ValidateArgs {
    /// Core-graph, grid, area-matrix, mapping or reference document.
    pub document: PathBuf,
}

pub fn run_validate(args: &ValidateArgs) -> Result<DocumentKind> {
    let kind = validate_document(&read_input(&args.document)?)?;
    println!("{}: valid {kind}", args.document.display());
    Ok(kind)
}
