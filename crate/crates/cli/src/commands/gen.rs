use std::path::PathBuf;

use rae_core::domains;

use super::{build_domain, create_dir};
use crate::cli::{out_dir, GenArgs};
use crate::error::{CliError, CliResult};
use crate::rows::write_text;

/// Writes one JSON file per problem and returns their paths.
pub fn execute(args: &GenArgs) -> CliResult<Vec<PathBuf>> {
    if args.count == 0 {
        return Err(CliError::usage("--count must be at least 1"));
    }
    let dom = build_domain(&args.domain)?;
    let dir = out_dir(&args.out);
    create_dir(&dir)?;
    let mut paths = Vec::with_capacity(args.count);
    for p in domains::gen_problems(&dom, args.count, args.seed) {
        let path = dir.join(format!("{}.json", p.id));
        write_text(&path, &(p.to_string_pretty(&dom) + "\n"))?;
        paths.push(path);
    }
    Ok(paths)
}
