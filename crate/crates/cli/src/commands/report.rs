use crate::cli::ReportArgs;
use crate::error::CliResult;
use crate::rows::read_rows;
use crate::summary::{render, summarize};

pub fn execute(args: &ReportArgs) -> CliResult<String> {
    let mut rows = Vec::new();
    for path in &args.csv {
        rows.extend(read_rows(path)?);
    }
    Ok(render(&summarize(&rows)))
}
