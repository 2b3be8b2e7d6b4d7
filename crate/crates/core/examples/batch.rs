//! Several measures on several boxes in parallel, rows in input order.

use contextuality::cli::commands::{parse_batch, run_batch, write_rows};
use contextuality::cli::MeasureOptions;

fn main() -> contextuality::Result<()> {
    let jobs = parse_batch(
        "builtin:PR xu\nbuiltin:PR cost\nbuiltin:PM xu\nbuiltin:M:alpha=0.9 xmax\nbuiltin:CH:8:alpha=0.97 cost\nbuiltin:KCBS consistency\n",
    )?;
    let opts = MeasureOptions { deterministic: true, ..MeasureOptions::default() };
    let rows = run_batch(&jobs, &opts, 4)?.into_iter().collect::<contextuality::Result<Vec<_>>>()?;
    write_rows(std::io::stdout().lock(), &rows, &opts)
}
