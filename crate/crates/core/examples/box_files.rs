//! Writing a box to a TOML box file and reading it back.

use contextuality::cli::{emit_box, emit_box_string, parse_box, BoxSource};

fn main() -> contextuality::Result<()> {
    let b: contextuality::ContextBox = "builtin:CH:5:alpha=0.9".parse::<BoxSource>()?.load()?;
    print!("{}", emit_box_string(&b)?);
    let path = std::env::temp_dir().join("ctxq-chain5.toml");
    emit_box(&b, &path)?;
    let back = parse_box(&path)?;
    println!("# round trip exact: {}", back == b);
    std::fs::remove_file(&path).map_err(|e| contextuality::Error::Io(e.to_string()))?;
    Ok(())
}
