use std::path::Path;
use std::str::FromStr;

use super::spec_file::parse_box;
use crate::boxes::{builtin, ContextBox, XorFamily};
use crate::error::{Error, Result};

/// Where a box comes from: a named box or a box file.
///
/// Named boxes are written `builtin:NAME[:param]...` with parameters `n`
/// (bare integer or `n=`), `alpha=x` and `opposite`, e.g.
/// `builtin:CH:7:alpha=0.95`, `builtin:PR:opposite`, `builtin:KCBS`.
#[derive(Debug, Clone, PartialEq)]
pub enum BoxSource {
    Builtin { name: String, n: Option<usize>, alpha: Option<f64>, opposite: bool },
    File(String),
}

impl FromStr for BoxSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let Some(rest) = s.strip_prefix("builtin:") else {
            return Ok(BoxSource::File(s.to_string()));
        };
        let mut parts = rest.split(':');
        let name = parts.next().filter(|n| !n.is_empty()).ok_or_else(|| Error::UnknownBuiltin(s.to_string()))?;
        let (mut n, mut alpha, mut opposite) = (None, None, false);
        let bad = |p: &str| Error::InvalidParameter(format!("cannot read parameter `{p}` in `{s}`"));
        for p in parts {
            if p == "opposite" {
                opposite = true;
            } else if let Some(v) = p.strip_prefix("alpha=") {
                alpha = Some(v.parse::<f64>().map_err(|_| bad(p))?);
            } else if let Some(v) = p.strip_prefix("n=") {
                n = Some(v.parse::<usize>().map_err(|_| bad(p))?);
            } else if let Ok(v) = p.parse::<usize>() {
                n = Some(v);
            } else {
                return Err(bad(p));
            }
        }
        Ok(BoxSource::Builtin { name: name.to_string(), n, alpha, opposite })
    }
}

impl BoxSource {
    pub fn load(&self) -> Result<ContextBox> {
        match self {
            BoxSource::Builtin { name, n, alpha, opposite } => builtin(name, *n, *alpha, *opposite),
            BoxSource::File(path) => parse_box(Path::new(path)),
        }
    }

    /// The xor family of a named box, if any.
    pub fn family(&self) -> Option<XorFamily> {
        match self {
            BoxSource::Builtin { name, n, .. } => match (name.to_ascii_uppercase().as_str(), n) {
                ("CH", Some(n)) => Some(XorFamily::Chain(*n)),
                ("KCBS", _) => None,
                (other, None) => other.parse().ok(),
                _ => None,
            },
            BoxSource::File(_) => None,
        }
    }
}
