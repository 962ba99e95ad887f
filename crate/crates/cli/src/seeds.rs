use prefattach::tree_core::PlaneTree;

use crate::{CliError, CliResult};

fn sized(rest: &str, name: &str) -> CliResult<Option<usize>> {
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return Ok(None);
    }
    match rest.parse::<usize>() {
        Ok(k) if k >= 2 => Ok(Some(k)),
        _ => Err(CliError::Usage(format!("{name} needs at least 2 vertices"))),
    }
}

/// Resolves a seed tree argument: `planted`, `path<k>`, `star<k>`, an inline
/// parenthesis string (`planted:` prefix for planted trees) or `@file`.
pub fn plane(arg: &str) -> CliResult<PlaneTree> {
    let arg = arg.trim();
    if arg == "planted" {
        return Ok(PlaneTree::planted_vertex());
    }
    if let Some(rest) = arg.strip_prefix("path") {
        if let Some(k) = sized(rest, "path")? {
            return Ok(PlaneTree::path(k));
        }
    }
    if let Some(rest) = arg.strip_prefix("star") {
        if let Some(k) = sized(rest, "star")? {
            return Ok(PlaneTree::star(k));
        }
    }
    if let Some(file) = arg.strip_prefix('@') {
        let text = std::fs::read_to_string(file).map_err(|source| CliError::Io { path: file.to_string(), source })?;
        if text.trim().starts_with('@') {
            return Err(CliError::Usage("seed files cannot refer to other files".into()));
        }
        return plane(&text);
    }
    let tree = match arg.strip_prefix("planted:") {
        Some(rest) => PlaneTree::parse(rest.trim(), true)?,
        None => PlaneTree::parse(arg, false)?,
    };
    Ok(tree)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names() {
        assert_eq!(plane("path4").unwrap().num_vertices(), 4);
        assert_eq!(plane("star5").unwrap().degree(0), 4);
        assert!(plane("planted").unwrap().is_planted());
        assert!(plane("planted:(())").unwrap().is_planted());
        assert_eq!(plane("((()))").unwrap().num_vertices(), 3);
        assert!(plane("path1").is_err());
        assert!(plane("pathx").is_err());
    }
}
