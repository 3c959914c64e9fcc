use crate::rootcount::{Segment, TestFunction};
use crate::{Error, Result};

/// Parses the test-function grammar:
///
/// - `box` — indicator of `[-1, 1]`
/// - `box:a,b` — indicator of `[a, b] ⊂ [-1, 1]`
/// - `abs` — `|x|` on `[-1, 1]`
/// - `pieces:FILE` — JSON list of `{"from", "to", "piece"}` segments, with
///   `piece` one of `{"constant": c}`, `{"polynomial": [c0, c1, …]}` or
///   `{"power": {"coef": c, "alpha": a}}`
pub fn parse_test_function(spec: &str) -> Result<TestFunction> {
    let spec = spec.trim();
    match spec {
        "box" => return Ok(TestFunction::unit_box()),
        "abs" => return Ok(TestFunction::abs()),
        _ => {}
    }
    if let Some(rest) = spec.strip_prefix("box:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 2 {
            return Err(Error::domain(format!("expected box:a,b, got '{spec}'")));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("'{s}' is not a number")))
        };
        return TestFunction::indicator(parse(parts[0])?, parse(parts[1])?);
    }
    if let Some(path) = spec.strip_prefix("pieces:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::domain(format!("cannot read '{path}': {e}")))?;
        let segments: Vec<Segment> = serde_json::from_str(&text)
            .map_err(|e| Error::domain(format!("bad pieces file '{path}': {e}")))?;
        return TestFunction::from_segments(segments);
    }
    Err(Error::domain(format!("unknown test function '{spec}'")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar() {
        assert_eq!(parse_test_function("box").unwrap(), TestFunction::unit_box());
        assert_eq!(parse_test_function("abs").unwrap(), TestFunction::abs());
        let b = parse_test_function("box:-0.5,0.25").unwrap();
        assert_eq!(b.support(), (-0.5, 0.25));
        assert!(parse_test_function("box:1").is_err());
        assert!(parse_test_function("boxy").is_err());
        assert!(parse_test_function("pieces:/nonexistent.json").is_err());
    }
}
