//! Parsing of "lo:hi:n" log-grid specifications.

use crate::error::AppError;

/// Parses "lo:hi:n" into n log-spaced points on [lo, hi].
pub fn parse_log_grid(spec: &str) -> Result<Vec<f64>, AppError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(AppError::Malformed(format!(
            "grid spec \"{spec}\" must have the form lo:hi:n"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| AppError::Malformed(format!("grid lower bound \"{}\"", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| AppError::Malformed(format!("grid upper bound \"{}\"", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|_| AppError::Malformed(format!("grid point count \"{}\"", parts[2])))?;
    if !(lo > 0.0) || !(hi >= lo) || n == 0 {
        return Err(AppError::Malformed(format!(
            "grid spec \"{spec}\" needs 0 < lo ≤ hi and n ≥ 1"
        )));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).ln();
    Ok((0..n)
        .map(|i| lo * (ratio * i as f64 / (n - 1) as f64).exp())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_validates() {
        let g = parse_log_grid("1:100:3").unwrap();
        assert_eq!(g.len(), 3);
        assert!((g[0] - 1.0).abs() < 1e-12);
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert!((g[2] - 100.0).abs() < 1e-12);
        assert_eq!(parse_log_grid("2:2:1").unwrap(), vec![2.0]);
        assert!(parse_log_grid("0:1:5").is_err());
        assert!(parse_log_grid("1:0.5:5").is_err());
        assert!(parse_log_grid("1:10:0").is_err());
        assert!(parse_log_grid("1:10").is_err());
    }
}
