//! Parsers for the list and grid syntaxes shared by flags and config files.

use crate::error::{CliError, Result};

/// Largest grid the parsers will expand.
pub const MAX_GRID_POINTS: usize = 100_000;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

fn number(token: &str, what: &str) -> Result<f64> {
    let t = token.trim();
    let v: f64 = t
        .parse()
        .map_err(|_| CliError::Usage(format!("{what}: '{t}' is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("{what}: '{t}' is not finite")));
    }
    Ok(v)
}

/// Comma-separated channel gains, e.g. `0.3,1.2,4`. Every gain must be
/// strictly positive.
pub fn parse_gains(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Err(CliError::Usage("gains: empty list".into()));
    }
    let gains = s.split(',').map(|t| number(t, "gains")).collect::<Result<Vec<_>>>()?;
    if gains.len() > MAX_GRID_POINTS {
        return Err(CliError::Usage(format!("gains: more than {MAX_GRID_POINTS} entries")));
    }
    if let Some(g) = gains.iter().find(|&&g| g <= 0.0) {
        return Err(CliError::Domain(format!("gains: {g} is not > 0")));
    }
    Ok(gains)
}

/// SNR grid in dB: either `start:stop:step` (inclusive of `stop` when it
/// lies on the grid), a comma list, or one value. The result must be
/// strictly increasing.
pub fn parse_db_grid(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    let grid = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, step] = parts[..] else {
            return Err(CliError::Usage(format!("xi grid '{s}': expected start:stop:step")));
        };
        let (a, b, step) = (number(a, "xi grid")?, number(b, "xi grid")?, number(step, "xi grid")?);
        if step <= 0.0 {
            return Err(CliError::Usage(format!("xi grid '{s}': step must be > 0")));
        }
        if b < a {
            return Err(CliError::Usage(format!("xi grid '{s}': stop is below start")));
        }
        let span = (b - a) / step;
        if !(span < MAX_GRID_POINTS as f64) {
            return Err(CliError::Usage(format!("xi grid '{s}': more than {MAX_GRID_POINTS} points")));
        }
        let n = (span + 1e-9).floor() as usize + 1;
        (0..n).map(|i| a + i as f64 * step).collect()
    } else {
        if s.is_empty() {
            return Err(CliError::Usage("xi grid: empty".into()));
        }
        let v = s.split(',').map(|t| number(t, "xi grid")).collect::<Result<Vec<_>>>()?;
        if v.len() > MAX_GRID_POINTS {
            return Err(CliError::Usage(format!("xi grid: more than {MAX_GRID_POINTS} points")));
        }
        v
    };
    check_increasing(&grid, "xi grid")?;
    // the linear SNR has to be a positive finite number too
    if let Some(d) = grid.iter().find(|&&d| !(db_to_linear(d) > 0.0 && db_to_linear(d).is_finite())) {
        return Err(CliError::Domain(format!("xi grid: {d} dB has no finite positive linear SNR")));
    }
    Ok(grid)
}

/// Population sizes: `lo:hi`, `lo:hi:step`, a comma list or one value.
pub fn parse_k_grid(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let int = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("k grid: '{}' is not a nonnegative integer", t.trim())))
    };
    let grid: Vec<usize> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let (lo, hi, step) = match parts[..] {
            [lo, hi] => (int(lo)?, int(hi)?, 1),
            [lo, hi, step] => (int(lo)?, int(hi)?, int(step)?),
            _ => return Err(CliError::Usage(format!("k grid '{s}': expected lo:hi[:step]"))),
        };
        if step == 0 || hi < lo {
            return Err(CliError::Usage(format!("k grid '{s}': empty range")));
        }
        if (hi - lo) / step >= MAX_GRID_POINTS {
            return Err(CliError::Usage(format!("k grid '{s}': more than {MAX_GRID_POINTS} points")));
        }
        (lo..=hi).step_by(step).collect()
    } else {
        if s.is_empty() {
            return Err(CliError::Usage("k grid: empty".into()));
        }
        let v = s.split(',').map(int).collect::<Result<Vec<_>>>()?;
        if v.len() > MAX_GRID_POINTS {
            return Err(CliError::Usage(format!("k grid: more than {MAX_GRID_POINTS} points")));
        }
        v
    };
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage("k grid: values must be strictly increasing".into()));
    }
    Ok(grid)
}

fn check_increasing(v: &[f64], what: &str) -> Result<()> {
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage(format!("{what}: values must be strictly increasing")));
    }
    Ok(())
}
