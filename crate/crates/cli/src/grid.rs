//! Parameter grids given as comma lists or `start:stop:step` ranges.

use std::str::FromStr;

/// Inclusive range `start:stop:step`. Points are `start + k·step`, rounded to
/// 12 decimals so that printed values stay short.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| ((self.start + k as f64 * self.step) * 1e12).round() / 1e12)
            .collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(format!("expected start:stop:step, got {s:?}"));
        };
        let parse = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
        let range = Range {
            start: parse(start)?,
            stop: parse(stop)?,
            step: parse(step)?,
        };
        if !(range.start.is_finite() && range.stop.is_finite() && range.step.is_finite()) {
            return Err(format!("non-finite range {s:?}"));
        }
        if range.step <= 0.0 || range.stop < range.start {
            return Err(format!("range {s:?} needs step > 0 and stop >= start"));
        }
        Ok(range)
    }
}

/// Resolves an explicit list, a range, or the default.
pub fn resolve(list: &[f64], range: Option<Range>, default: impl FnOnce() -> Vec<f64>) -> Vec<f64> {
    match range {
        Some(r) => r.points(),
        None if !list.is_empty() => list.to_vec(),
        None => default(),
    }
}
