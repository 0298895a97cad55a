//! Time-node heatmaps as ASCII portable graymaps (`P2`, maxval 255).
//!
//! Orientation is fixed: one row per time step, time ascending top to bottom,
//! one column per node index.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::walk::WalkResult;

/// Probabilities below this are clamped before taking the logarithm.
pub const LOG_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Linear => "linear",
            Scale::Log => "log",
        })
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Scale::Linear),
            "log" => Ok(Scale::Log),
            other => Err(Error::Precondition(format!(
                "unknown scale {other:?}, expected linear or log"
            ))),
        }
    }
}

/// Probability table `steps x nodes` recovered from a walk CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityTable {
    pub times: Vec<f64>,
    pub probabilities: DMatrix<f64>,
}

impl From<&WalkResult> for ProbabilityTable {
    fn from(r: &WalkResult) -> Self {
        Self {
            times: r.times.clone(),
            probabilities: r.probabilities.clone(),
        }
    }
}

impl ProbabilityTable {
    /// Parses the walk CSV export. `#` lines are skipped; rows must come in
    /// time order with nodes `0..N` listed for every time.
    pub fn parse_csv(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse { line, message };
        let mut rows = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = rows.next().ok_or_else(|| err(1, "empty CSV".into()))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 3 || cols[..3] != ["t", "node", "probability"] {
            return Err(err(
                hline,
                format!("expected header t,node,probability, got {header:?}"),
            ));
        }

        let mut times: Vec<f64> = Vec::new();
        let mut values: Vec<Vec<f64>> = Vec::new();
        for (line, row) in rows {
            let f: Vec<&str> = row.split(',').collect();
            if f.len() != cols.len() {
                return Err(err(
                    line,
                    format!("expected {} fields, got {}", cols.len(), f.len()),
                ));
            }
            let t: f64 = f[0]
                .parse()
                .map_err(|e| err(line, format!("bad time {:?}: {e}", f[0])))?;
            let node: usize = f[1]
                .parse()
                .map_err(|e| err(line, format!("bad node {:?}: {e}", f[1])))?;
            let p: f64 = f[2]
                .parse()
                .map_err(|e| err(line, format!("bad probability {:?}: {e}", f[2])))?;
            if !p.is_finite() || p < 0.0 {
                return Err(err(line, format!("probability {p} out of range")));
            }
            if times.last() != Some(&t) {
                if times.last().is_some_and(|&prev| t < prev) {
                    return Err(err(line, format!("time {t} goes backwards")));
                }
                if let (Some(first), Some(last)) = (values.first(), values.last()) {
                    if last.len() != first.len() {
                        return Err(err(
                            line,
                            format!(
                                "previous time step has {} nodes, expected {}",
                                last.len(),
                                first.len()
                            ),
                        ));
                    }
                }
                times.push(t);
                values.push(Vec::new());
            }
            let current = values.last_mut().expect("pushed above");
            if node != current.len() {
                return Err(err(
                    line,
                    format!("expected node {}, got {node}", current.len()),
                ));
            }
            current.push(p);
        }
        let n = values.first().map_or(0, Vec::len);
        if n == 0 {
            return Err(err(hline, "CSV has no data rows".into()));
        }
        if values.last().map(Vec::len) != Some(n) {
            return Err(err(
                text.lines().count(),
                "last time step is incomplete".into(),
            ));
        }
        Ok(Self {
            probabilities: DMatrix::from_fn(times.len(), n, |s, i| values[s][i]),
            times,
        })
    }

    /// Grey levels in `[0, 255]`.
    pub fn pixels(&self, scale: Scale) -> DMatrix<u8> {
        let to_byte = |v: f64| (255.0 * v.clamp(0.0, 1.0)).round() as u8;
        match scale {
            Scale::Linear => {
                let max = self.probabilities.max();
                if max <= 0.0 {
                    return DMatrix::zeros(self.probabilities.nrows(), self.probabilities.ncols());
                }
                self.probabilities.map(|p| to_byte(p / max))
            }
            Scale::Log => self
                .probabilities
                .map(|p| to_byte(p.max(LOG_FLOOR).log10() / 12.0 + 1.0)),
        }
    }

    pub fn to_pgm(&self, scale: Scale, comment: Option<&str>) -> String {
        render_pgm(&self.pixels(scale), comment)
    }
}

/// ASCII graymap text for a pixel matrix.
pub fn render_pgm(pixels: &DMatrix<u8>, comment: Option<&str>) -> String {
    let mut out = String::from("P2\n");
    if let Some(c) = comment {
        for line in c.lines() {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
    }
    out.push_str(&format!("{} {}\n255\n", pixels.ncols(), pixels.nrows()));
    for r in 0..pixels.nrows() {
        let row: Vec<String> = (0..pixels.ncols())
            .map(|c| pixels[(r, c)].to_string())
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Reads back the pixel matrix of an ASCII graymap written by [`render_pgm`].
pub fn parse_pgm(text: &str) -> Result<DMatrix<u8>> {
    let err = |message: String| Error::Parse { line: 1, message };
    let mut tokens = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace);
    if tokens.next() != Some("P2") {
        return Err(err("missing P2 magic".into()));
    }
    let mut num = || -> Result<usize> {
        let t = tokens
            .next()
            .ok_or_else(|| err("truncated graymap".into()))?;
        t.parse().map_err(|e| err(format!("bad token {t:?}: {e}")))
    };
    let (w, h, maxval) = (num()?, num()?, num()?);
    if maxval != 255 {
        return Err(err(format!("unsupported maxval {maxval}")));
    }
    let mut data = Vec::with_capacity(w * h);
    for _ in 0..w * h {
        let v = num()?;
        data.push(u8::try_from(v).map_err(|_| err(format!("pixel {v} above 255")))?);
    }
    Ok(DMatrix::from_row_slice(h, w, &data))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CSV: &str = "# comment\nt,node,probability\n0,0,1\n0,1,0\n1,0,0.25\n1,1,0.75\n";

    #[test]
    fn parses_and_renders_linear() {
        let t = ProbabilityTable::parse_csv(CSV).unwrap();
        assert_eq!(t.times, vec![0.0, 1.0]);
        let pgm = t.to_pgm(Scale::Linear, Some("cfg"));
        assert_eq!(pgm, "P2\n# cfg\n2 2\n255\n255 0\n64 191\n");
        assert_eq!(parse_pgm(&pgm).unwrap(), t.pixels(Scale::Linear));
    }

    #[test]
    fn log_scale_levels() {
        let t = ProbabilityTable {
            times: vec![0.0],
            probabilities: DMatrix::from_row_slice(1, 4, &[1.0, 1e-6, 1e-12, 0.0]),
        };
        assert_eq!(t.pixels(Scale::Log).as_slice(), &[255, 128, 0, 0]);
    }

    #[test]
    fn all_zero_linear_is_black() {
        let t = ProbabilityTable {
            times: vec![0.0, 1.0],
            probabilities: DMatrix::zeros(2, 3),
        };
        assert!(t.pixels(Scale::Linear).iter().all(|&p| p == 0));
    }

    #[test]
    fn malformed_rows_report_line() {
        let bad = "t,node,probability\n0,0,1\n0,x,0\n";
        match ProbabilityTable::parse_csv(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let short = "t,node,probability\n0,0,1\n0,1,0\n1,0,1\n";
        assert!(ProbabilityTable::parse_csv(short).is_err());
        let gap = "t,node,probability\n0,0,1\n0,2,0\n";
        match ProbabilityTable::parse_csv(gap) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(ProbabilityTable::parse_csv("a,b\n").is_err());
        assert!("cubic".parse::<Scale>().is_err());
    }
}
