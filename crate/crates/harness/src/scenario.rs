//! Scenario configuration: what to generate and which checks to run.
//!
//! Scenario files are flat `key = value` text, one pair per line, with `#`
//! comments. Unknown keys are hard errors so a typo cannot silently weaken a
//! verification run.

use mvtto_core::inner::PairStrategy;
use mvtto_core::C64;

/// Window sizing: explicit radius or derived from the selected checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowChoice {
    Auto,
    Fixed(usize),
}

/// Which catalogue entries to run: everything, or ids/prefixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckSelection {
    All,
    /// Exact ids or dotted prefixes (`decomp` selects `decomp.*`).
    Named(Vec<String>),
}

impl CheckSelection {
    pub fn matches(&self, id: &str) -> bool {
        match self {
            CheckSelection::All => true,
            CheckSelection::Named(names) => names.iter().any(|n| {
                id == n || id.strip_prefix(n.as_str()).is_some_and(|r| r.starts_with('.'))
            }),
        }
    }
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("invalid value for `{key}`: {reason}")]
    BadValue { key: String, reason: String },
    #[error("line {0} is not `key = value`")]
    BadLine(usize),
    #[error("{0}")]
    Invalid(String),
}

/// One verification scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub seed: u64,
    pub dim: usize,
    pub strategy: PairStrategy,
    pub degrees: (usize, usize),
    pub window: WindowChoice,
    pub lambda_samples: Vec<C64>,
    pub tol: f64,
    pub checks: CheckSelection,
    /// Radius of the factor zeros: 0 selects the exact polynomial tier.
    pub zero_radius: f64,
    /// Scale applied to the random symbols.
    pub symbol_scale: f64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            seed: 1,
            dim: 2,
            strategy: PairStrategy::PowersOfCommonFactor,
            degrees: (2, 2),
            window: WindowChoice::Auto,
            lambda_samples: vec![
                C64::new(0.3, 0.2),
                C64::new(-0.45, 0.0),
                C64::new(0.1, -0.5),
            ],
            tol: 1e-9,
            checks: CheckSelection::All,
            zero_radius: 0.0,
            symbol_scale: 1.0,
        }
    }
}

impl Scenario {
    /// Parses the flat key-value format; unknown keys are errors.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut s = Scenario::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::BadLine(lineno + 1));
            };
            s.set(key.trim(), value.trim())?;
        }
        s.validate()?;
        Ok(s)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let bad = |reason: &str| ConfigError::BadValue {
            key: key.to_string(),
            reason: reason.to_string(),
        };
        match key {
            "seed" => self.seed = value.parse().map_err(|_| bad("expected u64"))?,
            "dim" => self.dim = value.parse().map_err(|_| bad("expected 1..=8"))?,
            "strategy" => {
                self.strategy = value.parse().map_err(|_| bad("unknown strategy"))?;
            }
            "degrees" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(bad("expected `p,q`"));
                }
                self.degrees = (
                    parts[0].parse().map_err(|_| bad("expected usize"))?,
                    parts[1].parse().map_err(|_| bad("expected usize"))?,
                );
            }
            "window" => {
                self.window = if value == "auto" {
                    WindowChoice::Auto
                } else {
                    WindowChoice::Fixed(value.parse().map_err(|_| bad("expected `auto` or N"))?)
                };
            }
            "lambda" => {
                let mut pts = Vec::new();
                for part in value.split(',') {
                    pts.push(parse_complex(part.trim()).ok_or_else(|| bad("bad complex number"))?);
                }
                self.lambda_samples = pts;
            }
            "tol" => self.tol = value.parse().map_err(|_| bad("expected float"))?,
            "checks" => {
                self.checks = if value == "all" {
                    CheckSelection::All
                } else {
                    CheckSelection::Named(
                        value.split(',').map(|s| s.trim().to_string()).collect(),
                    )
                };
            }
            "zero_radius" => {
                self.zero_radius = value.parse().map_err(|_| bad("expected float"))?
            }
            "symbol_scale" => {
                self.symbol_scale = value.parse().map_err(|_| bad("expected float"))?
            }
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.dim == 0 || self.dim > 8 {
            return Err(ConfigError::Invalid(format!(
                "dim must be 1..=8, got {}",
                self.dim
            )));
        }
        if self.tol < 0.0 || !self.tol.is_finite() {
            return Err(ConfigError::Invalid("tol must be a finite float >= 0".into()));
        }
        if self.lambda_samples.is_empty() {
            return Err(ConfigError::Invalid(
                "lambda needs at least one sample point".into(),
            ));
        }
        for l in &self.lambda_samples {
            if l.norm() > 0.7 {
                return Err(ConfigError::Invalid(format!(
                    "lambda sample {l} has modulus {:.3} > 0.7",
                    l.norm()
                )));
            }
        }
        if !(0.0..=0.7).contains(&self.zero_radius) {
            return Err(ConfigError::Invalid(
                "zero_radius must lie in [0, 0.7]".into(),
            ));
        }
        if self.symbol_scale <= 0.0 || !self.symbol_scale.is_finite() {
            return Err(ConfigError::Invalid("symbol_scale must be > 0".into()));
        }
        Ok(())
    }

    /// Truncation length per rational factor, from the 1e-12 tail target.
    pub fn rational_trunc(&self) -> usize {
        if self.zero_radius == 0.0 {
            0
        } else {
            ((-12.0 * std::f64::consts::LN_10) / self.zero_radius.ln()).ceil() as usize + 2
        }
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`).
pub fn parse_complex(s: &str) -> Option<C64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some(im_part) = s.strip_suffix('i') {
        // find the split between real and imaginary parts, skipping a leading sign
        let body = im_part;
        let mut split = None;
        for (idx, ch) in body.char_indices().skip(1) {
            if (ch == '+' || ch == '-') && !body[..idx].ends_with(['e', 'E']) {
                split = Some(idx);
            }
        }
        return match split {
            Some(idx) => {
                let re: f64 = body[..idx].parse().ok()?;
                let im_str = &body[idx..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str.parse().ok()?
                };
                Some(C64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    body.parse().ok()?
                };
                Some(C64::new(0.0, im))
            }
        };
    }
    s.parse().ok().map(|re| C64::new(re, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_scenario() {
        let text = "\
# demo scenario
seed = 7
dim = 3
strategy = simultaneously-diagonal
degrees = 2, 1
window = 20
lambda = 0.3+0.2i, -0.45, 0.1i
tol = 1e-8
checks = decomp, conj.ctheta_axioms
";
        let s = Scenario::parse(text).unwrap();
        assert_eq!(s.seed, 7);
        assert_eq!(s.dim, 3);
        assert_eq!(s.strategy, PairStrategy::SimultaneouslyDiagonal);
        assert_eq!(s.degrees, (2, 1));
        assert_eq!(s.window, WindowChoice::Fixed(20));
        assert_eq!(s.lambda_samples[2], C64::new(0.0, 0.1));
        assert!(s.checks.matches("decomp.direct_sum"));
        assert!(s.checks.matches("conj.ctheta_axioms"));
        assert!(!s.checks.matches("conj.clp_axioms"));
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = Scenario::parse("sede = 3\n").unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey(k) if k == "sede"));
    }

    #[test]
    fn rejects_large_lambda() {
        let err = Scenario::parse("lambda = 0.9\n").unwrap_err();
        assert!(matches!(err, ConfigError::Invalid(_)));
    }

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1.5"), Some(C64::new(1.5, 0.0)));
        assert_eq!(parse_complex("-0.25i"), Some(C64::new(0.0, -0.25)));
        assert_eq!(parse_complex("0.5-0.5i"), Some(C64::new(0.5, -0.5)));
        assert_eq!(parse_complex("i"), Some(C64::new(0.0, 1.0)));
        assert_eq!(parse_complex("1e-2+2e-3i"), Some(C64::new(0.01, 0.002)));
        assert_eq!(parse_complex("junk"), None);
    }
}
