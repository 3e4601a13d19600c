//! Structured verdicts shared by the detection tests.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Polynomial,
    NotPolynomial,
    Ellipsoid,
    NotEllipsoid,
    Finite,
    NotFinite,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Polynomial => "polynomial",
            Verdict::NotPolynomial => "not-polynomial",
            Verdict::Ellipsoid => "ellipsoid",
            Verdict::NotEllipsoid => "not-ellipsoid",
            Verdict::Finite => "finite",
            Verdict::NotFinite => "not-finite",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// One fitted item inside a detection report (a direction, a translate,
/// a harmonic coefficient, ...).
#[derive(Debug, Clone, Serialize)]
pub struct FitItem {
    pub label: String,
    pub degree: Option<usize>,
    pub relative_residual: f64,
    pub verdict: Verdict,
}

/// Aggregate verdict of a characterization test with per-item diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct DetectionReport {
    pub test: String,
    pub verdict: Verdict,
    pub conclusion: String,
    pub items: Vec<FitItem>,
}

impl DetectionReport {
    /// Aggregate per-item polynomiality verdicts: all pass => polynomial,
    /// any hard failure => not-polynomial, otherwise inconclusive.
    pub fn aggregate(test: &str, items: Vec<FitItem>, pass: Verdict, fail: Verdict) -> Self {
        let verdict = if items.iter().all(|i| i.verdict == pass) {
            pass
        } else if items.iter().any(|i| i.verdict == fail) {
            fail
        } else {
            Verdict::Inconclusive
        };
        let worst = items
            .iter()
            .map(|i| i.relative_residual)
            .fold(0.0f64, f64::max);
        let conclusion = format!(
            "{verdict} ({} items, worst relative residual {worst:.3e})",
            items.len()
        );
        Self {
            test: test.to_string(),
            verdict,
            conclusion,
            items,
        }
    }
}
