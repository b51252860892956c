//! Report rendering: human text with timing, machine JSON without it.

use qsu11_core::json::report_to_json;
use qsu11_core::suite::SuiteReport;

/// Human-readable report; the elapsed time is display-only and excluded
/// from the machine format so JSON output stays byte-identical across runs.
pub fn render_human(report: &SuiteReport, millis: u128) -> String {
    let mut out = String::new();
    out.push_str(&format!("suite: {}\n", report.suite));
    let cfg = report
        .config
        .iter()
        .map(|(k, v)| format!("{}={}", k, v))
        .collect::<Vec<_>>()
        .join(" ");
    out.push_str(&format!("config: {}\n", cfg));
    for c in &report.checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!("  check {}: {}\n", c.id, status));
        if let Some(w) = &c.witness {
            out.push_str(&format!("    witness: {}\n", w));
        }
    }
    out.push_str(&format!(
        "result: {} passed, {} failed ({} ms)\n",
        report.passed(),
        report.failed(),
        millis
    ));
    out
}

/// Machine-readable report, deterministic for a fixed seed and config.
pub fn render_json(report: &SuiteReport) -> String {
    let mut s = serde_json::to_string_pretty(&report_to_json(report))
        .expect("reports serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use qsu11_core::suite::CheckResult;

    fn sample() -> SuiteReport {
        SuiteReport {
            suite: "demo".into(),
            config: vec![("seed".into(), "7".into())],
            checks: vec![
                CheckResult::plain("first", true),
                CheckResult::new("second", false, Some("t11 x".into())),
            ],
        }
    }

    #[test]
    fn human_report_shows_failures_with_witnesses() {
        let text = render_human(&sample(), 12);
        assert!(text.contains("check first: PASS"));
        assert!(text.contains("check second: FAIL"));
        assert!(text.contains("witness: t11 x"));
        assert!(text.contains("1 passed, 1 failed"));
    }

    #[test]
    fn json_report_is_deterministic_and_timing_free() {
        let a = render_json(&sample());
        let b = render_json(&sample());
        assert_eq!(a, b);
        assert!(!a.contains("ms"));
        assert!(a.contains("\"suite\": \"demo\""));
    }
}
