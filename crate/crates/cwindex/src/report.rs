//! Report envelopes for the verification pipelines: named checks with
//! provenance-tagged expected values, deterministic JSON serialization
//! (byte-identical across runs at fixed config) and a markdown summary.

use serde::Serialize;

/// Where an expected value comes from: `Reference` values are taken
/// from the bundled constants manifest, `Trivial` values follow from
/// definitions, `Derived` values are recomputed independently by this
/// crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Reference,
    Trivial,
    Derived,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub abs_error: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub provenance: Provenance,
    pub pass: bool,
}

impl Check {
    /// Exact comparison of two canonical strings (rationals, forms,
    /// classes); tolerance 0.
    pub fn exact(name: &str, provenance: Provenance, expected: &str, computed: &str) -> Check {
        let pass = expected == computed;
        let err = if pass { 0.0 } else { 1.0 };
        Check {
            name: name.to_string(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            abs_error: err,
            rel_error: err,
            tolerance: 0.0,
            provenance,
            pass,
        }
    }

    /// Numeric comparison with relative tolerance (absolute when the
    /// expected value is zero).
    pub fn numeric(
        name: &str,
        provenance: Provenance,
        expected: f64,
        computed: f64,
        tolerance: f64,
    ) -> Check {
        let abs = (expected - computed).abs();
        let rel = if expected != 0.0 {
            abs / expected.abs()
        } else {
            abs
        };
        Check {
            name: name.to_string(),
            expected: format!("{expected}"),
            computed: format!("{computed}"),
            abs_error: abs,
            rel_error: rel,
            tolerance,
            provenance,
            pass: rel <= tolerance,
        }
    }

    /// A named predicate; expected is always "true".
    pub fn predicate(name: &str, provenance: Provenance, pass: bool) -> Check {
        Check {
            name: name.to_string(),
            expected: "true".to_string(),
            computed: pass.to_string(),
            abs_error: if pass { 0.0 } else { 1.0 },
            rel_error: if pass { 0.0 } else { 1.0 },
            tolerance: 0.0,
            provenance,
            pass,
        }
    }

    /// A measured worst-case deviation over a batch of sample points;
    /// passes when the deviation is at most the tolerance.
    pub fn deviation(name: &str, provenance: Provenance, worst: f64, tolerance: f64) -> Check {
        Check {
            name: name.to_string(),
            expected: "0".to_string(),
            computed: format!("{worst}"),
            abs_error: worst,
            rel_error: worst,
            tolerance,
            provenance,
            pass: worst <= tolerance,
        }
    }
}

/// Echo of the effective configuration, embedded in every report.
#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub trunc: usize,
    pub tol: f64,
    pub max_subdiv: u64,
    pub compactify: String,
    pub threads: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportEnvelope {
    pub tool_version: String,
    pub pipeline: String,
    pub config: ConfigEcho,
    /// Pipeline-specific payload; for index pipelines this follows the
    /// layout {pipeline, support, coefficients, numeric_checks}.
    pub results: serde_json::Value,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl ReportEnvelope {
    pub fn new(
        pipeline: &str,
        config: ConfigEcho,
        results: serde_json::Value,
        checks: Vec<Check>,
        notes: Vec<String>,
    ) -> ReportEnvelope {
        let pass = checks.iter().all(|c| c.pass);
        ReportEnvelope {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            pipeline: pipeline.to_string(),
            config,
            results,
            checks,
            notes,
            pass,
        }
    }

    /// Deterministic JSON: struct fields serialize in declaration
    /// order, maps in sorted key order, no timestamps or paths.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# cwindex report: {}\n\n", self.pipeline));
        out.push_str(&format!(
            "tool version {} — overall **{}**\n\n",
            self.tool_version,
            if self.pass { "PASS" } else { "FAIL" }
        ));
        out.push_str(&format!(
            "config: trunc={}, tol={:e}, max_subdiv={}, compactify={}, threads={}\n\n",
            self.config.trunc,
            self.config.tol,
            self.config.max_subdiv,
            self.config.compactify,
            self.config.threads
        ));
        out.push_str("| check | expected | computed | abs err | rel err | tol | provenance | pass |\n");
        out.push_str("|---|---|---|---|---|---|---|---|\n");
        for c in &self.checks {
            out.push_str(&format!(
                "| {} | {} | {} | {:.3e} | {:.3e} | {:.1e} | {:?} | {} |\n",
                c.name,
                c.expected,
                c.computed,
                c.abs_error,
                c.rel_error,
                c.tolerance,
                c.provenance,
                if c.pass { "yes" } else { "NO" }
            ));
        }
        if !self.notes.is_empty() {
            out.push_str("\n## Notes\n\n");
            for n in &self.notes {
                out.push_str(&format!("- {}\n", n));
            }
        }
        out
    }
}

/// Results payload for a distributional index, following the layout
/// {pipeline, support, coefficients: {γ: {jet_order: {monomial: [re, im]}}},
/// numeric_checks}.
pub fn index_results_json(
    ind: &crate::index::DistributionalIndex,
    numeric_checks: &[Check],
) -> serde_json::Value {
    let mut coeffs = serde_json::Map::new();
    for (gamma, jets) in &ind.coefficients {
        let mut per_jet = serde_json::Map::new();
        for (order, class) in jets {
            let mut per_mono = serde_json::Map::new();
            for (exps, c) in class.terms() {
                let label = monomial_label(class.ring(), exps);
                let v = crate::expr::crat_to_c64(c);
                per_mono.insert(label, serde_json::json!([v.re, v.im]));
            }
            per_jet.insert(order.to_string(), serde_json::Value::Object(per_mono));
        }
        coeffs.insert(gamma.clone(), serde_json::Value::Object(per_jet));
    }
    serde_json::json!({
        "pipeline": ind.group,
        "support": ind.support,
        "coefficients": coeffs,
        "numeric_checks": numeric_checks
            .iter()
            .map(|c| serde_json::json!({
                "name": c.name,
                "expected": c.expected,
                "computed": c.computed,
                "tolerance": c.tolerance,
                "pass": c.pass,
            }))
            .collect::<Vec<_>>(),
    })
}

fn monomial_label(ring: &std::sync::Arc<crate::classes::CohRing>, exps: &[u32]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                ring.generator_name(i).to_string()
            } else {
                format!("{}^{}", ring.generator_name(i), e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ConfigEcho {
        ConfigEcho {
            trunc: 8,
            tol: 1e-9,
            max_subdiv: 1_000_000,
            compactify: "polar".to_string(),
            threads: 1,
        }
    }

    #[test]
    fn pass_is_conjunction_of_checks() {
        let good = Check::numeric("a", Provenance::Reference, 1.0, 1.0 + 1e-12, 1e-9);
        let bad = Check::numeric("b", Provenance::Derived, 1.0, 1.1, 1e-9);
        assert!(good.pass && !bad.pass);
        let r = ReportEnvelope::new(
            "t",
            cfg(),
            serde_json::json!({}),
            vec![good.clone()],
            vec![],
        );
        assert!(r.pass);
        let r2 = ReportEnvelope::new("t", cfg(), serde_json::json!({}), vec![good, bad], vec![]);
        assert!(!r2.pass);
    }

    #[test]
    fn json_is_deterministic() {
        let mk = || {
            ReportEnvelope::new(
                "t",
                cfg(),
                serde_json::json!({"b": 2, "a": 1}),
                vec![Check::exact("e", Provenance::Trivial, "x", "x")],
                vec!["n".to_string()],
            )
        };
        assert_eq!(mk().to_json(), mk().to_json());
        // map keys serialize sorted regardless of construction order
        assert!(mk().to_json().find("\"a\"").unwrap() < mk().to_json().find("\"b\"").unwrap());
    }

    #[test]
    fn zero_expected_uses_absolute_error() {
        let c = Check::numeric("z", Provenance::Trivial, 0.0, 1e-12, 1e-9);
        assert!(c.pass);
        assert_eq!(c.abs_error, c.rel_error);
    }

    #[test]
    fn markdown_mentions_every_check() {
        let r = ReportEnvelope::new(
            "t",
            cfg(),
            serde_json::json!({}),
            vec![
                Check::predicate("alpha", Provenance::Derived, true),
                Check::predicate("beta", Provenance::Reference, false),
            ],
            vec!["note body".to_string()],
        );
        let md = r.to_markdown();
        assert!(md.contains("alpha") && md.contains("beta") && md.contains("note body"));
        assert!(md.contains("FAIL"));
    }
}
