//! Multi-seed experiment bookkeeping and machine-readable output.
//!
//! JSON output has sorted keys and every real rounded to 12 significant
//! digits, so two runs of the same experiment differ only in wall-time fields.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::graph::Graph;
use crate::search::{run_local_search, SearchConfig};
use crate::solvers::SubproblemSolver;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedRecord {
    pub seed: u64,
    pub modularity: f64,
    pub solver_calls: usize,
    pub iterations: usize,
    pub wall_time_seconds: f64,
}

/// Five-number summary used for box plots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl BoxStats {
    /// Quartiles by inclusive linear interpolation (position `q * (n - 1)`).
    ///
    /// Returns `None` for an empty sample.
    pub fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let at = |q: f64| {
            let pos = q * (sorted.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = (lo + 1).min(sorted.len() - 1);
            sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
        };
        Some(Self {
            min: sorted[0],
            q1: at(0.25),
            median: at(0.5),
            q3: at(0.75),
            max: sorted[sorted.len() - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub graph_name: String,
    pub backend: String,
    pub per_seed: Vec<SeedRecord>,
    pub modularity_stats: BoxStats,
    pub solver_call_stats: BoxStats,
}

impl ExperimentSummary {
    /// Summarizes `per_seed`, which must be non-empty.
    pub fn new(
        graph_name: impl Into<String>,
        backend: impl Into<String>,
        per_seed: Vec<SeedRecord>,
    ) -> Self {
        let modularity: Vec<f64> = per_seed.iter().map(|r| r.modularity).collect();
        let calls: Vec<f64> = per_seed.iter().map(|r| r.solver_calls as f64).collect();
        Self {
            graph_name: graph_name.into(),
            backend: backend.into(),
            modularity_stats: BoxStats::from_values(&modularity).expect("at least one seed"),
            solver_call_stats: BoxStats::from_values(&calls).expect("at least one seed"),
            per_seed,
        }
    }

    /// The summary as a JSON value with sorted keys and rounded reals.
    pub fn to_value(&self) -> Value {
        round_reals(json!({
            "graph_name": self.graph_name,
            "backend": self.backend,
            "per_seed": self.per_seed,
            "modularity_stats": self.modularity_stats,
            "solver_call_stats": self.solver_call_stats,
        }))
    }

    pub fn to_json(&self) -> String {
        to_pretty(&self.to_value())
    }

    /// One row per seed, with a header line.
    pub fn to_csv(&self) -> String {
        csv_document(std::slice::from_ref(self))
    }
}

/// Runs one search for `seed` using `template` with its seed replaced.
pub fn run_seed<S>(g: &Graph, template: &SearchConfig, solver: &S, seed: u64) -> Result<SeedRecord>
where
    S: SubproblemSolver + ?Sized,
{
    let mut cfg = template.clone();
    cfg.seed = seed;
    let report = crate::search::run_local_search_with(g, &cfg, solver)?;
    Ok(SeedRecord {
        seed,
        modularity: report.best_modularity,
        solver_calls: report.solver_calls,
        iterations: report.iterations,
        wall_time_seconds: report.wall_time_seconds,
    })
}

/// Runs every seed in order with `template.backend` and summarizes.
pub fn run_experiment(
    g: &Graph,
    graph_name: &str,
    template: &SearchConfig,
    seeds: &[u64],
) -> Result<ExperimentSummary> {
    let per_seed = seeds
        .iter()
        .map(|&seed| {
            let mut cfg = template.clone();
            cfg.seed = seed;
            run_local_search(g, &cfg).map(|r| SeedRecord {
                seed,
                modularity: r.best_modularity,
                solver_calls: r.solver_calls,
                iterations: r.iterations,
                wall_time_seconds: r.wall_time_seconds,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentSummary::new(
        graph_name,
        template.backend.kind().name(),
        per_seed,
    ))
}

/// Several backends on the same graph, keyed by backend name.
pub fn comparison_to_json(graph_name: &str, summaries: &[ExperimentSummary]) -> String {
    let backends: serde_json::Map<String, Value> = summaries
        .iter()
        .map(|s| (s.backend.clone(), s.to_value()))
        .collect();
    to_pretty(&json!({ "graph_name": graph_name, "backends": backends }))
}

/// CSV rows for any number of summaries.
pub fn csv_document(summaries: &[ExperimentSummary]) -> String {
    let mut out = String::from(
        "graph_name,backend,seed,modularity,solver_calls,iterations,wall_time_seconds\n",
    );
    for s in summaries {
        for r in &s.per_seed {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                csv_field(&s.graph_name),
                csv_field(&s.backend),
                r.seed,
                round_sig(r.modularity),
                r.solver_calls,
                r.iterations,
                round_sig(r.wall_time_seconds),
            ));
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn round_reals(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            json!(round_sig(n.as_f64().expect("f64 number")))
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_reals).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_reals(v))).collect())
        }
        other => other,
    }
}

fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Strips wall-time fields so two documents can be compared for determinism.
pub fn without_wall_time(mut v: Value) -> Value {
    match &mut v {
        Value::Object(map) => {
            map.remove("wall_time_seconds");
            for (_, child) in map.iter_mut() {
                *child = without_wall_time(child.take());
            }
        }
        Value::Array(items) => {
            for child in items.iter_mut() {
                *child = without_wall_time(child.take());
            }
        }
        _ => {}
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::solvers::Backend;

    #[test]
    fn quartiles_linear_interpolation() {
        let s = BoxStats::from_values(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(
            (s.min, s.q1, s.median, s.q3, s.max),
            (1.0, 1.75, 2.5, 3.25, 4.0)
        );
        let one = BoxStats::from_values(&[7.0]).unwrap();
        assert_eq!((one.q1, one.median, one.q3), (7.0, 7.0, 7.0));
        assert!(BoxStats::from_values(&[]).is_none());
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(round_sig(5.0 / 14.0), 0.357142857143);
        assert_eq!(round_sig(-1.0 / 3.0), -0.333333333333);
        assert_eq!(round_sig(123456789.12345), 123456789.123);
        assert_eq!(round_sig(0.0), 0.0);
    }

    #[test]
    fn json_is_sorted_and_rounded() {
        let g = parse_edge_list("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n2 3").unwrap();
        let mut cfg = SearchConfig::new(Backend::Exact, 0);
        cfg.subproblem_size = 6;
        let summary = run_experiment(&g, "barbell", &cfg, &[0, 1, 2]).unwrap();
        let text = summary.to_json();
        assert!(text.contains("0.357142857143"));
        let keys: Vec<&str> = [
            "\"backend\"",
            "\"graph_name\"",
            "\"modularity_stats\"",
            "\"per_seed\"",
            "\"solver_call_stats\"",
        ]
        .into_iter()
        .collect();
        let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(summary.per_seed.len(), 3);
    }

    #[test]
    fn csv_quotes_awkward_names() {
        let rec = SeedRecord {
            seed: 1,
            modularity: 0.25,
            solver_calls: 2,
            iterations: 2,
            wall_time_seconds: 0.5,
        };
        let s = ExperimentSummary::new("a,b", "exact", vec![rec]);
        let csv = s.to_csv();
        assert_eq!(csv.lines().nth(1).unwrap(), "\"a,b\",exact,1,0.25,2,2,0.5");
    }

    #[test]
    fn wall_time_stripping() {
        let v = json!({"a": [{"wall_time_seconds": 1.0, "seed": 2}], "wall_time_seconds": 3});
        assert_eq!(without_wall_time(v), json!({"a": [{"seed": 2}]}));
    }
}
