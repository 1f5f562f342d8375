//! Aggregation of event logs into run summaries: collision rates over
//! affected agents, the set of observed behaviors, and formatted
//! evacuation times; plus multi-seed aggregation per scenario.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::engine::{EventKind, EventRecord};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("cannot format a negative time: {0}")]
    NegativeTime(f64),
    #[error("not a min:sec:ms time string: {0:?}")]
    BadTimeString(String),
    #[error("cannot aggregate zero summaries")]
    EmptyAggregate,
}

/// Reported label for a behavior event, if it counts as one.
/// Waiting for a fallen agent is reported as plain waiting.
fn behavior_label(kind: EventKind) -> Option<&'static str> {
    match kind {
        EventKind::Aside => Some("aside"),
        EventKind::Wait | EventKind::WaitForFallen => Some("wait"),
        EventKind::Help => Some("help"),
        EventKind::JumpOver => Some("jump over"),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgentOutcome {
    pub agent: String,
    pub evac_time_s: Option<f64>,
    pub cwa_count: u32,
    pub cwo_count: u32,
    pub behaviors: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    /// Percentage of agents with at least one collision with another agent.
    pub cwa_rate_pct: f64,
    /// Percentage of agents with at least one collision with an obstacle.
    pub cwo_rate_pct: f64,
    /// Distinct behaviors observed during the run.
    pub obde: BTreeSet<String>,
    /// Time of the last exit, formatted min:sec:ms.
    pub total_evac: String,
    pub total_evac_s: f64,
    pub complete: bool,
    pub stranded: Vec<String>,
    pub per_agent: Vec<AgentOutcome>,
}

/// Format seconds as "min:sec:ms" with no zero padding, milliseconds
/// truncated. Times are tick multiples, so an epsilon guard keeps values
/// like 60.941 from landing one millisecond short.
pub fn format_time(seconds: f64) -> Result<String, MetricsError> {
    if !(seconds >= 0.0) || !seconds.is_finite() {
        return Err(MetricsError::NegativeTime(seconds));
    }
    let total_ms = (seconds * 1000.0 + 1e-6).floor() as u64;
    let minutes = total_ms / 60_000;
    let secs = (total_ms / 1000) % 60;
    let ms = total_ms % 1000;
    Ok(format!("{minutes}:{secs}:{ms}"))
}

/// Parse a "min:sec:ms" string back to seconds.
pub fn parse_time(text: &str) -> Result<f64, MetricsError> {
    let bad = || MetricsError::BadTimeString(text.to_string());
    let parts: Vec<&str> = text.split(':').collect();
    let [min, sec, ms]: [&str; 3] = parts.try_into().map_err(|_| bad())?;
    let min: u64 = min.parse().map_err(|_| bad())?;
    let sec: u64 = sec.parse().map_err(|_| bad())?;
    let ms: u64 = ms.parse().map_err(|_| bad())?;
    if sec > 59 || ms > 999 {
        return Err(bad());
    }
    Ok(min as f64 * 60.0 + sec as f64 + ms as f64 / 1000.0)
}

/// Condense an ordered event log into the per-run report. Rates count
/// affected agents (not raw events) over the roster size.
pub fn summarize(log: &[EventRecord], roster_ids: &[String], tick_s: f64, seed: u64) -> RunSummary {
    let mut per_agent: Vec<AgentOutcome> = roster_ids
        .iter()
        .map(|id| AgentOutcome {
            agent: id.clone(),
            evac_time_s: None,
            cwa_count: 0,
            cwo_count: 0,
            behaviors: BTreeSet::new(),
        })
        .collect();
    let index: std::collections::BTreeMap<&str, usize> =
        roster_ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();

    let mut last_exit_tick = 0u64;
    for event in log {
        let Some(&i) = index.get(event.agent.as_str()) else {
            continue;
        };
        let outcome = &mut per_agent[i];
        match event.kind {
            EventKind::Cwa => outcome.cwa_count += 1,
            EventKind::Cwo => outcome.cwo_count += 1,
            EventKind::Exit => {
                if outcome.evac_time_s.is_none() {
                    outcome.evac_time_s = Some(event.tick as f64 * tick_s);
                    last_exit_tick = last_exit_tick.max(event.tick);
                }
            }
            _ => {}
        }
        if let Some(label) = behavior_label(event.kind) {
            outcome.behaviors.insert(label.to_string());
        }
    }

    let roster_size = roster_ids.len();
    let affected = |f: &dyn Fn(&AgentOutcome) -> bool| {
        per_agent.iter().filter(|o| f(o)).count() as f64
    };
    let (cwa_rate_pct, cwo_rate_pct) = if roster_size == 0 {
        (0.0, 0.0)
    } else {
        (
            100.0 * affected(&|o| o.cwa_count > 0) / roster_size as f64,
            100.0 * affected(&|o| o.cwo_count > 0) / roster_size as f64,
        )
    };

    let obde: BTreeSet<String> =
        per_agent.iter().flat_map(|o| o.behaviors.iter().cloned()).collect();
    let stranded: Vec<String> = per_agent
        .iter()
        .filter(|o| o.evac_time_s.is_none())
        .map(|o| o.agent.clone())
        .collect();
    let complete = stranded.is_empty();
    let total_evac_s = last_exit_tick as f64 * tick_s;

    RunSummary {
        seed,
        cwa_rate_pct,
        cwo_rate_pct,
        obde,
        total_evac: format_time(total_evac_s).expect("tick times are non-negative"),
        total_evac_s,
        complete,
        stranded,
        per_agent,
    }
}

/// Mean and sample standard deviation (n−1); a single sample reports 0.
fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Multi-seed statistics for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioStats {
    pub runs: usize,
    pub seeds: Vec<u64>,
    pub mean_cwa_pct: f64,
    pub sd_cwa_pct: f64,
    pub mean_cwo_pct: f64,
    pub sd_cwo_pct: f64,
    pub obde_union: BTreeSet<String>,
    /// Over complete runs only; None when every run timed out.
    pub mean_evac_s: Option<f64>,
    pub sd_evac_s: Option<f64>,
    pub incomplete_runs: usize,
}

/// Aggregate summaries of the same scenario across seeds. Incomplete runs
/// are excluded from the evacuation-time statistics but counted.
pub fn aggregate(summaries: &[RunSummary]) -> Result<ScenarioStats, MetricsError> {
    if summaries.is_empty() {
        return Err(MetricsError::EmptyAggregate);
    }
    let cwa: Vec<f64> = summaries.iter().map(|s| s.cwa_rate_pct).collect();
    let cwo: Vec<f64> = summaries.iter().map(|s| s.cwo_rate_pct).collect();
    let times: Vec<f64> =
        summaries.iter().filter(|s| s.complete).map(|s| s.total_evac_s).collect();
    let (mean_cwa_pct, sd_cwa_pct) = mean_sd(&cwa);
    let (mean_cwo_pct, sd_cwo_pct) = mean_sd(&cwo);
    let (mean_evac_s, sd_evac_s) = if times.is_empty() {
        (None, None)
    } else {
        let (m, s) = mean_sd(&times);
        (Some(m), Some(s))
    };
    Ok(ScenarioStats {
        runs: summaries.len(),
        seeds: summaries.iter().map(|s| s.seed).collect(),
        mean_cwa_pct,
        sd_cwa_pct,
        mean_cwo_pct,
        sd_cwo_pct,
        obde_union: summaries.iter().flat_map(|s| s.obde.iter().cloned()).collect(),
        mean_evac_s,
        sd_evac_s,
        incomplete_runs: summaries.iter().filter(|s| !s.complete).count(),
    })
}
