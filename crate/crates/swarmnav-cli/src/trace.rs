//! Trace files: one JSON object per line, either a position sample
//! `{"t":…,"group":…,"pos":[x,y]}` or an event
//! `{"t":…,"group":…,"event":"hit","pos":[x,y],"obstacle":0}`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use swarmnav::sim::{EventKind, SimResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceLine {
    pub t: f64,
    pub group: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event: Option<String>,
    pub pos: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstacle: Option<usize>,
}

pub const EVENT_NAMES: [&str; 5] = ["hit", "leave", "meet", "split", "arrive"];

fn event_name(kind: EventKind) -> &'static str {
    match kind {
        EventKind::Hit => "hit",
        EventKind::Leave => "leave",
        EventKind::Meet => "meet",
        EventKind::Split => "split",
        EventKind::Arrive => "arrive",
    }
}

/// Serializes a run's traces, per group in trace order, samples and events
/// merged chronologically (events after samples at equal times).
pub fn render_trace(result: &SimResult) -> String {
    let mut out = String::new();
    for trace in &result.traces {
        let mut ev = trace.events.iter().peekable();
        let mut emit_events_until = |out: &mut String, t: f64, inclusive: bool| {
            while let Some(e) = ev.peek() {
                if e.t < t || (inclusive && e.t <= t) {
                    let line = TraceLine {
                        t: e.t,
                        group: trace.group.clone(),
                        event: Some(event_name(e.kind).to_string()),
                        pos: [e.point.x, e.point.y],
                        obstacle: e.obstacle,
                    };
                    writeln!(out, "{}", serde_json::to_string(&line).expect("trace line")).unwrap();
                    ev.next();
                } else {
                    break;
                }
            }
        };
        for &(t, p) in &trace.samples {
            emit_events_until(&mut out, t, false);
            let line = TraceLine {
                t,
                group: trace.group.clone(),
                event: None,
                pos: [p.x, p.y],
                obstacle: None,
            };
            writeln!(out, "{}", serde_json::to_string(&line).expect("trace line")).unwrap();
        }
        emit_events_until(&mut out, f64::INFINITY, true);
    }
    out
}

/// Parses trace text, reporting `origin` and the 1-based line number of
/// the first malformed line.
pub fn parse_trace(text: &str, origin: &str) -> Result<Vec<TraceLine>, String> {
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        if raw.trim().is_empty() {
            return Err(format!("{origin}:{lineno}: empty trace line"));
        }
        let line: TraceLine = serde_json::from_str(raw)
            .map_err(|e| format!("{origin}:{lineno}: malformed trace line: {e}"))?;
        if !line.t.is_finite() || !line.pos.iter().all(|v| v.is_finite()) {
            return Err(format!(
                "{origin}:{lineno}: malformed trace line: non-finite coordinate"
            ));
        }
        if let Some(event) = &line.event {
            if !EVENT_NAMES.contains(&event.as_str()) {
                return Err(format!(
                    "{origin}:{lineno}: malformed trace line: unknown event '{event}'"
                ));
            }
        }
        lines.push(line);
    }
    Ok(lines)
}

/// Parses a trace file (see [`parse_trace`]).
pub fn read_trace(path: &Path) -> Result<Vec<TraceLine>, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_trace(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use swarmnav::scene::Scene;
    use swarmnav::sim::{run_swarm_com, SimConfig};

    #[test]
    fn sample_and_event_lines_use_the_documented_shapes() {
        let sample = TraceLine {
            t: 1.5,
            group: "g".into(),
            event: None,
            pos: [2.0, -3.0],
            obstacle: None,
        };
        assert_eq!(
            serde_json::to_string(&sample).unwrap(),
            r#"{"t":1.5,"group":"g","pos":[2.0,-3.0]}"#
        );
        let event = TraceLine {
            t: 4.0,
            group: "gc".into(),
            event: Some("hit".into()),
            pos: [0.5, 0.0],
            obstacle: Some(0),
        };
        assert_eq!(
            serde_json::to_string(&event).unwrap(),
            r#"{"t":4.0,"group":"gc","event":"hit","pos":[0.5,0.0],"obstacle":0}"#
        );
    }

    #[test]
    fn runner_output_round_trips_through_the_parser() {
        let scene = Scene::new(
            "empty",
            swarmnav::geometry::Point::new(0.0, 0.0),
            swarmnav::geometry::Point::new(5.0, 0.0),
            vec![],
        );
        let result = run_swarm_com(&scene, &SimConfig::new(2)).unwrap();
        let text = render_trace(&result);
        let lines = parse_trace(&text, "mem").unwrap();
        assert!(!lines.is_empty());
        assert!(lines.iter().any(|l| l.event.as_deref() == Some("arrive")));
        // Chronological per group.
        for group in lines.iter().map(|l| l.group.clone()).collect::<std::collections::BTreeSet<_>>() {
            let ts: Vec<f64> = lines
                .iter()
                .filter(|l| l.group == group)
                .map(|l| l.t)
                .collect();
            assert!(ts.windows(2).all(|w| w[0] <= w[1]), "{group}: {ts:?}");
        }
    }

    #[test]
    fn parser_reports_the_offending_line() {
        let text = "{\"t\":0.0,\"group\":\"g\",\"pos\":[0,0]}\nnope\n";
        let err = parse_trace(text, "input").unwrap_err();
        assert!(err.starts_with("input:2:"), "{err}");
        let unknown = "{\"t\":0.0,\"group\":\"g\",\"event\":\"warp\",\"pos\":[0,0]}\n";
        let err = parse_trace(unknown, "input").unwrap_err();
        assert!(err.contains("unknown event 'warp'"), "{err}");
        let nan = "{\"t\":null,\"group\":\"g\",\"pos\":[0,0]}\n";
        assert!(parse_trace(nan, "input").is_err());
    }
}
