use serde::{Deserialize, Serialize};

use crate::dynamics::ScheduleFamily;
use crate::stats::parabola_vertex;

/// Parameters of one protocol run, echoed into every output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub n: usize,
    pub dim: usize,
    pub marked: Option<usize>,
    pub instance: Option<String>,
    pub gamma: f64,
    pub t_final: f64,
    pub schedule: String,
    pub schedule_family: Option<ScheduleFamily>,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub t: f64,
    pub success_probability: f64,
    pub norm: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub t: f64,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub params: RunParams,
    pub trace: Vec<TracePoint>,
    /// `|<m|psi(t_f)>|^2`.
    pub final_fidelity: f64,
    pub peak: Peak,
    /// Overlap with the instantaneous ground state, when it was tracked.
    pub ground_fidelity: Option<Vec<(f64, f64)>>,
    pub samples: Option<Vec<String>>,
    pub wall_time: f64,
}

impl RunResult {
    /// Trace as CSV with header `t,prob_m,norm`.
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("t,prob_m,norm\n");
        for p in &self.trace {
            s.push_str(&format!(
                "{},{},{}\n",
                csv_float(p.t),
                csv_float(p.success_probability),
                csv_float(p.norm)
            ));
        }
        s
    }
}

/// Shortest text that parses back to `x` exactly, switching to exponent
/// notation for very small or large magnitudes.
pub fn csv_float(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
    } else {
        x.to_string()
    }
}

/// Maximum of a sampled trace, refined by the parabola through the three
/// samples around it. The first maximum wins ties.
pub fn find_peak(trace: &[(f64, f64)]) -> Peak {
    let (i, &(t, p)) = trace
        .iter()
        .enumerate()
        .fold(None::<(usize, &(f64, f64))>, |best, (i, x)| match best {
            Some((_, b)) if b.1 >= x.1 => best,
            _ => Some((i, x)),
        })
        .expect("non-empty trace");
    if i == 0 || i + 1 == trace.len() {
        return Peak { t, probability: p };
    }
    match parabola_vertex(trace[i - 1], trace[i], trace[i + 1]) {
        Some((tv, pv)) if tv >= trace[i - 1].0 && tv <= trace[i + 1].0 && pv >= p => Peak {
            t: tv,
            probability: pv.min(1.0),
        },
        _ => Peak { t, probability: p },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_refinement_on_cosine() {
        let trace: Vec<(f64, f64)> = (0..40)
            .map(|k| {
                let t = 0.1 * k as f64;
                (t, (t - 1.234).cos().powi(2) * 0.8)
            })
            .collect();
        let peak = find_peak(&trace);
        assert!((peak.t - 1.234).abs() < 1e-3);
        assert!((peak.probability - 0.8).abs() < 1e-4);
    }

    #[test]
    fn peak_at_edges_not_refined() {
        let trace = vec![(0.0, 0.9), (1.0, 0.5), (2.0, 0.1)];
        assert_eq!(
            find_peak(&trace),
            Peak {
                t: 0.0,
                probability: 0.9
            }
        );
        let trace = vec![(0.0, 0.1), (1.0, 0.5), (2.0, 0.9)];
        assert_eq!(
            find_peak(&trace),
            Peak {
                t: 2.0,
                probability: 0.9
            }
        );
    }
}
