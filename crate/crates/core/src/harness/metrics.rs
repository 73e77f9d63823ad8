use super::simulation::RunTrace;
use crate::error::ConfigError;

/// Mean reward over the first `t` cycles.
pub fn avg_reward(trace: &RunTrace, t: usize) -> f64 {
    assert!(t >= 1 && t <= trace.len(), "cycle {t} outside 1..={}", trace.len());
    trace.records[t - 1].cumulative_reward / t as f64
}

/// Percentage of reachable tiles visited by cycle `t`; `None` off-grid.
pub fn exploration_pct(trace: &RunTrace, t: usize) -> Option<f64> {
    let reachable = trace.reachable_tiles?;
    let visited = trace.records[t - 1].explored_tiles?;
    Some(100.0 * visited as f64 / reachable as f64)
}

/// Average reward at cycle `t` of an agent that walks `d` steps (paying
/// `r_walk` each) to a dispenser of payout `theta` and sits there.
pub fn optimal_avg_reward(d: usize, theta: f64, t: usize, r_walk: f64, r_cake: f64) -> f64 {
    d as f64 / t as f64 * r_walk + theta * r_cake
}

/// Per-cycle mean and population standard deviation of one metric.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Series {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Series {
    fn from_columns(columns: &[Vec<f64>]) -> Self {
        let t = columns[0].len();
        let n = columns.len() as f64;
        let mut s = Series { mean: Vec::with_capacity(t), std: Vec::with_capacity(t) };
        for i in 0..t {
            let mean = columns.iter().map(|c| c[i]).sum::<f64>() / n;
            let var = columns.iter().map(|c| (c[i] - mean).powi(2)).sum::<f64>() / n;
            s.mean.push(mean);
            s.std.push(var.sqrt());
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AggregateSeries {
    pub runs: usize,
    pub avg_reward: Series,
    pub cum_info_gain: Series,
    pub explored_pct: Option<Series>,
}

pub fn aggregate(traces: &[RunTrace]) -> Result<AggregateSeries, ConfigError> {
    let first = traces.first().ok_or_else(|| ConfigError::Invalid("nothing to aggregate".into()))?;
    if traces.iter().any(|tr| tr.len() != first.len()) {
        return Err(ConfigError::Invalid("traces have unequal lengths".into()));
    }
    if first.is_empty() {
        return Err(ConfigError::Invalid("traces are empty".into()));
    }
    let column = |f: &dyn Fn(&RunTrace, usize) -> f64| -> Vec<Vec<f64>> {
        traces.iter().map(|tr| (1..=tr.len()).map(|t| f(tr, t)).collect()).collect()
    };
    let explored_pct = if traces.iter().all(|tr| exploration_pct(tr, 1).is_some()) {
        Some(Series::from_columns(&column(&|tr, t| exploration_pct(tr, t).unwrap())))
    } else {
        None
    };
    Ok(AggregateSeries {
        runs: traces.len(),
        avg_reward: Series::from_columns(&column(&avg_reward)),
        cum_info_gain: Series::from_columns(&column(&|tr, t| tr.records[t - 1].cumulative_info_gain)),
        explored_pct,
    })
}

/// Mean and population standard deviation of `xs`.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}
