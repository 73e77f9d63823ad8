use super::config::ExperimentConfig;
use super::metrics::{avg_reward, exploration_pct};
use super::simulation::RunTrace;
use serde_json::json;
use std::io::{self, Write};

pub const CSV_HEADER: &str = "run,t,action,reward,avg_reward,cum_info_gain,explored_pct";

/// Formats `x` with 9 significant digits, switching to scientific notation
/// for very large or very small magnitudes, and trimming trailing zeros.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (8 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes all runs as one CSV, runs in order, one row per cycle.
pub fn write_csv<W: Write>(out: &mut W, traces: &[RunTrace]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for trace in traces {
        for (i, r) in trace.records.iter().enumerate() {
            let t = i + 1;
            let explored = exploration_pct(trace, t).map(format_sig9).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                trace.run,
                r.t,
                r.action,
                format_sig9(r.reward),
                format_sig9(avg_reward(trace, t)),
                format_sig9(r.cumulative_info_gain),
                explored
            )?;
        }
    }
    Ok(())
}

/// Version string in `git describe` style.
pub fn version() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}

/// Config echo, version and per-run seeds.
pub fn manifest(cfg: &ExperimentConfig, csv_name: &str) -> serde_json::Value {
    json!({
        "version": version(),
        "csv": csv_name,
        "config": cfg,
        "seeds": (0..cfg.runs).map(|i| cfg.run_seed(i)).collect::<Vec<_>>(),
        "std": "population (divisor n)",
    })
}
