use crate::error::ConfigError;

/// Discount applied to future utilities. Only geometric discounting exists
/// today; the enum leaves room for others.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DiscountFunction {
    Geometric { beta: f64 },
}

impl DiscountFunction {
    pub fn geometric(beta: f64) -> Result<Self, ConfigError> {
        check_beta(beta)?;
        Ok(Self::Geometric { beta })
    }

    /// Weight of a utility received `k` steps in the future.
    pub fn weight(&self, k: u32) -> f64 {
        match *self {
            Self::Geometric { beta } => beta.powi(k as i32),
        }
    }

    /// Per-step multiplicative factor used by the planner's recursion.
    pub fn factor(&self) -> f64 {
        match *self {
            Self::Geometric { beta } => beta,
        }
    }
}

fn check_beta(beta: f64) -> Result<(), ConfigError> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(ConfigError::Invalid(format!("discount beta {beta} outside [0, 1]")));
    }
    Ok(())
}

/// `beta^k`.
pub fn geometric_discount(beta: f64, k: u32) -> Result<f64, ConfigError> {
    check_beta(beta)?;
    Ok(beta.powi(k as i32))
}

/// Smallest `H` such that the tail mass beyond `H` steps is at most `eps`
/// of the total. For geometric discounting this is the smallest `H` with
/// `beta^H <= eps`, independent of the current time.
pub fn effective_horizon(discount: &DiscountFunction, eps: f64) -> Result<u32, ConfigError> {
    if !(eps > 0.0) {
        return Err(ConfigError::Invalid(format!("effective horizon needs eps > 0, got {eps}")));
    }
    let DiscountFunction::Geometric { beta } = *discount;
    if eps >= 1.0 {
        return Ok(0);
    }
    if beta >= 1.0 {
        return Err(ConfigError::Invalid("undiscounted tail sums diverge".into()));
    }
    if beta == 0.0 {
        return Ok(1);
    }
    // Closed form, then nudge to absorb rounding in the logarithms.
    let mut h = (eps.ln() / beta.ln()).ceil().max(0.0) as u32;
    while h > 0 && beta.powi(h as i32 - 1) <= eps {
        h -= 1;
    }
    while beta.powi(h as i32) > eps {
        h += 1;
    }
    Ok(h)
}
