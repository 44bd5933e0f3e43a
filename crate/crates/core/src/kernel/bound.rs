use crate::error::{Error, Result};
use crate::route::Variant;

/// Mutual-loop quality `1 - (1 - gamma/2)^2` given an s-t kernel of quality `gamma`.
pub fn rho(gamma: f64) -> f64 {
    1.0 - (1.0 - gamma / 2.0).powi(2)
}

/// Guaranteed approximation ratio of the greedy solver for `variant`, given
/// the quality of its subroutines: `alpha` (rooted orienteering), `beta`
/// (team orienteering) and `gamma` (s-t orienteering). `multiple` is `Q̂`
/// for the `T_t > T_c` variants and ignored otherwise.
///
/// ```
/// use csc::kernel::approximation_bound;
/// use csc::route::Variant;
/// let r = approximation_bound(Variant::RcscTcGeTt, 1, 1.0, 1.0, 1.0).unwrap();
/// assert!((r - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
/// ```
pub fn approximation_bound(
    variant: Variant,
    multiple: usize,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<f64> {
    for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(Error::Input(format!("{name} must lie in (0, 1], got {v}")));
        }
    }
    let needs_multiple = !variant.charge_ge_sweep();
    if needs_multiple && multiple == 0 {
        return Err(Error::Input(format!("{variant} needs a positive period multiple")));
    }
    let q = multiple as f64;
    let exponent = match variant {
        Variant::RcscTcGeTt => alpha,
        Variant::RcscTtGtTc => q * beta / (2.0 * q - 1.0),
        Variant::Csc2TcGeTt => 0.75 * alpha.min(rho(gamma)),
        Variant::Csc2TtGtTc => q * alpha.min(rho(gamma)) / (2.0 * q - 1.0),
    };
    Ok(1.0 - (-exponent).exp())
}
