use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum AnnuityError {
    #[error("annuity inputs must be finite, got investment={investment}, lifetime={lifetime}, wacc={wacc}, fom={fom}")]
    NonFinite { investment: f64, lifetime: f64, wacc: f64, fom: f64 },
    #[error("annuity inputs must be non-negative with lifetime >= 1, got investment={investment}, lifetime={lifetime}, wacc={wacc}, fom={fom}")]
    OutOfRange { investment: f64, lifetime: f64, wacc: f64, fom: f64 },
}

/// Converts an overnight investment into an annual cost.
///
/// Uses the annuity factor `a = r / (1 - (1 + r)^-n)` at rate `wacc` over
/// `lifetime` years, plus fixed O&M given as a fraction of the investment per
/// year. At `wacc = 0` the factor degenerates to straight-line repayment
/// `1 / lifetime`. Units pass through: EUR/MW in, EUR/MW/a out.
pub fn annuitize(investment: f64, lifetime: f64, wacc: f64, fom: f64) -> Result<f64, AnnuityError> {
    if !investment.is_finite() || !lifetime.is_finite() || !wacc.is_finite() || !fom.is_finite() {
        return Err(AnnuityError::NonFinite { investment, lifetime, wacc, fom });
    }
    if investment < 0.0 || lifetime < 1.0 || wacc < 0.0 || fom < 0.0 {
        return Err(AnnuityError::OutOfRange { investment, lifetime, wacc, fom });
    }
    let factor = if wacc == 0.0 {
        1.0 / lifetime
    } else {
        wacc / (1.0 - (1.0 + wacc).powf(-lifetime))
    };
    Ok(investment * factor + investment * fom)
}
