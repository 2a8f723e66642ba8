//! Volatility labels, Fama-French industry mapping, the fixed-effects design
//! matrix, least squares with classical inference, VIF diagnostics and the
//! FIN vs FIN + MBTI comparison.

mod design;
mod industry;
mod ols;
mod panel;
mod returns;
mod risk;
mod vif;

pub use design::{build_design_matrix, DesignMatrix, DesignSpec, FIN_CONTROLS};
pub use industry::{ff12_industry, Ff12};
pub use ols::{ols_fit, stars, Coefficient, OlsReport};
pub use panel::{assemble_rows, read_panel_csv, read_prices_csv, write_panel_csv, write_prices_csv, Assembly, PanelRecord, RiskRow};
pub use returns::{log_returns, realized_vol, PriceSeries, Window, PAST_WINDOW_DAYS, POST_WINDOW_DAYS};
pub use risk::{render_risk_csv, render_risk_table, render_vif_table, risk_regression, RiskRegression};
pub use vif::{vif, VifEntry};
