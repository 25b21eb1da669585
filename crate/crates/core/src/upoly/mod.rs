//! Dense polynomials and truncated Laurent series in `X^{-1}`.

mod poly;
mod series;

pub use poly::Poly;
pub use series::{series_invert, sqrt_series, Laurent, LaurentTail};
