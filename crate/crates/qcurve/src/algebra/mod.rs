//! Exact coefficient arithmetic over ℚ, quadratic extensions and ℚ(ℏ).

pub mod elem;
pub mod expand;
pub mod factor;
pub mod field;
pub mod mpoly;
pub mod poly;
pub mod quad;
pub mod ratfunc;
pub mod series;

pub use elem::FieldElement;
pub use expand::{partial_fractions, residue_at, series_expand, PartialFractions, Point};
pub use field::{parse_q, q, q_str, Field, Q};
pub use mpoly::MPoly;
pub use poly::Poly;
pub use quad::{Quad, QuadTower};
pub use ratfunc::RatFunc;
pub use series::{LogSeries, TruncSeries};
