//! Verdict engines for Dunkl complete monotonicity and Dunkl positive definiteness.

mod cm;
mod convexity;
mod pd;
mod schoenberg;

pub use cm::{check_dunkl_am, check_dunkl_cm, check_dunkl_cm_on_grid, cm_grid, CMReport, CmMode, CmOptions, Violation, DEFAULT_GRID_SIZE, EXACT_ORDER_CAP};
pub use convexity::{check_convexity_theorem, ConvexityOutcome, ConvexityReport, HypothesisCheck};
pub use pd::{check_dunkl_pd, GramReport, GramVerdict, TranslationRoute, MAX_POINTS, PSD_TOL};
pub use schoenberg::{check_schoenberg, check_vk_preserves_cm, DerivativeProvider, ExpDecay, SchoenbergReport};
