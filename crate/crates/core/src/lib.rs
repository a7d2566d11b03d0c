pub mod absorbers;
pub mod budget;
pub mod certificate;
pub mod error;
pub mod families;
pub mod group;
pub mod patterns;
pub mod rainbow;
pub mod sequencing;
pub mod solver;
pub mod stats;
pub mod zerosum;

mod bitset;
mod exact_cover;

pub use budget::{Outcome, Search, SearchBudget};
pub use error::{Error, Result};
pub use group::{enumerate_abelian_groups, Element, GroupSpec};
