//! Chevalley bases and the classification of bounded invariant cocycles.

mod chevalley;
mod levels;
mod lifted;
mod local;
mod normalize;
mod psi;

use serde::Serialize;

pub use chevalley::{chevalley_basis, so_change_of_basis, ChevalleyBasis, Root};
pub use levels::{level_recursion_check, LevelReport};
pub use lifted::{pair_value, ChevalleyCoords, Lift};
pub use local::{local_space_dimension, LocalSpaceReport};
pub use normalize::{coboundary_table, normalize_cocycle, normalized_relations, NormalizationMap, RootConstants};
pub use psi::{killing_form, psi_forms, PsiForm};

const MAX_LISTED: usize = 5;

/// One exactly checked relation: how many instances were tested, how many
/// could not be evaluated inside the window, and the first few failures.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub name: String,
    pub checked: usize,
    pub skipped: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl Relation {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), ..Default::default() }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub(crate) fn record(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_LISTED {
                self.failures.push(msg());
            }
        }
    }

    pub(crate) fn skip(&mut self) {
        self.skipped += 1;
    }
}
