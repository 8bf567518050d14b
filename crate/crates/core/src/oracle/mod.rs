//! Brute-force ground truth over small general linear groups.

pub mod field;
pub mod group;
pub mod matrix;

pub use field::{irreducible_polys, monic_polys, Fq, FqPoly};
pub use group::{
    block_orders, centralizer_count_cost, commutant_units, count_cyclic_centralizers, cyclic_proportion,
    enumerate_gl, generators, group_order, regular_unipotent, acyclic_centralizer_check, acyclic_centralizer_matrix, BlockOrders,
    CentralizerSet, CyclicCentralizers, CyclicProportion, GlGroup, AcyclicCentralizerReport,
};
pub use matrix::{companion, jm_block, FqMatrix};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("fields above 256 elements are not supported (got {0})")]
    FieldTooLarge(u64),
    #[error("{what} needs {required}, budget allows {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u64,
        budget: u64,
    },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Limits on group size and on total elementary steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub elements: u64,
    pub steps: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            elements: 200_000,
            steps: 1_000_000_000,
        }
    }
}

impl Budget {
    pub fn check_elements(&self, required: u64) -> Result<(), OracleError> {
        if required > self.elements {
            return Err(OracleError::BudgetExceeded {
                what: "group elements",
                required,
                budget: self.elements,
            });
        }
        Ok(())
    }

    pub fn check_steps(&self, what: &'static str, required: u64) -> Result<(), OracleError> {
        if required > self.steps {
            return Err(OracleError::BudgetExceeded {
                what,
                required,
                budget: self.steps,
            });
        }
        Ok(())
    }
}
