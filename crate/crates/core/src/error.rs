use alloc::sync::Arc;
use core::fmt;

/// Why a BDD computation was abandoned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exhaustion {
    /// The live node count exceeded the configured budget.
    NodeBudget,
    /// The interrupt callback asked to stop (typically a timeout).
    Interrupted,
}

impl fmt::Display for Exhaustion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exhaustion::NodeBudget => f.write_str("node budget exceeded"),
            Exhaustion::Interrupted => f.write_str("interrupted (timeout)"),
        }
    }
}

/// Resource limits shared by every BDD manager created for one analysis.
#[derive(Clone)]
pub struct Limits {
    pub node_budget: usize,
    /// Polled every few thousand node allocations; returning `true` aborts.
    pub interrupt: Option<Arc<dyn Fn() -> bool + Send + Sync>>,
}

impl Limits {
    pub const DEFAULT_NODE_BUDGET: usize = 8 * 1024 * 1024;

    pub fn with_node_budget(node_budget: usize) -> Self {
        Limits { node_budget, interrupt: None }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::with_node_budget(Self::DEFAULT_NODE_BUDGET)
    }
}

impl fmt::Debug for Limits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Limits")
            .field("node_budget", &self.node_budget)
            .field("interrupt", &self.interrupt.is_some())
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Gr1Error {
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(Exhaustion),
    #[error("precondition not met: {0}")]
    Precondition(&'static str),
    #[error("bit bound exceeded: {bits} propositions, bound is {bound}")]
    BitBound { bits: usize, bound: usize },
    #[error("{0} exceeds the size limit")]
    TooLarge(&'static str),
    #[error("horizon bound of {0} rounds exceeded")]
    Horizon(usize),
}

impl From<Exhaustion> for Gr1Error {
    fn from(e: Exhaustion) -> Self {
        Gr1Error::ResourceLimit(e)
    }
}
