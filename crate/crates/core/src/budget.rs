//! Search budgets and three-valued search outcomes.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub const DEFAULT_NODE_CAP: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    /// Wall-clock cap. Runs that set one are not reproducible node-for-node.
    pub max_time: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: DEFAULT_NODE_CAP, max_time: None }
    }
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget { max_nodes, max_time: None }
    }

    pub fn unlimited() -> Self {
        SearchBudget { max_nodes: u64::MAX, max_time: None }
    }

    pub fn meter(&self) -> Meter {
        Meter { budget: *self, nodes: 0, start: Instant::now(), exhausted: false }
    }
}

/// Counts search nodes against a budget.
#[derive(Debug)]
pub struct Meter {
    budget: SearchBudget,
    nodes: u64,
    start: Instant,
    exhausted: bool,
}

impl Meter {
    /// Records one node; returns false once the budget is spent.
    #[inline]
    pub fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            self.exhausted = true;
            return false;
        }
        if let Some(limit) = self.budget.max_time {
            if self.nodes.is_multiple_of(4096) && self.start.elapsed() > limit {
                self.exhausted = true;
                return false;
            }
        }
        true
    }

    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// Wraps an optional search result: a hit is `Found`, a miss is
    /// `Nonexistent` only if the budget was never exceeded.
    pub fn finish<T>(&self, found: Option<T>) -> Search<T> {
        let outcome = match found {
            Some(t) => Outcome::Found(t),
            None if self.exhausted => Outcome::Unknown,
            None => Outcome::Nonexistent,
        };
        Search { outcome, nodes: self.nodes }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome<T> {
    Found(T),
    /// The whole search space was covered without a hit.
    Nonexistent,
    /// The budget ran out first.
    Unknown,
}

impl<T> Outcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }

    pub fn is_nonexistent(&self) -> bool {
        matches!(self, Outcome::Nonexistent)
    }

    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_found(&self) -> Option<&T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Found(t) => Outcome::Found(f(t)),
            Outcome::Nonexistent => Outcome::Nonexistent,
            Outcome::Unknown => Outcome::Unknown,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Found(_) => "found",
            Outcome::Nonexistent => "nonexistent",
            Outcome::Unknown => "unknown",
        }
    }
}

/// An outcome together with the number of nodes it took.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Search<T> {
    pub outcome: Outcome<T>,
    pub nodes: u64,
}

impl<T> Search<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Search<U> {
        Search { outcome: self.outcome.map(f), nodes: self.nodes }
    }

    pub fn found(self) -> Option<T> {
        self.outcome.found()
    }
}
