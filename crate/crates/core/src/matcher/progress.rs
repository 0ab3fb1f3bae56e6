use std::sync::Mutex;

use serde::Serialize;

/// Pairs evaluated between two progress updates, at most.
pub const PROGRESS_GRANULARITY: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RunState {
    Idle,
    Running,
    Done,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Progress {
    pub state: RunState,
    pub pairs_evaluated: u64,
    pub total_pairs: u64,
    pub links_found: u64,
}

/// Shared run progress. Counters only grow within one run.
#[derive(Debug)]
pub struct ProgressTracker {
    current: Mutex<Progress>,
}

impl Default for ProgressTracker {
    fn default() -> Self {
        Self::new()
    }
}

impl ProgressTracker {
    pub fn new() -> Self {
        Self {
            current: Mutex::new(Progress {
                state: RunState::Idle,
                pairs_evaluated: 0,
                total_pairs: 0,
                links_found: 0,
            }),
        }
    }

    fn update(&self, f: impl FnOnce(&mut Progress)) {
        f(&mut self.current.lock().unwrap_or_else(|e| e.into_inner()));
    }

    pub fn start(&self, total_pairs: u64) {
        self.update(|p| {
            *p = Progress {
                state: RunState::Running,
                pairs_evaluated: 0,
                total_pairs,
                links_found: 0,
            }
        });
    }

    pub fn advance(&self, pairs: u64, links: u64) {
        self.update(|p| {
            p.pairs_evaluated = (p.pairs_evaluated + pairs).min(p.total_pairs);
            p.links_found += links;
        });
    }

    pub fn finish(&self) {
        self.update(|p| p.state = RunState::Done);
    }

    pub fn fail(&self) {
        self.update(|p| p.state = RunState::Failed);
    }

    pub fn snapshot(&self) -> Progress {
        *self.current.lock().unwrap_or_else(|e| e.into_inner())
    }
}
