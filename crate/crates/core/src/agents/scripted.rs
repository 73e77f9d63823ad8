use super::Agent;
use crate::common::{Action, Percept, RngStream};
use crate::error::ModelError;

/// Replays a fixed action list, cycling when it runs out. Used for
/// hand-checkable traces.
#[derive(Clone, Debug)]
pub struct ScriptedAgent {
    script: Vec<Action>,
    next: usize,
}

impl ScriptedAgent {
    pub fn new(script: Vec<Action>) -> Self {
        assert!(!script.is_empty(), "empty script");
        Self { script, next: 0 }
    }
}

impl Agent for ScriptedAgent {
    fn update(&mut self, _action: Option<Action>, _percept: &Percept) -> Result<(), ModelError> {
        Ok(())
    }

    fn select_action(&mut self, _rng: &mut RngStream) -> Result<Action, ModelError> {
        let a = self.script[self.next % self.script.len()];
        self.next += 1;
        Ok(a)
    }
}
