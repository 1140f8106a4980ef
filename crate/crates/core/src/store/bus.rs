use std::collections::HashMap;
use std::fmt;

use super::{CommandEnvelope, EventEnvelope};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no handler registered for command type {0}")]
pub struct Unroutable(pub String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("a handler is already registered for command type {0}")]
pub struct DuplicateHandler(pub String);

/// A handler receives the shared context, the command, and the bus itself so
/// it can issue follow-up commands.
pub type CommandHandler<C, E> =
    Box<dyn Fn(&mut C, &CommandEnvelope, &CommandBus<C, E>) -> Result<Vec<EventEnvelope>, E> + Send + Sync>;

/// Point-to-point routing of commands: one handler per command type.
pub struct CommandBus<C, E> {
    handlers: HashMap<String, CommandHandler<C, E>>,
}

impl<C, E> Default for CommandBus<C, E> {
    fn default() -> Self {
        Self { handlers: HashMap::new() }
    }
}

impl<C, E> fmt::Debug for CommandBus<C, E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut types: Vec<_> = self.handlers.keys().collect();
        types.sort();
        f.debug_struct("CommandBus").field("handlers", &types).finish()
    }
}

impl<C, E: From<Unroutable>> CommandBus<C, E> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(
        &mut self,
        command_type: impl Into<String>,
        handler: CommandHandler<C, E>,
    ) -> Result<(), DuplicateHandler> {
        let command_type = command_type.into();
        if self.handlers.contains_key(&command_type) {
            return Err(DuplicateHandler(command_type));
        }
        self.handlers.insert(command_type, handler);
        Ok(())
    }

    pub fn handles(&self, command_type: &str) -> bool {
        self.handlers.contains_key(command_type)
    }

    /// Run the single handler for `cmd` and return the envelopes it appended.
    pub fn dispatch(&self, ctx: &mut C, cmd: &CommandEnvelope) -> Result<Vec<EventEnvelope>, E> {
        let handler = self.handlers.get(&cmd.command_type).ok_or_else(|| Unroutable(cmd.command_type.clone()))?;
        handler(ctx, cmd, self)
    }
}
