//! Domain vocabulary: values, states, tasks, actions, method templates and
//! instances, refinement stacks, and applicability.

mod applicable;
mod builder;
mod domain;
mod stack;
mod state;
mod value;

pub use applicable::{applicable, precondition_holds};
pub use builder::{
    effect, ActionBuilder, DomainBuilder, DomainError, MethodBuilder, PROB_TOLERANCE,
};
pub use domain::*;
pub(crate) use stack::write_values as stack_values;
pub use stack::{digest, Digest, EmptyStack, Frame, RefinementStack};
pub use state::{State, StateError};
pub use value::{Sym, SymbolTable, Value, ValueDisplay, ValueType};
