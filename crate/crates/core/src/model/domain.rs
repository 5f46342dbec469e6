use std::collections::HashMap;
use std::fmt::Write as _;

use serde_json::Value as Json;

use super::value::{SymbolTable, Value, ValueDisplay, ValueType};
use crate::interp::ast::{Expr, Instr};

macro_rules! id_types {
    ($($(#[$meta:meta])* $name:ident),* $(,)?) => {
        $(
            $(#[$meta])*
            #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
            pub struct $name(pub usize);

            impl $name {
                pub fn index(self) -> usize {
                    self.0
                }
            }
        )*
    };
}

id_types!(TypeId, FamilyId, RigidId, ActionId, TaskId, MethodId);

/// The built-in boolean type, always `TypeId(0)`.
pub const BOOL: TypeId = TypeId(0);

/// A parameterized family of state variables, e.g. `loc(r)` for every robot `r`.
///
/// Each ground instance (`loc(r1)`) is one state variable with the family's
/// range; instances occupy consecutive slots in [`State`](super::State).
#[derive(Clone, Debug)]
pub struct StateVarDecl {
    pub name: String,
    pub params: Vec<TypeId>,
    pub range: TypeId,
    pub(crate) offset: usize,
    pub(crate) strides: Vec<usize>,
    pub(crate) count: usize,
}

impl StateVarDecl {
    /// State slots holding this family's ground variables.
    pub fn slots(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.count
    }
}

/// Grounded state variable: the family and argument tuple behind one slot.
#[derive(Clone, Debug)]
pub struct StateVar {
    pub family: FamilyId,
    pub args: Vec<Value>,
}

/// A rigid (time-invariant) relation or function such as `adjacent` or `distance`.
#[derive(Clone, Debug)]
pub struct RigidFn {
    pub name: String,
    pub params: Vec<TypeId>,
    pub(crate) strides: Vec<usize>,
    pub(crate) table: Vec<Value>,
}

#[derive(Clone, Debug)]
pub struct TaskDecl {
    pub name: String,
    pub params: Vec<TypeId>,
    /// Events enter the same refinement machinery as tasks.
    pub event: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Task {
    pub id: TaskId,
    pub args: Vec<Value>,
}

impl Task {
    pub fn new(id: TaskId, args: Vec<Value>) -> Self {
        Task { id, args }
    }
}

#[derive(Clone, Debug)]
pub struct Param {
    pub name: String,
    pub ty: TypeId,
    /// Restricts a free parameter to a subset of its type. `None` means every
    /// value of the type is a candidate.
    pub candidates: Option<Vec<Value>>,
}

#[derive(Clone, Debug)]
pub enum CostSpec {
    Fixed(f64),
    /// Integer-valued expression over the action's parameters and the
    /// pre-action state.
    Expr(Expr),
}

#[derive(Clone, Debug)]
pub struct Effect {
    pub family: FamilyId,
    pub args: Vec<Expr>,
    pub value: Expr,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub label: String,
    pub prob: f64,
    pub cost: CostSpec,
    pub effects: Vec<Effect>,
    /// Failure outcomes carry a cost only for acting-time bookkeeping; to the
    /// planner a failed sample is worth `U(Failure)` whatever the cost.
    pub failed: bool,
}

#[derive(Clone, Debug)]
pub struct ActionSpec {
    pub name: String,
    pub params: Vec<Param>,
    /// An unsatisfied precondition makes the action fail without effects.
    pub pre: Option<Expr>,
    pub outcomes: Vec<Outcome>,
    /// Acting-time duration in engine ticks.
    pub duration: u32,
    /// Event tasks raised in the acting environment on successful completion.
    pub emits: Vec<(TaskId, Vec<Expr>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundAction {
    pub action: ActionId,
    pub args: Vec<Value>,
}

#[derive(Clone, Debug)]
pub struct MethodTemplate {
    pub name: String,
    pub task: TaskId,
    /// Task arguments first, then free parameters.
    pub params: Vec<Param>,
    /// Names of every local slot: parameters followed by method locals.
    pub slot_names: Vec<String>,
    pub pre: Expr,
    pub body: Vec<Instr>,
}

impl MethodTemplate {
    pub fn n_slots(&self) -> usize {
        self.slot_names.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MethodInstance {
    pub method: MethodId,
    pub binding: Vec<Value>,
}

/// The Table-1 style feature flags a domain declares about itself.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Features {
    pub exogenous_events: bool,
    pub dead_ends: bool,
    pub sensing: bool,
    pub collaboration: bool,
    pub parallel_tasks: bool,
}

/// A validated acting domain: state variables, tasks, actions and methods.
#[derive(Clone, Debug)]
pub struct Domain {
    pub(crate) name: String,
    pub(crate) symbols: SymbolTable,
    pub(crate) types: Vec<ValueType>,
    pub(crate) families: Vec<StateVarDecl>,
    pub(crate) vars: Vec<StateVar>,
    pub(crate) var_index: HashMap<String, usize>,
    pub(crate) rigids: Vec<RigidFn>,
    pub(crate) tasks: Vec<TaskDecl>,
    pub(crate) actions: Vec<ActionSpec>,
    pub(crate) methods: Vec<MethodTemplate>,
    pub(crate) methods_by_task: Vec<Vec<MethodId>>,
    pub(crate) features: Features,
}

impl Domain {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn features(&self) -> Features {
        self.features
    }

    pub fn ty(&self, id: TypeId) -> &ValueType {
        &self.types[id.0]
    }

    pub fn types(&self) -> &[ValueType] {
        &self.types
    }

    pub fn family(&self, id: FamilyId) -> &StateVarDecl {
        &self.families[id.0]
    }

    pub fn families(&self) -> &[StateVarDecl] {
        &self.families
    }

    pub fn family_by_name(&self, name: &str) -> Option<FamilyId> {
        self.families
            .iter()
            .position(|f| f.name == name)
            .map(FamilyId)
    }

    /// Number of ground state variables (V).
    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var(&self, slot: usize) -> &StateVar {
        &self.vars[slot]
    }

    /// Range of the ground variable at `slot`.
    pub fn var_range(&self, slot: usize) -> &ValueType {
        self.ty(self.families[self.vars[slot].family.0].range)
    }

    pub fn var_name(&self, slot: usize) -> String {
        let v = &self.vars[slot];
        let fam = &self.families[v.family.0];
        self.call_string(&fam.name, &v.args)
    }

    pub fn slot_by_name(&self, name: &str) -> Option<usize> {
        self.var_index.get(name).copied()
    }

    /// Slot of `family(args)`, or `None` if an argument is outside its type.
    pub fn slot(&self, family: FamilyId, args: &[Value]) -> Option<usize> {
        let fam = &self.families[family.0];
        if args.len() != fam.params.len() {
            return None;
        }
        let mut idx = fam.offset;
        for ((a, ty), stride) in args.iter().zip(&fam.params).zip(&fam.strides) {
            idx += self.types[ty.0].position(*a)? * stride;
        }
        Some(idx)
    }

    /// Largest range size over all state variables (N).
    pub fn max_range(&self) -> usize {
        (0..self.vars.len())
            .map(|s| self.var_range(s).len())
            .max()
            .unwrap_or(0)
    }

    pub fn rigid(&self, id: RigidId) -> &RigidFn {
        &self.rigids[id.0]
    }

    pub fn rigid_value(&self, id: RigidId, args: &[Value]) -> Option<Value> {
        let r = &self.rigids[id.0];
        if args.len() != r.params.len() {
            return None;
        }
        let mut idx = 0;
        for ((a, ty), stride) in args.iter().zip(&r.params).zip(&r.strides) {
            idx += self.types[ty.0].position(*a)? * stride;
        }
        Some(r.table[idx])
    }

    pub fn tasks(&self) -> &[TaskDecl] {
        &self.tasks
    }

    pub fn task_decl(&self, id: TaskId) -> &TaskDecl {
        &self.tasks[id.0]
    }

    pub fn task_by_name(&self, name: &str) -> Option<TaskId> {
        self.tasks.iter().position(|t| t.name == name).map(TaskId)
    }

    pub fn actions(&self) -> &[ActionSpec] {
        &self.actions
    }

    pub fn action(&self, id: ActionId) -> &ActionSpec {
        &self.actions[id.0]
    }

    pub fn action_by_name(&self, name: &str) -> Option<ActionId> {
        self.actions
            .iter()
            .position(|a| a.name == name)
            .map(ActionId)
    }

    pub fn methods(&self) -> &[MethodTemplate] {
        &self.methods
    }

    pub fn method(&self, id: MethodId) -> &MethodTemplate {
        &self.methods[id.0]
    }

    pub fn method_by_name(&self, name: &str) -> Option<MethodId> {
        self.methods
            .iter()
            .position(|m| m.name == name)
            .map(MethodId)
    }

    /// Templates refining `task`, in declaration order.
    pub fn methods_for(&self, task: TaskId) -> &[MethodId] {
        &self.methods_by_task[task.0]
    }

    pub fn sym(&self, name: &str) -> Option<Value> {
        self.symbols.lookup(name).map(Value::Sym)
    }

    pub fn display(&self, value: Value) -> ValueDisplay<'_> {
        ValueDisplay {
            value,
            symbols: &self.symbols,
        }
    }

    fn call_string(&self, name: &str, args: &[Value]) -> String {
        let mut s = String::with_capacity(name.len() + 8 * args.len());
        s.push_str(name);
        s.push('(');
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", self.display(*a));
        }
        s.push(')');
        s
    }

    pub fn fmt_task(&self, task: &Task) -> String {
        self.call_string(&self.tasks[task.id.0].name, &task.args)
    }

    pub fn fmt_method(&self, m: &MethodInstance) -> String {
        self.call_string(&self.methods[m.method.0].name, &m.binding)
    }

    pub fn fmt_action(&self, a: &GroundAction) -> String {
        self.call_string(&self.actions[a.action.0].name, &a.args)
    }

    pub fn value_to_json(&self, v: Value) -> Json {
        match v {
            Value::None => Json::Null,
            Value::Bool(b) => Json::Bool(b),
            Value::Int(i) => Json::from(i),
            Value::Sym(s) => Json::String(self.symbols.name(s).to_string()),
        }
    }

    pub fn value_from_json(&self, j: &Json) -> Option<Value> {
        match j {
            Json::Null => Some(Value::None),
            Json::Bool(b) => Some(Value::Bool(*b)),
            Json::Number(n) => n.as_i64().map(Value::Int),
            Json::String(s) => self.symbols.lookup(s).map(Value::Sym),
            _ => None,
        }
    }

    /// Stable 64-bit fingerprint of every declaration. Model files carry it so
    /// inference can refuse a model trained against different declarations.
    pub fn fingerprint(&self) -> u64 {
        let mut text = String::new();
        let _ = write!(text, "domain {};", self.name);
        for t in &self.types {
            let _ = write!(text, "type {}:", t.name);
            for v in t.values() {
                let _ = write!(text, "{},", self.display(*v));
            }
            text.push(';');
        }
        for slot in 0..self.vars.len() {
            let _ = write!(text, "var {};", self.var_name(slot));
        }
        for t in &self.tasks {
            let _ = write!(text, "task {}/{};", t.name, t.params.len());
        }
        for a in &self.actions {
            let _ = write!(text, "action {}/{};", a.name, a.params.len());
        }
        for m in &self.methods {
            let _ = write!(text, "method {} for {};", m.name, self.tasks[m.task.0].name);
        }
        crate::sim::rng::fnv1a(text.as_bytes())
    }
}
