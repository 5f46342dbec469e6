use std::collections::HashMap;

use thiserror::Error;

use super::domain::*;
use super::value::{SymbolTable, Value, ValueType};
use crate::interp::ast::{Expr, Instr, SetExpr, Var};

/// Domain validation failure; every issue names where it was found.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid domain: {}", .issues.join("; "))]
pub struct DomainError {
    pub issues: Vec<String>,
}

/// Probability mass tolerance for outcome distributions.
pub const PROB_TOLERANCE: f64 = 1e-9;

pub fn effect<const N: usize>(family: FamilyId, args: [Expr; N], value: impl Into<Expr>) -> Effect {
    Effect {
        family,
        args: args.into(),
        value: value.into(),
    }
}

struct RigidDraft {
    name: String,
    params: Vec<TypeId>,
    default: Value,
    entries: Vec<(Vec<Value>, Value)>,
}

/// Programmatic constructor for [`Domain`]s. Declare types, state variables,
/// rigid relations, tasks and actions first; methods refer to them by id.
pub struct DomainBuilder {
    name: String,
    symbols: SymbolTable,
    types: Vec<ValueType>,
    families: Vec<(String, Vec<TypeId>, TypeId)>,
    rigids: Vec<RigidDraft>,
    tasks: Vec<TaskDecl>,
    actions: Vec<ActionSpec>,
    methods: Vec<MethodTemplate>,
    features: Features,
}

impl DomainBuilder {
    pub fn new(name: &str) -> Self {
        DomainBuilder {
            name: name.to_string(),
            symbols: SymbolTable::default(),
            types: vec![ValueType::new(
                "bool",
                vec![Value::Bool(false), Value::Bool(true)],
            )],
            families: Vec::new(),
            rigids: Vec::new(),
            tasks: Vec::new(),
            actions: Vec::new(),
            methods: Vec::new(),
            features: Features::default(),
        }
    }

    pub fn sym(&mut self, name: &str) -> Value {
        Value::Sym(self.symbols.intern(name))
    }

    pub fn syms(&mut self, names: &[&str]) -> Vec<Value> {
        names.iter().map(|n| self.sym(n)).collect()
    }

    pub fn add_type(&mut self, name: &str, values: Vec<Value>) -> TypeId {
        self.types.push(ValueType::new(name, values));
        TypeId(self.types.len() - 1)
    }

    /// Declares an enumerated type and returns it with its values.
    pub fn enum_type(&mut self, name: &str, names: &[&str]) -> (TypeId, Vec<Value>) {
        let values = self.syms(names);
        (self.add_type(name, values.clone()), values)
    }

    pub fn int_type(&mut self, name: &str, lo: i64, hi: i64) -> TypeId {
        self.add_type(name, (lo..=hi).map(Value::Int).collect())
    }

    pub fn type_values(&self, ty: TypeId) -> Vec<Value> {
        self.types[ty.0].values().to_vec()
    }

    pub fn state_var(&mut self, name: &str, params: &[TypeId], range: TypeId) -> FamilyId {
        self.families
            .push((name.to_string(), params.to_vec(), range));
        FamilyId(self.families.len() - 1)
    }

    pub fn rigid(
        &mut self,
        name: &str,
        params: &[TypeId],
        default: Value,
        entries: Vec<(Vec<Value>, Value)>,
    ) -> RigidId {
        self.rigids.push(RigidDraft {
            name: name.to_string(),
            params: params.to_vec(),
            default,
            entries,
        });
        RigidId(self.rigids.len() - 1)
    }

    pub fn task(&mut self, name: &str, params: &[TypeId]) -> TaskId {
        self.push_task(name, params, false)
    }

    pub fn event(&mut self, name: &str, params: &[TypeId]) -> TaskId {
        self.push_task(name, params, true)
    }

    fn push_task(&mut self, name: &str, params: &[TypeId], event: bool) -> TaskId {
        self.tasks.push(TaskDecl {
            name: name.to_string(),
            params: params.to_vec(),
            event,
        });
        TaskId(self.tasks.len() - 1)
    }

    /// Starts an action. Its parameters are slots `Var(0)..Var(n-1)` in the
    /// precondition, cost and effect expressions.
    pub fn action(&mut self, name: &str, params: &[(&str, TypeId)]) -> ActionBuilder<'_> {
        ActionBuilder {
            spec: ActionSpec {
                name: name.to_string(),
                params: params
                    .iter()
                    .map(|(n, ty)| Param {
                        name: n.to_string(),
                        ty: *ty,
                        candidates: None,
                    })
                    .collect(),
                pre: None,
                outcomes: Vec::new(),
                duration: 1,
                emits: Vec::new(),
            },
            builder: self,
        }
    }

    /// Starts a method template for `task`. The first parameters must match
    /// the task's arguments; any further ones are free parameters.
    pub fn method(
        &mut self,
        name: &str,
        task: TaskId,
        params: &[(&str, TypeId)],
    ) -> MethodBuilder<'_> {
        MethodBuilder {
            template: MethodTemplate {
                name: name.to_string(),
                task,
                params: params
                    .iter()
                    .map(|(n, ty)| Param {
                        name: n.to_string(),
                        ty: *ty,
                        candidates: None,
                    })
                    .collect(),
                slot_names: params.iter().map(|(n, _)| n.to_string()).collect(),
                pre: Expr::Const(Value::Bool(true)),
                body: Vec::new(),
            },
            builder: self,
        }
    }

    pub fn features(&mut self, features: Features) {
        self.features = features;
    }

    pub fn finish(self) -> Result<Domain, DomainError> {
        let mut issues = Vec::new();
        let n_types = self.types.len();

        for t in &self.types {
            if t.is_empty() {
                issues.push(format!("type {}: empty range", t.name));
            }
            if t.has_duplicates() {
                issues.push(format!("type {}: duplicate values", t.name));
            }
        }

        let ty_ok = |ty: TypeId| ty.0 < n_types;

        let mut families = Vec::with_capacity(self.families.len());
        let mut vars = Vec::new();
        for (fi, (name, params, range)) in self.families.iter().enumerate() {
            if !params
                .iter()
                .chain(std::iter::once(range))
                .all(|t| ty_ok(*t))
            {
                issues.push(format!("state variable {name}: undeclared type"));
                continue;
            }
            let dims: Vec<usize> = params.iter().map(|t| self.types[t.0].len()).collect();
            let strides = strides(&dims);
            let count: usize = dims.iter().product();
            let offset = vars.len();
            for idx in 0..count {
                let args = params
                    .iter()
                    .zip(&dims)
                    .zip(&strides)
                    .map(|((t, d), s)| self.types[t.0].values()[(idx / s) % d])
                    .collect();
                vars.push(StateVar {
                    family: FamilyId(fi),
                    args,
                });
            }
            families.push(StateVarDecl {
                name: name.clone(),
                params: params.clone(),
                range: *range,
                offset,
                strides,
                count,
            });
        }

        let mut rigids = Vec::with_capacity(self.rigids.len());
        for r in &self.rigids {
            if !r.params.iter().all(|t| ty_ok(*t)) {
                issues.push(format!("rigid {}: undeclared type", r.name));
                continue;
            }
            let dims: Vec<usize> = r.params.iter().map(|t| self.types[t.0].len()).collect();
            let strides = strides(&dims);
            let mut table = vec![r.default; dims.iter().product()];
            for (args, v) in &r.entries {
                let idx = (args.len() == r.params.len())
                    .then(|| {
                        args.iter()
                            .zip(&r.params)
                            .zip(&strides)
                            .try_fold(0, |acc, ((a, t), s)| {
                                Some(acc + self.types[t.0].position(*a)? * s)
                            })
                    })
                    .flatten();
                match idx {
                    Some(i) => table[i] = *v,
                    None => issues.push(format!("rigid {}: entry outside declared types", r.name)),
                }
            }
            rigids.push(RigidFn {
                name: r.name.clone(),
                params: r.params.clone(),
                strides,
                table,
            });
        }

        for t in &self.tasks {
            if !t.params.iter().all(|ty| ty_ok(*ty)) {
                issues.push(format!("task {}: undeclared parameter type", t.name));
            }
        }

        let checker = Checker {
            n_types,
            families: &self.families,
            rigids: &self.rigids,
            tasks: &self.tasks,
            actions: &self.actions,
        };

        for a in &self.actions {
            let loc = format!("action {}", a.name);
            let n = a.params.len();
            if !a.params.iter().all(|p| ty_ok(p.ty)) {
                issues.push(format!("{loc}: undeclared parameter type"));
            }
            if let Some(pre) = &a.pre {
                checker.expr(pre, n, &format!("{loc} pre"), &mut issues);
            }
            if a.outcomes.is_empty() {
                issues.push(format!("{loc}: no outcomes"));
            }
            if a.duration == 0 {
                issues.push(format!("{loc}: duration must be at least one tick"));
            }
            let mut total = 0.0;
            for o in &a.outcomes {
                let oloc = format!("{loc} outcome {}", o.label);
                if !(0.0..=1.0).contains(&o.prob) {
                    issues.push(format!("{oloc}: probability {} outside [0,1]", o.prob));
                }
                total += o.prob;
                match &o.cost {
                    CostSpec::Fixed(c) => {
                        if !c.is_finite() || *c < 0.0 || (!o.failed && *c <= 0.0) {
                            issues.push(format!("{oloc}: cost {c} must be positive"));
                        }
                    }
                    CostSpec::Expr(e) => checker.expr(e, n, &oloc, &mut issues),
                }
                for eff in &o.effects {
                    match self.families.get(eff.family.0) {
                        None => issues.push(format!(
                            "{oloc}: effect on undeclared state variable #{}",
                            eff.family.0
                        )),
                        Some((fname, params, _)) if params.len() != eff.args.len() => {
                            issues.push(format!(
                                "{oloc}: effect on {fname} with {} args, expected {}",
                                eff.args.len(),
                                params.len()
                            ))
                        }
                        Some(_) => {}
                    }
                    for e in eff.args.iter().chain(std::iter::once(&eff.value)) {
                        checker.expr(e, n, &oloc, &mut issues);
                    }
                }
            }
            if !a.outcomes.is_empty() && (total - 1.0).abs() > PROB_TOLERANCE {
                issues.push(format!(
                    "{loc}: outcome probabilities sum to {total}, not 1"
                ));
            }
            for (t, args) in &a.emits {
                checker.call_task(*t, args.len(), &loc, &mut issues);
                for e in args {
                    checker.expr(e, n, &loc, &mut issues);
                }
            }
        }

        let mut methods_by_task = vec![Vec::new(); self.tasks.len()];
        for (mi, m) in self.methods.iter().enumerate() {
            let loc = format!("method {}", m.name);
            let Some(task) = self.tasks.get(m.task.0) else {
                issues.push(format!("{loc}: refines undeclared task #{}", m.task.0));
                continue;
            };
            methods_by_task[m.task.0].push(MethodId(mi));
            if m.params.len() < task.params.len() {
                issues.push(format!(
                    "{loc}: fewer parameters than task {} has arguments",
                    task.name
                ));
            } else if m.params.iter().zip(&task.params).any(|(p, t)| p.ty != *t) {
                issues.push(format!(
                    "{loc}: parameter types do not match task {}",
                    task.name
                ));
            }
            for p in &m.params {
                if !ty_ok(p.ty) {
                    issues.push(format!("{loc}: parameter {} has undeclared type", p.name));
                    continue;
                }
                if let Some(c) = &p.candidates {
                    if c.is_empty() {
                        issues.push(format!("{loc}: parameter {} has no candidates", p.name));
                    }
                    if c.iter().any(|v| !self.types[p.ty.0].contains(*v)) {
                        issues.push(format!(
                            "{loc}: parameter {} candidate outside its type",
                            p.name
                        ));
                    }
                }
            }
            let n = m.n_slots();
            checker.expr(&m.pre, n, &format!("{loc} pre"), &mut issues);
            if m.body.is_empty() {
                issues.push(format!("{loc}: empty body"));
            }
            checker.block(&m.body, n, &loc, &mut issues);
        }

        if !issues.is_empty() {
            return Err(DomainError { issues });
        }

        let mut var_index = HashMap::with_capacity(vars.len());
        let mut domain = Domain {
            name: self.name,
            symbols: self.symbols,
            types: self.types,
            families,
            vars,
            var_index: HashMap::new(),
            rigids,
            tasks: self.tasks,
            actions: self.actions,
            methods: self.methods,
            methods_by_task,
            features: self.features,
        };
        for slot in 0..domain.vars.len() {
            var_index.insert(domain.var_name(slot), slot);
        }
        domain.var_index = var_index;
        Ok(domain)
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

struct Checker<'a> {
    n_types: usize,
    families: &'a [(String, Vec<TypeId>, TypeId)],
    rigids: &'a [RigidDraft],
    tasks: &'a [TaskDecl],
    actions: &'a [ActionSpec],
}

impl Checker<'_> {
    fn slot(&self, v: usize, n_slots: usize, loc: &str, issues: &mut Vec<String>) {
        if v >= n_slots {
            issues.push(format!("{loc}: reference to undeclared local #{v}"));
        }
    }

    fn call_task(&self, t: TaskId, arity: usize, loc: &str, issues: &mut Vec<String>) {
        match self.tasks.get(t.0) {
            None => issues.push(format!("{loc}: undeclared task #{}", t.0)),
            Some(d) if d.params.len() != arity => issues.push(format!(
                "{loc}: task {} called with {arity} args, expected {}",
                d.name,
                d.params.len()
            )),
            _ => {}
        }
    }

    fn expr(&self, e: &Expr, n: usize, loc: &str, issues: &mut Vec<String>) {
        match e {
            Expr::Const(_) => {}
            Expr::Var(v) => self.slot(*v, n, loc, issues),
            Expr::Sv(f, args) => {
                match self.families.get(f.0) {
                    None => {
                        issues.push(format!("{loc}: read of undeclared state variable #{}", f.0))
                    }
                    Some((name, params, _)) if params.len() != args.len() => {
                        issues.push(format!("{loc}: {name} read with {} args", args.len()))
                    }
                    _ => {}
                }
                args.iter().for_each(|a| self.expr(a, n, loc, issues));
            }
            Expr::Rigid(r, args) => {
                match self.rigids.get(r.0) {
                    None => issues.push(format!("{loc}: undeclared rigid relation #{}", r.0)),
                    Some(d) if d.params.len() != args.len() => {
                        issues.push(format!("{loc}: {} read with {} args", d.name, args.len()))
                    }
                    _ => {}
                }
                args.iter().for_each(|a| self.expr(a, n, loc, issues));
            }
            Expr::Not(a) => self.expr(a, n, loc, issues),
            Expr::Bin(_, a, b) => {
                self.expr(a, n, loc, issues);
                self.expr(b, n, loc, issues);
            }
            Expr::If(c, a, b) => {
                self.expr(c, n, loc, issues);
                self.expr(a, n, loc, issues);
                self.expr(b, n, loc, issues);
            }
            Expr::ArgMin { var, over, score } | Expr::ArgMax { var, over, score } => {
                self.slot(*var, n, loc, issues);
                self.set(over, n, loc, issues);
                self.expr(score, n, loc, issues);
            }
            Expr::Member(a, s) => {
                self.expr(a, n, loc, issues);
                self.set(s, n, loc, issues);
            }
            Expr::Count(s) => self.set(s, n, loc, issues),
        }
    }

    fn set(&self, s: &SetExpr, n: usize, loc: &str, issues: &mut Vec<String>) {
        match s {
            SetExpr::All(t) => {
                if t.0 >= self.n_types {
                    issues.push(format!("{loc}: set over undeclared type"));
                }
            }
            SetExpr::List(items) => items.iter().for_each(|e| self.expr(e, n, loc, issues)),
            SetExpr::Filter { var, over, cond } => {
                self.slot(*var, n, loc, issues);
                self.set(over, n, loc, issues);
                self.expr(cond, n, loc, issues);
            }
        }
    }

    fn block(&self, block: &[Instr], n: usize, loc: &str, issues: &mut Vec<String>) {
        for i in block {
            match i {
                Instr::Action(a, args) => {
                    match self.actions.get(a.0) {
                        None => issues.push(format!("{loc}: undeclared action #{}", a.0)),
                        Some(d) if d.params.len() != args.len() => issues.push(format!(
                            "{loc}: action {} called with {} args, expected {}",
                            d.name,
                            args.len(),
                            d.params.len()
                        )),
                        _ => {}
                    }
                    args.iter().for_each(|e| self.expr(e, n, loc, issues));
                }
                Instr::Subtask(t, args) => {
                    self.call_task(*t, args.len(), loc, issues);
                    args.iter().for_each(|e| self.expr(e, n, loc, issues));
                }
                Instr::Assign(v, e) => {
                    self.slot(*v, n, loc, issues);
                    self.expr(e, n, loc, issues);
                }
                Instr::If(c, t, e) => {
                    self.expr(c, n, loc, issues);
                    self.block(t, n, loc, issues);
                    self.block(e, n, loc, issues);
                }
                Instr::While(c, body) => {
                    self.expr(c, n, loc, issues);
                    if body.is_empty() {
                        issues.push(format!("{loc}: while loop with empty body"));
                    }
                    self.block(body, n, loc, issues);
                }
                Instr::ForIn(v, s, body) => {
                    self.slot(*v, n, loc, issues);
                    self.set(s, n, loc, issues);
                    if body.is_empty() {
                        issues.push(format!("{loc}: for loop with empty body"));
                    }
                    self.block(body, n, loc, issues);
                }
                Instr::Fail => {}
            }
        }
    }
}

pub struct ActionBuilder<'a> {
    builder: &'a mut DomainBuilder,
    spec: ActionSpec,
}

impl ActionBuilder<'_> {
    pub fn pre(mut self, e: impl Into<Expr>) -> Self {
        self.spec.pre = Some(e.into());
        self
    }

    pub fn duration(mut self, ticks: u32) -> Self {
        self.spec.duration = ticks;
        self
    }

    pub fn outcome(mut self, label: &str, prob: f64, cost: f64, effects: Vec<Effect>) -> Self {
        self.spec.outcomes.push(Outcome {
            label: label.to_string(),
            prob,
            cost: CostSpec::Fixed(cost),
            effects,
            failed: false,
        });
        self
    }

    /// Success outcome whose cost is an integer expression over the parameters.
    pub fn outcome_with_cost(
        mut self,
        label: &str,
        prob: f64,
        cost: impl Into<Expr>,
        effects: Vec<Effect>,
    ) -> Self {
        self.spec.outcomes.push(Outcome {
            label: label.to_string(),
            prob,
            cost: CostSpec::Expr(cost.into()),
            effects,
            failed: false,
        });
        self
    }

    pub fn failure(mut self, label: &str, prob: f64, cost: f64) -> Self {
        self.spec.outcomes.push(Outcome {
            label: label.to_string(),
            prob,
            cost: CostSpec::Fixed(cost),
            effects: Vec::new(),
            failed: true,
        });
        self
    }

    pub fn emits<const N: usize>(mut self, task: TaskId, args: [Expr; N]) -> Self {
        self.spec.emits.push((task, args.into()));
        self
    }

    pub fn build(self) -> ActionId {
        self.builder.actions.push(self.spec);
        ActionId(self.builder.actions.len() - 1)
    }
}

pub struct MethodBuilder<'a> {
    builder: &'a mut DomainBuilder,
    template: MethodTemplate,
}

impl MethodBuilder<'_> {
    pub fn param(&self, i: usize) -> Var {
        Var(i)
    }

    /// Restricts free parameter `i` to `values`.
    pub fn candidates(mut self, i: usize, values: Vec<Value>) -> Self {
        if let Some(p) = self.template.params.get_mut(i) {
            p.candidates = Some(values);
        }
        self
    }

    pub fn local(&mut self, name: &str) -> Var {
        self.template.slot_names.push(name.to_string());
        Var(self.template.slot_names.len() - 1)
    }

    pub fn pre(mut self, e: impl Into<Expr>) -> Self {
        self.template.pre = e.into();
        self
    }

    pub fn body(mut self, body: Vec<Instr>) -> Self {
        self.template.body = body;
        self
    }

    pub fn build(self) -> MethodId {
        self.builder.methods.push(self.template);
        MethodId(self.builder.methods.len() - 1)
    }
}
