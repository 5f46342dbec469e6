use std::fmt;

/// One observable step of an acting run. Stacks are numbered by arrival.
#[derive(Clone, Debug, PartialEq)]
pub enum TraceEvent {
    Arrive {
        tick: u64,
        root: usize,
        task: String,
        event: bool,
    },
    Select {
        tick: u64,
        root: usize,
        task: String,
        method: String,
    },
    NoMethod {
        tick: u64,
        root: usize,
        task: String,
    },
    Start {
        tick: u64,
        root: usize,
        action: String,
    },
    Done {
        tick: u64,
        root: usize,
        action: String,
        cost: f64,
    },
    ActionFailed {
        tick: u64,
        root: usize,
        action: String,
    },
    Push {
        tick: u64,
        root: usize,
        task: String,
    },
    Assign {
        tick: u64,
        root: usize,
        var: String,
        value: String,
    },
    FailStep {
        tick: u64,
        root: usize,
    },
    Retry {
        tick: u64,
        root: usize,
        method: String,
    },
    Exogenous {
        tick: u64,
        var: String,
        value: String,
    },
    Succeed {
        tick: u64,
        root: usize,
        cost: f64,
    },
    Fail {
        tick: u64,
        root: usize,
        cost: f64,
    },
    Abort {
        tick: u64,
        root: usize,
    },
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TraceEvent::*;
        match self {
            Arrive {
                tick,
                root,
                task,
                event,
            } => {
                let kind = if *event { "event" } else { "task" };
                write!(f, "{tick} #{root} arrive {kind} {task}")
            }
            Select {
                tick,
                root,
                task,
                method,
            } => write!(f, "{tick} #{root} select {task} -> {method}"),
            NoMethod { tick, root, task } => write!(f, "{tick} #{root} no-method {task}"),
            Start { tick, root, action } => write!(f, "{tick} #{root} start {action}"),
            Done {
                tick,
                root,
                action,
                cost,
            } => write!(f, "{tick} #{root} done {action} cost={cost}"),
            ActionFailed { tick, root, action } => write!(f, "{tick} #{root} failed {action}"),
            Push { tick, root, task } => write!(f, "{tick} #{root} push {task}"),
            Assign {
                tick,
                root,
                var,
                value,
            } => write!(f, "{tick} #{root} assign {var}={value}"),
            FailStep { tick, root } => write!(f, "{tick} #{root} fail-step"),
            Retry { tick, root, method } => write!(f, "{tick} #{root} retry {method}"),
            Exogenous { tick, var, value } => write!(f, "{tick} exogenous {var}={value}"),
            Succeed { tick, root, cost } => write!(f, "{tick} #{root} succeed cost={cost}"),
            Fail { tick, root, cost } => write!(f, "{tick} #{root} fail cost={cost}"),
            Abort { tick, root } => write!(f, "{tick} #{root} abort"),
        }
    }
}
