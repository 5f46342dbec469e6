use serde_json::{Map, Value as Json};
use thiserror::Error;

use super::domain::{Domain, FamilyId};
use super::value::Value;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("unknown state variable {0}")]
    UnknownVar(String),
    #[error("state variable {var} has no value")]
    Missing { var: String },
    #[error("value {value} outside the range of {var}")]
    OutOfRange { var: String, value: String },
    #[error("state must be a JSON object")]
    NotAnObject,
}

/// Total assignment of every ground state variable, indexed by slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    values: Vec<Value>,
}

impl State {
    /// Every variable at the first value of its range.
    pub fn initial(dom: &Domain) -> Self {
        State {
            values: (0..dom.n_vars())
                .map(|s| dom.var_range(s).values()[0])
                .collect(),
        }
    }

    pub fn from_values(dom: &Domain, values: Vec<Value>) -> Result<Self, StateError> {
        if values.len() != dom.n_vars() {
            let var = dom.var_name(values.len().min(dom.n_vars().saturating_sub(1)));
            return Err(StateError::Missing { var });
        }
        for (slot, v) in values.iter().enumerate() {
            if !dom.var_range(slot).contains(*v) {
                return Err(StateError::OutOfRange {
                    var: dom.var_name(slot),
                    value: dom.display(*v).to_string(),
                });
            }
        }
        Ok(State { values })
    }

    pub fn get(&self, slot: usize) -> Value {
        self.values[slot]
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// Range-checked write.
    pub fn set(&mut self, dom: &Domain, slot: usize, v: Value) -> Result<(), StateError> {
        if !dom.var_range(slot).contains(v) {
            return Err(StateError::OutOfRange {
                var: dom.var_name(slot),
                value: dom.display(v).to_string(),
            });
        }
        self.values[slot] = v;
        Ok(())
    }

    pub fn get_var(&self, dom: &Domain, family: FamilyId, args: &[Value]) -> Option<Value> {
        dom.slot(family, args).map(|s| self.values[s])
    }

    pub fn set_var(
        &mut self,
        dom: &Domain,
        family: FamilyId,
        args: &[Value],
        v: Value,
    ) -> Result<(), StateError> {
        let slot = dom.slot(family, args).ok_or_else(|| {
            StateError::UnknownVar(format!(
                "{}({})",
                dom.family(family).name,
                args.iter()
                    .map(|a| dom.display(*a).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ))
        })?;
        self.set(dom, slot, v)
    }

    pub(crate) fn write_canonical(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.values.len() as u32).to_le_bytes());
        for v in &self.values {
            v.write_canonical(out);
        }
    }

    /// JSON object keyed by ground variable name (keys sorted).
    pub fn to_json(&self, dom: &Domain) -> Json {
        let mut m = Map::new();
        for (slot, v) in self.values.iter().enumerate() {
            m.insert(dom.var_name(slot), dom.value_to_json(*v));
        }
        Json::Object(m)
    }

    /// Parses a state object. Every variable must be present.
    pub fn from_json(dom: &Domain, j: &Json) -> Result<Self, StateError> {
        let obj = j.as_object().ok_or(StateError::NotAnObject)?;
        let mut values = vec![None; dom.n_vars()];
        for (k, v) in obj {
            let slot = dom
                .slot_by_name(k)
                .ok_or_else(|| StateError::UnknownVar(k.clone()))?;
            let val = dom
                .value_from_json(v)
                .ok_or_else(|| StateError::OutOfRange {
                    var: k.clone(),
                    value: v.to_string(),
                })?;
            values[slot] = Some(val);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(slot, v)| {
                v.ok_or_else(|| StateError::Missing {
                    var: dom.var_name(slot),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_values(dom, values)
    }
}
