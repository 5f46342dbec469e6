use std::collections::HashMap;
use std::fmt;

/// Interned symbol, resolved through the owning domain's [`SymbolTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(pub u32);

/// A ground value: what state variables, parameters and locals hold.
///
/// `None` is a real value (e.g. the result of an `argmin` over an empty
/// set, or "no object held"), not an absence marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    None,
    Bool(bool),
    Int(i64),
    Sym(Sym),
}

impl Value {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_int(self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(i),
            _ => None,
        }
    }

    pub fn is_none(self) -> bool {
        matches!(self, Value::None)
    }

    pub(crate) fn write_canonical(self, out: &mut Vec<u8>) {
        match self {
            Value::None => out.push(0),
            Value::Bool(b) => {
                out.push(1);
                out.push(b as u8);
            }
            Value::Int(i) => {
                out.push(2);
                out.extend_from_slice(&i.to_le_bytes());
            }
            Value::Sym(Sym(s)) => {
                out.push(3);
                out.extend_from_slice(&s.to_le_bytes());
            }
        }
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Self {
        Value::Bool(b)
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl From<i32> for Value {
    fn from(i: i32) -> Self {
        Value::Int(i as i64)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    names: Vec<String>,
    index: HashMap<String, Sym>,
}

impl SymbolTable {
    pub fn intern(&mut self, name: &str) -> Sym {
        if let Some(&s) = self.index.get(name) {
            return s;
        }
        let s = Sym(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), s);
        s
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn name(&self, sym: Sym) -> &str {
        &self.names[sym.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Ordered finite set of values: parameter types and state-variable ranges.
#[derive(Clone, Debug)]
pub struct ValueType {
    pub name: String,
    values: Vec<Value>,
    pos: HashMap<Value, usize>,
}

impl ValueType {
    pub(crate) fn new(name: &str, values: Vec<Value>) -> Self {
        let mut pos = HashMap::with_capacity(values.len());
        for (i, v) in values.iter().enumerate() {
            pos.entry(*v).or_insert(i);
        }
        ValueType {
            name: name.to_string(),
            values,
            pos,
        }
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn position(&self, v: Value) -> Option<usize> {
        self.pos.get(&v).copied()
    }

    pub fn contains(&self, v: Value) -> bool {
        self.pos.contains_key(&v)
    }

    pub(crate) fn has_duplicates(&self) -> bool {
        self.pos.len() != self.values.len()
    }
}

/// Formats a value with symbol names resolved.
pub struct ValueDisplay<'a> {
    pub(crate) value: Value,
    pub(crate) symbols: &'a SymbolTable,
}

impl fmt::Display for ValueDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Value::None => f.write_str("none"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Sym(s) => f.write_str(self.symbols.name(s)),
        }
    }
}
