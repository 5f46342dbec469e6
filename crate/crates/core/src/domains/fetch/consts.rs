//! Every number the fetch domain and its problem generator use.

/// Name and grid coordinates; distance is Manhattan.
pub const LOCATIONS: [(&str, i64, i64); 6] = [
    ("l0", 0, 0),
    ("l1", 1, 0),
    ("l2", 2, 0),
    ("l3", 0, 1),
    ("l4", 1, 1),
    ("l5", 2, 1),
];
pub const BASE: &str = "l0";
pub const ROBOTS: [&str; 2] = ["r1", "r2"];
pub const OBJECTS: [&str; 3] = ["o1", "o2", "o3"];

pub const MAX_CHARGE: i64 = 4;

pub const MOVE_ON_TIME: f64 = 0.9;
pub const MOVE_DETOUR_COST: i64 = 2;
pub const MOVE_DURATION: u32 = 2;

pub const PERCEIVE_COST: f64 = 2.0;
pub const SCAN_COST: f64 = 1.0;
pub const SCAN_SUCCESS: f64 = 0.3;

pub const TAKE_COST: f64 = 1.0;
pub const PUT_COST: f64 = 1.0;

pub const CHARGE_COST: f64 = 2.0;
pub const CHARGE_SUCCESS: f64 = 0.95;
pub const CHARGER_HANDLING_COST: f64 = 1.0;

pub const ADDRESS_COST: f64 = 2.0;
pub const ADDRESS_SUCCESS: f64 = 0.85;

// Problem generator.
pub const MAX_TASKS: usize = 3;
pub const ARRIVAL_SPREAD: u64 = 8;
pub const MIN_INITIAL_CHARGE: i64 = 1;
pub const KNOWN_OBJECT_PROB: f64 = 0.25;
pub const CHARGER_AT_BASE_PROB: f64 = 0.5;
pub const EMERGENCY_PROB: f64 = 0.5;
pub const EMERGENCY_SPREAD: u64 = 15;
