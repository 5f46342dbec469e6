//! Every number the search-and-rescue domain and its generator use.

/// Name and grid coordinates; the first zone is the base.
pub const ZONES: [(&str, i64, i64); 6] = [
    ("base", 0, 0),
    ("z1", 1, 0),
    ("z2", 2, 0),
    ("z3", 0, 1),
    ("z4", 1, 1),
    ("z5", 2, 1),
];
pub const UAVS: [&str; 2] = ["uav1", "uav2"];
pub const UGVS: [&str; 2] = ["ugv1", "ugv2"];
pub const CAMERAS: [&str; 2] = ["cam1", "cam2"];
/// Cameras mounted on each UAV.
pub const MOUNTS: [(&str, &str); 3] = [("uav1", "cam1"), ("uav1", "cam2"), ("uav2", "cam1")];

pub const DETECT_COST: f64 = 1.0;
pub const ALARM_COST: f64 = 1.0;
pub const DROP_COST: f64 = 1.0;
pub const LOAD_COST: f64 = 1.0;
pub const TAKEOFF_COST: f64 = 1.0;
pub const LAND_COST: f64 = 1.0;
/// Driving costs this many units per unit of distance; flying one.
pub const DRIVE_FACTOR: i64 = 2;
pub const DRIVE_SUCCESS: f64 = 0.9;
pub const FLY_SUCCESS: f64 = 0.95;
pub const REPLENISH_COST: f64 = 1.0;
pub const TRANSFER_COST: f64 = 1.0;
pub const CLEAR_COST: f64 = 3.0;
pub const CLEAR_SUCCESS: f64 = 0.7;
pub const MEDICINE_COST: f64 = 1.0;
pub const DISPATCH_COST: f64 = 0.5;
pub const WAIT_COST: f64 = 1.0;

// Problem generator.
pub const MAX_TASKS: usize = 3;
pub const ARRIVAL_SPREAD: u64 = 8;
pub const PERSON_PROB: f64 = 0.35;
pub const SUPPLY_PROB: f64 = 0.5;
pub const MEDICINE_PROB: f64 = 0.4;
pub const STORM_PROB: f64 = 0.5;
pub const STORM_SPREAD: u64 = 12;
pub const STORM_LENGTH: u64 = 6;
pub const DEBRIS_PROB: f64 = 0.5;
pub const DEBRIS_SPREAD: u64 = 12;
