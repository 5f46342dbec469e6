//! Every number the exploration domain and its generator use.

/// Name and grid coordinates; the first site is the base.
pub const SITES: [(&str, i64, i64); 6] = [
    ("base", 0, 0),
    ("s1", 1, 0),
    ("s2", 2, 0),
    ("s3", 0, 1),
    ("s4", 1, 1),
    ("s5", 2, 1),
];
pub const UGVS: [&str; 2] = ["ugv1", "ugv2"];
pub const UAVS: [&str; 1] = ["uav1"];
pub const EQUIPMENT: [&str; 3] = ["spectrometer", "thermal", "sampler"];
pub const MAX_CHARGE: i64 = 6;
/// Data units a robot stores before it must deposit.
pub const DATA_CAPACITY: i64 = 3;

pub const WORK_SUCCESS: f64 = 0.85;
pub const SURVEY_COST: f64 = 2.0;
pub const MONITOR_COST: f64 = 3.0;
pub const MONITOR_DURATION: u32 = 3;
pub const SCREEN_COST: f64 = 2.0;
pub const SAMPLE_COST: f64 = 2.0;
pub const CHARGE_COST: f64 = 2.0;
pub const DEPOSIT_COST: f64 = 1.0;
pub const EQUIP_COST: f64 = 1.0;
/// Extra cost of carrying a UAV on top of the distance driven.
pub const CARRY_EXTRA: i64 = 1;
pub const TRANSFER_COST: f64 = 1.0;
pub const SCARE_COST: f64 = 2.0;
pub const SCARE_SUCCESS: f64 = 0.7;
pub const WAIT_COST: f64 = 1.0;

// Problem generator.
pub const MAX_TASKS: usize = 3;
pub const ARRIVAL_SPREAD: u64 = 8;
pub const MIN_INITIAL_CHARGE: i64 = 2;
pub const HELD_EQUIPMENT_PROB: f64 = 0.3;
pub const ANIMAL_PROB: f64 = 0.6;
pub const ANIMAL_SPREAD: u64 = 12;
pub const ANIMAL_STAY: u64 = 8;
