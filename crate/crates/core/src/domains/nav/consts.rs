//! Every number the nav domain and its problem generator use.

pub const ROOMS: [&str; 5] = ["R0", "R1", "R2", "R3", "R4"];
/// Door name and the two rooms it joins; the rooms form a tree.
pub const DOORS: [(&str, usize, usize); 4] =
    [("d1", 0, 1), ("d2", 1, 2), ("d3", 2, 3), ("d4", 1, 4)];
pub const ROBOTS: [&str; 4] = ["rb1", "rb2", "rb3", "rb4"];
pub const OBJECTS: [&str; 3] = ["o1", "o2", "o3"];

pub const MOVE_COST: f64 = 1.0;
pub const OPEN_COST: f64 = 1.0;
pub const OPEN_SUCCESS: f64 = 0.9;
pub const CLOSE_COST: f64 = 1.0;
pub const HOLD_COST: f64 = 1.0;
pub const RELEASE_COST: f64 = 0.5;
pub const PICKUP_COST: f64 = 1.0;
pub const PUTDOWN_COST: f64 = 1.0;
pub const SENSE_COST: f64 = 1.0;
pub const WAIT_COST: f64 = 1.0;
pub const SIGNAL_COST: f64 = 0.5;

// Problem generator.
pub const MAX_TASKS: usize = 3;
pub const ARRIVAL_SPREAD: u64 = 6;
pub const SPRING_PROB: f64 = 0.5;
