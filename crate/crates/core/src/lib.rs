pub mod avm;
pub mod chart;
pub mod diagnose;
pub mod grammar;
pub mod repair;
pub mod signs;
