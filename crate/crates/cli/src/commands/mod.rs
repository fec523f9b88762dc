pub mod analyze;
pub mod compare;
pub mod correlate;
pub mod freq;
pub mod meta;
