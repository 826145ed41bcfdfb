pub mod compare;
pub mod doublewell;
pub mod run;
pub mod sweep;
pub mod trajectories;
