pub mod device;
pub mod dse;
pub mod energy;
pub mod guardband;
pub mod inject;
pub mod retention;
pub mod summary;
pub mod workload;
