pub mod algebra;
pub mod chain;
pub mod emit;
pub mod field;
pub mod fixtures;
pub mod linalg;
pub mod oracle;
pub mod vacuum;
pub mod verify;
