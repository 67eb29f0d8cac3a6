pub mod algebra;
pub mod autmap;
pub mod classify;
pub mod cli;
pub mod closure;
pub mod error;
pub mod oracle;
pub mod orbit;
pub mod scene;
pub mod stabilizer;
pub mod torus;
