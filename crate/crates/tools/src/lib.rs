//! Sweeps, command-line interface and HTTP play service built on the
//! `edgegame` solver.

pub mod cli;
pub mod io;
pub mod parallel;
pub mod service;
pub mod verify;
