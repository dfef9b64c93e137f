pub mod algebraization;
pub mod algebra;
pub mod consequence;
pub mod demo;
pub mod report;
pub mod representation;
pub mod syntax;
pub mod workbench;
pub mod standard;
