pub mod constraints;
pub mod corpus;
pub mod datatypes;
pub mod dlal_types;
pub mod dot;
pub mod fsyntax;
pub mod par;
pub mod param;
pub mod pipeline;
pub mod pseudo;
pub mod solver;
pub mod verify;
