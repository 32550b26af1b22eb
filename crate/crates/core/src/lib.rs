//! Tile assembly workbench: an aTAM engine at temperature 2, a checker for
//! locally consistent systems, and a block-level simulator that runs any such
//! system through a lookup table carried on supertile edges.

pub mod atam;
pub mod consistency;
pub mod corpus;
pub mod encode;
pub mod explore;
pub mod format;
pub mod lookup;
pub mod macrosim;
pub mod svg;
pub mod verdict;
pub mod verify;
