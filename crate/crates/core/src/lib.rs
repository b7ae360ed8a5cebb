pub mod algebra;
pub mod contactcheck;
pub mod embedder;
pub mod handle5;
pub mod lefschetz;
pub mod manifest;
pub mod mcg;
pub mod obstruct;
pub mod openbook;
pub mod spin;
pub mod suite;
pub mod surface;
