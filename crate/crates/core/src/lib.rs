pub mod exactalg;
pub mod qseries;
pub mod census;
pub mod asympt;
pub mod oracle;
pub mod clique;
pub mod verify;
