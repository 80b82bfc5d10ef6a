pub mod exactalg;
pub mod group;
pub mod classify;
pub mod realstruct;
pub mod reallocus;
pub mod moduli;
pub mod selftest;
