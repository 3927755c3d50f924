pub mod curves;
pub mod deploy;
pub mod evaluate;
pub mod generate;
pub mod planning;
pub mod sweep;
