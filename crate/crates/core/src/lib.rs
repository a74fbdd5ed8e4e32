pub mod arma;
pub mod contacts;
pub mod experiment;
pub mod protocols;
pub mod sim;
pub mod types;
