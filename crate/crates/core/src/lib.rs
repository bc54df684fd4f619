pub mod bundled;
pub mod channel;
pub mod entropic;
pub mod error;
pub mod operator;
pub mod random;
pub mod region;
pub mod secrecy;
