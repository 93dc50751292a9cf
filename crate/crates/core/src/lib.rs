pub mod env;
pub mod error;
pub mod linalg;
pub mod pade;
pub mod spectral;
pub mod propagators;
pub mod eigen;
pub mod modes;
pub mod scenario;
