pub mod error;
pub mod forge;
pub mod genproj;
pub mod incidence;
pub mod instance;
pub mod linalg;
pub mod linespace;
pub mod poly;
pub mod rat;
pub mod surface;

pub use error::{Error, Result};
pub use poly::Poly;
pub use rat::Rat;
