pub mod database;
pub mod enumerate;
pub mod error;
pub mod invariant;
pub mod linalg;
pub mod named;
pub mod oracle;
pub mod permgroup;
pub mod relations;
pub mod simplify;
pub mod tensor;

pub use error::{InvarError, Result};

#[cfg(test)]
pub(crate) mod testutil {
    use std::sync::OnceLock;

    use crate::database::SyzygyDatabase;
    use crate::relations::BuildOptions;

    /// Database with non-duals up to degree 3 and duals up to degree 2.
    pub fn small_db() -> &'static SyzygyDatabase {
        static DB: OnceLock<SyzygyDatabase> = OnceLock::new();
        DB.get_or_init(|| {
            SyzygyDatabase::build(&BuildOptions {
                max_degree_i: 3,
                max_degree_d: 2,
                ..BuildOptions::default()
            })
            .unwrap()
        })
    }
}
