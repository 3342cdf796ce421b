//! liesym: exact-arithmetic structures on low-dimensional Lie algebras.
//!
//! The crate decides existence of invariant contact, symplectic and exact
//! symplectic structures on Lie algebras with rational (optionally
//! parametric) structure constants, performs the suspension constructions
//! relating them across dimensions, and symbolically recovers elliptic
//! Monge-Ampere equations from canonical frames on nilpotent algebras.
//!
//! Everything is exact: coefficients are arbitrary-precision rationals,
//! nonvanishing is decided by full symbolic expansion, and witnesses come
//! from deterministic bounded grid searches.

pub mod corpus;
pub mod error;
pub mod exterior;
pub mod liealg;
pub mod matrix;
pub mod monge;
pub mod parse;
pub mod poly;
pub mod report;
pub mod scalar;
pub mod structures;
pub mod suspension;

pub use error::{Error, Result};
pub use exterior::KForm;
pub use liealg::LieAlgebra;
pub use poly::Poly;
pub use report::Report;
pub use scalar::Rat;

#[cfg(test)]
mod concurrency {
    //! All values are immutable after construction and operations are pure,
    //! so everything can be shared and moved across threads.

    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<crate::Poly>();
        assert_send_sync::<crate::KForm>();
        assert_send_sync::<crate::LieAlgebra>();
        assert_send_sync::<crate::Report>();
        assert_send_sync::<crate::matrix::Mat>();
        assert_send_sync::<crate::monge::PolyForm>();
        assert_send_sync::<crate::suspension::Derivation>();
        assert_send_sync::<crate::parse::AlgebraFile>();
    }
}
