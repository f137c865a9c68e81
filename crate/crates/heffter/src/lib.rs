//! λ-fold non-zero sum Heffter arrays over finite groups.
//!
//! The crate builds partially filled arrays whose entries cover `G \ J`
//! exactly λ times up to sign and whose rows and columns never sum to zero,
//! verifies them, and turns them into face-traced surface embeddings.

pub mod arrays;
pub mod cli;
pub mod constructors;
pub mod groups;
pub mod orderings;
pub mod skeletons;
pub mod tiles;
pub mod topology;

pub use arrays::{verify_array, Cell, Feasibility, PFArray, Params, VerifyReport};
pub use constructors::{construct, BuildError, BuildRequest, BuildResult, Construction};
pub use groups::{build_group, subgroup_of_order, Elem, FiniteGroup, GroupSpec, Subgroup};
