//! Tree decompositions of bounded width and the isomorphism tests that use
//! them.

pub mod decomposition;
pub mod one_decomp;
pub mod respect;

pub use decomposition::{
    compute_tree_decomposition, validate_tree_decomposition, RootedTree, TdReport, TdViolation,
    TreeDecomposition,
};
pub use respect::iso_respecting_both;
pub use one_decomp::{
    is_valid_child_bag, iso_one_decomp, iso_one_decomp_with_stats, iso_tw, lex_subtree_order, SearchStats,
};
