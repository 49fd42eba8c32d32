//! Packing indices of subsets of abelian groups.
//!
//! For a subset `A` of an abelian group `G`, the packing index counts how
//! many pairwise disjoint translates `b + A` fit into `G`, and the sharp
//! packing index is the least cardinal `k` such that no `k` of them do. This
//! crate works at finite scale: groups are finitely described direct sums of
//! `Z`, `Z_n`, countably many copies of `Z_n` and Prufer groups, infinite
//! groups are explored through finite windows, and every search is exact.
//!
//! The modules follow the pipeline:
//!
//! * [`group`], [`dsl`], [`window`]: arithmetic, text syntax, enumeration.
//! * [`diffpack`] and [`clique`]: difference sets and exact maximum
//!   packing families.
//! * [`bset`]: symmetric sets that bound the clique number of the
//!   compatibility graph.
//! * [`witness`]: the greedy construction of a set with a prescribed sharp
//!   index.
//! * [`obstruction`]: why indices 3 and 4 are impossible in the exceptional
//!   groups.
//! * [`pairmap`]: maps between 2-subsets that are separately injective and
//!   preserve intersections.
//!
//! ```
//! use packing::{parse_group, ElementSet, Window, max_packing_family};
//!
//! let z = parse_group("Z").unwrap();
//! let a = ElementSet::parse(&z, &["0", "1"]).unwrap();
//! let window = Window::new(&z, 4, 1).unwrap();
//! let family = max_packing_family(&a, &window).unwrap();
//! assert_eq!(family.shifts.to_strings(), ["0", "2", "-2", "4", "-4"]);
//! ```

pub mod bset;
pub mod clique;
pub mod diffpack;
pub mod dsl;
pub mod error;
pub mod group;
pub mod obstruction;
pub mod pairmap;
pub mod set;
pub mod window;
pub mod witness;

pub use bset::{build_bset, check_property_1, check_property_2, check_property_3, is_exceptional, BSet, Provenance};
pub use diffpack::{
    difference_set, max_clique_in_bset, max_packing_family, translates_disjoint, windowed_sharp_index, BClique, PackingFamily, SolverLimits,
};
pub use dsl::parse_group;
pub use error::{Error, Result};
pub use group::{Coord, Element, Factor, GroupSpec, Order};
pub use obstruction::{exhaustive_no_index_check, extend_pair_exponent3, extend_triple, ObstructionReport, SweepMode, TripleCase};
pub use pairmap::{common_point, search_pairmap, validate, PairMap};
pub use set::{ElementSet, SetFile};
pub use window::{enumerate, Bound, Window};
pub use witness::{build_witness, verify_witness, WitnessReport, WitnessSet};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/packing.md")]
    mod packing {}
    #[doc = include_str!("../../../book/src/bsets.md")]
    mod bsets {}
    #[doc = include_str!("../../../book/src/witness.md")]
    mod witness {}
    #[doc = include_str!("../../../book/src/obstructions.md")]
    mod obstructions {}
    #[doc = include_str!("../../../book/src/pairmaps.md")]
    mod pairmaps {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
