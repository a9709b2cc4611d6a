//! Weierstrass models, twists, 2-isogenies, local and global reduction data.

mod global;
mod kraus;
mod model;
mod points;
mod tate;

pub use global::{conductor, global_data, is_isomorphic, minimal_model, szpiro_check, GlobalData};
pub use kraus::{kraus_criterion, KrausOutcome};
pub use model::{AbModel, Invariants, WeierstrassModel};
pub use points::{
    add, full_torsion_structure, lift_x, neg, odd_division_polynomial, on_curve, order,
    points_of_order, three_torsion_points, torsion_structure,
    two_division_roots, two_torsion_points, Point, TorsionStructure,
};
pub use tate::{tate_local, Kodaira, LocalData, Reduction};
