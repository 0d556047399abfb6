//! Haar measure on cylinder sets of the unit ball of F^d and empirical checks
//! of the good-function inequality, nonplanarity and doubling.

mod cells;
mod doubling;
mod good;
mod planar;
mod polymap;

pub use cells::{cylinder_measure, eval_map_on_cells, BallSpec, CellDeg, CellGrid, CylinderSet, MapCells, CELL_BUDGET};
pub use doubling::{doubling_check, floor_ln, DoublingReport};
pub use good::{good_constants, good_from_degrees, lemma_closure_check, GoodLevel, GoodReport, LemmaInput, LemmaItem, LemmaReport};
pub use planar::{nonplanarity_check, rat_det, NonplanarReport};
pub use polymap::{MPoly, PolyMap};
