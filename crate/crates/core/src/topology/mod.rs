//! Charts, winding numbers, rotation index, interior angles and area with multiplicities.

pub mod area;
pub mod chart;
pub mod path;
pub mod winding;

pub use area::{area_grid_oracle, area_with_multiplicities, choose_base_point, AreaMethod, AreaResult};
pub use chart::{Chart, ChartKind, Point2};
pub use path::{Corner, PathTrace, Rule, Segment};
pub use winding::{crossing_number, winding_number};
