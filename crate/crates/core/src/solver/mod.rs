//! Gluing and cusp equations and their numerical solution.

mod equations;
mod newton;
mod path;
mod shapes;

pub use equations::{residual, CuspTarget, EquationSystem, SolveTarget};
pub use newton::{newton_solve, newton_solve_with, numerical_rank, solve_system, SolveReport, SolverOptions};
pub use path::{solve_by_continuation, solve_path, solve_path_from, Continuation, PathPoint};
pub use shapes::ShapeAssignment;
