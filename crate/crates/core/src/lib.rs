//! Chain complexes over F2[U,V]/(UV), their standard representatives under
//! local equivalence, and the integer invariants read off them.

pub mod alexander;
pub mod algebra;
pub mod cli;
pub mod exec;
pub mod f2;
pub mod homology;
pub mod localequiv;
pub mod localmaps;
pub mod standard;

use thiserror::Error;

/// Any error a command can hit.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] algebra::AlgebraError),
    #[error(transparent)]
    Homology(#[from] homology::HomologyError),
    #[error(transparent)]
    Params(#[from] standard::ParamsError),
    #[error(transparent)]
    LocalMap(#[from] localmaps::LocalMapError),
    #[error(transparent)]
    LocalEquiv(#[from] localequiv::LocalEquivError),
    #[error(transparent)]
    Alexander(#[from] alexander::AlexanderError),
    #[error(transparent)]
    Recipe(#[from] alexander::RecipeError),
    #[error(transparent)]
    File(#[from] cli::FileError),
    #[error(transparent)]
    Expr(#[from] cli::ExprError),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
}
