//! The two base grids and the layer lattice of function classes over them.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Base grid of the quantum space.
///
/// `TildeX` carries the grid `x_m = q^{-2m}` for `m >= 0`; `TildeXi` carries
/// the two-sided grid `x_n = q^{2n}` for integer `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpaceBase {
    TildeX,
    TildeXi,
}

impl SpaceBase {
    /// The grid point with the given index, as an exact scalar.
    pub fn grid_point(self, idx: i64) -> Result<Scalar> {
        match self {
            SpaceBase::TildeX => {
                if idx < 0 {
                    return Err(Error::OffGrid(format!(
                        "index {} is negative on the one-sided grid",
                        idx
                    )));
                }
                Ok(Scalar::q_pow(-2 * idx))
            }
            SpaceBase::TildeXi => Ok(Scalar::q_pow(2 * idx)),
        }
    }

    /// `x_idx^p` for a Laurent power `p`.
    pub fn grid_power(self, idx: i64, p: i64) -> Scalar {
        match self {
            SpaceBase::TildeX => Scalar::q_pow(-2 * idx * p),
            SpaceBase::TildeXi => Scalar::q_pow(2 * idx * p),
        }
    }

    /// `true` when `idx` indexes a grid point.
    pub fn on_grid(self, idx: i64) -> bool {
        match self {
            SpaceBase::TildeX => idx >= 0,
            SpaceBase::TildeXi => true,
        }
    }

    /// Weight of the invariant sum at a grid point: `x_idx` itself.
    pub fn integral_weight(self, idx: i64) -> Scalar {
        self.grid_power(idx, 1)
    }

    pub fn name(self) -> &'static str {
        match self {
            SpaceBase::TildeX => "x",
            SpaceBase::TildeXi => "xi",
        }
    }
}

/// Function class an element is declared to live in.
///
/// `Polynomial` elements have coefficient functions polynomial in the radial
/// coordinate; `Finite` ones are finitely supported point masses; a
/// `Distribution` mixes Laurent tails with point masses and only multiplies
/// against finitely supported factors; `Localized` elements extend the
/// polynomial algebra by inverse powers of the radial coordinate and the
/// off-diagonal generators, and multiply freely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layer {
    Polynomial,
    Finite,
    Distribution,
    Localized,
}

impl Layer {
    fn rank(self) -> u8 {
        match self {
            Layer::Polynomial | Layer::Finite => 0,
            Layer::Distribution => 1,
            Layer::Localized => 2,
        }
    }

    /// Smallest layer containing both summands.
    pub fn join_add(self, o: Layer) -> Layer {
        if self == o {
            return self;
        }
        if self.rank() == 0 && o.rank() == 0 {
            // Polynomial + Finite leaves both classes.
            return Layer::Distribution;
        }
        if self.rank() >= o.rank() {
            self
        } else {
            o
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Layer::Polynomial => "polynomial",
            Layer::Finite => "finite",
            Layer::Distribution => "distribution",
            Layer::Localized => "localized",
        }
    }
}

/// A base grid together with a declared layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Space {
    pub base: SpaceBase,
    pub layer: Layer,
}

impl Space {
    pub fn new(base: SpaceBase, layer: Layer) -> Space {
        Space { base, layer }
    }

    pub fn polynomial(base: SpaceBase) -> Space {
        Space::new(base, Layer::Polynomial)
    }

    pub fn finite(base: SpaceBase) -> Space {
        Space::new(base, Layer::Finite)
    }

    pub fn distribution(base: SpaceBase) -> Space {
        Space::new(base, Layer::Distribution)
    }

    pub fn localized(base: SpaceBase) -> Space {
        Space::new(base, Layer::Localized)
    }

    pub fn same_base(self, o: Space) -> Result<()> {
        if self.base != o.base {
            return Err(Error::SpaceMismatch(format!(
                "'{}' vs '{}'",
                self.base.name(),
                o.base.name()
            )));
        }
        Ok(())
    }
}
