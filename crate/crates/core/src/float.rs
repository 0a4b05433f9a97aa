//! Scalar abstraction for the model.
//!
//! Every formula in this crate is plain IEEE arithmetic, so the whole model
//! is generic over the working precision. [`Float`] bundles the numeric
//! traits the formulas need; it is implemented for `f32` and `f64`.

use num_traits::{Float as NumFloat, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Scalar type the model is generic over.
///
/// Mostly `num_traits::Float` plus constants, literal conversion, and the
/// formatting/threading bounds the sweep and report machinery relies on.
pub trait Float:
    NumFloat
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + std::fmt::Debug
    + std::fmt::Display
    + std::fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    ///
    /// Panics only if the conversion is unrepresentable, which cannot happen
    /// for the in-range literals this crate uses.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("literal must be representable")
    }
}

impl Float for f32 {}
impl Float for f64 {}
