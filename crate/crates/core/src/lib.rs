//! Exact computation of rational first integrals of planar polynomial
//! vector fields through reduction of singularities and configurations of
//! infinitely near points.

pub mod blowup;
pub mod exactalg;
pub mod infnear;
pub mod integrability;
pub mod linsys;
pub mod reduction;
pub mod vfield;

pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
