pub mod check_curve;
pub mod crosstalk;
pub mod design;
pub mod jp;
pub mod protocol;
pub mod zz;
