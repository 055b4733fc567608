//! Front end for `cqs-core`: JSON analysis documents, SVG fan figures and
//! the cross-formula sweep, plus the `cqs` command line built on them.

pub mod app;
pub mod document;
pub mod svg;
pub mod sweep;
