//! Library half of the `bometro` command: artifact writing, SVG views and
//! the self-test suite.

pub mod output;
pub mod selftest;
pub mod svg;
