//! Compiles the guide's code samples as doc-tests.

#[doc = include_str!("../../../book/src/ch01-roots.md")]
pub mod ch01_roots {}

#[doc = include_str!("../../../book/src/ch02-classes.md")]
pub mod ch02_classes {}

#[doc = include_str!("../../../book/src/ch03-correspondence.md")]
pub mod ch03_correspondence {}

#[doc = include_str!("../../../book/src/ch04-density.md")]
pub mod ch04_density {}

#[doc = include_str!("../../../book/src/ch05-statistics.md")]
pub mod ch05_statistics {}

#[doc = include_str!("../../../book/src/ch06-cli.md")]
pub mod ch06_cli {}
