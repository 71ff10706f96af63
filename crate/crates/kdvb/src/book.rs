//! Compiles and runs the code blocks of the user guide as doc-tests.
//!
//! mdBook itself cannot test snippets that use external crates, so each
//! chapter is attached here as documentation of an empty module; `cargo test
//! --doc` then keeps the book honest.

macro_rules! chapter {
    ($name:ident, $path:literal) => {
        #[doc = include_str!($path)]
        mod $name {}
    };
}

chapter!(introduction, "../../../book/src/introduction.md");
chapter!(splines, "../../../book/src/splines.md");
chapter!(collocation, "../../../book/src/collocation.md");
chapter!(time_stepping, "../../../book/src/time-stepping.md");
chapter!(experiments, "../../../book/src/experiments.md");
chapter!(diagnostics, "../../../book/src/diagnostics.md");
chapter!(cli, "../../../book/src/cli.md");
