//! The three loop specs shipped with the crate.
//!
//! - `h2.json`: `{A1, A2} = h L`, `{L, A1} = A2`, `{A2, L} = A1`; grades 1, 1, 0.
//! - `l1.json`: `{S, N1} = h^2 M2`, `{M2, S} = N1`, `{N1, M2} = h S`; grades 1, 2, 3.
//! - `l2.json`: `{N1, N2} = h^2 S`, `{N2, S} = h N1`, `{S, N1} = h N2`; grades 3, 3, 2.

use std::sync::OnceLock;

use crate::format::load_loop_spec;
use crate::loop_alg::{LoopSpec, DEFAULT_MAX_LEVEL};

pub const H2_JSON: &str = include_str!("../specs/h2.json");
pub const L1_JSON: &str = include_str!("../specs/l1.json");
pub const L2_JSON: &str = include_str!("../specs/l2.json");

/// Bundled spec source by file name (`h2.json`, `l1.json`, `l2.json`).
pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "h2.json" => Some(H2_JSON),
        "l1.json" => Some(L1_JSON),
        "l2.json" => Some(L2_JSON),
        _ => None,
    }
}

fn load(src: &str) -> LoopSpec {
    load_loop_spec(src, DEFAULT_MAX_LEVEL).expect("bundled spec is valid")
}

pub fn h2_static() -> &'static LoopSpec {
    static SPEC: OnceLock<LoopSpec> = OnceLock::new();
    SPEC.get_or_init(|| load(H2_JSON))
}

pub fn l1_static() -> &'static LoopSpec {
    static SPEC: OnceLock<LoopSpec> = OnceLock::new();
    SPEC.get_or_init(|| load(L1_JSON))
}

pub fn l2_static() -> &'static LoopSpec {
    static SPEC: OnceLock<LoopSpec> = OnceLock::new();
    SPEC.get_or_init(|| load(L2_JSON))
}

pub fn h2() -> LoopSpec {
    h2_static().clone()
}

pub fn l1() -> LoopSpec {
    l1_static().clone()
}

pub fn l2() -> LoopSpec {
    l2_static().clone()
}
