//! Bundled nine-bus test scenarios, embedded at compile time. Both carry a
//! three-machine reduction of the classic WSCC system with a bolted fault at
//! the bus 7 node, cleared by tripping the 5-7 line; they differ only in the
//! clearing time and horizon. `examples/build_wscc9.rs` regenerates the
//! underlying files from branch data.

use crate::error::Result;
use crate::scenario::{parse_scenario, LoadedScenario};

/// JSON text of the stable reference case (cleared at 0.08 s).
pub fn wscc9_json() -> &'static str {
    include_str!("../data/wscc9.json")
}

/// JSON text of the separating case (cleared at 0.25 s, past critical).
pub fn wscc9_sep_json() -> &'static str {
    include_str!("../data/wscc9_sep.json")
}

/// The stable reference case.
pub fn wscc9() -> Result<LoadedScenario> {
    parse_scenario(wscc9_json())
}

/// The separating case: the group of machines 1 and 2 liberates from
/// machine 0.
pub fn wscc9_sep() -> Result<LoadedScenario> {
    parse_scenario(wscc9_sep_json())
}
