//! File formats and result writers.

mod results;
mod scenario;
mod topology_file;

pub use results::{
    emit_placement, emit_results, parse_json_reports, write_output, Format, PLACEMENT_CSV_HEADER, REPORT_CSV_HEADER,
};
pub use scenario::{
    CompareSection, CvQkdSection, FiberSection, GridSection, LoadedScenario, PlacementSection, PlannerSection,
    QkdPattern, QkdSection, QuantumSection, Scenario, SweepSection,
};
pub use topology_file::{parse_topology, serialize_topology, DEFAULT_TOPOLOGY};
