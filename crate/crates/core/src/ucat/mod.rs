//! The 2-category side: string diagrams, bubbles, candidate actions and the certifier.

mod action;
mod bubbles;
mod certify;
mod diagram;

pub use action::{ActionError, CandidateAction, WeightEntry};
pub use bubbles::{
    bubble_degree, degree_zero_dots, solve_fake_bubbles, BubbleError, BubblePair, BubbleSeries, RealBubbles, Rotation,
};
pub use certify::{
    candidate_from_module, certify, CertReport, CheckItem, ConditionReport, GroundTruthError, Status, Summand,
};
pub use diagram::{
    one_mor_weight, parse_diagram, strand_string, word_string, CapKind, CupKind, DiagramError, Generator, Layer,
    OneMorWord, Orient, Strand, StringDiagram,
};

#[cfg(test)]
mod tests;
