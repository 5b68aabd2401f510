//! Seeded generators and brute-force reference checkers shared by the test
//! suites of the workspace.
//!
//! Everything here is deliberately simple: the checkers are quadratic
//! loops over the model so they can serve as independent oracles for the
//! optimized implementations in `procdsl`.

mod commands;
mod corrupt;
mod generate;
mod oracle;
mod seeded;

pub use commands::{random_command, random_milestone_edit};
pub use corrupt::{single_token_corruptions, Corruption};
pub use generate::{arbitrary_model, large_text, random_identifier, random_text, valid_model, Shape};
pub use oracle::{brute_layer_involvement, brute_milestone_io, brute_scope_plan, naive_diagnostics, OracleEntry};
pub use seeded::{seeded_base, seeded_violations};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Minimal valid file.
pub const MINIMAL: &str = "process name \"P\" version \"1\" timeline weeks 10 end";

/// A file shaped like the textbook example: one organizational layer whose
/// scopes are responsible for, contribute to, or are notified of milestones.
pub const REFERENCE: &str = r#"process
  name "Product development"
  version "1.0"
  timeline weeks 40
  layer departments description "Organizational units"
  layer committees description "Steering bodies"
  milestone Kickoff position 1
    result
      artifact Charter description "Signed charter"
    description "Project approved"
  milestone ConceptReady position 8 span 4 10
    result
      artifact Concept description "Product concept"
      artifact Budget description "Cost frame"
    description "Concept frozen"
  milestone Launch position 38
    description "Market launch"
  scope development layer departments description "R&D"
    responsibility resp asmilestone "ConceptReady"
    responsibility cont asmilestone "Launch"
    responsibility noti asmilestone "Kickoff"
  scope marketing layer departments description "Sales and marketing"
    responsibility resp asmilestone "Launch"
    responsibility cont asmilestone "ConceptReady"
  scope board layer committees description "Executive board"
    responsibility resp asmilestone "Kickoff"
    responsibility noti asmilestone "Launch"
end
"#;
