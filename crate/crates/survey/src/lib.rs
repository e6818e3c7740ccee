//! Preference survey over substitutes from the gold data and two systems:
//! question generation, an HTTP collection service, response storage and
//! aggregation into per-task preference counts.

mod aggregate;
mod generate;
mod model;
pub mod server;
mod store;

pub use aggregate::{aggregate, Cell, SurveyAggregate, TaskRow};
pub use generate::{generate_survey, sentence_display, PLACEHOLDER};
pub use model::{
    PublicQuestion, Source, SurveyError, SurveyOption, SurveyQuestion, SurveyResponse, Task,
    DEFAULT_PER_TASK,
};
pub use store::ResponseStore;
