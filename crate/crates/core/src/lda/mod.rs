//! Latent Dirichlet Allocation trained by collapsed Gibbs sampling.
//!
//! One pass is one full sweep over every token of the corpus. With several
//! threads the corpus is cut into fixed, contiguous document shards; each
//! shard sweeps against a snapshot of the topic-word counts taken at the
//! start of the pass, and the per-shard deltas are summed back afterwards.

mod format;
mod infer;
mod model;
mod sampler;
mod topics;

pub use format::{load_model, save_model, MODEL_MAGIC, MODEL_VERSION};
pub use infer::{infer_theta, perplexity};
pub use model::{init_model, LdaHyperparams, LdaModel};
pub use sampler::{gibbs_sweep, gibbs_sweep_sharded, train};
pub use topics::{save_topic_summaries, top_words, TopicSummary};

/// Model file contents: the sampler state plus what is needed to read it.
#[derive(Debug, Clone, PartialEq)]
pub struct SavedModel {
    pub model: LdaModel,
    pub lang: Option<String>,
    /// Token string for every word id.
    pub vocab: Vec<String>,
}
