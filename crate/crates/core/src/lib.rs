pub mod baseline;
pub mod cli;
pub mod clustering;
pub mod config;
pub mod corpus;
pub mod output;
pub mod preprocess;
pub mod report;
pub mod scoring;
pub mod sieves;
pub mod type_scoring;
pub mod vectors;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
    #[doc = include_str!("../../../book/src/types.md")]
    mod types {}
    #[doc = include_str!("../../../book/src/sieves.md")]
    mod sieves {}
    #[doc = include_str!("../../../book/src/clustering.md")]
    mod clustering {}
    #[doc = include_str!("../../../book/src/metrics.md")]
    mod metrics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
