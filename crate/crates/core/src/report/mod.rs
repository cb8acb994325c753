//! Per-pair HTML reports: annotated screenshots, summary, expandable change
//! list and the common GUI hierarchy.

mod annotate;
mod html;
mod subtree;

pub use annotate::*;
pub use html::*;
pub use subtree::*;
