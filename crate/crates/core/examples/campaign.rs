//! Runs the default differential campaign on the witness signature and
//! prints the report summary.
//!
//! ```text
//! cargo run --release --example campaign -- 7
//! ```

use std::time::Instant;

use lfhh::harness::{run_campaign, CampaignConfig};
use lfhh::witness;

fn main() {
    let size = std::env::args().nth(1).map_or(7, |s| s.parse().expect("size is a number"));
    let start = Instant::now();
    let report = run_campaign(&CampaignConfig::new(witness::signature(), size));
    print!("{}", report.to_text());
    println!("elapsed: {:?}", start.elapsed());
}
