//! One line per acceptance criterion; exits non-zero if any fails.

use pinchlab::verify::{run_criterion, VerifyOptions, CRITERIA};

fn main() {
    let opts = VerifyOptions::default();
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let o = run_criterion(id, &opts);
        println!("{}", o.line());
        if !o.passed {
            println!("    detail: {}", pinchlab::cli::to_json_string(&o.detail));
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {CRITERIA} criteria pass");
    } else {
        println!("acceptance: {} of {CRITERIA} criteria fail: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
