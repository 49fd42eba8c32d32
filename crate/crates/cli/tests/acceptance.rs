//! One line per acceptance criterion; exits nonzero if any fails.

use packing_cli::demo;

fn main() {
    let criteria = [
        demo::criterion_1 as fn() -> demo::Criterion,
        demo::criterion_2,
        demo::criterion_3,
        demo::criterion_4,
        demo::criterion_5,
        demo::criterion_6,
        demo::criterion_7,
    ];
    let mut failed = 0;
    for run in criteria {
        let c = run();
        println!("{}", c.line());
        if !c.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
