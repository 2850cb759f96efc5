// SPDX-License-Identifier: Apache-2.0

//! Loads a reference table and prints ratio columns the way published
//! comparison tables round them.

use socarea::io::load_reference;
use socarea::report::{format_percent, RatioColumns};

const TABLE: &str = r#"{
  "benchmarks": [
    {"name": "video", "area": 11301, "comm": 19858, "bandwidth": 4060},
    {"name": "audio", "area": 5120, "comm": 880, "bandwidth": 310}
  ]
}"#;

fn main() -> socarea::Result<()> {
    let table = load_reference(TABLE)?;
    let measured = [
        ("video", 10178.0, 19871.0, 4120.0),
        ("audio", 5240.0, 640.0, 690.0),
    ];
    println!("{:<6} {:>8} {:>8} {:>8}", "name", "area", "comm", "bw");
    for (name, area, comm, bw) in measured {
        let entry = table.get(name).expect("entry exists");
        let [a, c, b] = RatioColumns::against(area, comm, bw, entry).formatted();
        println!("{name:<6} {a:>8} {c:>8} {b:>8}");
    }
    println!(
        "precision steps: {} {} {}",
        format_percent(0.0123),
        format_percent(-0.456),
        format_percent(2.3)
    );
    Ok(())
}
