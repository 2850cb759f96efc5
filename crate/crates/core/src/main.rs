// SPDX-License-Identifier: Apache-2.0

use socarea::cli;

fn main() {
    if let Err(e) = cli::init_workers() {
        eprintln!("error: {e}");
        std::process::exit(cli::EXIT_INPUT);
    }
    std::process::exit(cli::main_with_args(std::env::args_os()));
}
