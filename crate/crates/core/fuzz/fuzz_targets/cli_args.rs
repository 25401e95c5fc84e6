#![no_main]

use bcorlicz::cli::{resolve, Cli, Defaults};
use clap::Parser;
use libfuzzer_sys::fuzz_target;

// one argument per line; parsing and resolution only, nothing is executed
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("bcorlicz").chain(text.lines());
    if let Ok(cli) = Cli::try_parse_from(args) {
        let _ = resolve(cli, &Defaults::default());
    }
});
