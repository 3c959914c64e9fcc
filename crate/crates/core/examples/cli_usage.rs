//! Drives the command-line front end in-process and reads back its JSON.

use rootlab::cli::{run, OutputEnvelope};

fn main() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(["rootlab", "expected-count", "--family", "kostlan", "--degree", "100", "--a", "-1", "--b", "1"], &mut out, &mut err);
    let env: OutputEnvelope = serde_json::from_slice(&out).expect("JSON envelope");
    println!("exit {code}: {} -> {}", env.command, env.results["expected_count"]);

    out.clear();
    run(["rootlab", "constant-k"], &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));

    out.clear();
    err.clear();
    let code = run(["rootlab", "kpoint", "--points", "0,0", "--family", "weyl"], &mut out, &mut err);
    print!("exit {code}: {}", String::from_utf8_lossy(&err));
}
