//! Driving the command-line front end in-process: a configured noisy run and
//! the exit-code contract.

use ion_sculpt::cli::run;

fn main() {
    let out = std::env::temp_dir().join("ion_sculpt_cli_example");
    let out = out.to_str().unwrap();
    let env = vec![("ION_SCULPT_EMIT_WIGNER".to_string(), "false".to_string())];

    let code = run(
        [
            "ion-sculpt",
            "sculpt-noisy",
            "--optimize",
            "--budget",
            "2000",
            "--seed",
            "3",
            "--out",
            out,
        ],
        env.clone(),
    );
    println!("sculpt-noisy --optimize exited with {code}; artifacts in {out}");

    let code = run(
        ["ion-sculpt", "table1", "--nbar", "0.25", "--check", "--out", out],
        env.clone(),
    );
    println!("table1 --nbar 0.25 --check exited with {code}");

    let bad = vec![("ION_SCULPT_TARGET".to_string(), "[0, 0]".to_string())];
    let code = run(["ion-sculpt", "sculpt-ideal", "--out", out], bad);
    println!("all-zero target exited with {code}");
}
