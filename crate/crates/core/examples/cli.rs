//! The command-line verbs, driven in process. The `babylon` binary runs the
//! same code: `cargo run --release -- classify --p 3 --q 9`.
//!
//! `cargo run --release --example cli`

use babylon::cli::run;

fn main() {
    let invocations: &[&[&str]] = &[
        &["classify", "--p", "3", "--q", "9"],
        &["classify", "--p", "3", "--q", "9", "--format", "json"],
        &["solve", "--state", "<2,2;2;2>"],
        &["best", "--state", "<2,4;4;2>"],
        &["best", "--state", "<6,6;2;2>", "--after", "r@1>r@1", "--p", "8", "--q", "8"],
        &["verify", "theorem", "--max-n", "12"],
        &["solve", "--state", "<20,20;;>"],
        &["solve", "--state", "<2,2;2"],
    ];
    for args in invocations {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("babylon").chain(args.iter().copied());
        let status = run(argv, &mut std::io::empty(), &mut out, &mut err);
        println!("$ babylon {}   (exit {status})", args.join(" "));
        print!("{}{}", String::from_utf8_lossy(&out), String::from_utf8_lossy(&err));
    }
    let mut out = Vec::new();
    let mut input = "r@1>b@2\nr@1>r@1\nquit\n".as_bytes();
    run(["babylon", "play", "--p", "4", "--q", "4"], &mut input, &mut out, &mut std::io::sink());
    print!("$ babylon play --p 4 --q 4\n{}", String::from_utf8_lossy(&out));
}
