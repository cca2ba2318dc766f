//! Drives the batch front-end in-process: a small sweep written to a
//! temporary directory.

fn main() {
    let out = std::env::temp_dir().join("bogoflow-example-sweep");
    let code = bogoflow::cli::run([
        "bogoflow",
        "sweep",
        "--n",
        "128,1024",
        "--epsilon",
        "0.1,0.01",
        "--out",
        out.to_str().expect("utf-8 temp path"),
    ]);
    println!("exit code {code}");
    print!(
        "{}",
        std::fs::read_to_string(out.join("results.csv")).unwrap_or_default()
    );
}
