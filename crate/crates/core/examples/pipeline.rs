//! Runs the `pipeline` command on a freshly generated dataset and lists the
//! report files.

fn main() {
    let dir = std::env::temp_dir().join("steelcast-example");
    let csv = dir.join("synthetic.csv");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let out = dir.join("reports");
    let mut stdout = std::io::stdout();
    let mut stderr = std::io::stderr();
    let generate = ["steelcast", "generate", csv.to_str().unwrap()];
    assert_eq!(steelcast::cli::run(generate, &mut stdout, &mut stderr), 0);
    let pipeline = [
        "steelcast",
        "pipeline",
        csv.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    std::process::exit(steelcast::cli::run(pipeline, &mut stdout, &mut stderr));
}
