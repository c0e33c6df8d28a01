use assert_cmd::Command;

fn gcdims() -> Command {
    Command::cargo_bin("gcdims").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = gcdims().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn test_euler_odd() {
    let out = stdout(&["euler", "--flavor", "odd", "--max-b", "6"]);
    assert!(out.starts_with("flavor,connected,b,chi\n"));
    assert!(out.lines().any(|l| l == "odd,false,6,14"));
    assert_eq!(out.lines().count(), 7);
}

#[test]
fn test_dims_empty_window() {
    assert_eq!(stdout(&["dims", "--flavor", "even*", "--max-b", "0"]), "flavor,connected,v,e,dim\neven*,false,0,0,1\n");
}

#[test]
fn test_connected_euler_and_dims() {
    let out = stdout(&["connected", "--flavor", "odd", "--max-b", "3"]);
    assert!(out.lines().any(|l| l == "odd,true,1,1"));
    let out = stdout(&["connected", "--flavor", "odd*", "--max-b", "2", "--dims", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    let theta_free = rows.as_array().unwrap().iter().find(|r| r["v"] == 4 && r["e"] == 6).unwrap();
    assert_eq!(theta_free["dim"], 1);
    assert_eq!(theta_free["connected"], true);
}

#[test]
fn test_verify_passes() {
    gcdims().args(["verify", "--max-b", "8"]).assert().success().code(0);
}

#[test]
fn test_usage_errors_exit_1() {
    gcdims().args(["euler", "--bogus"]).assert().code(1);
    gcdims().args(["euler", "--flavor", "grey"]).assert().code(1);
    gcdims().args(["nothing"]).assert().code(1);
    gcdims().args(["dims", "--backend", "exact", "--primes", "1000003"]).assert().code(1);
    gcdims().args(["verify", "--max-b", "31"]).assert().code(1);
}

#[test]
fn test_resource_limits_exit_3() {
    gcdims().args(["dims", "--flavor", "odd", "--max-b", "4", "--primes", "1000000007"]).assert().code(3);
    gcdims().args(["enumerate", "--v", "9", "--e", "14"]).assert().code(3);
    gcdims().args(["cohomology", "--max-b", "5"]).assert().code(3);
}

#[test]
fn test_exact_and_modular_identical() {
    for cmd in ["dims", "euler"] {
        let exact = stdout(&[cmd, "--max-b", "4", "--backend", "exact"]);
        let modular = stdout(&[cmd, "--max-b", "4", "--backend", "modular"]);
        assert_eq!(exact, modular, "{cmd}");
    }
}

#[test]
fn test_thread_count_does_not_change_output() {
    let one = stdout(&["--threads", "1", "dims", "--max-b", "5"]);
    let four = stdout(&["--threads", "4", "dims", "--max-b", "5"]);
    assert_eq!(one, four);
    let one = stdout(&["cohomology", "--flavor", "all", "--max-b", "3", "--threads", "1"]);
    let four = stdout(&["cohomology", "--flavor", "all", "--max-b", "3", "--threads", "4"]);
    assert_eq!(one, four);
}

#[test]
fn test_enumerate_lists_k4() {
    let out = stdout(&["enumerate", "--flavor", "even*", "--v", "4", "--e", "6", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 1);
    assert_eq!(rows[0]["graph"], "4; 1-2, 1-3, 1-4, 2-3, 2-4, 3-4");
    assert_eq!(rows[0]["automorphisms"], 24);
}

#[test]
fn test_cohomology_and_export() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&["cohomology", "--flavor", "odd", "--max-b", "1", "--export-dir", dir.path().to_str().unwrap()]);
    assert!(out.lines().any(|l| l == "odd,1,2,3,1,0,1"));
    let matrix = std::fs::read_to_string(dir.path().join("d-odd-b1-v2.txt")).unwrap();
    assert_eq!(matrix, "0 1 0\n");
}

#[test]
fn test_out_file_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("dims.csv");
    let args = ["dims", "--flavor", "odd*", "--max-b", "3", "--cache-dir", cache.to_str().unwrap(), "--out", out.to_str().unwrap()];
    gcdims().args(args).assert().success().stdout("");
    let first = std::fs::read_to_string(&out).unwrap();
    let entries: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(entries.len(), 1);
    gcdims().args(args).assert().success();
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
    assert_eq!(first, stdout(&["dims", "--flavor", "odd*", "--max-b", "3"]));
}
