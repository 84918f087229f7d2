//! Reference configurations whose reports must be byte-identical across runs
//! and equal to the committed files. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;
use std::process::Command;

const CASES: [(&str, &[&str]); 2] = [
    ("hermite-orthonormality", &["--set", "trunc_k=16"]),
    ("neumann-identity", &["--set", "points=25"]),
];

fn report(name: &str, extra: &[&str]) -> Vec<u8> {
    let dir = tempfile::tempdir().unwrap();
    let st = Command::new(env!("CARGO_BIN_EXE_heisenlab"))
        .args(["--threads", "1", "--out"])
        .arg(dir.path())
        .args(["run", name])
        .args(extra)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    std::fs::read(dir.path().join(format!("{name}.json"))).unwrap()
}

#[test]
fn golden_reports_are_reproducible() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, extra) in CASES {
        let a = report(name, extra);
        let b = report(name, extra);
        assert_eq!(a, b, "{name}: two runs differ");
        let path = root.join(format!("{name}.json"));
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&path, &a).unwrap();
        }
        let golden = std::fs::read(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert!(a == golden, "{name}: report differs from {}", path.display());
    }
}
