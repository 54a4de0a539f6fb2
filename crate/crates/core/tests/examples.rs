use std::path::PathBuf;
use std::process::Command;

fn examples_dir() -> PathBuf {
    // target/<profile>/deps/examples-<hash> → target/<profile>/examples
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().join("examples")
}

#[test]
fn every_example_runs() {
    let names = [
        "period_map",
        "twist_certificate",
        "gap_windows",
        "itineraries_and_bounds",
        "nodal_solutions",
        "moore_nehari",
        "bifurcation_sweep",
        "flow_events",
        "config_runs",
    ];
    let dir = examples_dir();
    for name in names {
        let path = dir.join(name);
        assert!(path.exists(), "example binary {} not built", path.display());
        let out = Command::new(&path).output().unwrap();
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty(), "{name} printed nothing");
    }
}

#[test]
fn moore_nehari_finds_three_positive_solutions() {
    let out = Command::new(examples_dir().join("moore_nehari")).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.contains("[2, 3]: 3 positive solutions")), "{text}");
}
