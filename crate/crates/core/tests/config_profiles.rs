use std::path::PathBuf;

use ccasim::harness::ExperimentConfig;

fn profile(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

#[test]
fn default_profile_spells_out_the_defaults() {
    let cfg = ExperimentConfig::load(&profile("default.conf")).unwrap();
    assert_eq!(cfg, ExperimentConfig::default());
}

#[test]
fn shipped_profiles_are_valid() {
    for entry in std::fs::read_dir(profile("")).unwrap() {
        let path = entry.unwrap().path();
        let cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        cfg.validate().unwrap();
    }
}
