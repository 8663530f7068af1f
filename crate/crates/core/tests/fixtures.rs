//! Built-in fixtures are mirrored as JSON files with recorded digests.
//! Regenerate with `EVOLUTE_BLESS=1 cargo test -p evolute-core --test fixtures`.

use std::fmt::Write;
use std::path::PathBuf;

use evolute_core::catalog::{builtin, load_curve, save_curve, BUILTIN};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn recorded_digests() -> String {
    let mut out = String::new();
    for name in BUILTIN {
        let _ = writeln!(out, "{}  {name}", builtin(name).unwrap().digest().unwrap());
    }
    out
}

#[test]
fn fixture_files_match_builtins() {
    if std::env::var_os("EVOLUTE_BLESS").is_some() {
        for name in BUILTIN {
            save_curve(dir().join(format!("{name}.json")), &builtin(name).unwrap()).unwrap();
        }
        std::fs::write(dir().join("digests.txt"), recorded_digests()).unwrap();
    }
    for name in BUILTIN {
        let file = load_curve(dir().join(format!("{name}.json"))).unwrap();
        assert_eq!(file, builtin(name).unwrap(), "{name}");
        let text = std::fs::read_to_string(dir().join(format!("{name}.json"))).unwrap();
        assert_eq!(text.trim_end(), file.to_json().unwrap().trim_end(), "{name} is not canonical");
    }
    let digests = std::fs::read_to_string(dir().join("digests.txt")).unwrap();
    assert_eq!(digests, recorded_digests());
}

#[test]
fn every_fixture_file_realizes() {
    for name in BUILTIN {
        let file = load_curve(dir().join(format!("{name}.json"))).unwrap();
        let realized = file.realize(512).unwrap();
        assert!(realized.trace().length() > 0.0);
    }
}
