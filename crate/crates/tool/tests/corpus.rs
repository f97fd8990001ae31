mod common;

use std::fs;

use common::{all_sets, corpus_dir, render};

/// The corpus files match their builders. Run with `KM_BLESS=1` to rewrite them.
#[test]
fn corpus_is_current() {
    let bless = std::env::var_os("KM_BLESS").is_some();
    let mut stale = Vec::new();
    for (set, entries) in all_sets() {
        let dir = corpus_dir().join(set);
        if bless {
            fs::create_dir_all(&dir).unwrap();
        }
        for e in &entries {
            let path = dir.join(format!("{}.drv", e.name));
            let text = render(e);
            if bless {
                fs::write(&path, &text).unwrap();
            } else if fs::read_to_string(&path).ok().as_deref() != Some(text.as_str()) {
                stale.push(path.display().to_string());
            }
        }
    }
    assert!(
        stale.is_empty(),
        "stale corpus files (rerun with KM_BLESS=1): {stale:?}"
    );
}
