use glcm_core::explain::REGISTRY;

#[test]
fn anchors_are_verbatim() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../paper.md");
    let Ok(text) = std::fs::read_to_string(path) else {
        eprintln!("source text not present; skipping");
        return;
    };
    let missing: Vec<&str> = REGISTRY.iter().filter(|e| !text.contains(e.anchor)).map(|e| e.id).collect();
    assert!(missing.is_empty(), "anchors not found: {missing:?}");
}
