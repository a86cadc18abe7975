//! Regenerates the bundled fixture files from the programmatic
//! documents in `cdsite_cli::bundled`.
fn main() {
    for (name, doc) in cdsite_cli::bundled::bundled_documents() {
        let text = cdsite_cli::serialize(&doc);
        // canonical-form sanity: parsing and re-serializing is the identity
        let re = cdsite_cli::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(cdsite_cli::serialize(&re), text, "{name}: serializer not idempotent");
        assert_eq!(cdsite_cli::parse(&cdsite_cli::serialize(&re)).unwrap(), re, "{name}: round trip");
        std::fs::write(format!("crates/cli/fixtures/{name}"), &text).unwrap();
        println!("{name}: {} bytes", text.len());
    }
}
