mod common;

use std::fs;

use common::{fixture_html, fixture_report, golden_dir, report_fixtures};
use guidiff_core::report::render_report;

/// Set to regenerate the checked-in golden files after a verified change.
const UPDATE_ENV: &str = "GUIDIFF_UPDATE_GOLDEN";

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os(UPDATE_ENV).is_some();
    for (name, pair) in report_fixtures() {
        let html = fixture_html(&pair);
        let path = golden_dir().join(format!("{name}.html"));
        if update {
            fs::write(&path, &html).unwrap();
        }
        let golden = fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e} (set {UPDATE_ENV}=1 to create)", path.display()));
        assert_eq!(html, golden, "{name} differs from its golden file");
    }
}

#[test]
fn report_assets_are_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for (_, pair) in report_fixtures() {
        let (r, _) = fixture_report(&pair);
        let pa = render_report(&r, a.path()).unwrap();
        let pb = render_report(&r, b.path()).unwrap();
        let assets = |p: &std::path::Path| {
            let mut v: Vec<_> = fs::read_dir(p.parent().unwrap().join("assets"))
                .unwrap()
                .map(|e| {
                    let e = e.unwrap();
                    (e.file_name(), fs::read(e.path()).unwrap())
                })
                .collect();
            v.sort();
            v
        };
        assert_eq!(assets(&pa), assets(&pb));
        assert_eq!(fs::read(&pa).unwrap(), fs::read(&pb).unwrap());
    }
}
