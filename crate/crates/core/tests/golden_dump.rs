use iesl_core::game::dump::dump_string;
use iesl_core::game::GameSpec;

const KUHN2: &str = include_str!("golden/kuhn-2.dump");

#[test]
fn kuhn2_dump_is_stable() {
    let tree = GameSpec::KUHN_2.build().unwrap();
    let dump = dump_string(&tree);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/kuhn-2.dump"), &dump).unwrap();
        return;
    }
    assert_eq!(dump, KUHN2);
}
