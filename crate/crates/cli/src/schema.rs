//! JSON schemas of the report envelope, one per subcommand.

#[cfg(test)]
pub const SUBCOMMANDS: [&str; 10] = [
    "decompose",
    "decompose-stats",
    "order-check",
    "witte",
    "realize",
    "euler",
    "coboundary",
    "orbits",
    "holder",
    "navas-check",
];

pub fn for_subcommand(name: &str) -> Option<&'static str> {
    Some(match name {
        "decompose" => include_str!("../schemas/decompose.json"),
        "decompose-stats" => include_str!("../schemas/decompose-stats.json"),
        "order-check" => include_str!("../schemas/order-check.json"),
        "witte" => include_str!("../schemas/witte.json"),
        "realize" => include_str!("../schemas/realize.json"),
        "euler" => include_str!("../schemas/euler.json"),
        "coboundary" => include_str!("../schemas/coboundary.json"),
        "orbits" => include_str!("../schemas/orbits.json"),
        "holder" => include_str!("../schemas/holder.json"),
        "navas-check" => include_str!("../schemas/navas-check.json"),
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_schema_parses_and_names_its_subcommand() {
        for name in SUBCOMMANDS {
            let text = for_subcommand(name).unwrap();
            let v: serde_json::Value = serde_json::from_str(text).unwrap();
            assert_eq!(v["properties"]["subcommand"]["const"], name);
        }
        assert!(for_subcommand("nope").is_none());
    }
}
