use serde::Serialize;

/// Pretty JSON with object keys sorted and a trailing newline.
///
/// Going through `serde_json::Value` sorts keys because its map is a
/// `BTreeMap` (the `preserve_order` feature must stay off).
pub fn to_canonical_string<T: Serialize + ?Sized>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("in-memory values always serialize");
    let mut out = serde_json::to_string_pretty(&value).expect("Value always serializes");
    out.push('\n');
    out
}
