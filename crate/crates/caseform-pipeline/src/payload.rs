//! Tolerant extraction of JSON objects from model responses.
//!
//! Models wrap payloads in prose and code fences; scanning for the first
//! parseable `{...}` handles both without special-casing fences.

use serde_json::Value;

/// Every parseable, non-overlapping JSON object in `text`, left to right.
pub fn scan_json_objects(text: &str) -> Vec<Value> {
    let bytes = text.as_bytes();
    let mut found = Vec::new();
    let mut position = 0;
    while position < bytes.len() {
        if bytes[position] != b'{' {
            position += 1;
            continue;
        }
        let mut stream =
            serde_json::Deserializer::from_str(&text[position..]).into_iter::<Value>();
        match stream.next() {
            Some(Ok(value @ Value::Object(_))) => {
                let consumed = stream.byte_offset().max(1);
                found.push(value);
                position += consumed;
            }
            _ => position += 1,
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_object_inside_prose() {
        let objects = scan_json_objects("Sure! Here you go: {\"a\": 1} hope that helps");
        assert_eq!(objects.len(), 1);
        assert_eq!(objects[0]["a"], 1);
    }

    #[test]
    fn fenced_payload_parses_like_unfenced() {
        let fenced = "```json\n{\"answer\": \"TRUE\"}\n```";
        let objects = scan_json_objects(fenced);
        assert_eq!(objects.len(), 1);
        assert_eq!(objects[0]["answer"], "TRUE");
    }

    #[test]
    fn multiple_objects_in_order() {
        let objects = scan_json_objects("{\"first\": 1} and later {\"second\": 2}");
        assert_eq!(objects.len(), 2);
        assert!(objects[0].get("first").is_some());
        assert!(objects[1].get("second").is_some());
    }

    #[test]
    fn prose_only_finds_nothing() {
        assert!(scan_json_objects("I cannot help with that.").is_empty());
        assert!(scan_json_objects("unbalanced { brace").is_empty());
    }

    #[test]
    fn nested_objects_consume_as_one() {
        let objects = scan_json_objects("{\"outer\": {\"inner\": true}}");
        assert_eq!(objects.len(), 1);
    }
}
