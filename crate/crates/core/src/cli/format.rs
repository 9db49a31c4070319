use serde_json::{json, Value};

use crate::base::AlgebraDescriptor;
use crate::free_rb::TensorWord;
use crate::linear::Terms;

/// `{"terms":[{"coeff":"p/q","word":[slot, …]}]}`
pub fn terms_json(alg: &AlgebraDescriptor, terms: &Terms<TensorWord>) -> Value {
    let items: Vec<Value> = terms
        .iter()
        .map(|(w, c)| {
            let word: Vec<String> = w.slots().iter().map(|k| alg.format_key(k)).collect();
            json!({ "coeff": c.to_ratio_string(), "word": word })
        })
        .collect();
    json!({ "terms": items })
}

/// Adds `key: value` to a JSON object.
pub fn with(mut v: Value, key: &str, value: Value) -> Value {
    if let Value::Object(map) = &mut v {
        map.insert(key.to_string(), value);
    }
    v
}
