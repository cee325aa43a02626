use std::collections::BTreeSet;

use serde_json::Value;

use shrubkit_web::{analyze_json, bounds_json, random_model_json};

fn ids(v: &Value) -> BTreeSet<u64> {
    v["vertices"].as_array().unwrap().iter().map(|x| x["id"].as_u64().unwrap()).collect()
}

#[test]
fn random_models_are_reproducible() {
    let a = random_model_json(7, 2, 2, 16).unwrap();
    assert_eq!(a, random_model_json(7, 2, 2, 16).unwrap());
    assert_ne!(a, random_model_json(8, 2, 2, 16).unwrap());
    assert!(random_model_json(1, 0, 2, 16).is_err());
    assert!(random_model_json(1, 2, 2, 1000).is_err());
}

#[test]
fn analysis_is_consistent() {
    for seed in 0..10 {
        let model = random_model_json(seed, 2, 2, 16).unwrap();
        let a: Value = serde_json::from_str(&analyze_json(&model, 1).unwrap()).unwrap();
        let (g, h) = (ids(&a["graph"]), ids(&a["kernel"]));
        assert!(h.is_subset(&g) && !h.is_empty());
        for v in a["graph"]["vertices"].as_array().unwrap() {
            assert_eq!(v["kept"].as_bool().unwrap(), h.contains(&v["id"].as_u64().unwrap()));
            for c in ["x", "y"] {
                assert!((0.0..=1.0).contains(&v[c].as_f64().unwrap()));
            }
        }
        // every tree leaf is a graph vertex
        let leaves: BTreeSet<u64> = a["tree"]["nodes"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|n| n["leaf"].as_bool().unwrap())
            .map(|n| n["id"].as_u64().unwrap())
            .collect();
        assert_eq!(leaves, g);
        assert_eq!(g.len(), 16);
        assert_eq!(a["report"]["output_leaves"].as_u64().unwrap() as usize, h.len());
    }
}

#[test]
fn analysis_rejects_bad_models() {
    assert!(analyze_json("{}", 1).is_err());
    let bad = r#"{"d": 2, "r": 1, "signature": [], "tree": {"label": 2, "children": [{"label": 1}]}}"#;
    assert!(analyze_json(bad, 1).unwrap_err().contains("invalid tree model"));
}

#[test]
fn bound_values() {
    let b: Value = serde_json::from_str(&bounds_json(2, 2, 1).unwrap()).unwrap();
    assert_eq!(b["g"], "784");
    assert_eq!(b["h"], "6272");
    assert_eq!(b["constantsConsistent"], false);
    assert!(b["graphKernelBound"].as_str().unwrap().starts_with("overflow"));
    assert!(bounds_json(2, 0, 1).is_err());
}
